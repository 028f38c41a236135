//! Design invariants and block graphs.

use std::fmt;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::bh::{incidence_rank, BhDesign, DesignChoice};
use crate::clique::{iter_bits, SmallGraph};
use crate::geometry::{LINES_PER_CLASS, NUM_CLASSES};

pub const SRG_PARAMS: SrgParams = SrgParams { n: 336, k: 80, lambda: 28, mu: 16 };

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("blocks {i} and {j} meet in {size} points")]
    UnexpectedIntersection { i: usize, j: usize, size: u32 },
}

pub fn two_rank(design: &BhDesign) -> usize {
    incidence_rank(design)
}

#[derive(Debug, Clone)]
pub struct BlockGraph {
    pub graph: SmallGraph,
    pub source: DesignChoice,
}

/// Blocks adjacent iff they share 12 points.
pub fn block_graph(design: &BhDesign) -> Result<BlockGraph, AnalysisError> {
    let b = &design.blocks;
    let mut graph = SmallGraph::new(b.len());
    for i in 0..b.len() {
        for j in i + 1..b.len() {
            match b[i].meet(b[j]) {
                12 => graph.add_edge(i, j),
                8 => {}
                size => return Err(AnalysisError::UnexpectedIntersection { i, j, size }),
            }
        }
    }
    Ok(BlockGraph { graph, source: design.choice })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SrgParams {
    pub n: usize,
    pub k: usize,
    pub lambda: usize,
    pub mu: usize,
}

impl SrgParams {
    /// k(k − λ − 1) = (n − k − 1)μ.
    pub fn feasible(&self) -> bool {
        self.k * (self.k - self.lambda - 1) == (self.n - self.k - 1) * self.mu
    }
}

impl fmt::Display for SrgParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.n, self.k, self.lambda, self.mu)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SrgViolation {
    #[error("graph is empty")]
    Empty,
    #[error("vertex {vertex} has degree {degree}, vertex 0 has {expected}")]
    Irregular { vertex: usize, degree: usize, expected: usize },
    #[error("vertices {a},{b} (adjacent: {adjacent}) have {common} common neighbours, expected {expected}")]
    CommonNeighbors { a: usize, b: usize, adjacent: bool, common: usize, expected: usize },
}

/// Verifies strong regularity; the λ and μ values are taken from the first
/// adjacent and first non-adjacent pair.
pub fn srg_check(g: &SmallGraph) -> Result<SrgParams, SrgViolation> {
    let n = g.order();
    if n == 0 {
        return Err(SrgViolation::Empty);
    }
    let k = g.degree(0);
    for v in 1..n {
        let d = g.degree(v);
        if d != k {
            return Err(SrgViolation::Irregular { vertex: v, degree: d, expected: k });
        }
    }
    let mut lambda = None;
    let mut mu = None;
    for a in 0..n {
        for b in a + 1..n {
            let adjacent = g.has_edge(a, b);
            let common = g.common_neighbors(a, b);
            let slot = if adjacent { &mut lambda } else { &mut mu };
            let expected = *slot.get_or_insert(common);
            if common != expected {
                return Err(SrgViolation::CommonNeighbors { a, b, adjacent, common, expected });
            }
        }
    }
    Ok(SrgParams { n, k, lambda: lambda.unwrap_or(0), mu: mu.unwrap_or(0) })
}

/// The 21 groups of 16 consecutive blocks (one per parallel class) are cocliques.
pub fn has_class_coclique_partition(g: &BlockGraph) -> bool {
    g.graph.order() == NUM_CLASSES * LINES_PER_CLASS
        && (0..NUM_CLASSES).all(|c| {
            let lo = c * LINES_PER_CLASS;
            (lo..lo + LINES_PER_CLASS).all(|i| (i + 1..lo + LINES_PER_CLASS).all(|j| !g.graph.has_edge(i, j)))
        })
}

/// SHA-256 of an isomorphism-invariant vertex profile.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fingerprint(pub [u8; 32]);

impl Fingerprint {
    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl fmt::Debug for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fingerprint({})", &self.to_hex()[..16])
    }
}

/// Per vertex v: the sorted multiset over neighbours a of the number of edges
/// inside N(v) ∩ N(a) (K4s through the edge va), and the number of K4s through v.
/// The sorted list of vertex profiles is hashed.
pub fn vertex_profiles(g: &SmallGraph) -> Vec<(Vec<u32>, u32)> {
    let n = g.order();
    let words = g.words();
    let mut profiles = Vec::with_capacity(n);
    let mut common = vec![0u64; words];
    for v in 0..n {
        let nv = g.row(v);
        let mut per_edge = Vec::with_capacity(g.degree(v));
        let mut twice_triangles = 0u32;
        for a in iter_bits(nv) {
            for (c, (x, y)) in common.iter_mut().zip(nv.iter().zip(g.row(a))) {
                *c = x & y;
            }
            // Σ over b ∈ N(v) ∩ N(a) of |N(v) ∩ N(a) ∩ N(b)| = 2 · edges in N(v) ∩ N(a)
            let mut s = 0u32;
            for b in iter_bits(&common) {
                s += common
                    .iter()
                    .zip(g.row(b))
                    .map(|(x, y)| (x & y).count_ones())
                    .sum::<u32>();
            }
            per_edge.push(s / 2);
            twice_triangles += s / 2;
        }
        per_edge.sort_unstable();
        // each K4 through v is counted once per each of its 3 edges at v
        profiles.push((per_edge, twice_triangles / 3));
    }
    profiles.sort_unstable();
    profiles
}

pub fn fingerprint(g: &SmallGraph) -> Fingerprint {
    let profiles = vertex_profiles(g);
    let mut hasher = Sha256::new();
    hasher.update((g.order() as u32).to_le_bytes());
    for (edges, k4) in &profiles {
        hasher.update((edges.len() as u32).to_le_bytes());
        for e in edges {
            hasher.update(e.to_le_bytes());
        }
        hasher.update(k4.to_le_bytes());
    }
    Fingerprint(hasher.finalize().into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bh::Universe;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;

    #[test]
    fn feasibility_identity() {
        assert!(SRG_PARAMS.feasible());
        assert_eq!(80 * 51, 4080);
        assert_eq!(255 * 16, 4080);
    }

    #[test]
    fn petersen_is_srg() {
        let outer = |i: usize| i;
        let inner = |i: usize| 5 + i;
        let mut g = SmallGraph::new(10);
        for i in 0..5 {
            g.add_edge(outer(i), outer((i + 1) % 5));
            g.add_edge(inner(i), inner((i + 2) % 5));
            g.add_edge(outer(i), inner(i));
        }
        assert_eq!(srg_check(&g), Ok(SrgParams { n: 10, k: 3, lambda: 0, mu: 1 }));
        // no triangles, so every profile is all zeros
        assert!(vertex_profiles(&g).iter().all(|(e, k)| e.iter().all(|&x| x == 0) && *k == 0));
    }

    #[test]
    fn k4_counts_on_complete_graph() {
        let g = SmallGraph::complete(6);
        // K6: K4s through a vertex = C(5,3) = 10; through an edge = C(4,2) = 6
        let p = vertex_profiles(&g);
        assert!(p.iter().all(|(e, k)| *k == 10 && e.iter().all(|&x| x == 6)));
    }

    #[test]
    fn block_graph_of_zero_design() {
        let u = Universe::build().unwrap();
        let d = u.assemble_design(DesignChoice::ZERO);
        let bg = block_graph(&d).unwrap();
        assert!((0..336).all(|v| bg.graph.degree(v) == 80));
        assert!((0..336).all(|v| 335 - bg.graph.degree(v) == 255));
        assert_eq!(srg_check(&bg.graph), Ok(SRG_PARAMS));
        assert!(has_class_coclique_partition(&bg));
        assert!(two_rank(&d) <= 13);

        let mut broken = bg.graph.clone();
        broken.toggle_edge(0, 1);
        assert!(srg_check(&broken).is_err());

        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        let fp = fingerprint(&bg.graph);
        let mut perm: Vec<usize> = (0..336).collect();
        for _ in 0..3 {
            perm.shuffle(&mut rng);
            assert_eq!(fingerprint(&bg.graph.relabel(&perm)), fp);
        }
    }

    #[test]
    fn bad_intersection_is_reported() {
        let u = Universe::build().unwrap();
        let mut d = u.assemble_design(DesignChoice::ZERO);
        d.blocks[1] = d.blocks[0];
        assert!(matches!(
            block_graph(&d),
            Err(AnalysisError::UnexpectedIntersection { i: 0, j: 1, size: 24 })
        ));
    }
}
