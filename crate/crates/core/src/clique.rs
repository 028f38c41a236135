//! Clique enumeration on small dense graphs stored as bitset rows.

use std::fmt::Write as _;

/// Undirected simple graph on at most a few thousand vertices.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SmallGraph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
}

impl SmallGraph {
    pub fn new(n: usize) -> SmallGraph {
        let words = n.div_ceil(64).max(1);
        SmallGraph { n, words, rows: vec![0; n * words] }
    }

    /// Builds the graph with an edge {i, j} wherever `adjacent(i, j)` holds for i < j.
    pub fn from_fn(n: usize, mut adjacent: impl FnMut(usize, usize) -> bool) -> SmallGraph {
        let mut g = SmallGraph::new(n);
        for i in 0..n {
            for j in i + 1..n {
                if adjacent(i, j) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    pub fn complete(n: usize) -> SmallGraph {
        SmallGraph::from_fn(n, |_, _| true)
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn words(&self) -> usize {
        self.words
    }

    pub fn add_edge(&mut self, i: usize, j: usize) {
        assert!(i != j && i < self.n && j < self.n, "bad edge ({i}, {j})");
        self.rows[i * self.words + j / 64] |= 1 << (j % 64);
        self.rows[j * self.words + i / 64] |= 1 << (i % 64);
    }

    pub fn toggle_edge(&mut self, i: usize, j: usize) {
        assert!(i != j && i < self.n && j < self.n, "bad edge ({i}, {j})");
        self.rows[i * self.words + j / 64] ^= 1 << (j % 64);
        self.rows[j * self.words + i / 64] ^= 1 << (i % 64);
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        (self.rows[i * self.words + j / 64] >> (j % 64)) & 1 == 1
    }

    /// Neighbourhood of `v` as a bitset row.
    #[inline]
    pub fn row(&self, v: usize) -> &[u64] {
        &self.rows[v * self.words..(v + 1) * self.words]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        iter_bits(self.row(v))
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).sum::<usize>() / 2
    }

    pub fn common_neighbors(&self, a: usize, b: usize) -> usize {
        self.row(a)
            .iter()
            .zip(self.row(b))
            .map(|(x, y)| (x & y).count_ones() as usize)
            .sum()
    }

    /// Vertex-induced subgraph; vertices are renumbered in the given order.
    pub fn induced(&self, vertices: &[usize]) -> SmallGraph {
        SmallGraph::from_fn(vertices.len(), |i, j| self.has_edge(vertices[i], vertices[j]))
    }

    /// Relabels vertices: vertex `v` becomes `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> SmallGraph {
        assert_eq!(perm.len(), self.n);
        let mut g = SmallGraph::new(self.n);
        for i in 0..self.n {
            for j in self.neighbors(i).filter(|&j| j > i) {
                g.add_edge(perm[i], perm[j]);
            }
        }
        g
    }

    /// DIMACS edge format, 1-based vertices.
    pub fn to_dimacs(&self, comment: &str) -> String {
        let mut out = String::new();
        for line in comment.lines() {
            let _ = writeln!(out, "c {line}");
        }
        let _ = writeln!(out, "p edge {} {}", self.n, self.edge_count());
        for i in 0..self.n {
            for j in self.neighbors(i).filter(|&j| j > i) {
                let _ = writeln!(out, "e {} {}", i + 1, j + 1);
            }
        }
        out
    }

    /// All maximal cliques, sorted by size descending then lexicographically.
    pub fn maximal_cliques(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        if self.n == 0 {
            return out;
        }
        let mut p = vec![0u64; self.words];
        for v in 0..self.n {
            p[v / 64] |= 1 << (v % 64);
        }
        let x = vec![0u64; self.words];
        let mut r = Vec::new();
        self.bron_kerbosch(&mut r, p, x, &mut out);
        sort_cliques(&mut out);
        out
    }

    fn bron_kerbosch(&self, r: &mut Vec<usize>, mut p: Vec<u64>, mut x: Vec<u64>, out: &mut Vec<Vec<usize>>) {
        if is_empty(&p) {
            if is_empty(&x) {
                let mut c = r.clone();
                c.sort_unstable();
                out.push(c);
            }
            return;
        }
        // pivot: vertex of P ∪ X with most neighbours in P, lowest index on ties
        let mut pivot = usize::MAX;
        let mut best = 0usize;
        for w in 0..self.words {
            let mut bits = p[w] | x[w];
            while bits != 0 {
                let u = w * 64 + bits.trailing_zeros() as usize;
                bits &= bits - 1;
                let d = and_count(self.row(u), &p);
                if pivot == usize::MAX || d > best {
                    pivot = u;
                    best = d;
                }
            }
        }
        let prow = self.row(pivot);
        let candidates: Vec<usize> = (0..self.words)
            .flat_map(|w| {
                let bits = p[w] & !prow[w];
                BitIter { word_index: w, bits }
            })
            .collect();
        for v in candidates {
            let row = self.row(v);
            let np: Vec<u64> = p.iter().zip(row).map(|(a, b)| a & b).collect();
            let nx: Vec<u64> = x.iter().zip(row).map(|(a, b)| a & b).collect();
            r.push(v);
            self.bron_kerbosch(r, np, nx, out);
            r.pop();
            p[v / 64] &= !(1 << (v % 64));
            x[v / 64] |= 1 << (v % 64);
        }
    }

    pub fn max_clique_size(&self) -> usize {
        self.maximal_cliques().first().map_or(0, Vec::len)
    }

    /// All cliques with exactly `k` vertices (maximal or not), sorted lexicographically.
    pub fn cliques_of_size(&self, k: usize) -> Vec<Vec<usize>> {
        assert!(k >= 1, "clique size must be positive");
        let mut out = Vec::new();
        let mut all = vec![0u64; self.words];
        for v in 0..self.n {
            all[v / 64] |= 1 << (v % 64);
        }
        let mut current = Vec::with_capacity(k);
        self.extend_ordered(&mut current, &all, k, &mut out);
        out
    }

    fn extend_ordered(&self, current: &mut Vec<usize>, candidates: &[u64], k: usize, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        let need = k - current.len();
        let cands: Vec<usize> = iter_bits(candidates).collect();
        if cands.len() < need {
            return;
        }
        for (idx, &v) in cands.iter().enumerate() {
            if cands.len() - idx < need {
                break;
            }
            // later candidates adjacent to v
            let row = self.row(v);
            let mut next: Vec<u64> = candidates.iter().zip(row).map(|(a, b)| a & b).collect();
            for (w, word) in next.iter_mut().enumerate() {
                let lo = w * 64;
                if v + 1 > lo {
                    let cut = (v + 1 - lo).min(64);
                    *word &= if cut == 64 { 0 } else { !0u64 << cut };
                }
            }
            current.push(v);
            self.extend_ordered(current, &next, k, out);
            current.pop();
        }
    }

    pub fn is_clique(&self, vertices: &[usize]) -> bool {
        vertices
            .iter()
            .enumerate()
            .all(|(i, &a)| vertices[i + 1..].iter().all(|&b| a != b && self.has_edge(a, b)))
    }
}

fn sort_cliques(cliques: &mut [Vec<usize>]) {
    cliques.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
}

#[inline]
fn is_empty(set: &[u64]) -> bool {
    set.iter().all(|&w| w == 0)
}

#[inline]
fn and_count(a: &[u64], b: &[u64]) -> usize {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones() as usize).sum()
}

struct BitIter {
    word_index: usize,
    bits: u64,
}

impl Iterator for BitIter {
    type Item = usize;
    fn next(&mut self) -> Option<usize> {
        if self.bits == 0 {
            return None;
        }
        let b = self.bits.trailing_zeros() as usize;
        self.bits &= self.bits - 1;
        Some(self.word_index * 64 + b)
    }
}

pub(crate) fn iter_bits(set: &[u64]) -> impl Iterator<Item = usize> + '_ {
    set.iter()
        .enumerate()
        .flat_map(|(w, &bits)| BitIter { word_index: w, bits })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Subset enumeration, usable up to about 20 vertices.
    fn naive_cliques(g: &SmallGraph) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
        let n = g.order();
        let mut all = Vec::new();
        for mask in 1u32..(1 << n) {
            let vs: Vec<usize> = (0..n).filter(|i| (mask >> i) & 1 == 1).collect();
            if g.is_clique(&vs) {
                all.push(vs);
            }
        }
        let maximal: Vec<Vec<usize>> = all
            .iter()
            .filter(|c| (0..n).all(|v| c.contains(&v) || c.iter().any(|&u| !g.has_edge(u, v))))
            .cloned()
            .collect();
        (all, maximal)
    }

    #[test]
    fn empty_graph_singletons() {
        let g = SmallGraph::new(5);
        assert_eq!(g.maximal_cliques(), (0..5).map(|v| vec![v]).collect::<Vec<_>>());
        assert_eq!(g.cliques_of_size(1).len(), 5);
    }

    #[test]
    fn complete_graph_single_clique() {
        let g = SmallGraph::complete(7);
        assert_eq!(g.maximal_cliques(), vec![(0..7).collect::<Vec<_>>()]);
        assert_eq!(g.cliques_of_size(3).len(), 35);
        assert_eq!(g.cliques_of_size(7).len(), 1);
        assert!(g.cliques_of_size(8).is_empty());
    }

    #[test]
    fn multiword_rows() {
        // two disjoint K70s joined so that cliques straddle word boundaries
        let g = SmallGraph::from_fn(140, |i, j| (i < 70) == (j < 70));
        let cl = g.maximal_cliques();
        assert_eq!(cl.len(), 2);
        assert_eq!(cl[0], (0..70).collect::<Vec<_>>());
        assert_eq!(g.cliques_of_size(2).len(), 2 * 70 * 69 / 2);
    }

    #[test]
    fn dimacs_format() {
        let g = SmallGraph::from_fn(3, |i, j| i + 1 == j);
        let d = g.to_dimacs("path");
        assert_eq!(d, "c path\np edge 3 2\ne 1 2\ne 2 3\n");
    }

    #[test]
    fn deterministic() {
        let g = SmallGraph::from_fn(30, |i, j| (i * 7 + j * 13) % 5 != 0);
        assert_eq!(g.maximal_cliques(), g.maximal_cliques());
    }

    proptest! {
        #[test]
        fn matches_subset_oracle(n in 1usize..13, seed in any::<u64>()) {
            let mut state = seed | 1;
            let g = SmallGraph::from_fn(n, |_, _| {
                state ^= state << 13; state ^= state >> 7; state ^= state << 17;
                state % 3 != 0
            });
            let (all, mut maximal) = naive_cliques(&g);
            sort_cliques(&mut maximal);
            let found = g.maximal_cliques();
            prop_assert_eq!(&found, &maximal);
            for c in &found {
                prop_assert!(g.is_clique(c));
            }
            for k in 1..=n {
                let mut expect: Vec<Vec<usize>> = all.iter().filter(|c| c.len() == k).cloned().collect();
                expect.sort();
                prop_assert_eq!(g.cliques_of_size(k), expect);
            }
        }
    }
}
