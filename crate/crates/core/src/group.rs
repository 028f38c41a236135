//! The collineation group AΓL(3,4) of AG(3,4) and its action on special cliques
//! and choice vectors.
//!
//! Elements are semilinear maps `p ↦ A·Frob^σ(p) + v`. Translations fix every
//! special clique, so the clique action factors through the 362,880 pairs
//! `(A, σ)`; [`QuotientGroup`] holds that action in monomial form.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bh::{DesignChoice, Universe, NUM_CLIQUES};
use crate::clique::SmallGraph;
use crate::geometry::{Geometry, NUM_CLASSES, NUM_POINTS};
use crate::gf2::Block;
use crate::gf4::{invertible_matrices, Gf4Error, Mat3, Vec3, F4};

/// |AΓL(3,4)| = 2 · 64 · |GL(3,4)|.
pub const GROUP_ORDER: u64 = 23_224_320;
pub const QUOTIENT_ORDER: usize = 362_880;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("collineation does not map special cliques to special cliques")]
    NotCliquePreserving,
    #[error("clique permutation does not respect the class structure")]
    ClassStructure,
    #[error("quotient inconsistent: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Field(#[from] Gf4Error),
}

/// A semilinear affine map of AG(3,4).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "([u8; 9], [u8; 3], u8)", into = "([u8; 9], [u8; 3], u8)")]
pub struct GroupElement {
    pub a: Mat3,
    pub v: Vec3,
    pub sigma: bool,
}

impl TryFrom<([u8; 9], [u8; 3], u8)> for GroupElement {
    type Error = GroupError;
    fn try_from((a, v, s): ([u8; 9], [u8; 3], u8)) -> Result<Self, GroupError> {
        let a = Mat3::from_entry_codes(a)?;
        if !a.is_invertible() {
            return Err(Gf4Error::SingularMatrix.into());
        }
        if s > 1 {
            return Err(GroupError::Inconsistent(format!("sigma bit {s}")));
        }
        Ok(GroupElement { a, v: Vec3::from_codes(v)?, sigma: s == 1 })
    }
}

impl From<GroupElement> for ([u8; 9], [u8; 3], u8) {
    fn from(g: GroupElement) -> Self {
        (g.a.entry_codes(), g.v.codes(), g.sigma as u8)
    }
}

impl GroupElement {
    pub const IDENTITY: GroupElement = GroupElement { a: Mat3::IDENTITY, v: Vec3::ZERO, sigma: false };

    pub fn translation(v: Vec3) -> GroupElement {
        GroupElement { v, ..GroupElement::IDENTITY }
    }

    pub fn linear(a: Mat3, sigma: bool) -> GroupElement {
        GroupElement { a, v: Vec3::ZERO, sigma }
    }

    #[inline]
    pub fn apply(&self, p: Vec3) -> Vec3 {
        let p = if self.sigma { p.frobenius() } else { p };
        self.a.mul_vec(p) + self.v
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn compose(&self, first: &GroupElement) -> GroupElement {
        GroupElement {
            a: self.a * first.a.frobenius_pow(self.sigma),
            v: self.a.mul_vec(if self.sigma { first.v.frobenius() } else { first.v }) + self.v,
            sigma: self.sigma ^ first.sigma,
        }
    }

    pub fn inverse(&self) -> GroupElement {
        let ai = self.a.inverse().expect("group elements are invertible");
        let ai_v = ai.mul_vec(self.v);
        GroupElement {
            a: ai.frobenius_pow(self.sigma),
            v: if self.sigma { ai_v.frobenius() } else { ai_v },
            sigma: self.sigma,
        }
    }

    pub fn point_perm(&self) -> PointPerm {
        let mut images = [0u8; NUM_POINTS];
        for (p, img) in images.iter_mut().enumerate() {
            *img = self.apply(Vec3::from_index(p)).index() as u8;
        }
        PointPerm(images)
    }
}

pub fn compile_point_perm(g: &GroupElement) -> PointPerm {
    g.point_perm()
}

/// A permutation of the 64 points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PointPerm(pub [u8; NUM_POINTS]);

impl PointPerm {
    pub fn identity() -> PointPerm {
        let mut images = [0u8; NUM_POINTS];
        for (i, x) in images.iter_mut().enumerate() {
            *x = i as u8;
        }
        PointPerm(images)
    }

    pub fn transposition(a: usize, b: usize) -> PointPerm {
        let mut p = PointPerm::identity();
        p.0.swap(a, b);
        p
    }

    #[inline]
    pub fn apply_block(&self, b: Block) -> Block {
        Block(b.points().fold(0u64, |m, p| m | 1u64 << self.0[p]))
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &PointPerm) -> PointPerm {
        PointPerm(first.0.map(|p| self.0[p as usize]))
    }

    pub fn is_bijection(&self) -> bool {
        let mut seen = 0u64;
        for &x in &self.0 {
            seen |= 1u64 << x;
        }
        seen == u64::MAX
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x as usize)
    }
}

/// Generators of AΓL(3,4): elementary transvections, one diagonal matrix,
/// one translation, and the Frobenius map.
pub fn generators() -> Vec<GroupElement> {
    let mut gens = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            if i == j {
                continue;
            }
            for lambda in [F4::ONE, F4::OMEGA] {
                let mut a = Mat3::IDENTITY;
                a.0[i][j] = lambda;
                gens.push(GroupElement::linear(a, false));
            }
        }
    }
    gens.push(GroupElement::linear(Mat3::diagonal([F4::OMEGA, F4::ONE, F4::ONE]), false));
    gens.push(GroupElement::translation(Vec3([F4::ZERO, F4::ZERO, F4::ONE])));
    gens.push(GroupElement::linear(Mat3::IDENTITY, true));
    gens
}

/// The 64 translations in point-index order of their vectors.
pub fn translations() -> Vec<GroupElement> {
    (0..NUM_POINTS).map(|i| GroupElement::translation(Vec3::from_index(i))).collect()
}

/// Order of the structurally enumerated group: distinct point permutations of all
/// `(A, σ)` fixing the origin, times the 64 translations.
pub fn group_order() -> u64 {
    let mut seen = HashSet::with_capacity(QUOTIENT_ORDER);
    for a in invertible_matrices() {
        for sigma in [false, true] {
            let perm = GroupElement::linear(a, sigma).point_perm();
            debug_assert_eq!(perm.0[0], 0);
            seen.insert(perm);
        }
    }
    seen.len() as u64 * NUM_POINTS as u64
}

/// Whether `perm` maps the set of weight-24 dual codewords onto itself.
pub fn preserves_code(universe: &Universe, perm: &PointPerm) -> bool {
    universe
        .cliques
        .iter()
        .flat_map(|c| c.blocks.iter())
        .all(|&b| universe.clique_of(perm.apply_block(b)).is_some())
}

pub fn verify_group_preserves_code(universe: &Universe) -> bool {
    generators().iter().all(|g| preserves_code(universe, &g.point_perm()))
}

/// First transposition `(0 q)` of points that does not preserve the code.
pub fn non_preserving_transposition(universe: &Universe) -> Option<PointPerm> {
    (1..NUM_POINTS)
        .map(|q| PointPerm::transposition(0, q))
        .find(|p| !preserves_code(universe, p))
}

/// A permutation of the 63 special cliques (id `3·class + label`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CliquePerm(pub [u8; NUM_CLIQUES]);

impl CliquePerm {
    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x as usize)
    }
}

/// Clique permutation induced by a point permutation, checked on every block.
pub fn clique_perm_full(universe: &Universe, perm: &PointPerm) -> Result<CliquePerm, GroupError> {
    let mut images = [0u8; NUM_CLIQUES];
    for (c, clique) in universe.cliques.iter().enumerate() {
        let targets: HashSet<Option<usize>> = clique
            .blocks
            .iter()
            .map(|&b| universe.clique_of(perm.apply_block(b)))
            .collect();
        match targets.into_iter().collect::<Vec<_>>().as_slice() {
            [Some(t)] => images[c] = *t as u8,
            _ => return Err(GroupError::NotCliquePreserving),
        }
    }
    Ok(CliquePerm(images))
}

/// Clique permutation read off from the image of each clique's first block.
fn clique_perm_fast(universe: &Universe, perm: &PointPerm) -> Result<CliquePerm, GroupError> {
    let mut images = [0u8; NUM_CLIQUES];
    for (c, clique) in universe.cliques.iter().enumerate() {
        let t = universe
            .clique_of(perm.apply_block(clique.blocks[0]))
            .ok_or(GroupError::NotCliquePreserving)?;
        images[c] = t as u8;
    }
    Ok(CliquePerm(images))
}

/// Action on choice vectors: class `c` goes to `class_perm[c]` and its labels
/// are carried by `label_maps[c]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MonomialRep {
    pub class_perm: [u8; NUM_CLASSES],
    pub label_maps: [[u8; 3]; NUM_CLASSES],
}

impl MonomialRep {
    pub fn identity() -> MonomialRep {
        let mut class_perm = [0u8; NUM_CLASSES];
        for (i, c) in class_perm.iter_mut().enumerate() {
            *c = i as u8;
        }
        MonomialRep { class_perm, label_maps: [[0, 1, 2]; NUM_CLASSES] }
    }

    pub fn from_clique_perm(p: &CliquePerm) -> Result<MonomialRep, GroupError> {
        let mut class_perm = [0u8; NUM_CLASSES];
        let mut label_maps = [[0u8; 3]; NUM_CLASSES];
        let mut hit = [false; NUM_CLASSES];
        for c in 0..NUM_CLASSES {
            let target = p.0[3 * c] / 3;
            for l in 0..3 {
                let img = p.0[3 * c + l];
                if img / 3 != target {
                    return Err(GroupError::ClassStructure);
                }
                label_maps[c][l] = img % 3;
            }
            let mut lm = label_maps[c];
            lm.sort_unstable();
            if lm != [0, 1, 2] || std::mem::replace(&mut hit[target as usize], true) {
                return Err(GroupError::ClassStructure);
            }
            class_perm[c] = target;
        }
        Ok(MonomialRep { class_perm, label_maps })
    }

    pub fn to_clique_perm(&self) -> CliquePerm {
        let mut images = [0u8; NUM_CLIQUES];
        for c in 0..NUM_CLASSES {
            for l in 0..3 {
                images[3 * c + l] = 3 * self.class_perm[c] + self.label_maps[c][l];
            }
        }
        CliquePerm(images)
    }

    pub fn apply(&self, choice: &DesignChoice) -> DesignChoice {
        let mut trits = [0u8; NUM_CLASSES];
        for c in 0..NUM_CLASSES {
            trits[self.class_perm[c] as usize] = self.label_maps[c][choice.trits[c] as usize];
        }
        DesignChoice { trits }
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &MonomialRep) -> MonomialRep {
        let mut out = MonomialRep::identity();
        for c in 0..NUM_CLASSES {
            let mid = first.class_perm[c] as usize;
            out.class_perm[c] = self.class_perm[mid];
            for l in 0..3 {
                out.label_maps[c][l] = self.label_maps[mid][first.label_maps[c][l] as usize];
            }
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        *self == MonomialRep::identity()
    }

    /// Cycles of the class permutation, each starting at its smallest class.
    pub fn class_cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = [false; NUM_CLASSES];
        let mut cycles = Vec::new();
        for start in 0..NUM_CLASSES {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut c = start;
            while !seen[c] {
                seen[c] = true;
                cycle.push(c);
                c = self.class_perm[c] as usize;
            }
            cycles.push(cycle);
        }
        cycles
    }

    /// Label map obtained by walking once around `cycle` from its first class.
    pub fn cycle_label_map(&self, cycle: &[usize]) -> [u8; 3] {
        let mut map = [0u8, 1, 2];
        for &c in cycle {
            map = map.map(|l| self.label_maps[c][l as usize]);
        }
        map
    }

    fn pull(&self) -> Pull {
        let mut src = [0u8; NUM_CLASSES];
        let mut lab = [0u8; NUM_CLIQUES];
        for c in 0..NUM_CLASSES {
            let p = self.class_perm[c] as usize;
            src[p] = c as u8;
            lab[3 * p..3 * p + 3].copy_from_slice(&self.label_maps[c]);
        }
        Pull { src, lab }
    }
}

/// Target-indexed form of a monomial rep: `image[p] = lab[3p + choice[src[p]]]`.
#[derive(Debug, Clone, Copy)]
struct Pull {
    src: [u8; NUM_CLASSES],
    lab: [u8; NUM_CLIQUES],
}

impl Pull {
    #[inline]
    fn image_trit(&self, x: &[u8; NUM_CLASSES], p: usize) -> u8 {
        self.lab[3 * p + x[self.src[p] as usize] as usize]
    }
}

/// Result of the scan for collineations acting trivially on the 63 cliques.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelReport {
    pub translations_trivial: bool,
    /// Linear parts `(A, σ)` acting trivially.
    pub linear_kernel: Vec<(Mat3, bool)>,
}

impl KernelReport {
    pub fn order(&self) -> u64 {
        if self.translations_trivial {
            NUM_POINTS as u64 * self.linear_kernel.len() as u64
        } else {
            self.linear_kernel.len() as u64
        }
    }
}

/// AΓL(3,4)/T acting faithfully on cliques and choice vectors.
#[derive(Debug, Clone)]
pub struct QuotientGroup {
    elements: Vec<(Mat3, bool)>,
    reps: Vec<MonomialRep>,
    pulls: Vec<Pull>,
    /// `(mat code << 1) | σ` → element index.
    lookup: Vec<u32>,
    kernel: KernelReport,
    identity: usize,
}

impl QuotientGroup {
    pub fn build(universe: &Universe) -> Result<QuotientGroup, GroupError> {
        let mats = invertible_matrices();
        let mut elements = Vec::with_capacity(QUOTIENT_ORDER);
        let mut reps = Vec::with_capacity(QUOTIENT_ORDER);
        let mut lookup = vec![u32::MAX; 1 << 19];
        let mut first_with: HashMap<CliquePerm, u32> = HashMap::with_capacity(QUOTIENT_ORDER);
        let mut linear_kernel = Vec::new();
        for a in mats {
            for sigma in [false, true] {
                let perm = GroupElement::linear(a, sigma).point_perm();
                let cp = clique_perm_fast(universe, &perm)?;
                if cp.is_identity() {
                    linear_kernel.push((a, sigma));
                }
                let key = ((a.code() << 1) | sigma as u32) as usize;
                let next = elements.len() as u32;
                let idx = *first_with.entry(cp).or_insert(next);
                if idx == next {
                    elements.push((a, sigma));
                    reps.push(MonomialRep::from_clique_perm(&cp)?);
                }
                lookup[key] = idx;
            }
        }
        let scanned = 2 * 181_440;
        if elements.len() * linear_kernel.len() != scanned {
            return Err(GroupError::Inconsistent(format!(
                "{} distinct clique permutations but kernel of size {}",
                elements.len(),
                linear_kernel.len()
            )));
        }
        let translations_trivial = translations()
            .iter()
            .all(|t| clique_perm_full(universe, &t.point_perm()).is_ok_and(|p| p.is_identity()));
        let identity = lookup[(Mat3::IDENTITY.code() << 1) as usize] as usize;
        let pulls = reps.iter().map(MonomialRep::pull).collect();
        Ok(QuotientGroup {
            elements,
            reps,
            pulls,
            lookup,
            kernel: KernelReport { translations_trivial, linear_kernel },
            identity,
        })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn kernel(&self) -> &KernelReport {
        &self.kernel
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    /// Representative collineation of element `i` (zero translation part).
    pub fn element(&self, i: usize) -> GroupElement {
        let (a, sigma) = self.elements[i];
        GroupElement::linear(a, sigma)
    }

    pub fn monomial(&self, i: usize) -> &MonomialRep {
        &self.reps[i]
    }

    pub fn monomials(&self) -> &[MonomialRep] {
        &self.reps
    }

    pub fn index_of(&self, g: &GroupElement) -> Option<usize> {
        let key = ((g.a.code() << 1) | g.sigma as u32) as usize;
        self.lookup.get(key).filter(|&&x| x != u32::MAX).map(|&x| x as usize)
    }

    /// Index of `i ∘ j`.
    pub fn compose(&self, i: usize, j: usize) -> usize {
        let g = self.element(i).compose(&self.element(j));
        self.index_of(&g).expect("closed under composition")
    }

    pub fn inverse(&self, i: usize) -> usize {
        self.index_of(&self.element(i).inverse()).expect("closed under inverses")
    }

    pub fn apply(&self, i: usize, choice: &DesignChoice) -> DesignChoice {
        self.reps[i].apply(choice)
    }

    /// Number of elements fixing `choice`.
    pub fn stabilizer_order(&self, choice: &DesignChoice) -> u64 {
        let x = &choice.trits;
        self.pulls
            .iter()
            .filter(|pull| (0..NUM_CLASSES).all(|p| pull.image_trit(x, p) == x[p]))
            .count() as u64
    }

    /// Elements fixing `choice`.
    pub fn stabilizer(&self, choice: &DesignChoice) -> Vec<usize> {
        let x = &choice.trits;
        (0..self.order())
            .filter(|&i| (0..NUM_CLASSES).all(|p| self.pulls[i].image_trit(x, p) == x[p]))
            .collect()
    }

    /// Orbit element with the smallest base-3 encoding.
    pub fn canonical_choice(&self, choice: &DesignChoice) -> DesignChoice {
        let x = &choice.trits;
        let mut best = *x;
        let mut img = [0u8; NUM_CLASSES];
        'elements: for pull in &self.pulls {
            let mut smaller = false;
            for p in (0..NUM_CLASSES).rev() {
                let t = pull.image_trit(x, p);
                img[p] = t;
                if !smaller {
                    if t > best[p] {
                        continue 'elements;
                    }
                    smaller = t < best[p];
                }
            }
            if smaller {
                best = img;
            }
        }
        DesignChoice { trits: best }
    }

    /// All involutions, ascending by index.
    pub fn involutions(&self) -> Vec<usize> {
        (0..self.order())
            .filter(|&i| i != self.identity && self.compose(i, i) == self.identity)
            .collect()
    }

    pub fn centralizer(&self, t: usize) -> Vec<usize> {
        (0..self.order())
            .filter(|&g| self.compose(g, t) == self.compose(t, g))
            .collect()
    }

    /// Conjugacy classes of involutions, ordered by smallest member.
    pub fn involution_classes(&self) -> Vec<InvolutionClass> {
        let invs = self.involutions();
        let mut assigned: HashSet<usize> = HashSet::new();
        let mut classes = Vec::new();
        for &t in &invs {
            if assigned.contains(&t) {
                continue;
            }
            let mut members: Vec<usize> = (0..self.order())
                .map(|g| self.compose(self.compose(g, t), self.inverse(g)))
                .collect::<HashSet<_>>()
                .into_iter()
                .collect();
            members.sort_unstable();
            assigned.extend(members.iter().copied());
            let centralizer = self.centralizer(t);
            classes.push(InvolutionClass { representative: t, members, centralizer });
        }
        classes
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvolutionClass {
    pub representative: usize,
    pub members: Vec<usize>,
    pub centralizer: Vec<usize>,
}

impl InvolutionClass {
    /// Order of the normalizer in AΓL(3,4) of the order-128 group ⟨T, lift⟩.
    pub fn normalizer_order(&self) -> u64 {
        self.centralizer.len() as u64 * NUM_POINTS as u64
    }
}

pub fn clique_action_kernel(q: &QuotientGroup) -> &KernelReport {
    q.kernel()
}

/// The group generated by the translations and `lift`, as 128 elements when `lift` is
/// an involution modulo T.
pub fn lifted_subgroup(lift: &GroupElement) -> Vec<GroupElement> {
    let t = translations();
    let mut out: Vec<GroupElement> = t.clone();
    out.extend(t.iter().map(|x| lift.compose(x)));
    out
}

/// Orbits of the 1008 clique blocks under a set of collineations closed under
/// composition. Orbits are sorted by length, then by smallest mask.
pub fn codeword_orbits(universe: &Universe, group: &[GroupElement]) -> Vec<Vec<Block>> {
    let perms: Vec<PointPerm> = group.iter().map(GroupElement::point_perm).collect();
    let mut blocks = universe.all_blocks();
    blocks.sort_unstable();
    let mut seen: HashSet<Block> = HashSet::new();
    let mut orbits = Vec::new();
    for &b in &blocks {
        if seen.contains(&b) {
            continue;
        }
        let mut orbit: Vec<Block> = perms
            .iter()
            .map(|p| p.apply_block(b))
            .collect::<HashSet<_>>()
            .into_iter()
            .collect();
        orbit.sort_unstable();
        seen.extend(orbit.iter().copied());
        orbits.push(orbit);
    }
    orbits.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a[0].cmp(&b[0])));
    orbits
}

/// Orbit-length signature `(orbits of length 16, orbits of length 32)`.
pub fn orbit_signature(orbits: &[Vec<Block>]) -> (usize, usize) {
    (
        orbits.iter().filter(|o| o.len() == 16).count(),
        orbits.iter().filter(|o| o.len() == 32).count(),
    )
}

#[derive(Debug, Clone)]
pub struct OrbitAnalysis {
    pub good: Vec<bool>,
    /// Orbit indices of the vertices of `gamma` (the good orbits).
    pub gamma_vertices: Vec<usize>,
    pub gamma: SmallGraph,
    /// Good orbits of length 16 and the induced subgraph on them.
    pub gamma1_vertices: Vec<usize>,
    pub gamma1: SmallGraph,
    /// Good orbits of length 32 and the induced subgraph on them.
    pub gamma2_vertices: Vec<usize>,
    pub gamma2: SmallGraph,
    /// Every good length-16 orbit is compatible with every good length-32 orbit.
    pub short_long_compatible: bool,
}

fn pairwise_ok(a: &[Block], b: &[Block]) -> bool {
    a.iter().all(|x| b.iter().all(|y| x == y || matches!(x.meet(*y), 8 | 12)))
}

pub fn good_and_compatible(orbits: &[Vec<Block>]) -> OrbitAnalysis {
    let good: Vec<bool> = orbits.iter().map(|o| pairwise_ok(o, o)).collect();
    let gamma_vertices: Vec<usize> = (0..orbits.len()).filter(|&i| good[i]).collect();
    let gamma = SmallGraph::from_fn(gamma_vertices.len(), |i, j| {
        pairwise_ok(&orbits[gamma_vertices[i]], &orbits[gamma_vertices[j]])
    });
    let local = |len: usize| -> Vec<usize> {
        (0..gamma_vertices.len())
            .filter(|&i| orbits[gamma_vertices[i]].len() == len)
            .collect()
    };
    let l1 = local(16);
    let l2 = local(32);
    let short_long_compatible = l1.iter().all(|&i| l2.iter().all(|&j| gamma.has_edge(i, j)));
    OrbitAnalysis {
        gamma1: gamma.induced(&l1),
        gamma2: gamma.induced(&l2),
        gamma1_vertices: l1.iter().map(|&i| gamma_vertices[i]).collect(),
        gamma2_vertices: l2.iter().map(|&i| gamma_vertices[i]).collect(),
        good,
        gamma_vertices,
        gamma,
        short_long_compatible,
    }
}

/// Permutation of the 16 line slots of `class` induced by a translation.
pub fn translation_slot_action(geom: &Geometry, class: usize, v: Vec3) -> [u8; 16] {
    let t = GroupElement::translation(v).point_perm();
    let mut out = [0u8; 16];
    for (s, line) in geom.class(class).lines.iter().enumerate() {
        let img = t.apply_block(line.points);
        out[s] = geom.slot_of(class, img.0.trailing_zeros() as usize) as u8;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bh::associated_16_6_2;
    use rand::{Rng, SeedableRng};
    use std::sync::OnceLock;

    fn universe() -> &'static Universe {
        static U: OnceLock<Universe> = OnceLock::new();
        U.get_or_init(|| Universe::build().unwrap())
    }

    fn random_element(rng: &mut impl Rng) -> GroupElement {
        loop {
            let a = Mat3::from_code(rng.gen_range(0..1 << 18));
            if a.is_invertible() {
                return GroupElement { a, v: Vec3::from_index(rng.gen_range(0..64)), sigma: rng.gen() };
            }
        }
    }

    #[test]
    fn point_perm_basics() {
        assert!(GroupElement::IDENTITY.point_perm().is_identity());
        let t = GroupElement::translation(Vec3::from_index(1)).point_perm();
        assert!(t.0.iter().enumerate().all(|(i, &x)| i != x as usize));
        assert!(t.compose(&t).is_identity());
    }

    #[test]
    fn composition_law() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..100 {
            let g = random_element(&mut rng);
            let h = random_element(&mut rng);
            let k = random_element(&mut rng);
            assert_eq!(g.compose(&h).point_perm(), g.point_perm().compose(&h.point_perm()));
            assert_eq!(g.compose(&h).compose(&k), g.compose(&h.compose(&k)));
            assert_eq!(g.compose(&g.inverse()), GroupElement::IDENTITY);
            assert_eq!(g.inverse().compose(&g), GroupElement::IDENTITY);
            assert!(g.point_perm().is_bijection());
        }
    }

    #[test]
    fn generators_preserve_code() {
        let u = universe();
        assert!(verify_group_preserves_code(u));
        for g in generators() {
            clique_perm_full(u, &g.point_perm()).unwrap();
        }
        let witness = non_preserving_transposition(u).expect("a transposition breaks the code");
        assert!(!preserves_code(u, &witness));
    }

    #[test]
    fn translations_fix_every_clique() {
        let u = universe();
        for t in translations() {
            assert!(clique_perm_full(u, &t.point_perm()).unwrap().is_identity());
        }
    }

    #[test]
    fn slot_designs_admit_transitive_translation_group() {
        let u = universe();
        for clique in &u.cliques {
            let d = associated_16_6_2(&u.geometry, clique).unwrap();
            let set: HashSet<u16> = d.blocks.iter().copied().collect();
            let mut orbit_of_first = HashSet::new();
            for v in 0..64 {
                let perm = translation_slot_action(&u.geometry, clique.class_id, Vec3::from_index(v));
                let map = |s: u16| (0..16).filter(|i| (s >> i) & 1 == 1).fold(0u16, |m, i| m | 1 << perm[i]);
                for &b in &d.blocks {
                    assert!(set.contains(&map(b)));
                }
                orbit_of_first.insert(map(d.blocks[0]));
            }
            assert_eq!(orbit_of_first.len(), 16);
        }
    }

    #[test]
    fn monomial_round_trip_and_homomorphism() {
        let u = universe();
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        for _ in 0..20 {
            let g = random_element(&mut rng);
            let h = random_element(&mut rng);
            let mg = MonomialRep::from_clique_perm(&clique_perm_full(u, &g.point_perm()).unwrap()).unwrap();
            let mh = MonomialRep::from_clique_perm(&clique_perm_full(u, &h.point_perm()).unwrap()).unwrap();
            let mgh = MonomialRep::from_clique_perm(&clique_perm_full(u, &g.compose(&h).point_perm()).unwrap())
                .unwrap();
            assert_eq!(mg.compose(&mh), mgh);
            assert_eq!(MonomialRep::from_clique_perm(&mg.to_clique_perm()).unwrap(), mg);
        }
    }

    #[test]
    fn clique_perm_must_respect_classes() {
        let mut p = MonomialRep::identity().to_clique_perm();
        p.0.swap(2, 3);
        assert_eq!(MonomialRep::from_clique_perm(&p), Err(GroupError::ClassStructure));
    }

    #[test]
    fn group_element_json() {
        let g = GroupElement { a: Mat3::IDENTITY, v: Vec3::from_index(6), sigma: true };
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(s, "[[1,0,0,0,1,0,0,0,1],[0,1,2],1]");
        assert_eq!(serde_json::from_str::<GroupElement>(&s).unwrap(), g);
        assert!(serde_json::from_str::<GroupElement>("[[0,0,0,0,0,0,0,0,0],[0,0,0],0]").is_err());
    }

    #[test]
    fn lifted_subgroup_is_closed() {
        let lift = GroupElement::linear(Mat3::IDENTITY, true);
        let h = lifted_subgroup(&lift);
        let perms: HashSet<PointPerm> = h.iter().map(GroupElement::point_perm).collect();
        assert_eq!(perms.len(), 128);
        for a in h.iter().step_by(5) {
            for b in h.iter().step_by(3) {
                assert!(perms.contains(&a.compose(b).point_perm()));
            }
        }
    }
}
