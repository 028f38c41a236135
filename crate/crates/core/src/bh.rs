//! Blokhuis–Haemers designs for q = 4: even line-unions, special cliques,
//! design assembly from a choice of one special clique per parallel class,
//! and verification of the design axioms.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::clique::SmallGraph;
use crate::geometry::{Geometry, ParallelClass, LINES_PER_CLASS, NUM_CLASSES, NUM_POINTS};
use crate::gf2::{nullspace, rank, BinaryCode, Block};

pub const BLOCK_SIZE: u32 = 24;
pub const NUM_BLOCKS: usize = NUM_CLASSES * LINES_PER_CLASS;
pub const NUM_CLIQUES: usize = 3 * NUM_CLASSES;
pub const LAMBDA: u32 = 46;
pub const REPLICATION: u32 = 126;
/// 3^21.
pub const TOTAL_DESIGNS: u64 = 10_460_353_203;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BhError {
    #[error("class {class}: {detail}")]
    StructureViolation { class: usize, detail: String },
    #[error("clique {clique}: associated structure is not a symmetric 2-(16,6,2) design: {detail}")]
    NotA2Design { clique: usize, detail: String },
    #[error("invalid choice vector: {0}")]
    InvalidChoice(String),
}

/// One of the three disjoint 16-cliques of even unions attached to a parallel class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecialClique {
    pub class_id: usize,
    pub label: u8,
    /// 16 blocks of weight 24 in ascending mask order.
    pub blocks: Vec<Block>,
}

impl SpecialClique {
    /// Flattened id `3 * class + label`.
    pub fn id(&self) -> usize {
        3 * self.class_id + self.label as usize
    }
}

/// All unions of six lines of `class` meeting every line of `geom` evenly, ascending by mask.
pub fn even_unions(geom: &Geometry, class: &ParallelClass) -> Vec<Block> {
    let lines = geom.line_blocks();
    let mut out = Vec::new();
    for sel in 0u32..1 << LINES_PER_CLASS {
        if sel.count_ones() != 6 {
            continue;
        }
        let block = (0..LINES_PER_CLASS)
            .filter(|i| (sel >> i) & 1 == 1)
            .fold(Block::EMPTY, |b, i| b.union(class.lines[i].points));
        if lines.iter().all(|l| l.meet(block) % 2 == 0) {
            out.push(block);
        }
    }
    out.sort_unstable();
    out
}

/// Splits the even unions of one class into its three special cliques.
pub fn special_cliques(geom: &Geometry, class: &ParallelClass) -> Result<[SpecialClique; 3], BhError> {
    let unions = even_unions(geom, class);
    let violation = |detail: String| BhError::StructureViolation { class: class.direction, detail };
    if unions.len() != 48 {
        return Err(violation(format!("{} even unions, expected 48", unions.len())));
    }
    let gamma = SmallGraph::from_fn(unions.len(), |i, j| matches!(unions[i].meet(unions[j]), 8 | 12));
    let top: Vec<Vec<usize>> = gamma
        .maximal_cliques()
        .into_iter()
        .filter(|c| c.len() == 16)
        .collect();
    if top.len() != 3 || gamma.max_clique_size() != 16 {
        return Err(violation(format!(
            "{} cliques of size 16, maximum clique size {}",
            top.len(),
            gamma.max_clique_size()
        )));
    }
    let mut seen = vec![false; unions.len()];
    for v in top.iter().flatten() {
        if std::mem::replace(&mut seen[*v], true) {
            return Err(violation("16-cliques are not disjoint".into()));
        }
    }
    if !seen.iter().all(|&s| s) {
        return Err(violation("16-cliques do not cover the 48 unions".into()));
    }
    let mut groups: Vec<Vec<Block>> = top
        .iter()
        .map(|c| {
            let mut b: Vec<Block> = c.iter().map(|&i| unions[i]).collect();
            b.sort_unstable();
            b
        })
        .collect();
    groups.sort_by_key(|g| g[0]);
    let mut it = groups.into_iter().enumerate().map(|(label, blocks)| SpecialClique {
        class_id: class.direction,
        label: label as u8,
        blocks,
    });
    Ok([it.next().unwrap(), it.next().unwrap(), it.next().unwrap()])
}

/// Incidence structure on the 16 line slots of a class induced by a clique:
/// each clique block becomes the set of slots whose lines it contains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlotDesign {
    pub class_id: usize,
    /// 16-bit slot masks, one per clique block, in clique block order.
    pub blocks: Vec<u16>,
}

pub fn associated_16_6_2(geom: &Geometry, clique: &SpecialClique) -> Result<SlotDesign, BhError> {
    let err = |detail: String| BhError::NotA2Design { clique: clique.id(), detail };
    let blocks: Vec<u16> = clique.blocks.iter().map(|&b| geom.slots_in(clique.class_id, b)).collect();
    if blocks.len() != 16 {
        return Err(err(format!("{} blocks", blocks.len())));
    }
    for (b, &s) in clique.blocks.iter().zip(&blocks) {
        if s.count_ones() != 6 || s.count_ones() * 4 != b.weight() {
            return Err(err(format!("block {b:?} is not a union of 6 class lines")));
        }
    }
    for x in 0..16 {
        for y in x + 1..16 {
            let pair = (1u16 << x) | (1u16 << y);
            let count = blocks.iter().filter(|&&s| s & pair == pair).count();
            if count != 2 {
                return Err(err(format!("slots {x},{y} lie in {count} blocks")));
            }
        }
    }
    Ok(SlotDesign { class_id: clique.class_id, blocks })
}

/// Selects one special clique label per parallel class.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u8>", into = "Vec<u8>")]
pub struct DesignChoice {
    pub trits: [u8; NUM_CLASSES],
}

impl DesignChoice {
    pub const ZERO: DesignChoice = DesignChoice { trits: [0; NUM_CLASSES] };

    pub fn new(trits: [u8; NUM_CLASSES]) -> Result<DesignChoice, BhError> {
        if let Some(t) = trits.iter().find(|&&t| t > 2) {
            return Err(BhError::InvalidChoice(format!("trit {t} out of range")));
        }
        Ok(DesignChoice { trits })
    }

    pub fn from_slice(trits: &[u8]) -> Result<DesignChoice, BhError> {
        let arr: [u8; NUM_CLASSES] = trits
            .try_into()
            .map_err(|_| BhError::InvalidChoice(format!("expected 21 trits, got {}", trits.len())))?;
        DesignChoice::new(arr)
    }

    /// Base-3 value, class 0 least significant.
    pub fn index(&self) -> u64 {
        self.trits.iter().rev().fold(0u64, |acc, &t| acc * 3 + t as u64)
    }

    pub fn from_index(mut index: u64) -> Result<DesignChoice, BhError> {
        if index >= TOTAL_DESIGNS {
            return Err(BhError::InvalidChoice(format!("index {index} ≥ 3^21")));
        }
        let mut trits = [0u8; NUM_CLASSES];
        for t in trits.iter_mut() {
            *t = (index % 3) as u8;
            index /= 3;
        }
        Ok(DesignChoice { trits })
    }

    /// Clique ids `3c + trits[c]`.
    pub fn cliques(&self) -> impl Iterator<Item = usize> + '_ {
        self.trits.iter().enumerate().map(|(c, &t)| 3 * c + t as usize)
    }
}

impl TryFrom<Vec<u8>> for DesignChoice {
    type Error = BhError;
    fn try_from(v: Vec<u8>) -> Result<Self, BhError> {
        DesignChoice::from_slice(&v)
    }
}

impl From<DesignChoice> for Vec<u8> {
    fn from(c: DesignChoice) -> Vec<u8> {
        c.trits.to_vec()
    }
}

impl fmt::Debug for DesignChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DesignChoice({self})")
    }
}

impl fmt::Display for DesignChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in &self.trits {
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl std::str::FromStr for DesignChoice {
    type Err = BhError;
    /// Accepts 21 digits, optionally separated by commas or whitespace.
    fn from_str(s: &str) -> Result<Self, BhError> {
        let digits: Vec<u8> = s
            .chars()
            .filter(|c| !c.is_whitespace() && *c != ',' && *c != '[' && *c != ']')
            .map(|c| {
                c.to_digit(3)
                    .map(|d| d as u8)
                    .ok_or_else(|| BhError::InvalidChoice(format!("unexpected character {c:?}")))
            })
            .collect::<Result<_, _>>()?;
        DesignChoice::from_slice(&digits)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BhDesign {
    pub choice: DesignChoice,
    /// 336 blocks, 16 per class in class order.
    pub blocks: Vec<Block>,
}

/// Everything the rest of the pipeline needs about AG(3,4) and its cliques.
#[derive(Debug, Clone)]
pub struct Universe {
    pub geometry: Geometry,
    pub line_code: BinaryCode,
    pub dual_code: BinaryCode,
    /// 63 special cliques indexed by `3 * class + label`.
    pub cliques: Vec<SpecialClique>,
    clique_of: HashMap<u64, u8>,
}

impl Universe {
    pub fn build() -> Result<Universe, BhError> {
        let geometry = Geometry::new();
        let lines = geometry.line_blocks();
        let line_code = BinaryCode::span(&lines);
        let dual_code = nullspace(&lines);
        let mut cliques = Vec::with_capacity(NUM_CLIQUES);
        for class in geometry.classes() {
            cliques.extend(special_cliques(&geometry, class)?);
        }
        Ok(Universe::from_parts(geometry, line_code, dual_code, cliques))
    }

    /// Assembles a universe from possibly altered clique tables (used for fault injection).
    pub fn from_parts(
        geometry: Geometry,
        line_code: BinaryCode,
        dual_code: BinaryCode,
        cliques: Vec<SpecialClique>,
    ) -> Universe {
        let mut clique_of = HashMap::with_capacity(NUM_BLOCKS * 3);
        for c in &cliques {
            for b in &c.blocks {
                clique_of.insert(b.0, c.id() as u8);
            }
        }
        Universe { geometry, line_code, dual_code, cliques, clique_of }
    }

    /// Clique id of a weight-24 dual codeword.
    pub fn clique_of(&self, block: Block) -> Option<usize> {
        self.clique_of.get(&block.0).map(|&c| c as usize)
    }

    /// The 1008 clique blocks, ordered by clique id then mask.
    pub fn all_blocks(&self) -> Vec<Block> {
        self.cliques.iter().flat_map(|c| c.blocks.iter().copied()).collect()
    }

    pub fn assemble_design(&self, choice: DesignChoice) -> BhDesign {
        let blocks = choice
            .cliques()
            .flat_map(|id| self.cliques[id].blocks.iter().copied())
            .collect();
        BhDesign { choice, blocks }
    }
}

/// Every pair of blocks from distinct classes meets in 8 or 12 points.
pub fn cross_class_adjacency_check(universe: &Universe) -> bool {
    let by_class: Vec<Vec<Block>> = (0..NUM_CLASSES)
        .map(|c| (0..3).flat_map(|l| universe.cliques[3 * c + l].blocks.iter().copied()).collect())
        .collect();
    for c1 in 0..NUM_CLASSES {
        for c2 in c1 + 1..NUM_CLASSES {
            for a in &by_class[c1] {
                for b in &by_class[c2] {
                    if !matches!(a.meet(*b), 8 | 12) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Histogram of intersection sizes between blocks of the same class lying in different cliques.
pub fn same_class_cross_clique_intersections(universe: &Universe) -> std::collections::BTreeMap<u32, usize> {
    let mut hist = std::collections::BTreeMap::new();
    for c in 0..NUM_CLASSES {
        for l1 in 0..3 {
            for l2 in l1 + 1..3 {
                for a in &universe.cliques[3 * c + l1].blocks {
                    for b in &universe.cliques[3 * c + l2].blocks {
                        *hist.entry(a.meet(*b)).or_insert(0) += 1;
                    }
                }
            }
        }
    }
    hist
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomFailure {
    BlockCount(usize),
    BlockSize { block: usize, weight: u32 },
    PairCoverage { p: usize, q: usize, count: u32 },
    Intersection { i: usize, j: usize, size: u32 },
    NotCodeword { block: usize },
    OddLineMeet { block: usize, line: usize, size: u32 },
}

impl fmt::Display for AxiomFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomFailure::BlockCount(n) => write!(f, "design has {n} blocks, expected 336"),
            AxiomFailure::BlockSize { block, weight } => write!(f, "block {block} has weight {weight}"),
            AxiomFailure::PairCoverage { p, q, count } => {
                write!(f, "points {p},{q} lie in {count} blocks, expected 46")
            }
            AxiomFailure::Intersection { i, j, size } => write!(f, "blocks {i},{j} meet in {size} points"),
            AxiomFailure::NotCodeword { block } => write!(f, "block {block} is not in the dual code"),
            AxiomFailure::OddLineMeet { block, line, size } => {
                write!(f, "block {block} meets line {line} in {size} points")
            }
        }
    }
}

/// Outcome of [`verify_design`]: at most one witness per failed axiom.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DesignReport {
    pub failures: Vec<AxiomFailure>,
}

impl DesignReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn verify_design(universe: &Universe, design: &BhDesign) -> DesignReport {
    let blocks = &design.blocks;
    let mut failures = Vec::new();
    if blocks.len() != NUM_BLOCKS {
        failures.push(AxiomFailure::BlockCount(blocks.len()));
    }
    if let Some((block, b)) = blocks.iter().enumerate().find(|(_, b)| b.weight() != BLOCK_SIZE) {
        failures.push(AxiomFailure::BlockSize { block, weight: b.weight() });
    }
    'pairs: for p in 0..NUM_POINTS {
        for q in p + 1..NUM_POINTS {
            let pair = (1u64 << p) | (1u64 << q);
            let count = blocks.iter().filter(|b| b.0 & pair == pair).count() as u32;
            if count != LAMBDA {
                failures.push(AxiomFailure::PairCoverage { p, q, count });
                break 'pairs;
            }
        }
    }
    'meet: for i in 0..blocks.len() {
        for j in i + 1..blocks.len() {
            let size = blocks[i].meet(blocks[j]);
            if size != 8 && size != 12 {
                failures.push(AxiomFailure::Intersection { i, j, size });
                break 'meet;
            }
        }
    }
    if let Some(block) = blocks.iter().position(|b| !universe.dual_code.contains(*b)) {
        failures.push(AxiomFailure::NotCodeword { block });
    }
    'lines: for (block, b) in blocks.iter().enumerate() {
        for (line, l) in universe.geometry.lines().iter().enumerate() {
            let size = b.meet(l.points);
            if size % 2 == 1 {
                failures.push(AxiomFailure::OddLineMeet { block, line, size });
                break 'lines;
            }
        }
    }
    DesignReport { failures }
}

/// GF(2) rank of the block-by-point incidence matrix.
pub fn incidence_rank(design: &BhDesign) -> usize {
    rank(&design.blocks)
}
