//! The affine space AG(3,4): 64 points, 336 lines in 21 parallel classes.

use thiserror::Error;

use crate::gf2::Block;
use crate::gf4::{Vec3, F4};

pub type PointIndex = usize;

pub const NUM_POINTS: usize = 64;
pub const NUM_CLASSES: usize = 21;
pub const LINES_PER_CLASS: usize = 16;
pub const NUM_LINES: usize = NUM_CLASSES * LINES_PER_CLASS;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("points must be distinct (got {0} twice)")]
    EqualPoints(PointIndex),
    #[error("point index {0} out of range")]
    OutOfRange(PointIndex),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Line {
    pub points: Block,
    /// Parallel class id, 0..21.
    pub direction: u8,
    /// Position within the class, 0..16.
    pub slot: u8,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParallelClass {
    pub direction: usize,
    /// Normalized direction vector: first nonzero coordinate is 1.
    pub vector: Vec3,
    pub lines: Vec<Line>,
}

#[derive(Debug, Clone)]
pub struct Geometry {
    classes: Vec<ParallelClass>,
    /// `line_id[p * 64 + q]` = index into `lines()` of the line through p and q.
    line_id: Vec<u16>,
    lines: Vec<Line>,
}

pub fn enumerate_points() -> Vec<(PointIndex, Vec3)> {
    (0..NUM_POINTS).map(|i| (i, Vec3::from_index(i))).collect()
}

/// The 21 normalized directions in lexicographic order of their codes.
pub fn directions() -> Vec<Vec3> {
    (1..NUM_POINTS)
        .map(Vec3::from_index)
        .filter(|v| v.0.iter().find(|x| !x.is_zero()) == Some(&F4::ONE))
        .collect()
}

/// Index of the normalized direction of a nonzero vector.
pub fn direction_of(v: Vec3) -> Option<usize> {
    let lead = *v.0.iter().find(|x| !x.is_zero())?;
    let n = v.scale(lead.inv()?);
    directions().iter().position(|d| *d == n)
}

impl Geometry {
    pub fn new() -> Geometry {
        let mut classes = Vec::with_capacity(NUM_CLASSES);
        for (dir, d) in directions().into_iter().enumerate() {
            let mut masks: Vec<u64> = Vec::with_capacity(LINES_PER_CLASS);
            let mut covered = 0u64;
            for p in 0..NUM_POINTS {
                if (covered >> p) & 1 == 1 {
                    continue;
                }
                let base = Vec3::from_index(p);
                let mask = F4::ALL
                    .iter()
                    .fold(0u64, |m, &t| m | 1u64 << (base + d.scale(t)).index());
                covered |= mask;
                masks.push(mask);
            }
            // masks are already ordered by smallest point
            let lines = masks
                .into_iter()
                .enumerate()
                .map(|(slot, m)| Line { points: Block(m), direction: dir as u8, slot: slot as u8 })
                .collect();
            classes.push(ParallelClass { direction: dir, vector: d, lines });
        }
        let lines: Vec<Line> = classes.iter().flat_map(|c| c.lines.iter().copied()).collect();
        let mut line_id = vec![u16::MAX; NUM_POINTS * NUM_POINTS];
        for (id, line) in lines.iter().enumerate() {
            for p in line.points.points() {
                for q in line.points.points() {
                    if p != q {
                        line_id[p * NUM_POINTS + q] = id as u16;
                    }
                }
            }
        }
        Geometry { classes, line_id, lines }
    }

    pub fn classes(&self) -> &[ParallelClass] {
        &self.classes
    }

    pub fn class(&self, id: usize) -> &ParallelClass {
        &self.classes[id]
    }

    /// All 336 lines, class-major.
    pub fn lines(&self) -> &[Line] {
        &self.lines
    }

    pub fn line_blocks(&self) -> Vec<Block> {
        self.lines.iter().map(|l| l.points).collect()
    }

    pub fn line_through(&self, p: PointIndex, q: PointIndex) -> Result<&Line, GeometryError> {
        for x in [p, q] {
            if x >= NUM_POINTS {
                return Err(GeometryError::OutOfRange(x));
            }
        }
        if p == q {
            return Err(GeometryError::EqualPoints(p));
        }
        Ok(&self.lines[self.line_id[p * NUM_POINTS + q] as usize])
    }

    /// Slot of the line of class `class` passing through `point`.
    pub fn slot_of(&self, class: usize, point: PointIndex) -> usize {
        self.classes[class]
            .lines
            .iter()
            .position(|l| l.points.contains(point))
            .expect("parallel class covers every point")
    }

    /// Bitmask of line slots of `class` contained in `block` (16 bits).
    pub fn slots_in(&self, class: usize, block: Block) -> u16 {
        self.classes[class]
            .lines
            .iter()
            .enumerate()
            .filter(|(_, l)| l.points.0 & block.0 == l.points.0)
            .fold(0u16, |m, (i, _)| m | (1 << i))
    }
}

impl Default for Geometry {
    fn default() -> Self {
        Geometry::new()
    }
}
