//! GF(2) linear algebra on single-word rows of length 64.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

/// A subset of the 64 points of AG(3,4), bit `i` standing for point `i`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Block(pub u64);

impl Block {
    pub const EMPTY: Block = Block(0);

    #[inline]
    pub fn weight(self) -> u32 {
        self.0.count_ones()
    }

    #[inline]
    pub fn contains(self, point: usize) -> bool {
        (self.0 >> point) & 1 == 1
    }

    #[inline]
    pub fn meet(self, other: Block) -> u32 {
        (self.0 & other.0).count_ones()
    }

    #[inline]
    pub fn union(self, other: Block) -> Block {
        Block(self.0 | other.0)
    }

    #[inline]
    pub fn xor(self, other: Block) -> Block {
        Block(self.0 ^ other.0)
    }

    pub fn from_points<I: IntoIterator<Item = usize>>(points: I) -> Block {
        Block(points.into_iter().fold(0u64, |m, p| m | (1u64 << p)))
    }

    pub fn points(self) -> impl Iterator<Item = usize> {
        let mut m = self.0;
        std::iter::from_fn(move || {
            if m == 0 {
                None
            } else {
                let p = m.trailing_zeros() as usize;
                m &= m - 1;
                Some(p)
            }
        })
    }

    /// Mask as 16 lowercase hex digits (point 0 is the least significant bit).
    pub fn to_hex(self) -> String {
        format!("{:016x}", self.0)
    }

    pub fn from_hex(s: &str) -> Option<Block> {
        if s.len() != 16 {
            return None;
        }
        u64::from_str_radix(s, 16).ok().map(Block)
    }
}

impl fmt::Debug for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Block({:016x})", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Gf2Error {
    #[error("code dimension {0} is too large to enumerate (limit 30)")]
    DimensionTooLarge(usize),
}

/// Row-reduces `rows` into reduced echelon form; returns `(row, pivot bit)` pairs.
/// The pivot of each row is its lowest set bit and no other row has that bit.
pub fn row_reduce(rows: &[Block]) -> Vec<(u64, u32)> {
    let mut basis: Vec<(u64, u32)> = Vec::new();
    for r in rows {
        let mut x = r.0;
        for &(b, p) in &basis {
            if (x >> p) & 1 == 1 {
                x ^= b;
            }
        }
        if x == 0 {
            continue;
        }
        let p = x.trailing_zeros();
        for (b, _) in basis.iter_mut() {
            if (*b >> p) & 1 == 1 {
                *b ^= x;
            }
        }
        basis.push((x, p));
    }
    basis
}

pub fn rank(rows: &[Block]) -> usize {
    row_reduce(rows).len()
}

/// A binary linear code of length 64 given by a basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryCode {
    basis: Vec<Block>,
    echelon: Vec<(u64, u32)>,
}

impl BinaryCode {
    /// Builds the span of `generators` (dependent rows are discarded).
    pub fn span(generators: &[Block]) -> BinaryCode {
        let echelon = row_reduce(generators);
        let basis = echelon.iter().map(|&(b, _)| Block(b)).collect();
        BinaryCode { basis, echelon }
    }

    pub fn basis(&self) -> &[Block] {
        &self.basis
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, word: Block) -> bool {
        let mut x = word.0;
        for &(b, p) in &self.echelon {
            if (x >> p) & 1 == 1 {
                x ^= b;
            }
        }
        x == 0
    }

    /// All 2^k codewords in Gray-code order, starting at zero.
    pub fn codewords(&self) -> Result<impl Iterator<Item = Block> + '_, Gf2Error> {
        let k = self.dimension();
        if k > 30 {
            return Err(Gf2Error::DimensionTooLarge(k));
        }
        let total = 1u64 << k;
        let mut current = 0u64;
        let mut i = 0u64;
        Ok(std::iter::from_fn(move || {
            if i == total {
                return None;
            }
            if i > 0 {
                current ^= self.basis[i.trailing_zeros() as usize].0;
            }
            i += 1;
            Some(Block(current))
        }))
    }

    pub fn weight_histogram(&self) -> Result<BTreeMap<u32, u64>, Gf2Error> {
        let mut hist = BTreeMap::new();
        for w in self.codewords()? {
            *hist.entry(w.weight()).or_insert(0) += 1;
        }
        Ok(hist)
    }
}

/// Basis of `{x : |x ∩ r| even for every row r}`.
pub fn nullspace(rows: &[Block]) -> BinaryCode {
    let echelon = row_reduce(rows);
    let pivots: u64 = echelon.iter().fold(0, |m, &(_, p)| m | (1u64 << p));
    let mut basis = Vec::with_capacity(64 - echelon.len());
    for free in (0..64u32).filter(|f| (pivots >> f) & 1 == 0) {
        let mut x = 1u64 << free;
        for &(b, p) in &echelon {
            if (b >> free) & 1 == 1 {
                x |= 1u64 << p;
            }
        }
        basis.push(Block(x));
    }
    BinaryCode::span(&basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rank_edge_cases() {
        assert_eq!(rank(&[]), 0);
        let v = Block(0xdead_beef);
        assert_eq!(rank(&[v, v]), 1);
        assert_eq!(rank(&[Block(0)]), 0);
        assert_eq!(rank(&[Block(1), Block(2), Block(3)]), 2);
    }

    #[test]
    fn nullspace_of_nothing_is_everything() {
        let code = nullspace(&[]);
        assert_eq!(code.dimension(), 64);
    }

    #[test]
    fn small_code_enumeration() {
        let code = BinaryCode::span(&[Block(0b0011), Block(0b0110), Block(0b0101)]);
        assert_eq!(code.dimension(), 2);
        let mut words: Vec<u64> = code.codewords().unwrap().map(|b| b.0).collect();
        words.sort_unstable();
        assert_eq!(words, vec![0, 0b0011, 0b0101, 0b0110]);
        let hist = code.weight_histogram().unwrap();
        assert_eq!(hist, BTreeMap::from([(0, 1), (2, 3)]));
    }

    #[test]
    fn too_large_dimension_is_refused() {
        let code = nullspace(&[]);
        assert!(matches!(code.codewords(), Err(Gf2Error::DimensionTooLarge(64))));
    }

    #[test]
    fn hex_round_trip() {
        let b = Block(0x0123_4567_89ab_cdef);
        assert_eq!(b.to_hex(), "0123456789abcdef");
        assert_eq!(Block::from_hex(&b.to_hex()), Some(b));
        assert_eq!(Block::from_hex("abc"), None);
    }

    proptest! {
        #[test]
        fn rank_nullity(rows in proptest::collection::vec(any::<u64>(), 0..80)) {
            let rows: Vec<Block> = rows.into_iter().map(Block).collect();
            let null = nullspace(&rows);
            prop_assert_eq!(rank(&rows) + null.dimension(), 64);
            for b in null.basis() {
                for r in &rows {
                    prop_assert_eq!(b.meet(*r) % 2, 0);
                }
            }
        }

        #[test]
        fn span_contains_generators(rows in proptest::collection::vec(any::<u64>(), 1..20), pick in any::<u64>()) {
            let rows: Vec<Block> = rows.into_iter().map(Block).collect();
            let code = BinaryCode::span(&rows);
            let combo = rows.iter().enumerate()
                .filter(|(i, _)| (pick >> (i % 64)) & 1 == 1)
                .fold(Block(0), |acc, (_, r)| acc.xor(*r));
            prop_assert!(code.contains(combo));
        }
    }
}
