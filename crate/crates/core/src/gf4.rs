//! Arithmetic in GF(4) = {0, 1, ω, ω²} and on 3-vectors / 3×3 matrices over it.
//!
//! Elements are stored as their integer codes 0, 1, 2, 3 for 0, 1, ω, ω².
//! With this encoding addition is XOR of the codes (ω is the polynomial `x`,
//! ω² = ω + 1 is `x + 1`).

use std::fmt;
use std::ops::{Add, Mul};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Gf4Error {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("invalid GF(4) code {0}")]
    InvalidCode(u8),
}

const MUL: [[u8; 4]; 4] = [
    [0, 0, 0, 0],
    [0, 1, 2, 3],
    [0, 2, 3, 1],
    [0, 3, 1, 2],
];

const INV: [u8; 4] = [0, 1, 3, 2];

const FROB: [u8; 4] = [0, 1, 3, 2];

/// An element of GF(4).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct F4(u8);

impl F4 {
    pub const ZERO: F4 = F4(0);
    pub const ONE: F4 = F4(1);
    pub const OMEGA: F4 = F4(2);
    pub const OMEGA2: F4 = F4(3);

    pub const ALL: [F4; 4] = [F4(0), F4(1), F4(2), F4(3)];

    pub fn new(code: u8) -> Result<F4, Gf4Error> {
        if code < 4 {
            Ok(F4(code))
        } else {
            Err(Gf4Error::InvalidCode(code))
        }
    }

    #[inline]
    pub const fn code(self) -> u8 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(self) -> Option<F4> {
        (self.0 != 0).then(|| F4(INV[self.0 as usize]))
    }

    /// The Frobenius automorphism x ↦ x².
    #[inline]
    pub fn frobenius(self) -> F4 {
        F4(FROB[self.0 as usize])
    }
}

impl fmt::Debug for F4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(["0", "1", "w", "w2"][self.0 as usize])
    }
}

impl Add for F4 {
    type Output = F4;
    #[inline]
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: F4) -> F4 {
        F4(self.0 ^ rhs.0)
    }
}

impl Mul for F4 {
    type Output = F4;
    #[inline]
    fn mul(self, rhs: F4) -> F4 {
        F4(MUL[self.0 as usize][rhs.0 as usize])
    }
}

pub fn f4_mul(a: F4, b: F4) -> F4 {
    a * b
}

pub fn frobenius(a: F4) -> F4 {
    a.frobenius()
}

/// A vector of GF(4)³, the coordinates of a point of AG(3,4).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Debug)]
pub struct Vec3(pub [F4; 3]);

impl Vec3 {
    pub const ZERO: Vec3 = Vec3([F4::ZERO; 3]);

    pub fn from_codes(codes: [u8; 3]) -> Result<Vec3, Gf4Error> {
        Ok(Vec3([F4::new(codes[0])?, F4::new(codes[1])?, F4::new(codes[2])?]))
    }

    pub fn codes(self) -> [u8; 3] {
        self.0.map(F4::code)
    }

    /// Point index 16a + 4b + c.
    #[inline]
    pub fn index(self) -> usize {
        let [a, b, c] = self.codes();
        16 * a as usize + 4 * b as usize + c as usize
    }

    /// Inverse of [`Vec3::index`]. `index` must be below 64.
    #[inline]
    pub fn from_index(index: usize) -> Vec3 {
        debug_assert!(index < 64);
        Vec3([
            F4(((index >> 4) & 3) as u8),
            F4(((index >> 2) & 3) as u8),
            F4((index & 3) as u8),
        ])
    }

    pub fn scale(self, s: F4) -> Vec3 {
        Vec3(self.0.map(|x| s * x))
    }

    pub fn frobenius(self) -> Vec3 {
        Vec3(self.0.map(F4::frobenius))
    }

    pub fn is_zero(self) -> bool {
        self == Vec3::ZERO
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, rhs: Vec3) -> Vec3 {
        Vec3([self.0[0] + rhs.0[0], self.0[1] + rhs.0[1], self.0[2] + rhs.0[2]])
    }
}

/// A 3×3 matrix over GF(4), row-major.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Mat3(pub [[F4; 3]; 3]);

impl Mat3 {
    pub const IDENTITY: Mat3 = Mat3([
        [F4::ONE, F4::ZERO, F4::ZERO],
        [F4::ZERO, F4::ONE, F4::ZERO],
        [F4::ZERO, F4::ZERO, F4::ONE],
    ]);

    pub fn diagonal(d: [F4; 3]) -> Mat3 {
        let mut m = Mat3([[F4::ZERO; 3]; 3]);
        for i in 0..3 {
            m.0[i][i] = d[i];
        }
        m
    }

    /// Packs the nine entry codes into 18 bits, entry (0,0) most significant.
    pub fn code(&self) -> u32 {
        self.0
            .iter()
            .flatten()
            .fold(0u32, |acc, x| (acc << 2) | x.code() as u32)
    }

    /// Inverse of [`Mat3::code`]; only the low 18 bits are read.
    pub fn from_code(code: u32) -> Mat3 {
        let mut m = Mat3([[F4::ZERO; 3]; 3]);
        for k in 0..9 {
            let shift = 2 * (8 - k);
            m.0[k / 3][k % 3] = F4(((code >> shift) & 3) as u8);
        }
        m
    }

    pub fn entry_codes(&self) -> [u8; 9] {
        let mut out = [0u8; 9];
        for (o, x) in out.iter_mut().zip(self.0.iter().flatten()) {
            *o = x.code();
        }
        out
    }

    pub fn from_entry_codes(codes: [u8; 9]) -> Result<Mat3, Gf4Error> {
        let mut m = Mat3([[F4::ZERO; 3]; 3]);
        for (k, &c) in codes.iter().enumerate() {
            m.0[k / 3][k % 3] = F4::new(c)?;
        }
        Ok(m)
    }

    pub fn det(&self) -> F4 {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] + m[1][2] * m[2][1])
            + m[0][1] * (m[1][0] * m[2][2] + m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] + m[1][1] * m[2][0])
    }

    pub fn is_invertible(&self) -> bool {
        !self.det().is_zero()
    }

    /// Adjugate over det; in characteristic 2 all cofactor signs vanish.
    pub fn inverse(&self) -> Result<Mat3, Gf4Error> {
        let d = self.det().inv().ok_or(Gf4Error::SingularMatrix)?;
        let m = &self.0;
        let mut out = Mat3([[F4::ZERO; 3]; 3]);
        for i in 0..3 {
            for j in 0..3 {
                // cofactor of (j, i)
                let r: Vec<usize> = (0..3).filter(|&x| x != j).collect();
                let c: Vec<usize> = (0..3).filter(|&x| x != i).collect();
                let minor = m[r[0]][c[0]] * m[r[1]][c[1]] + m[r[0]][c[1]] * m[r[1]][c[0]];
                out.0[i][j] = d * minor;
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: Vec3) -> Vec3 {
        let mut out = [F4::ZERO; 3];
        for (o, row) in out.iter_mut().zip(self.0.iter()) {
            *o = row[0] * v.0[0] + row[1] * v.0[1] + row[2] * v.0[2];
        }
        Vec3(out)
    }

    pub fn frobenius(&self) -> Mat3 {
        Mat3(self.0.map(|row| row.map(F4::frobenius)))
    }

    /// Frobenius applied `sigma` times (0 or 1).
    pub fn frobenius_pow(&self, sigma: bool) -> Mat3 {
        if sigma {
            self.frobenius()
        } else {
            *self
        }
    }
}

impl Mul for Mat3 {
    type Output = Mat3;
    fn mul(self, rhs: Mat3) -> Mat3 {
        let mut out = Mat3([[F4::ZERO; 3]; 3]);
        for i in 0..3 {
            for j in 0..3 {
                out.0[i][j] = (0..3).fold(F4::ZERO, |acc, k| acc + self.0[i][k] * rhs.0[k][j]);
            }
        }
        out
    }
}

pub fn mat_inverse(a: &Mat3) -> Result<Mat3, Gf4Error> {
    a.inverse()
}

/// All invertible matrices in ascending [`Mat3::code`] order.
pub fn invertible_matrices() -> Vec<Mat3> {
    (0..1u32 << 18)
        .map(Mat3::from_code)
        .filter(Mat3::is_invertible)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(c: u8) -> F4 {
        F4::new(c).unwrap()
    }

    #[test]
    fn multiplication_examples() {
        for x in F4::ALL {
            assert_eq!(f4_mul(F4::ONE, x), x);
        }
        assert_eq!(f4_mul(F4::OMEGA, F4::OMEGA), F4::OMEGA2);
        assert_eq!(f4_mul(F4::OMEGA, F4::OMEGA2), F4::ONE);
    }

    #[test]
    fn table_matches_polynomial_arithmetic() {
        // elements as polynomials b1*x + b0 modulo x^2 + x + 1
        fn polymul(a: u8, b: u8) -> u8 {
            let mut prod = 0u8;
            for i in 0..2 {
                if (b >> i) & 1 == 1 {
                    prod ^= a << i;
                }
            }
            if prod & 0b100 != 0 {
                prod ^= 0b111;
            }
            prod
        }
        for a in 0..4 {
            for b in 0..4 {
                assert_eq!((t(a) * t(b)).code(), polymul(a, b), "{a}*{b}");
            }
        }
    }

    #[test]
    fn field_axioms_exhaustive() {
        for a in F4::ALL {
            assert_eq!(a + a, F4::ZERO);
            if !a.is_zero() {
                assert_eq!(a * a.inv().unwrap(), F4::ONE);
            }
            for b in F4::ALL {
                assert_eq!(a + b, b + a);
                assert_eq!(a * b, b * a);
                for c in F4::ALL {
                    assert_eq!((a + b) + c, a + (b + c));
                    assert_eq!((a * b) * c, a * (b * c));
                    assert_eq!(a * (b + c), a * b + a * c);
                }
            }
        }
    }

    #[test]
    fn nonzero_elements_cyclic_of_order_three() {
        let w = F4::OMEGA;
        assert_ne!(w, F4::ONE);
        assert_ne!(w * w, F4::ONE);
        assert_eq!(w * w * w, F4::ONE);
    }

    #[test]
    fn frobenius_is_an_involutive_automorphism() {
        assert_eq!(frobenius(F4::ZERO), F4::ZERO);
        assert_eq!(frobenius(F4::OMEGA), F4::OMEGA2);
        let fixed: Vec<F4> = F4::ALL.into_iter().filter(|x| x.frobenius() == *x).collect();
        assert_eq!(fixed, vec![F4::ZERO, F4::ONE]);
        for a in F4::ALL {
            assert_eq!(a.frobenius().frobenius(), a);
            assert_eq!(a.frobenius(), a * a);
            for b in F4::ALL {
                assert_eq!((a * b).frobenius(), a.frobenius() * b.frobenius());
                assert_eq!((a + b).frobenius(), a.frobenius() + b.frobenius());
            }
        }
    }

    #[test]
    fn invalid_code_rejected() {
        assert_eq!(F4::new(4), Err(Gf4Error::InvalidCode(4)));
    }

    #[test]
    fn vector_addition_and_indexing() {
        for i in 0..64 {
            let v = Vec3::from_index(i);
            assert_eq!(v.index(), i);
            assert_eq!(v + v, Vec3::ZERO);
        }
        assert_eq!(Vec3::from_index(63).codes(), [3, 3, 3]);
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(mat_inverse(&Mat3::IDENTITY).unwrap(), Mat3::IDENTITY);
        let d = Mat3::diagonal([F4::OMEGA; 3]);
        assert_eq!(d.inverse().unwrap(), Mat3::diagonal([F4::OMEGA2; 3]));
        let singular = Mat3([[F4::ONE; 3]; 3]);
        assert_eq!(singular.inverse(), Err(Gf4Error::SingularMatrix));
    }

    #[test]
    fn invertible_count_and_inverses() {
        let all = invertible_matrices();
        // |GL(3,4)| = (64-1)(64-4)(64-16)
        assert_eq!(all.len(), 181_440);
        for m in all.iter().step_by(97) {
            let inv = m.inverse().unwrap();
            assert_eq!(*m * inv, Mat3::IDENTITY);
            assert_eq!(inv * *m, Mat3::IDENTITY);
        }
    }

    #[test]
    fn code_round_trip() {
        for code in [0u32, 1, 0x2_aaaa, 0x3_ffff, 0x1_2345] {
            assert_eq!(Mat3::from_code(code).code(), code);
        }
        assert_eq!(Mat3::IDENTITY.entry_codes(), [1, 0, 0, 0, 1, 0, 0, 0, 1]);
    }

    #[test]
    fn matrix_frobenius_is_multiplicative() {
        let a = Mat3::from_code(0x1_b2e4);
        let b = Mat3::from_code(0x2_77c1);
        assert_eq!((a * b).frobenius(), a.frobenius() * b.frobenius());
        let v = Vec3::from_index(39);
        assert_eq!(a.mul_vec(v).frobenius(), a.frobenius().mul_vec(v.frobenius()));
    }
}
