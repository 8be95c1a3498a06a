use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;

use super::cyclotomic::{cyclotomic_polynomial, Cyclotomic};

/// An element of `Z[ζ_N]` as integer multiplicities `Σ coeffs[k]·ζ_N^k`.
///
/// Character values are always of this form, and keeping them as machine
/// integers makes inner products cheap. Equality reduces modulo `Φ_N`.
#[derive(Clone, Debug)]
pub struct IntCyc {
    level: usize,
    coeffs: Vec<i64>,
}

impl IntCyc {
    pub fn zero(level: usize) -> Self {
        assert!(level >= 1);
        IntCyc { level, coeffs: vec![0; level] }
    }

    pub fn from_int(level: usize, x: i64) -> Self {
        let mut c = Self::zero(level);
        c.coeffs[0] = x;
        c
    }

    pub fn root(level: usize, k: i64) -> Self {
        let mut c = Self::zero(level);
        c.coeffs[k.rem_euclid(level as i64) as usize] = 1;
        c
    }

    pub fn from_coeffs(level: usize, coeffs: Vec<i64>) -> Self {
        assert_eq!(coeffs.len(), level);
        IntCyc { level, coeffs }
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn lift(&self, level: usize) -> Self {
        assert!(level.is_multiple_of(self.level), "lift from {} to {}", self.level, level);
        if level == self.level {
            return self.clone();
        }
        let step = level / self.level;
        let mut c = Self::zero(level);
        for (k, &x) in self.coeffs.iter().enumerate() {
            c.coeffs[k * step] = x;
        }
        c
    }

    fn common(&self, other: &Self) -> (Self, Self) {
        let l = self.level.lcm(&other.level);
        (self.lift(l), other.lift(l))
    }

    /// Multiplication by `ζ_N^k`.
    pub fn rotate(&self, k: i64) -> Self {
        let n = self.level as i64;
        let mut c = Self::zero(self.level);
        for (j, &x) in self.coeffs.iter().enumerate() {
            c.coeffs[(j as i64 + k).rem_euclid(n) as usize] = x;
        }
        c
    }

    pub fn conjugate(&self) -> Self {
        self.galois(self.level - 1)
    }

    /// `ζ ↦ ζ^k`.
    pub fn galois(&self, k: usize) -> Self {
        let n = self.level;
        let mut c = Self::zero(n);
        for (j, &x) in self.coeffs.iter().enumerate() {
            if x != 0 {
                c.coeffs[(j * k) % n] += x;
            }
        }
        c
    }

    pub fn scale(&self, s: i64) -> Self {
        IntCyc { level: self.level, coeffs: self.coeffs.iter().map(|x| x * s).collect() }
    }

    /// Remainder modulo `Φ_N`, `φ(N)` coefficients.
    pub fn canonical(&self) -> Vec<i64> {
        let poly = cyclotomic_polynomial(self.level);
        let deg = poly.len() - 1;
        let mut r = self.coeffs.clone();
        for i in (deg..r.len()).rev() {
            let c = std::mem::replace(&mut r[i], 0);
            if c != 0 {
                for (j, &p) in poly[..deg].iter().enumerate() {
                    r[i - deg + j] -= c * p;
                }
            }
        }
        r.truncate(deg);
        r
    }

    pub fn is_zero(&self) -> bool {
        self.canonical().iter().all(|&x| x == 0)
    }

    pub fn to_integer(&self) -> Option<i64> {
        let c = self.canonical();
        c.iter().skip(1).all(|&x| x == 0).then(|| c[0])
    }

    pub fn to_cyclotomic(&self) -> Cyclotomic {
        let coeffs = self.coeffs.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect();
        Cyclotomic::from_coeffs(self.level, coeffs).expect("level-sized coefficients")
    }
}

impl PartialEq for IntCyc {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = self.common(other);
        a.canonical() == b.canonical()
    }
}

impl Eq for IntCyc {}

impl Add<&IntCyc> for &IntCyc {
    type Output = IntCyc;
    fn add(self, rhs: &IntCyc) -> IntCyc {
        let (mut a, b) = self.common(rhs);
        for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            *x += y;
        }
        a
    }
}

impl Sub<&IntCyc> for &IntCyc {
    type Output = IntCyc;
    fn sub(self, rhs: &IntCyc) -> IntCyc {
        let (mut a, b) = self.common(rhs);
        for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            *x -= y;
        }
        a
    }
}

impl Mul<&IntCyc> for &IntCyc {
    type Output = IntCyc;
    fn mul(self, rhs: &IntCyc) -> IntCyc {
        let (a, b) = self.common(rhs);
        let n = a.level;
        let mut c = IntCyc::zero(n);
        let nz: Vec<(usize, i64)> = b.coeffs.iter().copied().enumerate().filter(|&(_, y)| y != 0).collect();
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x != 0 {
                for &(j, y) in &nz {
                    c.coeffs[(i + j) % n] += x * y;
                }
            }
        }
        c
    }
}

impl Neg for &IntCyc {
    type Output = IntCyc;
    fn neg(self) -> IntCyc {
        self.scale(-1)
    }
}
