use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::MatrixQ;

/// An element of `Q(ζ_N)` stored in the full power basis `Σ coeffs[k]·ζ_N^k`.
///
/// The basis is redundant; [`Cyclotomic::canonical`] reduces modulo the
/// `N`-th cyclotomic polynomial and is what equality and ordering use.
#[derive(Clone, Debug)]
pub struct Cyclotomic {
    level: usize,
    coeffs: Vec<BigRational>,
}

pub fn euler_phi(n: usize) -> usize {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

fn divide_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![0i64; rem.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dd];
        quot[i] = c;
        if c != 0 {
            for (j, &d) in den.iter().enumerate() {
                rem[i + j] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&x| x == 0));
    quot
}

/// Integer coefficients (low degree first) of the `n`-th cyclotomic polynomial.
pub fn cyclotomic_polynomial(n: usize) -> Arc<Vec<i64>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().expect("cache lock").get(&n) {
        return p.clone();
    }
    let mut poly = vec![0i64; n + 1];
    poly[0] = -1;
    poly[n] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            poly = divide_monic(&poly, &cyclotomic_polynomial(d));
        }
    }
    let poly = Arc::new(poly);
    cache.lock().expect("cache lock").insert(n, poly.clone());
    poly
}

impl Cyclotomic {
    pub fn zero(level: usize) -> Self {
        assert!(level >= 1);
        Cyclotomic { level, coeffs: vec![BigRational::zero(); level] }
    }

    pub fn from_rational(level: usize, x: BigRational) -> Self {
        let mut c = Self::zero(level);
        c.coeffs[0] = x;
        c
    }

    pub fn from_int(level: usize, x: i64) -> Self {
        Self::from_rational(level, BigRational::from_integer(BigInt::from(x)))
    }

    pub fn one(level: usize) -> Self {
        Self::from_int(level, 1)
    }

    /// `ζ_level^k`
    pub fn root(level: usize, k: i64) -> Self {
        let mut c = Self::zero(level);
        c.coeffs[k.rem_euclid(level as i64) as usize] = BigRational::one();
        c
    }

    /// `Σ mult[k] ζ^k` with integer multiplicities.
    pub fn from_multiplicities(level: usize, mult: &[i64]) -> Self {
        let mut c = Self::zero(level);
        for (k, &m) in mult.iter().enumerate() {
            c.coeffs[k % level] += BigRational::from_integer(BigInt::from(m));
        }
        c
    }

    pub fn from_coeffs(level: usize, coeffs: Vec<BigRational>) -> Result<Self> {
        if level == 0 || coeffs.len() > level {
            return Err(Error::validation(format!("cyclotomic level {level} with {} coefficients", coeffs.len())));
        }
        let mut c = Self::zero(level);
        for (k, x) in coeffs.into_iter().enumerate() {
            c.coeffs[k] = x;
        }
        Ok(c)
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Re-expresses the value at a multiple of the current level.
    pub fn lift(&self, level: usize) -> Self {
        assert!(level.is_multiple_of(self.level), "lift from {} to {}", self.level, level);
        if level == self.level {
            return self.clone();
        }
        let step = level / self.level;
        let mut c = Self::zero(level);
        for (k, x) in self.coeffs.iter().enumerate() {
            if !x.is_zero() {
                c.coeffs[k * step] = x.clone();
            }
        }
        c
    }

    fn common(&self, other: &Self) -> (Self, Self) {
        if self.level == other.level {
            return (self.clone(), other.clone());
        }
        let l = self.level.lcm(&other.level);
        (self.lift(l), other.lift(l))
    }

    /// Coefficients of the remainder modulo the cyclotomic polynomial
    /// (length `φ(level)`). Canonical: two values are equal iff these agree.
    pub fn canonical(&self) -> Vec<BigRational> {
        let poly = cyclotomic_polynomial(self.level);
        let deg = poly.len() - 1;
        let mut r = self.coeffs.clone();
        for i in (deg..r.len()).rev() {
            if r[i].is_zero() {
                continue;
            }
            let c = std::mem::replace(&mut r[i], BigRational::zero());
            for (j, &p) in poly[..deg].iter().enumerate() {
                if p != 0 {
                    r[i - deg + j] -= &c * BigRational::from_integer(BigInt::from(p));
                }
            }
        }
        r.truncate(deg);
        r
    }

    pub fn is_zero(&self) -> bool {
        self.canonical().iter().all(Zero::is_zero)
    }

    /// The value as a rational number, if it is one.
    pub fn to_rational(&self) -> Option<BigRational> {
        let c = self.canonical();
        if c.iter().skip(1).all(Zero::is_zero) {
            Some(c.first().cloned().unwrap_or_else(BigRational::zero))
        } else {
            None
        }
    }

    /// Same value in canonical coefficients, expressed at the same level.
    pub fn normalized(&self) -> Self {
        let mut c = Self::zero(self.level);
        for (k, x) in self.canonical().into_iter().enumerate() {
            c.coeffs[k] = x;
        }
        c
    }

    /// Complex conjugate: `ζ ↦ ζ⁻¹`.
    pub fn conjugate(&self) -> Self {
        self.galois_apply_unchecked(self.level - 1)
    }

    /// The field automorphism `ζ_N ↦ ζ_N^k`; `k` must be coprime to the level.
    pub fn galois_apply(&self, k: usize) -> Result<Self> {
        if k.gcd(&self.level) != 1 {
            return Err(Error::validation(format!("{k} is not coprime to level {}", self.level)));
        }
        Ok(self.galois_apply_unchecked(k))
    }

    fn galois_apply_unchecked(&self, k: usize) -> Self {
        let n = self.level;
        let mut c = Self::zero(n);
        for (j, x) in self.coeffs.iter().enumerate() {
            if !x.is_zero() {
                c.coeffs[(j * k) % n] += x;
            }
        }
        c
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        Cyclotomic { level: self.level, coeffs: self.coeffs.iter().map(|x| x * s).collect() }
    }

    /// Matrix of multiplication by `self` on `Q(ζ)` in the canonical power basis
    /// (`φ(level)` square). Used to run linear algebra over `Q(ζ)` as linear
    /// algebra over `Q`.
    pub fn multiplication_matrix(&self) -> MatrixQ {
        let n = self.level;
        let phi = euler_phi(n);
        let mut m = MatrixQ::zeros(phi, phi);
        for j in 0..phi {
            let col = (self * &Cyclotomic::root(n, j as i64)).canonical();
            for (i, x) in col.into_iter().enumerate() {
                m[(i, j)] = x;
            }
        }
        m
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::validation("inverse of zero"));
        }
        let m = self.multiplication_matrix();
        let mut e0 = vec![BigRational::zero(); m.rows()];
        e0[0] = BigRational::one();
        let sol = m.solve(&e0)?.ok_or_else(|| Error::internal("nonzero cyclotomic without inverse"))?;
        Cyclotomic::from_coeffs(self.level, sol)
    }

    /// Smallest level at which the value can be written.
    pub fn minimal_level(&self) -> usize {
        let n = self.level;
        (1..=n)
            .filter(|d| n.is_multiple_of(*d))
            .find(|&d| {
                let canon = self.normalized();
                // value lies in Q(ζ_d) iff it is fixed by every automorphism fixing ζ_d
                (0..n)
                    .filter(|k| k.gcd(&n) == 1 && k % d == 1 % d.max(1))
                    .all(|k| canon.galois_apply_unchecked(k) == canon)
            })
            .unwrap_or(n)
    }

    /// The same value at its minimal level.
    pub fn simplified(&self) -> Self {
        let d = self.minimal_level();
        if d == self.level {
            return self.normalized();
        }
        // write in terms of ζ_d = ζ_n^{n/d}: average over Gal(Q(ζ_n)/Q(ζ_d)) is
        // already the value; recover coordinates by solving in the d-basis
        let n = self.level;
        let phi_d = euler_phi(d);
        let mut basis = MatrixQ::zeros(euler_phi(n), phi_d);
        for j in 0..phi_d {
            let col = Cyclotomic::root(d, j as i64).lift(n).canonical();
            for (i, x) in col.into_iter().enumerate() {
                basis[(i, j)] = x;
            }
        }
        let coords =
            basis.solve(&self.canonical()).ok().flatten().expect("value fixed by the subgroup lies in the subfield");
        Cyclotomic::from_coeffs(d, coords).expect("phi(d) <= d")
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = self.common(other);
        a.canonical() == b.canonical()
    }
}

impl Eq for Cyclotomic {}

impl<'a> Add<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        let (mut a, b) = self.common(rhs);
        for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            if !y.is_zero() {
                *x += y;
            }
        }
        a
    }
}

impl<'a> Sub<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        let (mut a, b) = self.common(rhs);
        for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            if !y.is_zero() {
                *x -= y;
            }
        }
        a
    }
}

impl<'a> Mul<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        let (a, b) = self.common(rhs);
        let n = a.level;
        let mut c = Cyclotomic::zero(n);
        let nz: Vec<(usize, &BigRational)> = b.coeffs.iter().enumerate().filter(|(_, y)| !y.is_zero()).collect();
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for &(j, y) in &nz {
                c.coeffs[(i + j) % n] += x * y;
            }
        }
        c
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic { level: self.level, coeffs: self.coeffs.iter().map(|x| -x).collect() }
    }
}

impl Add for Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: Cyclotomic) -> Cyclotomic {
        &self + &rhs
    }
}

impl Mul for Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: Cyclotomic) -> Cyclotomic {
        &self * &rhs
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.to_rational() {
            return write!(f, "{r}");
        }
        let c = self.canonical();
        let mut first = true;
        for (k, x) in c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let term = match k {
                0 => format!("{x}"),
                _ if x.is_one() => format!("z{}^{k}", self.level),
                _ if *x == -BigRational::one() => format!("-z{}^{k}", self.level),
                _ => format!("{x}*z{}^{k}", self.level),
            };
            if !first && !term.starts_with('-') {
                write!(f, "+")?;
            }
            write!(f, "{term}")?;
            first = false;
        }
        Ok(())
    }
}

/// Trace over `Q` of the automorphism `ζ_n ↦ ζ_n^k` acting on `Q(ζ_n)`.
pub fn galois_trace(n: usize, k: usize) -> BigInt {
    let phi = euler_phi(n);
    let mut t = BigRational::zero();
    for j in 0..phi {
        let image = Cyclotomic::root(n, (j * k) as i64).canonical();
        t += &image[j];
    }
    t.to_integer()
}
