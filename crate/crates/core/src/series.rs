//! Sector sums from declared data, and Euler characteristics of (twisted)
//! symmetric products with their generating functions.

use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::IntCyc;
use crate::cocycle::{h2_group, Cocycle};
use crate::error::{Error, Result};
use crate::group::{named, FiniteGroup};
use crate::par;
use crate::topology::KRank;

/// Largest `n` accepted by [`symprod_chi`].
pub const SYMPROD_MAX_N: usize = 6;
/// Largest truncation accepted by [`twisted_product_formula`].
pub const SERIES_MAX_DEGREE: usize = 32;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SectorEntry {
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub betti: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub euler: Option<i64>,
    /// Cyclotomic level of the summand, for reporting only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SectorData {
    pub sectors: Vec<SectorEntry>,
}

impl SectorData {
    pub fn concat(&self, other: &SectorData) -> SectorData {
        SectorData { sectors: self.sectors.iter().chain(&other.sectors).cloned().collect() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SectorSum {
    pub krank: KRank,
    pub euler: i64,
}

/// Adds even and odd Betti numbers over all sectors. An entry that only
/// declares an Euler characteristic `e` contributes `e` to `k0` when `e ≥ 0`
/// and `|e|` to `k1` otherwise.
pub fn sector_sum(data: &SectorData) -> Result<SectorSum> {
    let mut krank = KRank::default();
    for (i, entry) in data.sectors.iter().enumerate() {
        let part = match (&entry.betti, entry.euler) {
            (Some(b), e) => {
                let k = KRank::from_degrees(b);
                if e.is_some_and(|e| e != k.euler()) {
                    return Err(Error::validation(format!(
                        "sectors[{i}] ({}): declared euler {} disagrees with betti {:?}",
                        entry.label,
                        e.unwrap_or_default(),
                        b
                    )));
                }
                k
            }
            (None, Some(e)) if e >= 0 => KRank::new(e as usize, 0),
            (None, Some(e)) => KRank::new(0, e.unsigned_abs() as usize),
            (None, None) => {
                return Err(Error::validation(format!("sectors[{i}] ({}) has neither betti nor euler", entry.label)))
            }
        };
        krank = krank + part;
    }
    Ok(SectorSum { krank, euler: krank.euler() })
}

/// Sector data of the weighted projective line `CP(p, q)`.
pub fn weighted_projective_sectors(p: usize, q: usize) -> SectorData {
    let mut sectors =
        vec![SectorEntry { label: format!("CP({p},{q})"), betti: Some(vec![1, 0, 1]), euler: None, level: None }];
    for (w, name) in [(p, "p"), (q, "q")] {
        for k in 1..w {
            sectors.push(SectorEntry {
                label: format!("{name}-point {k}"),
                betti: Some(vec![1]),
                euler: None,
                level: Some(w),
            });
        }
    }
    SectorData { sectors }
}

/// Sector data of a closed hyperbolic orbifold of genus `g` with cone points of orders `v`.
pub fn hyperbolic_sectors(g: usize, v: &[usize]) -> SectorData {
    let mut sectors = vec![SectorEntry {
        label: format!("genus-{g} surface"),
        betti: Some(vec![1, 2 * g, 1]),
        euler: None,
        level: None,
    }];
    for (i, &order) in v.iter().enumerate() {
        for k in 1..order {
            sectors.push(SectorEntry {
                label: format!("cone point {i}, class {k}"),
                betti: Some(vec![1]),
                euler: None,
                level: Some(order),
            });
        }
    }
    SectorData { sectors }
}

/// Truncated power series with integer coefficients `c_0..c_N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    coeffs: Vec<BigInt>,
}

impl Series {
    pub fn zero(n: usize) -> Self {
        Series { coeffs: vec![BigInt::zero(); n + 1] }
    }

    pub fn one(n: usize) -> Self {
        Self::monomial(1, 0, n)
    }

    /// `c·q^k` truncated at `n`.
    pub fn monomial(c: i64, k: usize, n: usize) -> Self {
        let mut s = Self::zero(n);
        if k <= n {
            s.coeffs[k] = BigInt::from(c);
        }
        s
    }

    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::validation("a series needs at least a constant term"));
        }
        Ok(Series { coeffs })
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &BigInt {
        &self.coeffs[k]
    }

    pub fn coeffs_i64(&self) -> Option<Vec<i64>> {
        self.coeffs.iter().map(ToPrimitive::to_i64).collect()
    }

    /// Inverse, defined when the constant term is a unit.
    pub fn inverse(&self) -> Result<Series> {
        let c0 = &self.coeffs[0];
        if !c0.abs().is_one() {
            return Err(Error::validation("series inverse needs constant term ±1"));
        }
        let n = self.truncation();
        let mut inv = Self::zero(n);
        inv.coeffs[0] = c0.clone();
        for k in 1..=n {
            let s: BigInt = (1..=k).map(|j| &self.coeffs[j] * &inv.coeffs[k - j]).sum();
            inv.coeffs[k] = -(s * c0);
        }
        Ok(inv)
    }

    pub fn pow(&self, e: i64) -> Result<Series> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut acc = Self::one(self.truncation());
        let mut sq = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &sq;
            }
            sq = &sq * &sq;
            k >>= 1;
        }
        Ok(acc)
    }

    /// Exact halving; fails if a coefficient is odd.
    pub fn half(&self) -> Result<Series> {
        let two = BigInt::from(2);
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                let (q, r) = c.div_rem(&two);
                if r.is_zero() {
                    Ok(q)
                } else {
                    Err(Error::internal("halving a series with an odd coefficient"))
                }
            })
            .collect::<Result<_>>()?;
        Ok(Series { coeffs })
    }

    fn common(&self, other: &Series) -> usize {
        self.truncation().min(other.truncation())
    }
}

impl Add<&Series> for &Series {
    type Output = Series;
    fn add(self, rhs: &Series) -> Series {
        let n = self.common(rhs);
        Series { coeffs: (0..=n).map(|k| &self.coeffs[k] + &rhs.coeffs[k]).collect() }
    }
}

impl Sub<&Series> for &Series {
    type Output = Series;
    fn sub(self, rhs: &Series) -> Series {
        let n = self.common(rhs);
        Series { coeffs: (0..=n).map(|k| &self.coeffs[k] - &rhs.coeffs[k]).collect() }
    }
}

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        Series { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul<&Series> for &Series {
    type Output = Series;
    fn mul(self, rhs: &Series) -> Series {
        let n = self.common(rhs);
        let mut out = Series::zero(n);
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(n + 1 - i) {
                if !b.is_zero() {
                    out.coeffs[i + j] += a * b;
                }
            }
        }
        out
    }
}

/// `Π_{k ∈ ks} (1 + sign·q^k)^e` truncated at `n`.
fn product_of_binomials(ks: impl Iterator<Item = usize>, sign: i64, e: i64, n: usize) -> Result<Series> {
    let mut acc = Series::one(n);
    for k in ks.take_while(|&k| k <= n) {
        let factor = &Series::one(n) + &Series::monomial(sign, k, n);
        acc = &acc * &factor.pow(e)?;
    }
    Ok(acc)
}

/// `Π_{k>0} (1 − q^k)^{−c}`, whose coefficients are the untwisted symmetric
/// product Euler characteristics.
pub fn partition_series(c: i64, n: usize) -> Result<Series> {
    product_of_binomials(1.., -1, -c, n)
}

/// The two-term product formula for twisted symmetric products:
/// `Π(1−q^{2k−1})^{−χ} + Π(1+q^{2k−1})^{χ}·[1 + ½Π(1+q^{2k})^{χ} − ½Π(1−q^{2k})^{χ}]`.
pub fn twisted_product_formula(chi: i64, n: usize) -> Result<Series> {
    if n > SERIES_MAX_DEGREE {
        return Err(Error::validation(format!("truncation {n} above {SERIES_MAX_DEGREE}")));
    }
    let odd = |sign, e| product_of_binomials((1..).map(|k| 2 * k - 1), sign, e, n);
    let even = |sign| product_of_binomials((1..).map(|k| 2 * k), sign, chi, n);
    let first = odd(-1, -chi)?;
    let bracket = &Series::one(n) + &(&even(1)? - &even(-1)?).half()?;
    Ok(&first + &(&odd(1, chi)? * &bracket))
}

fn symprod_cocycle(group: &Arc<FiniteGroup>, n: usize, twisted: bool) -> Result<Cocycle> {
    if !twisted || n < 4 {
        return Ok(Cocycle::zero(group.clone(), 2));
    }
    if n >= 6 && !cfg!(feature = "sigma6-twisted") {
        return Err(Error::validation(
            "twisted symmetric products need n ≤ 5 unless built with the sigma6-twisted feature",
        ));
    }
    let h2 = h2_group(group, 2)?;
    if h2.order() != 2 {
        return Err(Error::internal(format!("H² of S{n} with Z/2 coefficients has order {}", h2.order())));
    }
    Ok(h2.classes()?[1].clone())
}

/// `Σ_(g) (1/|Z(g)|) Σ_{z ∈ Z(g)} L_g(z)·χ^{#orbits of z on the cycles of g}`:
/// the Euler characteristic of `^αK^*_{Σ_n}(M^n) ⊗ C` for `χ(M) = chi`.
pub fn symprod_chi(n: usize, chi: i64, twisted: bool) -> Result<i64> {
    if n > SYMPROD_MAX_N {
        return Err(Error::validation(format!("n = {n} above the symmetric group cap {SYMPROD_MAX_N}")));
    }
    if n == 0 {
        return Ok(1);
    }
    let group = Arc::new(named::symmetric(n)?);
    let alpha = symprod_cocycle(&group, n, twisted)?;
    let images = &group.permutations().expect("symmetric groups carry their permutations").images;
    let classes = group.conjugacy_classes();
    let terms = par::try_map_range(classes.len(), |c| {
        let g = classes.representative(c);
        let cycle_of = cycle_labels(&images[g]);
        let l = alpha.l_character(g);
        let mut total = IntCyc::zero(2);
        for (pos, &z) in l.domain().elements().iter().enumerate() {
            let orbits = orbits_on_cycles(&images[z], &cycle_of);
            let lefschetz = BigInt::from(chi).pow(orbits as u32);
            let weight = IntCyc::root(alpha.modulus() as usize, l.values()[pos] as i64);
            let v = lefschetz.to_i64().ok_or_else(|| Error::validation("Euler characteristic overflows i64"))?;
            total = &total + &weight.scale(v);
        }
        let sum = total.to_integer().ok_or_else(|| Error::internal("projected Lefschetz sum is not rational"))?;
        let z = l.domain().order() as i64;
        if sum % z != 0 {
            return Err(Error::internal(format!("sector {g}: Lefschetz average {sum}/{z} is not an integer")));
        }
        Ok(sum / z)
    })?;
    Ok(terms.iter().sum())
}

/// Cycle index of each point under a permutation.
fn cycle_labels(p: &[usize]) -> Vec<usize> {
    let mut label = vec![usize::MAX; p.len()];
    let mut next = 0;
    for start in 0..p.len() {
        if label[start] != usize::MAX {
            continue;
        }
        let mut x = start;
        while label[x] == usize::MAX {
            label[x] = next;
            x = p[x];
        }
        next += 1;
    }
    label
}

/// Orbits of `z` on the cycles of `g`, given the cycle labels of `g`.
fn orbits_on_cycles(z: &[usize], cycle_of: &[usize]) -> usize {
    let k = cycle_of.iter().max().map_or(0, |&m| m + 1);
    let mut map = vec![usize::MAX; k];
    for (x, &c) in cycle_of.iter().enumerate() {
        map[c] = cycle_of[z[x]];
    }
    let mut seen = vec![false; k];
    let mut count = 0;
    for start in 0..k {
        if seen[start] {
            continue;
        }
        count += 1;
        let mut c = start;
        while !seen[c] {
            seen[c] = true;
            c = map[c];
        }
    }
    count
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymprodRow {
    pub n: usize,
    pub untwisted: i64,
    pub partition_coefficient: i64,
    pub untwisted_match: bool,
    pub twisted: i64,
    pub product_coefficient: i64,
    pub twisted_match: bool,
    /// Rows with `n ≤ 3` lie outside the range `n ≥ 4` the formula is stated for.
    pub informational: bool,
}

/// Brute-force values against both generating functions for `n = 0..=n_max`.
pub fn symprod_report(chi: i64, n_max: usize) -> Result<Vec<SymprodRow>> {
    let untwisted_series = partition_series(chi, n_max)?;
    let product = twisted_product_formula(chi, n_max)?;
    let coeff =
        |s: &Series, n: usize| s.coeff(n).to_i64().ok_or_else(|| Error::validation("coefficient overflows i64"));
    (0..=n_max)
        .map(|n| {
            let untwisted = symprod_chi(n, chi, false)?;
            let twisted = symprod_chi(n, chi, true)?;
            let partition_coefficient = coeff(&untwisted_series, n)?;
            let product_coefficient = coeff(&product, n)?;
            Ok(SymprodRow {
                n,
                untwisted,
                partition_coefficient,
                untwisted_match: untwisted == partition_coefficient,
                twisted,
                product_coefficient,
                twisted_match: twisted == product_coefficient,
                informational: n <= 3,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ints(s: &Series) -> Vec<i64> {
        s.coeffs_i64().unwrap()
    }

    #[test]
    fn geometric_series() {
        let one_minus_q = &Series::one(4) - &Series::monomial(1, 1, 4);
        assert_eq!(ints(&one_minus_q.pow(-1).unwrap()), vec![1, 1, 1, 1, 1]);
    }

    #[test]
    fn partitions() {
        assert_eq!(ints(&partition_series(1, 7).unwrap()), vec![1, 1, 2, 3, 5, 7, 11, 15]);
        assert_eq!(*partition_series(1, 3).unwrap().coeff(3), BigInt::from(3));
    }

    #[test]
    fn generating_function_at_zero() {
        let s = twisted_product_formula(0, 10).unwrap();
        assert_eq!(ints(&s), {
            let mut v = vec![0; 11];
            v[0] = 2;
            v
        });
        assert!(twisted_product_formula(0, 33).is_err());
    }

    #[test]
    fn small_symmetric_products() {
        assert_eq!(symprod_chi(0, 5, false).unwrap(), 1);
        for c in -3..=3 {
            assert_eq!(symprod_chi(1, c, false).unwrap(), c);
            assert_eq!(symprod_chi(2, c, false).unwrap(), (c * c + 3 * c) / 2);
        }
        assert!(symprod_chi(7, 1, false).is_err());
    }

    #[test]
    fn untwisted_matches_partition_series() {
        for c in -3..=3 {
            let s = partition_series(c, 5).unwrap();
            for n in 0..=5 {
                assert_eq!(BigInt::from(symprod_chi(n, c, false).unwrap()), *s.coeff(n), "n={n} c={c}");
            }
        }
    }

    #[test]
    fn twist_is_inert_below_four() {
        for c in -2..=3 {
            for n in 0..=3 {
                assert_eq!(symprod_chi(n, c, true).unwrap(), symprod_chi(n, c, false).unwrap());
            }
        }
    }

    #[test]
    fn twisted_point_counts_regular_classes() {
        // χ(M) = 1 reduces to rank R_α(Σ_n)
        assert_eq!(symprod_chi(4, 1, true).unwrap(), 3);
        assert_eq!(symprod_chi(5, 1, true).unwrap(), 5);
    }

    #[test]
    fn weighted_projective_lines() {
        for (p, q) in [(2, 3), (3, 5), (5, 7)] {
            let s = sector_sum(&weighted_projective_sectors(p, q)).unwrap();
            assert_eq!(s.krank, KRank::new(p + q, 0));
            assert_eq!(s.euler, (p + q) as i64);
        }
    }

    #[test]
    fn hyperbolic_orbifolds() {
        let s = sector_sum(&hyperbolic_sectors(2, &[3, 3, 5])).unwrap();
        assert_eq!(s.krank, KRank::new(10, 4));
        let s = sector_sum(&hyperbolic_sectors(2, &[3, 3, 3])).unwrap();
        assert_eq!(s.krank, KRank::new(8, 4));
    }

    #[test]
    fn euler_only_and_malformed_entries() {
        let data: SectorData = serde_json::from_str(
            r#"{"sectors":[{"label":"a","euler":-2},{"label":"b","betti":[1]},{"label":"c","euler":3}]}"#,
        )
        .unwrap();
        assert_eq!(sector_sum(&data).unwrap().krank, KRank::new(4, 2));
        let bad: SectorData = serde_json::from_str(r#"{"sectors":[{"label":"a"}]}"#).unwrap();
        assert!(sector_sum(&bad).is_err());
        let inconsistent: SectorData =
            serde_json::from_str(r#"{"sectors":[{"label":"a","betti":[1,1],"euler":2}]}"#).unwrap();
        assert!(sector_sum(&inconsistent).is_err());
    }

    proptest! {
        #[test]
        fn sector_sum_is_additive(a in prop::collection::vec(prop::collection::vec(0usize..4, 1..4), 0..5),
                                  b in prop::collection::vec(-4i64..5, 0..5)) {
            let left = SectorData { sectors: a.iter().map(|betti| SectorEntry { label: "x".into(), betti: Some(betti.clone()), euler: None, level: None }).collect() };
            let right = SectorData { sectors: b.iter().map(|&e| SectorEntry { label: "y".into(), betti: None, euler: Some(e), level: None }).collect() };
            let whole = sector_sum(&left.concat(&right)).unwrap();
            let parts = sector_sum(&left).unwrap().krank + sector_sum(&right).unwrap().krank;
            prop_assert_eq!(whole.krank, parts);
        }

        #[test]
        fn inverse_and_power_laws(coeffs in prop::collection::vec(-3i64..4, 6), e in -3i64..4) {
            let mut c: Vec<BigInt> = coeffs.into_iter().map(BigInt::from).collect();
            c[0] = BigInt::one();
            let s = Series::from_coeffs(c).unwrap();
            prop_assert_eq!(&s * &s.inverse().unwrap(), Series::one(5));
            prop_assert_eq!(&s.pow(e).unwrap() * &s.pow(-e).unwrap(), Series::one(5));
        }
    }
}
