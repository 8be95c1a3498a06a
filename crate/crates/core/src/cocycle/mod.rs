//! Normalized 2-cocycles `G × G → Z/m`, read as `μ_m ⊂ S¹`-valued via
//! `a ↦ exp(2πi a/m)`.

mod extension;
mod h2;

use std::sync::Arc;

use num_integer::Integer;

pub use extension::CentralExtension;
pub use h2::{h2_group, is_cohomologous, Cohomologous, CohomologyClassSet, H2_CAP_GENERAL, H2_CAP_PRIME};

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Subgroup};
use crate::linalg::{solve_mod, SolveOutcome};

#[derive(Clone, Debug)]
pub struct Cocycle {
    group: Arc<FiniteGroup>,
    modulus: u64,
    values: Vec<u64>,
}

pub(crate) fn same_group(a: &Arc<FiniteGroup>, b: &Arc<FiniteGroup>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl PartialEq for Cocycle {
    fn eq(&self, other: &Self) -> bool {
        self.modulus == other.modulus && self.values == other.values && same_group(&self.group, &other.group)
    }
}

impl Eq for Cocycle {}

impl Cocycle {
    /// Validates normalization and the cocycle identity.
    ///
    /// The identity is checked on triples `(g, h, s)` with `s` a generator;
    /// since `δα` is itself a cocycle, that forces it on every triple.
    pub fn new(group: Arc<FiniteGroup>, modulus: u64, values: Vec<Vec<u64>>) -> Result<Self> {
        let n = group.order();
        if modulus == 0 {
            return Err(Error::validation("cocycle modulus must be at least 1"));
        }
        if values.len() != n {
            return Err(Error::validation(format!("cocycle has {} rows, group order is {n}", values.len())));
        }
        let mut flat = Vec::with_capacity(n * n);
        for (g, row) in values.iter().enumerate() {
            if row.len() != n {
                return Err(Error::validation(format!("cocycle row {g} has {} entries, expected {n}", row.len())));
            }
            if let Some(h) = row.iter().position(|&v| v >= modulus) {
                return Err(Error::validation(format!(
                    "cocycle value at ({g}, {h}) is {} but the modulus is {modulus}",
                    row[h]
                )));
            }
            flat.extend_from_slice(row);
        }
        let c = Cocycle { group, modulus, values: flat };
        c.check()?;
        Ok(c)
    }

    pub(crate) fn from_flat_unchecked(group: Arc<FiniteGroup>, modulus: u64, values: Vec<u64>) -> Self {
        debug_assert_eq!(values.len(), group.order() * group.order());
        Cocycle { group, modulus, values }
    }

    fn check(&self) -> Result<()> {
        let g = &*self.group;
        let n = g.order();
        let m = self.modulus;
        for x in 0..n {
            if self.get(0, x) != 0 || self.get(x, 0) != 0 {
                return Err(Error::validation(format!("cocycle is not normalized at element {x}")));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = g.mul(a, b);
                for &s in g.generators() {
                    let lhs = (self.get(a, b) + self.get(ab, s)) % m;
                    let rhs = (self.get(b, s) + self.get(a, g.mul(b, s))) % m;
                    if lhs != rhs {
                        return Err(Error::validation(format!("cocycle identity fails for ({a}, {b}, {s})")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn zero(group: Arc<FiniteGroup>, modulus: u64) -> Self {
        let n = group.order();
        Cocycle { group, modulus: modulus.max(1), values: vec![0; n * n] }
    }

    /// `δt(g, h) = t(g) + t(h) − t(gh)`; `t(1)` must be zero.
    pub fn coboundary(group: Arc<FiniteGroup>, modulus: u64, t: &[u64]) -> Result<Self> {
        let n = group.order();
        if t.len() != n {
            return Err(Error::validation(format!("cochain has {} entries, group order is {n}", t.len())));
        }
        if !t[0].is_multiple_of(modulus) {
            return Err(Error::validation("cochain must vanish at the identity"));
        }
        let m = modulus;
        let mut values = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                values[a * n + b] = (t[a] % m + t[b] % m + m - t[group.mul(a, b)] % m) % m;
            }
        }
        Ok(Cocycle { group, modulus, values })
    }

    #[inline]
    pub fn get(&self, g: usize, h: usize) -> u64 {
        self.values[g * self.group.order() + h]
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    /// Row-major values.
    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        self.values.chunks(self.group.order().max(1)).map(<[u64]>::to_vec).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    /// The same `S¹`-valued cocycle written at modulus `k·m`.
    pub fn lift(&self, modulus: u64) -> Result<Self> {
        if !modulus.is_multiple_of(self.modulus) {
            return Err(Error::validation(format!("cannot lift modulus {} to {modulus}", self.modulus)));
        }
        let k = modulus / self.modulus;
        Ok(Cocycle { group: self.group.clone(), modulus, values: self.values.iter().map(|&v| v * k).collect() })
    }

    /// The same cocycle at the smallest modulus that represents it.
    pub fn reduced(&self) -> Self {
        let g = self.values.iter().fold(self.modulus, |acc, &v| acc.gcd(&v));
        Cocycle {
            group: self.group.clone(),
            modulus: self.modulus / g,
            values: self.values.iter().map(|&v| v / g).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        let m = self.modulus;
        Cocycle { group: self.group.clone(), modulus: m, values: self.values.iter().map(|&v| (m - v) % m).collect() }
    }

    /// Pointwise sum at modulus `lcm(m₁, m₂)`.
    pub fn sum(&self, other: &Cocycle) -> Result<Cocycle> {
        if !same_group(&self.group, &other.group) {
            return Err(Error::validation("cocycle sum needs cocycles on the same group"));
        }
        let l = self.modulus.lcm(&other.modulus);
        let a = self.lift(l)?;
        let b = other.lift(l)?;
        let values = a.values.iter().zip(&b.values).map(|(x, y)| (x + y) % l).collect();
        Ok(Cocycle { group: self.group.clone(), modulus: l, values })
    }

    /// Restriction to a subgroup, as a cocycle on the subgroup viewed as a
    /// group; the returned embedding maps local indices into `G`.
    pub fn restrict(&self, h: &Subgroup) -> Result<(Cocycle, Vec<usize>)> {
        let g = &*self.group;
        let els = h.elements();
        if els.first() != Some(&0) || els.iter().any(|&x| x >= g.order()) {
            return Err(Error::validation("restriction target is not a subgroup"));
        }
        for &a in els {
            for &b in els {
                if !h.contains(g.mul(a, b)) {
                    return Err(Error::validation(format!("restriction target is not closed: {a}·{b}")));
                }
            }
        }
        let (sub, emb) = h.as_group(g);
        let k = emb.len();
        let mut values = vec![0; k * k];
        for (i, &a) in emb.iter().enumerate() {
            for (j, &b) in emb.iter().enumerate() {
                values[i * k + j] = self.get(a, b);
            }
        }
        Ok((Cocycle { group: Arc::new(sub), modulus: self.modulus, values }, emb))
    }

    /// `L_g(z) = α(z, g) − α(g, z)` on the centralizer of `g`.
    pub fn l_character(&self, g: usize) -> LinearCharacter {
        let m = self.modulus;
        let domain = self.group.centralizer(g);
        let values = domain.elements().iter().map(|&z| (self.get(z, g) + m - self.get(g, z)) % m).collect();
        LinearCharacter { domain, modulus: m, values }
    }

    pub fn is_regular(&self, g: usize) -> bool {
        let grp = &*self.group;
        (0..grp.order()).all(|x| grp.mul(x, g) != grp.mul(g, x) || self.get(g, x) == self.get(x, g))
    }

    /// Ids of conjugacy classes whose elements are α-regular.
    pub fn regular_classes(&self) -> Vec<usize> {
        let classes = self.group.conjugacy_classes();
        (0..classes.len()).filter(|&c| self.is_regular(classes.representative(c))).collect()
    }

    /// A cohomologous cocycle with `α(x, x⁻¹) = 0` and
    /// `α(x, g) + α(xg, x⁻¹) = 0` for every α-regular `g`.
    ///
    /// Tried at the current modulus, then once at twice the modulus.
    pub fn standardize(&self) -> Result<Cocycle> {
        match self.standardize_at(self.modulus)? {
            Ok(c) => Ok(c),
            Err(_) => match self.standardize_at(2 * self.modulus)? {
                Ok(c) => Ok(c),
                Err(unsatisfied) => Err(Error::validation(format!(
                    "no standard representative at modulus {} or {}; unsatisfied constraints: {}",
                    self.modulus,
                    2 * self.modulus,
                    unsatisfied.join(", ")
                ))),
            },
        }
    }

    fn standardize_at(&self, modulus: u64) -> Result<std::result::Result<Cocycle, Vec<String>>> {
        let alpha = self.lift(modulus)?;
        let g = &*self.group;
        let n = g.order();
        let m = modulus;
        let regular: Vec<usize> = (0..n).filter(|&x| self.is_regular(x)).collect();
        // unknowns t(1..n); rows are t(x)+t(x⁻¹)[+t(r)−t(x r x⁻¹)]
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        let mut labels = Vec::new();
        let mut push = |terms: &[(usize, i64)], b: u64, label: String| {
            let mut row = vec![0u64; n.saturating_sub(1)];
            for &(u, c) in terms {
                if u != 0 {
                    row[u - 1] = ((row[u - 1] as i64 + c).rem_euclid(m as i64)) as u64;
                }
            }
            rows.push(row);
            rhs.push(b);
            labels.push(label);
        };
        for x in 0..n {
            let xi = g.inv(x);
            push(&[(x, 1), (xi, 1)], (m - alpha.get(x, xi)) % m, format!("alpha(x,x^-1) at x={x}"));
        }
        for &r in &regular {
            for x in 0..n {
                let xi = g.inv(x);
                let xr = g.mul(x, r);
                let conj = g.conjugate(r, x);
                let b = (2 * m - alpha.get(x, r) - alpha.get(xr, xi)) % m;
                push(&[(x, 1), (xi, 1), (r, 1), (conj, -1)], b, format!("conjugation at x={x}, g={r}"));
            }
        }
        if n == 1 {
            return Ok(Ok(alpha));
        }
        match solve_mod(&rows, n - 1, &rhs, m)? {
            SolveOutcome::Solvable { particular, .. } => {
                let mut t = vec![0u64];
                t.extend(particular);
                let delta = Cocycle::coboundary(self.group.clone(), m, &t)?;
                Ok(Ok(alpha.sum(&delta)?))
            }
            SolveOutcome::Infeasible { residual } => {
                Ok(Err(residual.iter().zip(labels).filter(|(r, _)| **r != 0).map(|(_, l)| l).collect()))
            }
        }
    }
}

/// A homomorphism from a subgroup to `Z/m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearCharacter {
    domain: Subgroup,
    modulus: u64,
    /// Aligned with `domain.elements()`.
    values: Vec<u64>,
}

impl LinearCharacter {
    pub fn domain(&self) -> &Subgroup {
        &self.domain
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn value(&self, z: usize) -> Option<u64> {
        self.domain.elements().binary_search(&z).ok().map(|i| self.values[i])
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    pub fn is_multiplicative(&self, group: &FiniteGroup) -> bool {
        let els = self.domain.elements();
        els.iter().enumerate().all(|(i, &x)| {
            els.iter()
                .enumerate()
                .all(|(j, &y)| self.value(group.mul(x, y)) == Some((self.values[i] + self.values[j]) % self.modulus))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::named;

    fn v4() -> Arc<FiniteGroup> {
        Arc::new(named::klein_four().unwrap())
    }

    /// The sign cocycle of the quaternion-type extension of V₄, from the
    /// 2×2 matrices a ↦ [[0,1],[−1,0]], b ↦ [[−1,0],[0,1]].
    pub(crate) fn v4_matrix_cocycle(g: &Arc<FiniteGroup>) -> Cocycle {
        type M = [[i64; 2]; 2];
        fn mul(x: &M, y: &M) -> M {
            let mut r = [[0; 2]; 2];
            for i in 0..2 {
                for j in 0..2 {
                    r[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
                }
            }
            r
        }
        let a: M = [[0, 1], [-1, 0]];
        let b: M = [[-1, 0], [0, 1]];
        let id: M = [[1, 0], [0, 1]];
        let gens = g.generators().to_vec();
        // matrix for each element via words in the two generators
        let mut rho: Vec<Option<M>> = vec![None; 4];
        rho[0] = Some(id);
        let images = [a, b];
        let mut frontier = vec![0usize];
        while let Some(x) = frontier.pop() {
            for (k, &s) in gens.iter().enumerate() {
                let y = g.mul(x, s);
                if rho[y].is_none() {
                    rho[y] = Some(mul(&rho[x].unwrap(), &images[k]));
                    frontier.push(y);
                }
            }
        }
        let rho: Vec<M> = rho.into_iter().map(Option::unwrap).collect();
        let mut values = vec![vec![0u64; 4]; 4];
        for x in 0..4 {
            for y in 0..4 {
                let p = mul(&rho[x], &rho[y]);
                let q = rho[g.mul(x, y)];
                values[x][y] = if p == q {
                    0
                } else {
                    assert_eq!(p.map(|r| r.map(|v| -v)), q);
                    1
                };
            }
        }
        Cocycle::new(g.clone(), 2, values).unwrap()
    }

    #[test]
    fn rejects_non_cocycles() {
        let g = v4();
        let mut vals = vec![vec![0u64; 4]; 4];
        vals[1][2] = 1;
        let err = Cocycle::new(g.clone(), 2, vals).unwrap_err();
        assert!(err.to_string().contains("cocycle identity"));
        let mut vals = vec![vec![0u64; 4]; 4];
        vals[0][1] = 1;
        assert!(Cocycle::new(g, 2, vals).unwrap_err().to_string().contains("normalized"));
    }

    #[test]
    fn l_character_on_v4() {
        let g = v4();
        let alpha = v4_matrix_cocycle(&g);
        for x in 1..4 {
            let l = alpha.l_character(x);
            assert!(l.is_multiplicative(&g));
            assert_eq!(l.value(0), Some(0));
            assert_eq!(l.value(x), Some(0));
            for y in (1..4).filter(|&y| y != x) {
                assert_eq!(l.value(y), Some(1));
            }
        }
        assert_eq!(alpha.regular_classes(), vec![0]);
        assert!(Cocycle::zero(g.clone(), 2).l_character(3).is_trivial());
        assert_eq!(Cocycle::zero(g, 2).regular_classes().len(), 4);
    }

    #[test]
    fn sum_lifts_modulus() {
        let g = Arc::new(named::cyclic(6).unwrap());
        let a = Cocycle::coboundary(g.clone(), 2, &[0, 1, 0, 1, 0, 1]).unwrap();
        let b = Cocycle::coboundary(g.clone(), 3, &[0, 1, 2, 0, 1, 2]).unwrap();
        let c = a.sum(&b).unwrap();
        assert_eq!(c.modulus(), 6);
        assert_eq!(c.sum(&Cocycle::zero(g, 6)).unwrap(), c);
    }

    #[test]
    fn restriction_basics() {
        let g = v4();
        let alpha = v4_matrix_cocycle(&g);
        let (r, emb) = alpha.restrict(&Subgroup::trivial()).unwrap();
        assert!(r.is_zero());
        assert_eq!(emb, vec![0]);
        let (full, _) = alpha.restrict(&g.whole()).unwrap();
        assert_eq!(full.values(), alpha.values());
    }

    #[test]
    fn standardize_v4() {
        let g = v4();
        let alpha = v4_matrix_cocycle(&g);
        let s = alpha.standardize().unwrap();
        let m = s.modulus();
        for x in 0..4 {
            assert_eq!(s.get(x, g.inv(x)), 0);
            for r in (0..4).filter(|&r| alpha.is_regular(r)) {
                assert_eq!((s.get(x, r) + s.get(g.mul(x, r), g.inv(x))) % m, 0);
            }
        }
        assert!(is_cohomologous(&s.lift(m).unwrap(), &alpha.lift(m).unwrap()).unwrap().is_cohomologous());
        assert!(Cocycle::zero(g, 2).standardize().unwrap().is_zero());
    }
}
