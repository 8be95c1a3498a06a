//! Linear algebra over `Z/m` for arbitrary `m ≥ 1`.
//!
//! [`HowellForm`] is an echelon basis of a submodule of `(Z/m)^n` with the
//! Howell property: the rows whose pivot lies at or after column `c` span every
//! element of the module that vanishes before `c`. Greedy reduction against it
//! therefore decides membership and yields the lexicographically smallest
//! element of a coset.

use crate::error::{Error, Result};

fn gcd(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}

/// `(g, s, t)` with `s·a + t·b = g = gcd(a, b)`, over the integers.
fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, s, t) = ext_gcd(b, a % b);
        (g, t, s - (a / b) * t)
    }
}

fn to_mod(x: i128, m: u64) -> u64 {
    x.rem_euclid(m as i128) as u64
}

/// A unit `u` mod `m` with `u·a ≡ gcd(a, m) (mod m)`.
fn normalizing_unit(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let g = gcd(a, m);
    let a1 = a / g;
    let m1 = m / g;
    // u ≡ a1⁻¹ (mod m1), then shift by multiples of m1 until coprime to m
    let (_, s, _) = ext_gcd(a1 as i128, m1 as i128);
    let base = to_mod(s, m1.max(1));
    let mut u = base;
    while gcd(u, m) != 1 {
        u += m1;
    }
    u % m
}

fn axpy(dst: &mut [u64], k: u64, src: &[u64], m: u64) {
    if k == 0 {
        return;
    }
    if m == 2 {
        for (d, &s) in dst.iter_mut().zip(src) {
            *d ^= s;
        }
    } else if m <= u32::MAX as u64 {
        for (d, &s) in dst.iter_mut().zip(src) {
            if s != 0 {
                *d = (*d + k * s) % m;
            }
        }
    } else {
        for (d, &s) in dst.iter_mut().zip(src) {
            if s != 0 {
                *d = ((*d as u128 + k as u128 * s as u128) % m as u128) as u64;
            }
        }
    }
}

fn scaled(v: &[u64], k: u64, m: u64) -> Vec<u64> {
    v.iter().map(|&x| ((x as u128 * k as u128) % m as u128) as u64).collect()
}

fn first_nonzero(v: &[u64], from: usize, limit: usize) -> Option<usize> {
    (from..limit).find(|&i| v[i] != 0)
}

#[derive(Clone, Debug)]
pub struct HowellForm {
    m: u64,
    width: usize,
    pivot_limit: usize,
    rows: Vec<Option<Vec<u64>>>,
}

impl HowellForm {
    /// Empty module in `(Z/m)^width`.
    pub fn new(m: u64, width: usize) -> Self {
        Self::with_pivot_limit(m, width, width)
    }

    /// Pivots are only searched for in the first `pivot_limit` columns; the
    /// remaining columns ride along (used to track combinations).
    pub fn with_pivot_limit(m: u64, width: usize, pivot_limit: usize) -> Self {
        assert!(m >= 1 && pivot_limit <= width);
        HowellForm { m, width, pivot_limit, rows: vec![None; pivot_limit] }
    }

    pub fn modulus(&self) -> u64 {
        self.m
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn insert(&mut self, v: &[u64]) {
        assert_eq!(v.len(), self.width);
        let m = self.m;
        if m == 1 {
            return;
        }
        let mut stack: Vec<Vec<u64>> = vec![v.iter().map(|&x| x % m).collect()];
        while let Some(mut v) = stack.pop() {
            let mut cursor = first_nonzero(&v, 0, self.pivot_limit);
            while let Some(c) = cursor {
                match &mut self.rows[c] {
                    slot @ None => {
                        let u = normalizing_unit(v[c], m);
                        let v = scaled(&v, u, m);
                        let g = v[c];
                        if g != 1 {
                            let ann = scaled(&v, m / g, m);
                            if ann.iter().any(|&x| x != 0) {
                                stack.push(ann);
                            }
                        }
                        *slot = Some(v);
                        break;
                    }
                    Some(row) => {
                        let a = row[c];
                        let b = v[c];
                        if b % a == 0 {
                            axpy(&mut v, m - (b / a) % m, row, m);
                        } else {
                            let (h, s, t) = ext_gcd(a as i128, b as i128);
                            let h = h as u64;
                            let mut new_row = scaled(row, to_mod(s, m), m);
                            axpy(&mut new_row, to_mod(t, m), &v, m);
                            let mut rest = scaled(row, (b / h) % m, m);
                            axpy(&mut rest, m - (a / h) % m, &v, m);
                            debug_assert_eq!(new_row[c], h % m);
                            debug_assert_eq!(rest[c], 0);
                            let ann = scaled(&new_row, m / h, m);
                            if ann.iter().any(|&x| x != 0) {
                                stack.push(ann);
                            }
                            *row = new_row;
                            v = rest;
                        }
                        cursor = first_nonzero(&v, c + 1, self.pivot_limit);
                    }
                }
            }
        }
    }

    /// Rows in pivot order.
    pub fn rows(&self) -> impl Iterator<Item = (usize, &Vec<u64>)> {
        self.rows.iter().enumerate().filter_map(|(c, r)| r.as_ref().map(|r| (c, r)))
    }

    pub fn row_at(&self, pivot: usize) -> Option<&Vec<u64>> {
        self.rows.get(pivot).and_then(Option::as_ref)
    }

    /// Number of elements of the spanned module.
    pub fn module_size(&self) -> u128 {
        self.rows().map(|(c, r)| (self.m / r[c]) as u128).product()
    }

    /// Greedy reduction over pivot columns `< upto`. Returns the residual and
    /// the coefficient used for each pivot row.
    pub fn reduce_upto(&self, v: &[u64], upto: usize) -> (Vec<u64>, Vec<(usize, u64)>) {
        let m = self.m;
        let mut v: Vec<u64> = v.iter().map(|&x| x % m).collect();
        let mut coeffs = Vec::new();
        for c in 0..upto.min(self.pivot_limit) {
            if let Some(row) = &self.rows[c] {
                let q = v[c] / row[c];
                if q != 0 {
                    axpy(&mut v, m - q, row, m);
                    coeffs.push((c, q));
                }
            }
        }
        (v, coeffs)
    }

    /// Lexicographically smallest element of `v + span`.
    pub fn reduce(&self, v: &[u64]) -> Vec<u64> {
        self.reduce_upto(v, self.pivot_limit).0
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.reduce(v)[..self.pivot_limit].iter().all(|&x| x == 0)
    }

    /// Unique coordinates `q_c ∈ [0, m/pivot_c)` of a member, per pivot row.
    pub fn coordinates(&self, v: &[u64]) -> Option<Vec<u64>> {
        let (res, used) = self.reduce_upto(v, self.pivot_limit);
        if res[..self.pivot_limit].iter().any(|&x| x != 0) {
            return None;
        }
        let pivots: Vec<usize> = self.rows().map(|(c, _)| c).collect();
        let mut out = vec![0; pivots.len()];
        for (c, q) in used {
            let k = pivots.binary_search(&c).expect("pivot row");
            out[k] = q;
        }
        Some(out)
    }
}

/// Outcome of solving `A x = b` over `Z/m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveOutcome {
    /// A particular solution and generators of the solution module of `A x = 0`.
    Solvable { particular: Vec<u64>, kernel: Vec<Vec<u64>> },
    /// `b` is not in the column module; `residual` is its reduced form (nonzero).
    Infeasible { residual: Vec<u64> },
}

fn check_shape(a: &[Vec<u64>], cols: usize) -> Result<()> {
    if let Some(r) = a.iter().position(|r| r.len() != cols) {
        return Err(Error::Dimension(format!("row {r} has {} entries, expected {cols}", a[r].len())));
    }
    Ok(())
}

/// Howell form of `[Aᵀ | I]`: rows are `(A x, x)` pairs.
fn column_howell(a: &[Vec<u64>], cols: usize, m: u64) -> HowellForm {
    let rows = a.len();
    let mut h = HowellForm::new(m, rows + cols);
    for j in 0..cols {
        let mut v = vec![0u64; rows + cols];
        for i in 0..rows {
            v[i] = a[i][j] % m;
        }
        v[rows + j] = 1 % m;
        h.insert(&v);
    }
    h
}

/// Generators of `{x ∈ (Z/m)^cols : A x = 0}`.
pub fn kernel_mod(a: &[Vec<u64>], cols: usize, m: u64) -> Result<Vec<Vec<u64>>> {
    check_shape(a, cols)?;
    let rows = a.len();
    let h = column_howell(a, cols, m);
    Ok(h.rows().filter(|(c, _)| *c >= rows).map(|(_, r)| r[rows..].to_vec()).collect())
}

/// Solves `A x = b` over `Z/m`.
pub fn solve_mod(a: &[Vec<u64>], cols: usize, b: &[u64], m: u64) -> Result<SolveOutcome> {
    check_shape(a, cols)?;
    let rows = a.len();
    if b.len() != rows {
        return Err(Error::Dimension(format!("rhs has {} entries, expected {rows}", b.len())));
    }
    let h = column_howell(a, cols, m);
    let mut v = vec![0u64; rows + cols];
    for i in 0..rows {
        v[i] = b[i] % m;
    }
    let (res, _) = h.reduce_upto(&v, rows);
    if res[..rows].iter().any(|&x| x != 0) {
        return Ok(SolveOutcome::Infeasible { residual: res[..rows].to_vec() });
    }
    let particular = res[rows..].iter().map(|&x| (m - x) % m).collect();
    let kernel = h.rows().filter(|(c, _)| *c >= rows).map(|(_, r)| r[rows..].to_vec()).collect();
    Ok(SolveOutcome::Solvable { particular, kernel })
}

/// A cyclic factor of a finite abelian group with a chosen generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicFactor {
    pub order: u64,
    pub generator: Vec<u64>,
}

/// Structure of `(Z/m)^cols / ⟨relations⟩` as invariant factors
/// `d_1 | d_2 | …` (all `> 1`) with generators.
pub fn smith_quotient(relations: &[Vec<u64>], cols: usize, m: u64) -> Result<Vec<CyclicFactor>> {
    check_shape(relations, cols)?;
    if m == 1 {
        return Ok(Vec::new());
    }
    let mut a: Vec<Vec<u64>> = relations.iter().map(|r| r.iter().map(|&x| x % m).collect()).collect();
    let rows = a.len();
    // rows of vinv are the images of the standard basis under V⁻¹
    let mut vinv: Vec<Vec<u64>> = (0..cols)
        .map(|i| {
            let mut e = vec![0u64; cols];
            e[i] = 1;
            e
        })
        .collect();
    let mut diag = Vec::new();
    let rank_bound = rows.min(cols);
    let mut t = 0;
    while t < rank_bound {
        // pivot with the smallest ideal
        let mut best: Option<(u64, usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, &x) in row.iter().enumerate().skip(t) {
                if x != 0 {
                    let g = gcd(x, m);
                    if best.is_none_or(|(bg, _, _)| g < bg) {
                        best = Some((g, i, j));
                    }
                }
            }
        }
        let Some((_, pi, pj)) = best else { break };
        a.swap(t, pi);
        if pj != t {
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            vinv.swap(t, pj);
        }
        loop {
            let u = normalizing_unit(a[t][t], m);
            a[t] = scaled(&a[t], u, m);
            let g = a[t][t];
            let mut dirty = false;
            for i in t + 1..rows {
                let b = a[i][t];
                if b == 0 {
                    continue;
                }
                if b.is_multiple_of(g) {
                    let (head, tail) = a.split_at_mut(i);
                    axpy(&mut tail[0], m - (b / g) % m, &head[t], m);
                } else {
                    let (h, s, tt) = ext_gcd(g as i128, b as i128);
                    let h = h as u64;
                    let rt = a[t].clone();
                    let ri = a[i].clone();
                    let mut new_t = scaled(&rt, to_mod(s, m), m);
                    axpy(&mut new_t, to_mod(tt, m), &ri, m);
                    let mut new_i = scaled(&rt, (b / h) % m, m);
                    axpy(&mut new_i, m - (g / h) % m, &ri, m);
                    a[t] = new_t;
                    a[i] = new_i;
                    dirty = true;
                    break;
                }
            }
            if dirty {
                continue;
            }
            for j in t + 1..cols {
                let b = a[t][j];
                if b == 0 {
                    continue;
                }
                if b.is_multiple_of(g) {
                    let q = (b / g) % m;
                    for row in a.iter_mut() {
                        let v = (row[j] + m - (q * row[t]) % m) % m;
                        row[j] = v;
                    }
                    // V⁻¹ ← (I + q e_t e_jᵀ) V⁻¹
                    let rj = vinv[j].clone();
                    axpy(&mut vinv[t], q, &rj, m);
                } else {
                    let (h, s, uu) = ext_gcd(g as i128, b as i128);
                    let h = h as u64;
                    let (s, uu) = (to_mod(s, m), to_mod(uu, m));
                    let (ah, bh) = ((g / h) % m, (b / h) % m);
                    for row in a.iter_mut() {
                        let ct = row[t];
                        let cj = row[j];
                        row[t] = ((s as u128 * ct as u128 + uu as u128 * cj as u128) % m as u128) as u64;
                        row[j] =
                            ((ah as u128 * cj as u128 + (m - bh) as u128 % m as u128 * ct as u128) % m as u128) as u64;
                    }
                    let vt = vinv[t].clone();
                    let vj = vinv[j].clone();
                    let mut new_t = scaled(&vt, ah, m);
                    axpy(&mut new_t, bh, &vj, m);
                    let mut new_j = scaled(&vt, (m - uu) % m, m);
                    axpy(&mut new_j, s, &vj, m);
                    vinv[t] = new_t;
                    vinv[j] = new_j;
                    dirty = true;
                    break;
                }
            }
            if !dirty {
                break;
            }
        }
        diag.push(a[t][t]);
        t += 1;
    }
    // cyclic pieces Z/gcd(d, m), generators are rows of V⁻¹
    let mut pieces: Vec<(u64, Vec<u64>)> = Vec::new();
    for (i, gen) in vinv.into_iter().enumerate() {
        let d = diag.get(i).copied().unwrap_or(0);
        let order = if d == 0 { m } else { gcd(d, m) };
        if order > 1 {
            pieces.push((order, gen));
        }
    }
    Ok(invariant_factors(pieces, m))
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Per prime `p`, the `p`-power cyclic pieces as `(order, generator)`.
type PrimaryParts = Vec<(u64, Vec<(u64, Vec<u64>)>)>;

/// Regroups a direct sum of cyclic groups into invariant-factor form.
fn invariant_factors(pieces: Vec<(u64, Vec<u64>)>, m: u64) -> Vec<CyclicFactor> {
    let width = pieces.first().map_or(0, |p| p.1.len());
    let mut by_prime: PrimaryParts = prime_factors(m).into_iter().map(|p| (p, Vec::new())).collect();
    for (order, gen) in &pieces {
        for (p, list) in by_prime.iter_mut() {
            let mut pk = 1;
            while order % (pk * *p) == 0 {
                pk *= *p;
            }
            if pk > 1 {
                list.push((pk, scaled(gen, order / pk, m)));
            }
        }
    }
    let count = by_prime.iter().map(|(_, l)| l.len()).max().unwrap_or(0);
    for (_, list) in by_prime.iter_mut() {
        list.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
    }
    let mut out: Vec<CyclicFactor> = (0..count)
        .map(|k| {
            let mut order = 1;
            let mut generator = vec![0u64; width];
            for (_, list) in &by_prime {
                if let Some((pk, g)) = list.get(k) {
                    order *= pk;
                    axpy(&mut generator, 1, g, m);
                }
            }
            CyclicFactor { order, generator }
        })
        .collect();
    out.reverse();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::HashSet;

    fn span_brute(rows: &[Vec<u64>], width: usize, m: u64) -> HashSet<Vec<u64>> {
        let mut set: HashSet<Vec<u64>> = HashSet::new();
        set.insert(vec![0; width]);
        loop {
            let before = set.len();
            let snapshot: Vec<Vec<u64>> = set.iter().cloned().collect();
            for v in &snapshot {
                for r in rows {
                    let w: Vec<u64> = v.iter().zip(r).map(|(a, b)| (a + b) % m).collect();
                    set.insert(w);
                }
            }
            if set.len() == before {
                return set;
            }
        }
    }

    fn all_vectors(width: usize, m: u64) -> Vec<Vec<u64>> {
        let mut out = vec![vec![]];
        for _ in 0..width {
            out = out
                .into_iter()
                .flat_map(|v| {
                    (0..m).map(move |x| {
                        let mut w = v.clone();
                        w.push(x);
                        w
                    })
                })
                .collect();
        }
        out
    }

    proptest! {
        #[test]
        fn howell_membership_matches_brute_force(m in 2u64..13, rows in prop::collection::vec(prop::collection::vec(0u64..12, 3), 0..4)) {
            let rows: Vec<Vec<u64>> = rows.into_iter().map(|r| r.into_iter().map(|x| x % m).collect()).collect();
            let mut h = HowellForm::new(m, 3);
            for r in &rows { h.insert(r); }
            let span = span_brute(&rows, 3, m);
            prop_assert_eq!(h.module_size(), span.len() as u128);
            for v in all_vectors(3, m) {
                prop_assert_eq!(h.contains(&v), span.contains(&v));
                // reduction returns the lexicographic minimum of the coset
                let red = h.reduce(&v);
                let min = span.iter().map(|s| v.iter().zip(s).map(|(a, b)| (a + m - b) % m).collect::<Vec<u64>>()).min().unwrap();
                prop_assert_eq!(red, min);
            }
        }

        #[test]
        fn smith_quotient_order_matches_brute_force(m in 2u64..13, rows in prop::collection::vec(prop::collection::vec(0u64..12, 3), 0..4)) {
            let rows: Vec<Vec<u64>> = rows.into_iter().map(|r| r.into_iter().map(|x| x % m).collect()).collect();
            let factors = smith_quotient(&rows, 3, m).unwrap();
            let span = span_brute(&rows, 3, m);
            let order: u64 = factors.iter().map(|f| f.order).product();
            prop_assert_eq!(order as usize * span.len(), (m as usize).pow(3));
            for w in factors.windows(2) {
                prop_assert_eq!(w[1].order % w[0].order, 0);
            }
            // each generator has exactly the advertised order in the quotient,
            // and together they generate it
            let mut h = HowellForm::new(m, 3);
            for r in &rows { h.insert(r); }
            for f in &factors {
                let mut acc = vec![0u64; 3];
                for k in 1..=f.order {
                    acc = acc.iter().zip(&f.generator).map(|(a, b)| (a + b) % m).collect();
                    prop_assert_eq!(h.contains(&acc), k == f.order);
                }
            }
        }

        #[test]
        fn solve_mod_solutions_are_valid(m in 2u64..10, a in prop::collection::vec(prop::collection::vec(0u64..10, 3), 1..4), x in prop::collection::vec(0u64..10, 3)) {
            let a: Vec<Vec<u64>> = a.into_iter().map(|r| r.into_iter().map(|v| v % m).collect()).collect();
            let b: Vec<u64> = a.iter().map(|r| r.iter().zip(&x).map(|(p, q)| p * q).sum::<u64>() % m).collect();
            match solve_mod(&a, 3, &b, m).unwrap() {
                SolveOutcome::Solvable { particular, kernel } => {
                    let ax: Vec<u64> = a.iter().map(|r| r.iter().zip(&particular).map(|(p, q)| p * q).sum::<u64>() % m).collect();
                    prop_assert_eq!(ax, b);
                    for k in kernel {
                        prop_assert!(a.iter().all(|r| r.iter().zip(&k).map(|(p, q)| p * q).sum::<u64>() % m == 0));
                    }
                }
                SolveOutcome::Infeasible { .. } => prop_assert!(false, "constructed system must be solvable"),
            }
        }
    }

    #[test]
    fn infeasible_system_is_detected() {
        // 2x = 1 mod 4
        let out = solve_mod(&[vec![2]], 1, &[1], 4).unwrap();
        assert!(matches!(out, SolveOutcome::Infeasible { .. }));
    }

    #[test]
    fn kernel_of_gf2_system() {
        let k = kernel_mod(&[vec![1, 1, 0], vec![0, 1, 1]], 3, 2).unwrap();
        assert_eq!(k, vec![vec![1, 1, 1]]);
        assert!(kernel_mod(&[vec![1, 1]], 3, 2).is_err());
    }

    #[test]
    fn smith_quotient_composite() {
        // (Z/12)^2 / <(4, 0), (0, 6)> = Z/4 ⊕ Z/6 ≅ Z/2 ⊕ Z/12
        let f = smith_quotient(&[vec![4, 0], vec![0, 6]], 2, 12).unwrap();
        let orders: Vec<u64> = f.iter().map(|x| x.order).collect();
        assert_eq!(orders, vec![2, 12]);
    }
}
