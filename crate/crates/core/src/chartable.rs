//! Ordinary character tables.
//!
//! Central characters are found as joint eigenvectors of the class-multiplication
//! matrices over `F_p` with `p ≡ 1 (mod exp G)`, then lifted to exact values in
//! `Z[ζ_e]` from the power maps. Every table is certified by exact row and
//! column orthogonality before it is returned.

use std::sync::Arc;

use num_rational::Rational64;

use crate::arith::IntCyc;
use crate::error::{Error, Result};
use crate::group::{ConjugacyClassSet, FiniteGroup};
use crate::par;

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Smallest prime `p ≡ 1 (mod e)` with `p > 2√n`, and a primitive `e`-th root of unity mod `p`.
fn dixon_prime(n: usize, e: usize) -> (u64, u64) {
    let e = e as u64;
    let mut p = e + 1;
    while !(is_prime(p) && (p * p) > 4 * n as u64) {
        p += e;
    }
    let factors = prime_factors(p - 1);
    let g = (2..p).find(|&g| factors.iter().all(|&q| pow_mod(g, (p - 1) / q, p) != 1)).unwrap_or(1);
    (p, pow_mod(g, (p - 1) / e, p))
}

/// Row-reduced basis of a subspace of `F_p^k`.
#[derive(Clone)]
struct Subspace {
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

fn row_reduce(mut rows: Vec<Vec<u64>>, p: u64) -> Subspace {
    let width = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..width {
        let Some(i) = (r..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
        rows.swap(r, i);
        let inv = inv_mod(rows[r][c], p);
        for x in rows[r].iter_mut() {
            *x = *x * inv % p;
        }
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let f = row[c];
                for (x, &y) in row.iter_mut().zip(&pivot).take(width) {
                    *x = (*x + (p - f) * y) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    Subspace { rows, pivots }
}

/// Null space of a square matrix mod `p`.
fn null_space(a: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let d = a.len();
    let red = row_reduce(a.to_vec(), p);
    let free: Vec<usize> = (0..d).filter(|c| !red.pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0u64; d];
            v[f] = 1;
            for (row, &pc) in red.rows.iter().zip(&red.pivots) {
                v[pc] = (p - row[f]) % p;
            }
            v
        })
        .collect()
}

/// `(1/|G|) Σ_k |C_k| f_k · conj(h_k)` for class functions.
pub fn class_inner_product(order: usize, sizes: &[usize], f: &[IntCyc], h: &[IntCyc]) -> Result<Rational64> {
    let mut total = IntCyc::from_int(1, 0);
    for ((x, y), &s) in f.iter().zip(h).zip(sizes) {
        total = &total + &(x * &y.conjugate()).scale(s as i64);
    }
    let num = total.to_integer().ok_or_else(|| Error::internal("inner product is not rational"))?;
    Ok(Rational64::new(num, order as i64))
}

#[derive(Clone, Debug)]
pub struct CharacterTable {
    group: Arc<FiniteGroup>,
    classes: ConjugacyClassSet,
    level: usize,
    rows: Vec<Vec<IntCyc>>,
}

impl CharacterTable {
    pub fn new(group: &Arc<FiniteGroup>) -> Result<Self> {
        let g = &**group;
        let n = g.order();
        let classes = g.conjugacy_classes();
        let k = classes.len();
        let sizes = classes.sizes();
        let e = g.exponent();
        let (p, z) = dixon_prime(n, e);

        // a[i][j][c] = #{x ∈ C_i : x⁻¹ g_c ∈ C_j}
        let reps = classes.representatives().to_vec();
        let counts = par::map_range(k, |c| {
            let mut local = vec![vec![0u64; k]; k];
            for x in 0..n {
                let j = classes.class_of(g.mul(g.inv(x), reps[c]));
                local[classes.class_of(x)][j] += 1;
            }
            local
        });
        let structure = |i: usize, j: usize, c: usize| counts[c][i][j] % p;

        let mut spaces = vec![row_reduce((0..k).map(|i| (0..k).map(|j| u64::from(i == j)).collect()).collect(), p)];
        for i in 1..k {
            if spaces.iter().all(|s| s.rows.len() == 1) {
                break;
            }
            let mut next = Vec::new();
            for s in spaces {
                let d = s.rows.len();
                if d == 1 {
                    next.push(s);
                    continue;
                }
                // restricted matrix: column j holds the coordinates of M_i b_j
                let images: Vec<Vec<u64>> = s
                    .rows
                    .iter()
                    .map(|b| (0..k).map(|r| (0..k).map(|c| structure(i, r, c) * b[c] % p).sum::<u64>() % p).collect())
                    .collect();
                let a: Vec<Vec<u64>> = (0..d).map(|l| (0..d).map(|j| images[j][s.pivots[l]]).collect()).collect();
                let mut pieces = Vec::new();
                let mut found = 0;
                for lambda in 0..p {
                    let shifted: Vec<Vec<u64>> = a
                        .iter()
                        .enumerate()
                        .map(|(r, row)| {
                            row.iter()
                                .enumerate()
                                .map(|(c, &x)| if r == c { (x + p - lambda) % p } else { x })
                                .collect()
                        })
                        .collect();
                    let ker = null_space(&shifted, p);
                    if ker.is_empty() {
                        continue;
                    }
                    found += ker.len();
                    let vecs: Vec<Vec<u64>> = ker
                        .iter()
                        .map(|y| {
                            (0..k)
                                .map(|c| y.iter().zip(&s.rows).map(|(&yl, b)| yl * b[c] % p).sum::<u64>() % p)
                                .collect()
                        })
                        .collect();
                    pieces.push(row_reduce(vecs, p));
                    if found == d {
                        break;
                    }
                }
                if found != d {
                    return Err(Error::internal("class matrix is not diagonalizable mod p"));
                }
                next.extend(pieces);
            }
            spaces = next;
        }
        if spaces.len() != k {
            return Err(Error::internal("joint eigenspaces did not separate"));
        }

        let inverse_class: Vec<usize> = reps.iter().map(|&r| classes.class_of(g.inv(r))).collect();
        let power_class: Vec<Vec<usize>> =
            reps.iter().map(|&r| (0..e).map(|l| classes.class_of(g.pow(r, l))).collect()).collect();
        let zinv = inv_mod(z, p);
        let einv = inv_mod(e as u64 % p, p);
        let max_degree = (n as f64).sqrt() as u64 + 1;
        let mut rows = Vec::with_capacity(k);
        for s in &spaces {
            let w = &s.rows[0];
            if w[0] == 0 {
                return Err(Error::internal("central character vanishes at the identity"));
            }
            let w0 = inv_mod(w[0], p);
            let omega: Vec<u64> = w.iter().map(|&x| x * w0 % p).collect();
            let mut s_sum = 0u64;
            for c in 0..k {
                s_sum = (s_sum + omega[c] * omega[inverse_class[c]] % p * inv_mod(sizes[c] as u64 % p, p)) % p;
            }
            let d2 = (n as u64 % p) * inv_mod(s_sum, p) % p;
            let d = (1..=max_degree)
                .find(|&d| d * d % p == d2)
                .ok_or_else(|| Error::internal("no integral degree for a central character"))?;
            let chi_p: Vec<u64> = (0..k).map(|c| omega[c] * d % p * inv_mod(sizes[c] as u64 % p, p) % p).collect();
            let mut row = Vec::with_capacity(k);
            for c in 0..k {
                let mut mult = vec![0i64; e];
                for (j, mj) in mult.iter_mut().enumerate() {
                    let step = pow_mod(zinv, j as u64, p);
                    let mut acc = 0u64;
                    let mut zl = 1u64;
                    for l in 0..e {
                        acc = (acc + chi_p[power_class[c][l]] * zl) % p;
                        zl = zl * step % p;
                    }
                    let v = acc * einv % p;
                    if v > d {
                        return Err(Error::internal("character multiplicity lift out of range"));
                    }
                    *mj = v as i64;
                }
                row.push(IntCyc::from_coeffs(e, mult));
            }
            rows.push(row);
        }
        rows.sort_by(|a, b| {
            let key = |r: &Vec<IntCyc>| r.iter().map(IntCyc::canonical).collect::<Vec<_>>();
            let da = a[0].to_integer();
            let db = b[0].to_integer();
            da.cmp(&db).then_with(|| key(b).cmp(&key(a)))
        });
        let table = CharacterTable { group: group.clone(), classes, level: e, rows };
        table.certify()?;
        Ok(table)
    }

    /// Exact orthogonality of rows and columns, and `Σ d² = |G|`.
    fn certify(&self) -> Result<()> {
        let n = self.group.order();
        let sizes = self.classes.sizes();
        let k = self.rows.len();
        let bad = par::map_range(k, |i| {
            (0..=i).any(|j| {
                let ip = class_inner_product(n, &sizes, &self.rows[i], &self.rows[j]);
                !matches!(ip, Ok(v) if v == Rational64::from_integer(i64::from(i == j)))
            })
        });
        if bad.iter().any(|&b| b) {
            return Err(Error::internal("character rows are not orthonormal"));
        }
        for c in 0..k {
            for c2 in 0..=c {
                let mut total = IntCyc::from_int(1, 0);
                for row in &self.rows {
                    total = &total + &(&row[c] * &row[c2].conjugate());
                }
                let expected = if c == c2 { (n / sizes[c]) as i64 } else { 0 };
                if total.to_integer() != Some(expected) {
                    return Err(Error::internal("character columns are not orthogonal"));
                }
            }
        }
        let sum: i64 = self.degrees().iter().map(|d| d * d).sum();
        if sum != n as i64 {
            return Err(Error::internal("squared degrees do not sum to the group order"));
        }
        Ok(())
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn classes(&self) -> &ConjugacyClassSet {
        &self.classes
    }

    /// Cyclotomic level of all values.
    pub fn level(&self) -> usize {
        self.level
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Rows indexed by character, then conjugacy class.
    pub fn rows(&self) -> &[Vec<IntCyc>] {
        &self.rows
    }

    pub fn degrees(&self) -> Vec<i64> {
        self.rows.iter().map(|r| r[0].to_integer().expect("degrees are integers")).collect()
    }

    /// `χ_i(g)`.
    pub fn value(&self, i: usize, g: usize) -> &IntCyc {
        &self.rows[i][self.classes.class_of(g)]
    }

    /// Multiplicities of a class function; errors unless they are integers.
    pub fn decompose(&self, f: &[IntCyc]) -> Result<Vec<i64>> {
        let n = self.group.order();
        let sizes = self.classes.sizes();
        self.rows
            .iter()
            .map(|row| {
                let ip = class_inner_product(n, &sizes, f, row)?;
                if ip.is_integer() {
                    Ok(ip.to_integer())
                } else {
                    Err(Error::internal(format!("non-integral multiplicity {ip}")))
                }
            })
            .collect()
    }
}
