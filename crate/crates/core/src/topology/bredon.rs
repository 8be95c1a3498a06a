//! Orbit-cell cochains with coefficients `F(G/H) = R_α(H) ⊗ Q`.
//!
//! A twisted character of `H` is a character of the preimage of `H` in `G̃_α`
//! on which the center acts by the tautological character, so the structure
//! maps of the coefficient system are conjugation by `(γ, 0)` inside `G̃_α`
//! followed by restriction.

use std::collections::HashMap;

use serde::Serialize;

use super::chains::QuotientComplex;
use super::gcomplex::GSimplicialComplex;
use super::sectors::KRank;
use crate::arith::IntCyc;
use crate::cocycle::{same_group, Cocycle};
use crate::error::{Error, Result};
use crate::group::Subgroup;
use crate::linalg::MatrixQ;
use crate::par;
use crate::twisted::TwistedCharacterTable;

/// Coefficient system for the cochain complex.
#[derive(Clone, Copy, Debug)]
pub enum Coefficients<'a> {
    /// `R_α(−) ⊗ Q` restricted to stabilizers.
    Twisted(&'a Cocycle),
    /// `Q` on every orbit with identity structure maps.
    Constant,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BredonCell {
    pub vertices: Vec<usize>,
    pub stabilizer: Vec<usize>,
    /// Rank of the coefficient group on this orbit.
    pub rank: usize,
}

#[derive(Clone, Debug)]
pub struct BredonComplex {
    cells: Vec<Vec<BredonCell>>,
    /// `δ_d : C^d → C^{d+1}`.
    differentials: Vec<MatrixQ>,
}

struct Stalk {
    table: TwistedCharacterTable,
    embedding: Vec<usize>,
}

impl BredonComplex {
    pub fn new(x: &GSimplicialComplex, coefficients: Coefficients<'_>) -> Result<Self> {
        if let Coefficients::Twisted(alpha) = coefficients {
            if !same_group(x.group(), alpha.group()) {
                return Err(Error::validation("cocycle and complex are over different groups"));
            }
        }
        let q = x.full_action().quotient()?;
        let stalks = stalks(x, &q, coefficients)?;
        let rank_of = |s: &Vec<usize>| stalks.as_ref().map_or(1, |m| m[s].table.len());
        let cells: Vec<Vec<BredonCell>> = (0..q.levels())
            .map(|d| {
                q.orbits(d)
                    .iter()
                    .map(|o| BredonCell {
                        vertices: o.vertices.clone(),
                        stabilizer: o.stabilizer.clone(),
                        rank: rank_of(&o.stabilizer),
                    })
                    .collect()
            })
            .collect();
        let offsets: Vec<Vec<usize>> = cells
            .iter()
            .map(|layer| {
                layer
                    .iter()
                    .scan(0, |acc, c| {
                        let start = *acc;
                        *acc += c.rank;
                        Some(start)
                    })
                    .collect()
            })
            .collect();
        let dims: Vec<usize> = cells.iter().map(|l| l.iter().map(|c| c.rank).sum()).collect();
        let faces: Vec<Vec<Vec<(usize, i64)>>> = (0..q.levels()).map(|d| x.complex().boundary(d)).collect();

        let mut differentials = Vec::new();
        for d in 1..q.levels() {
            let mut delta = MatrixQ::zeros(dims[d], dims[d - 1]);
            for (o, sigma) in q.orbits(d).iter().enumerate() {
                for &(face, incidence) in &faces[d][sigma.representative] {
                    let c = q.orbit_of(d - 1, face);
                    let tau = &q.orbits(d - 1)[c.orbit];
                    let block = match (&stalks, coefficients) {
                        (Some(m), Coefficients::Twisted(alpha)) => {
                            structure_map(alpha, &m[&tau.stabilizer], &m[&sigma.stabilizer], c.transporter)?
                        }
                        _ => vec![vec![1]],
                    };
                    let sign = incidence * c.sign;
                    for (j, row) in block.iter().enumerate() {
                        for (k, &v) in row.iter().enumerate() {
                            if v != 0 {
                                let (r, col) = (offsets[d][o] + j, offsets[d - 1][c.orbit] + k);
                                delta[(r, col)] += num_rational::BigRational::from_integer((sign * v).into());
                            }
                        }
                    }
                }
            }
            differentials.push(delta);
        }
        for d in 1..differentials.len() {
            if !differentials[d].mul(&differentials[d - 1])?.is_zero() {
                return Err(Error::internal(format!("Bredon differential squares to a nonzero map in degree {d}")));
            }
        }
        Ok(BredonComplex { cells, differentials })
    }

    pub fn cells(&self, d: usize) -> &[BredonCell] {
        self.cells.get(d).map_or(&[], Vec::as_slice)
    }

    /// Ranks of the cochain groups.
    pub fn dimensions(&self) -> Vec<usize> {
        self.cells.iter().map(|l| l.iter().map(|c| c.rank).sum()).collect()
    }

    pub fn differential(&self, d: usize) -> Option<&MatrixQ> {
        self.differentials.get(d)
    }

    /// Rational cohomology ranks by degree.
    pub fn cohomology(&self) -> Vec<usize> {
        let ranks: Vec<usize> = self.differentials.iter().map(MatrixQ::rank).collect();
        let rank = |d: isize| if d < 0 { 0 } else { ranks.get(d as usize).copied().unwrap_or(0) };
        self.dimensions().iter().enumerate().map(|(d, &n)| n - rank(d as isize) - rank(d as isize - 1)).collect()
    }

    pub fn krank(&self) -> KRank {
        KRank::from_degrees(&self.cohomology())
    }
}

fn stalks(
    x: &GSimplicialComplex,
    q: &QuotientComplex,
    coefficients: Coefficients<'_>,
) -> Result<Option<HashMap<Vec<usize>, Stalk>>> {
    let Coefficients::Twisted(alpha) = coefficients else {
        return Ok(None);
    };
    let mut distinct: Vec<Vec<usize>> =
        (0..q.levels()).flat_map(|d| q.orbits(d).iter().map(|o| o.stabilizer.clone())).collect();
    distinct.sort();
    distinct.dedup();
    let built = par::try_map_slice(&distinct, |s| {
        let h = Subgroup::new(x.group(), s.clone())?;
        let (res, embedding) = alpha.restrict(&h)?;
        Ok::<_, Error>(Stalk { table: TwistedCharacterTable::new(&res)?, embedding })
    })?;
    Ok(Some(distinct.into_iter().zip(built).collect()))
}

/// Matrix of `R_α(G_τ) → R_α(G_σ)`, `χ ↦ res(c_γ χ)`, where `G_σ ⊆ γ G_τ γ⁻¹`.
/// Columns index irreducibles of `G_τ`, rows those of `G_σ`.
fn structure_map(alpha: &Cocycle, tau: &Stalk, sigma: &Stalk, gamma: usize) -> Result<Vec<Vec<i64>>> {
    let g = alpha.group();
    let m = alpha.modulus();
    let gi = g.inv(gamma);
    let a_gg = alpha.get(gamma, gi);
    let mut columns = Vec::with_capacity(tau.table.len());
    for row in tau.table.rows() {
        let f = sigma
            .embedding
            .iter()
            .map(|&x| {
                let y = g.conjugate(x, gi);
                let local = tau
                    .embedding
                    .binary_search(&y)
                    .map_err(|_| Error::internal("face stabilizer does not contain the conjugated cell stabilizer"))?;
                // (γ,0)⁻¹ (x,0) (γ,0) = (γ⁻¹xγ, c)
                let c = (alpha.get(gi, x) + alpha.get(g.mul(gi, x), gamma) + m - a_gg) % m;
                Ok(&IntCyc::root(m as usize, c as i64) * &row[local])
            })
            .collect::<Result<Vec<IntCyc>>>()?;
        columns.push(sigma.table.decompose(&f)?);
    }
    Ok((0..sigma.table.len()).map(|j| columns.iter().map(|col| col[j]).collect()).collect())
}
