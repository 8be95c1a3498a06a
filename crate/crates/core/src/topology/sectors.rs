use std::collections::HashMap;
use std::ops::Add;

use num_integer::Integer;
use serde::Serialize;

use super::gcomplex::GSimplicialComplex;
use crate::arith::{euler_phi, Cyclotomic};
use crate::cocycle::{same_group, Cocycle};
use crate::error::{Error, Result};
use crate::group::Subgroup;
use crate::linalg::MatrixQ;
use crate::par;
use crate::twisted::rank_r_alpha;

/// Z/2-graded rational ranks: even degrees count towards `k0`, odd towards `k1`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct KRank {
    pub k0: usize,
    pub k1: usize,
}

impl KRank {
    pub fn new(k0: usize, k1: usize) -> Self {
        KRank { k0, k1 }
    }

    pub fn from_degrees(dims: &[usize]) -> Self {
        let k0 = dims.iter().step_by(2).sum();
        let k1 = dims.iter().skip(1).step_by(2).sum();
        KRank { k0, k1 }
    }

    pub fn euler(&self) -> i64 {
        self.k0 as i64 - self.k1 as i64
    }

    pub fn total(&self) -> usize {
        self.k0 + self.k1
    }
}

impl Add for KRank {
    type Output = KRank;
    fn add(self, rhs: KRank) -> KRank {
        KRank { k0: self.k0 + rhs.k0, k1: self.k1 + rhs.k1 }
    }
}

impl std::iter::Sum for KRank {
    fn sum<I: Iterator<Item = KRank>>(iter: I) -> KRank {
        iter.fold(KRank::default(), Add::add)
    }
}

/// One summand `X^⟨g⟩/Z_G(g)` of the element-indexed decomposition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Sector {
    pub representative: usize,
    pub class_size: usize,
    pub centralizer_order: usize,
    /// Cell counts of the fixed subcomplex `X^⟨g⟩`.
    pub fixed_cells: Vec<usize>,
    /// Orbit-cell counts of the quotient by the centralizer.
    pub quotient_cells: Vec<usize>,
    pub betti: Vec<usize>,
}

impl Sector {
    pub fn krank(&self) -> KRank {
        KRank::from_degrees(&self.betti)
    }

    pub fn euler(&self) -> i64 {
        self.krank().euler()
    }
}

/// Sectors in conjugacy-class order; the first entry (`g = 1`) is `X/G` and
/// the remaining entries make up the orbifold resolution `Σ̃X`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SectorList {
    pub entries: Vec<Sector>,
}

impl SectorList {
    pub fn untwisted(&self) -> &Sector {
        &self.entries[0]
    }

    pub fn twisted_sectors(&self) -> &[Sector] {
        &self.entries[1..]
    }

    pub fn krank(&self) -> KRank {
        self.entries.iter().map(Sector::krank).sum()
    }

    /// `χ(Σ̃X)`.
    pub fn resolution_euler(&self) -> i64 {
        self.twisted_sectors().iter().map(Sector::euler).sum()
    }
}

pub fn sector_decomposition(x: &GSimplicialComplex) -> Result<SectorList> {
    let group = x.group();
    let classes = group.conjugacy_classes();
    let entries = par::try_map_range(classes.len(), |c| {
        let g = classes.representative(c);
        let fixed = x.fixed_subcomplex(&[g]);
        let fixed_cells = fixed.cell_counts();
        let centralizer = group.centralizer(g);
        let q = x.cell_action(fixed, centralizer.elements().to_vec())?.quotient()?;
        Ok(Sector {
            representative: g,
            class_size: classes.size(c),
            centralizer_order: centralizer.order(),
            fixed_cells,
            quotient_cells: q.cell_counts(),
            betti: q.betti(),
        })
    })?;
    Ok(SectorList { entries })
}

/// One summand `(H_*(X^⟨g⟩) ⊗ L_g^α)^{Z_G(g)}` of the twisted decomposition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwistedSector {
    pub representative: usize,
    pub regular: bool,
    /// Dimension over `Q(ζ)` in each degree.
    pub dims: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwistedDecomposition {
    pub sectors: Vec<TwistedSector>,
    pub krank: KRank,
}

fn check_group(x: &GSimplicialComplex, alpha: &Cocycle) -> Result<()> {
    if same_group(x.group(), alpha.group()) {
        Ok(())
    } else {
        Err(Error::validation("cocycle and complex are over different groups"))
    }
}

/// Rational ranks of `^αK^*_G(X)` from the fixed-point decomposition.
pub fn twisted_k_ranks(x: &GSimplicialComplex, alpha: &Cocycle) -> Result<TwistedDecomposition> {
    check_group(x, alpha)?;
    let group = x.group();
    let classes = group.conjugacy_classes();
    let m = alpha.modulus();
    let sectors = par::try_map_range(classes.len(), |c| {
        let g = classes.representative(c);
        let l = alpha.l_character(g);
        let elements = l.domain().elements().to_vec();
        // smallest level carrying the character values
        let step = l.values().iter().fold(m, |acc, &v| acc.gcd(&v));
        let level = (m / step) as usize;
        let blocks: Vec<MatrixQ> =
            l.values().iter().map(|&v| Cyclotomic::root(level, (v / step) as i64).multiplication_matrix()).collect();
        let phi = euler_phi(level);
        let action = x.cell_action(x.fixed_subcomplex(&[g]), elements)?;
        let dims = action
            .projected_homology(&blocks)?
            .into_iter()
            .map(|q| {
                if q % phi == 0 {
                    Ok(q / phi)
                } else {
                    Err(Error::internal(format!("projected rank {q} is not a multiple of [Q(ζ):Q] = {phi}")))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(TwistedSector { representative: g, regular: l.is_trivial(), dims })
    })?;
    let krank = sectors.iter().map(|s| KRank::from_degrees(&s.dims)).sum();
    Ok(TwistedDecomposition { sectors, krank })
}

/// `Σ_σ (−1)^{dim σ} rank R_α(G_σ)` over orbit cells.
pub fn chi_orb_cells(x: &GSimplicialComplex, alpha: &Cocycle) -> Result<i64> {
    check_group(x, alpha)?;
    let q = x.full_action().quotient()?;
    let stabilizers: Vec<(usize, Vec<usize>)> =
        (0..q.levels()).flat_map(|d| q.orbits(d).iter().map(move |o| (d, o.stabilizer.clone()))).collect();
    let mut distinct: Vec<Vec<usize>> = stabilizers.iter().map(|(_, s)| s.clone()).collect();
    distinct.sort();
    distinct.dedup();
    let ranks = par::try_map_slice(&distinct, |s| {
        let h = Subgroup::new(x.group(), s.clone())?;
        rank_r_alpha(&alpha.restrict(&h)?.0)
    })?;
    let rank_of: HashMap<&Vec<usize>, usize> = distinct.iter().zip(ranks).collect();
    Ok(stabilizers
        .iter()
        .map(|(d, s)| {
            let r = rank_of[s] as i64;
            if d % 2 == 0 {
                r
            } else {
                -r
            }
        })
        .sum())
}

/// The summand of one conjugacy class of cyclic subgroups `C`:
/// `dim_Q [H^*(X^C/Z_G(C)) ⊗ Q(ζ_|C|)]^{W_G(C)}`, per degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CyclicSummand {
    pub generator: usize,
    pub order: usize,
    pub weyl_order: usize,
    pub dims: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CyclicDecomposition {
    pub summands: Vec<CyclicSummand>,
    pub total: usize,
}

/// Matrix of `ζ ↦ ζ^k` on the power basis of `Q(ζ_n)`.
fn galois_matrix(n: usize, k: usize) -> MatrixQ {
    let phi = euler_phi(n);
    let mut m = MatrixQ::zeros(phi, phi);
    for j in 0..phi {
        for (i, x) in Cyclotomic::root(n, (j * k) as i64).canonical().into_iter().enumerate() {
            m[(i, j)] = x;
        }
    }
    m
}

/// Rational dimension of the decomposition indexed by cyclic subgroups.
///
/// The normalizer acts on `H_*(X^C) ⊗ Q(ζ_|C|)` through its topological
/// action and the Galois action; invariants under `N_G(C)` equal the
/// `W_G(C)`-invariants of the centralizer quotient.
pub fn cyclic_decomposition(x: &GSimplicialComplex) -> Result<CyclicDecomposition> {
    let classes = x.group().cyclic_subgroup_classes();
    let summands = par::try_map_slice(&classes, |c| {
        let order = c.subgroup.order();
        let blocks: Vec<MatrixQ> = c.galois_exponents.iter().map(|&k| galois_matrix(order, k)).collect();
        let fixed = x.fixed_subcomplex(c.subgroup.elements());
        let action = x.cell_action(fixed, c.normalizer.elements().to_vec())?;
        Ok(CyclicSummand {
            generator: c.generator,
            order,
            weyl_order: c.weyl_order(),
            dims: action.projected_homology(&blocks)?,
        })
    })?;
    let total = summands.iter().map(|s| s.dims.iter().sum::<usize>()).sum();
    Ok(CyclicDecomposition { summands, total })
}
