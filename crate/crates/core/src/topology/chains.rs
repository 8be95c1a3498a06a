use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::complex::{alternating, dense, SimplicialComplex};
use super::gcomplex::GSimplicialComplex;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::linalg::MatrixQ;

/// A set of group elements acting on a complex by signed permutations of cells.
#[derive(Clone, Debug)]
pub struct CellAction {
    group: Arc<FiniteGroup>,
    complex: SimplicialComplex,
    elements: Vec<usize>,
    /// `maps[pos][d][cell] = (image, ε)` with `g·[cell] = ε·[image]`.
    maps: Vec<Vec<Vec<(usize, i64)>>>,
    regular: bool,
}

impl CellAction {
    pub(crate) fn new(gc: &GSimplicialComplex, complex: SimplicialComplex, elements: Vec<usize>) -> Result<Self> {
        let mut regular = true;
        let mut maps = Vec::with_capacity(elements.len());
        for &g in &elements {
            let mut per_dim = Vec::with_capacity(complex.levels());
            for d in 0..complex.levels() {
                let mut row = Vec::with_capacity(complex.cells(d).len());
                for (j, s) in complex.cells(d).iter().enumerate() {
                    let (image, sign) = gc.image(g, s);
                    let k = complex
                        .index_of(&image)
                        .ok_or_else(|| Error::validation(format!("element {g} does not preserve the subcomplex")))?;
                    if k == j && s.iter().any(|&v| gc.action(g)[v] != v) {
                        regular = false;
                    }
                    row.push((k, sign));
                }
                per_dim.push(row);
            }
            maps.push(per_dim);
        }
        Ok(CellAction { group: gc.group().clone(), complex, elements, maps, regular })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    /// Acting elements, as ambient group indices.
    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn is_regular(&self) -> bool {
        self.regular
    }

    /// `(image, ε)` for the element at position `pos` acting on `cell` of dimension `d`.
    pub fn image(&self, pos: usize, d: usize, cell: usize) -> (usize, i64) {
        self.maps[pos][d][cell]
    }

    /// Orbit cells and the chain complex of the quotient.
    pub fn quotient(&self) -> Result<QuotientComplex> {
        if !self.regular {
            return Err(Error::validation("action is not regular; regularize the complex first"));
        }
        let levels = self.complex.levels();
        let mut orbits = Vec::with_capacity(levels);
        let mut cell_orbit = Vec::with_capacity(levels);
        for d in 0..levels {
            let n = self.complex.cells(d).len();
            let mut assigned: Vec<Option<CellOrbit>> = vec![None; n];
            let mut layer = Vec::new();
            for j in 0..n {
                if assigned[j].is_some() {
                    continue;
                }
                let id = layer.len();
                let mut size = 0;
                let mut stabilizer = Vec::new();
                for (pos, &g) in self.elements.iter().enumerate() {
                    let (k, sign) = self.maps[pos][d][j];
                    if k == j {
                        stabilizer.push(g);
                    }
                    if assigned[k].is_none() {
                        assigned[k] = Some(CellOrbit { orbit: id, transporter: g, sign });
                        size += 1;
                    }
                }
                layer.push(OrbitCell {
                    representative: j,
                    vertices: self.complex.cells(d)[j].clone(),
                    size,
                    stabilizer,
                });
            }
            orbits.push(layer);
            cell_orbit.push(assigned.into_iter().map(|c| c.expect("every cell lies in an orbit")).collect());
        }
        Ok(QuotientComplex { complex: self.complex.clone(), orbits, cell_orbit })
    }

    /// `Σ_pos ρ_d(pos) ⊗ blocks[pos]` without the `1/|H|` factor.
    fn projector_sum(&self, d: usize, blocks: &[MatrixQ]) -> MatrixQ {
        let phi = blocks.first().map_or(1, MatrixQ::rows);
        let n = self.complex.cells(d).len();
        let mut p = MatrixQ::zeros(n * phi, n * phi);
        for (pos, block) in blocks.iter().enumerate() {
            for j in 0..n {
                let (k, sign) = self.maps[pos][d][j];
                for a in 0..phi {
                    for b in 0..phi {
                        let x = &block[(a, b)];
                        if !x.is_zero() {
                            let v = if sign > 0 { x.clone() } else { -x.clone() };
                            p[(k * phi + a, j * phi + b)] += v;
                        }
                    }
                }
            }
        }
        p
    }

    /// The averaging idempotent `(1/|H|) Σ_h ρ_d(h) ⊗ B(h)` on `C_d ⊗ Q^φ`,
    /// where `blocks[pos]` is `B` at the element in position `pos`.
    pub fn averaging_projector(&self, d: usize, blocks: &[MatrixQ]) -> Result<MatrixQ> {
        self.check_blocks(blocks)?;
        let mut p = self.projector_sum(d, blocks);
        let inv = BigRational::new(BigInt::from(1), BigInt::from(self.elements.len()));
        for i in 0..p.rows() {
            for j in 0..p.cols() {
                if !p[(i, j)].is_zero() {
                    let v = &p[(i, j)] * &inv;
                    p[(i, j)] = v;
                }
            }
        }
        Ok(p)
    }

    fn check_blocks(&self, blocks: &[MatrixQ]) -> Result<()> {
        let phi = blocks.first().map_or(1, MatrixQ::rows);
        if blocks.len() != self.elements.len() || blocks.iter().any(|b| b.rows() != phi || b.cols() != phi) {
            return Err(Error::Dimension(format!(
                "{} coefficient blocks for {} elements",
                blocks.len(),
                self.elements.len()
            )));
        }
        Ok(())
    }

    /// Q-dimensions of the homology of the projected chain complex
    /// `P·(C_* ⊗ Q^φ)`, degree by degree.
    pub fn projected_homology(&self, blocks: &[MatrixQ]) -> Result<Vec<usize>> {
        self.check_blocks(blocks)?;
        let phi = blocks.first().map_or(1, MatrixQ::rows);
        let levels = self.complex.levels();
        let projectors: Vec<MatrixQ> = (0..levels).map(|d| self.projector_sum(d, blocks)).collect();
        let mut rank_p = Vec::with_capacity(levels);
        let mut rank_dp = vec![0; levels + 1];
        for d in 0..levels {
            rank_p.push(projectors[d].rank());
            if d > 0 {
                let boundary = kron_identity(&self.complex.boundary(d), self.complex.cells(d - 1).len(), phi);
                rank_dp[d] = boundary.mul(&projectors[d])?.rank();
            }
        }
        Ok((0..levels).map(|d| rank_p[d] - rank_dp[d] - rank_dp[d + 1]).collect())
    }

    /// Betti numbers of the invariant part `H_*(X; Q)^H`.
    pub fn invariant_betti(&self) -> Result<Vec<usize>> {
        self.projected_homology(&vec![MatrixQ::identity(1); self.elements.len()])
    }
}

/// `∂ ⊗ I_φ` from the sparse boundary columns.
fn kron_identity(columns: &[Vec<(usize, i64)>], rows: usize, phi: usize) -> MatrixQ {
    let mut m = vec![vec![0i64; columns.len() * phi]; rows * phi];
    for (j, col) in columns.iter().enumerate() {
        for &(i, s) in col {
            for a in 0..phi {
                m[i * phi + a][j * phi + a] += s;
            }
        }
    }
    dense(rows * phi, columns.len() * phi, &m)
}

/// Orbit of a cell under the acting elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitCell {
    /// Index of the representative cell (the smallest in its orbit).
    pub representative: usize,
    pub vertices: Vec<usize>,
    pub size: usize,
    /// Stabilizer of the representative, as ambient group indices.
    pub stabilizer: Vec<usize>,
}

/// How a cell sits in its orbit: `transporter·[representative] = sign·[cell]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CellOrbit {
    pub orbit: usize,
    pub transporter: usize,
    pub sign: i64,
}

/// The orbit-cell structure of a regular action, with the cellular chain
/// complex of the quotient space.
#[derive(Clone, Debug)]
pub struct QuotientComplex {
    complex: SimplicialComplex,
    orbits: Vec<Vec<OrbitCell>>,
    cell_orbit: Vec<Vec<CellOrbit>>,
}

impl QuotientComplex {
    pub fn levels(&self) -> usize {
        self.orbits.len()
    }

    pub fn orbits(&self, d: usize) -> &[OrbitCell] {
        self.orbits.get(d).map_or(&[], Vec::as_slice)
    }

    pub fn cell_counts(&self) -> Vec<usize> {
        self.orbits.iter().map(Vec::len).collect()
    }

    pub fn orbit_of(&self, d: usize, cell: usize) -> CellOrbit {
        self.cell_orbit[d][cell]
    }

    /// Members of each vertex orbit.
    pub fn vertex_orbits(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.orbits(0).len()];
        for (j, c) in self.cell_orbit.first().map_or(&[][..], Vec::as_slice).iter().enumerate() {
            out[c.orbit].push(self.complex.cells(0)[j][0]);
        }
        out
    }

    /// Cellular boundary `∂_d` on orbit cells.
    pub fn boundary_matrix(&self, d: usize) -> MatrixQ {
        let rows = if d == 0 { 0 } else { self.orbits[d - 1].len() };
        let cols = self.orbits(d).len();
        let mut m = vec![vec![0i64; cols]; rows];
        if d > 0 {
            let faces = self.complex.boundary(d);
            for (o, cell) in self.orbits(d).iter().enumerate() {
                for &(face, s) in &faces[cell.representative] {
                    let c = self.cell_orbit[d - 1][face];
                    m[c.orbit][o] += s * c.sign;
                }
            }
        }
        dense(rows, cols, &m)
    }

    pub fn betti(&self) -> Vec<usize> {
        let ranks: Vec<usize> = (0..=self.levels()).map(|d| self.boundary_matrix(d).rank()).collect();
        (0..self.levels()).map(|d| self.orbits[d].len() - ranks[d] - ranks[d + 1]).collect()
    }

    pub fn euler(&self) -> i64 {
        alternating(&self.cell_counts())
    }
}
