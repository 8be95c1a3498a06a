use std::collections::{BTreeSet, HashMap, HashSet};

use crate::error::{Error, Result};
use crate::linalg::MatrixQ;

/// A finite abstract simplicial complex on labeled vertices.
///
/// Simplices are sorted vertex lists; `cells(d)` is sorted lexicographically,
/// which fixes the cell numbering and the orientation of every simplex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    labels: Vec<String>,
    cells: Vec<Vec<Vec<usize>>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
}

impl SimplicialComplex {
    /// The complex generated by `maximal` faces; every labeled vertex is a 0-cell.
    pub fn new(labels: Vec<String>, maximal: &[Vec<usize>]) -> Result<Self> {
        let n = labels.len();
        let mut all: BTreeSet<Vec<usize>> = (0..n).map(|v| vec![v]).collect();
        for (k, face) in maximal.iter().enumerate() {
            if face.is_empty() {
                return Err(Error::validation(format!("maximal_simplices[{k}] is empty")));
            }
            let mut s = face.clone();
            s.sort_unstable();
            if let Some(&v) = s.iter().find(|&&v| v >= n) {
                return Err(Error::validation(format!("maximal_simplices[{k}] names vertex {v} of {n}")));
            }
            if s.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::validation(format!("maximal_simplices[{k}] repeats a vertex")));
            }
            if s.len() > 16 {
                return Err(Error::validation(format!("maximal_simplices[{k}] has dimension above 15")));
            }
            for mask in 1u32..(1 << s.len()) {
                all.insert(s.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v).collect());
            }
        }
        Ok(Self::from_simplices(labels, all))
    }

    /// Builds from a downward-closed family; the caller guarantees closure.
    pub(crate) fn from_simplices(labels: Vec<String>, simplices: impl IntoIterator<Item = Vec<usize>>) -> Self {
        let mut cells: Vec<Vec<Vec<usize>>> = Vec::new();
        for s in simplices {
            let d = s.len() - 1;
            if cells.len() <= d {
                cells.resize(d + 1, Vec::new());
            }
            cells[d].push(s);
        }
        for layer in &mut cells {
            layer.sort_unstable();
            layer.dedup();
        }
        while cells.last().is_some_and(Vec::is_empty) {
            cells.pop();
        }
        let index = cells.iter().map(|layer| layer.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect()).collect();
        SimplicialComplex { labels, cells, index }
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    /// Number of nonempty dimensions, i.e. `dim + 1`; zero for the empty complex.
    pub fn levels(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cells(&self, d: usize) -> &[Vec<usize>] {
        self.cells.get(d).map_or(&[], Vec::as_slice)
    }

    pub fn cell_counts(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }

    pub fn index_of(&self, simplex: &[usize]) -> Option<usize> {
        self.index.get(simplex.len().checked_sub(1)?)?.get(simplex).copied()
    }

    pub fn all_simplices(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.cells.iter().flatten()
    }

    /// Maximal simplices, in dimension then lexicographic order.
    pub fn maximal_simplices(&self) -> Vec<Vec<usize>> {
        let covered: HashSet<Vec<usize>> =
            self.cells.iter().skip(1).flatten().flat_map(|s| (0..s.len()).map(|i| face_of(s, i))).collect();
        self.cells.iter().flatten().filter(|s| !covered.contains(*s)).cloned().collect()
    }

    /// Sparse boundary of each `d`-cell: `(face index, (−1)^i)` for the face
    /// omitting the `i`-th vertex.
    pub fn boundary(&self, d: usize) -> Vec<Vec<(usize, i64)>> {
        if d == 0 {
            return vec![Vec::new(); self.cells(0).len()];
        }
        self.cells(d)
            .iter()
            .map(|s| {
                (0..s.len())
                    .map(|i| {
                        let face = face_of(s, i);
                        let k = self.index[d - 1][&face];
                        (k, if i % 2 == 0 { 1 } else { -1 })
                    })
                    .collect()
            })
            .collect()
    }

    /// `∂_d : C_d → C_{d−1}` as a dense matrix (rows are `(d−1)`-cells).
    pub fn boundary_matrix(&self, d: usize) -> MatrixQ {
        let rows = if d == 0 { 0 } else { self.cells(d - 1).len() };
        let cols = self.cells(d).len();
        let mut m = vec![vec![0i64; cols]; rows];
        for (j, col) in self.boundary(d).into_iter().enumerate() {
            for (i, s) in col {
                m[i][j] += s;
            }
        }
        dense(rows, cols, &m)
    }

    /// Rational Betti numbers `b_0..b_dim`.
    pub fn betti(&self) -> Vec<usize> {
        let ranks: Vec<usize> = (0..=self.levels()).map(|d| self.boundary_matrix(d).rank()).collect();
        (0..self.levels()).map(|d| self.cells[d].len() - ranks[d] - ranks[d + 1]).collect()
    }

    pub fn euler(&self) -> i64 {
        alternating(&self.cell_counts())
    }
}

/// `s` with its `i`-th vertex removed.
pub(crate) fn face_of(s: &[usize], i: usize) -> Vec<usize> {
    s.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, &v)| v).collect()
}

/// Sorts `v` in place and returns the sign of the sorting permutation.
pub(crate) fn sort_with_sign(v: &mut [usize]) -> i64 {
    let mut sign = 1;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    sign
}

/// `Σ (−1)^d x_d`.
pub fn alternating(xs: &[usize]) -> i64 {
    xs.iter().enumerate().map(|(d, &x)| if d % 2 == 0 { x as i64 } else { -(x as i64) }).sum()
}

pub(crate) fn dense(rows: usize, cols: usize, m: &[Vec<i64>]) -> MatrixQ {
    if rows == 0 {
        return MatrixQ::zeros(0, cols);
    }
    MatrixQ::from_i64(m).expect("rectangular")
}
