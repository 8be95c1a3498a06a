//! Finite group actions on simplicial complexes and the rational invariants
//! of the resulting global-quotient orbifolds.

mod bredon;
mod chains;
mod complex;
mod gcomplex;
mod sectors;

pub use bredon::{BredonCell, BredonComplex, Coefficients};
pub use chains::{CellAction, CellOrbit, OrbitCell, QuotientComplex};
pub use complex::{alternating, SimplicialComplex};
pub use gcomplex::GSimplicialComplex;
pub use sectors::{
    chi_orb_cells, cyclic_decomposition, sector_decomposition, twisted_k_ranks, CyclicDecomposition, CyclicSummand,
    KRank, Sector, SectorList, TwistedDecomposition, TwistedSector,
};
