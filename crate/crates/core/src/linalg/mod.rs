//! Exact linear algebra over the rationals and over `Z/m`.

pub mod q;
pub mod zm;

pub use q::MatrixQ;
pub use zm::{kernel_mod, smith_quotient, solve_mod, CyclicFactor, HowellForm, SolveOutcome};
