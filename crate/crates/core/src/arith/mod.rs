//! Exact scalars: big rationals and cyclotomic numbers.

pub mod cyclotomic;
pub mod intcyc;

pub use cyclotomic::{cyclotomic_polynomial, euler_phi, galois_trace, Cyclotomic};
pub use intcyc::IntCyc;
pub use num_rational::BigRational as Rational;

use num_bigint::BigInt;

pub fn rational(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}
