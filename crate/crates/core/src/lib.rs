//! Exact computations for orbifold twisted K-theory of finite group actions.

pub mod arith;
pub mod chartable;
pub mod cocycle;
pub mod error;
pub mod group;
pub mod io;
pub mod linalg;
pub mod par;
pub mod series;
pub mod topology;
pub mod twisted;

pub mod verify;

pub use error::{Error, Result};
