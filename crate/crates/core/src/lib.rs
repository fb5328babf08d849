//! Exact solvers for word equations on matrix algebras.

pub mod commutator;
pub mod counting;
pub mod diagonal;
pub mod error;
pub mod factor;
pub mod field;
pub mod jordan;
pub mod matrix;
pub mod poly;
pub mod reduction;
pub mod solve;
pub mod word;

pub use error::{Error, Result};
pub use field::{Elem, Field};
pub use matrix::Matrix;
pub use poly::Poly;
pub use solve::{solve, verify, Witness};
pub use word::WordSpec;
