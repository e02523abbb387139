// NaN must fail tolerance checks, hence `!(x <= tol)` comparisons.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod constructions;
pub mod cxla;
pub mod error;
pub mod gf;
pub mod graph;
pub mod rigidity;

pub use error::{Error, Result};
