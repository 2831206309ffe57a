// NaN-rejecting checks are written as negated comparisons on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod blas1;
pub mod eft;
pub mod error;
pub mod problems;
pub mod solver;

pub use blas1::{CompScalar, CompVector};
pub use eft::{DoubleDouble, FmaTriple, SumPair};
pub use error::{Error, Result};
