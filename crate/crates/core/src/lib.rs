// `!(x <= tol)` is used on purpose so that NaN counts as a failure.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod aops;
pub mod applications;
pub mod bounds;
pub mod cli;
pub mod error;
pub mod lemmas;
pub mod linalg;
pub mod report;
pub mod space;

pub use error::{Error, Result};
pub use linalg::{CMatrix, C64};
