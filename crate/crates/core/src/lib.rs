#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod expansion;
pub mod jets;
pub mod model;
pub mod oracle;
pub mod pricer;
pub mod quadrature;

pub use error::{Error, Result};
pub use num_complex::Complex64;
