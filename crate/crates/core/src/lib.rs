// Negated float comparisons below are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod experiment;
pub mod logistic;
pub mod sim;
pub mod stats;
pub mod theory;

pub use error::{Error, Result};
