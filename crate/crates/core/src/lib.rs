//! Differential reduction of two-variable Horn hypergeometric functions.

pub mod annihilator;
pub mod catalog;
pub mod error;
pub mod operator;
pub mod reduction;
pub mod series;
pub mod symbolic;

/// Exact rationals used for parameter values and evaluation points.
pub use dashu::rational::RBig;

pub use catalog::{get_definition, list_functions, HornDefinition};
pub use error::{Error, Result};
pub use operator::ThetaOperator;
pub use symbolic::{Polynomial, RationalExpr, Var};
