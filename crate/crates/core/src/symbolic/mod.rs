//! Exact polynomial and rational-function arithmetic.

mod gcd;
mod parse;
mod poly;
mod print;
mod rational;
mod var;

pub use gcd::gcd;
pub use parse::parse_expr;
pub use poly::{Coeff, IntPoly, Poly, Polynomial, Ring, MAX_VARS};
pub use rational::RationalExpr;
pub use var::{Var, VarClass};
