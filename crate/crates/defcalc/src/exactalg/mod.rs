//! Exact rationals, dense linear algebra, sparse multivariate polynomials
//! and a Buchberger Gröbner engine.

mod groebner;
mod linalg;
mod poly;
mod scalar;

pub use groebner::{groebner, ideal_has_solution, reduce, PolyIdeal, DEFAULT_GROEBNER_BUDGET};
pub use linalg::{cohomology_dims, solve_linear, LinSystem, Mat};
pub use poly::{MPoly, MonomialOrder};
pub use scalar::{fmt_q, parse_q, q, qf, Q};
pub(crate) use scalar::{bernoulli, factorial};
