//! Exact arithmetic: rationals, iterated square-root extensions of the
//! rationals, polynomials over them, and exact linear algebra.
//!
//! Nothing in this module (or anywhere in the crate) touches floating point.

mod element;
mod integers;
mod matrix;
mod poly;
mod tower;
mod univariate;

pub use element::FieldElement;
pub use integers::{parse_rational, rational_to_string, squarefree_part};
pub(crate) use integers::{divisors, rational_sqrt};
pub use matrix::{Echelon, ExactMatrix};
pub use poly::{Monomial, Poly};
pub use tower::Tower;
pub use univariate::{BinaryForm, UniPoly};

use num_rational::BigRational;
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse rational {0:?}")]
    Parse(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}
