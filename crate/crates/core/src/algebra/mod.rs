//! Exact scalars, sparse polynomials and the `(z, 1-z)` basis rewriter.

mod basis;
mod coeff;
mod expr;
mod poly;
mod scalar;
mod var;

pub use basis::{
    default_max_elevation, rewrite_nonneg_zs, RewriteFailure, ZsRepresentation, ZsTerm,
    DEFAULT_ELEVATION_MARGIN,
};
pub use coeff::Coefficient;
pub use expr::{parse_poly, parse_poly_with};
pub use poly::SparsePoly;
pub use scalar::ExactScalar;
pub use var::{Monomial, Var, NVARS};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{message}")]
pub struct ParseError {
    message: String,
}

impl ParseError {
    pub fn new(message: impl Into<String>) -> Self {
        ParseError {
            message: message.into(),
        }
    }

    pub fn message(&self) -> &str {
        &self.message
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("{0} called on the zero polynomial")]
    ZeroPolynomial(&'static str),
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("inexact division: leading monomial {0} not divisible")]
    InexactDivision(String),
    #[error("variable {0} has no value")]
    Unassigned(Var),
}
