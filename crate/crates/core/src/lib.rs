//! Exact verification and numerical fixed-point solving for two-dimensional
//! gradient maps `Phi = grad W` of renormalization-group type.
//!
//! The crate is layered bottom-up:
//!
//! * [`algebra`]: `Q(sqrt 3)` scalars, sparse polynomials, `(z, 1-z)` rewriting.
//! * [`model`]: the potential `W`, its gradient, the strip quantities `R`, `G`, `F`
//!   and the region predicates.
//! * [`conditions`]: class membership checks with witnesses.
//! * [`certificate`]: the Jacobian positivity witness `e` and its certificates.
//! * [`solver`]: contour bisection, Newton polish, orbits and uniqueness scans.
//! * [`model_file`]: the `rg-w/1` text format.

pub mod algebra;
pub mod certificate;
pub mod conditions;
pub mod model;
pub mod model_file;
pub mod solver;

pub use algebra::{Coefficient, ExactScalar, Monomial, SparsePoly, Var};
pub use model::WModel;

/// Arbitrary-precision rationals.
pub type Rational = num_rational::BigRational;
/// Polynomials over `Q`; the working type for symbolic-parameter computations.
pub type QPoly = SparsePoly<Rational>;
/// Polynomials over `Q(sqrt 3)`; the working type for concrete models.
pub type Q3Poly = SparsePoly<ExactScalar>;
