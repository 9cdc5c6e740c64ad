//! The potential `W`, the map `Phi = grad W`, and the strip functions.

mod derived;
mod region;
mod wmodel;

pub use derived::{grad, to_strip, RationalFunction, StripSystem};
pub use region::{
    in_interior_xi, in_tilde_xi, in_xi, in_xi_double_prime, in_xi_prime, Point2, RegionScalar,
    StripPoint,
};
pub use wmodel::{ModelKind, WModel, DERIVED_TERM, RESTRICTED_TERMS};

use num_traits::Float;

use crate::algebra::{Var, NVARS};
use crate::{Q3Poly, QPoly};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("coefficient of {0} is negative ({1})")]
    NegativeCoefficient(String, String),
    #[error("the x^3 coefficient a must be positive")]
    ZeroCubic,
    #[error("unknown parameter `{0}`")]
    UnknownParameter(String),
    #[error("operation requires a restricted-mode model")]
    RequiresRestricted,
    #[error("model outside the supported class: {0}")]
    OutsideClass(String),
    #[error("Y(x, x^2 z) vanishes identically (no x^n y term)")]
    DegenerateY,
}

impl WModel {
    /// Gradient and strip quantities with exact coefficients.
    pub fn strip_system(&self) -> StripSystem<crate::ExactScalar> {
        StripSystem::new(self.to_polynomial())
    }

    /// `(X, Y) = grad W`.
    pub fn grad(&self) -> (Q3Poly, Q3Poly) {
        grad(&self.to_polynomial())
    }

    pub fn compute_r(&self) -> Q3Poly {
        self.strip_system().r()
    }

    pub fn compute_g(&self) -> Result<Q3Poly, ModelError> {
        self.strip_system().g()
    }

    pub fn compute_f(&self) -> Result<RationalFunction<crate::ExactScalar>, ModelError> {
        self.strip_system().f()
    }

    /// `Phi(p)` in floating point.
    pub fn apply_phi<T: Float>(&self, p: Point2<T>) -> Point2<T> {
        let (x, y) = self.grad();
        apply_phi_polys(&x, &y, p)
    }
}

/// Evaluates a gradient pair at `p`.
pub fn apply_phi_polys<T: Float>(x_map: &Q3Poly, y_map: &Q3Poly, p: Point2<T>) -> Point2<T> {
    let mut pt = [T::zero(); NVARS];
    pt[Var::X.index()] = p.x;
    pt[Var::Y.index()] = p.y;
    Point2::new(x_map.eval_float(&pt), y_map.eval_float(&pt))
}

/// The strip system of the symbolic restricted family.
pub fn symbolic_strip_system() -> StripSystem<crate::Rational> {
    StripSystem::new(WModel::symbolic_polynomial())
}

/// Gradient of the symbolic family.
pub fn symbolic_grad() -> (QPoly, QPoly) {
    grad(&WModel::symbolic_polynomial())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ExactScalar;

    #[test]
    fn origin_is_fixed() {
        for m in [WModel::w3(), WModel::w4()] {
            assert_eq!(m.apply_phi(Point2::new(0.0, 0.0)), Point2::new(0.0, 0.0));
        }
    }

    #[test]
    fn w_eps_vertical_fixed_point() {
        let m = WModel::w_eps(ExactScalar::ratio(1, 10)).unwrap();
        let y0 = 0.6f64.powf(-0.25);
        let p = m.apply_phi(Point2::new(0.0, y0));
        assert!(p.x.abs() < 1e-12);
        assert!((p.y - y0).abs() < 1e-12);
    }
}
