//! Floating-point images of the exact model quantities.

use num_traits::Float;

use crate::algebra::{Coefficient, SparsePoly, Var};
use crate::certificate::jgf_from_system;
use crate::model::{Point2, WModel};

use super::horner::Poly2;
use super::SolverError;

/// `Phi`, its Jacobian, and the strip functions, ready for evaluation in `T`.
#[derive(Clone, Debug)]
pub struct NumericSystem<T> {
    pub x: Poly2<T>,
    pub y: Poly2<T>,
    pub x_x: Poly2<T>,
    pub x_y: Poly2<T>,
    pub y_x: Poly2<T>,
    pub y_y: Poly2<T>,
    /// `G(x, z)`
    pub g: Poly2<T>,
    /// `X(x, x^2 z)` and `Y(x, x^2 z)`
    pub x_strip: Poly2<T>,
    pub y_strip: Poly2<T>,
    /// `J_GF = jgf_num / jgf_den`
    pub jgf_num: Poly2<T>,
    pub jgf_den: Poly2<T>,
}

fn compile<C: Coefficient, T: Float>(p: &SparsePoly<C>, u: Var, v: Var) -> Poly2<T> {
    Poly2::from_sparse(p, u, v).expect("two-variable polynomial")
}

impl<T: Float> NumericSystem<T> {
    pub fn new(m: &WModel) -> Result<Self, SolverError> {
        let sys = m.strip_system();
        let g = sys.g()?;
        let jgf = jgf_from_system(&sys).map_err(|e| SolverError::ClassViolation(e.to_string()))?;
        let xy = |p: &SparsePoly<_>| compile(p, Var::X, Var::Y);
        let xz = |p: &SparsePoly<_>| compile(p, Var::X, Var::Z);
        Ok(NumericSystem {
            x: xy(&sys.x_map),
            y: xy(&sys.y_map),
            x_x: xy(&sys.x_map.partial_derivative(Var::X)),
            x_y: xy(&sys.x_map.partial_derivative(Var::Y)),
            y_x: xy(&sys.y_map.partial_derivative(Var::X)),
            y_y: xy(&sys.y_map.partial_derivative(Var::Y)),
            g: xz(&g),
            x_strip: xz(&sys.x_strip),
            y_strip: xz(&sys.y_strip),
            jgf_num: xz(&jgf.num),
            jgf_den: xz(&jgf.den),
        })
    }

    pub fn phi(&self, p: Point2<T>) -> Point2<T> {
        Point2::new(self.x.eval(p.x, p.y), self.y.eval(p.x, p.y))
    }

    /// `[[X_x, X_y], [Y_x, Y_y]]`
    pub fn dphi(&self, p: Point2<T>) -> [[T; 2]; 2] {
        [
            [self.x_x.eval(p.x, p.y), self.x_y.eval(p.x, p.y)],
            [self.y_x.eval(p.x, p.y), self.y_y.eval(p.x, p.y)],
        ]
    }

    /// `max(|X(p) - x|, |Y(p) - y|)`
    pub fn residual(&self, p: Point2<T>) -> T {
        let q = self.phi(p);
        (q.x - p.x).abs().max((q.y - p.y).abs())
    }

    pub fn g_at(&self, x: T, z: T) -> T {
        self.g.eval(x, z)
    }

    /// `F = z Xs^2 / Ys`.
    pub fn f_at(&self, x: T, z: T) -> T {
        let xs = self.x_strip.eval(x, z);
        z * xs * xs / self.y_strip.eval(x, z)
    }

    pub fn jgf_at(&self, x: T, z: T) -> T {
        self.jgf_num.eval(x, z) / self.jgf_den.eval(x, z)
    }

    /// Sign of `J_GF` (its denominator is a positive square on the strip).
    pub fn jgf_sign(&self, x: T, z: T) -> T {
        self.jgf_num.eval(x, z) * self.jgf_den.eval(x, z).signum()
    }
}
