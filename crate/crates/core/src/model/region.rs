//! Membership in the invariant set and its strip images.
//!
//! Comparisons are exact for exact scalar types and plain binary64 (or
//! binary32) for floats.

use crate::algebra::{Coefficient, ExactScalar, SparsePoly, Var, NVARS};
use crate::Rational;

use super::derived::StripSystem;
use super::ModelError;

/// Scalars the region predicates can be evaluated in.
pub trait RegionScalar: Clone + PartialOrd {
    fn zero() -> Self;
    fn one() -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    /// Evaluates a polynomial in `x` and `z`.
    fn eval_xz<C: Coefficient>(p: &SparsePoly<C>, x: &Self, z: &Self) -> Self;
}

macro_rules! float_region_scalar {
    ($t:ty) => {
        impl RegionScalar for $t {
            fn zero() -> Self {
                0.0
            }
            fn one() -> Self {
                1.0
            }
            fn mul(&self, rhs: &Self) -> Self {
                self * rhs
            }
            fn eval_xz<C: Coefficient>(p: &SparsePoly<C>, x: &Self, z: &Self) -> Self {
                let mut pt = [0.0 as $t; NVARS];
                pt[Var::X.index()] = *x;
                pt[Var::Z.index()] = *z;
                p.eval_float(&pt)
            }
        }
    };
}
float_region_scalar!(f64);
float_region_scalar!(f32);

impl RegionScalar for ExactScalar {
    fn zero() -> Self {
        num_traits::Zero::zero()
    }
    fn one() -> Self {
        num_traits::One::one()
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn eval_xz<C: Coefficient>(p: &SparsePoly<C>, x: &Self, z: &Self) -> Self {
        let mut acc = ExactScalar::from_integer(0);
        for (m, c) in p.terms() {
            let mut t = c.to_exact();
            for _ in 0..m.exp(Var::X) {
                t = &t * x;
            }
            for _ in 0..m.exp(Var::Z) {
                t = &t * z;
            }
            acc += &t;
        }
        acc
    }
}

impl RegionScalar for Rational {
    fn zero() -> Self {
        num_traits::Zero::zero()
    }
    fn one() -> Self {
        num_traits::One::one()
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn eval_xz<C: Coefficient>(p: &SparsePoly<C>, x: &Self, z: &Self) -> Self {
        let v = ExactScalar::eval_xz(
            p,
            &ExactScalar::from_rational(x.clone()),
            &ExactScalar::from_rational(z.clone()),
        );
        assert!(
            v.is_rational(),
            "irrational value at a rational point; use ExactScalar"
        );
        v.rational_part().clone()
    }
}

/// A point `(x, y)` of the quadrant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point2<T> {
    pub x: T,
    pub y: T,
}

impl<T> Point2<T> {
    pub fn new(x: T, y: T) -> Self {
        Point2 { x, y }
    }
}

/// A point `(x, z)` of the strip; `y = x^2 z`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StripPoint<T> {
    pub x: T,
    pub z: T,
}

impl<T> StripPoint<T> {
    pub fn new(x: T, z: T) -> Self {
        StripPoint { x, z }
    }
}

impl<T: RegionScalar> StripPoint<T> {
    pub fn to_point(&self) -> Point2<T> {
        Point2::new(self.x.clone(), self.x.mul(&self.x).mul(&self.z))
    }
}

/// `x >= 0`, `0 <= y <= x^2`.
pub fn in_xi<T: RegionScalar>(p: &Point2<T>) -> bool {
    p.x >= T::zero() && p.y >= T::zero() && p.y <= p.x.mul(&p.x)
}

/// `x > 0`, `0 < y < x^2`.
pub fn in_interior_xi<T: RegionScalar>(p: &Point2<T>) -> bool {
    p.x > T::zero() && p.y > T::zero() && p.y < p.x.mul(&p.x)
}

/// `x > 0`, `0 <= z <= 1`.
pub fn in_tilde_xi<T: RegionScalar>(sp: &StripPoint<T>) -> bool {
    sp.x > T::zero() && sp.z >= T::zero() && sp.z <= T::one()
}

fn open_strip<T: RegionScalar>(sp: &StripPoint<T>) -> bool {
    sp.x > T::zero() && sp.z > T::zero() && sp.z < T::one()
}

/// `F(x, z) <= 1`, checked as `z Xs^2 <= Ys` (`Ys > 0` on the strip).
fn f_le_one<C: Coefficient, T: RegionScalar>(sys: &StripSystem<C>, sp: &StripPoint<T>) -> bool {
    let xs = T::eval_xz(&sys.x_strip, &sp.x, &sp.z);
    let ys = T::eval_xz(&sys.y_strip, &sp.x, &sp.z);
    sp.z.mul(&xs).mul(&xs) <= ys
}

/// `G(x, z) <= 1`, checked as `Xs <= x`.
fn g_le_one<C: Coefficient, T: RegionScalar>(sys: &StripSystem<C>, sp: &StripPoint<T>) -> bool {
    T::eval_xz(&sys.x_strip, &sp.x, &sp.z) <= sp.x
}

/// The set `{0 < z < 1, G <= 1, F <= 1}`.
pub fn in_xi_prime<C: Coefficient, T: RegionScalar>(
    sys: &StripSystem<C>,
    sp: &StripPoint<T>,
) -> Result<bool, ModelError> {
    if sys.y_strip.is_zero() {
        return Err(ModelError::DegenerateY);
    }
    Ok(open_strip(sp) && g_le_one(sys, sp) && f_le_one(sys, sp))
}

/// The set `{0 < z < 1, F <= 1}`.
pub fn in_xi_double_prime<C: Coefficient, T: RegionScalar>(
    sys: &StripSystem<C>,
    sp: &StripPoint<T>,
) -> Result<bool, ModelError> {
    if sys.y_strip.is_zero() {
        return Err(ModelError::DegenerateY);
    }
    Ok(open_strip(sp) && f_le_one(sys, sp))
}
