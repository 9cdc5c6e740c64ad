//! Compensated Horner evaluation of dense bivariate polynomials.

use num_rational::BigRational;
use num_traits::Float;

use crate::algebra::{Coefficient, ExactScalar, SparsePoly, Var};

/// `a + b = s + e` exactly.
#[inline]
fn two_sum<T: Float>(a: T, b: T) -> (T, T) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

/// `a * b = p + e` exactly, using a fused multiply-add.
#[inline]
fn two_prod<T: Float>(a: T, b: T) -> (T, T) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// Compensated Horner on coefficients given as unevaluated sums
/// `hi + lo`, lowest degree first. Returns `(value, correction)`.
fn comp_horner<T: Float>(coeffs: &[(T, T)], t: T) -> (T, T) {
    let Some(&(top, top_lo)) = coeffs.last() else {
        return (T::zero(), T::zero());
    };
    let mut s = top;
    let mut c = top_lo;
    for &(a, a_lo) in coeffs.iter().rev().skip(1) {
        let (p, pe) = two_prod(s, t);
        let (s2, se) = two_sum(p, a);
        c = c.mul_add(t, pe + se + a_lo);
        s = s2;
    }
    (s, c)
}

/// A polynomial in two variables `(u, v)` stored densely by powers of `u`,
/// each row a polynomial in `v`.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly2<T> {
    rows: Vec<Vec<(T, T)>>,
}

impl<T: Float> Poly2<T> {
    /// Rounds coefficients to `T`; `None` if `p` involves other variables.
    pub fn from_sparse<C: Coefficient>(p: &SparsePoly<C>, u: Var, v: Var) -> Option<Self> {
        if !p.only_uses(&[u, v]) {
            return None;
        }
        let du = p.degree_in(u).unwrap_or(0) as usize;
        let dv = p.degree_in(v).unwrap_or(0) as usize;
        let mut rows = vec![vec![(T::zero(), T::zero()); dv + 1]; du + 1];
        for (m, c) in p.terms() {
            let exact = c.to_exact();
            let hi = exact.to_f64();
            let hi_q = ExactScalar::from_rational(BigRational::from_float(hi).unwrap_or_default());
            let lo = (&exact - &hi_q).to_f64();
            let hi_t = T::from(hi).unwrap_or_else(T::nan);
            let rest = T::from(hi - hi_t.to_f64().unwrap_or(hi) + lo).unwrap_or_else(T::zero);
            rows[m.exp(u) as usize][m.exp(v) as usize] = (hi_t, rest);
        }
        Some(Poly2 { rows })
    }

    /// Value at `(u, v)`.
    pub fn eval(&self, u: T, v: T) -> T {
        let (s, c) = self.eval_dd(u, v);
        s + c
    }

    /// Value as an unevaluated sum.
    pub fn eval_dd(&self, u: T, v: T) -> (T, T) {
        let inner: Vec<(T, T)> = self.rows.iter().map(|r| comp_horner(r, v)).collect();
        comp_horner(&inner, u)
    }

    pub fn degree_u(&self) -> usize {
        self.rows.len().saturating_sub(1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_poly;
    use crate::Q3Poly;

    #[test]
    fn exact_on_simple_inputs() {
        let p: Q3Poly = parse_poly("1 + 2*x + 3*x^2*y + y^3").unwrap();
        let c = Poly2::<f64>::from_sparse(&p, Var::X, Var::Y).unwrap();
        assert_eq!(c.eval(2.0, 3.0), 1.0 + 4.0 + 36.0 + 27.0);
        assert!(Poly2::<f64>::from_sparse(&p, Var::X, Var::Z).is_none());
        let c32 = Poly2::<f32>::from_sparse(&p, Var::X, Var::Y).unwrap();
        assert_eq!(c32.eval(2.0, 3.0), 68.0);
    }

    #[test]
    fn compensation_beats_plain_horner_near_a_root() {
        // (x - 1)^5 expanded, evaluated near 1: plain Horner loses everything
        let p: Q3Poly = parse_poly("(x - 1)^5").unwrap();
        let c = Poly2::<f64>::from_sparse(&p, Var::X, Var::Y).unwrap();
        let t = 1.0 + 1.0 / 1024.0;
        let exact = (1.0f64 / 1024.0).powi(5);
        let comp = c.eval(t, 0.0);
        assert!(((comp - exact) / exact).abs() < 1e-6, "{comp} vs {exact}");
    }

    #[test]
    fn irrational_coefficients() {
        let p: Q3Poly = parse_poly("x").unwrap().scale(&crate::ExactScalar::sqrt3());
        let c = Poly2::<f64>::from_sparse(&p, Var::X, Var::Y).unwrap();
        assert_eq!(c.eval(1.0, 0.0), 3f64.sqrt());
    }
}
