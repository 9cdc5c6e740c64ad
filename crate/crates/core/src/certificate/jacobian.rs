//! `J_GF` and the positivity witness `e`.
//!
//! With `Xs = X(x, x^2 z)`, `Ys = Y(x, x^2 z)`, `G = Xs / x`, `F = z Xs^2 / Ys`:
//!
//! ```text
//! J_GF Ys^2 = G_x [(Xs^2 + 2 z Xs Xs_z) Ys - z Xs^2 Ys_z] - G_z [2 z Xs Xs_x Ys - z Xs^2 Ys_x]
//! e         = (1 - z) x^2 Ys^2 / Xs^2 (J_GF - F (1 - F) / (z (1 - z)) G_x)
//!           = x^2 [(1 - z) J_GF Ys^2 - Xs^2 (Ys - z Xs^2) G_x] / Xs^2
//! ```
//!
//! Every term of `J_GF Ys^2` carries a factor `Xs`; after cancelling it by
//! hand, one exact division by `Xs` remains.

use std::sync::OnceLock;

use crate::algebra::{AlgebraError, Coefficient, SparsePoly, Var};
use crate::model::{symbolic_strip_system, ModelError, RationalFunction, StripSystem, WModel};
use crate::{Q3Poly, QPoly};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum JacobianError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("e is not a polynomial: {0}")]
    NotPolynomial(AlgebraError),
}

struct Parts<C: Coefficient> {
    g_x: SparsePoly<C>,
    /// `J_GF Ys^2 / Xs`
    n_j: SparsePoly<C>,
}

fn parts<C: Coefficient>(sys: &StripSystem<C>) -> Result<Parts<C>, JacobianError> {
    let g = sys.g()?;
    let (xs, ys) = (&sys.x_strip, &sys.y_strip);
    let z = SparsePoly::var(Var::Z);
    let two_z = z.scale(&C::from_integer(2));
    let g_x = g.partial_derivative(Var::X);
    let g_z = g.partial_derivative(Var::Z);
    // F_z Ys^2 / Xs and F_x Ys^2 / Xs
    let fz = &(&(xs + &(&two_z * &xs.partial_derivative(Var::Z))) * ys)
        - &(&(&z * xs) * &ys.partial_derivative(Var::Z));
    let fx = &(&(&two_z * &xs.partial_derivative(Var::X)) * ys)
        - &(&(&z * xs) * &ys.partial_derivative(Var::X));
    let n_j = &(&g_x * &fz) - &(&g_z * &fx);
    Ok(Parts { g_x, n_j })
}

/// `J_GF` as `num / den` with `den = Ys^2` before monomial content removal.
pub fn jgf_from_system<C: Coefficient>(
    sys: &StripSystem<C>,
) -> Result<RationalFunction<C>, JacobianError> {
    if sys.y_strip.is_zero() {
        return Err(ModelError::DegenerateY.into());
    }
    let p = parts(sys)?;
    Ok(RationalFunction::new(
        &sys.x_strip * &p.n_j,
        sys.y_strip.pow(2),
    ))
}

/// `e(x, z)` by exact division.
pub fn e_from_system<C: Coefficient>(sys: &StripSystem<C>) -> Result<SparsePoly<C>, JacobianError> {
    let p = parts(sys)?;
    let (xs, ys) = (&sys.x_strip, &sys.y_strip);
    let z = SparsePoly::var(Var::Z);
    let one_minus_z = &SparsePoly::one() - &z;
    let defect = ys - &(&z * &xs.pow(2));
    // ((1 - z) J_GF Ys^2 - Xs^2 (Ys - z Xs^2) G_x) / Xs
    let t = &(&one_minus_z * &p.n_j) - &(&(xs * &defect) * &p.g_x);
    let e = t.div_exact(xs).map_err(JacobianError::NotPolynomial)?;
    let x2 = SparsePoly::term(crate::Monomial::var_pow(Var::X, 2), C::one());
    Ok(&x2 * &e)
}

/// The closed form
/// `x^2 [(1-z)(G_x Ys - z G_x Ys_z + z G_z Ys_x - 2 z Ys X_y(x, x^2 z)) - (Ys - z Xs^2) G_x]`,
/// derived by hand from the definition; used as an independent check.
pub fn e_closed_form<C: Coefficient>(sys: &StripSystem<C>) -> Result<SparsePoly<C>, JacobianError> {
    let g = sys.g()?;
    let (xs, ys) = (&sys.x_strip, &sys.y_strip);
    let z = SparsePoly::var(Var::Z);
    let one_minus_z = &SparsePoly::one() - &z;
    let g_x = g.partial_derivative(Var::X);
    let g_z = g.partial_derivative(Var::Z);
    let xy_strip = crate::model::to_strip(&sys.x_map.partial_derivative(Var::Y));
    let inner = &(&(&(&g_x * ys) - &(&(&z * &g_x) * &ys.partial_derivative(Var::Z)))
        + &(&(&z * &g_z) * &ys.partial_derivative(Var::X)))
        - &(&(&z * ys) * &xy_strip).scale(&C::from_integer(2));
    let defect = ys - &(&z * &xs.pow(2));
    let body = &(&one_minus_z * &inner) - &(&defect * &g_x);
    let x2 = SparsePoly::term(crate::Monomial::var_pow(Var::X, 2), C::one());
    Ok(&x2 * &body)
}

/// `J_GF` of a concrete model.
pub fn compute_jgf(m: &WModel) -> Result<RationalFunction<crate::ExactScalar>, JacobianError> {
    jgf_from_system(&m.strip_system())
}

/// `J_GF` of the symbolic family.
pub fn compute_jgf_symbolic() -> Result<RationalFunction<crate::Rational>, JacobianError> {
    jgf_from_system(&symbolic_strip_system())
}

/// `e(x, z)` of a concrete model.
pub fn compute_e(m: &WModel) -> Result<Q3Poly, JacobianError> {
    e_from_system(&m.strip_system())
}

/// `e` over the symbolic family (computed once per process).
pub fn compute_e_symbolic() -> &'static QPoly {
    static E: OnceLock<QPoly> = OnceLock::new();
    E.get_or_init(|| {
        e_from_system(&symbolic_strip_system())
            .expect("e is a polynomial for the restricted family")
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::NVARS;
    use crate::{ExactScalar, Rational};

    fn pt(x: f64, z: f64) -> [f64; NVARS] {
        let mut p = [0.0; NVARS];
        p[Var::X.index()] = x;
        p[Var::Z.index()] = z;
        p
    }

    #[test]
    fn jgf_small_x_tends_to_3a() {
        let m = WModel::w_eps(ExactScalar::from_integer(0)).unwrap();
        let j = compute_jgf(&m).unwrap();
        let v = j.eval_float(&pt(1e-4, 0.5));
        assert!((v - 1.0).abs() < 1e-3, "{v}");
    }

    #[test]
    fn jgf_symbolic_denominator_divides_ys2_x2() {
        let sys = symbolic_strip_system();
        let j = compute_jgf_symbolic().unwrap();
        let target = &sys.y_strip.pow(2)
            * &QPoly::term(
                crate::Monomial::var_pow(Var::X, 2),
                Rational::from_integer(1.into()),
            );
        assert!(target.div_exact(&j.den).is_ok());
    }

    #[test]
    fn jgf_matches_finite_differences() {
        let m = WModel::w3();
        let sys = m.strip_system();
        let g = sys.g().unwrap();
        let f = sys.f().unwrap();
        let j = compute_jgf(&m).unwrap();
        let (x, z, h) = (0.4, 0.3, 1e-6);
        let gv = |x: f64, z: f64| g.eval_float(&pt(x, z));
        let fv = |x: f64, z: f64| f.eval_float(&pt(x, z));
        let d = |fun: &dyn Fn(f64, f64) -> f64, dx: f64, dz: f64| {
            (fun(x + dx, z + dz) - fun(x - dx, z - dz)) / (2.0 * h)
        };
        let fd = d(&gv, h, 0.0) * d(&fv, 0.0, h) - d(&fv, h, 0.0) * d(&gv, 0.0, h);
        let exact = j.eval_float(&pt(x, z));
        assert!(((fd - exact) / exact).abs() < 1e-6, "{fd} vs {exact}");
    }

    #[test]
    fn e_agrees_with_closed_form() {
        let sys = symbolic_strip_system();
        assert_eq!(compute_e_symbolic(), &e_closed_form(&sys).unwrap());
        let sys4 = WModel::w4().strip_system();
        assert_eq!(e_from_system(&sys4).unwrap(), e_closed_form(&sys4).unwrap());
    }

    #[test]
    fn e_w3_value() {
        let e = compute_e(&WModel::w3()).unwrap();
        let half = ExactScalar::ratio(1, 2);
        let v = e
            .eval_exact(&[(Var::X, half.clone()), (Var::Z, half)])
            .unwrap();
        assert_eq!(v, ExactScalar::ratio(989_951, 4_194_304));
    }

    #[test]
    fn e_at_z_one_is_x2_r_gx() {
        let m = WModel::w4();
        let sys = m.strip_system();
        let one = [(Var::Z, ExactScalar::from_integer(1))];
        let e1 = compute_e(&m).unwrap().specialize(&one);
        let want = &(&QPoly::term(
            crate::Monomial::var_pow(Var::X, 2),
            Rational::from_integer(1.into()),
        )
        .map_coefficients(|c| ExactScalar::from_rational(c.clone()))
            * &sys.r())
            * &sys.g().unwrap().partial_derivative(Var::X);
        assert_eq!(e1, want.specialize(&one));
    }

    #[test]
    fn symbolic_term_counts() {
        let (pos, neg) = compute_e_symbolic().sign_counts();
        assert_eq!((pos, neg), (325, 85));
    }
}
