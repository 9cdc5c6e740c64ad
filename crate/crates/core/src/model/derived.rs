//! The gradient map and the strip quantities derived from it.
//!
//! With `y = x^2 z`, write `Xs(x, z) = X(x, x^2 z)` and `Ys(x, z) = Y(x, x^2 z)`.
//! Then
//!
//! * `R = Xs^2 - Ys`
//! * `G = Xs / x`
//! * `F = z Xs^2 / Ys = z (1 + R / Ys)`

use crate::algebra::{AlgebraError, Coefficient, Monomial, SparsePoly, Var};

use super::ModelError;

/// `(dW/dx, dW/dy)`.
pub fn grad<C: Coefficient>(w: &SparsePoly<C>) -> (SparsePoly<C>, SparsePoly<C>) {
    (w.partial_derivative(Var::X), w.partial_derivative(Var::Y))
}

/// `y -> x^2 z`.
pub fn to_strip<C: Coefficient>(p: &SparsePoly<C>) -> SparsePoly<C> {
    let x2z = SparsePoly::term(Monomial::from_pairs(&[(Var::X, 2), (Var::Z, 1)]), C::one());
    p.substitute(Var::Y, &x2z)
}

/// A numerator/denominator pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunction<C: Coefficient> {
    pub num: SparsePoly<C>,
    pub den: SparsePoly<C>,
}

impl<C: Coefficient> RationalFunction<C> {
    /// Divides out the common monomial factor and makes the leading
    /// coefficient of the denominator 1.
    pub fn new(num: SparsePoly<C>, den: SparsePoly<C>) -> Self {
        let common = common_monomial(&num, &den);
        let num = num
            .div_exact(&SparsePoly::term(common, C::one()))
            .expect("monomial divides");
        let den = den
            .div_exact(&SparsePoly::term(common, C::one()))
            .expect("monomial divides");
        let lead = den.leading().map(|(_, c)| c.clone()).unwrap_or_else(C::one);
        let inv = C::one().div_ref(&lead);
        RationalFunction {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }

    /// `num * other.den - other.num * den`, zero iff the two are equal.
    pub fn cross_difference(&self, other: &RationalFunction<C>) -> SparsePoly<C> {
        &(&self.num * &other.den) - &(&other.num * &self.den)
    }

    pub fn eval_float<T: num_traits::Float>(&self, point: &[T; crate::algebra::NVARS]) -> T {
        self.num.eval_float(point) / self.den.eval_float(point)
    }
}

fn common_monomial<C: Coefficient>(a: &SparsePoly<C>, b: &SparsePoly<C>) -> Monomial {
    let mut exps: Option<[u8; crate::algebra::NVARS]> = None;
    for (m, _) in a.terms().chain(b.terms()) {
        exps = Some(match exps {
            None => m.0,
            Some(mut e) => {
                for (x, y) in e.iter_mut().zip(m.0.iter()) {
                    *x = (*x).min(*y);
                }
                e
            }
        });
    }
    Monomial(exps.unwrap_or([0; crate::algebra::NVARS]))
}

/// `W` together with its gradient and the strip-substituted gradient.
#[derive(Clone, Debug)]
pub struct StripSystem<C: Coefficient> {
    pub w: SparsePoly<C>,
    /// `X = dW/dx`
    pub x_map: SparsePoly<C>,
    /// `Y = dW/dy`
    pub y_map: SparsePoly<C>,
    /// `X(x, x^2 z)`
    pub x_strip: SparsePoly<C>,
    /// `Y(x, x^2 z)`
    pub y_strip: SparsePoly<C>,
}

impl<C: Coefficient> StripSystem<C> {
    pub fn new(w: SparsePoly<C>) -> Self {
        let (x_map, y_map) = grad(&w);
        let x_strip = to_strip(&x_map);
        let y_strip = to_strip(&y_map);
        StripSystem {
            w,
            x_map,
            y_map,
            x_strip,
            y_strip,
        }
    }

    /// `R(x, z) = X(x, x^2 z)^2 - Y(x, x^2 z)`.
    pub fn r(&self) -> SparsePoly<C> {
        &self.x_strip.pow(2) - &self.y_strip
    }

    /// `G(x, z) = X(x, x^2 z) / x`, by exact division.
    pub fn g(&self) -> Result<SparsePoly<C>, ModelError> {
        self.x_strip
            .div_exact(&SparsePoly::var(Var::X))
            .map_err(|e| match e {
                AlgebraError::InexactDivision(m) => {
                    ModelError::OutsideClass(format!("X(x, x^2 z) has term {m} not divisible by x"))
                }
                other => ModelError::OutsideClass(other.to_string()),
            })
    }

    /// `F = z Xs^2 / Ys` as a reduced pair.
    pub fn f(&self) -> Result<RationalFunction<C>, ModelError> {
        if self.y_strip.is_zero() {
            return Err(ModelError::DegenerateY);
        }
        let num = &SparsePoly::var(Var::Z) * &self.x_strip.pow(2);
        Ok(RationalFunction::new(num, self.y_strip.clone()))
    }

    /// `F` through the identity `F = z (1 + R / Ys)`.
    pub fn f_via_r(&self) -> Result<RationalFunction<C>, ModelError> {
        if self.y_strip.is_zero() {
            return Err(ModelError::DegenerateY);
        }
        let num = &SparsePoly::var(Var::Z) * &(&self.y_strip + &self.r());
        Ok(RationalFunction::new(num, self.y_strip.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_poly;
    use crate::model::WModel;
    use crate::Q3Poly;

    #[test]
    fn w3_fixed_point_system() {
        let sys = StripSystem::new(WModel::w3().to_polynomial());
        let x_rhs: Q3Poly = parse_poly("x^2 + 2*x^3 + 2*x^4 + 4*x^3*y + 6*x^2*y^2").unwrap();
        let y_rhs: Q3Poly = parse_poly("x^4 + 4*x^3*y + 22*y^4").unwrap();
        assert_eq!(sys.x_map, x_rhs);
        assert_eq!(sys.y_map, y_rhs);
    }

    #[test]
    fn g_for_pure_cubic_plus_x4y() {
        let w: Q3Poly = parse_poly("1/3*x^3 + x^4*y").unwrap();
        let sys = StripSystem::new(w);
        let want: Q3Poly = parse_poly("x + 4*x^4*z").unwrap();
        assert_eq!(sys.g().unwrap(), want);
        assert_eq!(
            sys.g()
                .unwrap()
                .specialize(&[(Var::Z, crate::ExactScalar::from_integer(0))]),
            parse_poly("x").unwrap()
        );
    }

    #[test]
    fn r_starts_at_x5_for_w3() {
        let r = StripSystem::new(WModel::w3().to_polynomial()).r();
        assert_eq!(r.min_degree_in(Var::X).unwrap(), 5);
        // the x^5 slice is 4 - 4z: R_5 = 0 at z = 1
        let want: Q3Poly = parse_poly("4 - 4*z").unwrap();
        assert_eq!(r.coefficient_of(Var::X, 5), want);
    }

    #[test]
    fn f_identity_for_w4() {
        let sys = StripSystem::new(WModel::w4().to_polynomial());
        let f = sys.f().unwrap();
        // F * Ys - z Xs^2 == 0
        let check = &(&f.num * &sys.y_strip)
            - &(&(&SparsePoly::var(Var::Z) * &sys.x_strip.pow(2)) * &f.den);
        assert!(check.is_zero());
        assert!(f.cross_difference(&sys.f_via_r().unwrap()).is_zero());
    }

    #[test]
    fn degenerate_y_and_non_divisible_g() {
        let sys = StripSystem::new(parse_poly::<crate::ExactScalar>("x^3").unwrap());
        assert_eq!(sys.f().unwrap_err(), ModelError::DegenerateY);
        let sys = StripSystem::new(parse_poly::<crate::ExactScalar>("x + x^3*y").unwrap());
        assert!(matches!(sys.g(), Err(ModelError::OutsideClass(_))));
    }
}
