use std::collections::BTreeMap;

use num_traits::Zero;

use crate::algebra::{ExactScalar, Monomial, SparsePoly, Var};
use crate::{Q3Poly, QPoly, Rational};

use super::ModelError;

/// `(x-exponent, y-exponent)` of a term of `W`, and which parameter (if any)
/// owns it in the restricted family. The `x^4 y` slot is listed separately
/// because its coefficient is always `9 a^2`.
pub const RESTRICTED_TERMS: [((u32, u32), Var); 12] = [
    ((3, 0), Var::A),
    ((4, 0), Var::B),
    ((5, 0), Var::F5),
    ((6, 0), Var::F6),
    ((5, 1), Var::G5),
    ((3, 2), Var::H3),
    ((4, 2), Var::H4),
    ((3, 3), Var::N3),
    ((2, 4), Var::A24),
    ((0, 5), Var::A05),
    ((1, 5), Var::A15),
    ((0, 6), Var::A06),
];

/// Exponents of the derived `x^4 y` term.
pub const DERIVED_TERM: (u32, u32) = (4, 1);

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ModelKind {
    /// The twelve-coefficient family, coefficients in [`Var::PARAMS`] order.
    Restricted([ExactScalar; 12]),
    /// An arbitrary list of positive terms `x^i y^j`.
    General(BTreeMap<(u32, u32), ExactScalar>),
}

/// A potential `W(x, y)` with non-negative coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WModel {
    kind: ModelKind,
}

impl WModel {
    /// Restricted model; `coeffs` in [`Var::PARAMS`] order.
    pub fn restricted(coeffs: [ExactScalar; 12]) -> Result<Self, ModelError> {
        for (c, v) in coeffs.iter().zip(Var::PARAMS) {
            if !c.is_nonneg() {
                return Err(ModelError::NegativeCoefficient(
                    v.name().to_string(),
                    c.to_string(),
                ));
            }
        }
        if !coeffs[0].is_positive() {
            return Err(ModelError::ZeroCubic);
        }
        Ok(WModel {
            kind: ModelKind::Restricted(coeffs),
        })
    }

    /// Restricted model from named coefficients; omitted ones are zero.
    pub fn restricted_from(pairs: &[(Var, ExactScalar)]) -> Result<Self, ModelError> {
        let mut coeffs: [ExactScalar; 12] = Default::default();
        for (v, c) in pairs {
            let idx = Var::PARAMS
                .iter()
                .position(|p| p == v)
                .ok_or_else(|| ModelError::UnknownParameter(v.name().to_string()))?;
            coeffs[idx] = c.clone();
        }
        Self::restricted(coeffs)
    }

    /// General model; zero coefficients are dropped, negative ones rejected.
    pub fn general<I: IntoIterator<Item = ((u32, u32), ExactScalar)>>(
        terms: I,
    ) -> Result<Self, ModelError> {
        let mut map = BTreeMap::new();
        for ((i, j), c) in terms {
            if !c.is_nonneg() {
                return Err(ModelError::NegativeCoefficient(
                    format!("x^{i} y^{j}"),
                    c.to_string(),
                ));
            }
            if c.is_zero() {
                continue;
            }
            let slot: &mut ExactScalar = map.entry((i, j)).or_insert_with(ExactScalar::zero);
            *slot += &c;
        }
        Ok(WModel {
            kind: ModelKind::General(map),
        })
    }

    /// `W_3 = x^3/3 + x^4/2 + 2x^5/5 + x^4 y + 2 x^3 y^2 + 22 y^5/5`.
    pub fn w3() -> Self {
        let r = ExactScalar::ratio;
        Self::restricted_from(&[
            (Var::A, r(1, 3)),
            (Var::B, r(1, 2)),
            (Var::F5, r(2, 5)),
            (Var::H3, r(2, 1)),
            (Var::A05, r(22, 5)),
        ])
        .expect("valid")
    }

    /// The four-dimensional gasket model, with `sqrt 3` coefficients.
    pub fn w4() -> Self {
        let r = ExactScalar::ratio;
        let r3 =
            |n: i64, d: i64| ExactScalar::new(Rational::zero(), Rational::new(n.into(), d.into()));
        Self::restricted_from(&[
            (Var::A, r3(1, 9)),
            (Var::B, r(1, 4)),
            (Var::F5, r3(2, 15)),
            (Var::F6, r(1, 9)),
            (Var::G5, r3(2, 9)),
            (Var::H3, r3(2, 9)),
            (Var::H4, r(13, 18)),
            (Var::N3, r3(32, 81)),
            (Var::A24, r(22, 27)),
            (Var::A05, r(22, 135)),
            (Var::A15, r3(44, 81)),
            (Var::A06, r(31, 81)),
        ])
        .expect("valid")
    }

    /// `W_eps = x^3/3 + x^4 y + eps y^6`.
    pub fn w_eps(eps: ExactScalar) -> Result<Self, ModelError> {
        Self::restricted_from(&[(Var::A, ExactScalar::ratio(1, 3)), (Var::A06, eps)])
    }

    pub fn kind(&self) -> &ModelKind {
        &self.kind
    }

    pub fn is_restricted(&self) -> bool {
        matches!(self.kind, ModelKind::Restricted(_))
    }

    pub fn restricted_coeffs(&self) -> Result<&[ExactScalar; 12], ModelError> {
        match &self.kind {
            ModelKind::Restricted(c) => Ok(c),
            ModelKind::General(_) => Err(ModelError::RequiresRestricted),
        }
    }

    /// Value of one of the twelve parameters.
    pub fn param(&self, v: Var) -> Result<&ExactScalar, ModelError> {
        let c = self.restricted_coeffs()?;
        let idx = Var::PARAMS
            .iter()
            .position(|p| *p == v)
            .ok_or_else(|| ModelError::UnknownParameter(v.name().to_string()))?;
        Ok(&c[idx])
    }

    /// Parameter assignment for specialising symbolic polynomials.
    pub fn assignment(&self) -> Result<Vec<(Var, ExactScalar)>, ModelError> {
        let c = self.restricted_coeffs()?;
        Ok(Var::PARAMS.iter().copied().zip(c.iter().cloned()).collect())
    }

    /// All terms `x^i y^j -> coefficient`, including the derived one.
    pub fn term_list(&self) -> BTreeMap<(u32, u32), ExactScalar> {
        match &self.kind {
            ModelKind::General(t) => t.clone(),
            ModelKind::Restricted(c) => {
                let mut out = BTreeMap::new();
                for (((i, j), _), v) in RESTRICTED_TERMS.iter().zip(c.iter()) {
                    if !v.is_zero() {
                        out.insert((*i, *j), v.clone());
                    }
                }
                let nine_a2 = &ExactScalar::from_integer(9) * &(&c[0] * &c[0]);
                out.insert(DERIVED_TERM, nine_a2);
                out
            }
        }
    }

    /// The same polynomial as a general-mode model.
    pub fn to_general(&self) -> WModel {
        WModel {
            kind: ModelKind::General(self.term_list()),
        }
    }

    /// `W(x, y)` with exact coefficients.
    pub fn to_polynomial(&self) -> Q3Poly {
        SparsePoly::from_terms(
            self.term_list()
                .into_iter()
                .map(|((i, j), c)| (Monomial::from_pairs(&[(Var::X, i), (Var::Y, j)]), c)),
        )
    }

    /// Coefficients as rationals when none involves `sqrt 3`.
    pub fn is_rational(&self) -> bool {
        self.term_list().values().all(|c| c.is_rational())
    }

    /// The restricted family with the twelve parameters left symbolic and
    /// the `x^4 y` coefficient expanded to `9 a^2`.
    pub fn symbolic_polynomial() -> QPoly {
        let mut w = QPoly::zero();
        for ((i, j), v) in RESTRICTED_TERMS {
            let m = Monomial::from_pairs(&[(Var::X, i), (Var::Y, j), (v, 1)]);
            w.add_term(m, &Rational::from_integer(1.into()));
        }
        let m = Monomial::from_pairs(&[(Var::X, 4), (Var::Y, 1), (Var::A, 2)]);
        w.add_term(m, &Rational::from_integer(9.into()));
        w
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_poly;

    #[test]
    fn w3_polynomial() {
        let want: Q3Poly =
            parse_poly("1/3*x^3 + 1/2*x^4 + 2/5*x^5 + x^4*y + 2*x^3*y^2 + 22/5*y^5").unwrap();
        assert_eq!(WModel::w3().to_polynomial(), want);
    }

    #[test]
    fn w_eps_polynomial() {
        let w = WModel::w_eps(ExactScalar::ratio(1, 10))
            .unwrap()
            .to_polynomial();
        let want: Q3Poly = parse_poly("1/3*x^3 + x^4*y + 1/10*y^6").unwrap();
        assert_eq!(w, want);
    }

    #[test]
    fn w4_derived_term_matches_table() {
        // 9 a^2 with a = sqrt3/9 is 1/3
        let w = WModel::w4().to_polynomial();
        let m = Monomial::from_pairs(&[(Var::X, 4), (Var::Y, 1)]);
        assert_eq!(w.coeff(&m), ExactScalar::ratio(1, 3));
        assert_eq!(w.len(), 13);
    }

    #[test]
    fn symbolic_has_thirteen_terms() {
        let w = WModel::symbolic_polynomial();
        assert_eq!(w.len(), 13);
        let m = Monomial::from_pairs(&[(Var::X, 4), (Var::Y, 1), (Var::A, 2)]);
        assert_eq!(w.coeff(&m), Rational::from_integer(9.into()));
    }

    #[test]
    fn invalid_coefficients_rejected() {
        assert_eq!(
            WModel::restricted_from(&[(Var::B, ExactScalar::from_integer(1))]).unwrap_err(),
            ModelError::ZeroCubic
        );
        assert!(matches!(
            WModel::restricted_from(&[
                (Var::A, ExactScalar::from_integer(1)),
                (Var::B, ExactScalar::from_integer(-1))
            ]),
            Err(ModelError::NegativeCoefficient(..))
        ));
        assert!(WModel::general([((3, 0), ExactScalar::from_integer(-1))]).is_err());
        let g = WModel::general([((3, 0), ExactScalar::zero())]).unwrap();
        assert!(g.term_list().is_empty());
        assert_eq!(
            WModel::w3().to_general().param(Var::A),
            Err(ModelError::RequiresRestricted)
        );
    }
}
