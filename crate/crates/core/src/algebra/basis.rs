//! Rewriting univariate polynomials in the `z^i (1-z)^j` basis with
//! non-negative coefficients.
//!
//! Boundary zeros at `z = 0` and `z = 1` are factored out exactly first;
//! the remaining factor is expanded in the (unnormalised) Bernstein basis
//! `z^k (1-z)^(N-k)` and degree-elevated until every coefficient is
//! non-negative. Elevation terminates for polynomials strictly positive on
//! `[0, 1]`; a polynomial that goes negative somewhere in `(0, 1)` has no
//! such representation, and an exact rational witness is returned.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::coeff::Coefficient;
use super::poly::SparsePoly;
use super::var::{Monomial, Var};

/// Extra elevation allowed beyond the input degree by default.
pub const DEFAULT_ELEVATION_MARGIN: u32 = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZsTerm<C> {
    pub z_exp: u32,
    pub s_exp: u32,
    pub coeff: C,
}

/// `sum coeff * z^z_exp * s^s_exp` with `s = 1 - z` and every coefficient
/// `>= 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZsRepresentation<C> {
    pub terms: Vec<ZsTerm<C>>,
    /// Bernstein degree `N` at which all coefficients became non-negative
    /// (including the factored boundary powers).
    pub elevation: u32,
}

impl<C: Coefficient> ZsRepresentation<C> {
    /// The representation as a polynomial in `z` and `s`.
    pub fn to_zs_poly(&self) -> SparsePoly<C> {
        SparsePoly::from_terms(self.terms.iter().map(|t| {
            (
                Monomial::from_pairs(&[(Var::Z, t.z_exp), (Var::S, t.s_exp)]),
                t.coeff.clone(),
            )
        }))
    }

    /// Substitutes `s = 1 - z`, reproducing the certified polynomial.
    pub fn expand(&self) -> SparsePoly<C> {
        let one_minus_z = &SparsePoly::one() - &SparsePoly::var(Var::Z);
        self.to_zs_poly().substitute(Var::S, &one_minus_z)
    }

    pub fn all_nonneg(&self) -> bool {
        self.terms.iter().all(|t| t.coeff.is_nonneg())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum RewriteFailure<C: Coefficient> {
    /// Not a polynomial in `z` alone.
    #[error("input is not a polynomial in z alone")]
    NotUnivariate,
    /// The cap was reached with a negative coefficient remaining.
    #[error("inconclusive: no non-negative form up to degree {elevation}")]
    Inconclusive { elevation: u32 },
    /// `p(witness) < 0` at an exact point of `(0, 1)`; no representation exists.
    #[error("negative at z = {witness}: value {value}")]
    Negative { witness: BigRational, value: C },
}

impl<C: Coefficient> RewriteFailure<C> {
    pub fn is_definitive(&self) -> bool {
        matches!(self, RewriteFailure::Negative { .. })
    }
}

/// Default cap for an input polynomial: its degree plus the margin.
pub fn default_max_elevation<C: Coefficient>(p: &SparsePoly<C>) -> u32 {
    p.degree_in(Var::Z).unwrap_or(0) + DEFAULT_ELEVATION_MARGIN
}

/// Finds non-negative `c_ij` with `p(z) = sum c_ij z^i (1-z)^j`.
///
/// `max_elevation` bounds the total degree `i + j` of the returned basis
/// elements; the first (lowest) degree that works is returned.
pub fn rewrite_nonneg_zs<C: Coefficient>(
    p: &SparsePoly<C>,
    max_elevation: u32,
) -> Result<ZsRepresentation<C>, RewriteFailure<C>> {
    if !p.only_uses(&[Var::Z]) {
        return Err(RewriteFailure::NotUnivariate);
    }
    if p.is_zero() {
        return Ok(ZsRepresentation {
            terms: Vec::new(),
            elevation: 0,
        });
    }
    let dense = to_dense(p);
    let low = dense.iter().position(|c| !c.is_zero()).unwrap_or(0);
    let mut q: Vec<C> = dense[low..].to_vec();
    let mut at_one = 0u32;
    while eval_dense(&q, &C::one()).is_zero() {
        q = divide_one_minus_z(&q);
        at_one += 1;
    }
    let boundary = low as u32 + at_one;
    // q(0) != 0 and q(1) != 0 now
    if q[0].sign() == std::cmp::Ordering::Less {
        return Err(boundary_witness(p, false));
    }
    if eval_dense(&q, &C::one()).sign() == std::cmp::Ordering::Less {
        return Err(boundary_witness(p, true));
    }

    let deg = (q.len() - 1) as u32;
    let mut bern = bernstein_coefficients(&q);
    let mut n = deg;
    loop {
        if bern.iter().all(|c| c.is_nonneg()) {
            let terms = bern
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| ZsTerm {
                    z_exp: k as u32 + low as u32,
                    s_exp: n - k as u32 + at_one,
                    coeff: c.clone(),
                })
                .collect();
            return Ok(ZsRepresentation {
                terms,
                elevation: n + boundary,
            });
        }
        if let Some((witness, value)) = grid_witness(&q, n) {
            let scale = boundary_factor::<C>(&witness, low as u32, at_one);
            return Err(RewriteFailure::Negative {
                witness,
                value: value.mul_ref(&scale),
            });
        }
        if n + boundary >= max_elevation {
            return Err(RewriteFailure::Inconclusive {
                elevation: n + boundary,
            });
        }
        bern = elevate(&bern);
        n += 1;
    }
}

fn to_dense<C: Coefficient>(p: &SparsePoly<C>) -> Vec<C> {
    let deg = p.degree_in(Var::Z).unwrap_or(0) as usize;
    let mut out = vec![C::zero(); deg + 1];
    for (m, c) in p.terms() {
        out[m.exp(Var::Z) as usize] = c.clone();
    }
    out
}

fn eval_dense<C: Coefficient>(q: &[C], z: &C) -> C {
    q.iter()
        .rev()
        .fold(C::zero(), |acc, c| acc.mul_ref(z).add_ref(c))
}

/// `q / (1 - z)` assuming `q(1) = 0`.
fn divide_one_minus_z<C: Coefficient>(q: &[C]) -> Vec<C> {
    // synthetic division by (z - 1), then negate
    let n = q.len() - 1;
    let mut out = vec![C::zero(); n];
    let mut carry = C::zero();
    for i in (1..=n).rev() {
        carry = carry.add_ref(&q[i]);
        out[i - 1] = carry.neg_ref();
    }
    out
}

/// Coefficients `b_k` with `q = sum b_k z^k (1-z)^(N-k)`, `N = deg q`.
fn bernstein_coefficients<C: Coefficient>(q: &[C]) -> Vec<C> {
    let n = q.len() - 1;
    let mut b = vec![C::zero(); n + 1];
    for (i, a) in q.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        // z^i = z^i (z + (1-z))^(n-i)
        let mut binom = BigInt::one();
        for j in 0..=(n - i) {
            if j > 0 {
                binom = binom * BigInt::from(n - i - j + 1) / BigInt::from(j);
            }
            let c = C::from_rational(BigRational::from_integer(binom.clone()));
            b[i + j].add_assign_ref(&a.mul_ref(&c));
        }
    }
    b
}

/// One elevation step: multiply by `z + (1 - z)`.
fn elevate<C: Coefficient>(b: &[C]) -> Vec<C> {
    let mut out = vec![C::zero(); b.len() + 1];
    for (k, c) in b.iter().enumerate() {
        out[k].add_assign_ref(c);
        out[k + 1].add_assign_ref(c);
    }
    out
}

fn grid_witness<C: Coefficient>(q: &[C], n: u32) -> Option<(BigRational, C)> {
    let n = n.max(2);
    (1..n).find_map(|k| {
        let t = BigRational::new(k.into(), n.into());
        let v = eval_dense(q, &C::from_rational(t.clone()));
        (v.sign() == std::cmp::Ordering::Less).then_some((t, v))
    })
}

fn boundary_factor<C: Coefficient>(z: &BigRational, low: u32, at_one: u32) -> C {
    let zc = C::from_rational(z.clone());
    let sc = C::from_rational(BigRational::one() - z);
    let mut f = C::one();
    for _ in 0..low {
        f = f.mul_ref(&zc);
    }
    for _ in 0..at_one {
        f = f.mul_ref(&sc);
    }
    f
}

/// Negative just inside a boundary: halve towards it until `p < 0`.
fn boundary_witness<C: Coefficient>(p: &SparsePoly<C>, near_one: bool) -> RewriteFailure<C> {
    let mut gap = BigRational::new(1.into(), 2.into());
    for _ in 0..4096 {
        let z = if near_one {
            BigRational::one() - &gap
        } else {
            gap.clone()
        };
        let v = p
            .eval_exact(&[(Var::Z, C::from_rational(z.clone()))])
            .expect("univariate");
        if v.sign() == std::cmp::Ordering::Less {
            return RewriteFailure::Negative {
                witness: z,
                value: v,
            };
        }
        gap = gap / BigRational::from_integer(2.into());
    }
    unreachable!("nonzero polynomial negative at a boundary must be negative nearby")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ExactScalar;
    use num_traits::Zero;

    type P = SparsePoly<BigRational>;

    fn zpoly(coeffs: &[(i64, i64)]) -> P {
        P::from_terms(coeffs.iter().enumerate().map(|(i, &(n, d))| {
            (
                Monomial::var_pow(Var::Z, i as u32),
                BigRational::new(n.into(), d.into()),
            )
        }))
    }

    fn int(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn three_minus_two_z() {
        let p = zpoly(&[(3, 1), (-2, 1)]);
        let rep = rewrite_nonneg_zs(&p, 10).unwrap();
        assert_eq!(
            rep.terms,
            vec![
                ZsTerm {
                    z_exp: 0,
                    s_exp: 1,
                    coeff: int(3)
                },
                ZsTerm {
                    z_exp: 1,
                    s_exp: 0,
                    coeff: int(1)
                },
            ]
        );
        assert_eq!(rep.expand(), p);
    }

    #[test]
    fn already_nonneg_monomial() {
        let p = zpoly(&[(0, 1), (0, 1), (1, 1)]);
        let rep = rewrite_nonneg_zs(&p, 10).unwrap();
        assert_eq!(
            rep.terms,
            vec![ZsTerm {
                z_exp: 2,
                s_exp: 0,
                coeff: int(1)
            }]
        );
    }

    #[test]
    fn negative_at_zero_is_definitive() {
        let p = zpoly(&[(-1, 2), (1, 1)]);
        let err = rewrite_nonneg_zs(&p, 10).unwrap_err();
        assert!(err.is_definitive());
        if let RewriteFailure::Negative { witness, value } = err {
            assert!(witness > BigRational::zero() && witness < BigRational::one());
            assert!(value < BigRational::zero());
        }
    }

    #[test]
    fn interior_negative_region_found() {
        // (z - 1/2)^2 - 1/100 dips below zero around z = 1/2
        let p = zpoly(&[(6, 25), (-1, 1), (1, 1)]);
        let err = rewrite_nonneg_zs(&p, 200).unwrap_err();
        assert!(err.is_definitive(), "{err:?}");
    }

    #[test]
    fn double_root_in_interior_is_inconclusive() {
        // (z - 1/2)^2 >= 0 but has no positive-coefficient form
        let p = zpoly(&[(1, 4), (-1, 1), (1, 1)]);
        let err = rewrite_nonneg_zs(&p, 30).unwrap_err();
        assert_eq!(err, RewriteFailure::Inconclusive { elevation: 30 });
    }

    #[test]
    fn boundary_zeros_are_factored() {
        // z (1-z)^2 (3 - 2z)
        let p = &(&zpoly(&[(0, 1), (1, 1)]) * &zpoly(&[(1, 1), (-1, 1)]).pow(2))
            * &zpoly(&[(3, 1), (-2, 1)]);
        let rep = rewrite_nonneg_zs(&p, 10).unwrap();
        assert!(rep.all_nonneg());
        assert_eq!(rep.expand(), p);
        assert!(rep.terms.iter().all(|t| t.z_exp >= 1 && t.s_exp >= 2));
    }

    #[test]
    fn strictly_positive_needs_elevation() {
        // 1 - 3z + 3z^2 = z^3 + (1-z)^3 needs Bernstein degree 3 > 2
        let p = zpoly(&[(1, 1), (-3, 1), (3, 1)]);
        let rep = rewrite_nonneg_zs(&p, 20).unwrap();
        assert!(rep.elevation > 2);
        assert_eq!(rep.expand(), p);
    }

    #[test]
    fn works_over_sqrt3() {
        // sqrt3 - z > 0 on [0,1]
        let p = SparsePoly::from_terms([
            (Monomial::ONE, ExactScalar::sqrt3()),
            (Monomial::var(Var::Z), ExactScalar::from_integer(-1)),
        ]);
        let rep = rewrite_nonneg_zs(&p, 10).unwrap();
        assert_eq!(rep.expand(), p);
        // 1/2 - sqrt3 z changes sign at z = 1/(2 sqrt3)
        let q = SparsePoly::from_terms([
            (Monomial::ONE, ExactScalar::ratio(1, 2)),
            (
                Monomial::var(Var::Z),
                ExactScalar::new(BigRational::zero(), BigRational::new((-1).into(), 1.into())),
            ),
        ]);
        assert!(rewrite_nonneg_zs(&q, 10).unwrap_err().is_definitive());
    }

    #[test]
    fn rejects_multivariate_input() {
        let p = &P::var(Var::Z) + &P::var(Var::X);
        assert_eq!(
            rewrite_nonneg_zs(&p, 10).unwrap_err(),
            RewriteFailure::NotUnivariate
        );
    }

    #[test]
    fn zero_has_empty_representation() {
        let rep = rewrite_nonneg_zs(&P::zero(), 10).unwrap();
        assert!(rep.terms.is_empty());
    }
}
