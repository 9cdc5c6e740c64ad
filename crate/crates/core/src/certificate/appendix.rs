//! The transcribed decomposition `e = e_c + e_r` and its verification.
//!
//! `data/ec.terms` holds one term of `e_c` per line, written with the
//! symbols `R5 .. R10`; `data/er.table` holds `n: C[n]` per line, each
//! entry multiplied by `x^n`. See `data/TRANSCRIPTION.md`.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::algebra::{parse_poly_with, Coefficient, Monomial, SparsePoly, Var};
use crate::conditions::r_formula_polys;
use crate::model::WModel;
use crate::{ExactScalar, QPoly, Rational};

use super::jacobian::{compute_e, compute_e_symbolic};

const EC_TERMS: &str = include_str!("../../data/ec.terms");
const ER_TABLE: &str = include_str!("../../data/er.table");

/// Largest numerator and denominator of random parameter values.
pub const SAMPLE_BOUND: i64 = 7;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TranscriptionError {
    #[error("{file} line {line}: {message}")]
    Parse {
        file: &'static str,
        line: usize,
        message: String,
    },
    #[error("C[{n}] has a negative coefficient on {monomial}")]
    Negative { n: u32, monomial: String },
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum IdentityError {
    #[error("at least one trial is required")]
    NoTrials,
    #[error(transparent)]
    Transcription(#[from] TranscriptionError),
}

fn resolve_r(name: &str) -> Option<QPoly> {
    static R: OnceLock<[QPoly; 6]> = OnceLock::new();
    let n: usize = name.strip_prefix('R')?.parse().ok()?;
    (5..=10)
        .contains(&n)
        .then(|| R.get_or_init(r_formula_polys)[n - 5].clone())
}

/// The `e_c` terms, one polynomial per transcribed line, with `R_n`
/// expanded.
pub fn ec_terms() -> Result<Vec<QPoly>, TranscriptionError> {
    EC_TERMS
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            parse_poly_with(l, &resolve_r).map_err(|e| TranscriptionError::Parse {
                file: "ec.terms",
                line: i + 1,
                message: e.message().to_string(),
            })
        })
        .collect()
}

/// `e_c(x, z, s)` over the parameters.
pub fn build_ec() -> Result<QPoly, TranscriptionError> {
    Ok(ec_terms()?.iter().fold(QPoly::zero(), |acc, t| &acc + t))
}

/// `C[n](z, s)` for each table row, not yet multiplied by `x^n`. Every
/// expanded coefficient is checked to be non-negative.
pub fn er_table() -> Result<BTreeMap<u32, QPoly>, TranscriptionError> {
    let mut out = BTreeMap::new();
    for (i, line) in ER_TABLE.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let err = |message: String| TranscriptionError::Parse {
            file: "er.table",
            line: i + 1,
            message,
        };
        let (n, body) = line
            .split_once(':')
            .ok_or_else(|| err("expected `n: expr`".into()))?;
        let n: u32 = n.trim().parse().map_err(|_| err("bad index".into()))?;
        let c = parse_poly_with(body, &resolve_r).map_err(|e| err(e.message().to_string()))?;
        if let Some((m, _)) = c.terms().find(|(_, v)| !v.is_nonneg()) {
            return Err(TranscriptionError::Negative {
                n,
                monomial: m.to_string(),
            });
        }
        out.insert(n, c);
    }
    Ok(out)
}

/// `e_r(x, z, s) = sum_n C[n] x^n`.
pub fn build_er() -> Result<QPoly, TranscriptionError> {
    Ok(er_table()?.into_iter().fold(QPoly::zero(), |acc, (n, c)| {
        &acc + &c.mul_monomial(&Monomial::var_pow(Var::X, n))
    }))
}

fn s_to_one_minus_z<C: Coefficient>(p: &SparsePoly<C>) -> SparsePoly<C> {
    p.substitute(Var::S, &(&SparsePoly::one() - &SparsePoly::var(Var::Z)))
}

fn transcribed_sum() -> Result<&'static QPoly, TranscriptionError> {
    static SUM: OnceLock<Result<QPoly, TranscriptionError>> = OnceLock::new();
    SUM.get_or_init(|| Ok(s_to_one_minus_z(&(&build_ec()? + &build_er()?))))
        .as_ref()
        .map_err(Clone::clone)
}

/// Result of one randomized comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrialOutcome {
    pub params: Vec<(Var, Rational)>,
    /// Terms of `e - (e_c + e_r)` in `(x, z)`, in monomial order; empty when
    /// the two sides agree.
    pub mismatches: Vec<(Monomial, ExactScalar)>,
}

impl TrialOutcome {
    pub fn is_equal(&self) -> bool {
        self.mismatches.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandomizedReport {
    pub seed: u64,
    pub trials: Vec<TrialOutcome>,
}

impl RandomizedReport {
    pub fn all_equal(&self) -> bool {
        self.trials.iter().all(TrialOutcome::is_equal)
    }

    /// Monomials that differ in any trial, deduplicated and sorted.
    pub fn mismatching_monomials(&self) -> Vec<Monomial> {
        let mut v: Vec<Monomial> = self
            .trials
            .iter()
            .flat_map(|t| t.mismatches.iter().map(|(m, _)| *m))
            .collect();
        v.sort();
        v.dedup();
        v
    }
}

fn random_params(rng: &mut ChaCha8Rng) -> Vec<(Var, Rational)> {
    Var::PARAMS
        .iter()
        .map(|v| {
            let n = rng.gen_range(1..=SAMPLE_BOUND);
            let d = rng.gen_range(1..=SAMPLE_BOUND);
            (*v, Rational::new(n.into(), d.into()))
        })
        .collect()
}

/// Compares `e` of the concrete model against the transcription evaluated
/// at the same parameters.
pub fn identity_trial(params: &[(Var, Rational)]) -> Result<TrialOutcome, IdentityError> {
    let sum = transcribed_sum()?;
    let exact: Vec<(Var, ExactScalar)> = params
        .iter()
        .map(|(v, q)| (*v, ExactScalar::from_rational(q.clone())))
        .collect();
    let model = WModel::restricted_from(&exact).expect("positive parameters");
    let lhs = compute_e(&model).expect("e is a polynomial");
    let rhs = sum
        .specialize(params)
        .map_coefficients(|c| ExactScalar::from_rational(c.clone()));
    let diff = &lhs - &rhs;
    Ok(TrialOutcome {
        params: params.to_vec(),
        mismatches: diff.terms().map(|(m, c)| (*m, c.clone())).collect(),
    })
}

/// `trials` independent random parameter points drawn from `seed`.
pub fn verify_identity_randomized(
    trials: usize,
    seed: u64,
) -> Result<RandomizedReport, IdentityError> {
    if trials == 0 {
        return Err(IdentityError::NoTrials);
    }
    transcribed_sum()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<_> = (0..trials).map(|_| random_params(&mut rng)).collect();
    let trials = points
        .par_iter()
        .map(|p| identity_trial(p))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(RandomizedReport { seed, trials })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicReport {
    /// `e - (e_c + e_r)|_{s = 1 - z}` over all fourteen variables.
    pub difference: QPoly,
}

impl SymbolicReport {
    pub fn is_zero(&self) -> bool {
        self.difference.is_zero()
    }
}

/// Full symbolic comparison.
pub fn verify_identity_symbolic() -> Result<SymbolicReport, IdentityError> {
    let sum = transcribed_sum()?;
    Ok(SymbolicReport {
        difference: compute_e_symbolic() - sum,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_poly;

    #[test]
    fn table_entries() {
        let t = er_table().unwrap();
        assert_eq!(
            t.keys().copied().collect::<Vec<_>>(),
            (9..=30).collect::<Vec<_>>()
        );
        let p = |s: &str| -> QPoly { parse_poly(s).unwrap() };
        assert_eq!(t[&30], p("9*a15^3*z^16"));
        assert_eq!(t[&29], p("52*a15^2*a24*z^15"));
        assert_eq!(t[&9], p("12*a*(54*a^3 + 10*b*f5 + 9*a*f6)*s^2*z"));
    }

    #[test]
    fn ec_structure() {
        let ec = build_ec().unwrap();
        let first = ec.coefficient_of(Var::X, 7).coefficient_of(Var::Z, 1);
        let want: QPoly = parse_poly("3*a*(24*a*b - g5 - 2*h3)").unwrap();
        assert_eq!(first, want);
        let support: Vec<u32> = ec
            .decompose_by(&[Var::X])
            .keys()
            .map(|m| m.exp(Var::X))
            .collect();
        assert_eq!(support.first(), Some(&7));
        assert_eq!(support.last(), Some(&20));
    }

    #[test]
    fn ec_r5_terms_vanish_for_w3() {
        let w3 = WModel::w3();
        let assignment: Vec<(Var, Rational)> = w3
            .assignment()
            .unwrap()
            .into_iter()
            .map(|(v, c)| (v, c.rational_part().clone()))
            .collect();
        for (line, t) in EC_TERMS.lines().zip(ec_terms().unwrap()) {
            if line.contains("R5") {
                assert!(t.specialize(&assignment).is_zero(), "{line}");
            }
        }
    }

    #[test]
    fn trial_with_only_a() {
        let mut params: Vec<(Var, Rational)> = Var::PARAMS
            .iter()
            .map(|v| (*v, Rational::from_integer(0.into())))
            .collect();
        params[0].1 = Rational::from_integer(1.into());
        assert!(identity_trial(&params).unwrap().is_equal());
    }

    #[test]
    fn randomized_and_symbolic() {
        assert_eq!(
            verify_identity_randomized(0, 1),
            Err(IdentityError::NoTrials)
        );
        let r = verify_identity_randomized(5, 7).unwrap();
        assert!(r.all_equal());
        assert_eq!(r, verify_identity_randomized(5, 7).unwrap());
        assert!(verify_identity_symbolic().unwrap().is_zero());
    }
}
