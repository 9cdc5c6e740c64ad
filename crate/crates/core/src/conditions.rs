//! Class membership checks with witness-bearing reports.

use std::fmt;

use crate::algebra::{parse_poly, rewrite_nonneg_zs, Coefficient, ExactScalar, Var};
use crate::certificate::{
    certify_polynomial, Certificate, CertificationFailure, ElevationCap, Provenance,
};
use crate::model::{WModel, DERIVED_TERM, RESTRICTED_TERMS};
use crate::{Q3Poly, QPoly, Rational};

/// `R_5 .. R_10` in terms of the twelve parameters.
pub const R_FORMULAS: [&str; 6] = [
    "24*a*b - g5 - 2*h3",
    "16*b^2 + 30*a*f5 - 2*h4",
    "216*a^3 + 40*b*f5 + 36*a*f6 - 3*n3",
    "288*a^2*b + 25*f5^2 + 48*b*f6 + 30*a*g5 + 18*a*h3 - 5*a05 - 4*a24",
    "360*a^2*f5 + 60*f5*f6 + 40*b*g5 + 24*b*h3 + 24*a*h4 - 5*a15",
    "648*a^4 + 216*a^2*f6 + 18*f6^2 + 25*f5*g5 + 15*f5*h3 + 16*b*h4 + 9*a*n3 - 3*a06",
];

/// Positive factors `k_n` with `[x^n] R(x, 1) = k_n R_n`.
pub const R_SCALES: [i64; 6] = [1, 1, 1, 1, 1, 2];

/// The six formulas as polynomials in the parameters.
pub fn r_formula_polys() -> [QPoly; 6] {
    R_FORMULAS.map(|s| parse_poly(s).expect("formula parses"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Status {
    Pass,
    Inconclusive,
    Fail,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Inconclusive => "inconclusive",
            Status::Fail => "fail",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// `R_n` and its exact value.
    RValue {
        n: u32,
        value: ExactScalar,
    },
    /// A term `c x^i y^j` of `W`.
    Term {
        x_exp: u32,
        y_exp: u32,
        coeff: ExactScalar,
    },
    /// A required term that is missing.
    MissingTerm(String),
    /// The lowest x-slice of `R` when it is not small enough.
    ResidualSlice {
        x_exp: u32,
        slice: String,
    },
    DegreeGap {
        r_min: Option<u32>,
        y_min: u32,
    },
    /// Bernstein degree used (pass) or reached (inconclusive).
    Elevation(u32),
    /// A rational `z` where a slice of `R` is negative.
    NegativeSlice {
        x_exp: u32,
        z: Rational,
        value: ExactScalar,
    },
    Note(String),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::RValue { n, value } => write!(f, "R{n} = {value}"),
            Witness::Term {
                x_exp,
                y_exp,
                coeff,
            } => write!(f, "term {coeff} x^{x_exp} y^{y_exp}"),
            Witness::MissingTerm(t) => write!(f, "missing {t}"),
            Witness::ResidualSlice { x_exp, slice } => write!(f, "R has x^{x_exp} slice {slice}"),
            Witness::DegreeGap { r_min, y_min } => match r_min {
                Some(r) => write!(
                    f,
                    "gap {} (R starts at x^{r}, Y at x^{y_min})",
                    *r as i64 - *y_min as i64
                ),
                None => write!(f, "R = 0, Y starts at x^{y_min}"),
            },
            Witness::Elevation(n) => write!(f, "elevation {n}"),
            Witness::NegativeSlice { x_exp, z, value } => {
                write!(f, "x^{x_exp} slice is {value} at z = {z}")
            }
            Witness::Note(s) => f.write_str(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub name: &'static str,
    pub status: Status,
    pub witnesses: Vec<Witness>,
}

impl CheckResult {
    fn new(name: &'static str, status: Status, witnesses: Vec<Witness>) -> Self {
        debug_assert!(status != Status::Fail || !witnesses.is_empty());
        CheckResult {
            name,
            status,
            witnesses,
        }
    }

    fn pass_or_fail(name: &'static str, failing: Vec<Witness>) -> Self {
        let status = if failing.is_empty() {
            Status::Pass
        } else {
            Status::Fail
        };
        Self::new(name, status, failing)
    }
}

#[derive(Clone, Debug, Default)]
pub struct ConditionReport {
    pub checks: Vec<CheckResult>,
    /// `R_5 .. R_10`, present for restricted models.
    pub r_values: Option<[ExactScalar; 6]>,
    /// Certificate for `R >= 0` on the strip, when found.
    pub r_certificate: Option<Certificate<ExactScalar>>,
    /// Restricted form recovered by [`check_fromgasket`].
    pub reconstructed: Option<WModel>,
}

impl ConditionReport {
    /// Worst status over all checks; an empty report passes.
    pub fn status(&self) -> Status {
        self.checks
            .iter()
            .map(|c| c.status)
            .max()
            .unwrap_or(Status::Pass)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn merge(&mut self, other: ConditionReport) {
        self.checks.extend(other.checks);
        if other.r_values.is_some() {
            self.r_values = other.r_values;
        }
        if other.r_certificate.is_some() {
            self.r_certificate = other.r_certificate;
        }
        if other.reconstructed.is_some() {
            self.reconstructed = other.reconstructed;
        }
    }

    fn single(check: CheckResult) -> Self {
        ConditionReport {
            checks: vec![check],
            ..Default::default()
        }
    }
}

/// Non-negative coefficients, an `x^3` term, total degree at least 3, and an
/// `x^n y` term with `n >= 2`.
pub fn check_basic(m: &WModel) -> ConditionReport {
    let terms = m.term_list();
    let term = |(i, j): (u32, u32), c: &ExactScalar| Witness::Term {
        x_exp: i,
        y_exp: j,
        coeff: c.clone(),
    };

    let negative = terms
        .iter()
        .filter(|(_, c)| !c.is_nonneg())
        .map(|(k, c)| term(*k, c))
        .collect();
    let cubic = match terms.get(&(3, 0)) {
        Some(c) if c.is_positive() => vec![],
        _ => vec![Witness::MissingTerm("x^3".into())],
    };
    let low = terms
        .iter()
        .filter(|((i, j), _)| i + j < 3)
        .map(|(k, c)| term(*k, c))
        .collect();
    let xny = if terms
        .iter()
        .any(|((i, j), c)| *j == 1 && *i >= 2 && c.is_positive())
    {
        vec![]
    } else {
        vec![Witness::MissingTerm("x^n y with n >= 2".into())]
    };

    ConditionReport {
        checks: vec![
            CheckResult::pass_or_fail("nonnegative-coefficients", negative),
            CheckResult::pass_or_fail("cubic-term", cubic),
            CheckResult::pass_or_fail("min-degree", low),
            CheckResult::pass_or_fail("xny-term", xny),
        ],
        ..Default::default()
    }
}

/// Exact `R_5 .. R_10`.
pub fn compute_rn(m: &WModel) -> Result<[ExactScalar; 6], crate::model::ModelError> {
    let assignment = m.assignment()?;
    Ok(r_formula_polys().map(|p| {
        p.map_coefficients(|c| ExactScalar::from_rational(c.clone()))
            .eval_exact(&assignment)
            .expect("all parameters assigned")
    }))
}

/// Passes iff every `R_n >= 0`; failing values are the witnesses.
pub fn check_r510(m: &WModel) -> ConditionReport {
    let values = match compute_rn(m) {
        Ok(v) => v,
        Err(e) => {
            return ConditionReport::single(CheckResult::new(
                "r510",
                Status::Fail,
                vec![Witness::Note(e.to_string())],
            ))
        }
    };
    let failing = values
        .iter()
        .zip(5u32..)
        .filter(|(v, _)| !v.is_nonneg())
        .map(|(v, n)| Witness::RValue {
            n,
            value: v.clone(),
        })
        .collect();
    ConditionReport {
        checks: vec![CheckResult::pass_or_fail("r510", failing)],
        r_values: Some(values),
        ..Default::default()
    }
}

/// Certifies `R(x, z) = R~(x, z, 1 - z)` with `R~` non-negative.
pub fn certify_r_nonneg(
    m: &WModel,
    cap: ElevationCap,
) -> Result<Certificate<ExactScalar>, CertificationFailure<ExactScalar>> {
    let r = m.compute_r();
    let cert = certify_polynomial(&r, cap, Provenance::Independent)?;
    assert_eq!(cert.expand(), r, "certificate round trip");
    Ok(cert)
}

fn failure_witness<C: Coefficient>(f: &CertificationFailure<C>) -> (Status, Witness) {
    use crate::algebra::RewriteFailure;
    match &f.reason {
        RewriteFailure::Negative { witness, value } => (
            Status::Fail,
            Witness::NegativeSlice {
                x_exp: f.x_exp,
                z: witness.clone(),
                value: value.to_exact(),
            },
        ),
        RewriteFailure::Inconclusive { elevation } => {
            (Status::Inconclusive, Witness::Elevation(*elevation))
        }
        RewriteFailure::NotUnivariate => (
            Status::Fail,
            Witness::Note(format!(
                "x^{} slice is not a polynomial in z alone",
                f.x_exp
            )),
        ),
    }
}

/// Condition 4 (certificate for `R`) together with condition 2: `R >= 0` on
/// the strip makes the quadrant region invariant, and `R(x, 1) > 0` for
/// `x > 0` holds exactly when the certificate's `s`-free part is nonzero.
pub fn check_r_certificate(m: &WModel, cap: ElevationCap) -> ConditionReport {
    match certify_r_nonneg(m, cap) {
        Ok(cert) => {
            let boundary = cert
                .expand()
                .specialize(&[(Var::Z, ExactScalar::from_integer(1))]);
            let strict = if boundary.is_zero() {
                CheckResult::new(
                    "xi-invariance",
                    Status::Fail,
                    vec![Witness::Note("R(x, 1) vanishes identically".into())],
                )
            } else {
                CheckResult::new("xi-invariance", Status::Pass, vec![])
            };
            ConditionReport {
                checks: vec![
                    CheckResult::new(
                        "r-certificate",
                        Status::Pass,
                        vec![Witness::Elevation(cert.max_elevation_used)],
                    ),
                    strict,
                ],
                r_certificate: Some(cert),
                ..Default::default()
            }
        }
        Err(f) => {
            let (status, w) = failure_witness(&f);
            let dependent = CheckResult::new(
                "xi-invariance",
                status,
                vec![Witness::Note("needs the R certificate".into())],
            );
            ConditionReport {
                checks: vec![
                    CheckResult::new("r-certificate", status, vec![w]),
                    dependent,
                ],
                ..Default::default()
            }
        }
    }
}

/// `R / Y(x, x^2 z) = O(x)` uniformly in `z`: the lowest x-power of `R`
/// exceeds that of `Y(x, x^2 z)`, whose coefficient must be strictly
/// positive on the closed interval `0 <= z <= 1`.
pub fn check_o_x(m: &WModel) -> ConditionReport {
    let sys = m.strip_system();
    let name = "r-over-y-small";
    let Ok(y_min) = sys.y_strip.min_degree_in(Var::X) else {
        return ConditionReport::single(CheckResult::new(
            name,
            Status::Fail,
            vec![Witness::Note("Y(x, x^2 z) vanishes identically".into())],
        ));
    };
    let mut fails = Vec::new();

    let y0 = sys.y_strip.coefficient_of(Var::X, y_min);
    if !strictly_positive_on_unit_interval(&y0) {
        fails.push(Witness::ResidualSlice {
            x_exp: y_min,
            slice: format!("lowest Y slice {y0} is not bounded away from 0"),
        });
    }

    let r = sys.r();
    let r_min = r.min_degree_in(Var::X).ok();
    if let Some(rm) = r_min {
        if rm < y_min + 1 {
            fails.push(Witness::ResidualSlice {
                x_exp: rm,
                slice: r.coefficient_of(Var::X, rm).to_string(),
            });
        }
    }
    let gap = Witness::DegreeGap { r_min, y_min };
    let status = if fails.is_empty() {
        Status::Pass
    } else {
        Status::Fail
    };
    fails.push(gap);
    ConditionReport::single(CheckResult::new(name, status, fails))
}

fn strictly_positive_on_unit_interval(p: &Q3Poly) -> bool {
    let at = |z: i64| {
        p.eval_exact(&[(Var::Z, ExactScalar::from_integer(z))])
            .map(|v| v.is_positive())
    };
    matches!((at(0), at(1)), (Ok(true), Ok(true)))
        && rewrite_nonneg_zs(p, crate::algebra::default_max_elevation(p)).is_ok()
}

/// Every existence condition.
pub fn check_existence(m: &WModel, cap: ElevationCap) -> ConditionReport {
    let mut report = check_basic(m);
    report.merge(check_o_x(m));
    report.merge(check_r_certificate(m, cap));
    report
}

/// Structural conditions of the restricted class, the existence conditions,
/// and reconstruction of the restricted form when everything passes.
pub fn check_fromgasket(m: &WModel, cap: ElevationCap) -> ConditionReport {
    let terms = m.term_list();
    let term = |(i, j): (u32, u32), c: &ExactScalar| Witness::Term {
        x_exp: i,
        y_exp: j,
        coeff: c.clone(),
    };
    let high = terms
        .iter()
        .filter(|((i, j), _)| i + j > 6)
        .map(|(k, c)| term(*k, c))
        .collect();
    let y_deg = terms
        .iter()
        .filter(|((i, j), _)| *j > 0 && !(5..=6).contains(&(i + j)))
        .map(|(k, c)| term(*k, c))
        .collect();
    let forbidden = terms
        .iter()
        .filter(|(k, _)| **k == (1, 4) || **k == (2, 3))
        .map(|(k, c)| term(*k, c))
        .collect();

    let mut report = ConditionReport {
        checks: vec![
            CheckResult::pass_or_fail("max-degree-6", high),
            CheckResult::pass_or_fail("y-term-degrees", y_deg),
            CheckResult::pass_or_fail("xy4-x2y3-absent", forbidden),
        ],
        ..Default::default()
    };
    report.merge(check_existence(m, cap));
    if report.status() == Status::Pass {
        report.merge(reconstruct_restricted(m));
    }
    report
}

fn reconstruct_restricted(m: &WModel) -> ConditionReport {
    let terms = m.term_list();
    let pairs: Vec<(Var, ExactScalar)> = RESTRICTED_TERMS
        .iter()
        .filter_map(|(k, v)| terms.get(k).map(|c| (*v, c.clone())))
        .collect();
    let name = "restricted-form";
    let rebuilt = match WModel::restricted_from(&pairs) {
        Ok(r) => r,
        Err(e) => {
            return ConditionReport::single(CheckResult::new(
                name,
                Status::Fail,
                vec![Witness::Note(e.to_string())],
            ))
        }
    };
    if rebuilt.to_polynomial() != m.to_polynomial() {
        let c = terms.get(&DERIVED_TERM).cloned().unwrap_or_default();
        return ConditionReport::single(CheckResult::new(
            name,
            Status::Fail,
            vec![Witness::Term {
                x_exp: DERIVED_TERM.0,
                y_exp: DERIVED_TERM.1,
                coeff: c,
            }],
        ));
    }
    ConditionReport {
        checks: vec![CheckResult::new(name, Status::Pass, vec![])],
        reconstructed: Some(rebuilt),
        ..Default::default()
    }
}

/// The full check suite: existence conditions plus the R_n test for
/// restricted models, or the structural test for general ones.
pub fn check_model(m: &WModel, cap: ElevationCap) -> ConditionReport {
    if m.is_restricted() {
        let mut report = check_existence(m, cap);
        report.merge(check_r510(m));
        report
    } else {
        check_fromgasket(m, cap)
    }
}

/// `[x^n] R(x, 1)` for `n = 5 .. 10`, over the symbolic family.
pub fn symbolic_boundary_coefficients() -> [QPoly; 6] {
    let r = crate::model::symbolic_strip_system().r();
    let r1 = r.specialize(&[(Var::Z, Rational::from_integer(1.into()))]);
    std::array::from_fn(|i| r1.coefficient_of(Var::X, 5 + i as u32))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ModelError;

    fn q(n: i64, d: i64) -> ExactScalar {
        ExactScalar::ratio(n, d)
    }

    fn ints(v: [i64; 6]) -> [ExactScalar; 6] {
        v.map(ExactScalar::from_integer)
    }

    #[test]
    fn rn_values() {
        assert_eq!(
            compute_rn(&WModel::w3()).unwrap(),
            ints([0, 8, 16, 10, 40, 20])
        );
        let a_only = WModel::restricted_from(&[(Var::A, q(1, 1))]).unwrap();
        assert_eq!(compute_rn(&a_only).unwrap(), ints([0, 0, 216, 0, 0, 648]));
        let eps = WModel::w_eps(q(1, 10)).unwrap();
        assert_eq!(
            compute_rn(&eps).unwrap(),
            [q(0, 1), q(0, 1), q(8, 1), q(0, 1), q(0, 1), q(77, 10)]
        );
        assert_eq!(
            compute_rn(&WModel::w3().to_general()),
            Err(ModelError::RequiresRestricted)
        );
    }

    #[test]
    fn rn_match_boundary_coefficients() {
        let boundary = symbolic_boundary_coefficients();
        for ((f, b), k) in r_formula_polys().iter().zip(boundary.iter()).zip(R_SCALES) {
            assert_eq!(&f.scale(&Rational::from_integer(k.into())), b);
        }
    }

    #[test]
    fn r510_threshold() {
        assert_eq!(
            check_r510(&WModel::w_eps(q(8, 3)).unwrap()).status(),
            Status::Pass
        );
        let rep = check_r510(&WModel::w_eps(q(27, 10)).unwrap());
        assert_eq!(rep.status(), Status::Fail);
        assert_eq!(
            rep.checks[0].witnesses,
            vec![Witness::RValue {
                n: 10,
                value: q(-1, 10)
            }]
        );
        let m =
            WModel::restricted_from(&[(Var::A, q(1, 3)), (Var::B, q(1, 2)), (Var::H3, q(3, 1))])
                .unwrap();
        let rep = check_r510(&m);
        assert_eq!(
            rep.checks[0].witnesses,
            vec![Witness::RValue {
                n: 5,
                value: q(-2, 1)
            }]
        );
        assert_eq!(check_r510(&WModel::w4()).status(), Status::Pass);
    }

    #[test]
    fn basic_checks() {
        assert_eq!(check_basic(&WModel::w3()).status(), Status::Pass);
        let cubic = WModel::general([((3, 0), q(1, 1))]).unwrap();
        let rep = check_basic(&cubic);
        assert_eq!(rep.check("xny-term").unwrap().status, Status::Fail);
        assert_eq!(rep.check("cubic-term").unwrap().status, Status::Pass);
        let quad = WModel::general([((2, 0), q(1, 1))]).unwrap();
        assert_eq!(
            check_basic(&quad).check("min-degree").unwrap().status,
            Status::Fail
        );
    }

    #[test]
    fn o_x() {
        let rep = check_o_x(&WModel::w3());
        assert_eq!(rep.status(), Status::Pass);
        assert!(rep.checks[0].witnesses.contains(&Witness::DegreeGap {
            r_min: Some(5),
            y_min: 4
        }));
        assert_eq!(check_o_x(&WModel::w4()).status(), Status::Pass);
        // x^4 y coefficient 8 a^2 instead of 9 a^2
        let broken = WModel::general([((3, 0), q(1, 3)), ((4, 1), q(8, 9))]).unwrap();
        let rep = check_o_x(&broken);
        assert_eq!(rep.status(), Status::Fail);
        assert!(matches!(
            rep.checks[0].witnesses[0],
            Witness::ResidualSlice { x_exp: 4, .. }
        ));
    }

    #[test]
    fn r_certificates() {
        let cert = certify_r_nonneg(&WModel::w3(), ElevationCap::Default).unwrap();
        assert!(cert.all_nonneg());
        let cert4 = certify_r_nonneg(&WModel::w4(), ElevationCap::Default).unwrap();
        assert!(cert4.all_nonneg());
        let err = certify_r_nonneg(&WModel::w_eps(q(27, 10)).unwrap(), ElevationCap::Default)
            .unwrap_err();
        assert!(err.is_definitive());
        assert_eq!(err.x_exp, 10);
        let cert = certify_polynomial(
            &Q3Poly::zero(),
            ElevationCap::Default,
            Provenance::Independent,
        )
        .unwrap();
        assert!(cert.terms.is_empty());
        // x^3/3 + x^4 y: R = 8 x^7 z + 16 x^10 z^2, so R(x, 1) > 0
        let rep = check_r_certificate(&WModel::w_eps(q(0, 1)).unwrap(), ElevationCap::Default);
        assert_eq!(rep.status(), Status::Pass);
    }

    #[test]
    fn full_suite_on_bundled_models() {
        for m in [WModel::w3(), WModel::w4()] {
            let rep = check_model(&m, ElevationCap::Default);
            assert_eq!(rep.status(), Status::Pass, "{:?}", rep.checks);
        }
    }

    #[test]
    fn fromgasket() {
        let rep = check_fromgasket(&WModel::w4().to_general(), ElevationCap::Default);
        assert_eq!(rep.status(), Status::Pass, "{:?}", rep.checks);
        assert_eq!(rep.reconstructed, Some(WModel::w4()));

        let mut t = WModel::w3().term_list();
        t.insert((2, 3), q(1, 1));
        let rep = check_fromgasket(&WModel::general(t).unwrap(), ElevationCap::Default);
        let c = rep.check("xy4-x2y3-absent").unwrap();
        assert_eq!(c.status, Status::Fail);
        assert_eq!(
            c.witnesses,
            vec![Witness::Term {
                x_exp: 2,
                y_exp: 3,
                coeff: q(1, 1)
            }]
        );

        let mut t = WModel::w3().term_list();
        t.insert((7, 0), q(1, 1));
        let rep = check_fromgasket(&WModel::general(t).unwrap(), ElevationCap::Default);
        assert_eq!(rep.check("max-degree-6").unwrap().status, Status::Fail);
        assert!(rep.reconstructed.is_none());
    }
}
