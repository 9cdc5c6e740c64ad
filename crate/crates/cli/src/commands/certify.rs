use std::path::{Path, PathBuf};

use rgfp::certificate::{
    build_ec, build_er, certify_independent, certify_polynomial, compute_e,
    verify_identity_randomized, verify_identity_symbolic, Certificate, CertificationFailure,
    IndependentError, Provenance,
};
use rgfp::{Coefficient, Rational};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::input::{elevation_cap, load_model};
use crate::report::{emit, Console, Report};
use crate::{CertifyMode, CliError, Outcome};

pub struct Args {
    pub mode: CertifyMode,
    pub trials: usize,
    pub seed: u64,
    pub symbolic: bool,
    pub out: Option<PathBuf>,
    pub appendix_out: Option<PathBuf>,
    pub model: Option<PathBuf>,
    pub params: Vec<String>,
    pub max_elevation: Option<u32>,
    pub json: Option<String>,
    pub timings: bool,
}

/// Refutation beats failure beats inconclusive beats pass.
fn worst(a: Outcome, b: Outcome) -> Outcome {
    let rank = |o: Outcome| match o {
        Outcome::Pass => 0,
        Outcome::Inconclusive => 1,
        Outcome::Fail => 2,
        Outcome::Refutation => 3,
    };
    if rank(b) > rank(a) {
        b
    } else {
        a
    }
}

fn write_cert(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Output(format!("{}: {e}", path.display())))
}

fn cert_summary<C: Coefficient>(c: &Certificate<C>) -> Value {
    let text = c.serialize();
    json!({
        "provenance": c.provenance.to_string(),
        "terms": c.terms.len(),
        "slices": c.slices,
        "max_elevation": c.max_elevation_used,
        "sha256": format!("{:x}", Sha256::digest(text.as_bytes())),
    })
}

fn failure_json<C: Coefficient>(f: &CertificationFailure<C>) -> Value {
    json!({
        "params": f.params.to_string(),
        "x_exp": f.x_exp,
        "slice": f.slice.to_string(),
        "reason": f.reason.to_string(),
        "definitive": f.is_definitive(),
    })
}

fn failure_outcome<C: Coefficient>(f: &CertificationFailure<C>) -> Outcome {
    if f.is_definitive() {
        Outcome::Refutation
    } else {
        Outcome::Inconclusive
    }
}

pub fn run(a: Args) -> Result<Outcome, CliError> {
    if a.trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    let cap = elevation_cap(a.max_elevation)?;
    let loaded = a
        .model
        .as_deref()
        .map(|p| load_model(p, &a.params))
        .transpose()?;
    if loaded.is_none() && !a.params.is_empty() {
        return Err(CliError::Usage("--param needs --model".into()));
    }
    let con = Console::new(a.json.as_deref());
    let mut report = Report::new("certify", a.timings);
    report.set(
        "mode",
        json!(match a.mode {
            CertifyMode::Appendix => "appendix",
            CertifyMode::Independent => "independent",
            CertifyMode::Both => "both",
        }),
    );
    let mut out = Outcome::Pass;

    if matches!(a.mode, CertifyMode::Independent | CertifyMode::Both) {
        let res = report.timed("independent", || certify_independent(cap));
        let (o, v) = match res {
            Ok(ic) => {
                let marker = ic.a4_x9_marker().map(|q| q.to_string());
                con.line(format!(
                    "independent: certified {} terms in {} slices (max elevation {})",
                    ic.certificate.terms.len(),
                    ic.certificate.slices,
                    ic.certificate.max_elevation_used
                ));
                con.line(format!(
                    "  a^4 x^9 z s^2 coefficient: {}",
                    marker.as_deref().unwrap_or("absent")
                ));
                if let Some(p) = &a.out {
                    write_cert(p, &ic.certificate.serialize())?;
                    con.line(format!("  certificate written to {}", p.display()));
                }
                let mut v = cert_summary(&ic.certificate);
                v["a4_x9_zs2"] = json!(marker);
                (Outcome::Pass, v)
            }
            Err(IndependentError::Certification(f)) => {
                con.line(format!("independent: {}", f));
                (failure_outcome(&f), json!({ "failure": failure_json(&f) }))
            }
            Err(e) => {
                con.line(format!("independent: {e}"));
                (Outcome::Fail, json!({ "error": e.to_string() }))
            }
        };
        report.set("independent", v);
        out = worst(out, o);
    }

    if matches!(a.mode, CertifyMode::Appendix | CertifyMode::Both) {
        let (o, v) = appendix(&a, &con, &mut report)?;
        report.set("appendix", v);
        out = worst(out, o);
    }

    if let Some(m) = &loaded {
        report.model(m);
        let res = report.timed("model", || {
            let e = compute_e(&m.file.model).map_err(|e| e.to_string())?;
            Ok::<_, String>(certify_polynomial(&e, cap, Provenance::Independent))
        });
        let (o, v) = match res {
            Ok(Ok(c)) => {
                con.line(format!("model: e certified with {} terms", c.terms.len()));
                (Outcome::Pass, cert_summary(&c))
            }
            Ok(Err(f)) => {
                con.line(format!("model: {f}"));
                (failure_outcome(&f), json!({ "failure": failure_json(&f) }))
            }
            Err(e) => {
                con.line(format!("model: {e}"));
                (Outcome::Fail, json!({ "error": e }))
            }
        };
        report.set("model_e", v);
        out = worst(out, o);
    }

    con.line(format!("status: {}", report_status(out)));
    if let Some(dest) = &a.json {
        emit(&report.finish(out), dest)?;
    }
    Ok(out)
}

fn report_status(o: Outcome) -> &'static str {
    match o {
        Outcome::Pass => "pass",
        Outcome::Fail => "fail",
        Outcome::Inconclusive => "inconclusive",
        Outcome::Refutation => "refutation",
    }
}

fn appendix(a: &Args, con: &Console, report: &mut Report) -> Result<(Outcome, Value), CliError> {
    let randomized = report.timed("appendix_randomized", || {
        verify_identity_randomized(a.trials, a.seed)
    });
    let randomized = match randomized {
        Ok(r) => r,
        Err(e) => {
            con.line(format!("appendix: {e}"));
            return Ok((Outcome::Fail, json!({ "error": e.to_string() })));
        }
    };
    let equal = randomized.trials.iter().filter(|t| t.is_equal()).count();
    let diff: Vec<String> = randomized
        .mismatching_monomials()
        .iter()
        .map(|m| m.to_string())
        .collect();
    con.line(format!(
        "appendix: {equal}/{} random trials agree (seed {})",
        randomized.trials.len(),
        a.seed
    ));
    if !diff.is_empty() {
        con.line(format!("  differing monomials: {}", diff.join(", ")));
    }
    let trials: Vec<Value> = randomized
        .trials
        .iter()
        .enumerate()
        .map(
            |(i, t)| json!({ "trial": i, "equal": t.is_equal(), "mismatches": t.mismatches.len() }),
        )
        .collect();
    let mut ok = randomized.all_equal();
    let mut v = json!({
        "seed": a.seed,
        "trials": trials,
        "agreeing": equal,
        "mismatching_monomials": diff,
    });

    if a.symbolic {
        let sym = report.timed("appendix_symbolic", verify_identity_symbolic);
        match sym {
            Ok(s) => {
                let terms: Vec<String> = s
                    .difference
                    .terms()
                    .take(20)
                    .map(|(m, c)| format!("{c} {m}"))
                    .collect();
                con.line(format!(
                    "  symbolic identity: {}",
                    if s.is_zero() {
                        "exact".to_string()
                    } else {
                        format!("{} differing terms", s.difference.terms().len())
                    }
                ));
                v["symbolic"] = json!({ "exact": s.is_zero(), "difference_terms": s.difference.terms().len(), "first_terms": terms });
                ok &= s.is_zero();
            }
            Err(e) => {
                v["symbolic"] = json!({ "error": e.to_string() });
                ok = false;
            }
        }
    }

    let sum = build_ec().and_then(|ec| build_er().map(|er| &ec + &er));
    match sum {
        Ok(p) => {
            let cert: Certificate<Rational> =
                Certificate::from_zs_poly(&p, Provenance::AppendixCrosscheck);
            // e_c is stated in terms of R_n; with R_n expanded into the
            // parameters, negative terms are expected and not a failure
            let nonneg = cert.all_nonneg();
            con.line(format!(
                "  transcribed form: {} terms ({} negative after expanding R_n)",
                cert.terms.len(),
                cert.negative_terms().count()
            ));
            if let Some(path) = &a.appendix_out {
                write_cert(path, &cert.serialize())?;
                con.line(format!(
                    "  appendix certificate written to {}",
                    path.display()
                ));
            }
            let mut s = cert_summary(&cert);
            s["expanded_all_nonneg"] = json!(nonneg);
            v["certificate"] = s;
        }
        Err(e) => {
            v["certificate"] = json!({ "error": e.to_string() });
            ok = false;
        }
    }
    Ok((if ok { Outcome::Pass } else { Outcome::Fail }, v))
}
