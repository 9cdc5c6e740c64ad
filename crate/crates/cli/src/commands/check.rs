use rgfp::conditions::{check_existence, check_model, check_r510, ConditionReport};
use rgfp::ExactScalar;
use serde_json::{json, Value};

use super::outcome;
use crate::input::{elevation_cap, load_model};
use crate::report::{emit, scalar, Console, Report};
use crate::{CliError, ModelArgs, Outcome};

pub fn run(
    args: &ModelArgs,
    existence_only: bool,
    max_elevation: Option<u32>,
    json_out: Option<&str>,
    timings: bool,
) -> Result<Outcome, CliError> {
    let cap = elevation_cap(max_elevation)?;
    let loaded = load_model(&args.model, &args.params)?;
    let m = &loaded.file.model;
    let con = Console::new(json_out);
    let mut report = Report::new("check", timings);
    report.model(&loaded);

    let cr = report.timed("checks", || {
        if existence_only {
            check_existence(m, cap)
        } else {
            let mut cr = check_model(m, cap);
            // general models get their R_n through the reconstructed form
            if let Some(r) = cr.reconstructed.clone() {
                cr.merge(check_r510(&r));
            }
            cr
        }
    });

    let out = outcome(cr.status());
    con.line(format!(
        "model {} ({})",
        args.model.display(),
        if m.is_restricted() {
            "restricted"
        } else {
            "general"
        }
    ));
    for c in &cr.checks {
        let w: Vec<String> = c.witnesses.iter().map(|w| w.to_string()).collect();
        if w.is_empty() {
            con.line(format!("  {:<18} {}", c.name, c.status));
        } else {
            con.line(format!("  {:<18} {}  [{}]", c.name, c.status, w.join("; ")));
        }
    }
    if let Some(r) = &cr.r_values {
        let vals: Vec<String> = r.iter().map(scalar).collect();
        con.line(format!("  R5..R10 = ({})", vals.join(", ")));
    }
    con.line(format!("status: {}", cr.status()));

    fill(&mut report, &cr);
    if let Some(dest) = json_out {
        emit(&report.finish(out), dest)?;
    }
    Ok(out)
}

fn fill(report: &mut Report, cr: &ConditionReport) {
    let checks: Vec<Value> = cr
        .checks
        .iter()
        .map(|c| {
            json!({
                "name": c.name,
                "status": c.status.to_string(),
                "witnesses": c.witnesses.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
            })
        })
        .collect();
    report.set("checks", Value::Array(checks));
    if let Some(r) = &cr.r_values {
        // R5 first, R10 last
        report.set("r_values", json!(r.iter().map(scalar).collect::<Vec<_>>()));
    }
    if let Some(c) = &cr.r_certificate {
        report.set(
            "r_certificate",
            json!({
                "terms": c.terms.len(),
                "slices": c.slices,
                "max_elevation": c.max_elevation_used,
            }),
        );
    }
    if let Some(r) = &cr.reconstructed {
        let coeffs: serde_json::Map<String, Value> = r
            .assignment()
            .expect("restricted")
            .into_iter()
            .filter(|(_, c)| *c != ExactScalar::from_integer(0))
            .map(|(v, c)| (v.name().to_string(), json!(scalar(&c))))
            .collect();
        report.set("reconstructed", Value::Object(coeffs));
    }
}
