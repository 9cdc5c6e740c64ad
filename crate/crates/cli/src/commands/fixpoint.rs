use rgfp::algebra::{SparsePoly, Var};
use rgfp::conditions::{check_model, check_r510, Status};
use rgfp::model::{apply_phi_polys, Point2};
use rgfp::solver::{
    default_x_hi, dphi_eigenvalues, scan_uniqueness, solve_fixed_point_in, FixedPointResult,
    NumericSystem, ScanOptions, SolveOptions, UniquenessReport,
};
use rgfp::{ExactScalar, Q3Poly, WModel};
use serde_json::{json, Value};

use crate::input::{elevation_cap, load_model, parse_pair};
use crate::report::{emit, Console, Report};
use crate::{CliError, ModelArgs, Outcome};

pub fn run(
    args: &ModelArgs,
    tol: f64,
    scan: Option<usize>,
    quadrant: Option<&str>,
    force: bool,
    json_out: Option<&str>,
    timings: bool,
) -> Result<Outcome, CliError> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(CliError::Usage(format!(
            "--tol must be positive, got {tol}"
        )));
    }
    if scan.is_some_and(|n| n < 2) {
        return Err(CliError::Usage(
            "--scan needs at least 2 nodes per side".into(),
        ));
    }
    let quadrant = quadrant.map(|q| parse_pair(q, "--quadrant")).transpose()?;
    if quadrant.is_some() && scan.is_none() {
        return Err(CliError::Usage("--quadrant needs --scan".into()));
    }
    if quadrant.is_some_and(|(x, y)| x <= 0.0 || y <= 0.0) {
        return Err(CliError::Usage("--quadrant bounds must be positive".into()));
    }
    let cap = elevation_cap(None)?;
    let loaded = load_model(&args.model, &args.params)?;
    let m = &loaded.file.model;
    let con = Console::new(json_out);
    let mut report = Report::new("fixpoint", timings);
    report.model(&loaded);

    let checks = report.timed("checks", || {
        let mut cr = check_model(m, cap);
        if let Some(r) = cr.reconstructed.clone() {
            cr.merge(check_r510(&r));
        }
        cr
    });
    let failed: Vec<&str> = checks
        .checks
        .iter()
        .filter(|c| c.status != Status::Pass)
        .map(|c| c.name)
        .collect();
    report.set("checks_status", json!(checks.status().to_string()));
    if !failed.is_empty() {
        if !force {
            let msg = format!(
                "class violation: model does not pass its checks ({})",
                failed.join(", ")
            );
            con.line(&msg);
            eprintln!("rgfp: {msg}; use --force to solve anyway");
            report.set("error", json!(msg));
            if let Some(dest) = json_out {
                emit(&report.finish(Outcome::Fail), dest)?;
            }
            return Ok(Outcome::Fail);
        }
        eprintln!(
            "rgfp: warning: solving despite failed checks ({})",
            failed.join(", ")
        );
        report.set("forced", json!(true));
    }

    let sys = match NumericSystem::<f64>::new(m) {
        Ok(s) => s,
        Err(e) => return solver_failure(report, &con, json_out, e.to_string()),
    };
    let opts = SolveOptions {
        tol,
        exact_confirmation: true,
        ..Default::default()
    };
    let r = match report.timed("solve", || solve_fixed_point_in(m, &sys, &opts)) {
        Ok(r) => r,
        Err(e) => return solver_failure(report, &con, json_out, e.to_string()),
    };

    let mut out = if r.newton_converged && r.interior_xi && r.residual < 1e-10 {
        Outcome::Pass
    } else {
        Outcome::Fail
    };
    print_result(&con, &r);
    let ev = dphi_eigenvalues(&sys, r.point());
    con.line(format!("  DPhi eigenvalues: {}", fmt_eigen(&ev)));
    let mut fp = result_json(&r);
    fp["dphi_eigenvalues"] = json!(ev
        .iter()
        .map(|(re, im)| json!([re, im]))
        .collect::<Vec<_>>());
    report.set("fixed_point", fp);

    if let Some(p) = primed_check(m, r.point()) {
        con.line(format!(
            "  primed system (x = sqrt3 x', y = 3 y') is rational; residual at (x', y') = ({}, {}): {:.3e}",
            p.0.x, p.0.y, p.1
        ));
        report.set("primed", json!({ "x": p.0.x, "y": p.0.y, "residual": p.1 }));
    }

    if let Some(n) = scan {
        let opts = match quadrant {
            Some((xh, yh)) => ScanOptions::quadrant(n, xh, yh),
            None => ScanOptions::strip(n, default_x_hi(&sys)),
        };
        let rep = report.timed("scan", || scan_uniqueness(&sys, &opts));
        print_scan(&con, &rep, quadrant.is_some());
        report.set("scan", scan_json(&rep, quadrant));
        if rep.interior_count() != 1 && out == Outcome::Pass {
            out = Outcome::Inconclusive;
        }
    }

    con.line(format!(
        "status: {}",
        if out == Outcome::Pass {
            "pass"
        } else if out == Outcome::Fail {
            "fail"
        } else {
            "inconclusive"
        }
    ));
    if let Some(dest) = json_out {
        emit(&report.finish(out), dest)?;
    }
    Ok(out)
}

fn solver_failure(
    mut report: Report,
    con: &Console,
    json_out: Option<&str>,
    msg: String,
) -> Result<Outcome, CliError> {
    con.line(format!("solver error: {msg}"));
    eprintln!("rgfp: {msg}");
    report.set("error", json!(msg));
    if let Some(dest) = json_out {
        emit(&report.finish(Outcome::Fail), dest)?;
    }
    Ok(Outcome::Fail)
}

fn print_result(con: &Console, r: &FixedPointResult) {
    con.line(format!("fixed point: x_f = {}, y_f = {}", r.x_f, r.y_f));
    con.line(format!("  z_f = {}", r.z_f));
    con.line(format!(
        "  residual {:.3e} (exact at rational rounding: {})",
        r.residual,
        r.exact_residual
            .map_or("n/a".into(), |e| format!("{e:.3e}"))
    ));
    con.line(format!(
        "  interior of Xi: {}, in Xi': {}, Newton converged: {} ({} steps), bisection steps: {}",
        r.interior_xi,
        r.in_xi_prime,
        r.newton_converged,
        r.newton_iterations,
        r.bisection_iterations
    ));
    if r.crossings.len() > 1 {
        con.line(format!(
            "  warning: F = 1 crossed {} times along the contour",
            r.crossings.len()
        ));
    }
}

fn fmt_eigen(ev: &[(f64, f64); 2]) -> String {
    ev.iter()
        .map(|(re, im)| {
            if *im == 0.0 {
                format!("{re:.9}")
            } else {
                format!("{re:.9}{im:+.9}i")
            }
        })
        .collect::<Vec<_>>()
        .join(", ")
}

fn result_json(r: &FixedPointResult) -> Value {
    json!({
        "x": r.x_f,
        "y": r.y_f,
        "z": r.z_f,
        "residual": r.residual,
        "exact_residual": r.exact_residual,
        "interior_xi": r.interior_xi,
        "in_xi_prime": r.in_xi_prime,
        "newton_converged": r.newton_converged,
        "newton_iterations": r.newton_iterations,
        "bisection_iterations": r.bisection_iterations,
        "crossings": r.crossings,
    })
}

fn print_scan(con: &Console, rep: &UniquenessReport, quadrant: bool) {
    let n = rep.interior_count();
    con.line(format!(
        "scan {0}x{0} ({1}): {2} of {3} seeds converged, {4} distinct fixed points",
        rep.grid_n,
        if quadrant { "quadrant" } else { "strip" },
        rep.converged,
        rep.seeds,
        rep.clusters.len()
    ));
    for c in &rep.clusters {
        let p = &c.representative;
        con.line(format!(
            "  ({}, {})  {}  residual {:.1e}  seeds {}",
            p.x_f, p.y_f, c.location, p.residual, c.members
        ));
    }
    con.line(format!(
        "{n} interior fixed point{}",
        if n == 1 { "" } else { "s" }
    ));
    con.line(format!(
        "J_GF positive at {}/{} strip samples with F <= 1",
        rep.jgf_positive, rep.jgf_samples
    ));
}

fn scan_json(rep: &UniquenessReport, quadrant: Option<(f64, f64)>) -> Value {
    let clusters: Vec<Value> = rep
        .clusters
        .iter()
        .map(|c| {
            json!({
                "x": c.representative.x_f,
                "y": c.representative.y_f,
                "residual": c.representative.residual,
                "location": c.location.to_string(),
                "members": c.members,
                "first_seed": c.first_seed,
            })
        })
        .collect();
    json!({
        "grid": rep.grid_n,
        "region": match quadrant { Some((x, y)) => json!({ "quadrant": [x, y] }), None => json!("strip") },
        "seeds": rep.seeds,
        "converged": rep.converged,
        "interior": rep.interior_count(),
        "clusters": clusters,
        "jgf_samples": rep.jgf_samples,
        "jgf_positive": rep.jgf_positive,
    })
}

/// For models with `sqrt 3` coefficients: if the rescaling
/// `x = sqrt3 x'`, `y = 3 y'` makes the map rational, the rescaled point and
/// the rescaled map's residual there.
fn primed_check(m: &WModel, p: Point2<f64>) -> Option<(Point2<f64>, f64)> {
    if m.is_rational() {
        return None;
    }
    let r3 = ExactScalar::sqrt3();
    let three = ExactScalar::from_integer(3);
    let (xm, ym) = m.grad();
    let scaled = |q: &Q3Poly| {
        q.substitute_all(&[
            (
                Var::X,
                SparsePoly::var(Var::X).map_coefficients(|c| c * &r3),
            ),
            (
                Var::Y,
                SparsePoly::var(Var::Y).map_coefficients(|c| c * &three),
            ),
        ])
    };
    let inv_r3 = r3.inverse().expect("nonzero");
    let inv_3 = three.inverse().expect("nonzero");
    let xp = scaled(&xm).map_coefficients(|c| c * &inv_r3);
    let yp = scaled(&ym).map_coefficients(|c| c * &inv_3);
    if !xp.terms().chain(yp.terms()).all(|(_, c)| c.is_rational()) {
        return None;
    }
    let q = Point2::new(p.x / 3f64.sqrt(), p.y / 3.0);
    let img = apply_phi_polys(&xp, &yp, q);
    Some((q, (img.x - q.x).abs().max((img.y - q.y).abs())))
}
