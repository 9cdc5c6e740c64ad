use rgfp::model::{in_xi, Point2};
use rgfp::solver::{iterate_map, solve_fixed_point, NumericSystem, OrbitOptions, SolveOptions};
use serde_json::json;

use crate::input::{load_model, parse_pair};
use crate::report::{emit, Console, Report};
use crate::{CliError, ModelArgs, Outcome};

pub fn run(
    args: &ModelArgs,
    from: &str,
    steps: usize,
    json_out: Option<&str>,
    timings: bool,
) -> Result<Outcome, CliError> {
    let (x0, y0) = parse_pair(from, "--from")?;
    let loaded = load_model(&args.model, &args.params)?;
    let m = &loaded.file.model;
    let con = Console::new(json_out);
    let mut report = Report::new("iterate", timings);
    report.model(&loaded);

    let sys = NumericSystem::<f64>::new(m).map_err(|e| CliError::Input(e.to_string()))?;
    // the orbit can only be classified against a fixed point we know
    let fixed = solve_fixed_point::<f64>(m, &SolveOptions::default())
        .ok()
        .filter(|r| r.newton_converged)
        .map(|r| r.point());
    let opts = OrbitOptions {
        n_max: steps,
        ..Default::default()
    };
    let orbit = report.timed("iterate", || {
        iterate_map(&sys, Point2::new(x0, y0), fixed, &opts)
    });

    con.line(format!("{:>6}  {:>24}  {:>24}  in Xi", "step", "x", "y"));
    for (k, p) in orbit.points.iter().enumerate() {
        con.line(format!("{k:>6}  {:>24e}  {:>24e}  {}", p.x, p.y, in_xi(p)));
    }
    con.line(format!(
        "classification: {} after {} steps",
        orbit.class, orbit.steps
    ));
    if let Some(k) = orbit.left_xi_at {
        con.line(format!("left Xi at step {k}"));
    }

    report.set("from", json!([x0, y0]));
    report.set("fixed_point", json!(fixed.map(|p| [p.x, p.y])));
    report.set("classification", json!(orbit.class.to_string()));
    report.set("steps", json!(orbit.steps));
    report.set("left_xi_at", json!(orbit.left_xi_at));
    report.set(
        "orbit",
        json!(orbit.points.iter().map(|p| [p.x, p.y]).collect::<Vec<_>>()),
    );
    if let Some(dest) = json_out {
        emit(&report.finish(Outcome::Pass), dest)?;
    }
    Ok(Outcome::Pass)
}
