use std::time::Instant;

use beablekit::beable::Membership;
use beablekit::matcore::real_vector;
use beablekit::scenarios::{
    definite_algebra_demo, epr_spin, evaluate, finite_weyl, ideal_measurement, nonuniqueness_3d,
    scenario_algebra, schrodinger_two_pointer, IdealMeasurementParams, NonUniquenessParams, ScenarioOutcome,
};
use beablekit::Tolerance;
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::report::{Entry, InputEcho, Report, Timing};
use crate::run::RunOptions;

pub const DEMO_NAMES: &[&str] = &[
    "epr-spin",
    "ideal-measurement",
    "schrodinger",
    "nonuniqueness-3d",
    "finite-weyl",
    "definite-algebra",
];

/// Optional demo parameters: `n` for `finite-weyl` (default 4) and
/// `definite-algebra` (default 3), angles for `nonuniqueness-3d`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct DemoParams {
    pub n: Option<usize>,
    pub theta: Option<f64>,
    pub phi: Option<f64>,
}

fn outcomes(name: &str, p: &DemoParams) -> CliResult<Vec<ScenarioOutcome>> {
    let out = match name {
        "epr-spin" => {
            let (pre, post) = epr_spin()?;
            vec![pre, post]
        }
        "ideal-measurement" => {
            let (pre, post) = ideal_measurement(&IdealMeasurementParams::default())?;
            vec![pre, post]
        }
        "schrodinger" => vec![schrodinger_two_pointer()?],
        "nonuniqueness-3d" => {
            let d = NonUniquenessParams::default();
            let params = NonUniquenessParams {
                theta: p.theta.unwrap_or(d.theta),
                phi: p.phi.unwrap_or(d.phi),
                ..d
            };
            vec![nonuniqueness_3d(&params)?.outcome]
        }
        "finite-weyl" => vec![finite_weyl(p.n.unwrap_or(4))?],
        "definite-algebra" => {
            let n = p.n.unwrap_or(3);
            if n == 0 {
                return Err(beablekit::Error::InvalidParameter("n must be positive".into()).into());
            }
            let raw: Vec<f64> = (1..=n).map(|k| k as f64).collect();
            let norm = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
            let v: Vec<f64> = raw.iter().map(|x| x / norm).collect();
            vec![definite_algebra_demo(&real_vector(&v))?]
        }
        other => return Err(CliError::UnknownDemo(other.into())),
    };
    Ok(out)
}

/// Runs a built-in scenario and compares it against its embedded verdicts.
pub fn demo(name: &str, params: &DemoParams, opts: &RunOptions) -> CliResult<Report> {
    let start = Instant::now();
    let outs = outcomes(name, params)?;
    let dim = outs.first().map_or(1, |o| o.state.dim());
    let tol = match opts.tol {
        Some(t) => Tolerance::from_residual(t)?,
        None => Tolerance::for_dim(dim),
    };
    let mut results = Vec::new();
    let mut times = Vec::new();
    let mut push = |e: Entry, t: Instant| {
        let index = results.len();
        results.push(Entry { index, ..e.settle() });
        times.push(t.elapsed().as_secs_f64());
    };
    for o in &outs {
        for c in &o.checks {
            let t = Instant::now();
            let mut e = Entry::new(0, "check", format!("{}: {}", o.label, c.name));
            e.verdict = Some(c.passed);
            e.expected = Some(true);
            e.residual = c.residual;
            push(e, t);
        }
        let t = Instant::now();
        let alg = scenario_algebra(o, &tol)?;
        let e = Entry::new(0, "rbeable", o.label.clone())
            .detail("uniqueness", alg.uniqueness.as_str())
            .detail("privileged_subspace_dim", alg.privileged_subspace.dim())
            .algebra(&alg.algebra, opts.dump_basis);
        push(e, t);
        for r in evaluate(o, &tol)? {
            let t = Instant::now();
            let mut e = Entry::new(0, "membership", format!("{}: {}", o.label, r.name));
            e.verdict = Some(r.member);
            e.expected = Some(r.expected == Membership::Member);
            e.residual = Some(r.residual);
            e = e.detail("expected_verdict", r.expected.as_str());
            if let Some(f) = r.fast {
                e = e.detail("fast", f.as_str());
            }
            // a fast verdict contradicting the exact one fails the entry
            if !r.passed && r.member == (r.expected == Membership::Member) {
                e.ok = false;
                e.error = Some("fast membership contradicts exact membership".into());
            }
            push(e, t);
        }
    }
    let echo = format!(
        "demo:{name}:{}",
        serde_json::to_string(params).expect("params serialize")
    );
    let input = InputEcho::new("demo", name, echo.as_bytes());
    let timing = Timing {
        total_seconds: start.elapsed().as_secs_f64(),
        entry_seconds: times,
    };
    Ok(Report::new(input, opts.seed, tol, results, timing))
}
