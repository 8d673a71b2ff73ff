use std::time::Instant;

use beablekit::algebra::{
    associator_residual, cstar_product_from_jlb, generate_star_algebra, GeneratorSet, OperatorAlgebra,
};
use beablekit::beable::{
    extend_to_maximal_beable, is_beable, is_beable_via_compression, is_maximal_beable, maximal_rbeable,
    membership_fast, rbeable_vector_state, verify_def_invariance, RBeableResult,
};
use beablekit::states::{
    definite_algebra, dispersion_free_decomposition, dispersion_free_values_in_spectrum, is_dispersion_free_on,
    reconstruction_residual,
};
use beablekit::ComplexMatrix;
use serde_json::json;

use crate::error::{CliError, CliResult};
use crate::report::{Entry, InputEcho, Report, Timing};
use crate::scenario::{complex, emit_scenario, Op, QuerySpec, Scenario, ScenarioFile};

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RunOptions {
    pub seed: u64,
    /// Overrides `residual_tol`; `rank_tol` becomes a tenth of it.
    pub tol: Option<f64>,
    pub dump_basis: bool,
}

/// Executes every query in order. Errors inside a query are recorded in
/// its entry; only invalid scenarios fail the whole run.
pub fn run(file: &ScenarioFile, opts: &RunOptions) -> CliResult<Report> {
    let start = Instant::now();
    let sc = file.validate(opts.tol)?;
    let mut results = Vec::with_capacity(sc.queries.len());
    let mut times = Vec::with_capacity(sc.queries.len());
    for (i, q) in sc.queries.iter().enumerate() {
        let t = Instant::now();
        let label = q.args.label.clone().unwrap_or_default();
        let entry = match run_query(&sc, i, q, opts) {
            Ok(e) => e,
            Err(e) => Entry::failed(i, q.op.as_str(), label, e.to_string()),
        };
        results.push(entry.settle());
        times.push(t.elapsed().as_secs_f64());
    }
    let input = InputEcho::new("scenario", "", emit_scenario(file).as_bytes());
    let timing = Timing {
        total_seconds: start.elapsed().as_secs_f64(),
        entry_seconds: times,
    };
    Ok(Report::new(input, opts.seed, sc.tolerance, results, timing))
}

fn core(i: usize, op: Op) -> impl Fn(beablekit::Error) -> CliError {
    move |source| CliError::Query {
        index: i,
        op: op.as_str().into(),
        source,
    }
}

fn generated(sc: &Scenario, names: Option<&[String]>, i: usize, op: Op) -> CliResult<OperatorAlgebra> {
    let gens = sc.select(names)?;
    if gens.is_empty() {
        return Ok(OperatorAlgebra::scalars(sc.dimension));
    }
    generate_star_algebra(&gens[..], &sc.tolerance).map_err(core(i, op))
}

fn rbeable(sc: &Scenario, names: Option<&[String]>, i: usize, op: Op) -> CliResult<RBeableResult> {
    let tol = &sc.tolerance;
    let extras = match names {
        Some(n) => Some(GeneratorSet::new(sc.dimension, sc.select(Some(n))?, "extra").map_err(core(i, op))?),
        None => None,
    };
    match (sc.state.pure_vector(), &extras) {
        (Some(v), None) => rbeable_vector_state(&sc.privileged, &v, tol),
        _ => maximal_rbeable(&sc.privileged, &sc.state, extras.as_ref(), tol),
    }
    .map_err(core(i, op))
}

fn run_query(sc: &Scenario, i: usize, q: &QuerySpec, opts: &RunOptions) -> CliResult<Entry> {
    let tol = &sc.tolerance;
    let rho = &sc.state;
    let args = &q.args;
    let names = args.generators.as_deref();
    let op = q.op;
    let err = core(i, op);
    let mut e = Entry::new(i, op.as_str(), args.label.clone().unwrap_or_default());
    e.expected = args.expected;
    let dump = opts.dump_basis;

    match op {
        Op::DefiniteAlgebra => {
            let ambient = match names {
                Some(_) => generated(sc, names, i, op)?,
                None => OperatorAlgebra::full(sc.dimension),
            };
            let d = definite_algebra(rho, &ambient, tol).map_err(&err)?;
            e.verdict = Some(is_dispersion_free_on(rho, &ambient, tol));
            e.residual = Some(d.closure_residual());
            e = e
                .detail("ambient_dim", ambient.dim())
                .detail("maximal_beable", is_maximal_beable(&d, rho, tol).map_err(&err)?)
                .algebra(&d, dump);
        }
        Op::BeableCheck => {
            let b = generated(sc, names, i, op)?;
            let v = is_beable(&b, rho, tol);
            let via = is_beable_via_compression(&b, rho, tol).map_err(&err)?;
            e.verdict = Some(v.is_beable);
            e.residual = Some(v.worst_residual);
            e = e.detail("compression_agrees", via == v.is_beable).algebra(&b, dump);
        }
        Op::MaximalBeable => {
            let b0 = generated(sc, names, i, op)?;
            let m = extend_to_maximal_beable(&b0, rho, tol).map_err(&err)?;
            e.verdict = Some(is_maximal_beable(&m, rho, tol).map_err(&err)?);
            e.residual = Some(m.containment_residual(&b0));
            e = e.detail("seed_dim", b0.dim()).algebra(&m, dump);
        }
        Op::Rbeable => {
            let res = rbeable(sc, names, i, op)?;
            e = e
                .detail("uniqueness", res.uniqueness.as_str())
                .detail("privileged_subspace_dim", res.privileged_subspace.dim())
                .detail("abelian_part_dim", res.abelian_part.dim())
                .algebra(&res.algebra, dump);
        }
        Op::Membership => {
            let obs = args
                .observable
                .as_ref()
                .ok_or_else(|| CliError::Validation(format!("query {i}: membership needs an observable")))?;
            let x = sc.resolve(obs, "observable")?;
            let res = rbeable(sc, names, i, op)?;
            let (member, residual) = res.algebra.membership(&x, tol);
            e.verdict = Some(member);
            e.residual = Some(residual);
            if let Some(v) = rho.pure_vector() {
                if x.is_hermitian(tol.residual_tol) {
                    let fast = membership_fast(&x, &sc.privileged, &v, tol).map_err(&err)?;
                    e = e.detail("fast", fast.as_str());
                }
            }
            e = e.detail("uniqueness", res.uniqueness.as_str()).algebra(&res.algebra, dump);
        }
        Op::Decompose => {
            let b = generated(sc, names, i, op)?;
            let comps = dispersion_free_decomposition(rho, &b, tol).map_err(&err)?;
            let residual = reconstruction_residual(rho, &b, &comps).map_err(&err)?;
            let in_spectrum = dispersion_free_values_in_spectrum(&comps, &b, tol).map_err(&err)?;
            let gens = sc.select(names)?;
            let values: Vec<Vec<[f64; 2]>> = comps
                .iter()
                .map(|c| gens.iter().map(|g| complex(c.value_of(g))).collect())
                .collect();
            e.verdict = Some(tol.accepts(residual, 1.0) && in_spectrum);
            e.residual = Some(residual);
            e = e
                .detail("weights", comps.iter().map(|c| c.weight).collect::<Vec<_>>())
                .detail("ranks", comps.iter().map(|c| c.support_projection.trace().re.round() as usize).collect::<Vec<_>>())
                .detail("values", json!(values))
                .detail("values_in_spectrum", in_spectrum)
                .algebra(&b, dump);
        }
        Op::DefInvariance => {
            let res = rbeable(sc, names, i, op)?;
            let trials = args.trials.unwrap_or(50);
            let seed = opts.seed.wrapping_add(i as u64);
            let d = verify_def_invariance(&res.algebra, &sc.privileged, rho, trials, seed, tol).map_err(&err)?;
            e.verdict = Some(d.holds);
            e.residual = Some(d.worst_residual);
            e = e
                .detail("trials_run", d.trials_run)
                .detail("seed", seed)
                .algebra(&res.algebra, dump);
        }
        Op::JlbCheck => {
            let mut mats = sc.select(names)?;
            if mats.is_empty() {
                mats = sc.privileged.generators().to_vec();
            }
            let r = args.r.unwrap_or(1.0);
            let scale = mats.iter().map(ComplexMatrix::frobenius_norm).fold(1.0, f64::max);
            let mut assoc = 0.0f64;
            let mut product = 0.0f64;
            for a in &mats {
                for b in &mats {
                    let p = cstar_product_from_jlb(a, b, r, tol).map_err(&err)?;
                    product = product.max((&p - &(a * b)).frobenius_norm());
                    for c in &mats {
                        assoc = assoc.max(associator_residual(a, b, c, r, tol).map_err(&err)?);
                    }
                }
            }
            e.verdict = Some(tol.accepts(assoc, scale.powi(3)) && tol.accepts(product, scale.powi(2)));
            e.residual = Some(assoc.max(product));
            e = e
                .detail("r", r)
                .detail("associator_residual", assoc)
                .detail("product_residual", product)
                .detail("matrices", mats.len());
        }
    }
    Ok(e)
}
