use std::time::Instant;

use beablekit::algebra::{center, commutant, generate_star_algebra, GeneratorSet};
use beablekit::random::{self, seeded};
use beablekit::{ComplexMatrix, Tolerance};

use crate::error::{CliError, CliResult};
use crate::report::{Entry, InputEcho, Report, Timing};
use crate::run::RunOptions;
use crate::scenario::{
    complex, emit_scenario, JsonMatrix, MatrixRef, NamedMatrix, Op, QueryArgs, QuerySpec, ScenarioFile, StateSpec,
};

/// Generated algebra, commutant and center of the scenario's algebra
/// generators, or of the privileged family when there are none.
pub fn commutant_report(file: &ScenarioFile, opts: &RunOptions) -> CliResult<Report> {
    let start = Instant::now();
    let sc = file.validate(opts.tol)?;
    let tol = &sc.tolerance;
    let mut gens = sc.select(None)?;
    let source = if gens.is_empty() {
        gens = sc.privileged.generators().to_vec();
        "privileged"
    } else {
        "algebra_generators"
    };
    let set = GeneratorSet::new(sc.dimension, gens, source)?;
    let alg = generate_star_algebra(&set, tol)?;
    let comm = commutant(&set, tol)?;
    let cen = center(&alg, tol)?;
    let dump = opts.dump_basis;
    let results = vec![
        Entry::new(0, "generate", source).algebra(&alg, dump).settle(),
        Entry::new(1, "commutant", source).algebra(&comm, dump).settle(),
        Entry::new(2, "center", source).algebra(&cen, dump).settle(),
    ];
    let input = InputEcho::new("scenario", "", emit_scenario(file).as_bytes());
    let timing = Timing {
        total_seconds: start.elapsed().as_secs_f64(),
        entry_seconds: vec![],
    };
    Ok(Report::new(input, opts.seed, *tol, results, timing))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateKind {
    Vector,
    Density,
}

fn named(name: impl Into<String>, m: &ComplexMatrix) -> NamedMatrix {
    NamedMatrix {
        name: name.into(),
        matrix: JsonMatrix::from_matrix(m),
    }
}

fn query(op: Op, args: QueryArgs) -> QuerySpec {
    QuerySpec { op, args }
}

fn expect(expected: bool) -> QueryArgs {
    QueryArgs {
        expected: Some(expected),
        ..Default::default()
    }
}

/// A random scenario exercising every query kind: a rank-one privileged
/// projection, abelian algebra generators and one random observable.
pub fn generate_scenario(n: usize, kind: StateKind, seed: u64) -> CliResult<ScenarioFile> {
    if n == 0 {
        return Err(CliError::Validation("dimension must be positive".into()));
    }
    let tol = Tolerance::for_dim(n);
    let mut rng = seeded(seed);
    let state = match kind {
        StateKind::Vector => StateSpec::Vector {
            vector: random::unit_vector(&mut rng, n).iter().map(|&z| complex(z)).collect(),
        },
        StateKind::Density => StateSpec::Density {
            matrix: JsonMatrix::from_matrix(&random::density(&mut rng, n, 1 + (seed as usize) % n)),
        },
    };
    let r = random::projection(&mut rng, n, 1);
    let gens = random::abelian_algebra(&mut rng, n).hermitian_basis(&tol);
    let h = random::hermitian(&mut rng, n);
    let queries = vec![
        query(Op::DefiniteAlgebra, QueryArgs::default()),
        query(Op::BeableCheck, expect(true)),
        query(Op::MaximalBeable, expect(true)),
        query(Op::Rbeable, QueryArgs::default()),
        query(
            Op::Membership,
            QueryArgs {
                label: Some("R".into()),
                observable: Some(MatrixRef::Name("R".into())),
                ..expect(true)
            },
        ),
        query(
            Op::Membership,
            QueryArgs {
                label: Some("H".into()),
                observable: Some(MatrixRef::Name("H".into())),
                ..Default::default()
            },
        ),
        query(Op::Decompose, expect(true)),
        query(
            Op::DefInvariance,
            QueryArgs {
                trials: Some(20),
                ..Default::default()
            },
        ),
        query(Op::JlbCheck, expect(true)),
    ];
    Ok(ScenarioFile {
        dimension: n,
        state,
        privileged: vec![named("R", &r)],
        algebra_generators: Some(gens.iter().enumerate().map(|(i, g)| named(format!("A{i}"), g)).collect()),
        observables: vec![named("H", &h)],
        queries,
        tolerance: None,
    })
}
