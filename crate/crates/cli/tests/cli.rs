use std::path::{Path, PathBuf};
use std::process::Command;

use beablekit_cli::scenario::{JsonMatrix, NamedMatrix, Op, QueryArgs, QuerySpec, StateSpec};
use beablekit_cli::tools::{generate_scenario, StateKind};
use beablekit_cli::{emit_scenario, parse_scenario, parse_scenario_str, run, RunOptions, ScenarioFile};
use proptest::prelude::*;
use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_beablekit"));
    c.env_remove("BEABLEKIT_SEED");
    c
}

fn epr_asset() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios/epr_post.json")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn diag(entries: &[f64]) -> JsonMatrix {
    let n = entries.len();
    JsonMatrix(
        (0..n)
            .map(|i| (0..n).map(|j| [if i == j { entries[i] } else { 0.0 }, 0.0]).collect())
            .collect(),
    )
}

fn density_file(k: &[f64], privileged: &[f64], queries: Vec<QuerySpec>) -> ScenarioFile {
    ScenarioFile {
        dimension: k.len(),
        state: StateSpec::Density { matrix: diag(k) },
        privileged: vec![NamedMatrix {
            name: "R".into(),
            matrix: diag(privileged),
        }],
        algebra_generators: Some(vec![NamedMatrix {
            name: "D".into(),
            matrix: diag(&(1..=k.len()).map(|x| x as f64).collect::<Vec<_>>()),
        }]),
        observables: vec![],
        queries,
        tolerance: None,
    }
}

#[test]
fn epr_asset_reproduces_verdicts() {
    let file = parse_scenario(&epr_asset()).unwrap();
    let report = run(&file, &RunOptions::default()).unwrap();
    assert!(report.passed, "{}", report.summary());
    let verdicts: Vec<(String, bool)> = report
        .results
        .iter()
        .filter(|e| e.op == "membership")
        .map(|e| (e.label.clone(), e.verdict.unwrap()))
        .collect();
    assert_eq!(verdicts.len(), 5);
    assert_eq!(verdicts.iter().filter(|v| v.1).count(), 3);
    assert!(verdicts.iter().any(|(l, v)| l == "I x sigma_y1 x I" && !v));
}

#[test]
fn decompose_diagonal_state() {
    let q = QuerySpec {
        op: Op::Decompose,
        args: QueryArgs::default(),
    };
    let report = run(&density_file(&[0.3, 0.7], &[1.0, 1.0], vec![q]), &RunOptions::default()).unwrap();
    let w = report.results[0].details["weights"].as_array().unwrap();
    let w: Vec<f64> = w.iter().map(|x| x.as_f64().unwrap()).collect();
    assert_eq!(w.len(), 2);
    assert!((w[0] - 0.3).abs() < 1e-12 && (w[1] - 0.7).abs() < 1e-12);
    assert!(report.passed);
}

#[test]
fn rbeable_with_commuting_state() {
    let q = QuerySpec {
        op: Op::Rbeable,
        args: QueryArgs::default(),
    };
    let report = run(&density_file(&[0.2, 0.3, 0.5], &[1.0, 0.0, 0.0], vec![q]), &RunOptions::default()).unwrap();
    assert_eq!(report.results[0].details["uniqueness"], "UniqueCommuting");
}

#[test]
fn query_errors_carry_index() {
    // decomposition needs an abelian algebra
    let file = ScenarioFile {
        algebra_generators: Some(vec![
            NamedMatrix {
                name: "X".into(),
                matrix: JsonMatrix(vec![vec![[0.0, 0.0], [1.0, 0.0]], vec![[1.0, 0.0], [0.0, 0.0]]]),
            },
            NamedMatrix {
                name: "Z".into(),
                matrix: diag(&[1.0, -1.0]),
            },
        ]),
        ..density_file(
            &[0.5, 0.5],
            &[1.0, 1.0],
            vec![
                QuerySpec {
                    op: Op::JlbCheck,
                    args: QueryArgs::default(),
                },
                QuerySpec {
                    op: Op::Decompose,
                    args: QueryArgs::default(),
                },
            ],
        )
    };
    let report = run(&file, &RunOptions::default()).unwrap();
    assert!(report.results[0].passed);
    let e = &report.results[1];
    assert!(!e.ok && !e.passed);
    assert!(e.error.as_deref().unwrap().starts_with("query 1 (decompose)"));
    assert!(!report.passed);
}

#[test]
fn shipped_asset_round_trips() {
    let file = parse_scenario(&epr_asset()).unwrap();
    assert_eq!(parse_scenario_str(&emit_scenario(&file)).unwrap(), file);
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn generated_scenarios_round_trip_and_pass(seed in any::<u64>(), n in 1usize..=4, density in any::<bool>()) {
        let kind = if density { StateKind::Density } else { StateKind::Vector };
        let file = generate_scenario(n, kind, seed).unwrap();
        let text = emit_scenario(&file);
        let back = parse_scenario_str(&text).unwrap();
        prop_assert_eq!(&back, &file);
        prop_assert_eq!(emit_scenario(&back), text);
        let opts = RunOptions { seed, ..Default::default() };
        let a = run(&file, &opts).unwrap();
        prop_assert!(a.passed, "{}", a.summary());
        prop_assert_eq!(a.body(), run(&back, &opts).unwrap().body());
    }
}

#[test]
fn demo_reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let mut bodies = Vec::new();
    for k in 0..2 {
        let out = dir.path().join(format!("r{k}.json"));
        let status = bin()
            .args(["demo", "nonuniqueness-3d", "--seed", "7", "--out"])
            .arg(&out)
            .output()
            .unwrap()
            .status;
        assert!(status.success());
        let mut v = read_json(&out);
        assert_eq!(v["schema"], 1);
        assert_eq!(v["seed"], 7);
        assert!(v["timing"].is_object());
        v.as_object_mut().unwrap().remove("timing");
        bodies.push(serde_json::to_string(&v).unwrap());
    }
    assert_eq!(bodies[0], bodies[1]);
}

#[test]
fn analyze_flags_and_seed_fallback() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let status = bin()
        .env("BEABLEKIT_SEED", "42")
        .args(["analyze", "--tol", "1e-7", "--dump-basis", "--scenario"])
        .arg(epr_asset())
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap()
        .status;
    assert!(status.success());
    let v = read_json(&out);
    assert_eq!(v["seed"], 42);
    assert_eq!(v["tolerance"]["residual_tol"], 1e-7);
    assert!((v["tolerance"]["rank_tol"].as_f64().unwrap() - 1e-8).abs() < 1e-20);
    assert!(v["results"][0]["basis"].as_array().unwrap().len() > 1);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let mut file = parse_scenario(&epr_asset()).unwrap();
    file.queries[1].args.expected = Some(false);
    let path = dir.path().join("wrong.json");
    std::fs::write(&path, emit_scenario(&file)).unwrap();
    let code = bin().args(["analyze", "--scenario"]).arg(&path).output().unwrap().status;
    assert_eq!(code.code(), Some(1));

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"dimension\": 2}").unwrap();
    let out = bin().args(["analyze", "--scenario"]).arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("parse error"));

    assert_eq!(bin().args(["demo", "nope"]).output().unwrap().status.code(), Some(2));
    let v = bin().arg("version").output().unwrap();
    assert!(v.status.success());
    assert!(String::from_utf8_lossy(&v.stdout).contains(env!("CARGO_PKG_VERSION")));
}

#[test]
fn generate_then_commutant() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gen.json");
    let status = bin()
        .args(["generate", "--n", "3", "--kind", "density", "--seed", "5", "--out"])
        .arg(&path)
        .output()
        .unwrap()
        .status;
    assert!(status.success());
    let out = dir.path().join("c.json");
    let status = bin().args(["commutant", "--scenario"]).arg(&path).arg("--out").arg(&out).output().unwrap().status;
    assert!(status.success());
    let v = read_json(&out);
    // an abelian generated algebra is contained in its commutant
    let dims: Vec<u64> = (0..3).map(|i| v["results"][i]["algebra_dim"].as_u64().unwrap()).collect();
    assert!(dims[1] >= dims[0]);
    assert_eq!(dims[2], dims[0]);
}
