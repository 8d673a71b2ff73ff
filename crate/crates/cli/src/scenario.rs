//! Scenario files: UTF-8 JSON, complex entries as `[re, im]`, matrices as
//! row-major nested arrays.

use std::path::Path;

use beablekit::algebra::GeneratorSet;
use beablekit::states::State;
use beablekit::{CVector, ComplexMatrix, Tolerance, C64};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub type Complex = [f64; 2];

/// Row-major nested array of `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct JsonMatrix(pub Vec<Vec<Complex>>);

impl JsonMatrix {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        let n = m.dim();
        Self(
            (0..n)
                .map(|i| (0..n).map(|j| complex(m.get(i, j))).collect())
                .collect(),
        )
    }

    /// Checks shape before conversion; `what` names the matrix in messages.
    pub fn to_matrix(&self, dimension: usize, what: &str) -> CliResult<ComplexMatrix> {
        let rows = self.0.len();
        for row in &self.0 {
            if row.len() != rows {
                return Err(CliError::Validation(format!(
                    "{what}: matrix must be square, got {rows}x{}",
                    row.len()
                )));
            }
        }
        if rows != dimension {
            return Err(CliError::Validation(format!(
                "{what}: dimension is {rows}, scenario dimension is {dimension}"
            )));
        }
        let rows: Vec<Vec<C64>> = self
            .0
            .iter()
            .map(|r| r.iter().map(|&[re, im]| C64::new(re, im)).collect())
            .collect();
        ComplexMatrix::from_rows(&rows).map_err(|e| CliError::Validation(format!("{what}: {e}")))
    }
}

pub fn complex(z: C64) -> Complex {
    [z.re, z.im]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedMatrix {
    pub name: String,
    pub matrix: JsonMatrix,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum StateSpec {
    Density { matrix: JsonMatrix },
    Vector { vector: Vec<Complex> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Op {
    DefiniteAlgebra,
    BeableCheck,
    MaximalBeable,
    Rbeable,
    Membership,
    Decompose,
    DefInvariance,
    JlbCheck,
}

impl Op {
    pub fn as_str(self) -> &'static str {
        match self {
            Op::DefiniteAlgebra => "definite-algebra",
            Op::BeableCheck => "beable-check",
            Op::MaximalBeable => "maximal-beable",
            Op::Rbeable => "rbeable",
            Op::Membership => "membership",
            Op::Decompose => "decompose",
            Op::DefInvariance => "def-invariance",
            Op::JlbCheck => "jlb-check",
        }
    }
}

/// A matrix given inline or by the name of a declared matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixRef {
    Name(String),
    Inline(JsonMatrix),
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QueryArgs {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    /// Observable for `membership`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub observable: Option<MatrixRef>,
    /// Names of declared matrices. For `beable-check`, `maximal-beable`,
    /// `definite-algebra`, `decompose` and `jlb-check` they generate the
    /// algebra (default: all algebra generators); for `rbeable`,
    /// `membership` and `def-invariance` they are extra commuting elements.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    /// Associator constant for `jlb-check`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    /// Expected boolean verdict of the operation.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuerySpec {
    pub op: Op,
    #[serde(default)]
    pub args: QueryArgs,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceSpec {
    pub residual_tol: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank_tol: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub dimension: usize,
    pub state: StateSpec,
    #[serde(default)]
    pub privileged: Vec<NamedMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebra_generators: Option<Vec<NamedMatrix>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub observables: Vec<NamedMatrix>,
    #[serde(default)]
    pub queries: Vec<QuerySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<ToleranceSpec>,
}

/// A scenario converted to library types.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub dimension: usize,
    pub state: State,
    pub privileged: GeneratorSet,
    pub generators: Vec<(String, ComplexMatrix)>,
    pub named: Vec<(String, ComplexMatrix)>,
    pub queries: Vec<QuerySpec>,
    pub tolerance: Tolerance,
}

impl Scenario {
    pub fn lookup(&self, name: &str) -> Option<&ComplexMatrix> {
        self.named.iter().find(|(n, _)| n == name).map(|(_, m)| m)
    }

    pub fn resolve(&self, r: &MatrixRef, what: &str) -> CliResult<ComplexMatrix> {
        match r {
            MatrixRef::Name(name) => self
                .lookup(name)
                .cloned()
                .ok_or_else(|| CliError::Validation(format!("{what}: unknown matrix name '{name}'"))),
            MatrixRef::Inline(m) => m.to_matrix(self.dimension, what),
        }
    }

    /// The listed matrices, or all algebra generators when `names` is absent.
    pub fn select(&self, names: Option<&[String]>) -> CliResult<Vec<ComplexMatrix>> {
        match names {
            None => Ok(self.generators.iter().map(|(_, m)| m.clone()).collect()),
            Some(names) => names
                .iter()
                .map(|n| {
                    self.lookup(n)
                        .cloned()
                        .ok_or_else(|| CliError::Validation(format!("unknown matrix name '{n}'")))
                })
                .collect(),
        }
    }
}

impl ScenarioFile {
    pub fn tolerance(&self, override_tol: Option<f64>) -> CliResult<Tolerance> {
        let tol = match (override_tol, &self.tolerance) {
            (Some(t), _) => Tolerance::from_residual(t)?,
            (None, Some(spec)) => match spec.rank_tol {
                Some(rank) => Tolerance::new(rank, spec.residual_tol)?,
                None => Tolerance::from_residual(spec.residual_tol)?,
            },
            (None, None) => Tolerance::for_dim(self.dimension),
        };
        Ok(tol)
    }

    /// Checks every invariant and converts to library types.
    pub fn validate(&self, override_tol: Option<f64>) -> CliResult<Scenario> {
        let n = self.dimension;
        if n == 0 {
            return Err(CliError::Validation("dimension must be positive".into()));
        }
        let tol = self
            .tolerance(override_tol)
            .map_err(|e| CliError::Validation(format!("tolerance: {e}")))?;
        let state = match &self.state {
            StateSpec::Density { matrix } => {
                let k = matrix.to_matrix(n, "state density")?;
                if !k.is_hermitian(tol.residual_tol) {
                    return Err(CliError::Validation(format!(
                        "state density must be Hermitian (residual {:.3e})",
                        k.hermitian_residual()
                    )));
                }
                State::from_density(&k, &tol).map_err(|e| CliError::Validation(format!("state: {e}")))?
            }
            StateSpec::Vector { vector } => {
                if vector.len() != n {
                    return Err(CliError::Validation(format!(
                        "state vector: length is {}, scenario dimension is {n}",
                        vector.len()
                    )));
                }
                let v = CVector::from_iterator(n, vector.iter().map(|&[re, im]| C64::new(re, im)));
                State::from_vector(&v, &tol)
                    .map_err(|e| CliError::Validation(format!("state vector must be normalized: {e}")))?
            }
        };

        let mut named: Vec<(String, ComplexMatrix)> = Vec::new();
        let mut convert = |list: &[NamedMatrix], group: &str| -> CliResult<Vec<(String, ComplexMatrix)>> {
            let mut out = Vec::with_capacity(list.len());
            for nm in list {
                if named.iter().any(|(n, _)| *n == nm.name) {
                    return Err(CliError::Validation(format!("duplicate matrix name '{}'", nm.name)));
                }
                let m = nm.matrix.to_matrix(n, &format!("{group} '{}'", nm.name))?;
                named.push((nm.name.clone(), m.clone()));
                out.push((nm.name.clone(), m));
            }
            Ok(out)
        };
        let privileged = convert(&self.privileged, "privileged")?;
        let generators = convert(self.algebra_generators.as_deref().unwrap_or(&[]), "algebra generator")?;
        convert(&self.observables, "observable")?;
        for (name, m) in &privileged {
            if !m.is_hermitian(tol.residual_tol) {
                return Err(CliError::Validation(format!("privileged '{name}' must be Hermitian")));
            }
        }
        let privileged = GeneratorSet::new(n, privileged.into_iter().map(|(_, m)| m).collect(), "privileged")?;

        let scenario = Scenario {
            dimension: n,
            state,
            privileged,
            generators,
            named,
            queries: self.queries.clone(),
            tolerance: tol,
        };
        for (i, q) in self.queries.iter().enumerate() {
            let a = &q.args;
            if let Some(names) = &a.generators {
                scenario
                    .select(Some(names))
                    .map_err(|e| CliError::Validation(format!("query {i}: {e}")))?;
            }
            match (&a.observable, q.op) {
                (Some(obs), _) => {
                    scenario.resolve(obs, &format!("query {i} observable"))?;
                }
                (None, Op::Membership) => {
                    return Err(CliError::Validation(format!("query {i}: membership needs an observable")));
                }
                (None, _) => {}
            }
            if let Some(r) = a.r {
                if !(r > 0.0 && r.is_finite()) {
                    return Err(CliError::Validation(format!("query {i}: r must be positive")));
                }
            }
        }
        Ok(scenario)
    }
}

pub fn parse_scenario_str(text: &str) -> CliResult<ScenarioFile> {
    let file: ScenarioFile = serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
    file.validate(None)?;
    Ok(file)
}

/// Reads, parses and validates a scenario file.
pub fn parse_scenario(path: &Path) -> CliResult<ScenarioFile> {
    let text = read(path)?;
    parse_scenario_str(&text)
}

pub fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn emit_scenario(file: &ScenarioFile) -> String {
    let mut s = serde_json::to_string_pretty(file).expect("scenario serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex {
        [re, 0.0]
    }

    fn minimal() -> ScenarioFile {
        ScenarioFile {
            dimension: 2,
            state: StateSpec::Vector {
                vector: vec![c(1.0), c(0.0)],
            },
            privileged: vec![],
            algebra_generators: Some(vec![NamedMatrix {
                name: "Z".into(),
                matrix: JsonMatrix(vec![vec![c(1.0), c(0.0)], vec![c(0.0), c(-1.0)]]),
            }]),
            observables: vec![],
            queries: vec![QuerySpec {
                op: Op::BeableCheck,
                args: QueryArgs::default(),
            }],
            tolerance: None,
        }
    }

    #[test]
    fn minimal_file_parses() {
        let text = emit_scenario(&minimal());
        assert_eq!(parse_scenario_str(&text).unwrap(), minimal());
    }

    #[test]
    fn trace_violation_names_trace() {
        let mut f = minimal();
        f.state = StateSpec::Density {
            matrix: JsonMatrix(vec![vec![c(0.25), c(0.0)], vec![c(0.0), c(0.25)]]),
        };
        let err = parse_scenario_str(&emit_scenario(&f)).unwrap_err();
        assert!(matches!(err, CliError::Validation(ref m) if m.contains("trace")), "{err}");
    }

    #[test]
    fn rectangular_matrix_names_square() {
        let text = r#"{"dimension": 2, "state": {"kind": "vector", "vector": [[1,0],[0,0]]},
            "privileged": [{"name": "R", "matrix": [[[1,0],[0,0],[0,0]],[[0,0],[0,0],[0,0]]]}]}"#;
        let err = parse_scenario_str(text).unwrap_err();
        assert!(matches!(err, CliError::Validation(ref m) if m.contains("square")), "{err}");
    }

    #[test]
    fn malformed_is_parse_error() {
        assert!(matches!(parse_scenario_str("{ not json"), Err(CliError::Parse(_))));
        let unknown_op = r#"{"dimension": 1, "state": {"kind": "vector", "vector": [[1,0]]},
            "queries": [{"op": "frobnicate"}]}"#;
        assert!(matches!(parse_scenario_str(unknown_op), Err(CliError::Parse(_))));
    }

    #[test]
    fn unnormalized_vector_rejected() {
        let mut f = minimal();
        f.state = StateSpec::Vector {
            vector: vec![c(1.0), c(1.0)],
        };
        let err = parse_scenario_str(&emit_scenario(&f)).unwrap_err();
        assert!(matches!(err, CliError::Validation(ref m) if m.contains("normalized")));
    }

    #[test]
    fn unknown_names_rejected() {
        let mut f = minimal();
        f.queries[0].args.generators = Some(vec!["nope".into()]);
        assert!(matches!(parse_scenario_str(&emit_scenario(&f)), Err(CliError::Validation(_))));
    }
}
