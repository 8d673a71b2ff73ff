//! Worked examples as executable scenarios with their expected verdicts.
//!
//! A builder returns one or more [`ScenarioOutcome`]s. Membership queries are
//! decided by [`evaluate`] against the maximal privileged-observable algebra
//! of the scenario state; structural assertions that are not membership
//! queries are computed by the builder and carried in `checks`.

mod definite;
mod measurement;
mod nonuniqueness;
mod weyl;

use std::collections::BTreeMap;

pub use definite::definite_algebra_demo;
pub use measurement::{epr_spin, ideal_measurement, schrodinger_two_pointer, IdealMeasurementParams};
pub use nonuniqueness::{nonuniqueness_3d, NonUniqueness, NonUniquenessParams};
pub use weyl::{clock_shift_pair, finite_weyl};

use crate::algebra::GeneratorSet;
use crate::beable::{maximal_rbeable, membership_fast, rbeable_vector_state, Membership, RBeableResult};
use crate::matcore::{ComplexMatrix, Tolerance};
use crate::states::State;
use crate::Result;

/// A membership query with its expected verdict.
#[derive(Debug, Clone)]
pub struct Query {
    pub name: String,
    pub observable: ComplexMatrix,
    pub expected: Membership,
}

/// A named assertion computed while building a scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioCheck {
    pub name: String,
    pub passed: bool,
    pub residual: Option<f64>,
}

impl ScenarioCheck {
    pub fn new(name: impl Into<String>, passed: bool, residual: Option<f64>) -> Self {
        Self {
            name: name.into(),
            passed,
            residual,
        }
    }

    /// Passes when `residual <= bound`.
    pub fn at_most(name: impl Into<String>, residual: f64, bound: f64) -> Self {
        Self::new(name, residual <= bound, Some(residual))
    }
}

#[derive(Debug, Clone)]
pub struct ScenarioOutcome {
    pub label: String,
    pub state: State,
    pub privileged: GeneratorSet,
    pub queries: Vec<Query>,
    pub checks: Vec<ScenarioCheck>,
    pub metadata: BTreeMap<String, String>,
}

impl ScenarioOutcome {
    fn new(label: impl Into<String>, state: State, privileged: GeneratorSet) -> Self {
        Self {
            label: label.into(),
            state,
            privileged,
            queries: Vec::new(),
            checks: Vec::new(),
            metadata: BTreeMap::new(),
        }
    }

    fn query(&mut self, name: &str, observable: ComplexMatrix, expected: Membership) {
        self.queries.push(Query {
            name: name.to_string(),
            observable,
            expected,
        });
    }
}

/// Verdicts for one query.
#[derive(Debug, Clone, PartialEq)]
pub struct QueryResult {
    pub name: String,
    pub expected: Membership,
    /// Exact span membership in the maximal algebra.
    pub member: bool,
    pub residual: f64,
    /// The fast sufficient-condition test, for vector states.
    pub fast: Option<Membership>,
    pub passed: bool,
}

/// The maximal privileged-observable algebra the queries are judged against.
pub fn scenario_algebra(outcome: &ScenarioOutcome, tol: &Tolerance) -> Result<RBeableResult> {
    match outcome.state.pure_vector() {
        Some(v) => rbeable_vector_state(&outcome.privileged, &v, tol),
        None => maximal_rbeable(&outcome.privileged, &outcome.state, None, tol),
    }
}

/// Decides every query by exact span membership. A query passes when the
/// exact verdict matches the expectation and the fast test, when
/// conclusive, agrees with it.
pub fn evaluate(outcome: &ScenarioOutcome, tol: &Tolerance) -> Result<Vec<QueryResult>> {
    if outcome.queries.is_empty() {
        return Ok(Vec::new());
    }
    let alg = scenario_algebra(outcome, tol)?;
    let v = outcome.state.pure_vector();
    let mut out = Vec::with_capacity(outcome.queries.len());
    for q in &outcome.queries {
        let (member, residual) = alg.algebra.membership(&q.observable, tol);
        let fast = match &v {
            Some(v) => Some(membership_fast(&q.observable, &outcome.privileged, v, tol)?),
            None => None,
        };
        let exact = if member { Membership::Member } else { Membership::NonMember };
        let consistent = !matches!(
            (fast, exact),
            (Some(Membership::Member), Membership::NonMember) | (Some(Membership::NonMember), Membership::Member)
        );
        out.push(QueryResult {
            name: q.name.clone(),
            expected: q.expected,
            member,
            residual,
            fast,
            passed: exact == q.expected && consistent,
        });
    }
    Ok(out)
}

/// Kronecker product of a list of factors, left factor most significant.
pub fn kron_all(factors: &[ComplexMatrix]) -> ComplexMatrix {
    let mut it = factors.iter();
    let first = it.next().cloned().unwrap_or_else(|| ComplexMatrix::identity(1));
    it.fold(first, |acc, f| acc.kron(f))
}
