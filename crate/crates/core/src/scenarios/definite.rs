use super::{ScenarioCheck, ScenarioOutcome};
use crate::algebra::{GeneratorSet, OperatorAlgebra};
use crate::beable::{is_maximal_beable, Membership};
use crate::matcore::{CVector, ComplexMatrix, Subspace, Tolerance};
use crate::states::{definite_algebra, State};
use crate::Result;

/// The definite algebra of a vector state: exactly the operators having `v`
/// as an eigenvector together with their adjoints, which is a maximal
/// beable algebra.
pub fn definite_algebra_demo(v: &CVector) -> Result<ScenarioOutcome> {
    let n = v.len();
    let tol = Tolerance::for_dim(n);
    let rho = State::from_vector(v, &tol)?;
    let d = definite_algebra(&rho, &OperatorAlgebra::full(n), &tol)?;
    let line = rho.range().clone();
    let block = OperatorAlgebra::block_sum(&line.complement(), &line, &OperatorAlgebra::scalars(1))?;

    let mut out = ScenarioOutcome::new(format!("definite-algebra/n={n}"), rho.clone(), GeneratorSet::empty(n));
    out.checks.push(ScenarioCheck::new(
        "definite algebra equals the eigenvector block algebra",
        d.span_equals(&block, &tol),
        Some(d.span_defect(&block)),
    ));
    let expected_dim = (n - 1) * (n - 1) + 1;
    out.checks.push(ScenarioCheck::new(
        format!("dimension is {expected_dim}"),
        d.dim() == expected_dim,
        None,
    ));
    let closure = d.closure_residual();
    out.checks.push(ScenarioCheck::at_most("definite algebra is a unital subalgebra", closure, tol.residual_tol));
    out.checks.push(ScenarioCheck::new(
        "definite algebra is maximal beable",
        is_maximal_beable(&d, &rho, &tol)?,
        None,
    ));

    out.query("P_v", ComplexMatrix::projector(v), Membership::Member);
    if let Some(w) = Subspace::orthonormalize(n, std::slice::from_ref(v), &tol)?.complement().basis().first() {
        let h = &ComplexMatrix::outer(v, w) + &ComplexMatrix::outer(w, v);
        out.query("v w* + w v*", h, Membership::NonMember);
        out.query("P_w", ComplexMatrix::projector(w), Membership::Member);
    }
    out.metadata.insert("dimension".into(), d.dim().to_string());
    Ok(out)
}
