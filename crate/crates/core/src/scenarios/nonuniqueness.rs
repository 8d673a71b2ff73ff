use super::{ScenarioCheck, ScenarioOutcome};
use crate::algebra::{generate_star_algebra, is_abelian, relative_commutant, GeneratorSet, OperatorAlgebra};
use crate::beable::{is_beable, maximal_rbeable, verify_def_invariance};
use crate::matcore::{basis_vector, CVector, ComplexMatrix, Subspace, Tolerance};
use crate::states::State;
use crate::{Error, Result};

/// Rotation angles of the `w`-basis and the eigenvalues of `K` on it.
#[derive(Debug, Clone, PartialEq)]
pub struct NonUniquenessParams {
    pub theta: f64,
    pub phi: f64,
    pub weights: [f64; 3],
}

impl Default for NonUniquenessParams {
    fn default() -> Self {
        Self {
            theta: 0.7,
            phi: 0.4,
            weights: [0.5, 0.3, 0.2],
        }
    }
}

#[derive(Debug, Clone)]
pub struct NonUniqueness {
    pub outcome: ScenarioOutcome,
    /// `vN(A₁)` and `vN(A₂)`.
    pub algebras: [OperatorAlgebra; 2],
    pub a1: ComplexMatrix,
    pub a2: ComplexMatrix,
}

/// `w_i = R₁₃(φ) R₁₂(θ) e_i` with plane rotations in the (0,1) and (0,2) planes.
fn w_basis(theta: f64, phi: f64) -> [CVector; 3] {
    let (c, s) = (theta.cos(), theta.sin());
    let r12 = ComplexMatrix::from_real_rows(&[vec![c, -s, 0.0], vec![s, c, 0.0], vec![0.0, 0.0, 1.0]]).unwrap();
    let (c, s) = (phi.cos(), phi.sin());
    let r13 = ComplexMatrix::from_real_rows(&[vec![c, 0.0, -s], vec![0.0, 1.0, 0.0], vec![s, 0.0, c]]).unwrap();
    let rot = &r13 * &r12;
    [0, 1, 2].map(|i| rot.apply(&basis_vector(3, i)))
}

/// Non-degenerate operator with the three given one-dimensional eigenspaces.
fn nondegenerate(spaces: [&Subspace; 3]) -> ComplexMatrix {
    let mut a = ComplexMatrix::zeros(3);
    for (k, s) in spaces.iter().enumerate() {
        a = &a + &s.projection().scale_real((k + 1) as f64);
    }
    a
}

/// A three-dimensional example with two distinct maximal privileged
/// algebras. `R` has eigenspaces `[r₁]` and `[r₂, r₃]` (the standard
/// basis); `K` has distinct eigenvalues on a rotated basis `w`. `A₁` and `A₂`
/// have eigenspaces built from the lattice expression
/// `([wᵢ] ∨ [r₁]) ∧ [r₂, r₃]`, its complement in `[r₂, r₃]`, and `[r₁]`.
pub fn nonuniqueness_3d(params: &NonUniquenessParams) -> Result<NonUniqueness> {
    let tol = Tolerance::for_dim(3);
    let gate = 1e-6;
    let weights = params.weights;
    if weights.iter().any(|&x| x <= 0.0 || x.is_nan()) || (weights.iter().sum::<f64>() - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidParameter(format!(
            "K eigenvalues must be positive and sum to 1, got {weights:?}"
        )));
    }
    for i in 0..3 {
        for j in (i + 1)..3 {
            if (weights[i] - weights[j]).abs() <= gate {
                return Err(Error::InvalidParameter(format!(
                    "K eigenvalues must be distinct, got {weights:?}"
                )));
            }
        }
    }

    let w = w_basis(params.theta, params.phi);
    let r1 = Subspace::coordinate(3, &[0]);
    let r23 = Subspace::coordinate(3, &[1, 2]);
    for (i, wi) in w.iter().take(2).enumerate() {
        if r1.distance(wi) <= gate || r23.distance(wi) <= gate {
            return Err(Error::DegenerateAngles(format!("w{} lies in an eigenspace of R", i + 1)));
        }
    }
    let p1 = r23.projection().apply(&w[0]);
    let p2 = r23.projection().apply(&w[1]);
    let cosine = p1.dotc(&p2).norm() / (p1.norm() * p2.norm());
    if cosine <= gate {
        return Err(Error::DegenerateAngles("projected w1 and w2 are orthogonal".into()));
    }
    if cosine >= 1.0 - gate {
        return Err(Error::DegenerateAngles("projected w1 and w2 are parallel".into()));
    }

    let r = ComplexMatrix::diag_real(&[1.0, 2.0, 2.0]);
    let mut k = ComplexMatrix::zeros(3);
    for (wi, p) in w.iter().zip(weights) {
        k = &k + &ComplexMatrix::projector(wi).scale_real(p);
    }
    let rho = State::from_density(&k.hermitian_part(), &tol)?;
    let privileged = GeneratorSet::new(3, vec![r.clone()], "R")?;

    let mut eigen_ops = Vec::with_capacity(2);
    for wi in w.iter().take(2) {
        let line = Subspace::orthonormalize(3, std::slice::from_ref(wi), &tol)?;
        let projected = line.join(&r1, &tol)?.meet(&r23, &tol)?;
        let rest = projected.complement().meet(&r23, &tol)?;
        eigen_ops.push(nondegenerate([&projected, &rest, &r1]));
    }
    let (a1, a2) = (eigen_ops[0].clone(), eigen_ops[1].clone());
    let alg1 = generate_star_algebra(&[a1.clone()][..], &tol)?;
    let alg2 = generate_star_algebra(&[a2.clone()][..], &tol)?;

    let mut outcome = ScenarioOutcome::new("nonuniqueness-3d", rho.clone(), privileged.clone());
    let ambient = generate_star_algebra(&privileged.with(std::slice::from_ref(rho.density()))?, &tol)?;
    let s = crate::beable::privileged_subspace(&privileged, &rho, &tol)?;
    outcome
        .checks
        .push(ScenarioCheck::new("privileged subspace is the whole space", s.dim() == 3, None));
    for (i, (a, alg)) in [(&a1, &alg1), (&a2, &alg2)].into_iter().enumerate() {
        let tag = format!("vN(A{})", i + 1);
        let (inside, res) = ambient.membership(a, &tol);
        outcome
            .checks
            .push(ScenarioCheck::new(format!("A{} lies in vN(R,K)", i + 1), inside, Some(res)));
        let (has_r, res) = alg.membership(&r, &tol);
        outcome.checks.push(ScenarioCheck::new(format!("{tag} contains R"), has_r, Some(res)));
        let ab = is_abelian(alg, &tol);
        let rc = relative_commutant(alg.basis(), &ambient, &tol)?;
        let fix = alg.containment_residual(&rc);
        outcome.checks.push(ScenarioCheck::new(
            format!("{tag} is maximal abelian in vN(R,K)"),
            ab.abelian && rc.dim() == alg.dim() && fix <= 1e-7,
            Some(fix),
        ));
        let verdict = is_beable(alg, &rho, &tol);
        outcome.checks.push(ScenarioCheck::new(
            format!("{tag} is beable"),
            verdict.is_beable,
            Some(verdict.worst_residual),
        ));
        let def = verify_def_invariance(alg, &privileged, &rho, 50, 1 + i as u64, &tol)?;
        outcome.checks.push(ScenarioCheck::new(
            format!("{tag} passes 50-trial def-invariance"),
            def.holds,
            Some(def.worst_residual),
        ));
        let extra = GeneratorSet::new(3, vec![a.clone()], format!("A{}", i + 1))?;
        let chosen = maximal_rbeable(&privileged, &rho, Some(&extra), &tol)?;
        let defect = chosen.algebra.span_defect(alg);
        outcome.checks.push(ScenarioCheck::new(
            format!("maximal_rbeable with extra A{} yields {tag}", i + 1),
            chosen.algebra.span_equals(alg, &tol),
            Some(defect),
        ));
    }
    let defect = alg1.span_defect(&alg2);
    outcome.checks.push(ScenarioCheck::new(
        "distinct maximal R-beable algebras",
        defect > 1e-6 && defect > 10.0 * tol.residual_tol,
        Some(defect),
    ));
    outcome.metadata.insert("theta".into(), params.theta.to_string());
    outcome.metadata.insert("phi".into(), params.phi.to_string());
    outcome.metadata.insert("projected_cosine".into(), format!("{cosine:.6}"));
    Ok(NonUniqueness {
        outcome,
        algebras: [alg1, alg2],
        a1,
        a2,
    })
}
