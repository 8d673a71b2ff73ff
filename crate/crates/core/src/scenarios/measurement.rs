use super::{kron_all, ScenarioCheck, ScenarioOutcome};
use crate::algebra::{generate_star_algebra, GeneratorSet};
use crate::beable::{rbeable_vector_state, Membership};
use crate::matcore::{basis_vector, kron_vec, pauli, CVector, ComplexMatrix, Tolerance, C64};
use crate::states::State;
use crate::{Error, Result};

/// Parameters of the ideal measurement scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct IdealMeasurementParams {
    /// Pointer space dimension; pointer states are `x₀` (ground) and `x₁..x_k`.
    pub apparatus_dim: usize,
    /// Object amplitudes `c₁..c_k` on the eigenvectors `y₁..y_k`.
    pub coeffs: Vec<C64>,
    /// Eigenvalues `λ₁..λ_k` of the measured observable.
    pub eigenvalues: Vec<f64>,
}

impl Default for IdealMeasurementParams {
    fn default() -> Self {
        let r = 0.5f64.sqrt();
        Self {
            apparatus_dim: 3,
            coeffs: vec![C64::new(r, 0.0), C64::new(r, 0.0)],
            eigenvalues: vec![0.0, 1.0],
        }
    }
}

/// Pointer `R̄ ⊗ I` on `ℂᵐ ⊗ ℂᵏ` strictly correlated with `M̄ = diag(λ)`.
///
/// Returns the scenarios before and after the correlating interaction. `M`
/// is expected outside the maximal algebra beforehand exactly when `λ` is
/// not constant on the support of `c`, and inside afterwards.
pub fn ideal_measurement(params: &IdealMeasurementParams) -> Result<(ScenarioOutcome, ScenarioOutcome)> {
    let m = params.apparatus_dim;
    let k = params.coeffs.len();
    if k < 2 {
        return Err(Error::InvalidParameter(format!("need at least two outcomes, got {k}")));
    }
    if params.eigenvalues.len() != k {
        return Err(Error::InvalidParameter(format!(
            "{} eigenvalues for {k} coefficients",
            params.eigenvalues.len()
        )));
    }
    if m < k + 1 {
        return Err(Error::InvalidParameter(format!(
            "apparatus dimension {m} cannot hold a ground state and {k} pointer states"
        )));
    }
    let norm: f64 = params.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidParameter(format!("Σ|c|² = {norm}, expected 1")));
    }
    if params.eigenvalues.iter().any(|l| !l.is_finite()) || params.coeffs.iter().any(|c| !c.is_finite()) {
        return Err(Error::InvalidParameter("non-finite parameter".into()));
    }

    let n = m * k;
    let tol = Tolerance::for_dim(n);
    let ik = ComplexMatrix::identity(k);
    let r_bar = ComplexMatrix::diag_real(&(0..m).map(|i| i as f64).collect::<Vec<_>>());
    let r = r_bar.kron(&ik);
    let m_obs = ComplexMatrix::identity(m).kron(&ComplexMatrix::diag_real(&params.eigenvalues));
    let privileged = GeneratorSet::new(n, vec![r.clone()], "pointer")?;

    let x = |i: usize| basis_vector(m, i);
    let y = |i: usize| basis_vector(k, i);
    let object: CVector = (0..k).fold(CVector::zeros(k), |acc, i| acc + y(i) * params.coeffs[i]);
    let v0 = kron_vec(&x(0), &object);
    let v = (0..k).fold(CVector::zeros(n), |acc, i| acc + kron_vec(&x(i + 1), &y(i)) * params.coeffs[i]);

    let support: Vec<f64> = (0..k)
        .filter(|&i| params.coeffs[i].norm() > 1e-12)
        .map(|i| params.eigenvalues[i])
        .collect();
    let sharp = support.windows(2).all(|w| (w[0] - w[1]).abs() <= 1e-12);
    let pre_expected = if sharp { Membership::Member } else { Membership::NonMember };

    let mut pre = ScenarioOutcome::new("ideal-measurement/pre", State::from_vector(&v0, &tol)?, privileged.clone());
    pre.query("M", m_obs.clone(), pre_expected);
    pre.query("R", r.clone(), Membership::Member);

    let mut post = ScenarioOutcome::new("ideal-measurement/post", State::from_vector(&v, &tol)?, privileged.clone());
    post.query("M", m_obs.clone(), Membership::Member);
    post.query("R", r, Membership::Member);

    // Σ λₙ (Qₙ ⊗ I) with Qₙ the pointer projection onto xₙ
    let mut pointer = ComplexMatrix::zeros(n);
    for (i, l) in params.eigenvalues.iter().enumerate() {
        pointer = &pointer + &ComplexMatrix::projector(&x(i + 1)).kron(&ik).scale_real(*l);
    }
    let vn_r = generate_star_algebra(&privileged, &tol)?;
    let (in_vn, res_vn) = vn_r.membership(&pointer, &tol);
    post.checks.push(ScenarioCheck::new("pointer-correlated observable lies in vN(R)", in_vn, Some(res_vn)));
    let reproduce = (pointer.apply(&v) - m_obs.apply(&v)).norm();
    post.checks.push(ScenarioCheck::at_most(
        "pointer-correlated observable reproduces M v",
        reproduce,
        tol.residual_tol,
    ));
    let b = rbeable_vector_state(&privileged, &v, &tol)?;
    let (in_b, res_b) = b.algebra.membership(&pointer, &tol);
    post.checks.push(ScenarioCheck::new("pointer-correlated observable lies in B(R,v)", in_b, Some(res_b)));
    post.query("sum lambda_n Q_n x I", pointer, Membership::Member);

    for o in [&mut pre, &mut post] {
        o.metadata.insert("apparatus_dim".into(), m.to_string());
        o.metadata.insert("outcomes".into(), k.to_string());
    }
    Ok((pre, post))
}

fn x_plus() -> CVector {
    let r = 0.5f64.sqrt();
    CVector::from_vec(vec![C64::new(r, 0.0), C64::new(r, 0.0)])
}

fn x_minus() -> CVector {
    let r = 0.5f64.sqrt();
    CVector::from_vec(vec![C64::new(r, 0.0), C64::new(-r, 0.0)])
}

fn y_plus() -> CVector {
    let r = 0.5f64.sqrt();
    CVector::from_vec(vec![C64::new(r, 0.0), C64::new(0.0, r)])
}

fn y_minus() -> CVector {
    let r = 0.5f64.sqrt();
    CVector::from_vec(vec![C64::new(r, 0.0), C64::new(0.0, -r)])
}

/// `(|x+⟩|x−⟩ − |x−⟩|x+⟩)/√2`.
pub(crate) fn singlet() -> CVector {
    (kron_vec(&x_plus(), &x_minus()) - kron_vec(&x_minus(), &x_plus())) * C64::new(0.5f64.sqrt(), 0.0)
}

/// Pointer with eigenvalues −1, 0, +1 at indices 0, 1, 2.
fn pointer3() -> ComplexMatrix {
    ComplexMatrix::diag_real(&[-1.0, 0.0, 1.0])
}

/// Pointer basis index for a pointer reading in {−1, 0, +1}.
fn pointer_state(reading: i32) -> CVector {
    basis_vector(3, (reading + 1) as usize)
}

/// Singlet spin pair with a three-state pointer correlated to `σx1`.
///
/// Before the measurement the state is `|R₀=0⟩|s⟩`; afterwards it is
/// `(|R₀=+1⟩|x+⟩|x−⟩ − |R₀=−1⟩|x−⟩|x+⟩)/√2`.
pub fn epr_spin() -> Result<(ScenarioOutcome, ScenarioOutcome)> {
    let n = 12;
    let tol = Tolerance::for_dim(n);
    let (i3, i2) = (ComplexMatrix::identity(3), ComplexMatrix::identity(2));
    let r = kron_all(&[pointer3(), i2.clone(), i2.clone()]);
    let privileged = GeneratorSet::new(n, vec![r], "R0")?;

    let sx1 = kron_all(&[i3.clone(), pauli::x(), i2.clone()]);
    let sx2 = kron_all(&[i3.clone(), i2.clone(), pauli::x()]);
    let sy1 = kron_all(&[i3.clone(), pauli::y(), i2.clone()]);
    let sy2 = kron_all(&[i3.clone(), i2.clone(), pauli::y()]);
    let sxx = kron_all(&[i3, pauli::x(), pauli::x()]);

    let v0 = kron_vec(&pointer_state(0), &singlet());
    let mut pre = ScenarioOutcome::new("epr-spin/pre", State::from_vector(&v0, &tol)?, privileged.clone());
    pre.query("I x sigma_x1 x I", sx1.clone(), Membership::NonMember);
    pre.query("I x I x sigma_x2", sx2.clone(), Membership::NonMember);
    pre.query("I x sigma_y1 x I", sy1.clone(), Membership::NonMember);
    pre.query("I x I x sigma_y2", sy2.clone(), Membership::NonMember);

    let plus = kron_vec(&pointer_state(1), &kron_vec(&x_plus(), &x_minus()));
    let minus = kron_vec(&pointer_state(-1), &kron_vec(&x_minus(), &x_plus()));
    let v = (plus - minus) * C64::new(0.5f64.sqrt(), 0.0);
    let mut post = ScenarioOutcome::new("epr-spin/post", State::from_vector(&v, &tol)?, privileged);
    post.query("I x sigma_x1 x sigma_x2", sxx, Membership::Member);
    post.query("I x sigma_x1 x I", sx1, Membership::Member);
    post.query("I x I x sigma_x2", sx2, Membership::Member);
    post.query("I x sigma_y1 x I", sy1, Membership::NonMember);
    post.query("I x I x sigma_y2", sy2, Membership::NonMember);
    Ok((pre, post))
}

/// Two pointers on the singlet: `R₁` strictly correlated with `σx1` and
/// `R₂` with `σy2`, through permutation-style correlators in the x- and
/// y-eigenbases respectively.
pub fn schrodinger_two_pointer() -> Result<ScenarioOutcome> {
    let n = 36;
    let tol = Tolerance::for_dim(n);
    let (i3, i2) = (ComplexMatrix::identity(3), ComplexMatrix::identity(2));
    let r1 = kron_all(&[pointer3(), i3.clone(), i2.clone(), i2.clone()]);
    let r2 = kron_all(&[i3.clone(), pointer3(), i2.clone(), i2.clone()]);
    let privileged = GeneratorSet::new(n, vec![r1, r2], "R1,R2")?;

    let s = singlet();
    let mut v = CVector::zeros(n);
    for (a, xa) in [(1, x_plus()), (-1, x_minus())] {
        for (b, yb) in [(1, y_plus()), (-1, y_minus())] {
            let particles = kron_vec(&xa, &yb);
            let amp = particles.dotc(&s);
            let pointers = kron_vec(&pointer_state(a), &pointer_state(b));
            v += kron_vec(&pointers, &particles) * amp;
        }
    }

    let sx1 = kron_all(&[i3.clone(), i3.clone(), pauli::x(), i2.clone()]);
    let sy1 = kron_all(&[i3.clone(), i3.clone(), pauli::y(), i2.clone()]);
    let sx2 = kron_all(&[i3.clone(), i3.clone(), i2.clone(), pauli::x()]);
    let sy2 = kron_all(&[i3.clone(), i3, i2, pauli::y()]);

    let mut out = ScenarioOutcome::new("schrodinger", State::from_vector(&v, &tol)?, privileged);
    out.query("sigma_x1", sx1, Membership::Member);
    out.query("sigma_y2", sy2, Membership::Member);
    out.query("sigma_x2", sx2, Membership::NonMember);
    out.query("sigma_y1", sy1, Membership::NonMember);
    out.query("I", ComplexMatrix::identity(n), Membership::Member);
    out.metadata
        .insert("correlators".into(), "permutation-style in the x1 and y2 eigenbases".into());
    Ok(out)
}
