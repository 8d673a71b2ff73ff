use std::f64::consts::PI;

use super::{ScenarioCheck, ScenarioOutcome};
use crate::algebra::{generate_star_algebra, GeneratorSet, OperatorAlgebra};
use crate::beable::is_beable;
use crate::matcore::{basis_vector, hermitian_spectral, ComplexMatrix, Tolerance, C64};
use crate::random;
use crate::states::{dispersion_free_decomposition, State};
use crate::{Error, Result};

/// Clock `U = diag(1, ω, …, ω^{n−1})` and shift `V e_j = e_{j+1 mod n}`,
/// with `ω = e^{2πi/n}` and `UV = ωVU`.
pub fn clock_shift_pair(n: usize) -> (ComplexMatrix, ComplexMatrix) {
    let omega = |j: usize| C64::from_polar(1.0, 2.0 * PI * j as f64 / n as f64);
    let u = ComplexMatrix::diag(&(0..n).map(omega).collect::<Vec<_>>());
    let v = ComplexMatrix::from_fn(n, |i, j| {
        if i == (j + 1) % n {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    (u, v)
}

/// Finite clock-shift analogue of the Weyl argument: every dispersion-free
/// state on the clock algebra gives the shift powers zero expectation and
/// spreads the spectral weight of the shift's Hermitian parts uniformly.
pub fn finite_weyl(n: usize) -> Result<ScenarioOutcome> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("finite_weyl needs n >= 2, got {n}")));
    }
    let tol = Tolerance::for_dim(n);
    let (u, v) = clock_shift_pair(n);
    let omega = C64::from_polar(1.0, 2.0 * PI / n as f64);
    let ud = u.adjoint();
    let gens = vec![&u + &ud, (&u - &ud).scale(C64::new(0.0, 1.0))];
    let privileged = GeneratorSet::new(n, gens, "clock")?;
    let clock = generate_star_algebra(&privileged, &tol)?;

    let mut out = ScenarioOutcome::new(format!("finite-weyl/n={n}"), State::maximally_mixed(n), privileged);
    let weyl = (&(&u * &v) - &(&v * &u).scale(omega)).frobenius_norm();
    out.checks.push(ScenarioCheck::at_most("UV = omega VU", weyl, 1e-12));
    out.checks.push(ScenarioCheck::new(
        "clock algebra is the diagonal algebra",
        clock.span_equals(&OperatorAlgebra::diagonal(n), &tol),
        Some(clock.span_defect(&OperatorAlgebra::diagonal(n))),
    ));

    let mut states: Vec<State> = (0..n)
        .map(|j| State::from_vector(&basis_vector(n, j), &tol))
        .collect::<Result<_>>()?;
    states.push(State::maximally_mixed(n));
    states.push(random::state(&mut random::seeded(n as u64), n, n, &tol));

    let powers: Vec<ComplexMatrix> = (1..n as u32).map(|k| v.pow(k)).collect();
    let parts = [v.hermitian_part(), v.antihermitian_part()];
    let spectra = parts
        .iter()
        .map(|h| hermitian_spectral(h, &tol))
        .collect::<Result<Vec<_>>>()?;

    let mut worst_shift = 0.0f64;
    let mut worst_uniform = 0.0f64;
    for st in &states {
        for c in dispersion_free_decomposition(st, &clock, &tol)? {
            for p in &powers {
                worst_shift = worst_shift.max(c.value_of(p).norm());
            }
            for sd in &spectra {
                for cl in &sd.clusters {
                    let expected = cl.multiplicity as f64 / n as f64;
                    worst_uniform = worst_uniform.max((c.value_of(&cl.projection).re - expected).abs());
                }
            }
        }
    }
    out.checks.push(ScenarioCheck::at_most(
        "shift powers vanish under every dispersion-free component",
        worst_shift,
        1e-10,
    ));
    out.checks.push(ScenarioCheck::at_most(
        "shift Hermitian parts have uniform spectral weight",
        worst_uniform,
        1e-10,
    ));

    let full = OperatorAlgebra::full(n);
    let mut not_beable = true;
    for st in [&states[0], &states[n], &states[n + 1]] {
        not_beable &= !is_beable(&full, st, &tol).is_beable;
    }
    out.checks.push(ScenarioCheck::new("full matrix algebra is not beable", not_beable, None));
    out.metadata.insert("n".into(), n.to_string());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qubit_case_is_pauli() {
        let (u, v) = clock_shift_pair(2);
        assert!((&u - &crate::matcore::pauli::z()).frobenius_norm() < 1e-15);
        assert!((&v - &crate::matcore::pauli::x()).frobenius_norm() < 1e-15);
        let st = State::from_vector(&basis_vector(2, 0), &Tolerance::for_dim(2)).unwrap();
        assert!(st.expectation(&v).unwrap().norm() < 1e-15);
    }

    #[test]
    fn shift_powers_have_zero_trace() {
        let (_, v) = clock_shift_pair(4);
        let mixed = State::maximally_mixed(4);
        for k in 1..4 {
            assert!(mixed.expectation(&v.pow(k)).unwrap().norm() < 1e-15);
        }
        let (_, v) = clock_shift_pair(3);
        let e1 = State::from_vector(&basis_vector(3, 0), &Tolerance::for_dim(3)).unwrap();
        assert!(e1.expectation(&v).unwrap().norm() < 1e-15);
        assert!(e1.expectation(&v.pow(2)).unwrap().norm() < 1e-15);
    }

    #[test]
    fn checks_pass_for_several_sizes() {
        for n in [2, 3, 5, 8] {
            let o = finite_weyl(n).unwrap();
            for c in &o.checks {
                assert!(c.passed, "n={n}: {} failed: {:?}", c.name, c.residual);
            }
        }
        assert!(finite_weyl(1).is_err());
    }
}
