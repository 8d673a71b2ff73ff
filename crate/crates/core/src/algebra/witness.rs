use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{commutant, OperatorAlgebra};
use crate::matcore::{unitary_from_hermitian, ComplexMatrix, Tolerance};
use crate::{Error, Result};

/// A unitary `U` in the commutant with `‖[UQUᴴ, Q]‖_F` above tolerance.
#[derive(Debug, Clone)]
pub struct ConjugateWitness {
    pub unitary: ComplexMatrix,
    pub residual: f64,
    /// Zero-based index of the successful draw.
    pub trial: usize,
}

/// Random search for `U = exp(iH) ∈ V'` that moves `Q` to a projection not
/// commuting with `Q`. `H` is a standard-normal combination of a Hermitian
/// basis of `V'`. When `Q ∈ V` every such `U` commutes with `Q`, so no
/// witness is returned.
pub fn noncommuting_conjugate_witness(
    v: &OperatorAlgebra,
    q: &ComplexMatrix,
    trials: usize,
    seed: u64,
    tol: &Tolerance,
) -> Result<Option<ConjugateWitness>> {
    v.basis()
        .first()
        .map(|b| b.check_dim(q))
        .transpose()?;
    let residual = q.projection_residual();
    if residual > tol.residual_tol {
        return Err(Error::NotProjection { residual });
    }
    let comm = commutant(v, tol)?;
    let herm = comm.hermitian_basis(tol);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 0..trials {
        let mut h = ComplexMatrix::zeros(q.dim());
        for b in &herm {
            let g: f64 = StandardNormal.sample(&mut rng);
            h = &h + &b.scale_real(g);
        }
        let u = unitary_from_hermitian(&h, tol)?;
        let moved = &(&u * q) * &u.adjoint();
        let residual = moved.commutator(q).frobenius_norm();
        if residual > tol.residual_tol {
            return Ok(Some(ConjugateWitness {
                unitary: u,
                residual,
                trial,
            }));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerance {
        Tolerance::for_dim(2)
    }

    #[test]
    fn no_witness_inside_algebra() {
        let t = tol();
        let q = ComplexMatrix::diag_real(&[1.0, 0.0]);
        let w = noncommuting_conjugate_witness(&OperatorAlgebra::diagonal(2), &q, 50, 7, &t).unwrap();
        assert!(w.is_none());
        let w = noncommuting_conjugate_witness(&OperatorAlgebra::scalars(2), &ComplexMatrix::identity(2), 50, 7, &t)
            .unwrap();
        assert!(w.is_none());
    }

    #[test]
    fn witness_outside_algebra() {
        let t = tol();
        let q = ComplexMatrix::diag_real(&[1.0, 0.0]);
        let w = noncommuting_conjugate_witness(&OperatorAlgebra::scalars(2), &q, 50, 7, &t)
            .unwrap()
            .expect("witness");
        assert!(w.residual > t.residual_tol);
        let u = &w.unitary;
        assert!((&(u * &u.adjoint()) - &ComplexMatrix::identity(2)).frobenius_norm() < 1e-10);
    }

    #[test]
    fn rejects_non_projection() {
        let t = tol();
        let q = ComplexMatrix::diag_real(&[2.0, 0.0]);
        assert!(matches!(
            noncommuting_conjugate_witness(&OperatorAlgebra::scalars(2), &q, 5, 0, &t),
            Err(Error::NotProjection { .. })
        ));
    }
}
