//! Dense complex linear algebra with tolerance-aware rank decisions.
//!
//! Every rank decision in the crate (span membership, null spaces,
//! eigenvalue clustering) goes through a single [`Tolerance`] value.

mod matrix;
mod nullspace;
mod spectral;
mod subspace;

pub use matrix::{pauli, ComplexMatrix};
pub use nullspace::null_space;
pub use spectral::{hermitian_spectral, unitary_from_hermitian, EigenCluster, SpectralDecomposition};
pub use subspace::Subspace;

use crate::{Error, Result};

pub type C64 = num_complex::Complex64;
pub type CVector = nalgebra::DVector<C64>;

/// Cutoffs shared by all rank decisions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    /// Singular-value and eigen-gap cutoff.
    pub rank_tol: f64,
    /// Norm-residual acceptance threshold.
    pub residual_tol: f64,
}

impl Tolerance {
    pub fn new(rank_tol: f64, residual_tol: f64) -> Result<Self> {
        if !(rank_tol > 0.0 && rank_tol.is_finite()) {
            return Err(Error::InvalidTolerance(format!("rank_tol must be positive, got {rank_tol}")));
        }
        if !(residual_tol > 0.0 && residual_tol.is_finite()) {
            return Err(Error::InvalidTolerance(format!(
                "residual_tol must be positive, got {residual_tol}"
            )));
        }
        Ok(Self { rank_tol, residual_tol })
    }

    /// Defaults for an ambient dimension: `rank_tol = 1e-9 * dim`, `residual_tol = 1e-8`.
    pub fn for_dim(dim: usize) -> Self {
        Self {
            rank_tol: 1e-9 * dim.max(1) as f64,
            residual_tol: 1e-8,
        }
    }

    /// Sets `residual_tol` and derives `rank_tol = residual_tol / 10`.
    pub fn from_residual(residual_tol: f64) -> Result<Self> {
        Self::new(residual_tol / 10.0, residual_tol)
    }

    /// Scale-aware acceptance: `residual <= residual_tol * max(1, scale)`.
    pub fn accepts(&self, residual: f64, scale: f64) -> bool {
        residual <= self.residual_tol * scale.max(1.0)
    }
}

/// Hilbert-Schmidt inner product `tr(AᴴB)`.
pub fn hs_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<C64> {
    a.hs_inner(b)
}

/// Conjugate transpose.
pub fn adjoint(a: &ComplexMatrix) -> ComplexMatrix {
    a.adjoint()
}

/// Appends the component of `v` orthogonal to `basis` (after one
/// re-orthogonalization pass) if its norm exceeds `drop_tol * max(1, |v|)`.
/// Returns whether a vector was appended.
pub(crate) fn gram_schmidt_push(basis: &mut Vec<CVector>, v: &CVector, drop_tol: f64) -> bool {
    let scale = v.norm().max(1.0);
    let mut w = v.clone();
    for _ in 0..2 {
        for b in basis.iter() {
            let c = b.dotc(&w);
            w.axpy(-c, b, C64::new(1.0, 0.0));
        }
    }
    let norm = w.norm();
    if norm <= drop_tol * scale {
        return false;
    }
    w.unscale_mut(norm);
    basis.push(w);
    true
}

/// Standard basis vector `e_i` of length `n`.
pub fn basis_vector(n: usize, i: usize) -> CVector {
    let mut v = CVector::zeros(n);
    v[i] = C64::new(1.0, 0.0);
    v
}

/// Builds a complex vector from real entries.
pub fn real_vector(entries: &[f64]) -> CVector {
    CVector::from_iterator(entries.len(), entries.iter().map(|&x| C64::new(x, 0.0)))
}

/// Kronecker product of vectors.
pub fn kron_vec(a: &CVector, b: &CVector) -> CVector {
    let mut out = CVector::zeros(a.len() * b.len());
    for i in 0..a.len() {
        for j in 0..b.len() {
            out[i * b.len() + j] = a[i] * b[j];
        }
    }
    out
}
