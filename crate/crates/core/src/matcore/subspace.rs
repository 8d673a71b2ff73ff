use nalgebra::DMatrix;

use super::{basis_vector, gram_schmidt_push, CVector, ComplexMatrix, Tolerance, C64};
use crate::{Error, Result};

/// A subspace of `ℂⁿ` held as an orthonormal basis plus its projection.
#[derive(Debug, Clone)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<CVector>,
    projection: ComplexMatrix,
}

impl Subspace {
    /// Closed linear span of `vectors`.
    ///
    /// Modified Gram-Schmidt with one re-orthogonalization pass; vectors
    /// whose residual norm is at most `rank_tol` (relative to `max(1, |v|)`)
    /// are dropped.
    pub fn orthonormalize(ambient_dim: usize, vectors: &[CVector], tol: &Tolerance) -> Result<Self> {
        let mut basis = Vec::new();
        for v in vectors {
            if v.len() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    expected: ambient_dim,
                    found: v.len(),
                });
            }
            if basis.len() == ambient_dim {
                break;
            }
            gram_schmidt_push(&mut basis, v, tol.rank_tol);
        }
        Ok(Self::from_orthonormal(ambient_dim, basis))
    }

    pub(crate) fn from_orthonormal(ambient_dim: usize, basis: Vec<CVector>) -> Self {
        let mut projection = ComplexMatrix::zeros(ambient_dim);
        for v in &basis {
            projection = &projection + &ComplexMatrix::outer(v, v);
        }
        Self {
            ambient_dim,
            basis,
            projection,
        }
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Self::from_orthonormal(ambient_dim, Vec::new())
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self::from_orthonormal(ambient_dim, (0..ambient_dim).map(|i| basis_vector(ambient_dim, i)).collect())
    }

    /// Span of the listed standard basis vectors.
    pub fn coordinate(ambient_dim: usize, indices: &[usize]) -> Self {
        Self::from_orthonormal(ambient_dim, indices.iter().map(|&i| basis_vector(ambient_dim, i)).collect())
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[CVector] {
        &self.basis
    }

    pub fn projection(&self) -> &ComplexMatrix {
        &self.projection
    }

    /// The `n × k` isometry whose columns are the basis vectors.
    pub fn isometry(&self) -> DMatrix<C64> {
        let mut w = DMatrix::zeros(self.ambient_dim, self.dim());
        for (j, v) in self.basis.iter().enumerate() {
            w.set_column(j, v);
        }
        w
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: other.ambient_dim,
            });
        }
        Ok(())
    }

    /// Orthogonal complement, with a basis taken from `(I − P)e_i` in index order.
    pub fn complement(&self) -> Self {
        let q = &ComplexMatrix::identity(self.ambient_dim) - &self.projection;
        let rank = self.ambient_dim - self.dim();
        Self::from_orthonormal(self.ambient_dim, super::spectral::deterministic_basis(&q, rank))
    }

    pub fn join(&self, other: &Self, tol: &Tolerance) -> Result<Self> {
        self.check(other)?;
        let vectors: Vec<CVector> = self.basis.iter().chain(other.basis.iter()).cloned().collect();
        Self::orthonormalize(self.ambient_dim, &vectors, tol)
    }

    /// Complement of the join of the complements.
    pub fn meet(&self, other: &Self, tol: &Tolerance) -> Result<Self> {
        self.check(other)?;
        Ok(self.complement().join(&other.complement(), tol)?.complement())
    }

    /// `‖(I − P)v‖`.
    pub fn distance(&self, v: &CVector) -> f64 {
        let pv = self.projection.apply(v);
        (v - pv).norm()
    }

    pub fn contains_vector(&self, v: &CVector, tol: &Tolerance) -> bool {
        tol.accepts(self.distance(v), v.norm())
    }

    /// `self ⊇ other`, tested as `‖(I − P_self) P_other‖_F` within tolerance.
    pub fn contains(&self, other: &Self, tol: &Tolerance) -> Result<bool> {
        self.check(other)?;
        let resid = other.basis.iter().map(|v| self.distance(v)).fold(0.0, f64::max);
        Ok(resid <= tol.residual_tol)
    }

    /// `‖P_self − P_other‖_F`.
    pub fn projection_distance(&self, other: &Self) -> Result<f64> {
        self.check(other)?;
        Ok((&self.projection - &other.projection).frobenius_norm())
    }

    /// `‖(I − P) A P‖_F`, zero exactly when `A` leaves the subspace invariant.
    pub fn invariance_residual(&self, a: &ComplexMatrix) -> f64 {
        let q = &ComplexMatrix::identity(self.ambient_dim) - &self.projection;
        (&(&q * a) * &self.projection).frobenius_norm()
    }

    /// `Wᴴ A W` in the coordinates of this subspace's basis.
    pub fn compress(&self, a: &ComplexMatrix) -> ComplexMatrix {
        let w = self.isometry();
        ComplexMatrix::from_inner(w.adjoint() * a.as_inner() * &w)
    }

    /// `W B Wᴴ`, the inverse of [`compress`](Self::compress) on `L(S)`.
    pub fn embed(&self, b: &ComplexMatrix) -> ComplexMatrix {
        let w = self.isometry();
        ComplexMatrix::from_inner(&w * b.as_inner() * w.adjoint())
    }
}
