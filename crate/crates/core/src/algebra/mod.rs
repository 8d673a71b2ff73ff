//! Finite-dimensional *-algebras of matrices.
//!
//! An [`OperatorAlgebra`] is stored as a Hilbert-Schmidt orthonormal basis.
//! Membership of a matrix `X` is decided by the residual of its orthogonal
//! projection onto the span: `‖X − P(X)‖_F ≤ residual_tol · max(1, ‖X‖_F)`.

mod abelian;
mod construct;
mod jlb;
mod witness;

use std::sync::OnceLock;

use nalgebra::DMatrix;

pub use abelian::{extend_to_maximal_abelian, is_abelian, minimal_projections, AbelianCheck};
pub use construct::{
    center, commutant, double_commutant, generate_star_algebra, intersect, relative_commutant, Generators,
};
pub use jlb::{associator_residual, cstar_product_from_jlb, jordan, lie};
pub use witness::{noncommuting_conjugate_witness, ConjugateWitness};

use crate::matcore::{gram_schmidt_push, CVector, ComplexMatrix, Subspace, Tolerance, C64};
use crate::{Error, Result};

/// A family of matrices on a common space, e.g. a privileged family of observables.
#[derive(Debug, Clone)]
pub struct GeneratorSet {
    ambient_dim: usize,
    generators: Vec<ComplexMatrix>,
    pub label: String,
}

impl GeneratorSet {
    pub fn new(ambient_dim: usize, generators: Vec<ComplexMatrix>, label: impl Into<String>) -> Result<Self> {
        for g in &generators {
            if g.dim() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    expected: ambient_dim,
                    found: g.dim(),
                });
            }
        }
        Ok(Self {
            ambient_dim,
            generators,
            label: label.into(),
        })
    }

    pub fn empty(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            generators: Vec::new(),
            label: String::new(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn generators(&self) -> &[ComplexMatrix] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// A copy with `extra` appended.
    pub fn with(&self, extra: &[ComplexMatrix]) -> Result<Self> {
        let mut gens = self.generators.clone();
        gens.extend(extra.iter().cloned());
        Self::new(self.ambient_dim, gens, self.label.clone())
    }

    /// Worst pairwise commutator norm, with the offending pair.
    pub fn mutual_commutation(&self) -> (f64, Option<(usize, usize)>) {
        let mut worst = 0.0;
        let mut pair = None;
        for i in 0..self.generators.len() {
            for j in (i + 1)..self.generators.len() {
                let r = self.generators[i].commutator(&self.generators[j]).frobenius_norm();
                if r > worst {
                    worst = r;
                    pair = Some((i, j));
                }
            }
        }
        (worst, pair)
    }

    pub(crate) fn require_mutually_commuting(&self, tol: &Tolerance) -> Result<()> {
        let (worst, pair) = self.mutual_commutation();
        match pair {
            Some((first, second)) if worst > tol.residual_tol => Err(Error::GeneratorsNotMutuallyCommuting {
                first,
                second,
                residual: worst,
            }),
            _ => Ok(()),
        }
    }
}

/// A unital, adjoint-closed, multiplication-closed span of matrices.
#[derive(Debug, Clone)]
pub struct OperatorAlgebra {
    ambient_dim: usize,
    basis: Vec<ComplexMatrix>,
    /// Flattened basis as columns of an `n² × d` matrix with orthonormal columns.
    frame: DMatrix<C64>,
    commutation: OnceLock<(f64, Option<(usize, usize)>)>,
}

impl OperatorAlgebra {
    /// Span of `spanning`, validated against the algebra invariants.
    pub fn new(ambient_dim: usize, spanning: &[ComplexMatrix], tol: &Tolerance) -> Result<Self> {
        let alg = Self::span(ambient_dim, spanning, tol)?;
        alg.validate(tol)?;
        Ok(alg)
    }

    /// Span of `mats` without checking closure.
    pub(crate) fn span(ambient_dim: usize, mats: &[ComplexMatrix], tol: &Tolerance) -> Result<Self> {
        let mut flat = Vec::new();
        for m in mats {
            if m.dim() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    expected: ambient_dim,
                    found: m.dim(),
                });
            }
            if flat.len() == ambient_dim * ambient_dim {
                break;
            }
            gram_schmidt_push(&mut flat, &m.flatten(), tol.rank_tol);
        }
        Ok(Self::from_orthonormal_flat(ambient_dim, flat))
    }

    pub(crate) fn from_orthonormal_flat(ambient_dim: usize, flat: Vec<CVector>) -> Self {
        let basis = flat.iter().map(|v| ComplexMatrix::unflatten(ambient_dim, v)).collect();
        let frame = if flat.is_empty() {
            DMatrix::zeros(ambient_dim * ambient_dim, 0)
        } else {
            DMatrix::from_columns(&flat)
        };
        Self {
            ambient_dim,
            basis,
            frame,
            commutation: OnceLock::new(),
        }
    }

    pub(crate) fn from_orthonormal(ambient_dim: usize, basis: Vec<ComplexMatrix>) -> Self {
        let flat: Vec<CVector> = basis.iter().map(|b| b.flatten()).collect();
        Self::from_orthonormal_flat(ambient_dim, flat)
    }

    /// All of `M_n`, with the matrix units as basis.
    pub fn full(n: usize) -> Self {
        let mut basis = Vec::with_capacity(n * n);
        for j in 0..n {
            for i in 0..n {
                basis.push(ComplexMatrix::unit(n, i, j));
            }
        }
        Self::from_orthonormal(n, basis)
    }

    /// `ℂ·I`.
    pub fn scalars(n: usize) -> Self {
        Self::from_orthonormal(n, vec![ComplexMatrix::identity(n).scale_real(1.0 / (n as f64).sqrt())])
    }

    /// Diagonal matrices in the standard basis.
    pub fn diagonal(n: usize) -> Self {
        Self::from_orthonormal(n, (0..n).map(|i| ComplexMatrix::unit(n, i, i)).collect())
    }

    /// Matrices diagonal in the given orthonormal basis.
    pub fn diagonal_in_basis(basis: &[CVector]) -> Self {
        let n = basis.first().map(|v| v.len()).unwrap_or(0);
        Self::from_orthonormal(n, basis.iter().map(|v| ComplexMatrix::outer(v, v)).collect())
    }

    /// `L(outer) ⊕ inner`, where `inner` acts in the coordinates of `inner_space`
    /// and the two subspaces are complementary.
    pub fn block_sum(outer: &Subspace, inner_space: &Subspace, inner: &OperatorAlgebra) -> Result<Self> {
        let n = outer.ambient_dim();
        if inner_space.ambient_dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: inner_space.ambient_dim(),
            });
        }
        if inner.ambient_dim() != inner_space.dim() {
            return Err(Error::DimensionMismatch {
                expected: inner_space.dim(),
                found: inner.ambient_dim(),
            });
        }
        let mut basis = Vec::with_capacity(outer.dim() * outer.dim() + inner.dim());
        for u in outer.basis() {
            for w in outer.basis() {
                basis.push(ComplexMatrix::outer(u, w));
            }
        }
        if inner_space.dim() > 0 {
            for b in inner.basis() {
                basis.push(inner_space.embed(b));
            }
        }
        Ok(Self::from_orthonormal(n, basis))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Dimension of the span.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[ComplexMatrix] {
        &self.basis
    }

    pub(crate) fn frame(&self) -> &DMatrix<C64> {
        &self.frame
    }

    /// Orthogonal projection of `x` onto the span.
    pub fn project(&self, x: &ComplexMatrix) -> ComplexMatrix {
        let v = x.flatten();
        let coeffs = self.frame.adjoint() * &v;
        ComplexMatrix::unflatten(self.ambient_dim, &(&self.frame * coeffs))
    }

    /// Coordinates of `x` in the orthonormal basis.
    pub fn coordinates(&self, x: &ComplexMatrix) -> Vec<C64> {
        (self.frame.adjoint() * x.flatten()).iter().cloned().collect()
    }

    /// `‖X − P(X)‖_F`.
    pub fn projection_residual(&self, x: &ComplexMatrix) -> f64 {
        let v = x.flatten();
        let coeffs = self.frame.adjoint() * &v;
        (v - &self.frame * coeffs).norm()
    }

    /// Span membership with its residual.
    pub fn membership(&self, x: &ComplexMatrix, tol: &Tolerance) -> (bool, f64) {
        let r = self.projection_residual(x);
        (tol.accepts(r, x.frobenius_norm()), r)
    }

    pub fn contains(&self, x: &ComplexMatrix, tol: &Tolerance) -> bool {
        x.dim() == self.ambient_dim && self.membership(x, tol).0
    }

    /// Worst projection residual of `other`'s basis onto this span.
    pub fn containment_residual(&self, other: &OperatorAlgebra) -> f64 {
        other.basis.iter().map(|b| self.projection_residual(b)).fold(0.0, f64::max)
    }

    pub fn contains_algebra(&self, other: &OperatorAlgebra, tol: &Tolerance) -> bool {
        self.ambient_dim == other.ambient_dim && self.containment_residual(other) <= tol.residual_tol
    }

    /// Mutual projection defect: the larger of the two containment residuals.
    pub fn span_defect(&self, other: &OperatorAlgebra) -> f64 {
        if self.ambient_dim != other.ambient_dim {
            return f64::INFINITY;
        }
        self.containment_residual(other).max(other.containment_residual(self))
    }

    pub fn span_equals(&self, other: &OperatorAlgebra, tol: &Tolerance) -> bool {
        self.dim() == other.dim() && self.span_defect(other) <= tol.residual_tol
    }

    /// Hermitian matrices spanning the algebra over ℂ, orthonormal for the
    /// real inner product `Re tr(AᴴB)`. Candidates are taken in basis order,
    /// Hermitian part before anti-Hermitian part.
    pub fn hermitian_basis(&self, tol: &Tolerance) -> Vec<ComplexMatrix> {
        let mut out: Vec<CVector> = Vec::with_capacity(self.dim());
        for b in &self.basis {
            for part in [b.hermitian_part(), b.antihermitian_part()] {
                if out.len() == self.dim() {
                    break;
                }
                real_gram_schmidt_push(&mut out, &part.flatten(), tol.rank_tol);
            }
        }
        out.iter().map(|v| ComplexMatrix::unflatten(self.ambient_dim, v)).collect()
    }

    /// Worst residual over the identity, adjoint and product closure conditions.
    pub fn closure_residual(&self) -> f64 {
        let n = self.ambient_dim;
        let mut worst = self.projection_residual(&ComplexMatrix::identity(n)) / (n as f64).sqrt().max(1.0);
        for (i, a) in self.basis.iter().enumerate() {
            worst = worst.max(self.projection_residual(&a.adjoint()));
            for b in &self.basis[i..] {
                worst = worst.max(self.projection_residual(&(a * b)));
                worst = worst.max(self.projection_residual(&(b * a)));
            }
        }
        worst
    }

    pub fn validate(&self, tol: &Tolerance) -> Result<()> {
        let n = self.ambient_dim;
        if !self.contains(&ComplexMatrix::identity(n), tol) {
            return Err(Error::NotAnAlgebra("identity is not in the span".into()));
        }
        for (i, a) in self.basis.iter().enumerate() {
            if !self.contains(&a.adjoint(), tol) {
                return Err(Error::NotAnAlgebra(format!("adjoint of basis element {i} is not in the span")));
            }
            for (j, b) in self.basis.iter().enumerate() {
                if !self.contains(&(a * b), tol) {
                    return Err(Error::NotAnAlgebra(format!(
                        "product of basis elements {i} and {j} is not in the span"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Span of `Wᴴ b W` over the basis, in the coordinates of `s`.
    /// This is an algebra whenever `s` reduces the algebra.
    pub fn compress_to(&self, s: &Subspace, tol: &Tolerance) -> Result<Self> {
        let mats: Vec<ComplexMatrix> = self.basis.iter().map(|b| s.compress(b)).collect();
        Self::span(s.dim(), &mats, tol)
    }

    /// `U A Uᴴ` as a span.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Self {
        let ud = u.adjoint();
        let basis: Vec<ComplexMatrix> = self.basis.iter().map(|b| &(u * b) * &ud).collect();
        Self::from_orthonormal(self.ambient_dim, basis)
    }

    pub(crate) fn cached_commutation(&self) -> (f64, Option<(usize, usize)>) {
        *self.commutation.get_or_init(|| {
            let mut worst = 0.0;
            let mut pair = None;
            for i in 0..self.basis.len() {
                for j in (i + 1)..self.basis.len() {
                    let r = self.basis[i].commutator(&self.basis[j]).frobenius_norm();
                    if r > worst {
                        worst = r;
                        pair = Some((i, j));
                    }
                }
            }
            (worst, pair)
        })
    }
}

/// Gram-Schmidt step for the real inner product `Re⟨a, b⟩`.
pub(crate) fn real_gram_schmidt_push(basis: &mut Vec<CVector>, v: &CVector, drop_tol: f64) -> bool {
    let scale = v.norm().max(1.0);
    let mut w = v.clone();
    for _ in 0..2 {
        for b in basis.iter() {
            let c = b.dotc(&w).re;
            w.axpy(C64::new(-c, 0.0), b, C64::new(1.0, 0.0));
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::pauli;

    fn tol() -> Tolerance {
        Tolerance::for_dim(4)
    }

    #[test]
    fn standard_algebras_are_valid() {
        let t = tol();
        for n in 1..4 {
            OperatorAlgebra::full(n).validate(&t).unwrap();
            OperatorAlgebra::scalars(n).validate(&t).unwrap();
            OperatorAlgebra::diagonal(n).validate(&t).unwrap();
        }
        assert_eq!(OperatorAlgebra::full(3).dim(), 9);
    }

    #[test]
    fn rejects_non_algebra_spans() {
        let t = tol();
        let err = OperatorAlgebra::new(2, &[pauli::x()], &t).unwrap_err();
        assert!(matches!(err, Error::NotAnAlgebra(_)));
        let nil = ComplexMatrix::unit(2, 0, 1);
        let err = OperatorAlgebra::new(2, &[ComplexMatrix::identity(2), nil], &t).unwrap_err();
        assert!(matches!(err, Error::NotAnAlgebra(_)));
    }

    #[test]
    fn hermitian_basis_spans_algebra() {
        let t = tol();
        let full = OperatorAlgebra::full(3);
        let h = full.hermitian_basis(&t);
        assert_eq!(h.len(), 9);
        for m in &h {
            assert!(m.hermitian_residual() < 1e-14);
        }
        let again = OperatorAlgebra::span(3, &h, &t).unwrap();
        assert!(again.span_equals(&full, &t));
    }

    #[test]
    fn block_sum_dimension() {
        let t = tol();
        let outer = Subspace::coordinate(3, &[2]);
        let inner_space = Subspace::coordinate(3, &[0, 1]);
        let alg = OperatorAlgebra::block_sum(&outer, &inner_space, &OperatorAlgebra::full(2)).unwrap();
        assert_eq!(alg.dim(), 5);
        alg.validate(&t).unwrap();
    }
}
