//! Beable subalgebras: tests, maximal constructions and privileged
//! observables.
//!
//! An algebra `B` is beable for a state `ρ` when every commutator of `B`
//! lies in the left kernel of `ρ`. Equivalently, with `T = [B · ran K]`,
//! the compression of `B` to `T` is abelian. Maximal beable algebras are
//! exactly `L(T⊥) ⊕ N` with `N` maximal abelian in `L(T)`.

mod rbeable;

pub use rbeable::{
    maximal_rbeable, membership_fast, privileged_subspace, rbeable_commuting_state, rbeable_vector_state,
    verify_def_invariance, DefInvariance, Membership, RBeableResult, Uniqueness,
};

use crate::algebra::{extend_to_maximal_abelian, is_abelian, relative_commutant, OperatorAlgebra};
use crate::matcore::{CVector, ComplexMatrix, Subspace, Tolerance};
use crate::states::State;
use crate::{Error, Result};

/// Result of the commutator-kernel test.
#[derive(Debug, Clone, PartialEq)]
pub struct BeableVerdict {
    pub is_beable: bool,
    /// Largest `‖[Bᵢ, Bⱼ] K^{1/2}‖_F` over basis pairs.
    pub worst_residual: f64,
    /// Basis indices of the worst pair.
    pub witness: Option<(usize, usize)>,
}

/// `[B · M]`, the span of `b m` over basis elements `b` and basis vectors `m`.
pub fn closure_subspace(b: &OperatorAlgebra, m: &Subspace, tol: &Tolerance) -> Result<Subspace> {
    let n = b.ambient_dim();
    if m.ambient_dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: m.ambient_dim(),
        });
    }
    let mut vectors: Vec<CVector> = m.basis().to_vec();
    for x in b.basis() {
        for v in m.basis() {
            vectors.push(x.apply(v));
        }
    }
    Subspace::orthonormalize(n, &vectors, tol)
}

/// `tr(K [A,B]ᴴ [A,B])`, the squared left-kernel residual of `[A,B]`.
pub fn commutator_dispersion(rho: &State, a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    rho.left_kernel_residual(&a.commutator(b)).powi(2)
}

/// Beable test through the left kernel: `[Bᵢ, Bⱼ] K^{1/2} = 0` for all basis
/// pairs. Bilinearity makes the basis pairs sufficient.
pub fn is_beable(b: &OperatorAlgebra, rho: &State, tol: &Tolerance) -> BeableVerdict {
    let f = rho.sqrt_factor();
    let basis = b.basis();
    // products against the rank-r factor keep each pair at O(n² r)
    let applied: Vec<_> = basis.iter().map(|x| x.as_inner() * f).collect();
    let mut worst = 0.0;
    let mut witness = None;
    for i in 0..basis.len() {
        for j in (i + 1)..basis.len() {
            let r = (basis[i].as_inner() * &applied[j] - basis[j].as_inner() * &applied[i]).norm();
            if r > worst {
                worst = r;
                witness = Some((i, j));
            }
        }
    }
    BeableVerdict {
        is_beable: worst <= tol.residual_tol,
        worst_residual: worst,
        witness,
    }
}

/// Largest `‖[P_T Bᵢ P_T, P_T Bⱼ P_T]‖_F` with `T = [B · ran K]`.
pub fn compression_commutation_residual(b: &OperatorAlgebra, rho: &State, tol: &Tolerance) -> Result<f64> {
    let t = closure_subspace(b, rho.range(), tol)?;
    let compressed: Vec<ComplexMatrix> = b.basis().iter().map(|x| t.compress(x)).collect();
    let mut worst = 0.0f64;
    for i in 0..compressed.len() {
        for j in (i + 1)..compressed.len() {
            worst = worst.max(compressed[i].commutator(&compressed[j]).frobenius_norm());
        }
    }
    Ok(worst)
}

/// Beable test through compression: the compression of `B` to
/// `T = [B · ran K]` is abelian.
pub fn is_beable_via_compression(b: &OperatorAlgebra, rho: &State, tol: &Tolerance) -> Result<bool> {
    Ok(compression_commutation_residual(b, rho, tol)? <= tol.residual_tol)
}

/// `L(ran K⊥) ⊕ N` with `N` the diagonal algebra of `K`'s eigenbasis on
/// `ran K`, using the deterministic basis inside degenerate eigenspaces.
pub fn canonical_maximal_beable(rho: &State) -> Result<OperatorAlgebra> {
    let t = rho.range();
    OperatorAlgebra::block_sum(&t.complement(), t, &OperatorAlgebra::diagonal(t.dim()))
}

/// `L(T⊥) ⊕ N` where `T = [B₀ · ran K]` and `N` is a maximal abelian
/// extension of the compression of `B₀` to `T`.
pub fn extend_to_maximal_beable(b0: &OperatorAlgebra, rho: &State, tol: &Tolerance) -> Result<OperatorAlgebra> {
    let verdict = is_beable(b0, rho, tol);
    if !verdict.is_beable {
        return Err(Error::SeedNotBeable {
            residual: verdict.worst_residual,
        });
    }
    let t = closure_subspace(b0, rho.range(), tol)?;
    let m = b0.compress_to(&t, tol)?;
    let n = extend_to_maximal_abelian(&m, &OperatorAlgebra::full(t.dim()), tol)?;
    OperatorAlgebra::block_sum(&t.complement(), &t, &n)
}

/// Structural test for `B = L(T⊥) ⊕ N` with `N` maximal abelian in `L(T)`.
pub fn is_maximal_beable(b: &OperatorAlgebra, rho: &State, tol: &Tolerance) -> Result<bool> {
    let t = closure_subspace(b, rho.range(), tol)?;
    // T reduces B
    for x in b.basis() {
        if !tol.accepts(t.invariance_residual(x), x.frobenius_norm()) {
            return Ok(false);
        }
    }
    let outer = t.complement();
    for u in outer.basis() {
        for w in outer.basis() {
            if !b.contains(&ComplexMatrix::outer(u, w), tol) {
                return Ok(false);
            }
        }
    }
    let n = b.compress_to(&t, tol)?;
    if b.dim() != outer.dim() * outer.dim() + n.dim() {
        return Ok(false);
    }
    if !is_abelian(&n, tol).abelian {
        return Ok(false);
    }
    let rc = relative_commutant(n.basis(), &OperatorAlgebra::full(t.dim()), tol)?;
    Ok(n.contains_algebra(&rc, tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::generate_star_algebra;
    use crate::matcore::{basis_vector, pauli, real_vector};
    use crate::states::definite_algebra;

    fn tol() -> Tolerance {
        Tolerance::for_dim(3)
    }

    fn pauli_algebra() -> OperatorAlgebra {
        let t = tol();
        OperatorAlgebra::new(2, &[ComplexMatrix::identity(2), pauli::x(), pauli::y(), pauli::z()], &t).unwrap()
    }

    #[test]
    fn closure_examples() {
        let t = tol();
        let m = Subspace::coordinate(3, &[1]);
        let c = closure_subspace(&OperatorAlgebra::scalars(3), &m, &t).unwrap();
        assert!(c.projection_distance(&m).unwrap() < 1e-12);
        let c = closure_subspace(&OperatorAlgebra::full(3), &m, &t).unwrap();
        assert_eq!(c.dim(), 3);
        let r = 0.5f64.sqrt();
        let m = Subspace::orthonormalize(2, &[real_vector(&[r, r])], &t).unwrap();
        let c = closure_subspace(&OperatorAlgebra::diagonal(2), &m, &t).unwrap();
        assert_eq!(c.dim(), 2);
    }

    #[test]
    fn beable_examples() {
        let t = tol();
        let mixed = State::maximally_mixed(2);
        let v = is_beable(&OperatorAlgebra::diagonal(2), &mixed, &t);
        assert!(v.is_beable);
        assert!(is_beable_via_compression(&OperatorAlgebra::diagonal(2), &mixed, &t).unwrap());

        let full = pauli_algebra();
        let v = is_beable(&full, &mixed, &t);
        assert!(!v.is_beable);
        assert!(!is_beable_via_compression(&full, &mixed, &t).unwrap());
        // oracle: [σx,σy] = 2iσz, tr(½ (2iσz)ᴴ(2iσz)) = tr(2I) = 4
        let c = pauli::x().commutator(&pauli::y());
        let direct = (&(mixed.density() * &c.adjoint()) * &c).trace().re;
        assert!((direct - 4.0).abs() < 1e-12);
        assert!((commutator_dispersion(&mixed, &pauli::x(), &pauli::y()) - 4.0).abs() < 1e-12);

        // joint eigenvector of a non-abelian algebra: ℂ ⊕ M₂ on e₀
        let t3 = Tolerance::for_dim(3);
        let mut gens = vec![ComplexMatrix::unit(3, 0, 0)];
        for i in 1..3 {
            for j in 1..3 {
                gens.push(ComplexMatrix::unit(3, i, j));
            }
        }
        let b = OperatorAlgebra::new(3, &gens, &t3).unwrap();
        let e0 = State::from_vector(&basis_vector(3, 0), &t3).unwrap();
        assert!(is_beable(&b, &e0, &t3).is_beable);
        assert!(is_beable_via_compression(&b, &e0, &t3).unwrap());
        let e1 = State::from_vector(&basis_vector(3, 1), &t3).unwrap();
        assert!(!is_beable(&b, &e1, &t3).is_beable);
        assert!(!is_beable_via_compression(&b, &e1, &t3).unwrap());
    }

    #[test]
    fn compression_scalar_on_third_dimension() {
        let t = tol();
        let mut gens = vec![ComplexMatrix::unit(3, 2, 2)];
        for i in 0..2 {
            for j in 0..2 {
                gens.push(ComplexMatrix::unit(3, i, j));
            }
        }
        let b = OperatorAlgebra::new(3, &gens, &t).unwrap();
        let st = State::from_vector(&basis_vector(3, 2), &t).unwrap();
        let tt = closure_subspace(&b, st.range(), &t).unwrap();
        assert_eq!(tt.dim(), 1);
        assert!(is_beable_via_compression(&b, &st, &t).unwrap());
        assert!(is_beable(&b, &st, &t).is_beable);
    }

    #[test]
    fn canonical_examples() {
        for n in 2..=3 {
            let t = Tolerance::for_dim(n);
            let mut v = CVector::from_fn(n, |i, _| crate::C64::new(1.0 + i as f64, 0.5 * i as f64));
            v.normalize_mut();
            let st = State::from_vector(&v, &t).unwrap();
            let c = canonical_maximal_beable(&st).unwrap();
            assert_eq!(c.dim(), (n - 1) * (n - 1) + 1);
            let d = definite_algebra(&st, &OperatorAlgebra::full(n), &t).unwrap();
            assert!(c.span_equals(&d, &t));
            assert!(is_maximal_beable(&c, &st, &t).unwrap());
        }
        let t = tol();
        let c = canonical_maximal_beable(&State::maximally_mixed(3)).unwrap();
        assert!(c.span_equals(&OperatorAlgebra::diagonal(3), &t));
        let st = State::from_density(&ComplexMatrix::diag_real(&[0.5, 0.5, 0.0]), &t).unwrap();
        let c = canonical_maximal_beable(&st).unwrap();
        assert_eq!(c.dim(), 3);
        assert!(c.span_equals(&OperatorAlgebra::diagonal(3), &t));
        assert!(is_maximal_beable(&c, &st, &t).unwrap());
    }

    #[test]
    fn extension_examples() {
        let t = tol();
        let v = basis_vector(3, 1);
        let st = State::from_vector(&v, &t).unwrap();
        let e = extend_to_maximal_beable(&OperatorAlgebra::scalars(3), &st, &t).unwrap();
        assert!(is_maximal_beable(&e, &st, &t).unwrap());
        assert!(e.contains(&ComplexMatrix::projector(&v), &t));
        assert_eq!(e.dim(), 5);

        let c = canonical_maximal_beable(&st).unwrap();
        let again = extend_to_maximal_beable(&c, &st, &t).unwrap();
        assert!(again.span_equals(&c, &t));

        let k = ComplexMatrix::diag_real(&[0.5, 0.3, 0.2]);
        let st = State::from_density(&k, &t).unwrap();
        let vk = generate_star_algebra(&[k][..], &t).unwrap();
        let e = extend_to_maximal_beable(&vk, &st, &t).unwrap();
        assert!(e.span_equals(&OperatorAlgebra::diagonal(3), &t));

        let err = extend_to_maximal_beable(&pauli_algebra(), &State::maximally_mixed(2), &t).unwrap_err();
        assert!(matches!(err, Error::SeedNotBeable { .. }));
    }

    #[test]
    fn maximality_examples() {
        let t = tol();
        let mixed = State::maximally_mixed(2);
        let k = ComplexMatrix::diag_real(&[0.7, 0.3]);
        let faithful = State::from_density(&k, &t).unwrap();
        assert!(is_maximal_beable(&OperatorAlgebra::diagonal(2), &faithful, &t).unwrap());
        assert!(!is_maximal_beable(&OperatorAlgebra::scalars(2), &mixed, &t).unwrap());
    }
}
