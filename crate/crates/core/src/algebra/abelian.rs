use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{generate_star_algebra, relative_commutant, OperatorAlgebra};
use crate::matcore::{hermitian_spectral, ComplexMatrix, Tolerance, C64};
use crate::{Error, Result};

const MAX_RETRIES: u64 = 5;

/// Outcome of an abelian test on an algebra basis.
#[derive(Debug, Clone, PartialEq)]
pub struct AbelianCheck {
    pub abelian: bool,
    /// Largest `‖[Bᵢ, Bⱼ]‖_F` over basis pairs.
    pub worst_residual: f64,
    /// Basis indices of the worst pair, if any pair fails to commute exactly.
    pub witness: Option<(usize, usize)>,
}

pub fn is_abelian(a: &OperatorAlgebra, tol: &Tolerance) -> AbelianCheck {
    let (worst, pair) = a.cached_commutation();
    AbelianCheck {
        abelian: worst <= tol.residual_tol,
        worst_residual: worst,
        witness: pair,
    }
}

fn require_abelian(a: &OperatorAlgebra, tol: &Tolerance) -> Result<()> {
    let check = is_abelian(a, tol);
    if check.abelian {
        Ok(())
    } else {
        Err(Error::NotAbelian {
            residual: check.worst_residual,
        })
    }
}

fn primes(count: usize) -> Vec<u64> {
    let mut out: Vec<u64> = Vec::with_capacity(count);
    let mut k = 2u64;
    while out.len() < count {
        if out.iter().take_while(|&&p| p * p <= k).all(|&p| !k.is_multiple_of(p)) {
            out.push(k);
        }
        k += 1;
    }
    out
}

/// Minimal projections of an abelian algebra, ordered by the eigenvalues of
/// a generic element.
///
/// The generic element is `Σ cᵢHᵢ` over a Hermitian basis with `cᵢ = 1/pᵢ`
/// for the i-th prime. Its eigenprojections are accepted when there are
/// exactly `dim A` of them, each lies in `A`, and every basis element acts
/// as a scalar on each of them. Otherwise the coefficients are perturbed with
/// a seeded generator and the attempt is repeated.
pub fn minimal_projections(a: &OperatorAlgebra, tol: &Tolerance) -> Result<Vec<ComplexMatrix>> {
    require_abelian(a, tol)?;
    let n = a.ambient_dim();
    let herm = a.hermitian_basis(tol);
    let base: Vec<f64> = primes(herm.len()).iter().map(|&p| 1.0 / p as f64).collect();

    for attempt in 0..=MAX_RETRIES {
        let coeffs: Vec<f64> = if attempt == 0 {
            base.clone()
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(attempt);
            base.iter().map(|c| c * (1.0 + 0.5 * rng.random::<f64>())).collect()
        };
        let mut g = ComplexMatrix::zeros(n);
        for (h, c) in herm.iter().zip(&coeffs) {
            g = &g + &h.scale_real(*c);
        }
        let sd = hermitian_spectral(&g, tol)?;
        let candidates: Vec<ComplexMatrix> = sd.clusters.into_iter().map(|c| c.projection).collect();
        if candidates.len() == a.dim() && verify_minimal(a, &candidates, tol) {
            return Ok(candidates);
        }
    }
    Err(Error::GenericityFailure {
        attempts: MAX_RETRIES as usize + 1,
    })
}

fn verify_minimal(a: &OperatorAlgebra, projections: &[ComplexMatrix], tol: &Tolerance) -> bool {
    for p in projections {
        if !a.contains(p, tol) {
            return false;
        }
        let rank = p.trace().re;
        for b in a.basis() {
            let c = (b * p).trace() / C64::new(rank, 0.0);
            let resid = (&(b * p) - &p.scale(c)).frobenius_norm();
            if !tol.accepts(resid, b.frobenius_norm()) {
                return false;
            }
        }
    }
    true
}

/// Enlarges an abelian `m` inside `ambient` until it equals its relative
/// commutant there.
///
/// Each round projects the matrix units `E_ab`, in index order, onto the
/// part of the relative commutant orthogonal to the current algebra, and
/// adjoins the first Hermitian or anti-Hermitian part with norm at least
/// `1/(2n)`. Such a candidate always exists while the commutant is larger.
pub fn extend_to_maximal_abelian(
    m: &OperatorAlgebra,
    ambient: &OperatorAlgebra,
    tol: &Tolerance,
) -> Result<OperatorAlgebra> {
    require_abelian(m, tol)?;
    if m.ambient_dim() != ambient.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: ambient.ambient_dim(),
            found: m.ambient_dim(),
        });
    }
    let residual = ambient.containment_residual(m);
    if residual > tol.residual_tol {
        return Err(Error::NotContained { residual });
    }

    let n = m.ambient_dim();
    let threshold = 1.0 / (2.0 * n as f64);
    let mut current = m.clone();
    loop {
        let comm = relative_commutant(current.basis(), ambient, tol)?;
        if current.contains_algebra(&comm, tol) {
            return Ok(current);
        }
        let mut pick = None;
        'search: for j in 0..n {
            for i in 0..n {
                let e = ComplexMatrix::unit(n, i, j);
                let in_c = comm.project(&e);
                let outside = &in_c - &current.project(&in_c);
                for part in [outside.hermitian_part(), outside.antihermitian_part()] {
                    if part.frobenius_norm() >= threshold {
                        pick = Some(part);
                        break 'search;
                    }
                }
            }
        }
        let Some(x) = pick else {
            // Numerically the commutant exceeds `current` only by noise.
            return Ok(current);
        };
        let mut gens = current.basis().to_vec();
        gens.push(x);
        let next = generate_star_algebra(gens.as_slice(), tol)?;
        if next.dim() <= current.dim() {
            return Ok(current);
        }
        current = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{commutant, GeneratorSet};
    use crate::matcore::pauli;

    fn tol() -> Tolerance {
        Tolerance::for_dim(4)
    }

    #[test]
    fn abelian_examples() {
        let t = tol();
        assert!(is_abelian(&OperatorAlgebra::diagonal(3), &t).abelian);
        assert!(is_abelian(&OperatorAlgebra::scalars(3), &t).abelian);

        let paulis = [ComplexMatrix::identity(2), pauli::x(), pauli::y(), pauli::z()];
        let full = OperatorAlgebra::new(2, &paulis, &t).unwrap();
        let check = is_abelian(&full, &t);
        assert!(!check.abelian);
        let (i, j) = check.witness.unwrap();
        // basis elements are the Paulis scaled by 1/√2
        let unscaled = 2.0 * full.basis()[i].commutator(&full.basis()[j]).frobenius_norm();
        assert!((unscaled - 2.0 * 2f64.sqrt()).abs() < 1e-12);
        assert!((check.worst_residual * 2.0 - 2.0 * 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn minimal_projections_examples() {
        let t = tol();
        let ps = minimal_projections(&OperatorAlgebra::diagonal(3), &t).unwrap();
        assert_eq!(ps.len(), 3);
        for i in 0..3 {
            let e = ComplexMatrix::unit(3, i, i);
            assert!(ps.iter().any(|p| (p - &e).frobenius_norm() < 1e-10));
        }

        let ps = minimal_projections(&OperatorAlgebra::scalars(4), &t).unwrap();
        assert_eq!(ps.len(), 1);
        assert!((&ps[0] - &ComplexMatrix::identity(4)).frobenius_norm() < 1e-10);

        let a = OperatorAlgebra::new(2, &[ComplexMatrix::identity(2), pauli::x()], &t).unwrap();
        let ps = minimal_projections(&a, &t).unwrap();
        let id = ComplexMatrix::identity(2);
        let plus = (&id + &pauli::x()).scale_real(0.5);
        let minus = (&id - &pauli::x()).scale_real(0.5);
        assert_eq!(ps.len(), 2);
        assert!(ps.iter().any(|p| (p - &plus).frobenius_norm() < 1e-10));
        assert!(ps.iter().any(|p| (p - &minus).frobenius_norm() < 1e-10));

        assert!(matches!(
            minimal_projections(&OperatorAlgebra::full(2), &t),
            Err(Error::NotAbelian { .. })
        ));
    }

    #[test]
    fn extend_from_scalars_gives_diagonal() {
        let t = tol();
        let n = extend_to_maximal_abelian(&OperatorAlgebra::scalars(2), &OperatorAlgebra::full(2), &t).unwrap();
        assert!(n.span_equals(&OperatorAlgebra::diagonal(2), &t));
        let rc = relative_commutant(n.basis(), &OperatorAlgebra::full(2), &t).unwrap();
        assert!(rc.span_equals(&n, &t));
    }

    #[test]
    fn extend_fixpoint_and_relative() {
        let t = tol();
        let d = OperatorAlgebra::diagonal(3);
        let n = extend_to_maximal_abelian(&d, &OperatorAlgebra::full(3), &t).unwrap();
        assert!(n.span_equals(&d, &t));

        let p = ComplexMatrix::projector(&crate::matcore::real_vector(&[1.0, 1.0, 0.0]).normalize());
        let ambient = commutant(&GeneratorSet::new(3, vec![p.clone()], "p").unwrap(), &t).unwrap();
        let m = OperatorAlgebra::new(3, &[ComplexMatrix::identity(3), p], &t).unwrap();
        let n = extend_to_maximal_abelian(&m, &ambient, &t).unwrap();
        assert_eq!(n.dim(), 3);
        assert!(n.contains_algebra(&m, &t));
        assert!(is_abelian(&n, &t).abelian);
        let rc = relative_commutant(n.basis(), &ambient, &t).unwrap();
        assert!(n.contains_algebra(&rc, &t));
    }

    #[test]
    fn extend_rejects_bad_input() {
        let t = tol();
        assert!(matches!(
            extend_to_maximal_abelian(&OperatorAlgebra::full(2), &OperatorAlgebra::full(2), &t),
            Err(Error::NotAbelian { .. })
        ));
        let ambient = OperatorAlgebra::diagonal(2);
        let m = OperatorAlgebra::new(2, &[ComplexMatrix::identity(2), pauli::x()], &t).unwrap();
        assert!(matches!(
            extend_to_maximal_abelian(&m, &ambient, &t),
            Err(Error::NotContained { .. })
        ));
    }
}
