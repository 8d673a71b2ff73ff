use nalgebra::linalg::SymmetricEigen;

use super::{gram_schmidt_push, CVector, ComplexMatrix, Tolerance, C64};
use crate::Result;

/// One eigenvalue cluster: the merged eigenvalue, its multiplicity and the
/// eigenprojection, with a deterministic orthonormal basis of the eigenspace.
#[derive(Debug, Clone)]
pub struct EigenCluster {
    pub value: f64,
    pub multiplicity: usize,
    pub projection: ComplexMatrix,
    pub basis: Vec<CVector>,
}

/// Spectral data of a Hermitian matrix with near-equal eigenvalues merged.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    /// All eigenvalues, ascending.
    pub eigenvalues: Vec<f64>,
    /// Clusters in ascending order of value.
    pub clusters: Vec<EigenCluster>,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `Σ λⱼ Pⱼ`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map(|x| C64::new(x, 0.0))
    }

    /// Functional calculus `Σ f(λⱼ) Pⱼ`.
    pub fn map(&self, f: impl Fn(f64) -> C64) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dim());
        for c in &self.clusters {
            out = &out + &c.projection.scale(f(c.value));
        }
        out
    }

    /// Eigenvectors of every cluster, in cluster order.
    pub fn eigenbasis(&self) -> Vec<CVector> {
        self.clusters.iter().flat_map(|c| c.basis.iter().cloned()).collect()
    }
}

/// Spectral decomposition of a Hermitian matrix.
///
/// Sorted eigenvalues are split into clusters wherever the gap exceeds
/// `rank_tol * max(1, ‖H‖)`. Each cluster basis is obtained by projecting
/// the standard basis vectors onto the eigenspace in index order.
pub fn hermitian_spectral(h: &ComplexMatrix, tol: &Tolerance) -> Result<SpectralDecomposition> {
    h.require_hermitian(tol.residual_tol)?;
    let n = h.dim();
    let sym = h.hermitian_part();
    let eig = SymmetricEigen::new(sym.into_inner());

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let scale = eigenvalues.iter().map(|x| x.abs()).fold(1.0, f64::max);
    let gap = tol.rank_tol * scale;

    let mut clusters = Vec::new();
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && eigenvalues[end] - eigenvalues[end - 1] <= gap {
            end += 1;
        }
        let members = &order[start..end];
        let mut projection = ComplexMatrix::zeros(n);
        for &k in members {
            let v: CVector = eig.eigenvectors.column(k).into_owned();
            projection = &projection + &ComplexMatrix::outer(&v, &v);
        }
        let basis = deterministic_basis(&projection, members.len());
        let projection = basis
            .iter()
            .fold(ComplexMatrix::zeros(n), |acc, v| &acc + &ComplexMatrix::outer(v, v));
        let value = eigenvalues[start..end].iter().sum::<f64>() / (end - start) as f64;
        clusters.push(EigenCluster {
            value,
            multiplicity: end - start,
            projection,
            basis,
        });
        start = end;
    }

    Ok(SpectralDecomposition { eigenvalues, clusters })
}

/// Projects `e_0, e_1, ...` onto `ran P` in index order, accepting a vector
/// only when its squared residual is at least `1/(2n)`. The trace argument
/// guarantees `rank` vectors are accepted in a single pass.
pub(crate) fn deterministic_basis(p: &ComplexMatrix, rank: usize) -> Vec<CVector> {
    let n = p.dim();
    let threshold = (1.0 / (2.0 * n as f64)).sqrt();
    let mut basis: Vec<CVector> = Vec::with_capacity(rank);
    for i in 0..n {
        if basis.len() == rank {
            break;
        }
        let v: CVector = p.as_inner().column(i).into_owned();
        let mut w = v.clone();
        for _ in 0..2 {
            for b in &basis {
                let c = b.dotc(&w);
                w.axpy(-c, b, C64::new(1.0, 0.0));
            }
        }
        if w.norm() >= threshold {
            gram_schmidt_push(&mut basis, &v, 0.0);
        }
    }
    basis
}

/// `exp(iH)` through the spectral decomposition.
pub fn unitary_from_hermitian(h: &ComplexMatrix, tol: &Tolerance) -> Result<ComplexMatrix> {
    let sd = hermitian_spectral(h, tol)?;
    Ok(sd.map(|x| C64::new(0.0, x).exp()))
}

#[cfg(test)]
mod tests {
    use super::super::pauli;
    use super::*;
    use std::f64::consts::PI;

    fn tol() -> Tolerance {
        Tolerance::for_dim(3)
    }

    /// Independent oracle: truncated power series of exp(iH).
    fn exp_i_series(h: &ComplexMatrix, terms: usize) -> ComplexMatrix {
        let ih = h.scale(C64::new(0.0, 1.0));
        let mut term = ComplexMatrix::identity(h.dim());
        let mut sum = term.clone();
        for k in 1..terms {
            term = (&term * &ih).scale_real(1.0 / k as f64);
            sum = &sum + &term;
        }
        sum
    }

    #[test]
    fn degenerate_diagonal_clusters() {
        let sd = hermitian_spectral(&ComplexMatrix::diag_real(&[1.0, 1.0, 2.0]), &tol()).unwrap();
        assert_eq!(sd.clusters.len(), 2);
        assert_eq!(sd.clusters[0].multiplicity, 2);
        assert!((sd.clusters[0].value - 1.0).abs() < 1e-12);
        assert_eq!(sd.clusters[1].multiplicity, 1);
        assert!((sd.clusters[1].value - 2.0).abs() < 1e-12);
        // deterministic basis is the standard one here
        assert!((sd.clusters[0].basis[0][0].norm() - 1.0).abs() < 1e-12);
        assert!((sd.clusters[0].basis[1][1].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pauli_x_eigenprojections() {
        let sd = hermitian_spectral(&pauli::x(), &tol()).unwrap();
        assert_eq!(sd.clusters.len(), 2);
        let id = ComplexMatrix::identity(2);
        let minus = (&id - &pauli::x()).scale_real(0.5);
        let plus = (&id + &pauli::x()).scale_real(0.5);
        assert!((sd.clusters[0].value + 1.0).abs() < 1e-12);
        assert!((&sd.clusters[0].projection - &minus).frobenius_norm() < 1e-12);
        assert!((&sd.clusters[1].projection - &plus).frobenius_norm() < 1e-12);
    }

    #[test]
    fn maximally_mixed_single_cluster() {
        let sd = hermitian_spectral(&ComplexMatrix::diag_real(&[0.5, 0.5]), &tol()).unwrap();
        assert_eq!(sd.clusters.len(), 1);
        assert_eq!(sd.clusters[0].multiplicity, 2);
        assert!((&sd.clusters[0].projection - &ComplexMatrix::identity(2)).frobenius_norm() < 1e-12);
    }

    #[test]
    fn rejects_non_hermitian() {
        let a = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        assert!(matches!(hermitian_spectral(&a, &tol()), Err(crate::Error::NotHermitian { .. })));
        assert!(unitary_from_hermitian(&a, &tol()).is_err());
    }

    #[test]
    fn exponential_examples() {
        let t = tol();
        let u = unitary_from_hermitian(&ComplexMatrix::zeros(2), &t).unwrap();
        assert!((&u - &ComplexMatrix::identity(2)).frobenius_norm() < 1e-14);

        let u = unitary_from_hermitian(&ComplexMatrix::diag_real(&[PI, 0.0]), &t).unwrap();
        assert!((&u - &ComplexMatrix::diag_real(&[-1.0, 1.0])).frobenius_norm() < 1e-14);

        let h = pauli::x().scale_real(PI / 2.0);
        let u = unitary_from_hermitian(&h, &t).unwrap();
        let oracle = exp_i_series(&h, 40);
        assert!((&u - &oracle).frobenius_norm() < 1e-12);
        let expected = pauli::x().scale(C64::new(0.0, 1.0));
        assert!((&oracle - &expected).frobenius_norm() < 1e-12);
    }
}
