//! Density-operator states and their dispersion-free structure.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::algebra::{is_abelian, minimal_projections, OperatorAlgebra};
use crate::matcore::{hermitian_spectral, null_space, CVector, ComplexMatrix, SpectralDecomposition, Subspace, Tolerance, C64};
use crate::{Error, Result};

/// A state `ρ(A) = tr(KA)` given by a density operator `K`.
#[derive(Debug, Clone)]
pub struct State {
    density: ComplexMatrix,
    spectral: SpectralDecomposition,
    sqrt: ComplexMatrix,
    sqrt_factor: DMatrix<C64>,
    range: Subspace,
    vector: Option<CVector>,
}

impl State {
    /// Validates `K`: Hermitian, eigenvalues `≥ −rank_tol` (then clamped to
    /// zero) and unit trace within `residual_tol`.
    pub fn from_density(k: &ComplexMatrix, tol: &Tolerance) -> Result<Self> {
        let spectral = hermitian_spectral(k, tol)?;
        let min = spectral.eigenvalues.first().copied().unwrap_or(0.0);
        if min < -tol.rank_tol {
            return Err(Error::InvalidState(format!(
                "density is not positive semidefinite (eigenvalue {min:e})"
            )));
        }
        let trace = k.trace().re;
        if (trace - 1.0).abs() > tol.residual_tol {
            return Err(Error::InvalidState(format!("density trace is {trace}, expected 1")));
        }
        let n = k.dim();
        let mut sqrt = ComplexMatrix::zeros(n);
        let mut range = Vec::new();
        let mut factor_cols = Vec::new();
        for c in &spectral.clusters {
            if c.value > tol.rank_tol {
                sqrt = &sqrt + &c.projection.scale_real(c.value.sqrt());
                range.extend(c.basis.iter().cloned());
                factor_cols.extend(c.basis.iter().map(|v| v * C64::new(c.value.sqrt(), 0.0)));
            }
        }
        let sqrt_factor = if factor_cols.is_empty() {
            DMatrix::zeros(n, 0)
        } else {
            DMatrix::from_columns(&factor_cols)
        };
        Ok(Self {
            density: k.hermitian_part(),
            spectral,
            sqrt,
            sqrt_factor,
            range: Subspace::from_orthonormal(n, range),
            vector: None,
        })
    }

    /// The vector state `ω_v(A) = ⟨Av, v⟩`.
    pub fn from_vector(v: &CVector, tol: &Tolerance) -> Result<Self> {
        let norm = v.norm();
        if (norm - 1.0).abs() > tol.residual_tol {
            return Err(Error::NotUnitVector { norm });
        }
        let mut st = Self::from_density(&ComplexMatrix::projector(v), tol)?;
        st.vector = Some(v.clone());
        Ok(st)
    }

    /// `I/n`.
    pub fn maximally_mixed(n: usize) -> Self {
        let k = ComplexMatrix::identity(n).scale_real(1.0 / n as f64);
        Self::from_density(&k, &Tolerance::for_dim(n)).expect("I/n is a state")
    }

    pub fn dim(&self) -> usize {
        self.density.dim()
    }

    pub fn density(&self) -> &ComplexMatrix {
        &self.density
    }

    /// `K^{1/2}` with negative eigenvalues clamped to zero.
    pub fn sqrt_density(&self) -> &ComplexMatrix {
        &self.sqrt
    }

    /// `F = U Λ^{1/2}` over the range, an `n × rank` factor with `F Fᴴ = K`.
    /// `‖X K^{1/2}‖_F = ‖X F‖_F` for every `X`.
    pub fn sqrt_factor(&self) -> &DMatrix<C64> {
        &self.sqrt_factor
    }

    pub fn spectral(&self) -> &SpectralDecomposition {
        &self.spectral
    }

    /// Closure of the range of `K`.
    pub fn range(&self) -> &Subspace {
        &self.range
    }

    pub fn rank(&self) -> usize {
        self.range.dim()
    }

    pub fn is_pure(&self) -> bool {
        self.rank() == 1
    }

    /// The defining unit vector for states built with [`from_vector`](Self::from_vector).
    pub fn vector(&self) -> Option<&CVector> {
        self.vector.as_ref()
    }

    /// A unit vector spanning the range, for any rank-one state.
    pub fn pure_vector(&self) -> Option<CVector> {
        match &self.vector {
            Some(v) => Some(v.clone()),
            None if self.is_pure() => Some(self.range.basis()[0].clone()),
            None => None,
        }
    }

    pub fn expectation(&self, a: &ComplexMatrix) -> Result<C64> {
        self.density.check_dim(a)?;
        Ok((&self.density * a).trace())
    }

    /// `‖A K^{1/2}‖_F`, which vanishes exactly when `ρ(AᴴA) = 0`.
    pub fn left_kernel_residual(&self, a: &ComplexMatrix) -> f64 {
        (a.as_inner() * &self.sqrt_factor).norm()
    }
}

pub fn expectation(rho: &State, a: &ComplexMatrix) -> Result<C64> {
    rho.expectation(a)
}

/// Left-kernel membership with its residual `‖A K^{1/2}‖_F`.
pub fn in_left_kernel(rho: &State, a: &ComplexMatrix, tol: &Tolerance) -> (bool, f64) {
    let r = rho.left_kernel_residual(a);
    (r <= tol.residual_tol, r)
}

/// `tr(MX)` for every `X` as a dot product with `vec(Xᵀ)`.
fn trace_pairing(m: &ComplexMatrix, x: &ComplexMatrix) -> C64 {
    m.as_inner().component_mul(&x.as_inner().transpose()).sum()
}

/// Elements `A` of `ambient` with `ω(AX) = ω(A)ω(X)` and `ω(XA) = ω(X)ω(A)`
/// for every `X` in `ambient`.
///
/// Unknown coordinates of `A` in the ambient basis solve a homogeneous
/// system with two rows per ambient basis element.
pub fn definite_algebra(rho: &State, ambient: &OperatorAlgebra, tol: &Tolerance) -> Result<OperatorAlgebra> {
    let n = ambient.ambient_dim();
    if rho.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: rho.dim(),
        });
    }
    let basis = ambient.basis();
    let d = basis.len();
    let k = rho.density();
    let means: Vec<C64> = basis.iter().map(|b| trace_pairing(k, b)).collect();
    let left: Vec<ComplexMatrix> = basis.iter().map(|b| k * b).collect();
    let right: Vec<ComplexMatrix> = basis.iter().map(|b| b * k).collect();

    let mut system = DMatrix::<C64>::zeros(2 * d, d);
    for (j, x) in basis.iter().enumerate() {
        for col in 0..d {
            system[(2 * j, col)] = trace_pairing(&left[col], x) - means[col] * means[j];
            system[(2 * j + 1, col)] = trace_pairing(&right[col], x) - means[col] * means[j];
        }
    }
    let kernel = null_space(&system, tol.rank_tol);
    let mats: Vec<ComplexMatrix> = kernel
        .iter()
        .map(|c| ComplexMatrix::unflatten(n, &(ambient.frame() * c)))
        .collect();
    OperatorAlgebra::span(n, &mats, tol)
}

/// `‖KA − ρ(A)K‖_F + ‖AK − ρ(A)K‖_F`, zero exactly when `A` lies in the
/// definite algebra of `ρ` over the full matrix algebra.
pub fn definiteness_residual(rho: &State, a: &ComplexMatrix) -> f64 {
    let k = rho.density();
    let mean = trace_pairing(k, a);
    let km = k.scale(mean);
    (&(k * a) - &km).frobenius_norm() + (&(a * k) - &km).frobenius_norm()
}

/// Checks that the Hermitian elements of the definite algebra are exactly the
/// Hermitian `H` in `ambient` with `ρ(H²) = ρ(H)²`.
///
/// Forward direction on a Hermitian basis of the definite algebra and on
/// random combinations of it; converse on a Hermitian basis of `ambient`
/// and on random Hermitian combinations, each classified both ways.
pub fn kadison_singer_definite_set_check(
    rho: &State,
    ambient: &OperatorAlgebra,
    samples: usize,
    seed: u64,
    tol: &Tolerance,
) -> Result<bool> {
    let d = definite_algebra(rho, ambient, tol)?;
    let dispersion = |h: &ComplexMatrix| -> Result<f64> {
        let m = rho.expectation(h)?.re;
        let m2 = rho.expectation(&(h * h))?.re;
        Ok((m2 - m * m).abs())
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut combos = |basis: &[ComplexMatrix]| -> Vec<ComplexMatrix> {
        let mut out = basis.to_vec();
        for _ in 0..samples {
            let mut h = ComplexMatrix::zeros(rho.dim());
            for b in basis {
                let g: f64 = StandardNormal.sample(&mut rng);
                h = &h + &b.scale_real(g);
            }
            out.push(h);
        }
        out
    };

    for h in combos(&d.hermitian_basis(tol)) {
        let scale = h.frobenius_norm().powi(2).max(1.0);
        if dispersion(&h)? > tol.residual_tol * scale {
            return Ok(false);
        }
    }
    for h in combos(&ambient.hermitian_basis(tol)) {
        let scale = h.frobenius_norm().powi(2).max(1.0);
        let sharp = dispersion(&h)? <= tol.residual_tol * scale;
        if sharp != d.contains(&h, tol) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `B ⊆ D_ρ` for the definite algebra over all matrices.
pub fn is_dispersion_free_on(rho: &State, b: &OperatorAlgebra, tol: &Tolerance) -> bool {
    b.basis()
        .iter()
        .all(|x| tol.accepts(definiteness_residual(rho, x), x.frobenius_norm()))
}

/// No nonzero `A ∈ B` satisfies `A K^{1/2} = 0`.
pub fn is_faithful_on(rho: &State, b: &OperatorAlgebra, tol: &Tolerance) -> bool {
    let n = rho.dim();
    if b.dim() == 0 {
        return true;
    }
    let cols: Vec<CVector> = b.basis().iter().map(|x| (x * rho.sqrt_density()).flatten()).collect();
    let system = DMatrix::from_columns(&cols);
    debug_assert_eq!(system.nrows(), n * n);
    null_space(&system, tol.rank_tol).is_empty()
}

/// One term `w·ω` of a dispersion-free decomposition over an abelian algebra.
#[derive(Debug, Clone)]
pub struct DispersionFreeComponent {
    pub weight: f64,
    pub support_projection: ComplexMatrix,
    /// The component's value on each basis element of the algebra.
    pub values: Vec<C64>,
}

impl DispersionFreeComponent {
    /// `tr(AP)/tr(P)`, the component's value on an element `A` of the algebra.
    pub fn value_of(&self, a: &ComplexMatrix) -> C64 {
        (a * &self.support_projection).trace() / self.support_projection.trace()
    }
}

/// `ρ|_B = Σ wⱼ ωⱼ` with `ωⱼ` the point evaluation at the j-th minimal
/// projection. Components with weight at most `rank_tol` are dropped.
pub fn dispersion_free_decomposition(
    rho: &State,
    b: &OperatorAlgebra,
    tol: &Tolerance,
) -> Result<Vec<DispersionFreeComponent>> {
    let check = is_abelian(b, tol);
    if !check.abelian {
        return Err(Error::NotAbelian {
            residual: check.worst_residual,
        });
    }
    let mut out = Vec::new();
    for p in minimal_projections(b, tol)? {
        let weight = rho.expectation(&p)?.re;
        if weight <= tol.rank_tol {
            continue;
        }
        let rank = p.trace();
        let values = b.basis().iter().map(|x| (x * &p).trace() / rank).collect();
        out.push(DispersionFreeComponent {
            weight,
            support_projection: p,
            values,
        });
    }
    Ok(out)
}

/// Largest `|Σⱼ wⱼ ωⱼ(A) − ρ(A)|` over the basis of `b`.
pub fn reconstruction_residual(rho: &State, b: &OperatorAlgebra, components: &[DispersionFreeComponent]) -> Result<f64> {
    let mut worst = 0.0f64;
    for (k, x) in b.basis().iter().enumerate() {
        let mix: C64 = components.iter().map(|c| c.values[k] * c.weight).sum();
        worst = worst.max((mix - rho.expectation(x)?).norm());
    }
    Ok(worst)
}

/// Every component's value on every Hermitian basis element `H` of `b` lies
/// within tolerance of an eigenvalue of `H`.
pub fn dispersion_free_values_in_spectrum(
    components: &[DispersionFreeComponent],
    b: &OperatorAlgebra,
    tol: &Tolerance,
) -> Result<bool> {
    for h in b.hermitian_basis(tol) {
        let sd = hermitian_spectral(&h, tol)?;
        for c in components {
            let v = c.value_of(&h);
            let dist = sd
                .eigenvalues
                .iter()
                .map(|&l| (v - C64::new(l, 0.0)).norm())
                .fold(f64::INFINITY, f64::min);
            if !tol.accepts(dist, h.operator_norm()) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
