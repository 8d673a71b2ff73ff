//! Seeded samplers for matrices, states and algebras.
//!
//! Every sampler takes an explicit generator so runs are reproducible from a
//! single `u64` seed via [`seeded`].

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use rand_distr::{Distribution, StandardNormal};

use crate::algebra::{GeneratorSet, OperatorAlgebra};
use crate::matcore::{CVector, ComplexMatrix, Subspace, Tolerance, C64};
use crate::states::State;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im)
}

pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, |_, _| gaussian(rng))
}

/// `(G + Gᴴ)/2` for a complex Gaussian `G`.
pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    ginibre(rng, n).hermitian_part()
}

/// Haar-distributed unitary from the QR factorization of a Gaussian matrix,
/// with the phases of `R`'s diagonal absorbed into `Q`.
pub fn unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let qr = ginibre(rng, n).into_inner().qr();
    let (mut q, r) = qr.unpack();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        let mut col = q.column_mut(j);
        col *= phase;
    }
    ComplexMatrix::new(q).expect("finite square factor")
}

pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CVector {
    let v = CVector::from_fn(n, |_, _| gaussian(rng));
    v.normalize()
}

/// Density operator of the given rank with random eigenvectors and
/// weights bounded away from zero.
pub fn density<R: Rng + ?Sized>(rng: &mut R, n: usize, rank: usize) -> ComplexMatrix {
    let rank = rank.clamp(1, n);
    let u = unitary(rng, n);
    let weights: Vec<f64> = (0..rank).map(|_| rng.random_range(0.1..1.0)).collect();
    let total: f64 = weights.iter().sum();
    let mut k = ComplexMatrix::zeros(n);
    for (j, w) in weights.iter().enumerate() {
        let v: CVector = u.as_inner().column(j).into_owned();
        k = &k + &ComplexMatrix::projector(&v).scale_real(w / total);
    }
    k.hermitian_part()
}

pub fn state<R: Rng + ?Sized>(rng: &mut R, n: usize, rank: usize, tol: &Tolerance) -> State {
    State::from_density(&density(rng, n, rank), tol).expect("sampled density is a valid state")
}

/// State whose density is supported inside `support`.
pub fn state_on<R: Rng + ?Sized>(rng: &mut R, support: &Subspace, tol: &Tolerance) -> State {
    let k = support.dim();
    let rank = rng.random_range(1..=k);
    let inner = density(rng, k, rank);
    State::from_density(&support.embed(&inner).hermitian_part(), tol).expect("embedded density is a valid state")
}

pub fn projection<R: Rng + ?Sized>(rng: &mut R, n: usize, rank: usize) -> ComplexMatrix {
    let u = unitary(rng, n);
    let mut p = ComplexMatrix::zeros(n);
    for j in 0..rank.min(n) {
        let v: CVector = u.as_inner().column(j).into_owned();
        p = &p + &ComplexMatrix::projector(&v);
    }
    p
}

/// Random composition of `n` into positive parts.
pub fn partition<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut parts = Vec::new();
    let mut left = n;
    while left > 0 {
        let k = rng.random_range(1..=left);
        parts.push(k);
        left -= k;
    }
    parts.shuffle(rng);
    parts
}

fn block_ranges(parts: &[usize]) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(parts.len());
    let mut start = 0;
    for &k in parts {
        out.push((start..start + k).collect());
        start += k;
    }
    out
}

/// Abelian algebra spanned by the spectral projections of a random
/// partition of a random orthonormal basis.
pub fn abelian_algebra<R: Rng + ?Sized>(rng: &mut R, n: usize) -> OperatorAlgebra {
    let u = unitary(rng, n);
    let parts = partition(rng, n);
    let mut projections = Vec::with_capacity(parts.len());
    for block in block_ranges(&parts) {
        let mut p = ComplexMatrix::zeros(n);
        for j in block {
            let v: CVector = u.as_inner().column(j).into_owned();
            p = &p + &ComplexMatrix::projector(&v);
        }
        projections.push(p);
    }
    let tol = Tolerance::for_dim(n);
    OperatorAlgebra::new(n, &projections, &tol).expect("spectral projections span an algebra")
}

/// `U (M_{k₁} ⊕ … ⊕ M_{k_m}) Uᴴ` for a random partition and random unitary.
/// Returns the algebra and the rotated block subspaces.
pub fn block_algebra<R: Rng + ?Sized>(rng: &mut R, n: usize) -> (OperatorAlgebra, Vec<Subspace>) {
    let u = unitary(rng, n);
    let parts = partition(rng, n);
    let mut basis = Vec::new();
    let mut blocks = Vec::new();
    for block in block_ranges(&parts) {
        let vecs: Vec<CVector> = block.iter().map(|&j| u.as_inner().column(j).into_owned()).collect();
        for a in &vecs {
            for b in &vecs {
                basis.push(ComplexMatrix::outer(a, b));
            }
        }
        blocks.push(Subspace::from_orthonormal(n, vecs));
    }
    (OperatorAlgebra::from_orthonormal(n, basis), blocks)
}

/// Hermitian generators sharing a random block structure, so the generated
/// algebra is often a proper subalgebra.
pub fn generator_set<R: Rng + ?Sized>(rng: &mut R, n: usize, count: usize) -> GeneratorSet {
    let u = unitary(rng, n);
    let parts = partition(rng, n);
    let ranges = block_ranges(&parts);
    let mut gens = Vec::with_capacity(count);
    for _ in 0..count {
        let mut d = ComplexMatrix::zeros(n).into_inner();
        for block in &ranges {
            let h = hermitian(rng, block.len());
            for (a, &i) in block.iter().enumerate() {
                for (b, &j) in block.iter().enumerate() {
                    d[(i, j)] = h.get(a, b);
                }
            }
        }
        let d = ComplexMatrix::new(d).expect("finite");
        gens.push(&(&u * &d) * &u.adjoint());
    }
    GeneratorSet::new(n, gens, "random").expect("shared dimension")
}

/// A block algebra with a state that is beable for it about half the time:
/// the state is either supported on the one-dimensional blocks or generic.
pub fn algebra_state_pair<R: Rng + ?Sized>(rng: &mut R, n: usize, tol: &Tolerance) -> (OperatorAlgebra, State) {
    let (alg, blocks) = block_algebra(rng, n);
    let singles: Vec<&Subspace> = blocks.iter().filter(|b| b.dim() == 1).collect();
    if !singles.is_empty() && rng.random_bool(0.5) {
        let vecs: Vec<CVector> = singles.iter().map(|b| b.basis()[0].clone()).collect();
        let support = Subspace::from_orthonormal(n, vecs);
        let st = state_on(rng, &support, tol);
        return (alg, st);
    }
    let rank = rng.random_range(1..=n);
    (alg, state(rng, n, rank, tol))
}
