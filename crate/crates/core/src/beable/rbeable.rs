use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::closure_subspace;
use crate::algebra::{
    commutant, extend_to_maximal_abelian, generate_star_algebra, is_abelian, GeneratorSet, OperatorAlgebra,
};
use crate::matcore::{unitary_from_hermitian, CVector, ComplexMatrix, Subspace, Tolerance};
use crate::states::State;
use crate::{Error, Result};

/// Which uniqueness statement, if any, pins down the maximal algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Uniqueness {
    /// The state commutes with the privileged family.
    UniqueCommuting,
    /// The state is a vector state.
    UniqueVectorState,
    /// Neither applies; the abelian part depends on a choice.
    NonUniqueChoice,
}

impl Uniqueness {
    pub fn as_str(self) -> &'static str {
        match self {
            Uniqueness::UniqueCommuting => "UniqueCommuting",
            Uniqueness::UniqueVectorState => "UniqueVectorState",
            Uniqueness::NonUniqueChoice => "NonUniqueChoice",
        }
    }
}

/// A maximal beable algebra for a privileged family, `L(S⊥) ⊕ M`.
#[derive(Debug, Clone)]
pub struct RBeableResult {
    /// `S = [R″ · ran K]`.
    pub privileged_subspace: Subspace,
    pub algebra: OperatorAlgebra,
    pub uniqueness: Uniqueness,
    /// `M`, in the coordinates of the privileged subspace's basis.
    pub abelian_part: OperatorAlgebra,
}

/// `[R″ · ran K]`, the smallest `R`-invariant subspace containing `ran K`.
pub fn privileged_subspace(r: &GeneratorSet, rho: &State, tol: &Tolerance) -> Result<Subspace> {
    check_dims(r, rho)?;
    let vn = generate_star_algebra(r, tol)?;
    closure_subspace(&vn, rho.range(), tol)
}

fn check_dims(r: &GeneratorSet, rho: &State) -> Result<()> {
    if r.ambient_dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: r.ambient_dim(),
        });
    }
    Ok(())
}

fn state_commutation(r: &GeneratorSet, rho: &State) -> (f64, Option<usize>) {
    let mut worst = 0.0;
    let mut index = None;
    for (i, g) in r.generators().iter().enumerate() {
        let c = g.commutator(rho.density()).frobenius_norm();
        if c > worst {
            worst = c;
            index = Some(i);
        }
    }
    (worst, index)
}

fn with_state(r: &GeneratorSet, rho: &State) -> Result<GeneratorSet> {
    r.with(std::slice::from_ref(rho.density()))
}

/// The unique maximal algebra when `K` commutes with every generator:
/// `L(S⊥) ⊕ vN(R, K) P_S`.
pub fn rbeable_commuting_state(r: &GeneratorSet, rho: &State, tol: &Tolerance) -> Result<RBeableResult> {
    check_dims(r, rho)?;
    r.require_mutually_commuting(tol)?;
    let (worst, index) = state_commutation(r, rho);
    if let Some(index) = index.filter(|_| worst > tol.residual_tol) {
        return Err(Error::NotCommutingWithState { index, residual: worst });
    }
    let s = privileged_subspace(r, rho, tol)?;
    let m = generate_star_algebra(&with_state(r, rho)?, tol)?.compress_to(&s, tol)?;
    let algebra = OperatorAlgebra::block_sum(&s.complement(), &s, &m)?;
    Ok(RBeableResult {
        privileged_subspace: s,
        algebra,
        uniqueness: Uniqueness::UniqueCommuting,
        abelian_part: m,
    })
}

/// The unique maximal algebra for a vector state: `L(S⊥) ⊕ vN(R) P_S`
/// with `S = [R″ v]`.
pub fn rbeable_vector_state(r: &GeneratorSet, v: &CVector, tol: &Tolerance) -> Result<RBeableResult> {
    let rho = State::from_vector(v, tol)?;
    check_dims(r, &rho)?;
    r.require_mutually_commuting(tol)?;
    let vn = generate_star_algebra(r, tol)?;
    let s = closure_subspace(&vn, rho.range(), tol)?;
    let m = vn.compress_to(&s, tol)?;
    let algebra = OperatorAlgebra::block_sum(&s.complement(), &s, &m)?;
    Ok(RBeableResult {
        privileged_subspace: s,
        algebra,
        uniqueness: Uniqueness::UniqueVectorState,
        abelian_part: m,
    })
}

/// Three-way verdict of the fast membership test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    Member,
    NonMember,
    Inconclusive,
}

impl Membership {
    pub fn as_str(self) -> &'static str {
        match self {
            Membership::Member => "Member",
            Membership::NonMember => "NonMember",
            Membership::Inconclusive => "Inconclusive",
        }
    }
}

/// Sufficient conditions for membership of a Hermitian `A` in the maximal
/// algebra of a vector state.
///
/// `Member` when `A` commutes with every generator and `Av ∈ S`;
/// `NonMember` when `A` does not leave `S = [R″ v]` invariant;
/// `Inconclusive` otherwise.
pub fn membership_fast(a: &ComplexMatrix, r: &GeneratorSet, v: &CVector, tol: &Tolerance) -> Result<Membership> {
    a.require_hermitian(tol.residual_tol)?;
    let rho = State::from_vector(v, tol)?;
    check_dims(r, &rho)?;
    a.check_dim(rho.density())?;
    let s = privileged_subspace(r, &rho, tol)?;
    let scale = a.frobenius_norm();
    let commutes = r
        .generators()
        .iter()
        .all(|g| tol.accepts(a.commutator(g).frobenius_norm(), scale * g.frobenius_norm()));
    if commutes && s.contains_vector(&a.apply(v), tol) {
        return Ok(Membership::Member);
    }
    if !tol.accepts(s.invariance_residual(a), scale) {
        return Ok(Membership::NonMember);
    }
    Ok(Membership::Inconclusive)
}

fn admissible_extras(
    extra: &GeneratorSet,
    s: &Subspace,
    seed: &OperatorAlgebra,
    ambient: &OperatorAlgebra,
    tol: &Tolerance,
) -> Result<Vec<ComplexMatrix>> {
    let p = s.projection();
    let mut out: Vec<ComplexMatrix> = Vec::with_capacity(extra.len());
    for (index, x) in extra.generators().iter().enumerate() {
        let scale = x.frobenius_norm();
        let outside = (x - &(&(p * x) * p)).frobenius_norm();
        if !tol.accepts(outside, scale) {
            return Err(Error::ExtraNotAdmissible {
                index,
                reason: format!("not supported on the privileged subspace (residual {outside:e})"),
            });
        }
        let xs = s.compress(x);
        let (inside, r) = ambient.membership(&xs, tol);
        if !inside {
            return Err(Error::ExtraNotAdmissible {
                index,
                reason: format!("not in the algebra generated by the family and the state (residual {r:e})"),
            });
        }
        for b in seed.basis().iter().chain(out.iter()) {
            let c = xs.commutator(b).frobenius_norm();
            if !tol.accepts(c, scale.max(b.frobenius_norm())) {
                return Err(Error::ExtraNotAdmissible {
                    index,
                    reason: format!("does not commute with the privileged algebra (residual {c:e})"),
                });
            }
        }
        out.push(xs);
    }
    Ok(out)
}

/// A maximal beable algebra containing `R` and invariant under the
/// symmetries of `R` and `ρ`: `L(S⊥) ⊕ M` with
/// `vN(R) P_S ⊆ M ⊆ vN(R, K) P_S` maximal abelian.
///
/// `extra_commuting` selects among the non-unique choices of `M`; its
/// elements must live on `S`, lie in `vN(R, K) P_S` and commute with
/// `vN(R) P_S` and with each other.
pub fn maximal_rbeable(
    r: &GeneratorSet,
    rho: &State,
    extra_commuting: Option<&GeneratorSet>,
    tol: &Tolerance,
) -> Result<RBeableResult> {
    check_dims(r, rho)?;
    r.require_mutually_commuting(tol)?;
    let s = privileged_subspace(r, rho, tol)?;
    let ambient = generate_star_algebra(&with_state(r, rho)?, tol)?.compress_to(&s, tol)?;
    let mut seed = generate_star_algebra(r, tol)?.compress_to(&s, tol)?;
    if let Some(extra) = extra_commuting {
        let xs = admissible_extras(extra, &s, &seed, &ambient, tol)?;
        if !xs.is_empty() {
            let mut gens = seed.basis().to_vec();
            gens.extend(xs);
            seed = generate_star_algebra(gens.as_slice(), tol)?;
        }
    }
    debug_assert!(is_abelian(&seed, tol).abelian);
    let m = extend_to_maximal_abelian(&seed, &ambient, tol)?;
    let algebra = OperatorAlgebra::block_sum(&s.complement(), &s, &m)?;

    let (worst, _) = state_commutation(r, rho);
    let uniqueness = if worst <= tol.residual_tol {
        Uniqueness::UniqueCommuting
    } else if rho.is_pure() {
        Uniqueness::UniqueVectorState
    } else {
        Uniqueness::NonUniqueChoice
    };
    Ok(RBeableResult {
        privileged_subspace: s,
        algebra,
        uniqueness,
        abelian_part: m,
    })
}

/// Outcome of the randomized conjugation-invariance check.
#[derive(Debug, Clone)]
pub struct DefInvariance {
    pub holds: bool,
    /// Largest span defect between `U B Uᴴ` and `B` over the draws made.
    pub worst_residual: f64,
    /// The first unitary that moved `B`, if any.
    pub witness: Option<ComplexMatrix>,
    pub trials_run: usize,
}

/// Draws `U = exp(iH)` with `H` a standard-normal combination of a
/// Hermitian basis of `(R ∪ {K})′` and checks `span(U B Uᴴ) = span(B)`.
/// Stops at the first failure.
pub fn verify_def_invariance(
    b: &OperatorAlgebra,
    r: &GeneratorSet,
    rho: &State,
    trials: usize,
    seed: u64,
    tol: &Tolerance,
) -> Result<DefInvariance> {
    check_dims(r, rho)?;
    let sym = commutant(&with_state(r, rho)?, tol)?;
    let herm = sym.hermitian_basis(tol);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for trial in 0..trials {
        let mut h = ComplexMatrix::zeros(rho.dim());
        for x in &herm {
            let g: f64 = StandardNormal.sample(&mut rng);
            h = &h + &x.scale_real(g);
        }
        let u = unitary_from_hermitian(&h, tol)?;
        let defect = b.conjugate_by(&u).span_defect(b);
        worst = worst.max(defect);
        if defect > tol.residual_tol {
            return Ok(DefInvariance {
                holds: false,
                worst_residual: worst,
                witness: Some(u),
                trials_run: trial + 1,
            });
        }
    }
    Ok(DefInvariance {
        holds: true,
        worst_residual: worst,
        witness: None,
        trials_run: trials,
    })
}
