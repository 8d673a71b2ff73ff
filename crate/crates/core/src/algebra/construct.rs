use nalgebra::DMatrix;

use super::{GeneratorSet, OperatorAlgebra};
use crate::matcore::{gram_schmidt_push, null_space, CVector, ComplexMatrix, Tolerance, C64};
use crate::Result;

/// Anything that can stand in for a generating family.
pub trait Generators {
    fn ambient_dim(&self) -> usize;
    fn generating_matrices(&self) -> Vec<ComplexMatrix>;
}

impl Generators for GeneratorSet {
    fn ambient_dim(&self) -> usize {
        GeneratorSet::ambient_dim(self)
    }
    fn generating_matrices(&self) -> Vec<ComplexMatrix> {
        self.generators().to_vec()
    }
}

impl Generators for OperatorAlgebra {
    fn ambient_dim(&self) -> usize {
        OperatorAlgebra::ambient_dim(self)
    }
    fn generating_matrices(&self) -> Vec<ComplexMatrix> {
        self.basis().to_vec()
    }
}

impl Generators for [ComplexMatrix] {
    fn ambient_dim(&self) -> usize {
        self.first().map(|m| m.dim()).unwrap_or(0)
    }
    fn generating_matrices(&self) -> Vec<ComplexMatrix> {
        self.to_vec()
    }
}

/// Generators together with the adjoints of the non-Hermitian ones.
fn star_closed(gens: &[ComplexMatrix], tol: &Tolerance) -> Vec<ComplexMatrix> {
    let mut out = Vec::with_capacity(2 * gens.len());
    for g in gens {
        out.push(g.clone());
        if !g.is_hermitian(tol.residual_tol * 1e-3) {
            out.push(g.adjoint());
        }
    }
    out
}

/// Smallest unital *-algebra containing the generators.
///
/// Seeds the span with `I`, the generators and their adjoints, then adds
/// products of basis pairs until the dimension stops growing. Only pairs
/// involving newly added elements are formed after the first round.
pub fn generate_star_algebra<G: Generators + ?Sized>(gens: &G, tol: &Tolerance) -> Result<OperatorAlgebra> {
    let n = gens.ambient_dim();
    let max_dim = n * n;
    let mut seed = vec![ComplexMatrix::identity(n)];
    seed.extend(star_closed(&gens.generating_matrices(), tol));

    let mut flat: Vec<CVector> = Vec::new();
    let mut mats: Vec<ComplexMatrix> = Vec::new();
    for m in &seed {
        if m.dim() != n {
            return Err(crate::Error::DimensionMismatch {
                expected: n,
                found: m.dim(),
            });
        }
        if flat.len() < max_dim && gram_schmidt_push(&mut flat, &m.flatten(), tol.rank_tol) {
            mats.push(ComplexMatrix::unflatten(n, flat.last().unwrap()));
        }
    }

    let mut done = 0;
    while done < mats.len() && flat.len() < max_dim {
        let end = mats.len();
        'outer: for i in 0..end {
            for j in 0..end {
                if i < done && j < done {
                    continue;
                }
                let p = &mats[i] * &mats[j];
                if gram_schmidt_push(&mut flat, &p.flatten(), tol.rank_tol) {
                    mats.push(ComplexMatrix::unflatten(n, flat.last().unwrap()));
                    if flat.len() == max_dim {
                        break 'outer;
                    }
                }
            }
        }
        done = end;
    }

    Ok(OperatorAlgebra::from_orthonormal_flat(n, flat))
}

/// Row block of the linear map `X ↦ AX − XA` on column-major `vec(X)`.
fn commutator_block(a: &ComplexMatrix) -> DMatrix<C64> {
    let n = a.dim();
    let id = DMatrix::<C64>::identity(n, n);
    id.kronecker(a.as_inner()) - a.as_inner().transpose().kronecker(&id)
}

/// `{X : XA = AX for every generator A and its adjoint}`.
///
/// All constraints are stacked into one linear system whose null space is
/// read off from its singular values.
pub fn commutant<G: Generators + ?Sized>(gens: &G, tol: &Tolerance) -> Result<OperatorAlgebra> {
    let n = gens.ambient_dim();
    let constraints = star_closed(&gens.generating_matrices(), tol);
    if constraints.is_empty() {
        return Ok(OperatorAlgebra::full(n));
    }
    let nn = n * n;
    let mut stacked = DMatrix::<C64>::zeros(nn * constraints.len(), nn);
    for (k, a) in constraints.iter().enumerate() {
        stacked.view_mut((k * nn, 0), (nn, nn)).copy_from(&commutator_block(a));
    }
    let kernel = null_space(&stacked, tol.rank_tol);
    Ok(OperatorAlgebra::from_orthonormal_flat(n, kernel))
}

/// `S''`, which in finite dimension equals the generated *-algebra.
pub fn double_commutant<G: Generators + ?Sized>(gens: &G, tol: &Tolerance) -> Result<OperatorAlgebra> {
    let first = commutant(gens, tol)?;
    commutant(&first, tol)
}

/// `{X ∈ ambient : [X, S] = 0 for all S in set}`, solved over the
/// coordinates of the ambient basis. `set` should be adjoint-closed.
pub fn relative_commutant(set: &[ComplexMatrix], ambient: &OperatorAlgebra, tol: &Tolerance) -> Result<OperatorAlgebra> {
    let n = ambient.ambient_dim();
    for s in set {
        if s.dim() != n {
            return Err(crate::Error::DimensionMismatch {
                expected: n,
                found: s.dim(),
            });
        }
    }
    let d = ambient.dim();
    if set.is_empty() || d == 0 {
        return Ok(ambient.clone());
    }
    let nn = n * n;
    let mut system = DMatrix::<C64>::zeros(nn * set.len(), d);
    for (j, s) in set.iter().enumerate() {
        for (k, b) in ambient.basis().iter().enumerate() {
            let col = b.commutator(s).flatten();
            system.view_mut((j * nn, k), (nn, 1)).copy_from(&col);
        }
    }
    let kernel = null_space(&system, tol.rank_tol);
    let flat: Vec<CVector> = kernel.iter().map(|c| ambient.frame() * c).collect();
    Ok(OperatorAlgebra::from_orthonormal_flat(n, flat))
}

/// Intersection of two spans, from the null space of `[Q_a | −Q_b]`.
pub fn intersect(a: &OperatorAlgebra, b: &OperatorAlgebra, tol: &Tolerance) -> Result<OperatorAlgebra> {
    if a.ambient_dim() != b.ambient_dim() {
        return Err(crate::Error::DimensionMismatch {
            expected: a.ambient_dim(),
            found: b.ambient_dim(),
        });
    }
    let n = a.ambient_dim();
    let (da, db) = (a.dim(), b.dim());
    if da == 0 || db == 0 {
        return Ok(OperatorAlgebra::from_orthonormal_flat(n, Vec::new()));
    }
    let mut system = DMatrix::<C64>::zeros(n * n, da + db);
    system.view_mut((0, 0), (n * n, da)).copy_from(a.frame());
    system.view_mut((0, da), (n * n, db)).copy_from(&(-b.frame()));
    let kernel = null_space(&system, tol.rank_tol);
    let mut flat = Vec::new();
    for c in kernel {
        let x = a.frame() * c.rows(0, da);
        gram_schmidt_push(&mut flat, &x, tol.rank_tol);
    }
    Ok(OperatorAlgebra::from_orthonormal_flat(n, flat))
}

/// `A ∩ A'`.
pub fn center(a: &OperatorAlgebra, tol: &Tolerance) -> Result<OperatorAlgebra> {
    let comm = commutant(a, tol)?;
    intersect(a, &comm, tol)
}
