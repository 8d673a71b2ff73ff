use crate::matcore::{ComplexMatrix, Tolerance, C64};
use crate::{Error, Result};

fn require_hermitian(ms: &[&ComplexMatrix], tol: &Tolerance) -> Result<()> {
    for m in ms {
        m.require_hermitian(tol.residual_tol)?;
    }
    if ms.windows(2).any(|w| w[0].dim() != w[1].dim()) {
        return Err(Error::DimensionMismatch {
            expected: ms[0].dim(),
            found: ms.iter().map(|m| m.dim()).find(|&d| d != ms[0].dim()).unwrap_or(0),
        });
    }
    Ok(())
}

fn jordan_raw(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.anticommutator(b).scale_real(0.5)
}

fn lie_raw(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.commutator(b).scale(C64::new(0.0, 0.5))
}

/// Jordan product `½(AB + BA)`.
pub fn jordan(a: &ComplexMatrix, b: &ComplexMatrix, tol: &Tolerance) -> Result<ComplexMatrix> {
    require_hermitian(&[a, b], tol)?;
    Ok(jordan_raw(a, b))
}

/// Lie product `(i/2)(AB − BA)`.
pub fn lie(a: &ComplexMatrix, b: &ComplexMatrix, tol: &Tolerance) -> Result<ComplexMatrix> {
    require_hermitian(&[a, b], tol)?;
    Ok(lie_raw(a, b))
}

/// `‖(A∘B)∘C − A∘(B∘C) − r((A•C)•B)‖_F`.
pub fn associator_residual(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    c: &ComplexMatrix,
    r: f64,
    tol: &Tolerance,
) -> Result<f64> {
    require_hermitian(&[a, b, c], tol)?;
    let lhs = &jordan_raw(&jordan_raw(a, b), c) - &jordan_raw(a, &jordan_raw(b, c));
    let rhs = lie_raw(&lie_raw(a, c), b).scale_real(r);
    Ok((&lhs - &rhs).frobenius_norm())
}

/// `(A∘B) − i√r (A•B)`, which is `AB` when `r = 1`.
pub fn cstar_product_from_jlb(a: &ComplexMatrix, b: &ComplexMatrix, r: f64, tol: &Tolerance) -> Result<ComplexMatrix> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidParameter(format!("r must be positive, got {r}")));
    }
    require_hermitian(&[a, b], tol)?;
    Ok(&jordan_raw(a, b) - &lie_raw(a, b).scale(C64::new(0.0, r.sqrt())))
}
