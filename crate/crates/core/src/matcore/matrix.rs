use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;

use super::{CVector, C64};
use crate::{Error, Result};

/// Dense square matrix of complex scalars with finite entries.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<C64>);

impl ComplexMatrix {
    /// Wraps a nalgebra matrix, rejecting non-square or non-finite input.
    pub fn new(m: DMatrix<C64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        for j in 0..m.ncols() {
            for i in 0..m.nrows() {
                let z = m[(i, j)];
                if !(z.re.is_finite() && z.im.is_finite()) {
                    return Err(Error::NonFinite { row: i, col: j });
                }
            }
        }
        Ok(Self(m))
    }

    pub(crate) fn from_inner(m: DMatrix<C64>) -> Self {
        debug_assert_eq!(m.nrows(), m.ncols());
        Self(m)
    }

    /// Row-major complex rows.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let n = rows.len();
        for row in rows {
            if row.len() != n {
                return Err(Error::NotSquare {
                    rows: n,
                    cols: row.len(),
                });
            }
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    /// Row-major real rows.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        Self(DMatrix::from_fn(n, n, f))
    }

    pub fn zeros(n: usize) -> Self {
        Self(DMatrix::zeros(n, n))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn diag(entries: &[C64]) -> Self {
        let n = entries.len();
        Self::from_fn(n, |i, j| if i == j { entries[i] } else { C64::new(0.0, 0.0) })
    }

    pub fn diag_real(entries: &[f64]) -> Self {
        let e: Vec<C64> = entries.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::diag(&e)
    }

    /// `u vᴴ`.
    pub fn outer(u: &CVector, v: &CVector) -> Self {
        Self(u * v.adjoint())
    }

    /// Orthogonal projection onto the line spanned by `v` (normalized internally).
    pub fn projector(v: &CVector) -> Self {
        let n = v.norm();
        let u = v / C64::new(n, 0.0);
        Self::outer(&u, &u)
    }

    /// Matrix unit `e_i e_jᴴ`.
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = DMatrix::zeros(n, n);
        m[(i, j)] = C64::new(1.0, 0.0);
        Self(m)
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_inner(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<C64> {
        self.0
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.norm()
    }

    /// Largest singular value.
    pub fn operator_norm(&self) -> f64 {
        if self.dim() == 0 {
            return 0.0;
        }
        self.0
            .clone()
            .singular_values()
            .iter()
            .cloned()
            .fold(0.0, f64::max)
    }

    /// `tr(selfᴴ other)`.
    pub fn hs_inner(&self, other: &Self) -> Result<C64> {
        self.check_dim(other)?;
        Ok(self.0.dotc(&other.0))
    }

    pub fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }

    pub fn commutator(&self, other: &Self) -> Self {
        Self(&self.0 * &other.0 - &other.0 * &self.0)
    }

    pub fn anticommutator(&self, other: &Self) -> Self {
        Self(&self.0 * &other.0 + &other.0 * &self.0)
    }

    pub fn scale(&self, z: C64) -> Self {
        Self(&self.0 * z)
    }

    pub fn scale_real(&self, x: f64) -> Self {
        self.scale(C64::new(x, 0.0))
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self(self.0.kronecker(&other.0))
    }

    pub fn apply(&self, v: &CVector) -> CVector {
        &self.0 * v
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::identity(self.dim());
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// `‖A − Aᴴ‖_F`.
    pub fn hermitian_residual(&self) -> f64 {
        (&self.0 - self.0.adjoint()).norm()
    }

    /// Hermitian within `residual_tol * max(1, ‖A‖_F)`.
    pub fn is_hermitian(&self, residual_tol: f64) -> bool {
        self.hermitian_residual() <= residual_tol * self.frobenius_norm().max(1.0)
    }

    pub(crate) fn require_hermitian(&self, residual_tol: f64) -> Result<()> {
        if self.is_hermitian(residual_tol) {
            Ok(())
        } else {
            Err(Error::NotHermitian {
                residual: self.hermitian_residual(),
            })
        }
    }

    /// `(A + Aᴴ)/2`.
    pub fn hermitian_part(&self) -> Self {
        Self((&self.0 + self.0.adjoint()) * C64::new(0.5, 0.0))
    }

    /// `(A − Aᴴ)/(2i)`, so that `A = re + i·im` with both parts Hermitian.
    pub fn antihermitian_part(&self) -> Self {
        Self((&self.0 - self.0.adjoint()) * C64::new(0.0, -0.5))
    }

    /// Residual of `Q² = Q = Qᴴ`.
    pub fn projection_residual(&self) -> f64 {
        let sq = &self.0 * &self.0;
        (&sq - &self.0).norm().max(self.hermitian_residual())
    }

    /// Column-major flattening, the coordinates used for matrix spans.
    pub fn flatten(&self) -> CVector {
        CVector::from_column_slice(self.0.as_slice())
    }

    pub fn unflatten(n: usize, v: &CVector) -> Self {
        debug_assert_eq!(v.len(), n * n);
        Self(DMatrix::from_column_slice(n, n, v.as_slice()))
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim(), self.dim())?;
        for i in 0..self.dim() {
            let row: Vec<String> = (0..self.dim())
                .map(|j| {
                    let z = self.0[(i, j)];
                    format!("{:+.4}{:+.4}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: Self) -> ComplexMatrix {
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: Self) -> ComplexMatrix {
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: Self) -> ComplexMatrix {
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix(-&self.0)
    }
}

impl Add for ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: Self) -> ComplexMatrix {
        ComplexMatrix(self.0 + rhs.0)
    }
}

impl Sub for ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: Self) -> ComplexMatrix {
        ComplexMatrix(self.0 - rhs.0)
    }
}

impl Mul for ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: Self) -> ComplexMatrix {
        ComplexMatrix(self.0 * rhs.0)
    }
}

/// Pauli matrices.
pub mod pauli {
    use super::{ComplexMatrix, C64};

    pub fn x() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap()
    }

    pub fn y() -> ComplexMatrix {
        let z = C64::new(0.0, 0.0);
        let i = C64::new(0.0, 1.0);
        ComplexMatrix::from_rows(&[vec![z, -i], vec![i, z]]).unwrap()
    }

    pub fn z() -> ComplexMatrix {
        ComplexMatrix::diag_real(&[1.0, -1.0])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn adjoint_examples() {
        let id = ComplexMatrix::identity(3);
        assert_eq!(id.adjoint(), id);

        let a = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        let expected = ComplexMatrix::from_real_rows(&[vec![0.0, 0.0], vec![1.0, 0.0]]).unwrap();
        assert_eq!(a.adjoint(), expected);
        assert_eq!(a.adjoint().adjoint(), a);

        assert_eq!(pauli::y().adjoint(), pauli::y());
    }

    #[test]
    fn hs_inner_examples() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(i2.hs_inner(&i2).unwrap(), c(2.0, 0.0));
        assert_eq!(pauli::x().hs_inner(&pauli::y()).unwrap(), c(0.0, 0.0));
        assert_eq!(pauli::z().hs_inner(&pauli::z()).unwrap(), c(2.0, 0.0));
        assert!(matches!(
            i2.hs_inner(&ComplexMatrix::identity(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn hs_inner_is_conjugate_linear_in_first_argument() {
        let a = pauli::x().scale(c(0.0, 1.0));
        let b = pauli::x();
        // tr((iσx)ᴴ σx) = -i tr(σx σx) = -2i
        assert_eq!(a.hs_inner(&b).unwrap(), c(0.0, -2.0));
    }

    #[test]
    fn rejects_malformed_input() {
        let bad = DMatrix::from_element(2, 3, c(0.0, 0.0));
        assert!(matches!(ComplexMatrix::new(bad), Err(Error::NotSquare { rows: 2, cols: 3 })));
        let nan = DMatrix::from_element(2, 2, c(f64::NAN, 0.0));
        assert!(matches!(ComplexMatrix::new(nan), Err(Error::NonFinite { .. })));
    }

    #[test]
    fn flatten_roundtrip_preserves_hs_inner() {
        let a = pauli::y();
        let b = &pauli::x() * &pauli::z();
        let v = a.flatten();
        assert_eq!(ComplexMatrix::unflatten(2, &v), a);
        assert_eq!(v.dotc(&b.flatten()), a.hs_inner(&b).unwrap());
    }

    #[test]
    fn pauli_algebra() {
        let xy = &pauli::x() * &pauli::y();
        assert_eq!(xy, pauli::z().scale(c(0.0, 1.0)));
        assert!((pauli::x().commutator(&pauli::y()).frobenius_norm() - 2.0 * 2f64.sqrt()).abs() < 1e-14);
    }
}
