use nalgebra::DMatrix;

use super::{CVector, C64};

/// Orthonormal basis of the null space of `m` (rows are constraints).
///
/// Right singular vectors whose singular value is at most
/// `rank_tol * max(1, σ_max)` are kept. Wide systems are padded with zero
/// rows so the full right singular basis is available; tall systems are
/// first reduced to their square `R` factor, which has the same singular
/// values and right singular vectors.
pub fn null_space(m: &DMatrix<C64>, rank_tol: f64) -> Vec<CVector> {
    let cols = m.ncols();
    if cols == 0 {
        return Vec::new();
    }
    let reduced = if m.nrows() == 0 {
        DMatrix::zeros(cols, cols)
    } else if m.nrows() > cols {
        let r = m.clone().qr().r();
        pad_rows(r, cols)
    } else {
        pad_rows(m.clone(), cols)
    };

    let svd = reduced.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let sigma_max = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let cutoff = rank_tol * sigma_max.max(1.0);

    let mut out = Vec::new();
    for (k, &s) in svd.singular_values.iter().enumerate() {
        if s <= cutoff {
            let row = v_t.row(k);
            out.push(CVector::from_iterator(cols, row.iter().map(|z| z.conj())));
        }
    }
    out
}

fn pad_rows(m: DMatrix<C64>, rows: usize) -> DMatrix<C64> {
    if m.nrows() >= rows {
        return m;
    }
    let cols = m.ncols();
    let mut out = DMatrix::zeros(rows, cols);
    out.view_mut((0, 0), (m.nrows(), cols)).copy_from(&m);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn wide_system_keeps_full_kernel() {
        let m = DMatrix::from_row_slice(1, 3, &[c(1.0), c(1.0), c(0.0)]);
        let ns = null_space(&m, 1e-9);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!((&m * v).norm() < 1e-12);
            assert!((v.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn tall_system_is_reduced() {
        let mut m = DMatrix::zeros(10, 2);
        for i in 0..10 {
            m[(i, 0)] = c(i as f64);
            m[(i, 1)] = c(2.0 * i as f64);
        }
        let ns = null_space(&m, 1e-9);
        assert_eq!(ns.len(), 1);
        assert!((&m * &ns[0]).norm() < 1e-10);
    }

    #[test]
    fn full_rank_has_trivial_kernel() {
        let m = DMatrix::<C64>::identity(4, 4);
        assert!(null_space(&m, 1e-9).is_empty());
        let empty = DMatrix::<C64>::zeros(0, 3);
        assert_eq!(null_space(&empty, 1e-9).len(), 3);
    }
}
