//! Dense linear algebra: exact elimination over any `Scalar`, SVD-based
//! kernels and Hessian classification over `f64`.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

/// Gaussian elimination with magnitude pivoting. Exact over rationals.
pub fn determinant<T: Scalar>(mut m: Vec<Vec<T>>) -> T {
    let n = m.len();
    let mut det = T::one();
    for col in 0..n {
        let piv = (col..n)
            .filter(|&r| !m[r][col].is_zero())
            .max_by(|&a, &b| m[a][col].magnitude().total_cmp(&m[b][col].magnitude()));
        let Some(p) = piv else {
            return T::zero();
        };
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        let pv = m[col][col].clone();
        det = det * pv.clone();
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone() / pv.clone();
            for c in col..n {
                let v = m[col][c].clone();
                m[r][c] = m[r][c].clone() - f.clone() * v;
            }
        }
    }
    det
}

/// Reduced row echelon form; returns the pivot columns.
pub fn rref<T: Scalar>(m: &mut [Vec<T>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let piv = (r..rows)
            .filter(|&i| !m[i][c].is_zero())
            .max_by(|&a, &b| m[a][c].magnitude().total_cmp(&m[b][c].magnitude()));
        let Some(p) = piv else { continue };
        m.swap(p, r);
        let inv = T::one() / m[r][c].clone();
        for v in m[r].iter_mut() {
            *v = v.clone() * inv.clone();
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let v = m[r][j].clone();
                    m[i][j] = m[i][j].clone() - f.clone() * v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<T: Scalar>(m: &[Vec<T>]) -> usize {
    let mut w = m.to_vec();
    rref(&mut w).len()
}

/// Right null space basis, one vector per free column in ascending column
/// order, with the free coordinate equal to one.
pub fn nullspace<T: Scalar>(m: &[Vec<T>]) -> Vec<Vec<T>> {
    let cols = m.first().map_or(0, |r| r.len());
    let mut w = m.to_vec();
    let pivots = rref(&mut w);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![T::zero(); cols];
            v[f] = T::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -w[row][f].clone();
            }
            v
        })
        .collect()
}

/// Coefficients (ascending) of the unique polynomial of degree < len through
/// the points `(xs[i], ys[i])`. Exact over rationals.
pub fn lagrange_interpolate<T: Scalar>(xs: &[T], ys: &[T]) -> Vec<T> {
    let n = xs.len();
    // Newton divided differences, then expansion.
    let mut dd = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            dd[i] = (dd[i].clone() - dd[i - 1].clone()) / (xs[i].clone() - xs[i - j].clone());
        }
    }
    let mut coeffs = vec![T::zero(); n];
    for i in (0..n).rev() {
        // coeffs = coeffs * (s - xs[i]) + dd[i]
        let mut next = vec![T::zero(); n];
        for k in 0..n {
            if k + 1 < n {
                next[k + 1] = next[k + 1].clone() + coeffs[k].clone();
            }
            next[k] = next[k].clone() - coeffs[k].clone() * xs[i].clone();
        }
        next[0] = next[0].clone() + dd[i].clone();
        coeffs = next;
    }
    coeffs
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |a, v| a.max(v.abs()))
}

/// Unit vector `v` with `v^T M ≈ 0`, if the smallest singular value is at
/// most `tol * max|M_ij|`. A second such singular value is an error.
pub fn left_kernel(m: &DMatrix<f64>, tol: f64) -> Result<Option<DVector<f64>>> {
    let rows = m.nrows();
    let scale = max_abs(m);
    if scale == 0.0 {
        return Err(Error::DegenerateKernel("zero matrix".into()));
    }
    // Zero columns pad to square so the SVD exposes the full left basis.
    let size = rows.max(m.ncols());
    let mut sq = DMatrix::zeros(rows, size);
    sq.view_mut((0, 0), (rows, m.ncols())).copy_from(m);
    let svd = sq.svd(true, false);
    let u = svd.u.as_ref().ok_or_else(|| Error::NumericalFailure("svd".into()))?;
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]));
    let sv = |i: usize| svd.singular_values[order[i]];
    // Rows beyond the column count always contribute kernel directions.
    let extra = rows.saturating_sub(m.ncols());
    let small = (0..order.len())
        .filter(|&i| sv(i) <= tol * scale)
        .count()
        + extra;
    match small {
        0 => Ok(None),
        1 => Ok(Some(u.column(order[0]).into_owned())),
        k => Err(Error::DegenerateKernel(format!("{k} singular values below tolerance"))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum StationaryClass {
    Min,
    Max,
    Saddle,
    Undecided,
}

/// Signature test on a symmetric Hessian. Eigenvalues within
/// `singular_tol * max|eig|` of zero make the verdict `Undecided`.
pub fn classify_stationary(hessian: &DMatrix<f64>, singular_tol: f64) -> StationaryClass {
    let sym = (hessian + hessian.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym).eigenvalues;
    let scale = eig.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
    if scale == 0.0 {
        return StationaryClass::Undecided;
    }
    let thr = singular_tol * scale;
    if eig.iter().any(|v| v.abs() <= thr) {
        return StationaryClass::Undecided;
    }
    let pos = eig.iter().filter(|v| **v > 0.0).count();
    if pos == eig.len() {
        StationaryClass::Min
    } else if pos == 0 {
        StationaryClass::Max
    } else {
        StationaryClass::Saddle
    }
}

/// Eigenvalues of the symmetrized Hessian, ascending.
pub fn hessian_spectrum(hessian: &DMatrix<f64>) -> Vec<f64> {
    let sym = (hessian + hessian.transpose()) * 0.5;
    let mut v: Vec<f64> = SymmetricEigen::new(sym).eigenvalues.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Weighted least squares `min ||W^{1/2}(A x - b)||` via SVD.
pub fn weighted_lstsq(a: &DMatrix<f64>, b: &DVector<f64>, w: &[f64]) -> Result<DVector<f64>> {
    let mut aw = a.clone();
    let mut bw = b.clone();
    for (i, wi) in w.iter().enumerate() {
        let r = wi.sqrt();
        aw.row_mut(i).scale_mut(r);
        bw[i] *= r;
    }
    let svd = aw.svd(true, true);
    let smax = svd.singular_values.max();
    svd.solve(&bw, smax * 1e-13)
        .map_err(|e| Error::NumericalFailure(e.to_string()))
}
