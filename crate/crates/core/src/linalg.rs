//! Dense SVD (one-sided Jacobi) and the metric-weighted SVD built on it.

use std::cmp::Ordering;

use ndarray::{Array1, Array2, ArrayView2, Axis};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

const MAX_SWEEPS: usize = 80;

/// Thin SVD `M = U diag(s) V^T`, singular values descending.
#[derive(Debug, Clone)]
pub struct Svd<T> {
    pub u: Array2<T>,
    pub singular_values: Vec<T>,
    pub v: Array2<T>,
}

/// One-sided Jacobi SVD. Accurate to working precision on the small dense
/// matrices met here (tens of rows and columns).
pub fn svd<T: Scalar>(m: ArrayView2<'_, T>) -> Svd<T> {
    if m.nrows() >= m.ncols() {
        let (u, s, v) = jacobi_columns(m.to_owned());
        Svd { u, singular_values: s, v }
    } else {
        let (v, s, u) = jacobi_columns(m.t().to_owned());
        Svd { u, singular_values: s, v }
    }
}

/// Orthogonalizes the columns of `a` (rows >= cols). Returns `(U, s, V)`.
fn jacobi_columns<T: Scalar>(mut a: Array2<T>) -> (Array2<T>, Vec<T>, Array2<T>) {
    let (rows, cols) = a.dim();
    let mut v = Array2::<T>::eye(cols);
    let tol = T::epsilon() * T::lit(rows as f64).sqrt();
    let two = T::lit(2.0);
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in (p + 1)..cols {
                let (mut alpha, mut beta, mut gamma) = (T::zero(), T::zero(), T::zero());
                for i in 0..rows {
                    let (x, y) = (a[[i, p]], a[[i, q]]);
                    alpha = alpha + x * x;
                    beta = beta + y * y;
                    gamma = gamma + x * y;
                }
                if gamma == T::zero() || gamma.abs() <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (two * gamma);
                let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                for i in 0..rows {
                    let (x, y) = (a[[i, p]], a[[i, q]]);
                    a[[i, p]] = c * x - s * y;
                    a[[i, q]] = s * x + c * y;
                }
                for i in 0..cols {
                    let (x, y) = (v[[i, p]], v[[i, q]]);
                    v[[i, p]] = c * x - s * y;
                    v[[i, q]] = s * x + c * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<T> = a
        .axis_iter(Axis(1))
        .map(|col| col.iter().map(|&x| x * x).sum::<T>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap_or(Ordering::Equal));

    let mut u = Array2::zeros((rows, cols));
    let mut vs = Array2::zeros((cols, cols));
    let mut s = Vec::with_capacity(cols);
    for (k, &idx) in order.iter().enumerate() {
        let norm = norms[idx];
        s.push(norm);
        if norm > T::zero() {
            u.column_mut(k).assign(&(&a.column(idx) / norm));
        }
        vs.column_mut(k).assign(&v.column(idx));
    }
    (u, s, vs)
}

/// Eigen-solution of a data triplet `(M, W, A)`:
/// `M = U diag(values) V^T` with `U^T W U = I` and `V^T A V = I`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSystem<T> {
    values: Vec<T>,
    rank: usize,
    u: Array2<T>,
    v: Array2<T>,
}

impl<T: Scalar> EigenSystem<T> {
    /// All singular values, descending, including the null ones.
    pub fn singular_values(&self) -> &[T] {
        &self.values
    }

    /// Squared singular values of the retained axes.
    pub fn eigenvalues(&self) -> Vec<T> {
        self.values[..self.rank].iter().map(|&s| s * s).collect()
    }

    /// Number of retained axes `L` (`λ²_α > 1e-12 λ²_1`).
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// `n x L` left vectors.
    pub fn u(&self) -> &Array2<T> {
        &self.u
    }

    /// `columns x L` right vectors; rows of zero-metric columns are zero.
    pub fn v(&self) -> &Array2<T> {
        &self.v
    }
}

/// Generalized SVD of `m` under diagonal row metric `row_weights` and column
/// metric `column_weights`. Columns with zero metric are left out of the fit.
///
/// Each axis is oriented so that its largest-magnitude loading is positive;
/// equal singular values are ordered by their loadings, largest first.
pub fn weighted_svd<T: Scalar>(
    m: ArrayView2<'_, T>,
    row_weights: &Array1<T>,
    column_weights: &Array1<T>,
) -> Result<EigenSystem<T>> {
    let (n, cols) = m.dim();
    if row_weights.len() != n || column_weights.len() != cols {
        return Err(Error::domain("metric sizes do not match the matrix"));
    }
    if m.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("matrix"));
    }
    if row_weights.iter().any(|&w| !(w.is_finite() && w > T::zero())) {
        return Err(Error::domain("row metric must be positive"));
    }
    if column_weights.iter().any(|&a| !(a.is_finite() && a >= T::zero())) {
        return Err(Error::domain("column metric must be non-negative"));
    }
    let active: Vec<usize> = (0..cols).filter(|&k| column_weights[k] > T::zero()).collect();
    if active.is_empty() {
        return Ok(EigenSystem {
            values: Vec::new(),
            rank: 0,
            u: Array2::zeros((n, 0)),
            v: Array2::zeros((cols, 0)),
        });
    }

    let row_sqrt = row_weights.mapv(|w| w.sqrt());
    let col_sqrt: Array1<T> = active.iter().map(|&k| column_weights[k].sqrt()).collect();
    let mut scaled = m.select(Axis(1), &active);
    scaled *= &row_sqrt.view().insert_axis(Axis(1));
    scaled *= &col_sqrt.view().insert_axis(Axis(0));

    let dec = svd(scaled.view());
    let values = dec.singular_values;
    let threshold = T::lit(1e-12) * values[0] * values[0];
    let rank = if values[0] > T::zero() {
        values.iter().take_while(|&&s| s * s > threshold).count()
    } else {
        0
    };

    let mut u = Array2::zeros((n, rank));
    let mut v = Array2::zeros((cols, rank));
    for axis in 0..rank {
        for i in 0..n {
            u[[i, axis]] = dec.u[[i, axis]] / row_sqrt[i];
        }
        for (a, &k) in active.iter().enumerate() {
            v[[k, axis]] = dec.v[[a, axis]] / col_sqrt[a];
        }
        let lead = active
            .iter()
            .copied()
            .fold(active[0], |best, k| if v[[k, axis]].abs() > v[[best, axis]].abs() { k } else { best });
        if v[[lead, axis]] < T::zero() {
            u.column_mut(axis).mapv_inplace(|x| -x);
            v.column_mut(axis).mapv_inplace(|x| -x);
        }
    }

    let mut order: Vec<usize> = (0..rank).collect();
    let tie = T::lit(1e-12) * values[0];
    order.sort_by(|&i, &j| {
        if (values[i] - values[j]).abs() > tie {
            return values[j].partial_cmp(&values[i]).unwrap_or(Ordering::Equal);
        }
        v.column(j)
            .iter()
            .zip(v.column(i).iter())
            .map(|(a, b)| a.partial_cmp(b).unwrap_or(Ordering::Equal))
            .find(|o| *o != Ordering::Equal)
            .unwrap_or(Ordering::Equal)
    });
    let u = u.select(Axis(1), &order);
    let v = v.select(Axis(1), &order);
    let mut sorted_values: Vec<T> = order.iter().map(|&i| values[i]).collect();
    sorted_values.extend_from_slice(&values[rank..]);
    Ok(EigenSystem { values: sorted_values, rank, u, v })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn frobenius(m: &Array2<f64>) -> f64 {
        m.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    #[test]
    fn plain_svd_reconstructs() {
        let m = array![[3.0, 1.0, 2.0], [1.0, -2.0, 0.5], [0.0, 4.0, 1.0], [2.0, 2.0, -1.0]];
        let d = svd(m.view());
        let s = Array2::from_diag(&Array1::from(d.singular_values.clone()));
        let back = d.u.dot(&s).dot(&d.v.t());
        assert!(frobenius(&(&back - &m)) < 1e-12 * frobenius(&m));
        let wide = m.t().to_owned();
        let d = svd(wide.view());
        let s = Array2::from_diag(&Array1::from(d.singular_values.clone()));
        assert!(frobenius(&(d.u.dot(&s).dot(&d.v.t()) - &wide)) < 1e-12 * frobenius(&m));
    }

    #[test]
    fn zero_matrix_has_no_axes() {
        let m = Array2::<f64>::zeros((3, 2));
        let e = weighted_svd(m.view(), &Array1::from_elem(3, 1.0 / 3.0), &Array1::ones(2)).unwrap();
        assert_eq!(e.rank(), 0);
        assert!(e.singular_values().iter().all(|&s| s == 0.0));
    }

    #[test]
    fn rank_one_value() {
        let u = array![1.0, 2.0, 2.0];
        let v = array![3.0, 4.0];
        let m = u.view().insert_axis(Axis(1)).dot(&v.view().insert_axis(Axis(0)));
        let e = weighted_svd::<f64>(m.view(), &Array1::ones(3), &Array1::ones(2)).unwrap();
        assert_eq!(e.rank(), 1);
        assert!((e.singular_values()[0] - 15.0).abs() < 1e-12);
    }

    #[test]
    fn metric_orthonormality_and_reconstruction() {
        let m = array![[1.0, 2.0, 0.5], [-1.0, 0.3, 2.0], [0.7, -1.2, 1.0], [2.0, 0.1, -0.4], [0.2, 0.9, 0.8]];
        let w = array![0.1, 0.3, 0.2, 0.25, 0.15];
        let a = array![2.0, 0.5, 1.5];
        let e = weighted_svd(m.view(), &w, &a).unwrap();
        let l = e.rank();
        let utwu = e.u().t().dot(&(e.u() * &w.view().insert_axis(Axis(1))));
        let vtav = e.v().t().dot(&(e.v() * &a.view().insert_axis(Axis(1))));
        assert!(frobenius(&(utwu - Array2::<f64>::eye(l))) < 1e-12);
        assert!(frobenius(&(vtav - Array2::<f64>::eye(l))) < 1e-12);
        let s = Array2::from_diag(&Array1::from(e.singular_values()[..l].to_vec()));
        let back = e.u().dot(&s).dot(&e.v().t());
        assert!(frobenius(&(&back - &m)) < 1e-10 * frobenius(&m));
    }

    #[test]
    fn zero_metric_columns_are_excluded() {
        let m = array![[1.0, 5.0], [-1.0, -7.0], [0.0, 2.0]];
        let e = weighted_svd::<f64>(m.view(), &Array1::from_elem(3, 1.0 / 3.0), &array![1.0, 0.0]).unwrap();
        assert_eq!(e.rank(), 1);
        assert!((e.eigenvalues()[0] - 2.0 / 3.0).abs() < 1e-14);
        assert_eq!(e.v()[[1, 0]], 0.0);
        assert!(e.v()[[0, 0]] > 0.0);
    }

    #[test]
    fn rejects_non_finite() {
        let m = array![[1.0, f64::NAN]];
        assert!(weighted_svd(m.view(), &array![1.0], &array![1.0, 1.0]).is_err());
    }

    #[test]
    fn equal_singular_values_are_ordered_deterministically() {
        let m = array![[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]];
        let w = Array1::from_elem(4, 0.25);
        let a = Array1::ones(2);
        let first = weighted_svd(m.view(), &w, &a).unwrap();
        for _ in 0..3 {
            assert_eq!(weighted_svd(m.view(), &w, &a).unwrap(), first);
        }
        assert_eq!(first.rank(), 2);
        assert!(first.v()[[0, 0]] >= first.v()[[0, 1]]);
    }
}
