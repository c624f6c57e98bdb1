//! Small dense linear algebra: row-major matrices and Cholesky factors.
//!
//! Parameter dimensions here are tiny (p ≤ 3 for the benchmark), so plain
//! loops over contiguous storage are all that is needed.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                got: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    got: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn from_diagonal(diag: &[T]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                for j in 0..other.cols {
                    out[(i, j)] = out[(i, j)] + a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, v: &[T]) -> Result<Vec<T>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), v)).collect())
    }

    /// `XᵀX` for an n×p matrix.
    pub fn gram(&self) -> Self {
        let p = self.cols;
        let mut g = Self::zeros(p, p);
        for i in 0..self.rows {
            let r = self.row(i);
            for a in 0..p {
                for b in a..p {
                    g[(a, b)] = g[(a, b)] + r[a] * r[b];
                }
            }
        }
        for a in 0..p {
            for b in 0..a {
                g[(a, b)] = g[(b, a)];
            }
        }
        g
    }

    /// `Xᵀv` for an n×p matrix and an n-vector.
    pub fn transpose_matvec(&self, v: &[T]) -> Result<Vec<T>> {
        if v.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                got: v.len(),
            });
        }
        let mut out = vec![T::zero(); self.cols];
        for (i, &vi) in v.iter().enumerate() {
            for (o, &x) in out.iter_mut().zip(self.row(i)) {
                *o = *o + x * vi;
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: T) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| x * s).collect(),
        }
    }

    /// Select a subset of columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut data = Vec::with_capacity(self.rows * cols.len());
        for i in 0..self.rows {
            let r = self.row(i);
            data.extend(cols.iter().map(|&c| r[c]));
        }
        Self {
            rows: self.rows,
            cols: cols.len(),
            data,
        }
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }
}

impl<T> std::ops::Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Matrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

#[inline]
pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

/// Cholesky factor `L` of a symmetric positive-definite matrix, with the
/// log-determinant of the original matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SpdFactor<T> {
    lower: Matrix<T>,
    log_det: T,
}

/// Factorize a symmetric positive-definite matrix.
///
/// Symmetry is checked to a relative tolerance; a non-positive pivot is
/// reported with its 1-based index.
pub fn spd_factorize<T: Scalar>(m: &Matrix<T>) -> Result<SpdFactor<T>> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            expected: m.rows(),
            got: m.cols(),
        });
    }
    let n = m.rows();
    let tol = T::lit(1e3) * T::epsilon();
    for i in 0..n {
        for j in 0..i {
            let (a, b) = (m[(i, j)], m[(j, i)]);
            let scale = a.abs().max(b.abs()).max(T::min_positive_value());
            if (a - b).abs() > tol * scale || !a.is_finite() {
                return Err(Error::NotSymmetric { row: i, col: j });
            }
        }
    }
    let mut l = Matrix::zeros(n, n);
    let mut log_det = T::zero();
    for j in 0..n {
        let mut d = m[(j, j)];
        for k in 0..j {
            d = d - l[(j, k)] * l[(j, k)];
        }
        if !(d > T::zero()) {
            return Err(Error::NotPositiveDefinite { pivot: j + 1 });
        }
        let djj = d.sqrt();
        l[(j, j)] = djj;
        log_det = log_det + d.ln();
        for i in (j + 1)..n {
            let mut s = m[(i, j)];
            for k in 0..j {
                s = s - l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / djj;
        }
    }
    Ok(SpdFactor { lower: l, log_det })
}

impl<T: Scalar> SpdFactor<T> {
    #[inline]
    pub fn dim(&self) -> usize {
        self.lower.rows()
    }

    pub fn lower(&self) -> &Matrix<T> {
        &self.lower
    }

    /// `log |A|` of the factorized matrix `A = L Lᵀ`.
    #[inline]
    pub fn log_det(&self) -> T {
        self.log_det
    }

    /// `L Lᵀ`.
    pub fn reconstruct(&self) -> Matrix<T> {
        self.lower
            .matmul(&self.lower.transpose())
            .expect("square factor")
    }

    /// `L v`.
    pub fn mul_lower(&self, v: &[T]) -> Vec<T> {
        let n = self.dim();
        (0..n)
            .map(|i| dot(&self.lower.row(i)[..=i], &v[..=i]))
            .collect()
    }

    /// Solve `L x = b` in place.
    pub fn solve_lower_in_place(&self, b: &mut [T]) {
        let n = self.dim();
        for i in 0..n {
            let row = self.lower.row(i);
            let s = dot(&row[..i], &b[..i]);
            b[i] = (b[i] - s) / row[i];
        }
    }

    /// Solve `Lᵀ x = b` in place.
    pub fn solve_upper_in_place(&self, b: &mut [T]) {
        let n = self.dim();
        for i in (0..n).rev() {
            let mut s = b[i];
            for k in (i + 1)..n {
                s = s - self.lower[(k, i)] * b[k];
            }
            b[i] = s / self.lower[(i, i)];
        }
    }

    /// Solve `A x = b`.
    pub fn solve(&self, b: &[T]) -> Result<Vec<T>> {
        if b.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: b.len(),
            });
        }
        let mut x = b.to_vec();
        self.solve_lower_in_place(&mut x);
        self.solve_upper_in_place(&mut x);
        Ok(x)
    }

    /// `A⁻¹`.
    pub fn inverse(&self) -> Matrix<T> {
        let n = self.dim();
        let mut inv = Matrix::zeros(n, n);
        let mut e = vec![T::zero(); n];
        for j in 0..n {
            e.iter_mut().for_each(|x| *x = T::zero());
            e[j] = T::one();
            let col = self.solve(&e).expect("dimension checked");
            for i in 0..n {
                inv[(i, j)] = col[i];
            }
        }
        inv
    }

    /// Squared Mahalanobis norm `vᵀ A⁻¹ v`.
    pub fn inv_quad_form(&self, v: &[T]) -> T {
        let mut w = v.to_vec();
        self.solve_lower_in_place(&mut w);
        dot(&w, &w)
    }

    /// Factor of `s · A` for `s > 0`.
    pub fn scaled(&self, s: T) -> Self {
        let n = T::from_usize_lossy(self.dim());
        Self {
            lower: self.lower.scale(s.sqrt()),
            log_det: self.log_det + n * s.ln(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_factor() {
        let f = spd_factorize(&Matrix::<f64>::identity(3)).unwrap();
        assert_eq!(f.lower(), &Matrix::identity(3));
        assert_eq!(f.log_det(), 0.0);
    }

    #[test]
    fn diagonal_factor() {
        let f =
            spd_factorize(&Matrix::from_rows(&[vec![4.0, 0.0], vec![0.0, 9.0]]).unwrap()).unwrap();
        assert_eq!(f.lower(), &Matrix::from_diagonal(&[2.0, 3.0]));
        assert!((f.log_det() - 36f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn indefinite_reports_pivot() {
        let m = Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0_f64]]).unwrap();
        assert_eq!(
            spd_factorize(&m),
            Err(Error::NotPositiveDefinite { pivot: 2 })
        );
    }

    #[test]
    fn asymmetric_rejected() {
        let m = Matrix::from_rows(&[vec![2.0, 1.0], vec![0.0, 2.0_f64]]).unwrap();
        assert!(matches!(spd_factorize(&m), Err(Error::NotSymmetric { .. })));
    }

    #[test]
    fn inverse_and_solve() {
        let m = Matrix::from_rows(&[
            vec![4.0, 1.0, 0.5],
            vec![1.0, 3.0, 0.2],
            vec![0.5, 0.2, 2.0_f64],
        ])
        .unwrap();
        let f = spd_factorize(&m).unwrap();
        let prod = m.matmul(&f.inverse()).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((prod[(i, j)] - want).abs() < 1e-14);
            }
        }
        let b = [1.0, -2.0, 0.5];
        let x = f.solve(&b).unwrap();
        let back = m.matvec(&x).unwrap();
        for (u, v) in back.iter().zip(b) {
            assert!((u - v).abs() < 1e-14);
        }
        let s = f.scaled(3.0);
        assert!((s.log_det() - (f.log_det() + 3.0 * 3f64.ln())).abs() < 1e-14);
    }

    #[test]
    fn gram_matches_explicit_product() {
        let x = Matrix::from_rows(&[vec![1.0, 2.0], vec![3.0, -1.0], vec![0.5, 0.5_f64]]).unwrap();
        assert_eq!(x.gram(), x.transpose().matmul(&x).unwrap());
        assert_eq!(
            x.transpose_matvec(&[1.0, 1.0, 2.0]).unwrap(),
            vec![5.0, 2.0]
        );
    }
}
