//! Small dense symmetric positive-definite linear algebra.
//!
//! Everything in this crate factors at most `(n+1)×(n+1)` covariance
//! matrices, so a plain row-major `Vec<f64>` and an unpivoted Cholesky are
//! the whole story.

use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};

/// Pivots must exceed this fraction of the largest diagonal entry.
pub const PIVOT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[&[f64]]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: r.len(),
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

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: x.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| dot(self.row(i), x))
            .collect())
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Lower-triangular Cholesky factor `L` with `L·Lᵀ = m`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cholesky {
    l: Matrix,
}

impl Cholesky {
    pub fn factor(&self) -> &Matrix {
        &self.l
    }

    pub fn dim(&self) -> usize {
        self.l.rows
    }

    /// `L·z`, used to colour independent normals.
    pub fn lower_mul(&self, z: &[f64], out: &mut [f64]) {
        let n = self.l.rows;
        for i in 0..n {
            out[i] = dot(&self.l.row(i)[..=i], &z[..=i]);
        }
    }

    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        let n = self.l.rows;
        if b.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: b.len(),
            });
        }
        let l = &self.l;
        let mut y = vec![0.0; n];
        for i in 0..n {
            let s = dot(&l.row(i)[..i], &y[..i]);
            y[i] = (b[i] - s) / l[(i, i)];
        }
        for i in (0..n).rev() {
            let s: f64 = ((i + 1)..n).map(|k| l[(k, i)] * y[k]).sum();
            y[i] = (y[i] - s) / l[(i, i)];
        }
        Ok(y)
    }

    pub fn reconstruct(&self) -> Matrix {
        self.l
            .matmul(&self.l.transpose())
            .expect("square factor")
    }
}

pub fn cholesky(m: &Matrix) -> Result<Cholesky> {
    if m.rows != m.cols {
        return Err(Error::DimensionMismatch {
            expected: m.rows,
            found: m.cols,
        });
    }
    let n = m.rows;
    let max_diag = (0..n).fold(0.0f64, |acc, i| acc.max(m[(i, i)]));
    let tol = PIVOT_TOLERANCE * max_diag;
    let mut l = Matrix::zeros(n, n);
    for j in 0..n {
        let pivot = m[(j, j)] - dot(&l.row(j)[..j], &l.row(j)[..j]);
        if !(pivot > tol) {
            return Err(Error::NotPositiveDefinite { pivot: j, value: pivot });
        }
        let d = pivot.sqrt();
        l[(j, j)] = d;
        for i in (j + 1)..n {
            let s = m[(i, j)] - dot(&l.row(i)[..j], &l.row(j)[..j]);
            l[(i, j)] = s / d;
        }
    }
    Ok(Cholesky { l })
}

pub fn solve_spd(m: &Matrix, b: &[f64]) -> Result<Vec<f64>> {
    cholesky(m)?.solve(b)
}

/// `aᵀ·m·a`.
pub fn quadratic_form(m: &Matrix, a: &[f64]) -> Result<f64> {
    if m.rows != m.cols || a.len() != m.rows {
        return Err(Error::DimensionMismatch {
            expected: m.rows,
            found: a.len(),
        });
    }
    Ok(dot(a, &m.matvec(a)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn cholesky_examples() {
        let i3 = Matrix::identity(3);
        assert_eq!(cholesky(&i3).unwrap().factor(), &i3);

        let m = Matrix::from_rows(&[&[4.0, 2.0], &[2.0, 3.0]]).unwrap();
        let l = cholesky(&m).unwrap();
        let f = l.factor();
        assert_eq!(f[(0, 0)], 2.0);
        assert_eq!(f[(0, 1)], 0.0);
        assert_eq!(f[(1, 0)], 1.0);
        assert!((f[(1, 1)] - 2f64.sqrt()).abs() < 1e-15);

        let bad = Matrix::from_rows(&[&[1.0, 2.0], &[2.0, 1.0]]).unwrap();
        assert!(matches!(
            cholesky(&bad),
            Err(Error::NotPositiveDefinite { pivot: 1, .. })
        ));
    }

    #[test]
    fn rank_deficient_is_rejected() {
        let m = Matrix::from_rows(&[&[25.0, 25.0], &[25.0, 25.0]]).unwrap();
        assert!(matches!(
            cholesky(&m),
            Err(Error::NotPositiveDefinite { pivot: 1, .. })
        ));
    }

    #[test]
    fn solve_examples() {
        let b = [1.0, -2.0, 3.5];
        assert_eq!(solve_spd(&Matrix::identity(3), &b).unwrap(), b.to_vec());
        let d = Matrix::from_rows(&[&[2.0, 0.0], &[0.0, 4.0]]).unwrap();
        let x = solve_spd(&d, &[2.0, 8.0]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-15 && (x[1] - 2.0).abs() < 1e-15);
        assert!(solve_spd(&d, &[1.0]).is_err());
    }

    #[test]
    fn solve_random_spd_5x5_by_substitution() {
        // B·Bᵀ + 5·I with a fixed B.
        let b = Matrix::from_row_major(
            5,
            5,
            vec![
                0.3, -1.2, 0.8, 2.0, 0.1, //
                1.1, 0.4, -0.7, 0.0, 0.9, //
                -0.5, 0.6, 1.3, -1.0, 0.2, //
                0.0, 2.2, 0.5, 0.7, -0.3, //
                0.9, -0.1, 0.0, 1.4, 1.6,
            ],
        )
        .unwrap();
        let mut m = b.matmul(&b.transpose()).unwrap();
        for i in 0..5 {
            m[(i, i)] += 5.0;
        }
        let rhs = [1.0, -2.0, 0.5, 3.0, -1.5];
        let x = solve_spd(&m, &rhs).unwrap();
        let back = m.matvec(&x).unwrap();
        for (u, v) in back.iter().zip(rhs) {
            assert!((u - v).abs() <= 1e-8 * 3.0);
        }
    }

    #[test]
    fn quadratic_form_examples() {
        let i2 = Matrix::identity(2);
        assert_eq!(quadratic_form(&i2, &[3.0, 4.0]).unwrap(), 25.0);
        assert_eq!(quadratic_form(&i2, &[0.0, 0.0]).unwrap(), 0.0);
        let m = Matrix::from_rows(&[&[2.0, 1.0], &[1.0, 2.0]]).unwrap();
        assert_eq!(quadratic_form(&m, &[1.0, 1.0]).unwrap(), 6.0);
        assert!(quadratic_form(&m, &[1.0]).is_err());
    }

    fn spd(n: usize) -> impl Strategy<Value = Matrix> {
        prop::collection::vec(-3.0..3.0f64, n * n).prop_map(move |v| {
            let b = Matrix::from_row_major(n, n, v).unwrap();
            let mut m = b.matmul(&b.transpose()).unwrap();
            for i in 0..n {
                m[(i, i)] += 0.5;
            }
            m
        })
    }

    fn spd_any() -> impl Strategy<Value = Matrix> {
        (1usize..=16).prop_flat_map(spd)
    }

    proptest! {
        #[test]
        fn cholesky_reconstructs(m in spd_any()) {
            let l = cholesky(&m).unwrap();
            let r = l.reconstruct();
            let scale = m.max_abs();
            for (a, b) in r.as_slice().iter().zip(m.as_slice()) {
                prop_assert!((a - b).abs() <= 1e-8 * scale);
            }
        }

        #[test]
        fn solve_recovers_x((m, x) in spd_any().prop_flat_map(|m| {
            let n = m.rows();
            (Just(m), prop::collection::vec(-10.0..10.0f64, n))
        })) {
            let b = m.matvec(&x).unwrap();
            let got = solve_spd(&m, &b).unwrap();
            let xmax = x.iter().fold(1.0f64, |a, v| a.max(v.abs()));
            for (g, w) in got.iter().zip(&x) {
                prop_assert!((g - w).abs() <= 1e-7 * xmax, "{} vs {}", g, w);
            }
        }
    }
}
