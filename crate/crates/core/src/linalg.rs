//! Dense row-major matrices sized for desk-scale networks, and the
//! validated [`WeightMatrix`] newtype.

use std::ops::{Index, IndexMut};

use serde::Serialize;

use crate::error::{GlassError, Result};
use crate::index_set::{IndexSet, MAX_DIM};

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some((i, row)) = rows.iter().enumerate().find(|(_, row)| row.len() != c) {
            return Err(GlassError::DimensionMismatch(format!(
                "row {} has {} entries, expected {c}",
                i + 1,
                row.len()
            )));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.concat() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &f64> {
        self.data.iter()
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&v| f(v)).collect() }
    }

    pub fn scale(&self, s: f64) -> Matrix {
        self.map(|v| v * s)
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    /// Premultiplies by `diag(d)`.
    pub fn scale_rows(&self, d: &[f64]) -> Matrix {
        assert_eq!(self.rows, d.len());
        Matrix::from_fn(self.rows, self.cols, |i, j| d[i] * self[(i, j)])
    }

    /// `u vᵀ`
    pub fn outer(u: &[f64], v: &[f64]) -> Matrix {
        Matrix::from_fn(u.len(), v.len(), |i, j| u[i] * v[j])
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])])
    }

    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    /// Maximum absolute column sum.
    pub fn norm1(&self) -> f64 {
        (0..self.cols).map(|j| (0..self.rows).map(|i| self[(i, j)].abs()).sum::<f64>()).fold(0.0, f64::max)
    }

    /// Inverse by Gauss-Jordan elimination with partial pivoting.
    pub fn inverse(&self) -> Result<Matrix> {
        if self.rows != self.cols {
            return Err(GlassError::DimensionMismatch(format!("cannot invert a {}x{} matrix", self.rows, self.cols)));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::identity(n);
        let scale = self.data.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if scale == 0.0 {
            return Err(GlassError::Singular);
        }
        for col in 0..n {
            let (pivot, best) =
                (col..n)
                    .map(|r| (r, a[(r, col)].abs()))
                    .fold((col, -1.0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
            if best <= scale * f64::EPSILON * n as f64 {
                return Err(GlassError::Singular);
            }
            if pivot != col {
                a.swap_rows(pivot, col);
                inv.swap_rows(pivot, col);
            }
            let p = a[(col, col)];
            for j in 0..n {
                a[(col, j)] /= p;
                inv[(col, j)] /= p;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a[(r, col)];
                if f == 0.0 {
                    continue;
                }
                for j in 0..n {
                    a[(r, j)] -= f * a[(col, j)];
                    inv[(r, j)] -= f * inv[(col, j)];
                }
            }
        }
        Ok(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
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

impl Serialize for Matrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(serializer)
    }
}

/// Square matrix of finite synaptic weights. Row `i` is the postsynaptic
/// unit, column `j` the presynaptic one.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct WeightMatrix(Matrix);

impl WeightMatrix {
    pub fn new(m: Matrix) -> Result<Self> {
        if m.rows() != m.cols() {
            return Err(GlassError::DimensionMismatch(format!(
                "weight matrix must be square, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        if m.rows() == 0 {
            return Err(GlassError::DimensionMismatch("weight matrix is empty".into()));
        }
        if m.rows() > MAX_DIM {
            return Err(GlassError::DimensionTooLarge { n: m.rows(), max: MAX_DIM });
        }
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                if !m[(i, j)].is_finite() {
                    return Err(GlassError::NonFinite { row: i + 1, col: j + 1 });
                }
            }
        }
        Ok(WeightMatrix(m))
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::new(Matrix::from_rows(rows)?)
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    /// `W·p_α`: the sum of the columns indexed by `set`.
    pub fn column_sum(&self, set: &IndexSet) -> Vec<f64> {
        assert_eq!(set.dim(), self.dim(), "set and matrix dimensions differ");
        let cols: Vec<usize> = set.positions().collect();
        (0..self.dim()).map(|i| cols.iter().map(|&j| self.0[(i, j)]).sum()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_of_rank_one_update() {
        let x = Matrix::from_fn(3, 3, |i, j| if i == j { 1.5 } else { 1.0 });
        let inv = x.inverse().unwrap();
        let expected = Matrix::from_fn(3, 3, |i, j| if i == j { 10.0 / 7.0 } else { -4.0 / 7.0 });
        assert!(inv.max_abs_diff(&expected) < 1e-13);
        assert!(x.mul(&inv).max_abs_diff(&Matrix::identity(3)) < 1e-13);
    }

    #[test]
    fn inverse_needs_pivoting() {
        let m = Matrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert_eq!(m.inverse().unwrap(), m);
    }

    #[test]
    fn singular_is_detected() {
        let m = Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert_eq!(m.inverse(), Err(GlassError::Singular));
        assert_eq!(Matrix::zeros(2, 2).inverse(), Err(GlassError::Singular));
    }

    #[test]
    fn weight_matrix_validation() {
        assert!(WeightMatrix::from_rows(&[vec![1.0, 2.0]]).is_err());
        assert!(WeightMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0]]).is_err());
        assert_eq!(
            WeightMatrix::from_rows(&[vec![1.0, f64::NAN], vec![0.0, 1.0]]),
            Err(GlassError::NonFinite { row: 1, col: 2 })
        );
    }

    #[test]
    fn column_sum_adds_selected_columns() {
        let w = WeightMatrix::from_rows(&[vec![1.0, 4.0], vec![2.0, 3.0]]).unwrap();
        let all = IndexSet::full(2).unwrap();
        assert_eq!(w.column_sum(&all), vec![5.0, 5.0]);
        assert_eq!(w.column_sum(&IndexSet::empty(2).unwrap()), vec![0.0, 0.0]);
    }
}
