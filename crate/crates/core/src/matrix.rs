//! Dense matrices over F_q with deterministic Gaussian elimination.
//!
//! Pivoting always takes the first nonzero entry in the current column, so
//! every routine here is reproducible bit for bit.

use crate::error::{Error, Result};
use crate::field::{Fe, Field};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Fe>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Fe::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Fe::ONE;
        }
        m
    }

    /// Builds from row vectors; all rows must share the given width.
    pub fn from_rows(rows: Vec<Vec<Fe>>, cols: usize) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix");
            data.extend(r);
        }
        Matrix {
            rows: n,
            cols,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Fe] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Fe>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<Fe> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn select_columns(&self, idx: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.rows, idx.len());
        for i in 0..self.rows {
            for (k, &j) in idx.iter().enumerate() {
                out[(i, k)] = self[(i, j)];
            }
        }
        out
    }

    /// Vertical concatenation.
    pub fn stack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
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

    /// Row vector times matrix: `v · M`.
    pub fn left_mul(&self, v: &[Fe], f: &Field) -> Vec<Fe> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![Fe::ZERO; self.cols];
        for (i, &c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, &m) in out.iter_mut().zip(self.row(i)) {
                *o = f.add(*o, f.mul(c, m));
            }
        }
        out
    }

    pub fn mul(&self, other: &Matrix, f: &Field) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let rows = (0..self.rows)
            .map(|i| other.left_mul(self.row(i), f))
            .collect();
        Matrix::from_rows(rows, other.cols)
    }

    /// Reduced row echelon form in place; returns pivot columns.
    pub fn rref(&mut self, f: &Field) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = f.inv(self[(r, c)]).expect("nonzero pivot");
            for j in c..self.cols {
                self[(r, j)] = f.mul(self[(r, j)], inv);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let factor = self[(i, c)];
                if factor.is_zero() {
                    continue;
                }
                for j in c..self.cols {
                    let v = f.sub(self[(i, j)], f.mul(factor, self[(r, j)]));
                    self[(i, j)] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self, f: &Field) -> usize {
        // Forward elimination only.
        let mut m = self.clone();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = f.inv(m[(r, c)]).expect("nonzero pivot");
            for i in r + 1..m.rows {
                let factor = f.mul(m[(i, c)], inv);
                if factor.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let v = f.sub(m[(i, j)], f.mul(factor, m[(r, j)]));
                    m[(i, j)] = v;
                }
            }
            r += 1;
        }
        r
    }

    /// Basis of the row space (nonzero rows of the RREF).
    pub fn row_basis(&self, f: &Field) -> Matrix {
        let mut m = self.clone();
        let k = m.rref(f).len();
        m.data.truncate(k * m.cols);
        m.rows = k;
        m
    }

    /// Whether every row of `other` lies in the row space of `self`.
    pub fn row_space_contains(&self, other: &Matrix, f: &Field) -> bool {
        self.rank(f) == self.stack(other).rank(f)
    }

    pub fn same_row_space(&self, other: &Matrix, f: &Field) -> bool {
        self.row_space_contains(other, f) && other.row_space_contains(self, f)
    }

    /// Basis of `{v : M v^T = 0}`, returned as rows.
    pub fn kernel(&self, f: &Field) -> Matrix {
        let mut m = self.clone();
        let pivots = m.rref(f);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Vec::with_capacity(free.len());
        for &fc in &free {
            let mut v = vec![Fe::ZERO; self.cols];
            v[fc] = Fe::ONE;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(m[(r, fc)]);
            }
            out.push(v);
        }
        Matrix::from_rows(out, self.cols)
    }

    pub fn inverse(&self, f: &Field) -> Result<Matrix> {
        if self.rows != self.cols {
            return Err(Error::InvalidParams(
                "inverse of a non-square matrix".into(),
            ));
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)];
            }
            aug[(i, n + i)] = Fe::ONE;
        }
        let pivots = aug.rref(f);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            let rank = pivots.iter().filter(|&&c| c < n).count();
            return Err(Error::RankDeficient { rank, expected: n });
        }
        let mut inv = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = aug[(i, n + j)];
            }
        }
        Ok(inv)
    }

    /// Solves `c · M = target` for a row vector `c`, if a solution exists.
    pub fn solve_left(&self, target: &[Fe], f: &Field) -> Option<Vec<Fe>> {
        // Transpose: M^T c^T = target^T, augmented.
        let k = self.rows;
        let mut aug = Matrix::zeros(self.cols, k + 1);
        for i in 0..self.cols {
            for j in 0..k {
                aug[(i, j)] = self[(j, i)];
            }
            aug[(i, k)] = target[i];
        }
        let pivots = aug.rref(f);
        if pivots.last() == Some(&k) {
            return None;
        }
        let mut c = vec![Fe::ZERO; k];
        for (r, &pc) in pivots.iter().enumerate() {
            c[pc] = aug[(r, k)];
        }
        Some(c)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Fe;
    fn index(&self, (i, j): (usize, usize)) -> &Fe {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Fe {
        &mut self.data[i * self.cols + j]
    }
}

/// Incrementally built reduced echelon basis of a set of vectors.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: Vec<(usize, Vec<Fe>)>,
}

impl Echelon {
    pub fn new() -> Self {
        Echelon { rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &mut [Fe], f: &Field) {
        for (piv, row) in &self.rows {
            let c = v[*piv];
            if !c.is_zero() {
                for (a, b) in v.iter_mut().zip(row) {
                    *a = f.sub(*a, f.mul(c, *b));
                }
            }
        }
    }

    pub fn contains(&self, v: &[Fe], f: &Field) -> bool {
        let mut v = v.to_vec();
        self.reduce(&mut v, f);
        v.iter().all(|c| c.is_zero())
    }

    /// Adds `v` if it is independent of the current span; returns whether it was.
    pub fn insert(&mut self, v: &[Fe], f: &Field) -> bool {
        let mut v = v.to_vec();
        self.reduce(&mut v, f);
        let Some(piv) = v.iter().position(|c| !c.is_zero()) else {
            return false;
        };
        let inv = f.inv(v[piv]).expect("nonzero pivot");
        for c in v.iter_mut() {
            *c = f.mul(*c, inv);
        }
        for (_, row) in self.rows.iter_mut() {
            let c = row[piv];
            if !c.is_zero() {
                for (a, b) in row.iter_mut().zip(&v) {
                    *a = f.sub(*a, f.mul(c, *b));
                }
            }
        }
        self.rows.push((piv, v));
        true
    }
}
