use std::fmt;

use serde_json::Value;

use super::rational::Rational;
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// A dense rectangular matrix over an exact field, stored row-major.
///
/// Shape mismatches in the arithmetic methods are programming errors and
/// panic; fallible constructors validate external input.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<S: Scalar> {
    rows: usize,
    cols: usize,
    ctx: S::Ctx,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize, ctx: S::Ctx) -> Self {
        Matrix {
            rows,
            cols,
            ctx,
            data: vec![S::zero(ctx); rows * cols],
        }
    }

    pub fn identity(n: usize, ctx: S::Ctx) -> Self {
        let mut m = Self::zeros(n, n, ctx);
        for i in 0..n {
            m.set(i, i, S::one(ctx));
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, ctx: S::Ctx, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, ctx, data }
    }

    /// Builds a matrix from row vectors; `cols` fixes the width when `rows`
    /// is empty and is checked against every row otherwise.
    pub fn from_rows(rows: Vec<Vec<S>>, cols: usize, ctx: S::Ctx) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Shape(format!(
                    "row {i} has length {}, expected {cols}",
                    row.len()
                )));
            }
            for x in row {
                if x.ctx() != ctx {
                    return Err(Error::Shape(format!("entry {x} belongs to a different field")));
                }
                data.push(x);
            }
        }
        Ok(Matrix {
            rows: n,
            cols,
            ctx,
            data,
        })
    }

    pub fn row_vector(v: &[S], ctx: S::Ctx) -> Self {
        Matrix {
            rows: 1,
            cols: v.len(),
            ctx,
            data: v.to_vec(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn ctx(&self) -> S::Ctx {
        self.ctx
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: S) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<S>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &S> {
        self.data.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn map<T: Scalar>(&self, ctx: T::Ctx, f: impl Fn(&S) -> T) -> Matrix<T> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            ctx,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, self.ctx, |i, j| self.get(j, i).clone())
    }

    pub fn conj(&self) -> Self {
        self.map(self.ctx, |x| x.conj())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, self.ctx, |i, j| self.get(j, i).conj())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(self.rows, rhs.cols, self.ctx);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    let prod = a.clone() * b;
                    out.data[idx] = std::mem::replace(&mut out.data[idx], S::zero(self.ctx)) + prod;
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "matrix sum shape mismatch"
        );
        Self::from_fn(self.rows, self.cols, self.ctx, |i, j| {
            self.get(i, j).clone() + rhs.get(i, j)
        })
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "matrix difference shape mismatch"
        );
        Self::from_fn(self.rows, self.cols, self.ctx, |i, j| {
            self.get(i, j).clone() - rhs.get(i, j)
        })
    }

    pub fn scale(&self, c: &S) -> Self {
        self.map(self.ctx, |x| c.clone() * x)
    }

    /// `M·x` for a column vector `x`.
    pub fn mul_vec(&self, x: &[S]) -> Vec<S> {
        assert_eq!(self.cols, x.len(), "matrix-vector shape mismatch");
        (0..self.rows).map(|i| dot(self.row(i), x, self.ctx)).collect()
    }

    /// `x·M` for a row vector `x`.
    pub fn vec_mul(&self, x: &[S]) -> Vec<S> {
        assert_eq!(self.rows, x.len(), "vector-matrix shape mismatch");
        let mut out = vec![S::zero(self.ctx); self.cols];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                let prod = xi.clone() * self.get(i, j);
                *o = std::mem::replace(o, S::zero(self.ctx)) + prod;
            }
        }
        out
    }

    /// Rows of `self` followed by rows of `other`.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "vstack width mismatch");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            ctx: self.ctx,
            data,
        }
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend(self.row(i).iter().cloned());
        }
        Matrix {
            rows: idx.len(),
            cols: self.cols,
            ctx: self.ctx,
            data,
        }
    }

    pub fn select_columns(&self, idx: &[usize]) -> Self {
        Self::from_fn(self.rows, idx.len(), self.ctx, |i, j| self.get(i, idx[j]).clone())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Reduced row echelon form and the pivot columns. Pivots are 1 and the
    /// remaining entries of a pivot column are 0; zero rows sit at the bottom.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).inv().expect("nonzero pivot");
            for j in c..m.cols {
                let v = inv.clone() * m.get(r, j);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in c..m.cols {
                    let v = m.get(i, j).clone() - f.clone() * m.get(r, j);
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Rows form a basis of `{x : M·x = 0}`, one per free column, with the
    /// free coordinate set to 1.
    pub fn right_kernel(&self) -> Self {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Self::zeros(free.len(), self.cols, self.ctx);
        for (k, &f) in free.iter().enumerate() {
            out.set(k, f, S::one(self.ctx));
            for (i, &p) in pivots.iter().enumerate() {
                out.set(k, p, -r.get(i, f).clone());
            }
        }
        out
    }

    /// Rows form a basis of `{y : y·M = 0}`.
    pub fn left_kernel(&self) -> Self {
        self.transpose().right_kernel()
    }

    /// Some `x` with `M·x = b`, free variables pinned to zero; `None` if
    /// the system is inconsistent.
    pub fn solve(&self, b: &[S]) -> Option<Vec<S>> {
        assert_eq!(self.rows, b.len(), "right-hand side length mismatch");
        let aug = Self::from_fn(self.rows, self.cols + 1, self.ctx, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                b[i].clone()
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![S::zero(self.ctx); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = r.get(i, self.cols).clone();
        }
        Some(x)
    }

    /// Some row vector `y` with `y·M = b`.
    pub fn solve_left(&self, b: &[S]) -> Option<Vec<S>> {
        self.transpose().solve(b)
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let aug = Self::from_fn(n, 2 * n, self.ctx, |i, j| {
            if j < n {
                self.get(i, j).clone()
            } else if j - n == i {
                S::one(self.ctx)
            } else {
                S::zero(self.ctx)
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(Self::from_fn(n, n, self.ctx, |i, j| r.get(i, n + j).clone()))
    }

    pub fn det(&self) -> S {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let mut m = self.clone();
        let n = m.rows;
        let mut det = S::one(self.ctx);
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return S::zero(self.ctx);
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m.get(c, c).clone();
            let inv = piv.inv().expect("nonzero pivot");
            for i in c + 1..n {
                if m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone() * &inv;
                for j in c..n {
                    let v = m.get(i, j).clone() - f.clone() * m.get(c, j);
                    m.set(i, j, v);
                }
            }
            det = det * piv;
        }
        det
    }

    pub fn is_nonsingular(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            (0..self.rows)
                .map(|i| Value::Array(self.row(i).iter().map(S::to_json).collect()))
                .collect(),
        )
    }

    /// Parses `[[entry, ...], ...]`. An empty array needs `cols` to fix the
    /// width; otherwise `cols`, when given, is checked.
    pub fn from_json(v: &Value, cols: Option<usize>, ctx: S::Ctx) -> Result<Self> {
        let rows = v
            .as_array()
            .ok_or_else(|| Error::Parse("matrix must be an array of rows".into()))?;
        let mut parsed = Vec::with_capacity(rows.len());
        for row in rows {
            let row = row
                .as_array()
                .ok_or_else(|| Error::Parse("matrix row must be an array".into()))?;
            parsed.push(row.iter().map(|x| S::from_json(x, ctx)).collect::<Result<Vec<S>>>()?);
        }
        let width = match (cols, parsed.first()) {
            (Some(c), _) => c,
            (None, Some(r)) => r.len(),
            (None, None) => 0,
        };
        Matrix::from_rows(parsed, width, ctx)
    }
}

impl Matrix<Rational> {
    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Rational::from(x)).collect())
                .collect(),
            cols,
            (),
        )
        .expect("rectangular integer rows")
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|x| x.is_integer())
    }
}

/// `Σ xᵢ·yᵢ` (no conjugation).
pub fn dot<S: Scalar>(x: &[S], y: &[S], ctx: S::Ctx) -> S {
    assert_eq!(x.len(), y.len(), "dot product length mismatch");
    x.iter()
        .zip(y)
        .filter(|(a, b)| !a.is_zero() && !b.is_zero())
        .fold(S::zero(ctx), |acc, (a, b)| acc + a.clone() * b)
}

impl<S: Scalar> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
        }
        write!(f, "]")
    }
}
