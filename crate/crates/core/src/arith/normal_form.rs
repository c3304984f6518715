//! Hermite and Smith normal forms of integer matrices.
//!
//! Conventions: the Hermite form is row-style (`H = U·M`), each pivot is
//! positive and the entries above a pivot lie in `[0, pivot)`. The Smith form
//! satisfies `S = U·M·V` with nonnegative diagonal `d₁ | d₂ | …`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::Matrix;
use super::rational::Rational;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged integer rows");
            for (j, &x) in r.iter().enumerate() {
                m.data[i * cols + j] = BigInt::from(x);
            }
        }
        m
    }

    pub fn from_rational(m: &Matrix<Rational>) -> Result<Self> {
        let mut out = Self::zeros(m.rows(), m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                out.data[i * m.cols() + j] = m.get(i, j).to_integer().ok_or(Error::NotIntegral)?;
            }
        }
        Ok(out)
    }

    pub fn to_rational(&self) -> Matrix<Rational> {
        Matrix::from_fn(self.rows, self.cols, (), |i, j| Rational::from(self.get(i, j).clone()))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    fn at(&mut self, i: usize, j: usize) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "integer matrix product shape mismatch");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = a * rhs.get(k, j);
                    *out.at(i, j) += v;
                }
            }
        }
        out
    }

    pub fn det(&self) -> BigInt {
        self.to_rational()
            .det()
            .to_integer()
            .expect("determinant of an integer matrix is an integer")
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] -= f · row[src]
    fn row_axpy(&mut self, dst: usize, src: usize, f: &BigInt) {
        if f.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = f * self.get(src, j);
            *self.at(dst, j) -= v;
        }
    }

    /// col[dst] -= f · col[src]
    fn col_axpy(&mut self, dst: usize, src: usize, f: &BigInt) {
        if f.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = f * self.get(i, src);
            *self.at(i, dst) -= v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.get(i, j);
            *self.at(i, j) = v;
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -self.get(i, j);
            *self.at(i, j) = v;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Diagonal entries `(i, i)` for `i < min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).collect()
    }
}

/// Row-style Hermite normal form: returns `(H, U)` with `H = U·M`, `U`
/// unimodular.
pub fn hnf(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    let mut r = 0;
    for c in 0..h.cols {
        if r == h.rows {
            break;
        }
        // Euclid down the column until only row r is nonzero.
        loop {
            let best = (r..h.rows)
                .filter(|&i| !h.get(i, c).is_zero())
                .min_by(|&a, &b| h.get(a, c).abs().cmp(&h.get(b, c).abs()));
            let Some(p) = best else { break };
            h.swap_rows(r, p);
            u.swap_rows(r, p);
            let mut done = true;
            for i in r + 1..h.rows {
                if h.get(i, c).is_zero() {
                    continue;
                }
                let q = h.get(i, c).div_floor(h.get(r, c));
                h.row_axpy(i, r, &q);
                u.row_axpy(i, r, &q);
                if !h.get(i, c).is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h.get(r, c).is_zero() {
            continue;
        }
        if h.get(r, c).is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        for i in 0..r {
            let q = h.get(i, c).div_floor(h.get(r, c));
            h.row_axpy(i, r, &q);
            u.row_axpy(i, r, &q);
        }
        r += 1;
    }
    (h, u)
}

/// Smith normal form: returns `(S, U, V)` with `S = U·M·V` diagonal and
/// `d₁ | d₂ | …`, all `dᵢ ≥ 0`.
pub fn smith(m: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let mut s = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    let mut v = IntMatrix::identity(m.cols);
    let n = m.rows.min(m.cols);
    let mut t = 0;
    while t < n {
        let pivot = (t..s.rows)
            .flat_map(|i| (t..s.cols).map(move |j| (i, j)))
            .filter(|&(i, j)| !s.get(i, j).is_zero())
            .min_by(|&(a, b), &(c, d)| s.get(a, b).abs().cmp(&s.get(c, d).abs()));
        let Some((pi, pj)) = pivot else { break };
        s.swap_rows(t, pi);
        u.swap_rows(t, pi);
        s.swap_cols(t, pj);
        v.swap_cols(t, pj);

        let mut clean = true;
        for i in t + 1..s.rows {
            let q = s.get(i, t).div_floor(s.get(t, t));
            s.row_axpy(i, t, &q);
            u.row_axpy(i, t, &q);
            if !s.get(i, t).is_zero() {
                clean = false;
            }
        }
        for j in t + 1..s.cols {
            let q = s.get(t, j).div_floor(s.get(t, t));
            s.col_axpy(j, t, &q);
            v.col_axpy(j, t, &q);
            if !s.get(t, j).is_zero() {
                clean = false;
            }
        }
        if !clean {
            // a smaller remainder exists; pick it up as the next pivot
            continue;
        }
        // divisibility: fold an offending row into row t and retry
        let offending = (t + 1..s.rows).find(|&i| (t + 1..s.cols).any(|j| !s.get(i, j).is_multiple_of(s.get(t, t))));
        if let Some(i) = offending {
            let minus_one = -BigInt::one();
            s.row_axpy(t, i, &minus_one);
            u.row_axpy(t, i, &minus_one);
            continue;
        }
        if s.get(t, t).is_negative() {
            s.negate_col(t);
            v.negate_col(t);
        }
        t += 1;
    }
    (s, u, v)
}

/// Nonzero invariant factors `d₁ | d₂ | …` of `m`.
pub fn invariant_factors(m: &IntMatrix) -> Vec<BigInt> {
    smith(m).0.diagonal().into_iter().filter(|d| !d.is_zero()).collect()
}
