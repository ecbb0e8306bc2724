//! Dense integer and rational matrices.
//!
//! Integers are `i128`; every arithmetic step is checked in debug and in the
//! workspace release profile, so an overflow aborts rather than wraps.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Index, IndexMut};

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Int = i128;
pub type Rat = num_rational::Ratio<i128>;

/// Row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{:?}", self.row(i))?;
        }
        f.write_str("]")
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = Int;
    fn index(&self, (i, j): (usize, usize)) -> &Int {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Int {
        &mut self.data[i * self.cols + j]
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Int) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Builds a matrix from rows of equal length.
    pub fn from_rows<R: AsRef<[Int]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::Dimension("ragged rows"));
            }
            data.extend_from_slice(r);
        }
        Ok(IntMatrix { rows: rows.len(), cols, data })
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_cols<R: AsRef<[Int]>>(n: usize, cols: &[R]) -> Result<Self> {
        let mut m = Self::zeros(n, cols.len());
        for (j, c) in cols.iter().enumerate() {
            let c = c.as_ref();
            if c.len() != n {
                return Err(Error::Dimension("column length"));
            }
            for i in 0..n {
                m[(i, j)] = c[i];
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Int] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Int> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Int>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn to_cols(&self) -> Vec<Vec<Int>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.rows) && self.is_square()
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension("matrix product"));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Int]) -> Result<Vec<Int>> {
        if v.len() != self.cols {
            return Err(Error::Dimension("matrix-vector product"));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn mul_rat_vec(&self, v: &[Rat]) -> Result<Vec<Rat>> {
        if v.len() != self.cols {
            return Err(Error::Dimension("matrix-vector product"));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Rat::zero(), |acc, (a, b)| acc + b * *a)
            })
            .collect())
    }

    pub fn add(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension("matrix sum"));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(IntMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn scale(&self, k: Int) -> IntMatrix {
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * k).collect() }
    }

    /// `Mᵀ G M` for a Gram matrix `G`.
    pub fn congruence(&self, gram: &IntMatrix) -> Result<IntMatrix> {
        self.transpose().mul(gram)?.mul(self)
    }

    pub fn block_diag(parts: &[&IntMatrix]) -> IntMatrix {
        let r: usize = parts.iter().map(|p| p.rows).sum();
        let c: usize = parts.iter().map(|p| p.cols).sum();
        let mut out = Self::zeros(r, c);
        let (mut oi, mut oj) = (0, 0);
        for p in parts {
            for i in 0..p.rows {
                for j in 0..p.cols {
                    out[(oi + i, oj + j)] = p[(i, j)];
                }
            }
            oi += p.rows;
            oj += p.cols;
        }
        out
    }

    pub fn hstack(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.rows != other.rows {
            return Err(Error::Dimension("hstack"));
        }
        Ok(Self::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)]
            } else {
                other[(i, j - self.cols)]
            }
        }))
    }

    pub fn select_cols(&self, idx: impl IntoIterator<Item = usize>) -> IntMatrix {
        let idx: Vec<usize> = idx.into_iter().collect();
        Self::from_fn(self.rows, idx.len(), |i, j| self[(i, idx[j])])
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

    /// row[dst] += k * row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: Int) {
        if k != 0 {
            for j in 0..self.cols {
                let v = self[(src, j)];
                self[(dst, j)] += k * v;
            }
        }
    }

    /// col[dst] += k * col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: Int) {
        if k != 0 {
            for i in 0..self.rows {
                let v = self[(i, src)];
                self[(i, dst)] += k * v;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            self[(i, j)] = -self[(i, j)];
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            self[(i, j)] = -self[(i, j)];
        }
    }

    /// Determinant by fraction-free Bareiss elimination.
    pub fn det(&self) -> Result<Int> {
        if !self.is_square() {
            return Err(Error::Dimension("determinant of non-square matrix"));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(1);
        }
        let mut a = self.clone();
        let mut sign = 1;
        let mut prev = 1;
        for k in 0..n - 1 {
            if a[(k, k)] == 0 {
                match (k + 1..n).find(|&i| a[(i, k)] != 0) {
                    Some(i) => {
                        a.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return Ok(0),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[(i, j)] = (a[(i, j)] * a[(k, k)] - a[(i, k)] * a[(k, j)]) / prev;
                }
            }
            prev = a[(k, k)];
        }
        Ok(sign * a[(n - 1, n - 1)])
    }

    /// Smith normal form with unimodular transforms.
    pub fn smith(&self) -> Smith {
        let (m, n) = (self.rows, self.cols);
        let mut a = self.clone();
        let mut left = Self::identity(m);
        let mut left_inv = Self::identity(m);
        let mut right = Self::identity(n);
        let mut right_inv = Self::identity(n);
        let mut rank = 0;
        for t in 0..m.min(n) {
            loop {
                let mut best: Option<(usize, usize)> = None;
                for i in t..m {
                    for j in t..n {
                        let v = a[(i, j)];
                        if v != 0 && best.is_none_or(|(bi, bj)| v.abs() < a[(bi, bj)].abs()) {
                            best = Some((i, j));
                        }
                    }
                }
                let Some((pi, pj)) = best else { break };
                a.swap_rows(t, pi);
                left.swap_rows(t, pi);
                left_inv.swap_cols(t, pi);
                a.swap_cols(t, pj);
                right.swap_cols(t, pj);
                right_inv.swap_rows(t, pj);

                let p = a[(t, t)];
                let mut clean = true;
                for i in t + 1..m {
                    let q = a[(i, t)] / p;
                    a.add_row(i, t, -q);
                    left.add_row(i, t, -q);
                    left_inv.add_col(t, i, q);
                    clean &= a[(i, t)] == 0;
                }
                for j in t + 1..n {
                    let q = a[(t, j)] / p;
                    a.add_col(j, t, -q);
                    right.add_col(j, t, -q);
                    right_inv.add_row(t, j, q);
                    clean &= a[(t, j)] == 0;
                }
                if !clean {
                    continue;
                }
                let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| a[(i, j)] % p != 0));
                match bad {
                    Some(i) => {
                        a.add_row(t, i, 1);
                        left.add_row(t, i, 1);
                        left_inv.add_col(i, t, -1);
                    }
                    None => break,
                }
            }
            if a[(t, t)] == 0 {
                break;
            }
            if a[(t, t)] < 0 {
                a.negate_row(t);
                left.negate_row(t);
                left_inv.negate_col(t);
            }
            rank = t + 1;
        }
        let diag = (0..m.min(n)).map(|i| a[(i, i)]).collect();
        Smith { left, left_inv, diag, right, right_inv, rank }
    }

    /// Saturated basis of the integer right kernel, as columns.
    pub fn kernel(&self) -> IntMatrix {
        let s = self.smith();
        s.right.select_cols(s.rank..self.cols)
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        self.smith().rank
    }
}

/// `left · A · right = diag`, with `left`, `right` unimodular.
#[derive(Clone, Debug)]
pub struct Smith {
    pub left: IntMatrix,
    pub left_inv: IntMatrix,
    pub diag: Vec<Int>,
    pub right: IntMatrix,
    pub right_inv: IntMatrix,
    pub rank: usize,
}

/// A basis of the saturation of a column span together with the index.
#[derive(Clone, Debug)]
pub struct Saturation {
    pub basis: IntMatrix,
    pub index: Int,
}

/// Saturation of the span of the columns of `b` inside `Z^n`.
pub fn saturate(b: &IntMatrix) -> Saturation {
    let s = b.smith();
    let basis = s.left_inv.select_cols(0..s.rank);
    let index = s.diag[..s.rank].iter().product();
    Saturation { basis, index }
}

/// Solves `B y = x` for `B` of full column rank; `None` if `x` is not in the span.
pub fn solve_in_span(b: &IntMatrix, x: &[Int]) -> Option<Vec<Int>> {
    let s = b.smith();
    if s.rank != b.cols() {
        return None;
    }
    let ux = s.left.mul_vec(x).ok()?;
    let mut y = vec![0; b.cols()];
    for i in 0..ux.len() {
        if i < s.rank {
            if ux[i] % s.diag[i] != 0 {
                return None;
            }
            y[i] = ux[i] / s.diag[i];
        } else if ux[i] != 0 {
            return None;
        }
    }
    s.right.mul_vec(&y).ok()
}

/// Solves `B y = x` over the rationals for `B` of full column rank.
pub fn solve_rational(b: &IntMatrix, x: &[Rat]) -> Option<Vec<Rat>> {
    let s = b.smith();
    if s.rank != b.cols() {
        return None;
    }
    let ux = s.left.mul_rat_vec(x).ok()?;
    let mut y = vec![Rat::zero(); b.cols()];
    for i in 0..ux.len() {
        if i < s.rank {
            y[i] = ux[i] / Rat::from_integer(s.diag[i]);
        } else if !ux[i].is_zero() {
            return None;
        }
    }
    s.right.mul_rat_vec(&y).ok()
}

/// Integer inverse of a unimodular matrix.
pub fn unimodular_inverse(m: &IntMatrix) -> Result<IntMatrix> {
    if !m.is_square() {
        return Err(Error::Dimension("inverse of non-square matrix"));
    }
    let s = m.smith();
    if s.rank != m.rows() || s.diag.iter().any(|d| *d != 1) {
        return Err(Error::InvalidGram("matrix is not unimodular"));
    }
    s.right.mul(&s.left)
}

/// Rational inverse of a non-singular matrix, column by column.
pub fn rational_inverse(m: &IntMatrix) -> Result<Vec<Vec<Rat>>> {
    let n = m.rows();
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let e: Vec<Rat> = (0..n).map(|i| if i == j { Rat::one() } else { Rat::zero() }).collect();
        cols.push(solve_rational(m, &e).ok_or(Error::InvalidGram("singular matrix"))?);
    }
    Ok((0..n).map(|i| (0..n).map(|j| cols[j][i]).collect()).collect())
}

pub fn gcd_slice(v: &[Int]) -> Int {
    v.iter().fold(0, |g, x| g.gcd(x))
}

/// Symmetric LDLᵀ over Q with symmetric pivoting.
///
/// Returns a rational basis `w_1..w_n` (columns) and pivots `d_i` with
/// `(w_i, w_j) = δ_ij d_i`.
pub fn diagonalize(gram: &IntMatrix) -> Result<(Vec<Vec<Rat>>, Vec<Rat>)> {
    let n = gram.rows();
    let mut a: Vec<Vec<Rat>> = (0..n).map(|i| (0..n).map(|j| Rat::from_integer(gram[(i, j)])).collect()).collect();
    let mut basis: Vec<Vec<Rat>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect()).collect();
    let mut pivots = Vec::with_capacity(n);
    for k in 0..n {
        if a[k][k].is_zero() {
            if let Some(i) = (k + 1..n).find(|&i| !a[i][i].is_zero()) {
                sym_swap(&mut a, &mut basis, k, i);
            } else if let Some(i) = (k + 1..n).find(|&i| !a[k][i].is_zero()) {
                // (e_k + e_i) has norm 2 a_ki ≠ 0
                sym_add(&mut a, &mut basis, k, i, Rat::one());
            } else {
                return Err(Error::InvalidGram("degenerate form"));
            }
        }
        let p = a[k][k];
        for i in k + 1..n {
            let f = a[i][k] / p;
            if !f.is_zero() {
                sym_add(&mut a, &mut basis, i, k, -f);
            }
        }
        pivots.push(p);
    }
    Ok((basis, pivots))
}

fn sym_swap(a: &mut [Vec<Rat>], basis: &mut [Vec<Rat>], x: usize, y: usize) {
    a.swap(x, y);
    for row in a.iter_mut() {
        row.swap(x, y);
    }
    basis.swap(x, y);
}

/// Replaces basis vector `x` by `x + f·y`.
fn sym_add(a: &mut [Vec<Rat>], basis: &mut [Vec<Rat>], x: usize, y: usize, f: Rat) {
    let n = a.len();
    for j in 0..n {
        let v = a[y][j];
        a[x][j] += f * v;
    }
    for i in 0..n {
        let v = a[i][y];
        a[i][x] += f * v;
    }
    let by = basis[y].clone();
    for (bx, v) in basis[x].iter_mut().zip(by) {
        *bx += f * v;
    }
}

/// Reduces a rational into `[0, m)`.
pub fn rat_mod(x: Rat, m: Int) -> Rat {
    let m = Rat::from_integer(m);
    let q = (x / m).floor();
    let r = x - q * m;
    if r.is_negative() { r + m } else { r }
}
