//! Dense exact matrices over a [`Field`].

use std::ops::Index;

use rayon::prelude::*;

use crate::cyclo::CycNum;
use crate::error::{Error, Result};
use crate::field::Field;

/// Default cap for [`Matrix::order`]; every order we need divides 60.
pub const DEFAULT_ORDER_CAP: usize = 60;

/// Row-major dense matrix with at least one row and one column.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type CycMatrix = Matrix<CycNum>;
pub type GfMatrix = Matrix<crate::gf41::Gf41>;

impl<T: Field> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch("matrix dimensions must be positive".into()));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<T>]) -> Result<Self> {
        let n = cols.len();
        let m = cols.first().map_or(0, Vec::len);
        if cols.iter().any(|c| c.len() != m) {
            return Err(Error::DimensionMismatch("columns of unequal length".into()));
        }
        if n == 0 || m == 0 {
            return Err(Error::DimensionMismatch("matrix dimensions must be positive".into()));
        }
        Ok(Self::from_fn(m, n, |r, c| cols[c][r].clone()))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| T::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |r, c| if r == c { T::one() } else { T::zero() })
    }

    pub fn diagonal(entries: &[T]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |r, c| if r == c { entries[r].clone() } else { T::zero() })
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

    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: T) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<T> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn map<U: Field>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn try_map<U: Field>(&self, f: impl Fn(&T) -> Result<U>) -> Result<Matrix<U>> {
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect::<Result<_>>()?,
        })
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.add(b)).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.sub(b)).collect(),
        })
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|a| a.mul(s))
    }

    /// `self − s·I`.
    pub fn minus_scalar(&self, s: &T) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("minus_scalar needs a square matrix".into()));
        }
        let mut out = self.clone();
        for k in 0..self.rows {
            let v = out.get(k, k).sub(s);
            out.set(k, k, v);
        }
        Ok(out)
    }

    /// Exact product. Output rows are computed in parallel; the result is deterministic.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let n = other.cols;
        let mut data = vec![T::zero(); self.rows * n];
        data.par_chunks_mut(n).enumerate().for_each(|(r, out)| {
            for (k, a) in self.row(r).iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (c, b) in other.row(k).iter().enumerate() {
                    if !b.is_zero() {
                        out[c] = out[c].add(&a.mul(b));
                    }
                }
            }
        });
        Ok(Matrix {
            rows: self.rows,
            cols: n,
            data,
        })
    }

    pub fn mul_vec(&self, v: &[T]) -> Result<Vec<T>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} for {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|r| {
                self.row(r).iter().zip(v).fold(T::zero(), |acc, (a, x)| {
                    if a.is_zero() || x.is_zero() {
                        acc
                    } else {
                        acc.add(&a.mul(x))
                    }
                })
            })
            .collect())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| {
                self.row(r)
                    .iter()
                    .enumerate()
                    .all(|(c, v)| if r == c { v.is_one() } else { v.is_zero() })
            })
    }

    pub fn is_diagonal(&self) -> bool {
        self.is_square() && (0..self.rows).all(|r| self.row(r).iter().enumerate().all(|(c, v)| r == c || v.is_zero()))
    }

    /// Exactly one nonzero entry in every row and every column.
    pub fn is_monomial(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        let mut col_hits = vec![0usize; self.cols];
        for r in 0..self.rows {
            let mut hits = 0;
            for (c, v) in self.row(r).iter().enumerate() {
                if !v.is_zero() {
                    hits += 1;
                    col_hits[c] += 1;
                }
            }
            if hits != 1 {
                return false;
            }
        }
        col_hits.iter().all(|&h| h == 1)
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.transpose()
    }

    /// Inverse by Gauss–Jordan elimination, pivoting on the first nonzero entry.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a: Vec<Vec<T>> = (0..n).map(|r| self.row(r).to_vec()).collect();
        let mut inv: Vec<Vec<T>> = (0..n)
            .map(|r| (0..n).map(|c| if r == c { T::one() } else { T::zero() }).collect())
            .collect();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[r][col].is_zero()).ok_or(Error::Singular)?;
            a.swap(col, pivot);
            inv.swap(col, pivot);
            let p = a[col][col].inv().ok_or(Error::Singular)?;
            for v in a[col].iter_mut() {
                *v = v.mul(&p);
            }
            for v in inv[col].iter_mut() {
                *v = v.mul(&p);
            }
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let f = a[r][col].clone();
                for c in 0..n {
                    if !a[col][c].is_zero() {
                        let d = a[col][c].mul(&f);
                        a[r][c] = a[r][c].sub(&d);
                    }
                    if !inv[col][c].is_zero() {
                        let d = inv[col][c].mul(&f);
                        inv[r][c] = inv[r][c].sub(&d);
                    }
                }
            }
        }
        Self::from_rows(inv)
    }

    /// `self^e` by repeated squaring; negative exponents invert first.
    pub fn pow(&self, e: i64) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("power of a non-square matrix".into()));
        }
        let mut base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Least n ≤ cap with selfⁿ = I, by repeated multiplication.
    pub fn order(&self, cap: usize) -> Result<usize> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("order of a non-square matrix".into()));
        }
        let mut acc = self.clone();
        for n in 1..=cap {
            if acc.is_identity() {
                return Ok(n);
            }
            acc = acc.mul(self)?;
        }
        Err(Error::OrderExceedsCap(cap))
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut a: Vec<Vec<T>> = (0..self.rows).map(|r| self.row(r).to_vec()).collect();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !a[r][col].is_zero()) else {
                continue;
            };
            a.swap(row, p);
            let inv = a[row][col].inv().expect("pivot is nonzero");
            for v in a[row].iter_mut() {
                *v = v.mul(&inv);
            }
            for r in 0..self.rows {
                if r == row || a[r][col].is_zero() {
                    continue;
                }
                let f = a[r][col].clone();
                let (pivot_row, target) = if r < row {
                    let (lo, hi) = a.split_at_mut(row);
                    (&hi[0], &mut lo[r])
                } else {
                    let (lo, hi) = a.split_at_mut(r);
                    (&lo[row], &mut hi[0])
                };
                for (t, p) in target[col..].iter_mut().zip(&pivot_row[col..]) {
                    if !p.is_zero() {
                        *t = t.sub(&p.mul(&f));
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (
            Matrix {
                rows: self.rows,
                cols: self.cols,
                data: a.into_iter().flatten().collect(),
            },
            pivots,
        )
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right nullspace: one vector per free column, in column
    /// order, with that free variable set to 1 and the others to 0.
    pub fn nullspace(&self) -> Vec<Vec<T>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![T::zero(); self.cols];
                v[f] = T::one();
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = r.get(row, f).neg();
                }
                v
            })
            .collect()
    }

    /// Vertical concatenation.
    pub fn stack(ms: &[Self]) -> Result<Self> {
        let first = ms
            .first()
            .ok_or_else(|| Error::DimensionMismatch("nothing to stack".into()))?;
        if ms.iter().any(|m| m.cols != first.cols) {
            return Err(Error::DimensionMismatch(
                "stacked matrices need equal column counts".into(),
            ));
        }
        let rows = ms.iter().map(|m| m.rows).sum();
        Self::new(
            rows,
            first.cols,
            ms.iter().flat_map(|m| m.data.iter().cloned()).collect(),
        )
    }

    /// Restriction to a square index set (rows and columns).
    pub fn submatrix(&self, idx: &[usize]) -> Self {
        Self::from_fn(idx.len(), idx.len(), |r, c| self.get(idx[r], idx[c]).clone())
    }
}

/// Nullspace of the vertically stacked system.
pub fn common_nullspace<T: Field>(ms: &[Matrix<T>]) -> Result<Vec<Vec<T>>> {
    Ok(Matrix::stack(ms)?.nullspace())
}

impl Matrix<CycNum> {
    /// Conjugate transpose.
    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).conj())
    }

    /// M·M* = I exactly.
    pub fn is_unitary(&self) -> bool {
        self.is_square()
            && self
                .mul(&self.conj_transpose())
                .map(|p| p.is_identity())
                .unwrap_or(false)
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (r, c): (usize, usize)) -> &T {
        &self.data[r * self.cols + c]
    }
}
