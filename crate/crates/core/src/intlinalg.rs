//! Exact integer linear algebra: Smith and Hermite normal forms, saturated
//! kernel bases (Gale duals) and exactness certificates for
//! `0 → Z^{b1} → Z^s → Z^{r-1} → 0`.
//!
//! Everything is generic over [`ExactInteger`]; use `BigInt` unless the input
//! is known to stay small.

use std::fmt::{self, Debug, Display};

use num_integer::Integer;
use num_traits::{FromPrimitive, One, Signed, Zero};

use crate::error::{Error, Result};

/// An exact integer ring element: `i64`, `i128` and `BigInt` all qualify.
pub trait ExactInteger:
    Integer + Signed + Clone + Debug + Display + FromPrimitive + Send + Sync + 'static
{
}

impl<T> ExactInteger for T where
    T: Integer + Signed + Clone + Debug + Display + FromPrimitive + Send + Sync + 'static
{
}

/// Dense row-major integer matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix<T> {
    rows: usize,
    cols: usize,
    entries: Vec<T>,
}

impl<T: ExactInteger> IntMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, entries: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        IntMatrix { rows, cols, entries }
    }

    /// Builds a matrix from explicit rows; all rows must have `cols` entries.
    pub fn from_rows(cols: usize, rows: Vec<Vec<T>>) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::InvalidArgument(format!(
                "row of length {} in a matrix with {cols} columns",
                bad.len()
            )));
        }
        let n = rows.len();
        Ok(IntMatrix { rows: n, cols, entries: rows.into_iter().flatten().collect() })
    }

    /// Convenience constructor from small integers.
    pub fn from_i64_rows(cols: usize, rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(
            cols,
            rows.iter().map(|r| r.iter().map(|&x| T::from_i64(x).expect("i64 fits")).collect()).collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::InvalidArgument(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = T::zero();
            for k in 0..self.cols {
                if !self[(i, k)].is_zero() && !other[(k, j)].is_zero() {
                    acc = acc + self[(i, k)].clone() * other[(k, j)].clone();
                }
            }
            acc
        }))
    }

    /// Keeps the columns in `range`.
    pub fn column_slice(&self, range: std::ops::Range<usize>) -> Self {
        let start = range.start;
        Self::from_fn(self.rows, range.len(), |i, j| self[(i, start + j)].clone())
    }

    pub fn map<U: ExactInteger>(&self, f: impl Fn(&T) -> U) -> IntMatrix<U> {
        IntMatrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(f).collect() }
    }

    /// Rank over the rationals by fraction-free elimination.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut prev = T::one();
        let mut rank = 0;
        for c in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let Some(p) = (rank..m.rows).find(|&i| !m[(i, c)].is_zero()) else { continue };
            m.swap_rows(rank, p);
            let pivot = m[(rank, c)].clone();
            for i in rank + 1..m.rows {
                let lead = m[(i, c)].clone();
                for j in c..m.cols {
                    let v = (pivot.clone() * m[(i, j)].clone() - lead.clone() * m[(rank, j)].clone()) / prev.clone();
                    m[(i, j)] = v;
                }
            }
            prev = pivot;
            rank += 1;
        }
        rank
    }

    /// Determinant of a square matrix (Bareiss).
    pub fn determinant(&self) -> Result<T> {
        if self.rows != self.cols {
            return Err(Error::InvalidArgument("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut prev = T::one();
        let mut sign = T::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !m[(i, k)].is_zero()) else { return Ok(T::zero()) };
            if p != k {
                m.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (m[(k, k)].clone() * m[(i, j)].clone() - m[(i, k)].clone() * m[(k, j)].clone())
                        / prev.clone();
                    m[(i, j)] = v;
                }
                m[(i, k)] = T::zero();
            }
            prev = m[(k, k)].clone();
        }
        Ok(if n == 0 { T::one() } else { sign * m[(n - 1, n - 1)].clone() })
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    // row[target] += factor * row[source]
    fn add_row_multiple(&mut self, target: usize, source: usize, factor: &T) {
        for j in 0..self.cols {
            let v = self[(source, j)].clone();
            if !v.is_zero() {
                self[(target, j)] = self[(target, j)].clone() + factor.clone() * v;
            }
        }
    }

    fn add_col_multiple(&mut self, target: usize, source: usize, factor: &T) {
        for i in 0..self.rows {
            let v = self[(i, source)].clone();
            if !v.is_zero() {
                self[(i, target)] = self[(i, target)].clone() + factor.clone() * v;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            self[(i, j)] = -self[(i, j)].clone();
        }
    }
}

impl<T> std::ops::Index<(usize, usize)> for IntMatrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.entries[i * self.cols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for IntMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.entries[i * self.cols + j]
    }
}

/// Fixed bracketed layout: one bracketed row per line, columns right-aligned.
/// A matrix without rows prints as `[]`.
impl<T: Display> Display for IntMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rows == 0 {
            return writeln!(f, "[]");
        }
        let cells: Vec<String> = self.entries.iter().map(|x| x.to_string()).collect();
        let width = cells.iter().map(String::len).max().unwrap_or(0);
        for i in 0..self.rows {
            f.write_str("[")?;
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{:>width$}", cells[i * self.cols + j])?;
            }
            f.write_str("]\n")?;
        }
        Ok(())
    }
}

/// `U · A · V = S` with `U`, `V` unimodular and `S` in Smith normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition<T> {
    pub u: IntMatrix<T>,
    pub s: IntMatrix<T>,
    pub v: IntMatrix<T>,
}

impl<T: ExactInteger> SmithDecomposition<T> {
    /// The nonzero diagonal entries `d1 | d2 | ...`.
    pub fn invariants(&self) -> Vec<T> {
        (0..self.s.rows.min(self.s.cols))
            .map(|i| self.s[(i, i)].clone())
            .take_while(|d| !d.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariants().len()
    }
}

/// Smith normal form with deterministic pivoting: the smallest-magnitude
/// nonzero entry of the active block, ties broken by row-major position.
pub fn smith_normal_form<T: ExactInteger>(a: &IntMatrix<T>) -> SmithDecomposition<T> {
    let (m, n) = a.shape();
    let mut s = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);

    for t in 0..m.min(n) {
        loop {
            let Some((pi, pj)) = min_pivot(&s, t) else {
                return SmithDecomposition { u, s, v };
            };
            s.swap_rows(t, pi);
            u.swap_rows(t, pi);
            s.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let pivot = s[(t, t)].clone();
            let mut dirty = false;
            for i in t + 1..m {
                if s[(i, t)].is_zero() {
                    continue;
                }
                let q = -s[(i, t)].div_floor(&pivot);
                s.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                dirty |= !s[(i, t)].is_zero();
            }
            for j in t + 1..n {
                if s[(t, j)].is_zero() {
                    continue;
                }
                let q = -s[(t, j)].div_floor(&pivot);
                s.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                dirty |= !s[(t, j)].is_zero();
            }
            if dirty {
                continue;
            }
            // row/column cleared; enforce divisibility of the trailing block
            let offender = (t + 1..m)
                .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| !s[(i, j)].is_multiple_of(&pivot));
            match offender {
                Some((i, _)) => {
                    let one = T::one();
                    s.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if s[(t, t)].is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }
    SmithDecomposition { u, s, v }
}

fn min_pivot<T: ExactInteger>(s: &IntMatrix<T>, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), T)> = None;
    for i in t..s.rows {
        for j in t..s.cols {
            let x = s[(i, j)].abs();
            if x.is_zero() {
                continue;
            }
            if best.as_ref().is_none_or(|(_, b)| x < *b) {
                best = Some(((i, j), x));
            }
        }
    }
    best.map(|(pos, _)| pos)
}

/// Row-style Hermite normal form: echelon, positive pivots, entries above each
/// pivot reduced into `[0, pivot)`. Zero rows are dropped.
pub fn hermite_normal_form<T: ExactInteger>(a: &IntMatrix<T>) -> IntMatrix<T> {
    let mut h = a.clone();
    let mut p = 0;
    for c in 0..h.cols {
        if p == h.rows {
            break;
        }
        loop {
            // smallest nonzero entry at or below row p in column c
            let mut best: Option<(usize, T)> = None;
            for i in p..h.rows {
                let x = h[(i, c)].abs();
                if !x.is_zero() && best.as_ref().is_none_or(|(_, b)| x < *b) {
                    best = Some((i, x));
                }
            }
            let Some((bi, _)) = best else { break };
            h.swap_rows(p, bi);
            let pivot = h[(p, c)].clone();
            let mut done = true;
            for i in p + 1..h.rows {
                if h[(i, c)].is_zero() {
                    continue;
                }
                let q = -h[(i, c)].div_floor(&pivot);
                h.add_row_multiple(i, p, &q);
                done &= h[(i, c)].is_zero();
            }
            if done {
                break;
            }
        }
        if h[(p, c)].is_zero() {
            continue;
        }
        if h[(p, c)].is_negative() {
            h.negate_row(p);
        }
        let pivot = h[(p, c)].clone();
        for i in 0..p {
            let q = -h[(i, c)].div_floor(&pivot);
            if !q.is_zero() {
                h.add_row_multiple(i, p, &q);
            }
        }
        p += 1;
    }
    let cols = h.cols;
    IntMatrix::from_rows(cols, (0..p).map(|i| h.row(i).to_vec()).collect()).expect("row lengths agree")
}

/// Gale dual of a boundary map `A: Z^s → Z^{r-1}`: an `s × b1` matrix whose
/// columns form a basis of the saturated kernel, in column-Hermite form.
pub fn gale_dual<T: ExactInteger>(a: &IntMatrix<T>) -> Result<IntMatrix<T>> {
    let snf = smith_normal_form(a);
    let invariants = snf.invariants();
    if invariants.len() < a.rows() {
        return Err(Error::NotABoundaryMap(format!(
            "rank {} is less than the {} rows",
            invariants.len(),
            a.rows()
        )));
    }
    if let Some(d) = invariants.iter().find(|d| !d.is_one()) {
        return Err(Error::NotABoundaryMap(format!("Smith invariant {d} differs from 1")));
    }
    let kernel = snf.v.column_slice(invariants.len()..a.cols());
    let basis = hermite_normal_form(&kernel.transpose()).transpose();
    Ok(basis)
}

/// Which parts of the short exact sequence `0 → Z^k →B Z^s →A Z^m → 0` hold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactnessReport {
    pub composes_to_zero: bool,
    pub injective: bool,
    pub spans_kernel: bool,
    pub saturated: bool,
    pub surjective: bool,
}

impl ExactnessReport {
    pub fn is_exact(&self) -> bool {
        self.failures().is_empty()
    }

    pub fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.composes_to_zero {
            out.push("composite A*B is nonzero");
        }
        if !self.injective {
            out.push("B not injective");
        }
        if !self.spans_kernel {
            out.push("not spanning");
        }
        if !self.saturated {
            out.push("kernel not saturated");
        }
        if !self.surjective {
            out.push("A not surjective");
        }
        out
    }
}

pub fn verify_exact<T: ExactInteger>(a: &IntMatrix<T>, b: &IntMatrix<T>) -> Result<ExactnessReport> {
    let composite = a.mul(b)?;
    let snf_a = smith_normal_form(a);
    let snf_b = smith_normal_form(b);
    let rank_a = snf_a.rank();
    let rank_b = snf_b.rank();
    Ok(ExactnessReport {
        composes_to_zero: composite.is_zero(),
        injective: rank_b == b.cols(),
        spans_kernel: rank_b == a.cols() - rank_a,
        saturated: snf_b.invariants().iter().all(One::is_one),
        surjective: rank_a == a.rows() && snf_a.invariants().iter().all(One::is_one),
    })
}
