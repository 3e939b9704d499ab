//! Exact linear algebra over the rationals: dense and sparse matrices,
//! incremental row echelon forms, and nilpotency checks.
//!
//! Positions here are 0-based; position `i` of a coordinate vector is the
//! coefficient of basis element `e_{i+1}`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Sparse vector: `(position, value)` pairs sorted by position, no zeros.
pub type SparseVec = Vec<(usize, Rational)>;

pub fn sparse_from_dense(v: &[Rational]) -> SparseVec {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect()
}

pub fn dense_from_sparse(v: &[(usize, Rational)], len: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); len];
    for (i, x) in v {
        out[*i] = x.clone();
    }
    out
}

/// Accumulator for sparse linear combinations with a dense scratch buffer.
pub(crate) struct Accumulator {
    values: Vec<Rational>,
    touched: Vec<usize>,
    seen: Vec<bool>,
}

impl Accumulator {
    pub(crate) fn new(len: usize) -> Self {
        Accumulator { values: vec![Rational::zero(); len], touched: Vec::new(), seen: vec![false; len] }
    }

    pub(crate) fn add(&mut self, i: usize, x: &Rational) {
        if !self.seen[i] {
            self.seen[i] = true;
            self.touched.push(i);
        }
        self.values[i] += x;
    }

    pub(crate) fn add_product(&mut self, i: usize, x: &Rational, y: &Rational) {
        self.add(i, &(x * y));
    }

    /// Drains the accumulated entries into a sorted sparse vector.
    pub(crate) fn take(&mut self) -> SparseVec {
        self.touched.sort_unstable();
        let mut out = Vec::with_capacity(self.touched.len());
        for &i in &self.touched {
            self.seen[i] = false;
            let v = std::mem::take(&mut self.values[i]);
            if !v.is_zero() {
                out.push((i, v));
            }
        }
        self.touched.clear();
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch { expected: c, got: row.len() });
            }
            data.extend(row);
        }
        Ok(Matrix { rows: r, cols: c, data })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| Rational::from(x)).collect()).collect())
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

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Rational::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, got: other.rows });
        }
        Ok(self.to_sparse().mul(&other.to_sparse())?.to_dense())
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, got: v.len() });
        }
        Ok((0..self.rows)
            .map(|r| self.row(r).iter().zip(v).filter(|(a, b)| !a.is_zero() && !b.is_zero()).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn rank(&self) -> usize {
        self.to_sparse().rank()
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|r| (r + 1..self.cols).all(|c| self.get(r, c) == self.get(c, r)))
    }

    pub fn to_sparse(&self) -> SparseMatrix {
        SparseMatrix { rows: (0..self.rows).map(|r| sparse_from_dense(self.row(r))).collect(), cols: self.cols }
    }
}

/// Row-sparse matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: Vec<SparseVec>,
    cols: usize,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows: vec![Vec::new(); rows], cols }
    }

    pub fn from_rows(rows: Vec<SparseVec>, cols: usize) -> Self {
        SparseMatrix { rows, cols }
    }

    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &SparseVec {
        &self.rows[r]
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(Vec::is_empty)
    }

    pub fn get(&self, r: usize, c: usize) -> Rational {
        match self.rows[r].binary_search_by_key(&c, |(i, _)| *i) {
            Ok(pos) => self.rows[r][pos].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.len().min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    pub fn mul(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        if self.cols != other.rows.len() {
            return Err(Error::DimensionMismatch { expected: self.cols, got: other.rows.len() });
        }
        let mut acc = Accumulator::new(other.cols);
        let rows = self
            .rows
            .iter()
            .map(|row| {
                for (k, a) in row {
                    for (j, b) in &other.rows[*k] {
                        acc.add_product(*j, a, b);
                    }
                }
                acc.take()
            })
            .collect();
        Ok(SparseMatrix { rows, cols: other.cols })
    }

    /// `tr(A * B)` without forming the product.
    pub fn trace_of_product(&self, other: &SparseMatrix) -> Rational {
        let mut total = Rational::zero();
        for (i, row) in self.rows.iter().enumerate() {
            for (k, a) in row {
                let b = other.get(*k, i);
                if !b.is_zero() {
                    total += a * &b;
                }
            }
        }
        total
    }

    pub fn rank(&self) -> usize {
        let mut ech = Echelon::new();
        for row in &self.rows {
            ech.insert(row.clone());
        }
        ech.rank()
    }

    pub fn to_dense(&self) -> Matrix {
        let mut m = Matrix::zeros(self.rows.len(), self.cols);
        for (r, row) in self.rows.iter().enumerate() {
            for (c, v) in row {
                m.set(r, *c, v.clone());
            }
        }
        m
    }

    /// Traces `tr(A^m)` for `m = 1..=count`, stopping early once a power vanishes.
    pub fn power_traces(&self, count: usize) -> Vec<Rational> {
        let mut out = Vec::with_capacity(count);
        let mut power = self.clone();
        for m in 1..=count {
            if power.is_zero() {
                out.resize(count, Rational::zero());
                break;
            }
            out.push(power.trace());
            if m < count {
                power = power.mul(self).expect("square matrix");
            }
        }
        out
    }
}

/// Incremental row echelon form. Each stored row has a leading 1 at its pivot,
/// which is the row's first nonzero position.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: BTreeMap<usize, SparseVec>,
}

impl Echelon {
    pub fn new() -> Self {
        Echelon::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    pub fn rows(&self) -> impl Iterator<Item = &SparseVec> {
        self.rows.values()
    }

    /// Residual of `v` after elimination against the stored rows.
    pub fn reduce(&self, v: SparseVec) -> SparseVec {
        if self.rows.is_empty() {
            return v;
        }
        let mut w: BTreeMap<usize, Rational> = v.into_iter().collect();
        let mut cursor = 0;
        while let Some((&k, coeff)) = w.range(cursor..).next() {
            if let Some(row) = self.rows.get(&k) {
                let c = coeff.clone();
                for (j, x) in row {
                    let entry = w.entry(*j).or_default();
                    *entry -= &c * x;
                    if entry.is_zero() {
                        w.remove(j);
                    }
                }
            }
            cursor = k + 1;
        }
        w.into_iter().collect()
    }

    pub fn contains(&self, v: SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let r = self.reduce(v);
        let Some((pivot, lead)) = r.first().cloned() else {
            return false;
        };
        let inv = lead.recip().expect("nonzero pivot");
        let row = r.into_iter().map(|(i, x)| (i, x * &inv)).collect();
        self.rows.insert(pivot, row);
        true
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NilpotencyReport {
    pub nilpotent: bool,
    pub index: Option<usize>,
    pub rank_sequence: Vec<usize>,
}

/// Nilpotency of a square matrix, with the ranks of its successive powers.
pub fn nilpotent_operator_check(m: &Matrix) -> Result<NilpotencyReport> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch { expected: m.rows(), got: m.cols() });
    }
    Ok(nilpotency_of_sparse(&m.to_sparse()))
}

pub(crate) fn nilpotency_of_sparse(m: &SparseMatrix) -> NilpotencyReport {
    let n = m.rows();
    let mut ranks = Vec::new();
    let mut power = m.clone();
    for k in 1..=n.max(1) {
        let r = power.rank();
        ranks.push(r);
        if r == 0 {
            return NilpotencyReport { nilpotent: true, index: Some(k), rank_sequence: ranks };
        }
        if k < n {
            power = power.mul(m).expect("square matrix");
        }
    }
    NilpotencyReport { nilpotent: false, index: None, rank_sequence: ranks }
}
