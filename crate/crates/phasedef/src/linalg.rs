//! Exact sparse and dense linear algebra over the rationals, plus the few floating
//! decompositions used for signatures and numeric ranks.

use crate::rational::Rational;
use crate::scalar::Scalar;
use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;

/// Sparse vector: strictly increasing indices, no stored zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseVec {
    pub entries: Vec<(usize, Rational)>,
}

impl SparseVec {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds from unsorted pairs, summing duplicates and dropping zeros.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, Rational)>) -> Self {
        let mut m: BTreeMap<usize, Rational> = BTreeMap::new();
        for (i, v) in pairs {
            *m.entry(i).or_insert_with(Rational::zero) += v;
        }
        SparseVec { entries: m.into_iter().filter(|(_, v)| !v.is_zero()).collect() }
    }

    pub fn from_dense(v: &[Rational]) -> Self {
        SparseVec {
            entries: v
                .iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(i, x)| (i, x.clone()))
                .collect(),
        }
    }

    pub fn unit(i: usize) -> Self {
        SparseVec { entries: vec![(i, Rational::one())] }
    }

    pub fn to_dense(&self, len: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); len];
        for (i, x) in &self.entries {
            v[*i] = x.clone();
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn leading(&self) -> Option<usize> {
        self.entries.first().map(|(i, _)| *i)
    }

    pub fn get(&self, i: usize) -> Rational {
        match self.entries.binary_search_by_key(&i, |(j, _)| *j) {
            Ok(k) => self.entries[k].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    pub fn scale(&self, c: &Rational) -> SparseVec {
        if c.is_zero() {
            return SparseVec::new();
        }
        SparseVec { entries: self.entries.iter().map(|(i, v)| (*i, v * c)).collect() }
    }

    /// `self - c * other`.
    pub fn sub_scaled(&self, c: &Rational, other: &SparseVec) -> SparseVec {
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.entries, &other.entries);
        while i < a.len() || j < b.len() {
            if j >= b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i].clone());
                i += 1;
            } else if i >= a.len() || b[j].0 < a[i].0 {
                out.push((b[j].0, -(c * &b[j].1)));
                j += 1;
            } else {
                let v = &a[i].1 - c * &b[j].1;
                if !v.is_zero() {
                    out.push((a[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
        SparseVec { entries: out }
    }

    pub fn add(&self, other: &SparseVec) -> SparseVec {
        self.sub_scaled(&-Rational::one(), other)
    }

    pub fn max_abs(&self) -> Rational {
        self.entries.iter().map(|(_, v)| v.abs()).max().unwrap_or_else(Rational::zero)
    }

    pub fn dot_dense(&self, v: &[Rational]) -> Rational {
        self.entries.iter().map(|(i, x)| x * &v[*i]).sum()
    }

    pub fn remap(&self, f: impl Fn(usize) -> usize) -> SparseVec {
        SparseVec { entries: self.entries.iter().map(|(i, v)| (f(*i), v.clone())).collect() }
    }
}

/// Incremental row echelon form with unit leading entries.
///
/// In reduced mode every pivot column is zero outside its own row (RREF).
#[derive(Clone, Debug)]
pub struct Echelon {
    rows: Vec<SparseVec>,
    pivot_row: BTreeMap<usize, usize>,
    reduced: bool,
}

impl Echelon {
    pub fn new(reduced: bool) -> Self {
        Echelon { rows: Vec::new(), pivot_row: BTreeMap::new(), reduced }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivot_row.keys().copied()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_row.contains_key(&col)
    }

    /// Rows sorted by pivot column.
    pub fn rows_sorted(&self) -> Vec<SparseVec> {
        self.pivot_row.values().map(|&r| self.rows[r].clone()).collect()
    }

    /// Eliminates every pivot column from `v`.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut v = v.clone();
        let mut floor = 0usize;
        loop {
            let hit = v
                .entries
                .iter()
                .find(|(c, _)| *c >= floor && self.pivot_row.contains_key(c))
                .map(|(c, x)| (*c, x.clone()));
            match hit {
                None => return v,
                Some((c, x)) => {
                    let r = &self.rows[self.pivot_row[&c]];
                    v = v.sub_scaled(&x, r);
                    floor = c + 1;
                }
            }
        }
    }

    /// Reduces only while the leading entry sits on a pivot; enough for rank tests.
    fn reduce_leading(&self, v: &SparseVec) -> SparseVec {
        let mut v = v.clone();
        while let Some(c) = v.leading() {
            match self.pivot_row.get(&c) {
                Some(&r) => {
                    let x = v.entries[0].1.clone();
                    v = v.sub_scaled(&x, &self.rows[r]);
                }
                None => break,
            }
        }
        v
    }

    /// Adds `v` to the span. Returns the new pivot column when the rank grows.
    pub fn insert(&mut self, v: &SparseVec) -> Option<usize> {
        let r = if self.reduced { self.reduce(v) } else { self.reduce_leading(v) };
        let (c, lead) = r.entries.first().map(|(c, x)| (*c, x.clone()))?;
        let row = r.scale(&lead.recip());
        if self.reduced {
            for other in self.rows.iter_mut() {
                let x = other.get(c);
                if !x.is_zero() {
                    *other = other.sub_scaled(&x, &row);
                }
            }
        }
        self.pivot_row.insert(c, self.rows.len());
        self.rows.push(row);
        Some(c)
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        if self.reduced {
            self.reduce(v).is_zero()
        } else {
            self.reduce_leading(v).is_zero()
        }
    }
}

pub fn rank_of(vectors: &[SparseVec]) -> usize {
    let mut e = Echelon::new(false);
    for v in vectors {
        e.insert(v);
    }
    e.rank()
}

/// Basis of `{x : row . x = 0 for all rows}` in `ncols` unknowns, one vector per free column.
pub fn kernel(rows: &[SparseVec], ncols: usize) -> Vec<SparseVec> {
    let mut e = Echelon::new(true);
    for r in rows {
        e.insert(r);
    }
    let mut by_free: BTreeMap<usize, Vec<(usize, Rational)>> = BTreeMap::new();
    for f in 0..ncols {
        if !e.is_pivot(f) {
            by_free.insert(f, vec![(f, Rational::one())]);
        }
    }
    for row in e.rows_sorted() {
        let p = row.leading().expect("nonzero row");
        for (c, x) in row.entries.iter().skip(1) {
            by_free.get_mut(c).expect("free column").push((p, -x.clone()));
        }
    }
    by_free.into_values().map(SparseVec::from_pairs).collect()
}

/// Matrix stored as sparse columns.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix {
    pub nrows: usize,
    pub ncols: usize,
    pub cols: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        SparseMatrix { nrows, ncols, cols: vec![SparseVec::new(); ncols] }
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.nrows, self.ncols)
    }

    pub fn rows(&self) -> Vec<SparseVec> {
        let mut rows: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); self.nrows];
        for (j, col) in self.cols.iter().enumerate() {
            for (i, x) in &col.entries {
                rows[*i].push((j, x.clone()));
            }
        }
        rows.into_iter().map(|entries| SparseVec { entries }).collect()
    }

    pub fn rank(&self) -> usize {
        rank_of(&self.cols)
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut acc = SparseVec::new();
        for (j, x) in &v.entries {
            acc = acc.sub_scaled(&-x.clone(), &self.cols[*j]);
        }
        acc
    }

    /// `self * other`.
    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.ncols, other.nrows);
        SparseMatrix {
            nrows: self.nrows,
            ncols: other.ncols,
            cols: other.cols.iter().map(|c| self.apply(c)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(SparseVec::is_zero)
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(SparseVec::len).sum()
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(self.nrows, self.ncols);
        for (j, col) in self.cols.iter().enumerate() {
            for (i, x) in &col.entries {
                m.set(*i, j, x.clone());
            }
        }
        m
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.nrows, self.ncols);
        for (j, col) in self.cols.iter().enumerate() {
            for (i, x) in &col.entries {
                m[(*i, j)] = crate::rational::to_f64(x);
            }
        }
        m
    }
}

/// Dense row-major rational matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    pub nrows: usize,
    pub ncols: usize,
    pub data: Vec<Rational>,
}

impl DenseMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        DenseMatrix { nrows, ncols, data: vec![Rational::zero(); nrows * ncols] }
    }

    pub fn from_rows(rows: &[Vec<Rational>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let data = rows.iter().flat_map(|r| r.iter().cloned()).collect();
        DenseMatrix { nrows, ncols, data }
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.ncols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.ncols + j] = v;
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut t = DenseMatrix::zeros(self.ncols, self.nrows);
        for i in 0..self.nrows {
            for j in 0..self.ncols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        self.nrows == self.ncols
            && (0..self.nrows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Rank by fraction-free (Bareiss) elimination on the row-scaled integer matrix.
    pub fn rank_bareiss(&self) -> usize {
        let mut a: Vec<Vec<BigInt>> = (0..self.nrows)
            .map(|i| {
                let row = &self.data[i * self.ncols..(i + 1) * self.ncols];
                let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                row.iter().map(|x| (x * Rational::from_integer(l.clone())).to_integer()).collect()
            })
            .collect();
        let (m, n) = (self.nrows, self.ncols);
        let mut prev = BigInt::one();
        let mut rank = 0;
        for col in 0..n {
            if rank == m {
                break;
            }
            let Some(p) = (rank..m).find(|&r| !a[r][col].is_zero()) else { continue };
            a.swap(rank, p);
            for r in rank + 1..m {
                for c in col + 1..n {
                    let v = &a[rank][col] * &a[r][c] - &a[r][col] * &a[rank][c];
                    a[r][c] = v / &prev;
                }
                a[r][col] = BigInt::zero();
            }
            prev = a[rank][col].clone();
            rank += 1;
        }
        rank
    }

    pub fn to_sparse(&self) -> SparseMatrix {
        let mut s = SparseMatrix::zeros(self.nrows, self.ncols);
        for j in 0..self.ncols {
            s.cols[j] = SparseVec::from_dense(
                &(0..self.nrows).map(|i| self.get(i, j).clone()).collect::<Vec<_>>(),
            );
        }
        s
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.nrows, self.ncols, |i, j| crate::rational::to_f64(self.get(i, j)))
    }
}

/// Determinant by Gaussian elimination over any field of scalars.
pub fn determinant<S: Scalar>(m: &[Vec<S>]) -> S {
    let n = m.len();
    let mut a: Vec<Vec<S>> = m.to_vec();
    let mut det = S::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else { return S::zero() };
        if p != col {
            a.swap(p, col);
            det = -det;
        }
        let piv = a[col][col].clone();
        det = det * piv.clone();
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone() / piv.clone();
            for c in col..n {
                let v = a[r][c].clone() - f.clone() * a[col][c].clone();
                a[r][c] = v;
            }
        }
    }
    det
}

/// Exact inertia `(positive, negative, zero)` of a symmetric rational matrix by congruence.
pub fn rational_inertia(m: &DenseMatrix) -> (usize, usize, usize) {
    assert!(m.is_symmetric(), "inertia needs a symmetric matrix");
    let n = m.nrows;
    let mut a: Vec<Vec<Rational>> =
        (0..n).map(|i| (0..n).map(|j| m.get(i, j).clone()).collect()).collect();
    let (mut pos, mut neg) = (0, 0);
    for k in 0..n {
        if a[k][k].is_zero() {
            if let Some(d) = (k + 1..n).find(|&d| !a[d][d].is_zero()) {
                a.swap(k, d);
                for row in a.iter_mut() {
                    row.swap(k, d);
                }
            } else if let Some(j) = (k + 1..n).find(|&j| !a[k][j].is_zero()) {
                // row/col k += row/col j makes the diagonal 2 a_kj
                for c in 0..n {
                    let v = &a[k][c] + &a[j][c];
                    a[k][c] = v;
                }
                for r in 0..n {
                    let v = &a[r][k] + &a[r][j];
                    a[r][k] = v;
                }
            } else {
                continue;
            }
        }
        let piv = a[k][k].clone();
        if piv.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        for r in k + 1..n {
            if a[r][k].is_zero() {
                continue;
            }
            let f = &a[r][k] / &piv;
            for c in k..n {
                let v = &a[r][c] - &f * &a[k][c];
                a[r][c] = v;
            }
        }
        for c in k + 1..n {
            a[k][c] = Rational::zero();
        }
    }
    (pos, neg, n - pos - neg)
}

/// Numeric rank via singular values with threshold `rel * sigma_max`.
pub fn numeric_rank(m: &DMatrix<f64>, rel: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let max = sv.iter().cloned().fold(0.0, f64::max);
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel * max).count()
}

/// Signature of a symmetric matrix by eigendecomposition; `|mu| < rel * max|mu|` is null.
pub fn numeric_signature(m: &DMatrix<f64>, rel: f64) -> (usize, usize, usize) {
    let eig = m.clone().symmetric_eigen().eigenvalues;
    let max = eig.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let thr = rel * max;
    let pos = eig.iter().filter(|&&x| x > thr && max > 0.0).count();
    let neg = eig.iter().filter(|&&x| x < -thr && max > 0.0).count();
    (pos, neg, eig.len() - pos - neg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn sv(d: &[i64]) -> SparseVec {
        SparseVec::from_dense(&d.iter().map(|&x| int(x)).collect::<Vec<_>>())
    }

    #[test]
    fn echelon_rank_and_membership() {
        let vs = [sv(&[1, 2, 3]), sv(&[2, 4, 6]), sv(&[0, 1, 1])];
        assert_eq!(rank_of(&vs), 2);
        let mut e = Echelon::new(true);
        for v in &vs {
            e.insert(v);
        }
        assert!(e.contains(&sv(&[1, 3, 4])));
        assert!(!e.contains(&sv(&[0, 0, 1])));
    }

    #[test]
    fn kernel_matches_definition() {
        let rows = [sv(&[1, 2, 3, 4]), sv(&[2, 4, 7, 9])];
        let k = kernel(&rows, 4);
        assert_eq!(k.len(), 2);
        for v in &k {
            for r in &rows {
                let d = r.to_dense(4);
                assert!(v.dot_dense(&d).is_zero());
            }
        }
    }

    #[test]
    fn bareiss_agrees_with_sparse() {
        let rows = vec![
            vec![rat(1, 2), int(3), int(0)],
            vec![int(1), int(6), int(0)],
            vec![int(0), rat(1, 3), int(5)],
        ];
        let d = DenseMatrix::from_rows(&rows);
        assert_eq!(d.rank_bareiss(), 2);
        assert_eq!(d.to_sparse().rank(), 2);
    }

    #[test]
    fn inertia_of_hyperbolic_plane() {
        let m = DenseMatrix::from_rows(&[vec![int(0), int(1)], vec![int(1), int(0)]]);
        assert_eq!(rational_inertia(&m), (1, 1, 0));
        let m = DenseMatrix::from_rows(&[
            vec![int(1), int(0), int(0)],
            vec![int(0), int(0), int(0)],
            vec![int(0), int(0), int(-3)],
        ]);
        assert_eq!(rational_inertia(&m), (1, 1, 1));
    }

    #[test]
    fn determinant_generic() {
        let m = vec![vec![int(2), int(1)], vec![int(1), int(1)]];
        assert_eq!(determinant(&m), int(1));
        let f = vec![vec![2.0, 1.0], vec![4.0, 2.0]];
        assert_eq!(determinant(&f), 0.0);
    }
}
