//! Sparse and dense linear algebra over F_p.
//!
//! Everything the homology code needs reduces to one primitive: an
//! [`Echelon`] basis keyed by leading (largest) index, whose rows carry a
//! [`Tag`] that records how each row was built from the inserted vectors.

use std::collections::HashMap;

use crate::field::{Coeff, Prime};

/// Sparse vector with entries sorted by index and no explicit zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SparseVec {
    entries: Vec<(usize, Coeff)>,
}

impl SparseVec {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn unit(index: usize) -> Self {
        SparseVec { entries: vec![(index, 1)] }
    }

    /// Builds a vector from unsorted entries, summing duplicates.
    pub fn from_entries(mut entries: Vec<(usize, Coeff)>, f: Prime) -> Self {
        entries.sort_unstable_by_key(|e| e.0);
        let mut out: Vec<(usize, Coeff)> = Vec::with_capacity(entries.len());
        for (i, c) in entries {
            match out.last_mut() {
                Some(last) if last.0 == i => last.1 = f.add(last.1, c),
                _ => out.push((i, c % f.value())),
            }
        }
        out.retain(|e| e.1 != 0);
        SparseVec { entries: out }
    }

    pub fn from_dense(values: &[Coeff]) -> Self {
        SparseVec {
            entries: values
                .iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(i, &c)| (i, c))
                .collect(),
        }
    }

    pub fn to_dense(&self, len: usize) -> Vec<Coeff> {
        let mut out = vec![0; len];
        for &(i, c) in &self.entries {
            out[i] = c;
        }
        out
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(usize, Coeff)] {
        &self.entries
    }

    /// Entry with the largest index.
    #[inline]
    pub fn leading(&self) -> Option<(usize, Coeff)> {
        self.entries.last().copied()
    }

    pub fn get(&self, index: usize) -> Coeff {
        match self.entries.binary_search_by_key(&index, |e| e.0) {
            Ok(pos) => self.entries[pos].1,
            Err(_) => 0,
        }
    }

    /// Restriction to indices in `range`.
    pub fn restrict(&self, range: std::ops::Range<usize>) -> SparseVec {
        let lo = self.entries.partition_point(|e| e.0 < range.start);
        let hi = self.entries.partition_point(|e| e.0 < range.end);
        SparseVec { entries: self.entries[lo..hi].to_vec() }
    }

    /// Applies an index map; entries mapped to `None` are dropped.
    pub fn reindex(&self, map: impl Fn(usize) -> Option<usize>, f: Prime) -> SparseVec {
        let entries = self
            .entries
            .iter()
            .filter_map(|&(i, c)| map(i).map(|j| (j, c)))
            .collect();
        SparseVec::from_entries(entries, f)
    }

    pub fn scale(&mut self, a: Coeff, f: Prime) {
        if a == 0 {
            self.entries.clear();
            return;
        }
        for e in &mut self.entries {
            e.1 = f.mul(e.1, a);
        }
    }

    /// `self += a * other`
    pub fn axpy(&mut self, a: Coeff, other: &SparseVec, f: Prime) {
        if a == 0 || other.is_zero() {
            return;
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut i, mut j) = (0, 0);
        let (xs, ys) = (&self.entries, &other.entries);
        while i < xs.len() || j < ys.len() {
            if j == ys.len() || (i < xs.len() && xs[i].0 < ys[j].0) {
                out.push(xs[i]);
                i += 1;
            } else if i == xs.len() || ys[j].0 < xs[i].0 {
                out.push((ys[j].0, f.mul(a, ys[j].1)));
                j += 1;
            } else {
                let c = f.add(xs[i].1, f.mul(a, ys[j].1));
                if c != 0 {
                    out.push((xs[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
        self.entries = out;
    }
}

/// Bookkeeping carried along with echelon rows.
pub trait Tag: Clone + Send + Sync {
    fn zero() -> Self;
    fn axpy(&mut self, a: Coeff, other: &Self, f: Prime);
}

impl Tag for () {
    fn zero() -> Self {}
    fn axpy(&mut self, _: Coeff, _: &Self, _: Prime) {}
}

impl Tag for SparseVec {
    fn zero() -> Self {
        SparseVec::new()
    }
    fn axpy(&mut self, a: Coeff, other: &Self, f: Prime) {
        SparseVec::axpy(self, a, other, f)
    }
}

impl<A: Tag, B: Tag> Tag for (A, B) {
    fn zero() -> Self {
        (A::zero(), B::zero())
    }
    fn axpy(&mut self, a: Coeff, other: &Self, f: Prime) {
        self.0.axpy(a, &other.0, f);
        self.1.axpy(a, &other.1, f);
    }
}

/// Row-echelon basis of a subspace, pivoted on the largest index of each row.
///
/// Every stored row `r` with tag `t` keeps the linear relation it was built
/// with: if inserted vectors `v_k` had tags `t_k`, then `r = sum c_k v_k` and
/// `t = sum c_k t_k` for the same coefficients.
#[derive(Clone, Debug)]
pub struct Echelon<T: Tag> {
    field: Prime,
    rows: Vec<(SparseVec, T)>,
    pivots: HashMap<usize, usize>,
}

/// Outcome of reducing a vector against an [`Echelon`].
#[derive(Clone, Debug)]
pub struct Reduction<T> {
    /// What is left once no leading entry can be eliminated.
    pub residual: SparseVec,
    /// `sum c_k tag_k` over the rows subtracted, i.e. the tag of
    /// `input - residual`.
    pub combination: T,
}

impl<T: Tag> Echelon<T> {
    pub fn new(field: Prime) -> Self {
        Echelon { field, rows: Vec::new(), pivots: HashMap::new() }
    }

    pub fn field(&self) -> Prime {
        self.field
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> impl Iterator<Item = &(SparseVec, T)> {
        self.rows.iter()
    }

    pub fn reduce(&self, mut v: SparseVec) -> Reduction<T> {
        let f = self.field;
        let mut combination = T::zero();
        while let Some((lead, c)) = v.leading() {
            let Some(&row) = self.pivots.get(&lead) else { break };
            let (rv, rt) = &self.rows[row];
            let factor = f.div(c, rv.leading().unwrap().1);
            v.axpy(f.neg(factor), rv, f);
            combination.axpy(factor, rt, f);
        }
        Reduction { residual: v, combination }
    }

    pub fn contains(&self, v: SparseVec) -> bool {
        self.reduce(v).residual.is_zero()
    }

    /// Inserts `v` with tag `tag`. Returns `Ok(())` when `v` was independent,
    /// otherwise `Err(t)` with `t = tag - combination`: the tag of a
    /// relation whose vector is zero.
    pub fn insert(&mut self, v: SparseVec, tag: T) -> std::result::Result<(), T> {
        let f = self.field;
        let red = self.reduce(v);
        let mut t = tag;
        t.axpy(f.neg(1), &red.combination, f);
        match red.residual.leading() {
            None => Err(t),
            Some((lead, _)) => {
                self.pivots.insert(lead, self.rows.len());
                self.rows.push((red.residual, t));
                Ok(())
            }
        }
    }

    pub fn map_tags<U: Tag>(&self, g: impl Fn(&T) -> U) -> Echelon<U> {
        Echelon {
            field: self.field,
            rows: self.rows.iter().map(|(v, t)| (v.clone(), g(t))).collect(),
            pivots: self.pivots.clone(),
        }
    }
}

/// Coordinates of vectors with respect to a fixed independent family.
#[derive(Clone, Debug)]
pub struct Coordinates {
    echelon: Echelon<SparseVec>,
    len: usize,
}

impl Coordinates {
    /// `basis` must be linearly independent; returns `None` otherwise.
    pub fn new(basis: &[SparseVec], f: Prime) -> Option<Self> {
        let mut echelon = Echelon::new(f);
        for (k, b) in basis.iter().enumerate() {
            echelon.insert(b.clone(), SparseVec::unit(k)).ok()?;
        }
        Some(Coordinates { echelon, len: basis.len() })
    }

    /// Coordinates of `v`, or `None` when `v` is outside the span.
    pub fn of(&self, v: &SparseVec) -> Option<Vec<Coeff>> {
        let red = self.echelon.reduce(v.clone());
        red.residual.is_zero().then(|| red.combination.to_dense(self.len))
    }
}

/// Dense matrix over F_p, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Coeff>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// From row slices; all rows must have equal length.
    pub fn from_rows(rows: &[Vec<Coeff>], cols: usize) -> Self {
        let mut m = Matrix::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            m.data[i * cols..(i + 1) * cols].copy_from_slice(r);
        }
        m
    }

    /// From column vectors of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<Coeff>]) -> Self {
        let mut m = Matrix::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length mismatch");
            for (i, &x) in c.iter().enumerate() {
                m.set(i, j, x);
            }
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Coeff {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Coeff) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<Coeff> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn column_sparse(&self, j: usize) -> SparseVec {
        SparseVec::from_dense(&self.column(j))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn mul(&self, other: &Matrix, f: Prime) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b != 0 {
                        let idx = i * out.cols + j;
                        out.data[idx] = f.add(out.data[idx], f.mul(a, b));
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Coeff], f: Prime) -> Vec<Coeff> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(0, |acc, j| f.add(acc, f.mul(self.get(i, j), v[j])))
            })
            .collect()
    }

    pub fn sub(&self, other: &Matrix, f: Prime) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, b)).collect(),
        }
    }

    pub fn rank(&self, f: Prime) -> usize {
        let mut e: Echelon<()> = Echelon::new(f);
        (0..self.cols).filter(|&j| e.insert(self.column_sparse(j), ()).is_ok()).count()
    }

    /// Basis of the null space, as dense column vectors.
    pub fn kernel(&self, f: Prime) -> Vec<Vec<Coeff>> {
        let mut e: Echelon<SparseVec> = Echelon::new(f);
        let mut out = Vec::new();
        for j in 0..self.cols {
            if let Err(rel) = e.insert(self.column_sparse(j), SparseVec::unit(j)) {
                out.push(rel.to_dense(self.cols));
            }
        }
        out
    }

    /// Indices of a maximal independent set of columns (greedy, left to right).
    pub fn pivot_columns(&self, f: Prime) -> Vec<usize> {
        let mut e: Echelon<()> = Echelon::new(f);
        (0..self.cols).filter(|&j| e.insert(self.column_sparse(j), ()).is_ok()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> Prime {
        Prime::new(3).unwrap()
    }

    #[test]
    fn axpy_cancels() {
        let f = f3();
        let mut a = SparseVec::from_entries(vec![(0, 1), (4, 2)], f);
        let b = SparseVec::from_entries(vec![(4, 1), (7, 1)], f);
        a.axpy(1, &b, f);
        assert_eq!(a.entries(), &[(0, 1), (7, 1)]);
    }

    #[test]
    fn kernel_rank_nullity() {
        let f = f3();
        let m = Matrix::from_rows(&[vec![1, 2, 0, 1], vec![0, 1, 1, 2], vec![1, 0, 1, 0]], 4);
        let k = m.kernel(f);
        assert_eq!(m.rank(f) + k.len(), 4);
        for v in &k {
            assert!(m.apply(v, f).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn coordinates_roundtrip() {
        let f = Prime::new(5).unwrap();
        let basis = vec![
            SparseVec::from_entries(vec![(0, 1), (1, 2)], f),
            SparseVec::from_entries(vec![(1, 1), (2, 3)], f),
        ];
        let c = Coordinates::new(&basis, f).unwrap();
        let mut v = basis[0].clone();
        v.scale(3, f);
        v.axpy(4, &basis[1], f);
        assert_eq!(c.of(&v), Some(vec![3, 4]));
        assert_eq!(c.of(&SparseVec::unit(0)), None);
    }

    #[test]
    fn echelon_relations_are_tracked() {
        let f = f3();
        let mut e: Echelon<SparseVec> = Echelon::new(f);
        let a = SparseVec::from_entries(vec![(0, 1), (2, 1)], f);
        let b = SparseVec::from_entries(vec![(1, 1), (2, 2)], f);
        let mut c = a.clone();
        c.axpy(2, &b, f);
        e.insert(a, SparseVec::unit(0)).unwrap();
        e.insert(b, SparseVec::unit(1)).unwrap();
        let rel = e.insert(c, SparseVec::unit(2)).unwrap_err();
        // c - a - 2b = 0
        assert_eq!(rel.to_dense(3), vec![f.neg(1), f.neg(2), 1]);
    }
}
