//! Exact linear algebra: dense matrices over [`FieldElem`], sparse rank
//! (exact and modular), and determinants of polynomial matrices.

use std::collections::{BTreeMap, HashMap};

use super::field::FieldElem;
use super::modp::{inv_mod, mul_mod, ModError, PrimeContext};
use super::poly::Poly;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<FieldElem>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix { rows, cols, data: vec![FieldElem::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Matrix {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, FieldElem::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<FieldElem>>) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_ints(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| FieldElem::from_int(v)).collect()).collect())
    }

    pub fn diag(d: &[FieldElem]) -> Matrix {
        let mut m = Matrix::zeros(d.len(), d.len());
        for (i, x) in d.iter().enumerate() {
            m.set(i, i, x.clone());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &FieldElem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: FieldElem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[FieldElem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[FieldElem] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn trace(&self) -> FieldElem {
        (0..self.rows.min(self.cols)).fold(FieldElem::zero(), |acc, i| &acc + self.get(i, i))
    }

    pub fn radicand(&self) -> Option<i64> {
        self.data.iter().find_map(|x| x.radicand())
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.rows, "dimension mismatch");
        let mut m = Matrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        let v = m.get(i, j) + &(a * b);
                        m.set(i, j, v);
                    }
                }
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[FieldElem]) -> Vec<FieldElem> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(FieldElem::zero(), |acc, (a, b)| &acc + &(a * b))
            })
            .collect()
    }

    pub fn add(&self, o: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, s: &FieldElem) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * s).collect() }
    }

    /// `AB − BA`.
    pub fn commutator(&self, o: &Matrix) -> Matrix {
        self.mul(o).sub(&o.mul(self))
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else { continue };
            if pr != r {
                for j in 0..m.cols {
                    m.data.swap(pr * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m.get(r, c).inv();
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let v = m.get(r, j);
                    if !v.is_zero() {
                        let nv = m.get(i, j) - &(&f * v);
                        m.set(i, j, nv);
                    }
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

    /// A solution of `self · x = b` (free variables set to zero), if any.
    pub fn solve(&self, b: &[FieldElem]) -> Option<Vec<FieldElem>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Matrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let (r, piv) = aug.rref();
        if piv.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![FieldElem::zero(); self.cols];
        for (k, &c) in piv.iter().enumerate() {
            x[c] = r.get(k, self.cols).clone();
        }
        Some(x)
    }

    /// Basis of the right null space.
    pub fn nullspace(&self) -> Vec<Vec<FieldElem>> {
        let (r, piv) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !piv.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![FieldElem::zero(); self.cols];
                v[f] = FieldElem::one();
                for (k, &c) in piv.iter().enumerate() {
                    v[c] = -r.get(k, f);
                }
                v
            })
            .collect()
    }

    pub fn det(&self) -> FieldElem {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = FieldElem::one();
        for c in 0..n {
            let Some(pr) = (c..n).find(|&i| !m.get(i, c).is_zero()) else { return FieldElem::zero() };
            if pr != c {
                for j in 0..n {
                    m.data.swap(pr * n + j, c * n + j);
                }
                det = -det;
            }
            let p = m.get(c, c).clone();
            det = &det * &p;
            let inv = p.inv();
            for i in c + 1..n {
                let f = m.get(i, c) * &inv;
                if f.is_zero() {
                    continue;
                }
                for j in c..n {
                    let nv = m.get(i, j) - &(&f * m.get(c, j));
                    m.set(i, j, nv);
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, FieldElem::one());
        }
        let (r, piv) = aug.rref();
        if piv.len() < n || piv[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j).clone());
            }
        }
        Some(inv)
    }
}

impl std::fmt::Debug for Matrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.rows {
            writeln!(f, "{:?}", self.row(i))?;
        }
        Ok(())
    }
}

/// Row-sparse matrix; each row holds `(column, value)` pairs with strictly
/// increasing columns and no zeros.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SparseMatrix {
    ncols: usize,
    rows: Vec<Vec<(usize, FieldElem)>>,
}

impl SparseMatrix {
    pub fn new(ncols: usize) -> SparseMatrix {
        SparseMatrix { ncols, rows: Vec::new() }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<(usize, FieldElem)>] {
        &self.rows
    }

    /// Appends a row given in any order; duplicate columns are summed.
    pub fn push_row(&mut self, entries: impl IntoIterator<Item = (usize, FieldElem)>) {
        let mut m: BTreeMap<usize, FieldElem> = BTreeMap::new();
        for (c, v) in entries {
            assert!(c < self.ncols, "column out of range");
            let s = m.entry(c).or_default();
            *s = &*s + &v;
        }
        self.rows.push(m.into_iter().filter(|(_, v)| !v.is_zero()).collect());
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    pub fn to_dense(&self) -> Matrix {
        let mut m = Matrix::zeros(self.rows.len(), self.ncols);
        for (i, r) in self.rows.iter().enumerate() {
            for (c, v) in r {
                m.set(i, *c, v.clone());
            }
        }
        m
    }

    /// `self · other` where `other` has `self.ncols` rows.
    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.ncols, other.rows.len());
        let mut out = SparseMatrix::new(other.ncols);
        for r in &self.rows {
            let mut acc: BTreeMap<usize, FieldElem> = BTreeMap::new();
            for (k, a) in r {
                for (j, b) in &other.rows[*k] {
                    let s = acc.entry(*j).or_default();
                    *s = &*s + &(a * b);
                }
            }
            out.rows.push(acc.into_iter().filter(|(_, v)| !v.is_zero()).collect());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.is_empty())
    }

    /// Exact rank by sparse elimination over the coefficient field: rows are
    /// bucketed by leading column and each bucket is reduced against its
    /// sparsest row.
    pub fn rank(&self) -> usize {
        eliminate(
            self.rows.clone(),
            |a, b| sub_scaled(a, b),
        )
    }

    /// Rank of the reduction modulo `ctx.prime()`.
    pub fn rank_mod(&self, ctx: &PrimeContext) -> Result<usize, ModError> {
        let p = ctx.prime();
        let mut rows = Vec::with_capacity(self.rows.len());
        for r in &self.rows {
            let mut out = Vec::with_capacity(r.len());
            for (c, v) in r {
                let x = ctx.reduce_elem(v)?;
                if x != 0 {
                    out.push((*c, x));
                }
            }
            rows.push(out);
        }
        Ok(eliminate(rows, |a, b| sub_scaled_mod(a, b, p)))
    }
}

fn eliminate<T>(rows: Vec<Vec<(usize, T)>>, reduce: impl Fn(&[(usize, T)], &[(usize, T)]) -> Vec<(usize, T)>) -> usize {
    let mut buckets: BTreeMap<usize, Vec<Vec<(usize, T)>>> = BTreeMap::new();
    for r in rows {
        if let Some(&(c, _)) = r.first() {
            buckets.entry(c).or_default().push(r);
        }
    }
    let mut rank = 0;
    while let Some((_, mut bucket)) = buckets.pop_first() {
        let k = (0..bucket.len()).min_by_key(|&i| bucket[i].len()).unwrap();
        let pivot = bucket.swap_remove(k);
        rank += 1;
        for r in bucket {
            let red = reduce(&r, &pivot);
            if let Some(&(c, _)) = red.first() {
                buckets.entry(c).or_default().push(red);
            }
        }
    }
    rank
}

// r − (r₀/p₀)·p, assuming both lead with the same column
fn sub_scaled(r: &[(usize, FieldElem)], p: &[(usize, FieldElem)]) -> Vec<(usize, FieldElem)> {
    let f = &r[0].1 / &p[0].1;
    let mut out = Vec::with_capacity(r.len() + p.len());
    let (mut i, mut j) = (1, 1);
    while i < r.len() || j < p.len() {
        let ci = r.get(i).map_or(usize::MAX, |x| x.0);
        let cj = p.get(j).map_or(usize::MAX, |x| x.0);
        if ci < cj {
            out.push(r[i].clone());
            i += 1;
        } else if cj < ci {
            out.push((cj, -&(&f * &p[j].1)));
            j += 1;
        } else {
            let v = &r[i].1 - &(&f * &p[j].1);
            if !v.is_zero() {
                out.push((ci, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn sub_scaled_mod(r: &[(usize, u64)], pv: &[(usize, u64)], p: u64) -> Vec<(usize, u64)> {
    let f = mul_mod(r[0].1, inv_mod(pv[0].1, p), p);
    let mut out = Vec::with_capacity(r.len() + pv.len());
    let (mut i, mut j) = (1, 1);
    while i < r.len() || j < pv.len() {
        let ci = r.get(i).map_or(usize::MAX, |x| x.0);
        let cj = pv.get(j).map_or(usize::MAX, |x| x.0);
        if ci < cj {
            out.push(r[i]);
            i += 1;
        } else if cj < ci {
            out.push((cj, (p - mul_mod(f, pv[j].1, p)) % p));
            j += 1;
        } else {
            let v = (r[i].1 + p - mul_mod(f, pv[j].1, p)) % p;
            if v != 0 {
                out.push((ci, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Determinant of a square matrix of polynomials by Laplace expansion along
/// rows, memoised over the set of remaining columns. Division-free, so it
/// stays exact over any coefficient ring.
pub fn poly_det(m: &[Vec<Poly>]) -> Poly {
    let k = m.len();
    assert!(k < 64, "matrix too large");
    assert!(m.iter().all(|r| r.len() == k), "determinant of non-square matrix");
    if k == 0 {
        panic!("empty matrix");
    }
    let nv = m[0][0].nvars();
    let mut memo: HashMap<u64, Poly> = HashMap::new();
    fn rec(m: &[Vec<Poly>], mask: u64, nv: usize, memo: &mut HashMap<u64, Poly>) -> Poly {
        let k = m.len();
        let r = mask.count_ones() as usize;
        if r == k {
            return Poly::one(nv);
        }
        if let Some(v) = memo.get(&mask) {
            return v.clone();
        }
        let mut acc = Poly::zero(nv);
        let mut sign_pos = 0;
        for c in 0..k {
            if mask & (1 << c) != 0 {
                continue;
            }
            let e = &m[r][c];
            if !e.is_zero() {
                let sub = rec(m, mask | (1 << c), nv, memo);
                if !sub.is_zero() {
                    let t = e * &sub;
                    acc = if sign_pos % 2 == 0 { &acc + &t } else { &acc - &t };
                }
            }
            sign_pos += 1;
        }
        memo.insert(mask, acc.clone());
        acc
    }
    rec(m, 0, nv, &mut memo)
}
