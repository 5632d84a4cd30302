//! Dense matrices and exact linear algebra over a [`Ring`].
//!
//! Linear systems are solved in the fraction field. Over the local ring the
//! results are then saturated, which turns a rational basis of a subspace
//! `V` into a basis of the lattice `V ∩ O^n`. Saturated lattices are direct
//! summands of `O^n`, so their reductions modulo the prime stay independent.

use crate::ring::Ring;

/// Row-major dense matrix whose entries live in some ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

/// Sparse vector: `(index, value)` pairs with strictly increasing indices and
/// nonzero values.
pub type SparseVec<E> = Vec<(usize, E)>;

impl<E: Clone> Mat<E> {
    pub fn filled(rows: usize, cols: usize, value: E) -> Self {
        Mat { rows, cols, data: vec![value; rows * cols] }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<E>>, cols: usize) -> Self {
        let n = rows.len();
        let data: Vec<E> = rows.into_iter().flat_map(|r| {
            assert_eq!(r.len(), cols, "ragged rows");
            r
        }).collect();
        Mat { rows: n, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: E) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<E> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Mat::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn map<F>(&self, f: impl Fn(&E) -> F) -> Mat<F> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    /// Submatrix on the given rows and columns, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Mat::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    pub fn entries(&self) -> &[E] {
        &self.data
    }
}

pub fn zeros<R: Ring>(r: &R, rows: usize, cols: usize) -> Mat<R::Elem> {
    Mat::filled(rows, cols, r.zero())
}

pub fn identity<R: Ring>(r: &R, n: usize) -> Mat<R::Elem> {
    Mat::from_fn(n, n, |i, j| if i == j { r.one() } else { r.zero() })
}

pub fn is_zero<R: Ring>(r: &R, a: &Mat<R::Elem>) -> bool {
    a.data.iter().all(|x| r.is_zero(x))
}

pub fn mul<R: Ring>(r: &R, a: &Mat<R::Elem>, b: &Mat<R::Elem>) -> Mat<R::Elem> {
    assert_eq!(a.cols, b.rows, "dimension mismatch in product");
    let mut out = zeros(r, a.rows, b.cols);
    for i in 0..a.rows {
        for k in 0..a.cols {
            let x = a.get(i, k);
            if r.is_zero(x) {
                continue;
            }
            for j in 0..b.cols {
                let y = b.get(k, j);
                if !r.is_zero(y) {
                    let idx = i * out.cols + j;
                    r.add_mul_assign(&mut out.data[idx], x, y);
                }
            }
        }
    }
    out
}

pub fn add<R: Ring>(r: &R, a: &Mat<R::Elem>, b: &Mat<R::Elem>) -> Mat<R::Elem> {
    assert!(a.rows == b.rows && a.cols == b.cols);
    Mat { rows: a.rows, cols: a.cols, data: a.data.iter().zip(&b.data).map(|(x, y)| r.add(x, y)).collect() }
}

pub fn sub<R: Ring>(r: &R, a: &Mat<R::Elem>, b: &Mat<R::Elem>) -> Mat<R::Elem> {
    assert!(a.rows == b.rows && a.cols == b.cols);
    Mat { rows: a.rows, cols: a.cols, data: a.data.iter().zip(&b.data).map(|(x, y)| r.sub(x, y)).collect() }
}

pub fn scale<R: Ring>(r: &R, c: &R::Elem, a: &Mat<R::Elem>) -> Mat<R::Elem> {
    a.map(|x| r.mul(c, x))
}

pub fn residue_mat<R: Ring>(r: &R, a: &Mat<R::Elem>) -> Mat<<R::Residue as Ring>::Elem> {
    a.map(|x| r.residue(x))
}

/// Applies a matrix to a column vector.
pub fn apply<R: Ring>(r: &R, a: &Mat<R::Elem>, v: &[R::Elem]) -> Vec<R::Elem> {
    assert_eq!(a.cols, v.len());
    (0..a.rows)
        .map(|i| {
            let mut acc = r.zero();
            for (x, y) in a.row(i).iter().zip(v) {
                r.add_mul_assign(&mut acc, x, y);
            }
            acc
        })
        .collect()
}

pub fn to_sparse<R: Ring>(r: &R, v: &[R::Elem]) -> SparseVec<R::Elem> {
    v.iter().enumerate().filter(|(_, x)| !r.is_zero(x)).map(|(i, x)| (i, x.clone())).collect()
}

pub fn to_dense<R: Ring>(r: &R, v: &SparseVec<R::Elem>, n: usize) -> Vec<R::Elem> {
    let mut out = vec![r.zero(); n];
    for (i, x) in v {
        out[*i] = x.clone();
    }
    out
}

/// Incrementally built, fully reduced row echelon form over the fraction
/// field. Every stored row has a 1 in its pivot column and zeros in all other
/// pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon<R: Ring> {
    ring: R,
    ncols: usize,
    rows: Vec<SparseVec<R::Elem>>,
    pivots: Vec<usize>,
    pivot_row: Vec<Option<usize>>,
}

impl<R: Ring> Echelon<R> {
    pub fn new(ring: R, ncols: usize) -> Self {
        Echelon { ring, ncols, rows: Vec::new(), pivots: Vec::new(), pivot_row: vec![None; ncols] }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn rows(&self) -> &[SparseVec<R::Elem>] {
        &self.rows
    }

    pub fn is_pivot(&self, c: usize) -> bool {
        self.pivot_row[c].is_some()
    }

    /// Reduces `v` against the stored rows, returning the dense remainder.
    pub fn reduce_dense(&self, v: &SparseVec<R::Elem>) -> Vec<R::Elem> {
        let r = &self.ring;
        let mut acc = to_dense(r, v, self.ncols);
        for (c, x) in v {
            if let Some(pr) = self.pivot_row[*c] {
                let x = x.clone();
                for (cc, y) in &self.rows[pr] {
                    acc[*cc] = r.sub(&acc[*cc], &r.mul(&x, y));
                }
            }
        }
        acc
    }

    pub fn contains(&self, v: &SparseVec<R::Elem>) -> bool {
        let r = &self.ring;
        self.reduce_dense(v).iter().all(|x| r.is_zero(x))
    }

    /// Adds a vector to the span. Returns `true` if the rank increased.
    pub fn insert(&mut self, v: &SparseVec<R::Elem>) -> bool {
        let r = self.ring.clone();
        let acc = self.reduce_dense(v);
        let Some(p) = acc.iter().position(|x| !r.is_zero(x)) else {
            return false;
        };
        let pinv = r.inv(&acc[p]).expect("nonzero pivot");
        let new: SparseVec<R::Elem> = acc
            .iter()
            .enumerate()
            .filter(|(_, x)| !r.is_zero(x))
            .map(|(i, x)| (i, r.mul(x, &pinv)))
            .collect();
        for row in self.rows.iter_mut() {
            if let Ok(k) = row.binary_search_by_key(&p, |e| e.0) {
                let c = row[k].1.clone();
                *row = axpy(&r, row, &r.neg(&c), &new);
            }
        }
        self.pivot_row[p] = Some(self.rows.len());
        self.pivots.push(p);
        self.rows.push(new);
        true
    }

    /// Basis of the null space of the stored rows (as linear forms), one
    /// vector per free column, over the fraction field.
    pub fn kernel(&self) -> Vec<SparseVec<R::Elem>> {
        let r = &self.ring;
        let mut extra: Vec<Vec<(usize, R::Elem)>> = vec![Vec::new(); self.ncols];
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            for (c, x) in row {
                if *c != p {
                    extra[*c].push((p, r.neg(x)));
                }
            }
        }
        let mut out = Vec::new();
        for (f, mut e) in extra.into_iter().enumerate() {
            if self.is_pivot(f) {
                continue;
            }
            e.push((f, r.one()));
            e.sort_by_key(|t| t.0);
            out.push(e);
        }
        out
    }
}

/// `a + c * b` for sparse vectors.
pub fn axpy<R: Ring>(r: &R, a: &SparseVec<R::Elem>, c: &R::Elem, b: &SparseVec<R::Elem>) -> SparseVec<R::Elem> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            let v = r.mul(c, &b[j].1);
            if !r.is_zero(&v) {
                out.push((b[j].0, v));
            }
            j += 1;
        } else {
            let v = r.add(&a[i].1, &r.mul(c, &b[j].1));
            if !r.is_zero(&v) {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn scale_sparse<R: Ring>(r: &R, c: &R::Elem, v: &SparseVec<R::Elem>) -> SparseVec<R::Elem> {
    v.iter().map(|(i, x)| (*i, r.mul(c, x))).filter(|(_, x)| !r.is_zero(x)).collect()
}

fn sparse_get<E>(v: &SparseVec<E>, i: usize) -> Option<&E> {
    v.binary_search_by_key(&i, |e| e.0).ok().map(|k| &v[k].1)
}

/// Turns a fraction-field basis of a subspace `V` into a basis of the lattice
/// `V ∩ O^n`.
///
/// Each step rescales a vector to minimal valuation zero, picks its first
/// unit coordinate as a pivot, normalizes that coordinate to 1 and clears it
/// from the vectors still to be processed. The output is triangular with unit
/// pivots, which is exactly the shape that makes it a lattice basis. Over a
/// field this only normalizes.
pub fn saturate<R: Ring>(r: &R, vecs: Vec<SparseVec<R::Elem>>) -> Vec<SparseVec<R::Elem>> {
    let mut pending = vecs;
    let mut out = Vec::with_capacity(pending.len());
    while !pending.is_empty() {
        let v = pending.remove(0);
        if v.is_empty() {
            continue;
        }
        let minval = v.iter().filter_map(|(_, x)| r.valuation(x)).min().unwrap();
        let v = if minval != 0 {
            let unif = r.scale_uniformizer(&r.one(), -minval);
            scale_sparse(r, &unif, &v)
        } else {
            v
        };
        let (p, pv) = v.iter().find(|(_, x)| r.valuation(x) == Some(0)).cloned().expect("unit entry");
        let v = scale_sparse(r, &r.inv(&pv).unwrap(), &v);
        for u in pending.iter_mut() {
            if let Some(c) = sparse_get(u, p).cloned() {
                *u = axpy(r, u, &r.neg(&c), &v);
            }
        }
        out.push(v);
    }
    out
}

/// Lattice basis of the kernel of a sparse linear system. Over the local
/// ring the basis is saturated.
pub fn kernel_basis<R: Ring>(r: &R, equations: &[SparseVec<R::Elem>], ncols: usize) -> Vec<SparseVec<R::Elem>> {
    let mut ech = Echelon::new(r.clone(), ncols);
    for e in equations {
        ech.insert(e);
    }
    let k = ech.kernel();
    if r.is_field() {
        k
    } else {
        saturate(r, k)
    }
}

/// Rank over the fraction field.
pub fn rank<R: Ring>(r: &R, vecs: &[SparseVec<R::Elem>], ncols: usize) -> usize {
    let mut ech = Echelon::new(r.clone(), ncols);
    for v in vecs {
        ech.insert(v);
    }
    ech.rank()
}

pub fn mat_rank<R: Ring>(r: &R, a: &Mat<R::Elem>) -> usize {
    let rows: Vec<_> = (0..a.rows()).map(|i| to_sparse(r, a.row(i))).collect();
    rank(r, &rows, a.cols())
}

/// Rank after reduction to the residue field. All vectors must be integral.
pub fn residue_rank<R: Ring>(r: &R, vecs: &[SparseVec<R::Elem>], ncols: usize) -> usize {
    let f = r.residue_ring();
    let red: Vec<_> = vecs.iter().map(|v| reduce_sparse(r, v)).collect();
    rank(&f, &red, ncols)
}

pub fn reduce_sparse<R: Ring>(r: &R, v: &SparseVec<R::Elem>) -> SparseVec<<R::Residue as Ring>::Elem> {
    let f = r.residue_ring();
    v.iter().map(|(i, x)| (*i, r.residue(x))).filter(|(_, x)| !f.is_zero(x)).collect()
}

/// Indices of a maximal subset of the given vectors whose residues are
/// linearly independent, chosen greedily in order.
pub fn residue_independent<R: Ring>(r: &R, vecs: &[SparseVec<R::Elem>], ncols: usize) -> Vec<usize> {
    let f = r.residue_ring();
    let mut ech = Echelon::new(f, ncols);
    let mut out = Vec::new();
    for (k, v) in vecs.iter().enumerate() {
        if ech.insert(&reduce_sparse(r, v)) {
            out.push(k);
        }
    }
    out
}

/// Inverse over the ring itself: Gauss-Jordan elimination that only accepts
/// unit pivots. Returns `None` for matrices that are singular, or (over the
/// local ring) invertible only after inverting the prime.
pub fn inverse<R: Ring>(r: &R, a: &Mat<R::Elem>) -> Option<Mat<R::Elem>> {
    let n = a.rows();
    assert_eq!(n, a.cols(), "inverse of a non-square matrix");
    let mut m = a.clone();
    let mut inv = identity(r, n);
    for col in 0..n {
        let mut best: Option<(usize, i32)> = None;
        for row in col..n {
            if let Some(v) = r.valuation(m.get(row, col)) {
                if best.is_none_or(|(_, bv)| v < bv) {
                    best = Some((row, v));
                }
            }
        }
        let (prow, pval) = best?;
        if pval != 0 {
            return None;
        }
        if prow != col {
            for j in 0..n {
                m.data.swap(prow * n + j, col * n + j);
                inv.data.swap(prow * n + j, col * n + j);
            }
        }
        let pinv = r.inv(m.get(col, col)).unwrap();
        for j in 0..n {
            let x = r.mul(m.get(col, j), &pinv);
            m.set(col, j, x);
            let y = r.mul(inv.get(col, j), &pinv);
            inv.set(col, j, y);
        }
        for row in 0..n {
            if row == col {
                continue;
            }
            let c = m.get(row, col).clone();
            if r.is_zero(&c) {
                continue;
            }
            for j in 0..n {
                let x = r.sub(m.get(row, j), &r.mul(&c, m.get(col, j)));
                m.set(row, j, x);
                let y = r.sub(inv.get(row, j), &r.mul(&c, inv.get(col, j)));
                inv.set(row, j, y);
            }
        }
    }
    Some(inv)
}

/// For a matrix `b` (n x k) whose columns have independent residues,
/// returns a k x n matrix `l` over the ring with `l * b = 1`.
pub fn left_inverse<R: Ring>(r: &R, b: &Mat<R::Elem>) -> Option<Mat<R::Elem>> {
    let rows: Vec<_> = (0..b.rows()).map(|i| to_sparse(r, b.row(i))).collect();
    let chosen = residue_independent(r, &rows, b.cols());
    if chosen.len() != b.cols() {
        return None;
    }
    let all: Vec<usize> = (0..b.cols()).collect();
    let minor = b.select(&chosen, &all);
    let minv = inverse(r, &minor)?;
    let mut l = zeros(r, b.cols(), b.rows());
    for i in 0..b.cols() {
        for (k, &row) in chosen.iter().enumerate() {
            l.set(i, row, minv.get(i, k).clone());
        }
    }
    Some(l)
}

/// Columns of an idempotent whose residues are independent. They form a
/// basis of its image, which is a direct summand.
pub fn idempotent_image_columns<R: Ring>(r: &R, e: &Mat<R::Elem>) -> Vec<usize> {
    let cols: Vec<_> = (0..e.cols()).map(|j| to_sparse(r, &e.column(j))).collect();
    residue_independent(r, &cols, e.rows())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{LocalIntegers, PrimeField, Rationals, Q};

    fn q(n: i64) -> Q {
        Q::from_i64(n)
    }

    #[test]
    fn kernel_over_rationals() {
        let r = Rationals;
        // x + 2y + 3z = 0 ; y + z = 0
        let eqs = vec![vec![(0, q(1)), (1, q(2)), (2, q(3))], vec![(1, q(1)), (2, q(1))]];
        let k = kernel_basis(&r, &eqs, 3);
        assert_eq!(k.len(), 1);
        let v = to_dense(&r, &k[0], 3);
        assert_eq!(v, vec![q(-1), q(-1), q(1)]);
    }

    #[test]
    fn saturation_divides_out_the_prime() {
        let r = LocalIntegers::new(3).unwrap();
        // The span of (3, 6) and (0, 9)·(1/3) contains (1, 2) and (0, 1).
        let v = vec![vec![(0, q(3)), (1, q(6))], vec![(1, Q::parse("9/2").unwrap())]];
        let s = saturate(&r, v);
        assert_eq!(s.len(), 2);
        assert_eq!(residue_rank(&r, &s, 2), 2);
        for w in &s {
            assert!(w.iter().all(|(_, x)| r.is_integral(x)));
        }
    }

    #[test]
    fn kernel_lattice_is_saturated() {
        let r = LocalIntegers::new(2).unwrap();
        // 2x - 4y = 0 has kernel spanned by (2, 1) over Z_(2).
        let eqs = vec![vec![(0, q(2)), (1, q(-4))]];
        let k = kernel_basis(&r, &eqs, 2);
        assert_eq!(k.len(), 1);
        assert_eq!(residue_rank(&r, &k, 2), 1);
    }

    #[test]
    fn inverse_requires_unit_determinant() {
        let r = LocalIntegers::new(5).unwrap();
        let a = Mat::from_rows(vec![vec![q(1), q(2)], vec![q(3), q(4)]], 2);
        let ai = inverse(&r, &a).unwrap();
        assert_eq!(mul(&r, &a, &ai), identity(&r, 2));
        let b = Mat::from_rows(vec![vec![q(5), q(0)], vec![q(0), q(1)]], 2);
        assert!(inverse(&r, &b).is_none());
        assert!(inverse(&Rationals, &b).is_some());
    }

    #[test]
    fn left_inverse_over_field() {
        let f = PrimeField::new(7).unwrap();
        let b = Mat::from_rows(vec![vec![1, 0], vec![3, 0], vec![0, 5]], 2);
        let l = left_inverse(&f, &b).unwrap();
        assert_eq!(mul(&f, &l, &b), identity(&f, 2));
    }

    #[test]
    fn echelon_is_fully_reduced() {
        let r = Rationals;
        let mut e = Echelon::new(r, 3);
        e.insert(&vec![(1, q(1)), (2, q(1))]);
        e.insert(&vec![(0, q(1)), (1, q(1))]);
        assert_eq!(e.rank(), 2);
        for (row, &p) in e.rows().iter().zip(e.pivots()) {
            for &other in e.pivots() {
                if other != p {
                    assert!(sparse_get(row, other).is_none());
                }
            }
        }
        assert!(e.contains(&vec![(0, q(1)), (1, q(2)), (2, q(1))]));
        assert!(!e.contains(&vec![(2, q(1))]));
    }
}
