//! The symmetric algebra `S = Sym(Y ⊗ E)`, its Weyl group action and the
//! coinvariant algebra `C = S / S^W_+ S`.
//!
//! Degrees: `Y` sits in degree 2, and internally every polynomial carries its
//! half-degree `k` (the number of linear factors). Monomials of a fixed
//! half-degree are indexed in descending lexicographic order of their
//! exponent vectors, which fixes every pivot choice below.
//!
//! `C_k` is presented by the normal form with respect to a fully reduced
//! lattice basis of the ideal in degree `k`. Pivots are the first monomial
//! carrying a unit coefficient, so the non-pivot ("standard") monomials give
//! a basis of `C_k` over the ring, not only over its fraction field.

use std::collections::HashMap;

use crate::error::{ensure, Error, Result};
use crate::laurent::LaurentPoly;
use crate::matrix::{self, kernel_basis, residue_rank, saturate, Echelon, Mat, SparseVec};
use crate::ring::Ring;
use crate::rootdata::{RootDatum, WeylGroup};

/// Exponent vectors of all monomials up to a maximal half-degree.
#[derive(Clone, Debug)]
pub struct Monomials {
    nvars: usize,
    by_degree: Vec<Vec<Vec<u8>>>,
    index: Vec<HashMap<Vec<u8>, usize>>,
    /// `times_var[k][i][m]`: index of `y_i * m` in degree `k + 1`.
    times_var: Vec<Vec<Vec<usize>>>,
}

fn exponents(nvars: usize, k: usize) -> Vec<Vec<u8>> {
    if nvars == 0 {
        return if k == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    if nvars == 1 {
        return vec![vec![k as u8]];
    }
    let mut out = Vec::new();
    for first in (0..=k).rev() {
        for mut rest in exponents(nvars - 1, k - first) {
            rest.insert(0, first as u8);
            out.push(rest);
        }
    }
    out
}

impl Monomials {
    pub fn new(nvars: usize, max_degree: usize) -> Self {
        let by_degree: Vec<Vec<Vec<u8>>> = (0..=max_degree + 1).map(|k| exponents(nvars, k)).collect();
        let index: Vec<HashMap<Vec<u8>, usize>> =
            by_degree.iter().map(|ms| ms.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect()).collect();
        let times_var = (0..=max_degree)
            .map(|k| {
                (0..nvars)
                    .map(|i| {
                        by_degree[k]
                            .iter()
                            .map(|m| {
                                let mut e = m.clone();
                                e[i] += 1;
                                index[k + 1][&e]
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Monomials { nvars, by_degree, index, times_var }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn dim(&self, k: usize) -> usize {
        self.by_degree[k].len()
    }

    pub fn exponent(&self, k: usize, m: usize) -> &[u8] {
        &self.by_degree[k][m]
    }

    pub fn index_of(&self, e: &[u8]) -> usize {
        let k: usize = e.iter().map(|&x| x as usize).sum();
        self.index[k][e]
    }

    pub fn times_var(&self, k: usize, i: usize, m: usize) -> usize {
        self.times_var[k][i][m]
    }
}

/// A homogeneous polynomial: dense coefficients over the monomials of
/// half-degree `deg`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly<E> {
    pub deg: usize,
    pub coeffs: Vec<E>,
}

/// Multiplies homogeneous polynomials.
pub fn poly_mul<R: Ring>(r: &R, mons: &Monomials, a: &Poly<R::Elem>, b: &Poly<R::Elem>) -> Poly<R::Elem> {
    let deg = a.deg + b.deg;
    let mut out = vec![r.zero(); mons.dim(deg)];
    let mut e = vec![0u8; mons.nvars()];
    for (i, x) in a.coeffs.iter().enumerate() {
        if r.is_zero(x) {
            continue;
        }
        let ea = mons.exponent(a.deg, i);
        for (j, y) in b.coeffs.iter().enumerate() {
            if r.is_zero(y) {
                continue;
            }
            let eb = mons.exponent(b.deg, j);
            for t in 0..e.len() {
                e[t] = ea[t] + eb[t];
            }
            let idx = mons.index[deg][&e];
            r.add_mul_assign(&mut out[idx], x, y);
        }
    }
    Poly { deg, coeffs: out }
}

/// Multiplies by a linear form given by its coefficients on `Y`.
pub fn mul_linear<R: Ring>(r: &R, mons: &Monomials, a: &Poly<R::Elem>, lin: &[R::Elem]) -> Poly<R::Elem> {
    let mut out = vec![r.zero(); mons.dim(a.deg + 1)];
    for (m, x) in a.coeffs.iter().enumerate() {
        if r.is_zero(x) {
            continue;
        }
        for (i, c) in lin.iter().enumerate() {
            if !r.is_zero(c) {
                r.add_mul_assign(&mut out[mons.times_var(a.deg, i, m)], x, c);
            }
        }
    }
    Poly { deg: a.deg + 1, coeffs: out }
}

/// Exact division by a nonzero linear form. Fails if the form does not
/// divide the polynomial.
pub fn div_linear<R: Ring>(r: &R, mons: &Monomials, f: &Poly<R::Elem>, lin: &[R::Elem]) -> Result<Poly<R::Elem>> {
    if f.coeffs.iter().all(|x| r.is_zero(x)) {
        return Ok(Poly { deg: f.deg.saturating_sub(1), coeffs: vec![r.zero(); mons.dim(f.deg.saturating_sub(1))] });
    }
    ensure!(f.deg >= 1, "cannot divide a nonzero constant by a linear form");
    let t = (0..lin.len())
        .filter(|&i| !r.is_zero(&lin[i]))
        .min_by_key(|&i| (r.valuation(&lin[i]).unwrap(), i))
        .ok_or_else(|| Error::Invariant("division by the zero form".into()))?;
    let ct_inv = r.inv(&lin[t]).unwrap();
    let mut rem = f.coeffs.clone();
    let mut q = vec![r.zero(); mons.dim(f.deg - 1)];
    loop {
        // The term with the largest exponent of y_t is eliminated first;
        // this strictly lowers that exponent among the remaining terms.
        let best = rem
            .iter()
            .enumerate()
            .filter(|(_, x)| !r.is_zero(x))
            .max_by_key(|(m, _)| (mons.exponent(f.deg, *m)[t], std::cmp::Reverse(*m)));
        let Some((m, x)) = best else { break };
        let e = mons.exponent(f.deg, m);
        ensure!(e[t] > 0, "linear form does not divide the polynomial");
        let c = r.mul(x, &ct_inv);
        let mut qe = e.to_vec();
        qe[t] -= 1;
        let qi = mons.index_of(&qe);
        q[qi] = r.add(&q[qi], &c);
        for (i, li) in lin.iter().enumerate() {
            if r.is_zero(li) {
                continue;
            }
            let idx = mons.times_var(f.deg - 1, i, qi);
            rem[idx] = r.sub(&rem[idx], &r.mul(&c, li));
        }
    }
    Ok(Poly { deg: f.deg - 1, coeffs: q })
}

/// Per-degree presentation of `C_k` as a quotient of `S_k`.
#[derive(Clone, Debug)]
struct Quotient<E> {
    /// Standard monomials, increasing.
    standard: Vec<usize>,
    /// Position of a monomial among the standard monomials.
    std_pos: Vec<Option<usize>>,
    /// Position of a monomial among the pivots.
    pivot_pos: Vec<Option<usize>>,
    /// Normal form of each pivot monomial, in standard coordinates.
    nf_pivot: Vec<Vec<E>>,
}

/// Degreewise rank data used in the base-change comparisons.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankProfile {
    pub invariants: Vec<usize>,
    pub s_invariants: Vec<Vec<usize>>,
    pub coinvariants: Vec<usize>,
}

/// The coinvariant algebra over a coefficient ring.
#[derive(Clone, Debug)]
pub struct Coinvariants<R: Ring> {
    ring: R,
    datum: RootDatum,
    top: usize,
    mons: Monomials,
    /// `reflections[s][k]`: matrix of `s` on `S_k` (columns are images).
    reflections: Vec<Vec<Mat<R::Elem>>>,
    invariants: Vec<Vec<SparseVec<R::Elem>>>,
    s_invariants: Vec<Vec<Vec<SparseVec<R::Elem>>>>,
    fundamental: Vec<Poly<R::Elem>>,
    quotients: Vec<Quotient<R::Elem>>,
    offsets: Vec<usize>,
    gen_action: Vec<Mat<R::Elem>>,
}

fn int_to_ring<R: Ring>(r: &R, v: &[i64]) -> Vec<R::Elem> {
    v.iter().map(|&x| r.from_i64(x)).collect()
}

impl<R: Ring> Coinvariants<R> {
    /// Builds `C` degree by degree up to one past the top degree `ℓ(w_0)`,
    /// checking that the total rank is `|W|` with the expected grading and
    /// that the ideal is saturated, so that `C` is free over the ring.
    pub fn new(group: &WeylGroup, ring: R) -> Result<Self> {
        let datum = group.datum().clone();
        if let Some(l) = ring.kind().prime() {
            datum.check_prime(l)?;
        }
        let top = group.length(group.longest());
        let r = datum.rank;
        let mons = Monomials::new(r, top + 1);
        let nsimple = datum.num_simple();

        let mut reflections = Vec::with_capacity(nsimple);
        for s in 0..nsimple {
            let m = datum.reflection_matrix(s);
            let images: Vec<Vec<R::Elem>> =
                (0..r).map(|j| (0..r).map(|k| ring.from_i64(m[k * r + j])).collect()).collect();
            let mut per_degree = vec![matrix::identity(&ring, 1)];
            let mut prev: Vec<Poly<R::Elem>> = vec![Poly { deg: 0, coeffs: vec![ring.one()] }];
            for k in 1..=top + 1 {
                let mut cur = Vec::with_capacity(mons.dim(k));
                for mi in 0..mons.dim(k) {
                    let e = mons.exponent(k, mi);
                    let t = e.iter().position(|&x| x > 0).unwrap();
                    let mut le = e.to_vec();
                    le[t] -= 1;
                    let lower = &prev[mons.index_of(&le)];
                    cur.push(mul_linear(&ring, &mons, lower, &images[t]));
                }
                let dim = mons.dim(k);
                per_degree.push(Mat::from_fn(dim, dim, |i, j| cur[j].coeffs[i].clone()));
                prev = cur;
            }
            reflections.push(per_degree);
        }

        let mut me = Coinvariants {
            ring,
            datum,
            top,
            mons,
            reflections,
            invariants: Vec::new(),
            s_invariants: Vec::new(),
            fundamental: Vec::new(),
            quotients: Vec::new(),
            offsets: Vec::new(),
            gen_action: Vec::new(),
        };
        me.invariants = (0..=top + 1).map(|k| me.fixed_lattice(&(0..nsimple).collect::<Vec<_>>(), k)).collect();
        me.s_invariants =
            (0..nsimple).map(|s| (0..=top + 1).map(|k| me.fixed_lattice(&[s], k)).collect()).collect();
        me.fundamental = me.choose_fundamental();
        me.build_quotients()?;
        me.build_actions();
        me.check_shape(group)?;
        Ok(me)
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn datum(&self) -> &RootDatum {
        &self.datum
    }

    pub fn monomials(&self) -> &Monomials {
        &self.mons
    }

    /// Top half-degree `ℓ(w_0)`.
    pub fn top(&self) -> usize {
        self.top
    }

    pub fn num_generators(&self) -> usize {
        self.datum.rank
    }

    /// Lattice of `S_k` fixed by the given simple reflections.
    fn fixed_lattice(&self, gens: &[usize], k: usize) -> Vec<SparseVec<R::Elem>> {
        let r = &self.ring;
        let dim = self.mons.dim(k);
        let mut eqs = Vec::new();
        for &s in gens {
            let m = &self.reflections[s][k];
            for i in 0..dim {
                let mut row: SparseVec<R::Elem> = Vec::new();
                for j in 0..dim {
                    let mut x = m.get(i, j).clone();
                    if i == j {
                        x = r.sub(&x, &r.one());
                    }
                    if !r.is_zero(&x) {
                        row.push((j, x));
                    }
                }
                if !row.is_empty() {
                    eqs.push(row);
                }
            }
        }
        kernel_basis(r, &eqs, dim)
    }

    /// Basis of `(S^W)_k`.
    pub fn invariants(&self, k: usize) -> &[SparseVec<R::Elem>] {
        &self.invariants[k]
    }

    /// Basis of `(S^s)_k`.
    pub fn s_invariants(&self, s: usize, k: usize) -> &[SparseVec<R::Elem>] {
        &self.s_invariants[s][k]
    }

    /// Invariants that generate `S^W` as an algebra, chosen greedily by
    /// degree: in each degree, keep the basis vectors not already spanned by
    /// products of lower-degree invariants.
    fn choose_fundamental(&self) -> Vec<Poly<R::Elem>> {
        let r = &self.ring;
        let mut out: Vec<Poly<R::Elem>> = Vec::new();
        for k in 1..=self.top + 1 {
            let mut ech = Echelon::new(r.clone(), self.mons.dim(k));
            for a in 1..k {
                for f in self.invariants[a].iter() {
                    let fp = Poly { deg: a, coeffs: matrix::to_dense(r, f, self.mons.dim(a)) };
                    for g in self.invariants[k - a].iter() {
                        let gp = Poly { deg: k - a, coeffs: matrix::to_dense(r, g, self.mons.dim(k - a)) };
                        ech.insert(&matrix::to_sparse(r, &poly_mul(r, &self.mons, &fp, &gp).coeffs));
                    }
                }
            }
            for f in &self.invariants[k] {
                if ech.insert(f) {
                    out.push(Poly { deg: k, coeffs: matrix::to_dense(r, f, self.mons.dim(k)) });
                }
            }
        }
        out
    }

    /// Algebra generators of `S^W` of positive degree.
    pub fn fundamental_invariants(&self) -> &[Poly<R::Elem>] {
        &self.fundamental
    }

    fn build_quotients(&mut self) -> Result<()> {
        let r = self.ring.clone();
        for k in 0..=self.top + 1 {
            let dim = self.mons.dim(k);
            let mut gens: Vec<SparseVec<R::Elem>> = Vec::new();
            for j in 1..=k {
                for f in &self.invariants[j] {
                    for m in 0..self.mons.dim(k - j) {
                        let mut row: Vec<(usize, R::Elem)> = Vec::with_capacity(f.len());
                        let em = self.mons.exponent(k - j, m).to_vec();
                        for (fi, c) in f {
                            let ef = self.mons.exponent(j, *fi);
                            let e: Vec<u8> = ef.iter().zip(&em).map(|(a, b)| a + b).collect();
                            row.push((self.mons.index_of(&e), c.clone()));
                        }
                        row.sort_by_key(|t| t.0);
                        gens.push(row);
                    }
                }
            }
            let mut ech = Echelon::new(r.clone(), dim);
            for g in &gens {
                ech.insert(g);
            }
            let qrank = ech.rank();
            if !r.is_field() {
                let rr = residue_rank(&r, &gens, dim);
                ensure!(
                    rr == qrank,
                    "ideal in degree {k} is not saturated (rank {qrank}, residue rank {rr}); C is not free"
                );
            }
            let mut basis = saturate(&r, ech.rows().to_vec());
            let pivots: Vec<usize> = basis
                .iter()
                .map(|b| b.iter().find(|(_, x)| r.is_unit(x)).map(|t| t.0).expect("unit pivot"))
                .collect();
            // Clear each pivot from the other basis vectors, last pivot first.
            for i in (0..basis.len()).rev() {
                let bi = basis[i].clone();
                for (m, bm) in basis.iter_mut().enumerate() {
                    if m == i {
                        continue;
                    }
                    if let Ok(pos) = bm.binary_search_by_key(&pivots[i], |t| t.0) {
                        let c = r.neg(&bm[pos].1);
                        *bm = matrix::axpy(&r, bm, &c, &bi);
                    }
                }
            }
            let mut pivot_pos = vec![None; dim];
            for (i, &p) in pivots.iter().enumerate() {
                pivot_pos[p] = Some(i);
            }
            let standard: Vec<usize> = (0..dim).filter(|m| pivot_pos[*m].is_none()).collect();
            let mut std_pos = vec![None; dim];
            for (i, &m) in standard.iter().enumerate() {
                std_pos[m] = Some(i);
            }
            let nf_pivot = basis
                .iter()
                .map(|b| {
                    let mut v = vec![r.zero(); standard.len()];
                    for (m, x) in b {
                        if let Some(p) = std_pos[*m] {
                            v[p] = r.neg(x);
                        }
                    }
                    v
                })
                .collect();
            self.quotients.push(Quotient { standard, std_pos, pivot_pos, nf_pivot });
        }
        let mut off = 0;
        for k in 0..=self.top + 1 {
            self.offsets.push(off);
            off += self.quotients[k].standard.len();
        }
        self.offsets.push(off);
        Ok(())
    }

    /// Dimension of `C_k` (half-degree `k`).
    pub fn dim(&self, k: usize) -> usize {
        self.quotients.get(k).map_or(0, |q| q.standard.len())
    }

    pub fn total_rank(&self) -> usize {
        (0..=self.top + 1).map(|k| self.dim(k)).sum()
    }

    /// Global basis index of the `i`-th standard monomial of degree `k`.
    pub fn offset(&self, k: usize) -> usize {
        self.offsets[k]
    }

    /// Exponent vectors of the standard monomials of degree `k`.
    pub fn standard_monomials(&self, k: usize) -> Vec<Vec<u8>> {
        self.quotients[k].standard.iter().map(|&m| self.mons.exponent(k, m).to_vec()).collect()
    }

    /// Graded rank `Σ_k dim C_k v^{2k}`.
    pub fn graded_rank(&self) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        for k in 0..=self.top + 1 {
            p.add_term(2 * k as i32, self.dim(k).into());
        }
        p
    }

    /// Normal form of a polynomial, in standard coordinates of its degree.
    pub fn normal_form(&self, f: &Poly<R::Elem>) -> Vec<R::Elem> {
        let r = &self.ring;
        if f.deg > self.top + 1 {
            return Vec::new();
        }
        let q = &self.quotients[f.deg];
        let mut out = vec![r.zero(); q.standard.len()];
        for (m, x) in f.coeffs.iter().enumerate() {
            if r.is_zero(x) {
                continue;
            }
            if let Some(p) = q.std_pos[m] {
                out[p] = r.add(&out[p], x);
            } else {
                let pi = q.pivot_pos[m].unwrap();
                for (o, y) in out.iter_mut().zip(&q.nf_pivot[pi]) {
                    r.add_mul_assign(o, x, y);
                }
            }
        }
        out
    }

    /// Canonical lift of an element of `C_k` to `S_k`.
    pub fn lift(&self, k: usize, c: &[R::Elem]) -> Poly<R::Elem> {
        let r = &self.ring;
        let mut coeffs = vec![r.zero(); self.mons.dim(k)];
        for (x, &m) in c.iter().zip(&self.quotients[k].standard) {
            coeffs[m] = x.clone();
        }
        Poly { deg: k, coeffs }
    }

    fn build_actions(&mut self) {
        let r = self.ring.clone();
        let n = self.offsets[self.top + 2];
        for i in 0..self.datum.rank {
            let mut a = matrix::zeros(&r, n, n);
            for k in 0..=self.top {
                for (si, &m) in self.quotients[k].standard.iter().enumerate() {
                    let mut coeffs = vec![r.zero(); self.mons.dim(k + 1)];
                    coeffs[self.mons.times_var(k, i, m)] = r.one();
                    let nf = self.normal_form(&Poly { deg: k + 1, coeffs });
                    for (t, x) in nf.into_iter().enumerate() {
                        a.set(self.offsets[k + 1] + t, self.offsets[k] + si, x);
                    }
                }
            }
            self.gen_action.push(a);
        }
    }

    /// Multiplication by the generator `y_i` on the global basis of `C`.
    pub fn generator_action(&self, i: usize) -> &Mat<R::Elem> {
        &self.gen_action[i]
    }

    fn check_shape(&self, group: &WeylGroup) -> Result<()> {
        ensure!(
            self.dim(self.top + 1) == 0,
            "C is nonzero above the top degree {} (dimension {})",
            self.top,
            self.dim(self.top + 1)
        );
        ensure!(
            self.total_rank() == group.size(),
            "rank of C is {} but |W| = {}",
            self.total_rank(),
            group.size()
        );
        ensure!(
            self.graded_rank() == group.poincare_polynomial(),
            "graded rank {} of C differs from the Poincaré polynomial",
            self.graded_rank()
        );
        Ok(())
    }

    /// Action of a simple reflection on a polynomial.
    pub fn reflect(&self, s: usize, f: &Poly<R::Elem>) -> Poly<R::Elem> {
        Poly { deg: f.deg, coeffs: matrix::apply(&self.ring, &self.reflections[s][f.deg], &f.coeffs) }
    }

    /// Simple coroot `α_s^∨` as a linear form with ring coefficients.
    pub fn coroot(&self, s: usize) -> Vec<R::Elem> {
        int_to_ring(&self.ring, &self.datum.simple_coroots[s])
    }

    /// Demazure operator `∂_s(f) = (f - s f) / α_s^∨`.
    pub fn demazure(&self, s: usize, f: &Poly<R::Elem>) -> Result<Poly<R::Elem>> {
        let r = &self.ring;
        let sf = self.reflect(s, f);
        let diff = Poly { deg: f.deg, coeffs: f.coeffs.iter().zip(&sf.coeffs).map(|(a, b)| r.sub(a, b)).collect() };
        if f.deg == 0 {
            return Ok(Poly { deg: 0, coeffs: vec![r.zero()] });
        }
        div_linear(r, &self.mons, &diff, &self.coroot(s))
    }

    pub fn linear(&self, y: &[i64]) -> Poly<R::Elem> {
        Poly { deg: 1, coeffs: int_to_ring(&self.ring, y) }
    }

    pub fn variable(&self, i: usize) -> Poly<R::Elem> {
        let mut v = vec![0i64; self.datum.rank];
        v[i] = 1;
        self.linear(&v)
    }

    pub fn constant(&self, c: R::Elem) -> Poly<R::Elem> {
        Poly { deg: 0, coeffs: vec![c] }
    }

    pub fn mul(&self, a: &Poly<R::Elem>, b: &Poly<R::Elem>) -> Poly<R::Elem> {
        poly_mul(&self.ring, &self.mons, a, b)
    }

    /// Degreewise ranks of `S^W`, `S^s` and `C`, for base-change checks.
    pub fn rank_profile(&self) -> RankProfile {
        RankProfile {
            invariants: self.invariants.iter().map(|v| v.len()).collect(),
            s_invariants: self.s_invariants.iter().map(|per| per.iter().map(|v| v.len()).collect()).collect(),
            coinvariants: (0..=self.top + 1).map(|k| self.dim(k)).collect(),
        }
    }

    /// Data for `C` as a module over the image `C_s` of `S^s`.
    pub fn cs_data(&self, s: usize) -> Result<CsData> {
        let r = &self.ring;
        let delta = self.datum.delta_index(s);
        ensure!(self.datum.simple_roots[s][delta] == 1, "⟨α_s, δ_s⟩ ≠ 1");
        let dvar = self.variable(delta);
        let mut cs_ranks = Vec::new();
        for k in 0..=self.top {
            let dim = self.dim(k);
            let a_vecs: Vec<SparseVec<R::Elem>> = self.s_invariants[s][k]
                .iter()
                .map(|f| {
                    let p = Poly { deg: k, coeffs: matrix::to_dense(r, f, self.mons.dim(k)) };
                    matrix::to_sparse(r, &self.normal_form(&p))
                })
                .collect();
            let b_vecs: Vec<SparseVec<R::Elem>> = if k == 0 {
                Vec::new()
            } else {
                self.s_invariants[s][k - 1]
                    .iter()
                    .map(|f| {
                        let p = Poly { deg: k - 1, coeffs: matrix::to_dense(r, f, self.mons.dim(k - 1)) };
                        matrix::to_sparse(r, &self.normal_form(&self.mul(&dvar, &p)))
                    })
                    .collect()
            };
            let ra = matrix::rank(r, &a_vecs, dim);
            cs_ranks.push(ra);
            let prev = if k == 0 { 0 } else { cs_ranks[k - 1] };
            let all: Vec<_> = a_vecs.iter().chain(&b_vecs).cloned().collect();
            let rall = matrix::rank(r, &all, dim);
            let rres = residue_rank(r, &all, dim);
            ensure!(
                ra + prev == dim && rall == dim && rres == dim,
                "{{1, δ_s}} is not a C_s-basis of C in degree {k} for s = {}: \
                 rank C_s,k = {ra}, rank C_s,k-1 = {prev}, span rank {rall}, residue rank {rres}, dim C_k = {dim}",
                s + 1
            );
        }
        Ok(CsData { s, delta, cs_ranks })
    }

    /// Writes `f ∈ C_k` as `a + b δ_s` with `a, b` in the image of `S^s`.
    /// Returns `(a, b)` in standard coordinates of degrees `k` and `k - 1`.
    pub fn cs_decompose(&self, cs: &CsData, k: usize, f: &[R::Elem]) -> Result<(Vec<R::Elem>, Vec<R::Elem>)> {
        let r = &self.ring;
        let lift = self.lift(k, f);
        if k == 0 {
            return Ok((f.to_vec(), Vec::new()));
        }
        let b = self.demazure(cs.s, &lift)?;
        let db = self.mul(&self.variable(cs.delta), &b);
        let a = Poly { deg: k, coeffs: lift.coeffs.iter().zip(&db.coeffs).map(|(x, y)| r.sub(x, y)).collect() };
        Ok((self.normal_form(&a), self.normal_form(&b)))
    }
}

/// `C` as a free module of rank 2 over `C_s`, with basis `{1, δ_s}`.
#[derive(Clone, Debug)]
pub struct CsData {
    /// The simple reflection.
    pub s: usize,
    /// Index of the basis vector of `Y` used as `δ_s`.
    pub delta: usize,
    /// `rank C_{s,k}` per half-degree.
    pub cs_ranks: Vec<usize>,
}

/// Compares the constructions over the local ring and over its residue
/// field degree by degree, and checks that lattice bases reduce to bases.
pub fn base_change_report<R: Ring>(
    local: &Coinvariants<R>,
    field: &Coinvariants<R::Residue>,
) -> std::result::Result<(), String> {
    let lp = local.rank_profile();
    let fp = field.rank_profile();
    if lp.invariants != fp.invariants {
        return Err(format!("S^W ranks differ: {:?} vs {:?}", lp.invariants, fp.invariants));
    }
    if lp.s_invariants != fp.s_invariants {
        return Err(format!("S^s ranks differ: {:?} vs {:?}", lp.s_invariants, fp.s_invariants));
    }
    if lp.coinvariants != fp.coinvariants {
        return Err(format!("C ranks differ: {:?} vs {:?}", lp.coinvariants, fp.coinvariants));
    }
    let r = local.ring();
    let f = field.ring();
    for k in 0..=local.top() + 1 {
        let dim = local.monomials().dim(k);
        let mut lattices: Vec<(&str, &[SparseVec<R::Elem>], &[SparseVec<<R::Residue as Ring>::Elem>])> =
            vec![("S^W", local.invariants(k), field.invariants(k))];
        for s in 0..local.datum().num_simple() {
            lattices.push(("S^s", local.s_invariants(s, k), field.s_invariants(s, k)));
        }
        for (name, lat, fld) in lattices {
            let red: Vec<_> = lat.iter().map(|v| matrix::reduce_sparse(r, v)).collect();
            if matrix::rank(f, &red, dim) != lat.len() {
                return Err(format!("{name} lattice basis in degree {k} does not reduce to an independent set"));
            }
            let mut ech = Echelon::new(f.clone(), dim);
            for v in fld {
                ech.insert(v);
            }
            if !red.iter().all(|v| ech.contains(v)) {
                return Err(format!("reduced {name} basis in degree {k} is not invariant over the field"));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{LocalIntegers, PrimeField, Rationals, Q};

    fn group(s: &str) -> WeylGroup {
        WeylGroup::new(RootDatum::parse(s).unwrap()).unwrap()
    }

    #[test]
    fn monomial_order_is_descending_lex() {
        let m = Monomials::new(2, 2);
        assert_eq!(m.exponent(2, 0), &[2, 0]);
        assert_eq!(m.exponent(2, 1), &[1, 1]);
        assert_eq!(m.exponent(2, 2), &[0, 2]);
    }

    #[test]
    fn gl2_coinvariants() {
        let g = group("GL2");
        let c = Coinvariants::new(&g, Rationals).unwrap();
        assert_eq!(c.total_rank(), 2);
        assert_eq!(c.graded_rank(), LaurentPoly::from_coeffs(0, &[1, 0, 1]));
        // Invariants: degree 2 (half-degree 1) is spanned by x1 + x2; degree 4 has rank 2.
        assert_eq!(c.invariants(1).len(), 1);
        assert_eq!(c.invariants(2).len(), 2);
        assert_eq!(c.invariants(0).len(), 1);
        // The reflection swaps the coordinates.
        let x1 = c.variable(0);
        assert_eq!(c.reflect(0, &x1), c.variable(1));
    }

    #[test]
    fn demazure_examples() {
        let g = group("A2");
        let c = Coinvariants::new(&g, Rationals).unwrap();
        let q = |n| Q::from_i64(n);
        for s in 0..2 {
            let cor = c.linear(&c.datum().simple_coroots[s].clone());
            assert_eq!(c.demazure(s, &cor).unwrap().coeffs, vec![q(2)]);
            let d = c.variable(c.datum().delta_index(s));
            assert_eq!(c.demazure(s, &d).unwrap().coeffs, vec![q(1)]);
            let neg = c.reflect(s, &cor);
            assert_eq!(neg.coeffs, cor.coeffs.iter().map(|x| x.neg()).collect::<Vec<_>>());
        }
        // Twisted Leibniz rule on a cubic and ∂² = 0 on a quadric.
        let f = c.mul(&c.variable(0), &c.variable(1));
        let g2 = c.variable(1);
        let fg = c.mul(&f, &g2);
        let lhs = c.demazure(0, &fg).unwrap();
        let t1 = c.mul(&c.demazure(0, &f).unwrap(), &g2);
        let t2 = c.mul(&c.reflect(0, &f), &c.demazure(0, &g2).unwrap());
        let rhs: Vec<Q> = t1.coeffs.iter().zip(&t2.coeffs).map(|(a, b)| a.add(b)).collect();
        assert_eq!(lhs.coeffs, rhs);
        let dd = c.demazure(0, &c.demazure(0, &f).unwrap()).unwrap();
        assert!(dd.coeffs.iter().all(|x| x.is_zero()));
    }

    #[test]
    fn a2_over_f5_and_b2_over_f3() {
        let a2 = group("A2");
        let c = Coinvariants::new(&a2, PrimeField::new(5).unwrap()).unwrap();
        assert_eq!(c.graded_rank(), LaurentPoly::from_coeffs(0, &[1, 0, 2, 0, 2, 0, 1]));
        let b2 = group("B2");
        let c = Coinvariants::new(&b2, PrimeField::new(3).unwrap()).unwrap();
        assert_eq!(c.total_rank(), 8);
    }

    #[test]
    fn bad_primes_are_rejected() {
        let g2 = group("G2");
        assert!(matches!(Coinvariants::new(&g2, PrimeField::new(3).unwrap()), Err(Error::BadPrime { .. })));
        let a1 = group("A1");
        assert!(Coinvariants::new(&a1, LocalIntegers::new(2).unwrap()).is_err());
    }

    #[test]
    fn cs_basis_and_decomposition() {
        let g = group("B2");
        let c = Coinvariants::new(&g, LocalIntegers::new(3).unwrap()).unwrap();
        let r = *c.ring();
        for s in 0..2 {
            let cs = c.cs_data(s).unwrap();
            // f = 1 gives (1, 0).
            let (a, b) = c.cs_decompose(&cs, 0, &[r.one()]).unwrap();
            assert_eq!((a, b), (vec![r.one()], vec![]));
            // f = δ_s gives (0, 1).
            let d = c.normal_form(&c.variable(cs.delta));
            let (a, b) = c.cs_decompose(&cs, 1, &d).unwrap();
            assert!(a.iter().all(|x| r.is_zero(x)));
            assert_eq!(b, vec![r.one()]);
            // Reconstruction on every basis element of every degree.
            for k in 1..=c.top() {
                for i in 0..c.dim(k) {
                    let mut f = vec![r.zero(); c.dim(k)];
                    f[i] = r.one();
                    let (a, b) = c.cs_decompose(&cs, k, &f).unwrap();
                    let db = c.normal_form(&c.mul(&c.variable(cs.delta), &c.lift(k - 1, &b)));
                    let sum: Vec<Q> = a.iter().zip(&db).map(|(x, y)| r.add(x, y)).collect();
                    assert_eq!(sum, f);
                }
            }
        }
    }

    #[test]
    fn base_change_for_gl3_at_two() {
        let g = group("GL3");
        let o = Coinvariants::new(&g, LocalIntegers::new(2).unwrap()).unwrap();
        let f = Coinvariants::new(&g, PrimeField::new(2).unwrap()).unwrap();
        assert_eq!(base_change_report(&o, &f), Ok(()));
        for s in 0..2 {
            o.cs_data(s).unwrap();
            f.cs_data(s).unwrap();
        }
    }
}
