use crate::laurent::LaurentPoly;
use crate::matrix::{self, Mat, SparseVec};
use crate::ring::Ring;

use super::module::GradedModule;

/// A lattice basis of the module maps `M → N` of degree `k`, that is, maps
/// sending `M_d` into `N_{d+k}`.
#[derive(Clone, Debug)]
pub struct HomSpace<R: Ring> {
    pub degree: i32,
    /// Each map is an `N.rank() x M.rank()` matrix.
    pub basis: Vec<Mat<R::Elem>>,
}

impl<R: Ring> HomSpace<R> {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }
}

/// Maps of degree `k` commuting with every generator action. Over the local
/// ring the basis spans the full lattice of integral maps.
pub fn hom_degree<R: Ring>(m: &GradedModule<R>, n: &GradedModule<R>, k: i32) -> HomSpace<R> {
    let r = m.ring();
    let (dm, dn) = (m.degrees(), n.degrees());
    // unknown X[j][i] is allowed when dn[j] == dm[i] + k
    let mut var = vec![usize::MAX; n.rank() * m.rank()];
    let mut slots = Vec::new();
    for j in 0..n.rank() {
        for i in 0..m.rank() {
            if dn[j] == dm[i] + k {
                var[j * m.rank() + i] = slots.len();
                slots.push((j, i));
            }
        }
    }
    if slots.is_empty() {
        return HomSpace { degree: k, basis: Vec::new() };
    }
    let nvars = slots.len();
    let mut equations: Vec<SparseVec<R::Elem>> = Vec::new();
    for g in 0..m.num_generators() {
        let am = m.action(g);
        let an = n.action(g);
        // (X A^M - A^N X)[j][i'] = Σ_i X[j][i] A^M[i][i'] - Σ_j' A^N[j][j'] X[j'][i']
        for j in 0..n.rank() {
            for ip in 0..m.rank() {
                // only entries of the right degree can be nonzero
                if dn[j] != dm[ip] + k + 2 {
                    continue;
                }
                let mut eq: Vec<(usize, R::Elem)> = Vec::new();
                for i in 0..m.rank() {
                    let x = var[j * m.rank() + i];
                    let a = am.get(i, ip);
                    if x != usize::MAX && !r.is_zero(a) {
                        eq.push((x, a.clone()));
                    }
                }
                for jp in 0..n.rank() {
                    let x = var[jp * m.rank() + ip];
                    let a = an.get(j, jp);
                    if x != usize::MAX && !r.is_zero(a) {
                        eq.push((x, r.neg(a)));
                    }
                }
                if eq.is_empty() {
                    continue;
                }
                eq.sort_by_key(|e| e.0);
                let mut merged: SparseVec<R::Elem> = Vec::with_capacity(eq.len());
                for (c, x) in eq {
                    match merged.last_mut() {
                        Some((lc, lx)) if *lc == c => *lx = r.add(lx, &x),
                        _ => merged.push((c, x)),
                    }
                }
                merged.retain(|(_, x)| !r.is_zero(x));
                if !merged.is_empty() {
                    equations.push(merged);
                }
            }
        }
    }
    let kernel = matrix::kernel_basis(r, &equations, nvars);
    let basis = kernel
        .iter()
        .map(|v| {
            let mut x = matrix::zeros(r, n.rank(), m.rank());
            for (c, e) in v {
                let (j, i) = slots[*c];
                x.set(j, i, e.clone());
            }
            x
        })
        .collect();
    HomSpace { degree: k, basis }
}

/// All nonzero graded pieces of `Hom(M, N)`, by increasing degree.
pub fn graded_hom<R: Ring>(m: &GradedModule<R>, n: &GradedModule<R>) -> Vec<HomSpace<R>> {
    let mut ks: Vec<i32> = Vec::new();
    for a in m.degrees() {
        for b in n.degrees() {
            ks.push(b - a);
        }
    }
    ks.sort_unstable();
    ks.dedup();
    ks.into_iter().map(|k| hom_degree(m, n, k)).filter(|h| h.rank() > 0).collect()
}

/// `Σ_k rank Hom_k(M, N) v^k`
pub fn graded_hom_rank<R: Ring>(m: &GradedModule<R>, n: &GradedModule<R>) -> LaurentPoly {
    let mut p = LaurentPoly::zero();
    for h in graded_hom(m, n) {
        p.add_term(h.degree, (h.rank() as i64).into());
    }
    p
}

/// Checks that reducing a lattice basis of `Hom(M, N)` gives a basis of
/// `Hom(F M, F N)` over the residue field, degree by degree, and returns the
/// common graded rank.
pub fn hom_reduction_check<R: Ring>(m: &GradedModule<R>, n: &GradedModule<R>) -> crate::Result<LaurentPoly> {
    let r = m.ring();
    let f = r.residue_ring();
    let (fm, fnn) = (m.reduce(), n.reduce());
    let mut ks: Vec<i32> = m.degrees().iter().flat_map(|a| n.degrees().iter().map(move |b| b - a)).collect();
    ks.sort_unstable();
    ks.dedup();
    let mut out = LaurentPoly::zero();
    for k in ks {
        let local = hom_degree(m, n, k);
        let field = hom_degree(&fm, &fnn, k);
        let reduced: Vec<Mat<<R::Residue as Ring>::Elem>> = local.basis.iter().map(|x| matrix::residue_mat(r, x)).collect();
        for x in &reduced {
            for g in 0..m.num_generators() {
                if matrix::mul(&f, x, fm.action(g)) != matrix::mul(&f, fnn.action(g), x) {
                    return Err(crate::Error::Invariant(format!("reduced map of degree {k} is not a module map")));
                }
            }
        }
        let flat: Vec<SparseVec<_>> = reduced.iter().map(|x| matrix::to_sparse(&f, x.entries())).collect();
        let independent = matrix::rank(&f, &flat, m.rank() * n.rank());
        if independent != local.rank() || local.rank() != field.rank() {
            return Err(crate::Error::Invariant(format!(
                "degree {k}: lattice rank {}, independent reductions {independent}, residue field rank {}",
                local.rank(),
                field.rank()
            )));
        }
        out.add_term(k, (local.rank() as i64).into());
    }
    Ok(out)
}
