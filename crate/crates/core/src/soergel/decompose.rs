use crate::error::{ensure, Error, Result};
use crate::laurent::LaurentPoly;
use crate::matrix::{self, Echelon, Mat, SparseVec};
use crate::ring::Ring;
use crate::rootdata::WElem;

use super::hom::hom_degree;
use super::module::GradedModule;

/// `multiplicity` copies of `D_y⟨shift⟩`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Summand {
    pub y: WElem,
    pub shift: i32,
    pub multiplicity: usize,
}

/// Result of splitting off known indecomposables from a module.
#[derive(Clone, Debug)]
pub struct DecompRecord<R: Ring> {
    /// Sorted by `(y, shift)`.
    pub summands: Vec<Summand>,
    /// Complement of all the split summands, in its own basis.
    pub remainder: GradedModule<R>,
    /// Idempotent of the original module onto each summand group, in the
    /// order of `summands`, followed by the idempotent onto the remainder.
    pub projectors: Vec<Mat<R::Elem>>,
}

impl<R: Ring> DecompRecord<R> {
    /// Graded multiplicity `Σ_n m_n v^{-n}` of `D_y` as a summand, where a
    /// shift by `⟨n⟩` contributes `v^{-n}` to the graded rank.
    pub fn multiplicity(&self, y: WElem) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        for s in self.summands.iter().filter(|s| s.y == y) {
            p.add_term(-s.shift, (s.multiplicity as i64).into());
        }
        p
    }

    /// Checks that the projectors are orthogonal idempotents summing to the
    /// identity and commuting with the module structure.
    pub fn verify(&self, module: &GradedModule<R>) -> Result<()> {
        let r = module.ring();
        let n = module.rank();
        let mut total = matrix::zeros(r, n, n);
        for (a, p) in self.projectors.iter().enumerate() {
            for (b, q) in self.projectors.iter().enumerate() {
                let pq = matrix::mul(r, p, q);
                if a == b {
                    ensure!(pq == *p, "projector {a} is not idempotent");
                } else {
                    ensure!(matrix::is_zero(r, &pq), "projectors {a} and {b} are not orthogonal");
                }
            }
            for (g, act) in module.actions().iter().enumerate() {
                ensure!(
                    matrix::mul(r, p, act) == matrix::mul(r, act, p),
                    "projector {a} does not commute with generator {g}"
                );
            }
            total = matrix::add(r, &total, p);
        }
        ensure!(total == matrix::identity(r, n), "projectors do not sum to the identity");
        Ok(())
    }
}

/// Index of the unique basis vector of lowest degree.
fn lowest_index<R: Ring>(d: &GradedModule<R>) -> Result<usize> {
    let deg = d.degrees();
    ensure!(!deg.is_empty(), "indecomposable candidate is zero");
    ensure!(deg.len() == 1 || deg[0] < deg[1], "candidate does not have a one-dimensional lowest degree");
    Ok(0)
}

/// Splits off all summands isomorphic to shifts of the candidates.
///
/// Each candidate must be indecomposable with a one-dimensional lowest
/// degree, whose degree-0 endomorphisms are detected by that corner. For a
/// fixed candidate `D` and shift `n`, the pairing `(p, i) ↦ (p ∘ i)_{lo,lo}`
/// between `Hom(M, D⟨n⟩)` and `Hom(D⟨n⟩, M)` has residue rank equal to the
/// multiplicity of `D⟨n⟩` in `M`, and an invertible minor of it picks out
/// inclusions and projections for those copies.
pub fn decompose<R: Ring>(m: &GradedModule<R>, candidates: &[(WElem, &GradedModule<R>)]) -> Result<DecompRecord<R>> {
    let r = m.ring();
    let nm = m.rank();
    let mut incl: Vec<Mat<R::Elem>> = Vec::new();
    let mut proj: Vec<Mat<R::Elem>> = Vec::new();
    let mut groups: Vec<(Summand, usize, usize)> = Vec::new();
    let mut mdeg: Vec<i32> = m.degrees().to_vec();
    mdeg.dedup();
    for &(y, d) in candidates {
        let lo = lowest_index(d)?;
        let dlo = d.degrees()[lo];
        for &dd in &mdeg {
            let n = dlo - dd;
            let p = hom_degree(m, d, n);
            if p.rank() == 0 {
                continue;
            }
            let i = hom_degree(d, m, -n);
            if i.rank() == 0 {
                continue;
            }
            let gram: Vec<SparseVec<R::Elem>> = p
                .basis
                .iter()
                .map(|pa| {
                    let row: Vec<R::Elem> = i
                        .basis
                        .iter()
                        .map(|ib| {
                            let mut acc = r.zero();
                            for t in 0..nm {
                                r.add_mul_assign(&mut acc, pa.get(lo, t), ib.get(t, lo));
                            }
                            acc
                        })
                        .collect();
                    matrix::to_sparse(r, &row)
                })
                .collect();
            let rows = matrix::residue_independent(r, &gram, i.rank());
            if rows.is_empty() {
                continue;
            }
            let cols_t: Vec<SparseVec<R::Elem>> = (0..i.rank())
                .map(|b| {
                    let col: Vec<R::Elem> =
                        rows.iter().map(|&a| matrix::to_dense(r, &gram[a], i.rank())[b].clone()).collect();
                    matrix::to_sparse(r, &col)
                })
                .collect();
            let cols = matrix::residue_independent(r, &cols_t, rows.len());
            ensure!(cols.len() == rows.len(), "pairing minor selection failed");
            let start = proj.len();
            for &a in &rows {
                proj.push(p.basis[a].clone());
            }
            for &b in &cols {
                incl.push(i.basis[b].clone());
            }
            groups.push((Summand { y, shift: n, multiplicity: rows.len() }, start, d.rank()));
        }
    }

    // ι: ⊕ D → M and π: M → ⊕ D as block matrices
    let total: usize = groups.iter().map(|(s, _, dr)| s.multiplicity * dr).sum();
    let mut iota = matrix::zeros(r, nm, total);
    let mut pi = matrix::zeros(r, total, nm);
    let mut blocks = Vec::with_capacity(groups.len());
    let mut off = 0;
    for (s, start, dr) in &groups {
        let begin = off;
        for c in 0..s.multiplicity {
            let (ic, pc) = (&incl[start + c], &proj[start + c]);
            for a in 0..nm {
                for b in 0..*dr {
                    iota.set(a, off + b, ic.get(a, b).clone());
                    pi.set(off + b, a, pc.get(b, a).clone());
                }
            }
            off += dr;
        }
        blocks.push(begin..off);
    }
    let pi_iota = matrix::mul(r, &pi, &iota);
    let inv = matrix::inverse(r, &pi_iota)
        .ok_or_else(|| Error::Peel("composite of projections and inclusions is not invertible".into()))?;
    let left = matrix::mul(r, &inv, &pi);
    let mut projectors = Vec::with_capacity(groups.len() + 1);
    let mut e = matrix::zeros(r, nm, nm);
    let all: Vec<usize> = (0..nm).collect();
    for blk in &blocks {
        let idx: Vec<usize> = blk.clone().collect();
        let pr = matrix::mul(r, &iota.select(&all, &idx), &left.select(&idx, &all));
        e = matrix::add(r, &e, &pr);
        projectors.push(pr);
    }
    let f = matrix::sub(r, &matrix::identity(r, nm), &e);
    let chosen = matrix::idempotent_image_columns(r, &f);
    ensure!(chosen.len() == nm - total, "remainder has rank {} but expected {}", chosen.len(), nm - total);
    let b = f.select(&all, &chosen);
    let remainder = if chosen.is_empty() {
        GradedModule::new(r.clone(), Vec::new(), m.actions().iter().map(|_| matrix::zeros(r, 0, 0)).collect())
    } else {
        let l = matrix::left_inverse(r, &b).ok_or_else(|| Error::Peel("remainder basis is not split".into()))?;
        let actions = m.actions().iter().map(|a| matrix::mul(r, &matrix::mul(r, &l, a), &b)).collect();
        GradedModule::new(r.clone(), chosen.iter().map(|&c| m.degrees()[c]).collect(), actions)
    };
    projectors.push(f);

    let mut summands: Vec<Summand> = groups.into_iter().map(|(s, _, _)| s).collect();
    let mut order: Vec<usize> = (0..summands.len()).collect();
    order.sort_by_key(|&k| (summands[k].y, summands[k].shift));
    let last = projectors.pop().unwrap();
    let mut projectors: Vec<_> = order.iter().map(|&k| projectors[k].clone()).collect();
    projectors.push(last);
    summands.sort();

    let mut expect = remainder.graded_rank();
    for s in &summands {
        let (_, d) = candidates.iter().find(|(y, _)| *y == s.y).unwrap();
        expect = &expect + &d.graded_rank().shift(-s.shift).scale(&(s.multiplicity as i64).into());
    }
    ensure!(expect == m.graded_rank(), "graded ranks of the summands do not add up");
    Ok(DecompRecord { summands, remainder, projectors })
}

/// Decides whether the degree-0 endomorphism ring of `m`, reduced to the
/// residue field, is local. The module must have a one-dimensional lowest
/// degree. The lowest corner gives a surjection onto the residue field whose
/// kernel is then shown to be nilpotent by computing its powers. At most
/// `budget` matrix products are formed.
pub fn local_endomorphisms<R: Ring>(m: &GradedModule<R>, budget: usize) -> Result<bool> {
    let r = m.ring();
    let f = r.residue_ring();
    let lo = lowest_index(m)?;
    let n = m.rank();
    let end: Vec<Mat<<R::Residue as Ring>::Elem>> =
        hom_degree(m, m, 0).basis.iter().map(|a| matrix::residue_mat(r, a)).collect();
    let Some(p) = end.iter().position(|a| !f.is_zero(a.get(lo, lo))) else {
        return Ok(false);
    };
    let cp = f.inv(end[p].get(lo, lo)).unwrap();
    let kernel: Vec<Mat<_>> = end
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != p)
        .map(|(_, a)| {
            let c = f.mul(a.get(lo, lo), &cp);
            matrix::sub(&f, a, &matrix::scale(&f, &c, &end[p]))
        })
        .filter(|a| !matrix::is_zero(&f, a))
        .collect();
    let flat = |a: &Mat<<R::Residue as Ring>::Elem>| matrix::to_sparse(&f, a.entries());
    let mut power = kernel.clone();
    let mut products = 0usize;
    let mut dim = usize::MAX;
    loop {
        if power.is_empty() {
            return Ok(true);
        }
        if power.len() >= dim {
            return Ok(false);
        }
        dim = power.len();
        let mut ech = Echelon::new(f.clone(), n * n);
        let mut next = Vec::new();
        for a in &kernel {
            for b in &power {
                products += 1;
                if products > budget {
                    return Err(Error::BudgetExhausted(budget));
                }
                let ab = matrix::mul(&f, a, b);
                if ech.insert(&flat(&ab)) {
                    next.push(ab);
                }
            }
        }
        power = next;
    }
}
