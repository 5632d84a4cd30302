use crate::error::{ensure, Error, Result};
use crate::laurent::LaurentPoly;
use crate::ring::{LocalIntegers, PrimeField, Rationals, Ring};
use crate::rootdata::{WElem, WeylGroup};

use super::decompose::{decompose, local_endomorphisms, DecompRecord, Summand};
use super::hom::graded_hom_rank;
use super::module::{bs_extend, Context, GradedModule};

/// Default limit on the matrix products spent proving that an endomorphism
/// ring is local.
pub const DEFAULT_BUDGET: usize = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LibraryOptions {
    /// Limit for each locality certificate.
    pub budget: usize,
    /// Also check every intermediate module against the defining relations
    /// of the coinvariant algebra.
    pub validate_modules: bool,
}

impl Default for LibraryOptions {
    fn default() -> Self {
        LibraryOptions { budget: DEFAULT_BUDGET, validate_modules: true }
    }
}

/// The indecomposable modules `D_w` for every `w`, built by induction on
/// length: with `s` the first letter of the canonical word of `w`, `D_w` is
/// the part of `C ⊗_{C_s} D_{sw} ⟨1⟩` left after splitting off every `D_y`
/// with `y < w`.
#[derive(Clone, Debug)]
pub struct Library<R: Ring> {
    ctx: Context<R>,
    group: WeylGroup,
    modules: Vec<GradedModule<R>>,
}

impl<R: Ring> Library<R> {
    pub fn build(group: &WeylGroup, ring: R, options: LibraryOptions) -> Result<Self> {
        let ctx = Context::new(group, ring.clone())?;
        let ngens = ctx.coinv.num_generators();
        let mut modules: Vec<GradedModule<R>> = Vec::with_capacity(group.size());
        for w in group.elements() {
            if w == group.identity() {
                modules.push(GradedModule::unit(ring.clone(), ngens));
                continue;
            }
            let s = group.word(w)[0] as usize;
            let sw = group.lmul(s, w);
            let ext = bs_extend(&ctx, &modules[sw], s);
            if options.validate_modules {
                ext.validate(&ctx.coinv)?;
            }
            let below = group.bruhat_below(w);
            let candidates: Vec<(WElem, &GradedModule<R>)> =
                below.iter().filter(|&y| y != w).map(|y| (y, &modules[y])).collect();
            let rec = decompose(&ext, &candidates)?;
            let d = rec.remainder;
            check_lowest_degree(group, w, &d)?;
            if !local_endomorphisms(&d, options.budget)? {
                return Err(Error::Invariant(format!(
                    "degree-0 endomorphisms of D_{} are not local",
                    group.format(w)
                )));
            }
            modules.push(d);
        }
        Ok(Library { ctx, group: group.clone(), modules })
    }

    /// Reassembles a library from stored modules, checking that each one is
    /// a graded module over the coinvariant algebra of the right shape. The
    /// indecomposability certificates are not rerun.
    pub fn from_modules(group: &WeylGroup, ring: R, modules: Vec<GradedModule<R>>) -> Result<Self> {
        let ctx = Context::new(group, ring)?;
        ensure!(modules.len() == group.size(), "expected {} modules, got {}", group.size(), modules.len());
        for (w, d) in modules.iter().enumerate() {
            d.validate(&ctx.coinv)?;
            check_lowest_degree(group, w, d)?;
        }
        Ok(Library { ctx, group: group.clone(), modules })
    }

    pub fn context(&self) -> &Context<R> {
        &self.ctx
    }

    pub fn group(&self) -> &WeylGroup {
        &self.group
    }

    pub fn ring(&self) -> &R {
        self.ctx.ring()
    }

    pub fn module(&self, w: WElem) -> &GradedModule<R> {
        &self.modules[w]
    }

    pub fn modules(&self) -> &[GradedModule<R>] {
        &self.modules
    }

    /// Graded rank of `Hom(D_u, D_w)`.
    pub fn hom_rank(&self, u: WElem, w: WElem) -> LaurentPoly {
        graded_hom_rank(&self.modules[u], &self.modules[w])
    }

    /// Decomposes `m` against `D_y` for all `y ≤ bound`.
    pub fn decompose_below(&self, m: &GradedModule<R>, bound: WElem) -> Result<DecompRecord<R>> {
        let candidates: Vec<(WElem, &GradedModule<R>)> =
            self.group.bruhat_below(bound).iter().map(|y| (y, &self.modules[y])).collect();
        decompose(m, &candidates)
    }
}

fn check_lowest_degree<R: Ring>(group: &WeylGroup, w: WElem, d: &GradedModule<R>) -> Result<()> {
    let len = group.length(w) as i32;
    ensure!(
        d.rank() > 0 && d.degrees()[0] == -len && (d.rank() == 1 || d.degrees()[1] > -len),
        "D_{} does not have a one-dimensional lowest degree -{len}",
        group.format(w)
    );
    Ok(())
}

/// Checks that each `D_w` over the local ring reduces to the indecomposable
/// `D_w` over the residue field.
pub fn check_reduction(local: &Library<LocalIntegers>, field: &Library<PrimeField>) -> Result<()> {
    let g = local.group();
    for w in g.elements() {
        let red = local.module(w).reduce();
        let rec = field.decompose_below(&red, w)?;
        ensure!(
            rec.remainder.rank() == 0 && rec.summands == vec![Summand { y: w, shift: 0, multiplicity: 1 }],
            "reduction of D_{} is {:?} plus a remainder of rank {}",
            g.format(w),
            rec.summands,
            rec.remainder.rank()
        );
    }
    Ok(())
}

/// Decomposes each `D_w` over the local ring after inverting the prime.
/// Entry `[y][w]` of the result is the graded multiplicity of the
/// characteristic-zero `D_y` in it.
pub fn char_zero_multiplicities(local: &Library<LocalIntegers>, rational: &Library<Rationals>) -> Result<Vec<Vec<LaurentPoly>>> {
    let g = local.group();
    let n = g.size();
    let o = *local.ring();
    let mut out = vec![vec![LaurentPoly::zero(); n]; n];
    for w in g.elements() {
        let gen = local.module(w).base_change(Rationals, |x| o.to_rationals(x));
        let rec = rational.decompose_below(&gen, w)?;
        ensure!(
            rec.remainder.rank() == 0,
            "D_{} over the fraction field has a summand outside the library",
            g.format(w)
        );
        for y in g.elements() {
            out[y][w] = rec.multiplicity(y);
        }
    }
    Ok(out)
}
