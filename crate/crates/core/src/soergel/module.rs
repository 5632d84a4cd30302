use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::coinvariant::{Coinvariants, CsData, Poly};
use crate::error::{ensure, Error, Result};
use crate::laurent::LaurentPoly;
use crate::matrix::{self, Mat};
use crate::ring::Ring;
use crate::rootdata::WeylGroup;

/// Everything needed to build modules over one coefficient ring: the
/// coinvariant algebra and, for each simple reflection, the verified
/// decomposition of `C` over `C_s`.
#[derive(Clone, Debug)]
pub struct Context<R: Ring> {
    pub coinv: Coinvariants<R>,
    pub cs: Vec<CsData>,
}

impl<R: Ring> Context<R> {
    pub fn new(group: &WeylGroup, ring: R) -> Result<Self> {
        let coinv = Coinvariants::new(group, ring)?;
        let cs = (0..group.num_simple()).map(|s| coinv.cs_data(s)).collect::<Result<_>>()?;
        Ok(Context { coinv, cs })
    }

    pub fn ring(&self) -> &R {
        self.coinv.ring()
    }
}

/// A free graded module with commuting degree-2 generator actions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedModule<R: Ring> {
    ring: R,
    degrees: Vec<i32>,
    actions: Vec<Mat<R::Elem>>,
}

impl<R: Ring> GradedModule<R> {
    /// Assembles a module, sorting the basis by degree.
    pub fn new(ring: R, degrees: Vec<i32>, actions: Vec<Mat<R::Elem>>) -> Self {
        let mut perm: Vec<usize> = (0..degrees.len()).collect();
        perm.sort_by_key(|&i| degrees[i]);
        if perm.iter().enumerate().all(|(i, &p)| i == p) {
            return GradedModule { ring, degrees, actions };
        }
        let degrees = perm.iter().map(|&i| degrees[i]).collect();
        let actions = actions.iter().map(|a| a.select(&perm, &perm)).collect();
        GradedModule { ring, degrees, actions }
    }

    /// The unit module `E = S / 𝔥S` in degree 0: `D_e`.
    pub fn unit(ring: R, ngens: usize) -> Self {
        let actions = (0..ngens).map(|_| matrix::zeros(&ring, 1, 1)).collect();
        GradedModule { ring, degrees: vec![0], actions }
    }

    /// `C` as a module over itself, shifted by `⟨ℓ(w_0)⟩` so that its
    /// grading is symmetric about 0.
    pub fn regular(coinv: &Coinvariants<R>) -> Self {
        let top = coinv.top() as i32;
        let mut degrees = Vec::new();
        for k in 0..=coinv.top() {
            degrees.extend(std::iter::repeat_n(2 * k as i32 - top, coinv.dim(k)));
        }
        let actions = (0..coinv.num_generators()).map(|i| coinv.generator_action(i).clone()).collect();
        GradedModule { ring: coinv.ring().clone(), degrees, actions }
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    pub fn degrees(&self) -> &[i32] {
        &self.degrees
    }

    pub fn num_generators(&self) -> usize {
        self.actions.len()
    }

    pub fn action(&self, i: usize) -> &Mat<R::Elem> {
        &self.actions[i]
    }

    pub fn actions(&self) -> &[Mat<R::Elem>] {
        &self.actions
    }

    /// `Σ_b v^{deg b}`
    pub fn graded_rank(&self) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        for &d in &self.degrees {
            p.add_term(d, 1.into());
        }
        p
    }

    /// `M⟨n⟩`, with `(M⟨n⟩)_d = M_{d+n}`.
    pub fn shift(&self, n: i32) -> Self {
        GradedModule {
            ring: self.ring.clone(),
            degrees: self.degrees.iter().map(|d| d - n).collect(),
            actions: self.actions.clone(),
        }
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let r = &self.ring;
        let (a, b) = (self.rank(), other.rank());
        let actions = self
            .actions
            .iter()
            .zip(&other.actions)
            .map(|(x, y)| {
                Mat::from_fn(a + b, a + b, |i, j| match (i < a, j < a) {
                    (true, true) => x.get(i, j).clone(),
                    (false, false) => y.get(i - a, j - a).clone(),
                    _ => r.zero(),
                })
            })
            .collect();
        let degrees = self.degrees.iter().chain(&other.degrees).copied().collect();
        GradedModule::new(r.clone(), degrees, actions)
    }

    /// Entrywise image under a ring map.
    pub fn base_change<S: Ring>(&self, target: S, f: impl Fn(&R::Elem) -> S::Elem) -> GradedModule<S> {
        GradedModule {
            ring: target,
            degrees: self.degrees.clone(),
            actions: self.actions.iter().map(|a| a.map(&f)).collect(),
        }
    }

    /// Reduction to the residue field.
    pub fn reduce(&self) -> GradedModule<R::Residue> {
        let r = self.ring.clone();
        self.base_change(r.residue_ring(), |x| r.residue(x))
    }

    /// Action of a linear form `Σ λ_i y_i`.
    pub fn act_linear(&self, lambda: &[R::Elem]) -> Mat<R::Elem> {
        let r = &self.ring;
        let mut out = matrix::zeros(r, self.rank(), self.rank());
        for (c, a) in lambda.iter().zip(&self.actions) {
            if !r.is_zero(c) {
                out = matrix::add(r, &out, &matrix::scale(r, c, a));
            }
        }
        out
    }

    /// Action of a homogeneous polynomial, with monomial actions cached.
    pub fn act_poly(&self, coinv: &Coinvariants<R>, f: &Poly<R::Elem>, cache: &mut HashMap<Vec<u8>, Mat<R::Elem>>) -> Mat<R::Elem> {
        let r = &self.ring;
        let mons = coinv.monomials();
        let mut out = matrix::zeros(r, self.rank(), self.rank());
        for (m, c) in f.coeffs.iter().enumerate() {
            if r.is_zero(c) {
                continue;
            }
            let e = mons.exponent(f.deg, m).to_vec();
            let a = self.monomial_action(&e, cache);
            out = matrix::add(r, &out, &matrix::scale(r, c, &a));
        }
        out
    }

    fn monomial_action(&self, e: &[u8], cache: &mut HashMap<Vec<u8>, Mat<R::Elem>>) -> Mat<R::Elem> {
        if let Some(a) = cache.get(e) {
            return a.clone();
        }
        let a = match e.iter().position(|&x| x > 0) {
            None => matrix::identity(&self.ring, self.rank()),
            Some(t) => {
                let mut lower = e.to_vec();
                lower[t] -= 1;
                let l = self.monomial_action(&lower, cache);
                matrix::mul(&self.ring, &self.actions[t], &l)
            }
        };
        cache.insert(e.to_vec(), a.clone());
        a
    }

    /// Checks that the actions raise degree by 2, commute, and kill the
    /// fundamental invariants, so that the module is a graded `C`-module.
    pub fn validate(&self, coinv: &Coinvariants<R>) -> Result<()> {
        let r = &self.ring;
        ensure!(self.actions.len() == coinv.num_generators(), "wrong number of generator actions");
        ensure!(self.degrees.windows(2).all(|w| w[0] <= w[1]), "basis is not sorted by degree");
        for (g, a) in self.actions.iter().enumerate() {
            for i in 0..self.rank() {
                for j in 0..self.rank() {
                    if !r.is_zero(a.get(i, j)) {
                        ensure!(
                            self.degrees[i] == self.degrees[j] + 2,
                            "generator {g} does not raise degree by 2"
                        );
                    }
                }
            }
        }
        for i in 0..self.actions.len() {
            for j in i + 1..self.actions.len() {
                let ab = matrix::mul(r, &self.actions[i], &self.actions[j]);
                let ba = matrix::mul(r, &self.actions[j], &self.actions[i]);
                ensure!(ab == ba, "generator actions {i} and {j} do not commute");
            }
        }
        let mut cache = HashMap::new();
        for f in coinv.fundamental_invariants() {
            ensure!(
                matrix::is_zero(r, &self.act_poly(coinv, f, &mut cache)),
                "an invariant of degree {} acts nontrivially",
                2 * f.deg
            );
        }
        Ok(())
    }

    /// Serializable snapshot, with entries printed by the ring.
    pub fn to_repr(&self) -> ModuleRepr {
        ModuleRepr {
            schema: MODULE_SCHEMA.to_string(),
            ring: self.ring.kind().tag(),
            degrees: self.degrees.clone(),
            actions: self
                .actions
                .iter()
                .map(|a| (0..a.rows()).map(|i| a.row(i).iter().map(|x| self.ring.format(x)).collect()).collect())
                .collect(),
        }
    }

    pub fn from_repr(ring: R, repr: &ModuleRepr) -> Result<Self> {
        if repr.schema != MODULE_SCHEMA {
            return Err(Error::Parse(format!("unknown module schema {:?}", repr.schema)));
        }
        if repr.ring != ring.kind().tag() {
            return Err(Error::Parse(format!("module is over {}, expected {}", repr.ring, ring.kind().tag())));
        }
        let n = repr.degrees.len();
        let mut actions = Vec::new();
        for a in &repr.actions {
            if a.len() != n || a.iter().any(|row| row.len() != n) {
                return Err(Error::Parse("action matrix has the wrong shape".into()));
            }
            let rows = a.iter().map(|row| row.iter().map(|x| ring.parse(x)).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?;
            actions.push(Mat::from_rows(rows, n));
        }
        Ok(GradedModule { ring, degrees: repr.degrees.clone(), actions })
    }
}

pub const MODULE_SCHEMA: &str = "ptilt-module/v1";

/// JSON form of a module. Ring elements are strings such as `"-3/4"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleRepr {
    pub schema: String,
    pub ring: String,
    pub degrees: Vec<i32>,
    pub actions: Vec<Vec<Vec<String>>>,
}

/// `C ⊗_{C_s} M ⟨1⟩`.
///
/// The basis is `{1 ⊗ m} ∪ {δ_s ⊗ m}`. Writing a generator `h` as
/// `a + ⟨α_s, h⟩ δ_s` and `h δ_s` as `a' + b' δ_s` with `a, a', b'` in `C_s`
/// gives the block action `[[a, a'], [⟨α_s, h⟩, b']]`, where
/// `a = h - ⟨α_s, h⟩ δ_s`, `b' = s(h) + ⟨α_s, h⟩ δ_s` and
/// `a' = (h - b') δ_s`, all acting on `M` through its own `C`-action.
pub fn bs_extend<R: Ring>(ctx: &Context<R>, m: &GradedModule<R>, s: usize) -> GradedModule<R> {
    let r = m.ring();
    let datum = ctx.coinv.datum();
    let delta = ctx.cs[s].delta;
    let alpha = &datum.simple_roots[s];
    let coroot: Vec<R::Elem> = datum.simple_coroots[s].iter().map(|&x| r.from_i64(x)).collect();
    let n = m.rank();
    let a_delta = m.action(delta);
    let a_coroot = m.act_linear(&coroot);
    let id = matrix::identity(r, n);
    let mut actions = Vec::with_capacity(m.num_generators());
    for i in 0..m.num_generators() {
        let b = r.from_i64(alpha[i]);
        let ai = m.action(i);
        let act_a = matrix::sub(r, ai, &matrix::scale(r, &b, a_delta));
        let act_bp = matrix::add(r, &matrix::sub(r, ai, &matrix::scale(r, &b, &a_coroot)), &matrix::scale(r, &b, a_delta));
        let act_ap = matrix::mul(r, &matrix::sub(r, ai, &act_bp), a_delta);
        let b_id = matrix::scale(r, &b, &id);
        actions.push(Mat::from_fn(2 * n, 2 * n, |p, q| match (p < n, q < n) {
            (true, true) => act_a.get(p, q).clone(),
            (true, false) => act_ap.get(p, q - n).clone(),
            (false, true) => b_id.get(p - n, q).clone(),
            (false, false) => act_bp.get(p - n, q - n).clone(),
        }));
    }
    let degrees = m.degrees().iter().map(|d| d - 1).chain(m.degrees().iter().map(|d| d + 1)).collect();
    GradedModule::new(r.clone(), degrees, actions)
}

/// `BS(s_1, ..., s_k) = C ⊗_{C_{s_1}} C ⊗ ... ⊗_{C_{s_k}} E`, so the first
/// listed reflection is the outermost factor.
pub fn bs_module<R: Ring>(ctx: &Context<R>, seq: &[usize]) -> GradedModule<R> {
    let unit = GradedModule::unit(ctx.ring().clone(), ctx.coinv.num_generators());
    seq.iter().rev().fold(unit, |m, &s| bs_extend(ctx, &m, s))
}
