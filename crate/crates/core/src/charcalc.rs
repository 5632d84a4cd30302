//! Character data derived from the indecomposable modules: stalk ranks and
//! polynomials, tilting and composition multiplicities, and decomposition
//! matrices, together with the identities that tie them to each other.

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{ensure, Error, Result};
use crate::hecke::{bar, bar_standard_table, HeckeElement, KlTable};
use crate::laurent::LaurentPoly;
use crate::ring::Ring;
use crate::rootdata::{WElem, WeylGroup};
use crate::soergel::Library;

/// Square table indexed by pairs of group elements.
pub type Table<T> = Vec<Vec<T>>;

/// Graded and ungraded ranks of `Hom(D_v, D_w)`, indexed `[v][w]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomTable {
    pub graded: Table<LaurentPoly>,
    pub ungraded: Table<i64>,
}

pub fn hom_rank_table<R: Ring>(lib: &Library<R>) -> HomTable {
    let g = lib.group();
    let graded: Table<LaurentPoly> =
        g.elements().map(|v| g.elements().map(|w| lib.hom_rank(v, w)).collect()).collect();
    let ungraded = graded.iter().map(|row| row.iter().map(LaurentPoly::eval_at_one_i64).collect()).collect();
    HomTable { graded, ungraded }
}

/// Stalk data of the indecomposables, indexed `[x][w]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StalkTable {
    /// Graded stalk polynomials `h_{x,w}`, normalized by `h_{w,w} = 1`.
    pub h: Table<LaurentPoly>,
    /// Ungraded stalk ranks.
    pub ungraded: Table<i64>,
}

/// Ungraded stalk ranks by induction on `u`:
/// `stalk(u, w) = rk Hom(D_u, D_w) - Σ_{x < u} stalk(x, u) stalk(x, w)`.
pub fn stalk_ranks_ungraded(g: &WeylGroup, homs: &Table<i64>) -> Result<Table<i64>> {
    let n = g.size();
    let mut st = vec![vec![0i64; n]; n];
    // elements are numbered compatibly with length, so x < u is already done
    for u in g.elements() {
        let below: Vec<WElem> = g.bruhat_below(u).iter().filter(|&x| x != u).collect();
        for w in g.elements() {
            let corr: i64 = below.iter().map(|&x| st[x][u] * st[x][w]).sum();
            let val = homs[u][w] - corr;
            ensure!(val >= 0, "negative stalk rank {val} at ({}, {})", g.format(u), g.format(w));
            ensure!(
                g.bruhat_leq(u, w) || val == 0,
                "stalk rank {val} outside the closure at ({}, {})",
                g.format(u),
                g.format(w)
            );
            st[u][w] = val;
        }
        ensure!(st[u][u] == 1, "stalk rank of D_{} on its own cell is {}", g.format(u), st[u][u]);
    }
    Ok(st)
}

/// Graded refinement of the ungraded recursion. The graded Hom ranks satisfy
/// `grk Hom(D_u, D_w) = Σ_x h_{x,u} h_{x,w}`, which is triangular in `u`.
pub fn stalk_polynomials(g: &WeylGroup, homs: &Table<LaurentPoly>) -> Result<Table<LaurentPoly>> {
    let n = g.size();
    let mut h = vec![vec![LaurentPoly::zero(); n]; n];
    for u in g.elements() {
        let below: Vec<WElem> = g.bruhat_below(u).iter().filter(|&x| x != u).collect();
        for w in g.elements() {
            let mut val = homs[u][w].clone();
            for &x in &below {
                val = &val - &(&h[x][u] * &h[x][w]);
            }
            ensure!(
                val.has_nonnegative_coeffs(),
                "stalk polynomial at ({}, {}) has a negative coefficient: {val}",
                g.format(u),
                g.format(w)
            );
            ensure!(
                g.bruhat_leq(u, w) || val.is_zero(),
                "stalk polynomial {val} outside the closure at ({}, {})",
                g.format(u),
                g.format(w)
            );
            h[u][w] = val;
        }
        ensure!(h[u][u] == LaurentPoly::one(), "h_{{w,w}} = {} for w = {}", h[u][u], g.format(u));
    }
    Ok(h)
}

impl StalkTable {
    pub fn compute(g: &WeylGroup, homs: &HomTable) -> Result<Self> {
        let ungraded = stalk_ranks_ungraded(g, &homs.ungraded)?;
        let h = stalk_polynomials(g, &homs.graded)?;
        for x in g.elements() {
            for w in g.elements() {
                ensure!(
                    h[x][w].eval_at_one_i64() == ungraded[x][w],
                    "graded and ungraded stalks disagree at ({}, {})",
                    g.format(x),
                    g.format(w)
                );
            }
        }
        Ok(StalkTable { h, ungraded })
    }
}

/// Exact comparison with the Kazhdan–Lusztig table.
pub fn calibration_check(g: &WeylGroup, h: &Table<LaurentPoly>, kl: &KlTable) -> Result<()> {
    for x in g.elements() {
        for w in g.elements() {
            ensure!(
                h[x][w] == *kl.h(x, w),
                "h_{{{},{}}} = {} but the Kazhdan–Lusztig value is {}",
                g.format(x),
                g.format(w),
                h[x][w],
                kl.h(x, w)
            );
        }
    }
    Ok(())
}

/// `rk Hom(D_v, D_w) = Σ_u stalk(u, v) stalk(u, w)`, evaluated directly.
pub fn pairing_check(g: &WeylGroup, homs: &Table<i64>, stalks: &Table<i64>) -> Result<()> {
    for v in g.elements() {
        for w in g.elements() {
            let sum: i64 = g.elements().map(|u| stalks[u][v] * stalks[u][w]).sum();
            ensure!(
                sum == homs[v][w],
                "pairing fails at ({}, {}): Hom rank {} but Σ stalk·stalk = {sum}",
                g.format(v),
                g.format(w),
                homs[v][w]
            );
        }
    }
    Ok(())
}

/// Each `Σ_x h_{x,w} H_x` must be fixed by the bar involution of the Hecke
/// algebra, which is how self-duality shows up in the standard basis.
pub fn self_duality_check(g: &WeylGroup, h: &Table<LaurentPoly>) -> Result<()> {
    let table = bar_standard_table(g);
    for w in g.elements() {
        let mut b = HeckeElement::zero(g);
        for x in g.elements() {
            b.set(x, h[x][w].clone());
        }
        ensure!(bar(g, &table, &b) == b, "the basis element for {} is not self-dual", g.format(w));
    }
    Ok(())
}

/// Graded ranks of self-dual modules are palindromic.
pub fn palindromic_ranks_check<R: Ring>(lib: &Library<R>) -> Result<()> {
    let g = lib.group();
    for w in g.elements() {
        let p = lib.module(w).graded_rank();
        ensure!(p.is_bar_invariant(), "graded rank {p} of D_{} is not palindromic", g.format(w));
    }
    Ok(())
}

/// `stalk(x, y) = stalk(x^{-1}, y^{-1})`
pub fn symmetry_check(g: &WeylGroup, stalks: &Table<i64>) -> Result<()> {
    for x in g.elements() {
        for y in g.elements() {
            let (xi, yi) = (g.inverse(x), g.inverse(y));
            ensure!(
                stalks[x][y] == stalks[xi][yi],
                "stalk({}, {}) = {} but stalk({}, {}) = {}",
                g.format(x),
                g.format(y),
                stalks[x][y],
                g.format(xi),
                g.format(yi),
                stalks[xi][yi]
            );
        }
    }
    Ok(())
}

/// Tilting data. `tilt[w][v]` is the costandard multiplicity of `v` in the
/// tilting object for `w`, `comp[w][v]` the composition multiplicity of the
/// simple `v` in the costandard `w`, and `homrank[v][w]` is the Hom rank
/// between tilting objects.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultTables {
    pub tilt: Table<i64>,
    pub comp: Table<i64>,
    pub homrank: Table<i64>,
}

/// Ranks between tilting objects: the tilting object for `w` corresponds to
/// `D_{w^{-1}}`.
pub fn tilting_hom_ranks(g: &WeylGroup, homs: &Table<i64>) -> Table<i64> {
    g.elements().map(|v| g.elements().map(|w| homs[g.inverse(v)][g.inverse(w)]).collect()).collect()
}

/// `tilt(w, u) = rk Hom(T_u, T_w) - Σ_{x < u} tilt(u, x) tilt(w, x)`.
pub fn tilting_multiplicities(g: &WeylGroup, thom: &Table<i64>) -> Result<Table<i64>> {
    let n = g.size();
    let mut tilt = vec![vec![0i64; n]; n];
    for u in g.elements() {
        let below: Vec<WElem> = g.bruhat_below(u).iter().filter(|&x| x != u).collect();
        for w in g.elements() {
            let corr: i64 = below.iter().map(|&x| tilt[u][x] * tilt[w][x]).sum();
            let val = thom[u][w] - corr;
            ensure!(val >= 0, "negative tilting multiplicity {val} at ({}, {})", g.format(w), g.format(u));
            ensure!(
                g.bruhat_leq(u, w) || val == 0,
                "tilting multiplicity {val} outside the closure at ({}, {})",
                g.format(w),
                g.format(u)
            );
            tilt[w][u] = val;
        }
        ensure!(tilt[u][u] == 1, "tilt({0}, {0}) = {1}", g.format(u), tilt[u][u]);
    }
    Ok(tilt)
}

/// `rk Hom(T_v, T_w) = Σ_u tilt(v, u) tilt(w, u)`
pub fn tilting_roundtrip_check(g: &WeylGroup, thom: &Table<i64>, tilt: &Table<i64>) -> Result<()> {
    for v in g.elements() {
        for w in g.elements() {
            let sum: i64 = g.elements().map(|u| tilt[v][u] * tilt[w][u]).sum();
            ensure!(
                sum == thom[v][w],
                "round trip fails at ({}, {}): {} vs {sum}",
                g.format(v),
                g.format(w),
                thom[v][w]
            );
        }
    }
    Ok(())
}

/// `tilt(w, v) = stalk(v^{-1}, w^{-1})`
pub fn tilt_stalk_check(g: &WeylGroup, tilt: &Table<i64>, stalks: &Table<i64>) -> Result<()> {
    for w in g.elements() {
        for v in g.elements() {
            let s = stalks[g.inverse(v)][g.inverse(w)];
            ensure!(
                tilt[w][v] == s,
                "tilt({}, {}) = {} but the stalk is {s}",
                g.format(w),
                g.format(v),
                tilt[w][v]
            );
        }
    }
    Ok(())
}

/// `comp(w, v) = tilt(v w_0, w w_0)`
pub fn composition_multiplicities(g: &WeylGroup, tilt: &Table<i64>) -> Table<i64> {
    let w0 = g.longest();
    g.elements()
        .map(|w| g.elements().map(|v| tilt[g.multiply(v, w0)][g.multiply(w, w0)]).collect())
        .collect()
}

impl MultTables {
    pub fn compute(g: &WeylGroup, homs: &Table<i64>) -> Result<Self> {
        let homrank = tilting_hom_ranks(g, homs);
        let tilt = tilting_multiplicities(g, &homrank)?;
        let comp = composition_multiplicities(g, &tilt);
        Ok(MultTables { tilt, comp, homrank })
    }
}

/// Exact inverse of the composition matrix and the Euler characteristics it
/// encodes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EulerInverse {
    /// `inverse[v][w]`, with `Σ_v comp[w][v] inverse[v][u] = δ_{w,u}`.
    pub inverse: Table<i64>,
    /// `chi[v][w] = (-1)^{ℓ(v)} inverse[v][w]`.
    pub chi: Table<i64>,
}

/// Inverts the composition matrix over the integers. It is unitriangular for
/// the Bruhat order, so back substitution along the length order suffices;
/// the product with the original is checked afterwards.
pub fn euler_inverse(g: &WeylGroup, comp: &Table<i64>) -> Result<EulerInverse> {
    let n = g.size();
    for w in g.elements() {
        ensure!(comp[w][w] == 1, "composition matrix has diagonal entry {} at {}", comp[w][w], g.format(w));
        for v in g.elements() {
            ensure!(v <= w || comp[w][v] == 0, "composition matrix is not triangular");
        }
    }
    // comp is lower triangular in the element numbering; solve comp·X = 1
    let mut inv = vec![vec![0i64; n]; n];
    for u in 0..n {
        for w in 0..n {
            let mut val: i64 = if w == u { 1 } else { 0 };
            for v in 0..w {
                val = val
                    .checked_sub(comp[w][v].checked_mul(inv[v][u]).ok_or_else(overflow)?)
                    .ok_or_else(overflow)?;
            }
            inv[w][u] = val;
        }
    }
    for w in 0..n {
        for u in 0..n {
            let s: i64 = (0..n).map(|v| comp[w][v] * inv[v][u]).sum();
            ensure!(s == i64::from(w == u), "composition matrix times its inverse is not the identity");
        }
    }
    let chi = (0..n)
        .map(|v| {
            let sign = if g.length(v).is_multiple_of(2) { 1 } else { -1 };
            inv[v].iter().map(|x| sign * x).collect()
        })
        .collect();
    Ok(EulerInverse { inverse: inv, chi })
}

fn overflow() -> Error {
    Error::Invariant("integer overflow while inverting the composition matrix".into())
}

/// Which matrices were computed from modules and which were filled in from
/// the known relations between them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub e: String,
    pub t: String,
    pub p: String,
    pub i: String,
}

/// Decomposition matrices. `e[v][w]` is the total multiplicity of the
/// characteristic-zero `D_{v^{-1}}` in the generic fibre of the integral
/// `D_{w^{-1}}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompMatrices {
    pub e: Table<i64>,
    pub t: Table<i64>,
    pub p: Table<i64>,
    pub i: Table<i64>,
    pub provenance: Provenance,
}

pub const COMPUTED: &str = "computed";
pub const DERIVED_FROM_E: &str = "derived from E via the decomposition theorem, not independently computed";

/// Builds the matrices from the graded multiplicities `mult[y][w]` of the
/// characteristic-zero `D_y` in the generic fibre of the integral `D_w`.
pub fn decomposition_matrices(g: &WeylGroup, mult: &Table<LaurentPoly>) -> Result<DecompMatrices> {
    let n = g.size();
    let w0 = g.longest();
    let mut e = vec![vec![0i64; n]; n];
    for v in g.elements() {
        for w in g.elements() {
            let m = &mult[g.inverse(v)][g.inverse(w)];
            ensure!(m.has_nonnegative_coeffs(), "negative decomposition multiplicity");
            e[v][w] = m.eval_at_one_i64();
        }
    }
    for v in g.elements() {
        ensure!(e[v][v] == 1, "E has diagonal entry {} at {}", e[v][v], g.format(v));
        for w in g.elements() {
            ensure!(
                e[v][w] == 0 || g.bruhat_leq(g.inverse(v), g.inverse(w)),
                "E is not unitriangular at ({}, {})",
                g.format(v),
                g.format(w)
            );
        }
    }
    let t = e.clone();
    let p: Table<i64> =
        g.elements().map(|a| g.elements().map(|b| t[g.multiply(a, w0)][g.multiply(b, w0)]).collect()).collect();
    let i: Table<i64> = (0..n).map(|v| (0..n).map(|w| p[w][v]).collect()).collect();
    Ok(DecompMatrices {
        e,
        t,
        p,
        i,
        provenance: Provenance {
            e: COMPUTED.into(),
            t: DERIVED_FROM_E.into(),
            p: DERIVED_FROM_E.into(),
            i: DERIVED_FROM_E.into(),
        },
    })
}

/// Outcome of one named check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl CheckOutcome {
    pub fn from_result(name: &str, r: Result<()>) -> Self {
        match r {
            Ok(()) => CheckOutcome { name: name.into(), pass: true, detail: String::new() },
            Err(e) => CheckOutcome { name: name.into(), pass: false, detail: e.to_string() },
        }
    }
}

/// Everything computed from one library.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub homs: HomTable,
    pub stalks: StalkTable,
    pub mult: MultTables,
    pub euler: EulerInverse,
    pub checks: Vec<CheckOutcome>,
}

impl Analysis {
    /// Runs every table computation and identity check. Table computations
    /// that fail are returned as errors; identity checks are recorded.
    pub fn run<R: Ring>(lib: &Library<R>, kl: Option<&KlTable>) -> Result<Self> {
        let g = lib.group();
        let homs = hom_rank_table(lib);
        let stalks = StalkTable::compute(g, &homs)?;
        let mult = MultTables::compute(g, &homs.ungraded)?;
        let euler = euler_inverse(g, &mult.comp)?;
        let mut checks = vec![
            CheckOutcome::from_result("pairing", pairing_check(g, &homs.ungraded, &stalks.ungraded)),
            CheckOutcome::from_result("tilting_roundtrip", tilting_roundtrip_check(g, &mult.homrank, &mult.tilt)),
            CheckOutcome::from_result("tilt_equals_stalk", tilt_stalk_check(g, &mult.tilt, &stalks.ungraded)),
            CheckOutcome::from_result("self_duality", self_duality_check(g, &stalks.h)),
            CheckOutcome::from_result("palindromic_ranks", palindromic_ranks_check(lib)),
            CheckOutcome::from_result("inverse_symmetry", symmetry_check(g, &stalks.ungraded)),
        ];
        if let Some(kl) = kl {
            if lib.ring().kind().prime().is_none() {
                checks.push(CheckOutcome::from_result("kl_calibration", calibration_check(g, &stalks.h, kl)));
            }
        }
        Ok(Analysis { homs, stalks, mult, euler, checks })
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Signed Kazhdan–Lusztig values `(-1)^{ℓ(v)+ℓ(w)} P_{w,v}(1)`, which in
/// characteristic zero make up the inverse of the composition matrix.
pub fn kl_signed_inverse(g: &WeylGroup, kl: &KlTable) -> Table<i64> {
    g.elements()
        .map(|v| {
            g.elements()
                .map(|w| {
                    let p: BigInt = kl.p(w, v).eval_at_one();
                    let p = i64::try_from(p).expect("small value");
                    if (g.length(v) + g.length(w)).is_multiple_of(2) {
                        p
                    } else {
                        -p
                    }
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Rationals;
    use crate::rootdata::RootDatum;
    use crate::soergel::LibraryOptions;

    fn group(s: &str) -> WeylGroup {
        WeylGroup::new(RootDatum::parse(s).unwrap()).unwrap()
    }

    #[test]
    fn a1_tables() {
        let g = group("A1");
        let lib = Library::build(&g, Rationals, LibraryOptions::default()).unwrap();
        let a = Analysis::run(&lib, Some(&KlTable::compute(&g).unwrap())).unwrap();
        assert!(a.passed(), "{:?}", a.checks);
        assert_eq!(a.homs.ungraded, vec![vec![1, 1], vec![1, 2]]);
        assert_eq!(a.stalks.h[0][1], LaurentPoly::v());
        assert_eq!(a.mult.tilt[1][0], 1);
        assert_eq!(a.mult.comp, vec![vec![1, 0], vec![1, 1]]);
        assert_eq!(a.euler.inverse, vec![vec![1, 0], vec![-1, 1]]);
    }

    #[test]
    fn euler_inverse_is_signed_kl_in_characteristic_zero() {
        for name in ["A2", "B2"] {
            let g = group(name);
            let kl = KlTable::compute(&g).unwrap();
            let lib = Library::build(&g, Rationals, LibraryOptions::default()).unwrap();
            let a = Analysis::run(&lib, Some(&kl)).unwrap();
            assert!(a.passed(), "{:?}", a.checks);
            assert_eq!(a.euler.inverse, kl_signed_inverse(&g, &kl), "{name}");
        }
    }

    #[test]
    fn stalk_recursion_rejects_negative_values() {
        let g = group("A1");
        let homs = vec![vec![1, 2], vec![2, 1]];
        assert!(stalk_ranks_ungraded(&g, &homs).is_err());
    }

    #[test]
    fn identity_decomposition_matrices() {
        let g = group("A2");
        let n = g.size();
        let mult: Table<LaurentPoly> =
            (0..n).map(|y| (0..n).map(|w| if y == w { LaurentPoly::one() } else { LaurentPoly::zero() }).collect()).collect();
        let d = decomposition_matrices(&g, &mult).unwrap();
        assert_eq!(d.e, d.p);
        assert_eq!(d.provenance.e, COMPUTED);
        assert_eq!(d.provenance.i, DERIVED_FROM_E);
    }
}
