use ptilt_core::hecke::KlTable;
use ptilt_core::laurent::LaurentPoly;
use ptilt_core::ring::{LocalIntegers, PrimeField, Rationals, Ring};
use ptilt_core::rootdata::{RootDatum, WeylGroup};
use ptilt_core::soergel::{
    bs_module, char_zero_multiplicities, check_reduction, decompose, graded_hom_rank, local_endomorphisms, Context,
    GradedModule, Library, LibraryOptions, Summand,
};

fn group(s: &str) -> WeylGroup {
    WeylGroup::new(RootDatum::parse(s).unwrap()).unwrap()
}

fn lp(low: i32, c: &[i64]) -> LaurentPoly {
    LaurentPoly::from_coeffs(low, c)
}

#[test]
fn bott_samelson_ranks_in_a1() {
    let g = group("A1");
    let ctx = Context::new(&g, Rationals).unwrap();
    let unit = bs_module(&ctx, &[]);
    assert_eq!(unit.graded_rank(), LaurentPoly::one());
    let bs = bs_module(&ctx, &[0]);
    assert_eq!(bs.graded_rank(), lp(-1, &[1, 0, 1]));
    let bss = bs_module(&ctx, &[0, 0]);
    assert_eq!(bss.graded_rank(), lp(-2, &[1, 0, 2, 0, 1]));
    for m in [&unit, &bs, &bss] {
        m.validate(&ctx.coinv).unwrap();
    }
    assert_eq!(graded_hom_rank(&unit, &bs), LaurentPoly::v());
    assert_eq!(graded_hom_rank(&bs, &bs), lp(0, &[1, 0, 1]));
}

#[test]
fn bs_ss_splits_into_two_shifts() {
    let g = group("A1");
    let ctx = Context::new(&g, Rationals).unwrap();
    let bs = bs_module(&ctx, &[0]);
    let bss = bs_module(&ctx, &[0, 0]);
    let rec = decompose(&bss, &[(1, &bs)]).unwrap();
    assert_eq!(rec.remainder.rank(), 0);
    assert_eq!(
        rec.summands,
        vec![Summand { y: 1, shift: -1, multiplicity: 1 }, Summand { y: 1, shift: 1, multiplicity: 1 }]
    );
    rec.verify(&bss).unwrap();
    assert_eq!(rec.multiplicity(1), lp(-1, &[1, 0, 1]));
}

#[test]
fn longest_element_module_is_shifted_coinvariants() {
    for name in ["A2", "B2"] {
        let g = group(name);
        let lib = Library::build(&g, Rationals, LibraryOptions::default()).unwrap();
        let w0 = g.longest();
        let top = g.length(w0) as i32;
        let mut expect = LaurentPoly::zero();
        for x in g.elements() {
            expect.add_term(2 * g.length(x) as i32 - top, 1.into());
        }
        assert_eq!(lib.module(w0).graded_rank(), expect, "{name}");
        let reg = GradedModule::regular(&lib.context().coinv);
        assert_eq!(reg.graded_rank(), expect);
        assert_eq!(graded_hom_rank(&reg, lib.module(w0)).coeff(0), 1.into());
    }
}

#[test]
fn hom_ranks_match_kazhdan_lusztig_in_characteristic_zero() {
    for name in ["A1", "A2", "B2"] {
        let g = group(name);
        let kl = KlTable::compute(&g).unwrap();
        let lib = Library::build(&g, Rationals, LibraryOptions::default()).unwrap();
        for u in g.elements() {
            for w in g.elements() {
                let mut expect = LaurentPoly::zero();
                for x in g.elements() {
                    expect = &expect + &(kl.h(x, u) * kl.h(x, w));
                }
                assert_eq!(lib.hom_rank(u, w), expect, "{name}: Hom(D_{}, D_{})", g.format(u), g.format(w));
            }
        }
    }
}

#[test]
fn library_modules_are_local_and_serializable() {
    let g = group("A2");
    let lib = Library::build(&g, PrimeField::new(2).unwrap(), LibraryOptions::default()).unwrap();
    for w in g.elements() {
        let d = lib.module(w);
        assert!(local_endomorphisms(d, 10_000).unwrap());
        let repr = d.to_repr();
        let json = serde_json::to_string(&repr).unwrap();
        let back = GradedModule::from_repr(PrimeField::new(2).unwrap(), &serde_json::from_str(&json).unwrap()).unwrap();
        assert_eq!(&back, d);
    }
    let bss = bs_module(lib.context(), &[0, 0]);
    assert!(!local_endomorphisms(&bss, 10_000).unwrap());
}

#[test]
fn tiny_budget_is_reported() {
    let g = group("A2");
    let ctx = Context::new(&g, Rationals).unwrap();
    let m = bs_module(&ctx, &[0, 0]);
    assert!(matches!(local_endomorphisms(&m, 1), Err(ptilt_core::Error::BudgetExhausted(1))));
}

#[test]
fn local_library_reduces_and_generizes_in_b2_at_three() {
    let g = group("B2");
    let o = LocalIntegers::new(3).unwrap();
    let lo = Library::build(&g, o, LibraryOptions::default()).unwrap();
    let lf = Library::build(&g, o.residue_ring(), LibraryOptions::default()).unwrap();
    let lq = Library::build(&g, Rationals, LibraryOptions::default()).unwrap();
    check_reduction(&lo, &lf).unwrap();
    let e = char_zero_multiplicities(&lo, &lq).unwrap();
    for w in g.elements() {
        assert_eq!(e[w][w], LaurentPoly::one());
    }
}
