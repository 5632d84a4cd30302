use ptilt_core::charcalc::{decomposition_matrices, kl_signed_inverse, Analysis};
use ptilt_core::hecke::KlTable;
use ptilt_core::ring::{LocalIntegers, PrimeField, Rationals, Ring};
use ptilt_core::rootdata::{RootDatum, WeylGroup};
use ptilt_core::soergel::{char_zero_multiplicities, Library, LibraryOptions};

fn group(name: &str) -> WeylGroup {
    WeylGroup::new(RootDatum::parse(name).unwrap()).unwrap()
}

fn analyse<R: Ring>(g: &WeylGroup, ring: R, kl: &KlTable) -> Analysis {
    let lib = Library::build(g, ring, LibraryOptions::default()).unwrap();
    let a = Analysis::run(&lib, Some(kl)).unwrap();
    for c in &a.checks {
        assert!(c.pass, "{}: {}", c.name, c.detail);
    }
    a
}

#[test]
fn characteristic_zero_tables_match_kazhdan_lusztig() {
    for name in ["A1", "A2", "B2", "G2"] {
        let g = group(name);
        let kl = KlTable::compute(&g).unwrap();
        let a = analyse(&g, Rationals, &kl);
        assert!(a.checks.iter().any(|c| c.name == "kl_calibration"));
        for w in g.elements() {
            for x in g.elements() {
                assert_eq!(&a.stalks.h[x][w], kl.h(x, w), "{name}");
            }
        }
        assert_eq!(a.euler.inverse, kl_signed_inverse(&g, &kl), "{name}");
    }
}

#[test]
fn modular_tables_at_good_primes() {
    let g = group("B2");
    let kl = KlTable::compute(&g).unwrap();
    let zero = analyse(&g, Rationals, &kl);
    let local = analyse(&g, LocalIntegers::new(3).unwrap(), &kl);
    let field = analyse(&g, PrimeField::new(3).unwrap(), &kl);
    assert!(local.checks.iter().all(|c| c.name != "kl_calibration"));
    assert_eq!(local.stalks.h, field.stalks.h);
    assert_eq!(field.stalks.h, zero.stalks.h);
    assert_eq!(field.mult.comp, zero.mult.comp);
    for w in g.elements() {
        assert_eq!(field.mult.comp[w][w], 1);
        assert_eq!(field.mult.tilt[w][w], 1);
    }
}

#[test]
fn decomposition_matrices_are_unitriangular() {
    let g = group("A2");
    let local = Library::build(&g, LocalIntegers::new(5).unwrap(), LibraryOptions::default()).unwrap();
    let zero = Library::build(&g, Rationals, LibraryOptions::default()).unwrap();
    let mult = char_zero_multiplicities(&local, &zero).unwrap();
    let d = decomposition_matrices(&g, &mult).unwrap();
    let w0 = g.longest();
    for a in g.elements() {
        assert_eq!(d.e[a][a], 1);
        for b in g.elements() {
            if !g.bruhat_leq(a, b) {
                assert_eq!(d.e[a][b], 0);
            }
            assert_eq!(d.p[a][b], d.t[g.multiply(a, w0)][g.multiply(b, w0)]);
            assert_eq!(d.i[a][b], d.p[b][a]);
        }
    }
}
