use ptilt_core::coinvariant::{base_change_report, Coinvariants, Poly};
use ptilt_core::ring::{LocalIntegers, PrimeField, Rationals, Ring};
use ptilt_core::rootdata::{RootDatum, WeylGroup};

fn group(name: &str) -> WeylGroup {
    WeylGroup::new(RootDatum::parse(name).unwrap()).unwrap()
}

fn check_poincare<R: Ring>(g: &WeylGroup, ring: R) {
    let c = Coinvariants::new(g, ring).unwrap();
    assert_eq!(c.graded_rank(), g.poincare_polynomial());
    assert_eq!(c.total_rank(), g.size());
}

#[test]
fn graded_rank_is_the_poincare_polynomial() {
    for name in ["A1", "A2", "A3", "B2", "G2", "GL3"] {
        check_poincare(&group(name), Rationals);
    }
    for (name, l) in [("A2", 5), ("B2", 3), ("G2", 5), ("GL3", 2), ("GL3", 3)] {
        check_poincare(&group(name), LocalIntegers::new(l).unwrap());
        check_poincare(&group(name), PrimeField::new(l).unwrap());
    }
}

#[test]
fn fundamental_degrees() {
    // GL2 has a degree-one invariant because its lattice is larger than the root lattice
    for (name, degrees) in [("A2", vec![2, 3]), ("B2", vec![2, 4]), ("G2", vec![2, 6]), ("GL2", vec![1, 2])] {
        let c = Coinvariants::new(&group(name), Rationals).unwrap();
        let mut got: Vec<usize> = c.fundamental_invariants().iter().map(|f| f.deg).collect();
        got.sort();
        assert_eq!(got, degrees, "{name}");
    }
}

#[test]
fn demazure_of_a_simple_coroot_is_two() {
    let g = group("B2");
    let c = Coinvariants::new(&g, Rationals).unwrap();
    let r = *c.ring();
    for s in 0..2 {
        let a = c.linear(&g.datum().simple_coroots[s]);
        let d = c.demazure(s, &a).unwrap();
        assert_eq!(d, Poly { deg: 0, coeffs: vec![r.from_i64(2)] });
        // invariants are killed
        for f in c.fundamental_invariants() {
            assert!(c.demazure(s, f).unwrap().coeffs.iter().all(|x| *x == r.zero()));
        }
    }
}

#[test]
fn base_change_is_faithful_at_good_primes() {
    for (name, l) in [("A2", 5), ("B2", 3), ("G2", 5), ("GL3", 2)] {
        let g = group(name);
        let local = Coinvariants::new(&g, LocalIntegers::new(l).unwrap()).unwrap();
        let field = Coinvariants::new(&g, PrimeField::new(l).unwrap()).unwrap();
        base_change_report(&local, &field).unwrap_or_else(|e| panic!("{name} at {l}: {e}"));
    }
}
