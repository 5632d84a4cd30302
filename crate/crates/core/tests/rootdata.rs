use proptest::prelude::*;
use ptilt_core::rootdata::{RootDatum, WeylGroup};
use ptilt_core::Error;

fn group(name: &str) -> WeylGroup {
    WeylGroup::new(RootDatum::parse(name).unwrap()).unwrap()
}

#[test]
fn group_orders_and_longest_lengths() {
    for (name, order, roots) in [
        ("A1", 2, 1),
        ("A2", 6, 3),
        ("A3", 24, 6),
        ("B2", 8, 4),
        ("C3", 48, 9),
        ("G2", 12, 6),
        ("GL3", 6, 3),
    ] {
        let g = group(name);
        assert_eq!(g.size(), order, "{name}");
        assert_eq!(g.length(g.longest()), roots, "{name}");
        assert_eq!(g.datum().num_positive_roots(), roots, "{name}");
        assert_eq!(g.datum().preset.to_string(), name);
    }
}

#[test]
fn bad_and_torsion_primes_are_rejected() {
    assert!(matches!(group("G2").datum().check_prime(3), Err(Error::BadPrime { .. })));
    assert!(matches!(group("B2").datum().check_prime(2), Err(Error::BadPrime { .. })));
    assert!(matches!(group("A2").datum().check_prime(3), Err(Error::TorsionPrime { .. })));
    assert!(matches!(group("A2").datum().check_prime(4), Err(Error::NotPrime(4))));
    assert!(group("GL3").datum().check_prime(3).is_ok());
    assert!(group("B2").datum().check_prime(3).is_ok());
    assert!(RootDatum::parse("D3").is_err());
    assert!(RootDatum::parse("").is_err());
}

#[test]
fn size_cap_is_enforced() {
    let err = WeylGroup::with_cap(RootDatum::parse("A3").unwrap(), 10).unwrap_err();
    assert!(matches!(err, Error::WeylCapExceeded { .. }));
}

#[test]
fn words_round_trip_and_bruhat_order_is_graded() {
    let g = group("B3");
    for w in g.elements() {
        assert_eq!(g.parse_word(&g.format(w)).unwrap(), w);
        assert_eq!(g.from_word(g.word(w)).unwrap(), w);
        for x in g.elements() {
            if g.bruhat_leq(x, w) {
                assert!(g.length(x) <= g.length(w));
                assert!(g.bruhat_leq_lifting(x, w));
            }
        }
    }
    assert_eq!(g.format(g.identity()), "e");
}

proptest! {
    #[test]
    fn group_laws_hold_in_g2(a in 0usize..12, b in 0usize..12, c in 0usize..12) {
        let g = group("G2");
        let (a, b, c) = (a as _, b as _, c as _);
        prop_assert_eq!(g.multiply(g.multiply(a, b), c), g.multiply(a, g.multiply(b, c)));
        prop_assert_eq!(g.multiply(a, g.inverse(a)), g.identity());
        prop_assert_eq!(g.length(g.inverse(a)), g.length(a));
        prop_assert_eq!(g.length(g.multiply(a, g.longest())), 6 - g.length(a));
    }
}
