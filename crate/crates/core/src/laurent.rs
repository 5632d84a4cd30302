//! Laurent polynomials in `v` with arbitrary-precision integer coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// A Laurent polynomial `Σ c_k v^k`. Zero coefficients are never stored, so
/// structural equality is mathematical equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i32, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        LaurentPoly::monomial(1, 0)
    }

    /// `c * v^e`
    pub fn monomial(c: impl Into<BigInt>, e: i32) -> Self {
        let mut p = LaurentPoly::zero();
        p.add_term(e, c.into());
        p
    }

    /// The indeterminate `v`.
    pub fn v() -> Self {
        LaurentPoly::monomial(1, 1)
    }

    pub fn from_coeffs(low: i32, coeffs: &[i64]) -> Self {
        let mut p = LaurentPoly::zero();
        for (k, c) in coeffs.iter().enumerate() {
            p.add_term(low + k as i32, BigInt::from(*c));
        }
        p
    }

    pub fn add_term(&mut self, e: i32, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(e).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, e: i32) -> BigInt {
        self.coeffs.get(&e).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &BigInt)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn min_degree(&self) -> Option<i32> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i32> {
        self.coeffs.keys().next_back().copied()
    }

    /// The involution `v ↦ v^{-1}`.
    pub fn bar(&self) -> Self {
        LaurentPoly { coeffs: self.coeffs.iter().map(|(e, c)| (-e, c.clone())).collect() }
    }

    /// Multiplication by `v^k`.
    pub fn shift(&self, k: i32) -> Self {
        LaurentPoly { coeffs: self.coeffs.iter().map(|(e, c)| (e + k, c.clone())).collect() }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly { coeffs: self.coeffs.iter().map(|(e, x)| (*e, x * c)).collect() }
    }

    /// Value at `v = 1`.
    pub fn eval_at_one(&self) -> BigInt {
        self.coeffs.values().sum()
    }

    pub fn eval_at_one_i64(&self) -> i64 {
        self.eval_at_one().to_i64().expect("value fits in i64")
    }

    pub fn is_bar_invariant(&self) -> bool {
        *self == self.bar()
    }

    pub fn has_nonnegative_coeffs(&self) -> bool {
        self.coeffs.values().all(|c| !c.is_negative())
    }

    /// Dense coefficient list from the lowest to the highest exponent, with
    /// the lowest exponent. The zero polynomial gives `(0, [])`.
    pub fn to_dense(&self) -> (i32, Vec<BigInt>) {
        match (self.min_degree(), self.max_degree()) {
            (Some(lo), Some(hi)) => (lo, (lo..=hi).map(|e| self.coeff(e)).collect()),
            _ => (0, Vec::new()),
        }
    }

    /// Dense coefficients as machine integers, for serialization.
    pub fn to_dense_i64(&self) -> (i32, Vec<i64>) {
        let (lo, c) = self.to_dense();
        (lo, c.iter().map(|x| x.to_i64().expect("coefficient fits in i64")).collect())
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, o: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &o.coeffs {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, o: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &o.coeffs {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, o: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in &self.coeffs {
            for (e2, c2) in &o.coeffs {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { coeffs: self.coeffs.iter().map(|(e, c)| (*e, -c)).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, o: LaurentPoly) -> LaurentPoly {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl From<i64> for LaurentPoly {
    fn from(c: i64) -> Self {
        LaurentPoly::monomial(c, 0)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.coeffs.iter().rev() {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = !a.is_one() || *e == 0;
            if show_coeff {
                write!(f, "{a}")?;
            }
            match *e {
                0 => {}
                1 => write!(f, "v")?,
                _ => write!(f, "v^{e}")?,
            }
        }
        Ok(())
    }
}

/// Serialized form: lowest exponent plus dense coefficient list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LaurentRepr {
    pub low: i32,
    pub coeffs: Vec<i64>,
}

impl From<&LaurentPoly> for LaurentRepr {
    fn from(p: &LaurentPoly) -> Self {
        let (low, coeffs) = p.to_dense_i64();
        LaurentRepr { low, coeffs }
    }
}

impl From<&LaurentRepr> for LaurentPoly {
    fn from(r: &LaurentRepr) -> Self {
        LaurentPoly::from_coeffs(r.low, &r.coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v() -> LaurentPoly {
        LaurentPoly::v()
    }

    #[test]
    fn square_of_quantum_two() {
        let p = &v() + &v().bar();
        let sq = &p * &p;
        assert_eq!(sq, LaurentPoly::from_coeffs(-2, &[1, 0, 2, 0, 1]));
        assert_eq!(sq.to_string(), "v^2 + 2 + v^-2");
    }

    #[test]
    fn bar_of_example() {
        let p = &LaurentPoly::monomial(1, 3) - &LaurentPoly::monomial(2, 1);
        assert_eq!(p.bar(), &LaurentPoly::monomial(1, -3) - &LaurentPoly::monomial(2, -1));
    }

    #[test]
    fn add_zero_and_eval() {
        let p = &v() + &v().bar();
        assert_eq!(&p + &LaurentPoly::zero(), p);
        assert_eq!(p.eval_at_one_i64(), 2);
        assert_eq!(LaurentPoly::zero().eval_at_one_i64(), 0);
    }

    fn arb_poly() -> impl Strategy<Value = LaurentPoly> {
        (-4i32..4, prop::collection::vec(-5i64..5, 0..6)).prop_map(|(lo, c)| LaurentPoly::from_coeffs(lo, &c))
    }

    proptest! {
        #[test]
        fn bar_is_a_ring_involution(a in arb_poly(), b in arb_poly()) {
            prop_assert_eq!(a.bar().bar(), a.clone());
            prop_assert_eq!((&a * &b).bar(), &a.bar() * &b.bar());
            prop_assert_eq!((&a + &b).bar(), &a.bar() + &b.bar());
        }

        #[test]
        fn repr_roundtrip(a in arb_poly()) {
            let r = LaurentRepr::from(&a);
            prop_assert_eq!(LaurentPoly::from(&r), a);
        }
    }
}
