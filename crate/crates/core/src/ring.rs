//! Coefficient rings.
//!
//! Three rings are used throughout: the rationals, the integers localized at
//! a prime `l` (a discrete valuation ring whose elements are rationals with
//! `l`-coprime denominator), and the prime field `F_l`. All arithmetic is
//! exact. Every ring is a value implementing [`Ring`]; elements are plain
//! data and all operations go through the ring object.

use std::fmt;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact rational number with a machine-word fast path.
///
/// The representation is canonical: a value is stored as `Small` exactly
/// when numerator and denominator both fit comfortably in an `i64`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Q {
    Small(Ratio<i64>),
    Big(BigRational),
}

fn fits(n: &BigInt) -> Option<i64> {
    let v = n.to_i64()?;
    (v != i64::MIN).then_some(v)
}

impl Q {
    pub fn from_i64(n: i64) -> Q {
        if n == i64::MIN {
            Q::Big(BigRational::from_integer(BigInt::from(n)))
        } else {
            Q::Small(Ratio::from_integer(n))
        }
    }

    pub fn new(numer: BigInt, denom: BigInt) -> Q {
        Q::from_big(BigRational::new(numer, denom))
    }

    fn from_big(b: BigRational) -> Q {
        match (fits(b.numer()), fits(b.denom())) {
            (Some(n), Some(d)) => Q::Small(Ratio::new_raw(n, d)),
            _ => Q::Big(b),
        }
    }

    fn from_small(r: Ratio<i64>) -> Q {
        if *r.numer() == i64::MIN || *r.denom() == i64::MIN {
            Q::Big(BigRational::new_raw(BigInt::from(*r.numer()), BigInt::from(*r.denom())))
        } else {
            Q::Small(r)
        }
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Q::Small(r) => BigRational::new_raw(BigInt::from(*r.numer()), BigInt::from(*r.denom())),
            Q::Big(b) => b.clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match self {
            Q::Small(r) => BigInt::from(*r.numer()),
            Q::Big(b) => b.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match self {
            Q::Small(r) => BigInt::from(*r.denom()),
            Q::Big(b) => b.denom().clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Q::Small(r) => r.is_zero(),
            Q::Big(b) => b.is_zero(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match self {
            Q::Small(r) => *r.denom() == 1,
            Q::Big(b) => b.is_integer(),
        }
    }

    pub fn add(&self, o: &Q) -> Q {
        if let (Q::Small(a), Q::Small(b)) = (self, o) {
            if let Some(c) = a.checked_add(b) {
                return Q::from_small(c);
            }
        }
        Q::from_big(self.to_big() + o.to_big())
    }

    pub fn sub(&self, o: &Q) -> Q {
        if let (Q::Small(a), Q::Small(b)) = (self, o) {
            if let Some(c) = a.checked_sub(b) {
                return Q::from_small(c);
            }
        }
        Q::from_big(self.to_big() - o.to_big())
    }

    pub fn mul(&self, o: &Q) -> Q {
        if let (Q::Small(a), Q::Small(b)) = (self, o) {
            if a.is_zero() || b.is_zero() {
                return Q::from_i64(0);
            }
            if let Some(c) = a.checked_mul(b) {
                return Q::from_small(c);
            }
        }
        Q::from_big(self.to_big() * o.to_big())
    }

    /// Quotient; `None` when dividing by zero.
    pub fn div(&self, o: &Q) -> Option<Q> {
        if o.is_zero() {
            return None;
        }
        if let (Q::Small(a), Q::Small(b)) = (self, o) {
            if let Some(c) = a.checked_div(b) {
                return Some(Q::from_small(c));
            }
        }
        Some(Q::from_big(self.to_big() / o.to_big()))
    }

    pub fn neg(&self) -> Q {
        match self {
            Q::Small(r) => Q::Small(-r),
            Q::Big(b) => Q::from_big(-b),
        }
    }

    /// `l`-adic valuation; `None` for zero.
    pub fn valuation(&self, l: u64) -> Option<i32> {
        if self.is_zero() {
            return None;
        }
        match self {
            Q::Small(r) => {
                let l = l as i64;
                Some(small_val(*r.numer(), l) - small_val(*r.denom(), l))
            }
            Q::Big(b) => {
                let l = BigInt::from(l);
                Some(big_val(b.numer(), &l) - big_val(b.denom(), &l))
            }
        }
    }

    /// Multiplies by `l^k` (`k` may be negative).
    pub fn scale_pow(&self, l: u64, k: i32) -> Q {
        if k == 0 || self.is_zero() {
            return self.clone();
        }
        let p = Q::from_big(BigRational::from_integer(num_traits::pow(BigInt::from(l), k.unsigned_abs() as usize)));
        if k > 0 {
            self.mul(&p)
        } else {
            self.div(&p).expect("nonzero power")
        }
    }

    /// Reduction modulo `l`; `None` if the denominator is divisible by `l`.
    pub fn reduce_mod(&self, l: u64) -> Option<u64> {
        match self {
            Q::Small(r) => {
                let l = l as i64;
                let n = r.numer().rem_euclid(l) as u64;
                let d = r.denom().rem_euclid(l) as u64;
                let dinv = inv_mod(d, l as u64)?;
                Some(mul_mod(n, dinv, l as u64))
            }
            Q::Big(b) => {
                let lb = BigInt::from(l);
                let n = b.numer().mod_floor(&lb).to_u64().unwrap();
                let d = b.denom().mod_floor(&lb).to_u64().unwrap();
                let dinv = inv_mod(d, l)?;
                Some(mul_mod(n, dinv, l))
            }
        }
    }

    pub fn parse(s: &str) -> Result<Q> {
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n, d),
            None => (s, "1"),
        };
        let n: BigInt = n.trim().parse().map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
        let d: BigInt = d.trim().parse().map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        Ok(Q::new(n, d))
    }
}

impl fmt::Display for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Q::Small(r) if *r.denom() == 1 => write!(f, "{}", r.numer()),
            Q::Small(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Q::Big(b) if b.is_integer() => write!(f, "{}", b.numer()),
            Q::Big(b) => write!(f, "{}/{}", b.numer(), b.denom()),
        }
    }
}

fn small_val(mut n: i64, l: i64) -> i32 {
    let mut v = 0;
    while n != 0 && n % l == 0 {
        n /= l;
        v += 1;
    }
    v
}

fn big_val(n: &BigInt, l: &BigInt) -> i32 {
    let mut n = n.abs();
    let mut v = 0;
    while !n.is_zero() {
        let (q, r) = n.div_rem(l);
        if !r.is_zero() {
            break;
        }
        n = q;
        v += 1;
    }
    v
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn inv_mod(a: u64, p: u64) -> Option<u64> {
    let e = (a as i128).extended_gcd(&(p as i128));
    (e.gcd == 1).then(|| e.x.rem_euclid(p as i128) as u64)
}

/// Which of the three coefficient rings a computation runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CoefRing {
    /// The rationals (characteristic-zero field).
    Rationals,
    /// The integers localized at the prime `l`.
    LocalIntegers(u64),
    /// The prime field with `l` elements.
    PrimeField(u64),
}

impl CoefRing {
    pub fn prime(self) -> Option<u64> {
        match self {
            CoefRing::Rationals => None,
            CoefRing::LocalIntegers(l) | CoefRing::PrimeField(l) => Some(l),
        }
    }

    /// Short tag used in file names and JSON: `K`, `O3`, `F3`.
    pub fn tag(self) -> String {
        match self {
            CoefRing::Rationals => "K".to_string(),
            CoefRing::LocalIntegers(l) => format!("O{l}"),
            CoefRing::PrimeField(l) => format!("F{l}"),
        }
    }
}

impl fmt::Display for CoefRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefRing::Rationals => write!(f, "Q"),
            CoefRing::LocalIntegers(l) => write!(f, "Z_({l})"),
            CoefRing::PrimeField(l) => write!(f, "F_{l}"),
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// A commutative coefficient ring with a (possibly trivial) discrete
/// valuation.
///
/// Fields have trivial valuation: every nonzero element has valuation 0.
/// For the local ring `Z_(l)` elements of the fraction field are admitted
/// as values of `Elem`; an element lies in the ring iff its valuation is
/// non-negative. Linear algebra runs in the fraction field and uses the
/// valuation to certify freeness and invertibility over the ring.
pub trait Ring: Clone + fmt::Debug + Send + Sync + 'static {
    type Elem: Clone + PartialEq + Eq + Hash + fmt::Debug + Send + Sync;
    /// The residue field.
    type Residue: Ring;

    fn kind(&self) -> CoefRing;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// Inverse in the fraction field.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    /// Valuation; `None` for zero.
    fn valuation(&self, a: &Self::Elem) -> Option<i32>;
    /// Multiplies by the `k`-th power of the uniformizer (no-op on fields).
    fn scale_uniformizer(&self, a: &Self::Elem, k: i32) -> Self::Elem;
    fn residue_ring(&self) -> Self::Residue;
    /// Image in the residue field. The argument must be integral.
    fn residue(&self, a: &Self::Elem) -> <Self::Residue as Ring>::Elem;
    fn format(&self, a: &Self::Elem) -> String;
    fn parse(&self, s: &str) -> Result<Self::Elem>;

    fn is_field(&self) -> bool {
        !matches!(self.kind(), CoefRing::LocalIntegers(_))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn is_unit(&self, a: &Self::Elem) -> bool {
        self.valuation(a) == Some(0)
    }

    fn is_integral(&self, a: &Self::Elem) -> bool {
        self.valuation(a).is_none_or(|v| v >= 0)
    }

    /// `a / b` in the fraction field.
    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    fn add_assign(&self, a: &mut Self::Elem, b: &Self::Elem) {
        *a = self.add(a, b);
    }

    /// `a += b * c`
    fn add_mul_assign(&self, a: &mut Self::Elem, b: &Self::Elem, c: &Self::Elem) {
        if self.is_zero(b) || self.is_zero(c) {
            return;
        }
        *a = self.add(a, &self.mul(b, c));
    }
}

/// The rational numbers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Ring for Rationals {
    type Elem = Q;
    type Residue = Rationals;

    fn kind(&self) -> CoefRing {
        CoefRing::Rationals
    }
    fn zero(&self) -> Q {
        Q::from_i64(0)
    }
    fn one(&self) -> Q {
        Q::from_i64(1)
    }
    fn from_i64(&self, n: i64) -> Q {
        Q::from_i64(n)
    }
    fn add(&self, a: &Q, b: &Q) -> Q {
        a.add(b)
    }
    fn sub(&self, a: &Q, b: &Q) -> Q {
        a.sub(b)
    }
    fn mul(&self, a: &Q, b: &Q) -> Q {
        a.mul(b)
    }
    fn neg(&self, a: &Q) -> Q {
        a.neg()
    }
    fn is_zero(&self, a: &Q) -> bool {
        a.is_zero()
    }
    fn inv(&self, a: &Q) -> Option<Q> {
        Q::from_i64(1).div(a)
    }
    fn valuation(&self, a: &Q) -> Option<i32> {
        (!a.is_zero()).then_some(0)
    }
    fn scale_uniformizer(&self, a: &Q, _k: i32) -> Q {
        a.clone()
    }
    fn residue_ring(&self) -> Rationals {
        Rationals
    }
    fn residue(&self, a: &Q) -> Q {
        a.clone()
    }
    fn format(&self, a: &Q) -> String {
        a.to_string()
    }
    fn parse(&self, s: &str) -> Result<Q> {
        Q::parse(s)
    }
}

/// The integers localized at a prime `l`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LocalIntegers {
    l: u64,
}

impl LocalIntegers {
    pub fn new(l: u64) -> Result<Self> {
        if !is_prime(l) {
            return Err(Error::NotPrime(l));
        }
        Ok(LocalIntegers { l })
    }

    pub fn prime(&self) -> u64 {
        self.l
    }
}

impl Ring for LocalIntegers {
    type Elem = Q;
    type Residue = PrimeField;

    fn kind(&self) -> CoefRing {
        CoefRing::LocalIntegers(self.l)
    }
    fn zero(&self) -> Q {
        Q::from_i64(0)
    }
    fn one(&self) -> Q {
        Q::from_i64(1)
    }
    fn from_i64(&self, n: i64) -> Q {
        Q::from_i64(n)
    }
    fn add(&self, a: &Q, b: &Q) -> Q {
        a.add(b)
    }
    fn sub(&self, a: &Q, b: &Q) -> Q {
        a.sub(b)
    }
    fn mul(&self, a: &Q, b: &Q) -> Q {
        a.mul(b)
    }
    fn neg(&self, a: &Q) -> Q {
        a.neg()
    }
    fn is_zero(&self, a: &Q) -> bool {
        a.is_zero()
    }
    fn inv(&self, a: &Q) -> Option<Q> {
        Q::from_i64(1).div(a)
    }
    fn valuation(&self, a: &Q) -> Option<i32> {
        a.valuation(self.l)
    }
    fn scale_uniformizer(&self, a: &Q, k: i32) -> Q {
        a.scale_pow(self.l, k)
    }
    fn residue_ring(&self) -> PrimeField {
        PrimeField { p: self.l }
    }
    fn residue(&self, a: &Q) -> u64 {
        a.reduce_mod(self.l).expect("residue of a non-integral element")
    }
    fn format(&self, a: &Q) -> String {
        a.to_string()
    }
    fn parse(&self, s: &str) -> Result<Q> {
        let q = Q::parse(s)?;
        if !self.is_integral(&q) {
            return Err(Error::Parse(format!("{s} is not {}-integral", self.l)));
        }
        Ok(q)
    }
}

/// The prime field `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) || p >= 1 << 32 {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    /// All field elements in increasing order of representative.
    pub fn elements(&self) -> impl Iterator<Item = u64> {
        0..self.p
    }
}

impl Ring for PrimeField {
    type Elem = u64;
    type Residue = PrimeField;

    fn kind(&self) -> CoefRing {
        CoefRing::PrimeField(self.p)
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn from_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mul_mod(*a, *b, self.p)
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            None
        } else {
            inv_mod(*a, self.p)
        }
    }
    fn valuation(&self, a: &u64) -> Option<i32> {
        (*a != 0).then_some(0)
    }
    fn scale_uniformizer(&self, a: &u64, _k: i32) -> u64 {
        *a
    }
    fn residue_ring(&self) -> PrimeField {
        *self
    }
    fn residue(&self, a: &u64) -> u64 {
        *a
    }
    fn format(&self, a: &u64) -> String {
        a.to_string()
    }
    fn parse(&self, s: &str) -> Result<u64> {
        let v: i64 = s.trim().parse().map_err(|_| Error::Parse(format!("bad field element {s:?}")))?;
        Ok(self.from_i64(v))
    }
}

/// Natural ring maps out of the local ring: inclusion into the rationals
/// and reduction onto the residue field.
impl LocalIntegers {
    pub fn to_rationals(&self, a: &Q) -> Q {
        a.clone()
    }

    pub fn to_prime_field(&self, a: &Q) -> u64 {
        self.residue(a)
    }
}

/// Converts an integer-valued element to an `i64` if possible.
pub fn q_to_i64(q: &Q) -> Option<i64> {
    if !q.is_integer() {
        return None;
    }
    q.numer().to_i64()
}

impl One for Q {
    fn one() -> Self {
        Q::from_i64(1)
    }
}

impl std::ops::Mul for Q {
    type Output = Q;
    fn mul(self, rhs: Q) -> Q {
        Q::mul(&self, &rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_overflow_promotes_to_big() {
        let a = Q::from_i64(i64::MAX / 2 + 7);
        let b = a.mul(&a);
        assert!(matches!(b, Q::Big(_)));
        let c = b.div(&a).unwrap();
        assert_eq!(c, a);
        assert!(matches!(c, Q::Small(_)));
    }

    #[test]
    fn valuation_and_residue() {
        let r = LocalIntegers::new(3).unwrap();
        let x = Q::parse("18/5").unwrap();
        assert_eq!(r.valuation(&x), Some(2));
        assert_eq!(r.residue(&Q::parse("2/5").unwrap()), 1); // 5 = 2 mod 3, 2 * 2^{-1} = 1
        assert_eq!(r.valuation(&Q::parse("1/9").unwrap()), Some(-2));
        assert!(!r.is_integral(&Q::parse("1/9").unwrap()));
        assert_eq!(r.scale_uniformizer(&Q::from_i64(2), -1), Q::parse("2/3").unwrap());
    }

    #[test]
    fn prime_field_inverse() {
        let f = PrimeField::new(7).unwrap();
        for a in 1..7 {
            let ai = f.inv(&a).unwrap();
            assert_eq!(f.mul(&a, &ai), 1);
        }
        assert!(PrimeField::new(9).is_err());
    }

    #[test]
    fn format_roundtrip() {
        let q = Q::parse("-22/6").unwrap();
        assert_eq!(q.to_string(), "-11/3");
        assert_eq!(Q::parse(&q.to_string()).unwrap(), q);
    }

    proptest! {
        #[test]
        fn reduction_is_a_ring_map(a in -1000i64..1000, b in 1i64..50, c in -1000i64..1000, d in 1i64..50) {
            let r = LocalIntegers::new(5).unwrap();
            let f = r.residue_ring();
            prop_assume!(b % 5 != 0 && d % 5 != 0);
            let x = Q::new(a.into(), b.into());
            let y = Q::new(c.into(), d.into());
            prop_assert_eq!(r.residue(&r.mul(&x, &y)), f.mul(&r.residue(&x), &r.residue(&y)));
            prop_assert_eq!(r.residue(&r.add(&x, &y)), f.add(&r.residue(&x), &r.residue(&y)));
        }

        #[test]
        fn big_and_small_paths_agree(a in any::<i64>(), b in any::<i64>()) {
            let x = Q::from_i64(a);
            let y = Q::from_i64(b);
            let s = x.add(&y).to_big();
            prop_assert_eq!(s, x.to_big() + y.to_big());
            prop_assert_eq!(x.mul(&y).to_big(), x.to_big() * y.to_big());
        }
    }
}
