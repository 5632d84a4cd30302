//! The Hecke algebra of a Weyl group and its Kazhdan–Lusztig basis.
//!
//! Normalization: `H_s² = (v^{-1} - v) H_s + 1` and `b_s = H_s + v`. With
//! these conventions `b_w = Σ_x h_{x,w} H_x` with `h_{w,w} = 1` and
//! `h_{x,w} ∈ vZ[v]` for `x < w`. The classical polynomials are recovered by
//! `h_{x,w}(v) = v^{ℓ(w)-ℓ(x)} P_{x,w}(v^{-2})`, so `q = v^{-2}`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::rootdata::{WElem, WeylGroup};

/// An element `Σ_x c_x H_x`, stored densely over the group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeckeElement {
    coeffs: Vec<LaurentPoly>,
}

impl HeckeElement {
    pub fn zero(w: &WeylGroup) -> Self {
        HeckeElement { coeffs: vec![LaurentPoly::zero(); w.size()] }
    }

    /// The standard basis element `H_x`.
    pub fn standard(w: &WeylGroup, x: WElem) -> Self {
        let mut e = HeckeElement::zero(w);
        e.coeffs[x] = LaurentPoly::one();
        e
    }

    pub fn coeff(&self, x: WElem) -> &LaurentPoly {
        &self.coeffs[x]
    }

    pub fn set(&mut self, x: WElem, p: LaurentPoly) {
        self.coeffs[x] = p;
    }

    pub fn support(&self) -> impl Iterator<Item = (WElem, &LaurentPoly)> {
        self.coeffs.iter().enumerate().filter(|(_, p)| !p.is_zero())
    }

    pub fn add(&self, o: &Self) -> Self {
        HeckeElement { coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        HeckeElement { coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, p: &LaurentPoly) -> Self {
        HeckeElement { coeffs: self.coeffs.iter().map(|a| a * p).collect() }
    }
}

/// `H_s · h`
pub fn left_mul_hs(w: &WeylGroup, s: usize, h: &HeckeElement) -> HeckeElement {
    let mut out = HeckeElement::zero(w);
    let quad = &LaurentPoly::v().bar() - &LaurentPoly::v();
    for (x, c) in h.support() {
        let sx = w.lmul(s, x);
        out.coeffs[sx] = &out.coeffs[sx] + c;
        if w.length(sx) < w.length(x) {
            out.coeffs[x] = &out.coeffs[x] + &(c * &quad);
        }
    }
    out
}

/// `H_s^{-1} · h`, using `H_s^{-1} = H_s + (v - v^{-1})`.
pub fn left_mul_hs_inv(w: &WeylGroup, s: usize, h: &HeckeElement) -> HeckeElement {
    let d = &LaurentPoly::v() - &LaurentPoly::v().bar();
    left_mul_hs(w, s, h).add(&h.scale(&d))
}

/// `b_s · h`, computed coefficientwise.
pub fn left_mul_bs(w: &WeylGroup, s: usize, h: &HeckeElement) -> HeckeElement {
    let mut out = HeckeElement::zero(w);
    let v = LaurentPoly::v();
    let vi = v.bar();
    for (x, c) in h.support() {
        let sx = w.lmul(s, x);
        out.coeffs[sx] = &out.coeffs[sx] + c;
        let f = if w.length(sx) > w.length(x) { &v } else { &vi };
        out.coeffs[x] = &out.coeffs[x] + &(c * f);
    }
    out
}

pub fn multiply(w: &WeylGroup, a: &HeckeElement, b: &HeckeElement) -> HeckeElement {
    let mut out = HeckeElement::zero(w);
    for (x, c) in a.support() {
        let mut t = b.clone();
        for &s in w.word(x).iter().rev() {
            t = left_mul_hs(w, s as usize, &t);
        }
        out = out.add(&t.scale(c));
    }
    out
}

/// Images `bar(H_x) = H_{x^{-1}}^{-1}` of all standard basis elements.
pub fn bar_standard_table(w: &WeylGroup) -> Vec<HeckeElement> {
    let mut table: Vec<HeckeElement> = Vec::with_capacity(w.size());
    table.push(HeckeElement::standard(w, 0));
    for x in 1..w.size() {
        // x = s·x' with s the first letter of its word.
        let s = w.word(x)[0] as usize;
        let xp = w.lmul(s, x);
        let t = left_mul_hs_inv(w, s, &table[xp]);
        table.push(t);
    }
    table
}

/// Semilinear bar involution.
pub fn bar(w: &WeylGroup, table: &[HeckeElement], h: &HeckeElement) -> HeckeElement {
    let mut out = HeckeElement::zero(w);
    for (x, c) in h.support() {
        out = out.add(&table[x].scale(&c.bar()));
    }
    out
}

/// Kazhdan–Lusztig basis, stored as `h[w][x] = h_{x,w}`.
#[derive(Clone, Debug)]
pub struct KlTable {
    h: Vec<Vec<LaurentPoly>>,
    lengths: Vec<usize>,
}

impl KlTable {
    /// Builds `b_w` for all `w` by the recursion
    /// `b_w = b_s b_{sw} - Σ_{y < sw, sy < y} μ(y, sw) b_y`,
    /// always taking `s` to be the first left descent of `w`.
    pub fn compute(w: &WeylGroup) -> Result<KlTable> {
        let mut basis: Vec<HeckeElement> = Vec::with_capacity(w.size());
        basis.push(HeckeElement::standard(w, 0));
        for x in 1..w.size() {
            let s = (0..w.num_simple()).find(|&i| w.is_left_descent(x, i)).unwrap();
            let sx = w.lmul(s, x);
            let mut b = left_mul_bs(w, s, &basis[sx]);
            for y in 0..sx {
                if !w.is_left_descent(y, s) {
                    continue;
                }
                let mu = basis[sx].coeff(y).coeff(1);
                if !mu.is_zero() {
                    b = b.sub(&basis[y].scale(&LaurentPoly::monomial(mu, 0)));
                }
            }
            basis.push(b);
        }
        let table = KlTable {
            h: basis.into_iter().map(|b| b.coeffs).collect(),
            lengths: w.elements().map(|x| w.length(x)).collect(),
        };
        table.check_shape(w)?;
        Ok(table)
    }

    fn check_shape(&self, w: &WeylGroup) -> Result<()> {
        for y in w.elements() {
            for x in w.elements() {
                let p = &self.h[y][x];
                let ok = if x == y {
                    *p == LaurentPoly::one()
                } else if w.bruhat_leq(x, y) {
                    p.min_degree().is_some_and(|d| d >= 1)
                        && p.max_degree().is_some_and(|d| d <= (w.length(y) - w.length(x)) as i32)
                } else {
                    p.is_zero()
                };
                if !ok {
                    return Err(Error::Invariant(format!(
                        "h_{{{},{}}} = {p} violates the degree bounds",
                        w.format(x),
                        w.format(y)
                    )));
                }
            }
        }
        Ok(())
    }

    /// `h_{x,w}`
    pub fn h(&self, x: WElem, w: WElem) -> &LaurentPoly {
        &self.h[w][x]
    }

    pub fn basis_element(&self, w: WElem) -> HeckeElement {
        HeckeElement { coeffs: self.h[w].clone() }
    }

    /// `P_{x,w}` as a polynomial in `q` (exponents are powers of `q`).
    pub fn p(&self, x: WElem, w: WElem) -> LaurentPoly {
        let d = self.lengths[w] as i32 - self.lengths[x] as i32;
        let mut out = LaurentPoly::zero();
        for (e, c) in self.h[w][x].terms() {
            debug_assert!((d - e) % 2 == 0);
            out.add_term((d - e) / 2, c.clone());
        }
        out
    }

    /// Checks `Σ_z (-1)^{ℓ(z)-ℓ(x)} P_{x,z} P_{w_0 y, w_0 z} = δ_{x,y}` for
    /// all `x ≤ y`. Returns the first failing pair, if any.
    pub fn inversion_check(&self, w: &WeylGroup) -> std::result::Result<(), (WElem, WElem)> {
        let w0 = w.longest();
        let p: Vec<Vec<LaurentPoly>> =
            w.elements().map(|z| w.elements().map(|x| self.p(x, z)).collect()).collect();
        for x in w.elements() {
            for y in w.elements() {
                if !w.bruhat_leq(x, y) {
                    continue;
                }
                let w0y = w.multiply(w0, y);
                let mut sum = LaurentPoly::zero();
                for z in w.elements() {
                    if !(w.bruhat_leq(x, z) && w.bruhat_leq(z, y)) {
                        continue;
                    }
                    let term = &p[z][x] * &p[w.multiply(w0, z)][w0y];
                    let sign = if (w.length(z) + w.length(x)).is_multiple_of(2) { BigInt::one() } else { -BigInt::one() };
                    sum = &sum + &term.scale(&sign);
                }
                let expect = if x == y { LaurentPoly::one() } else { LaurentPoly::zero() };
                if sum != expect {
                    return Err((x, y));
                }
            }
        }
        Ok(())
    }

    /// Checks that every `b_w` is fixed by the bar involution.
    pub fn bar_invariance_check(&self, w: &WeylGroup) -> std::result::Result<(), WElem> {
        let table = bar_standard_table(w);
        for y in w.elements() {
            let b = self.basis_element(y);
            if bar(w, &table, &b) != b {
                return Err(y);
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::RootDatum;

    fn group(s: &str) -> WeylGroup {
        WeylGroup::new(RootDatum::parse(s).unwrap()).unwrap()
    }

    #[test]
    fn quadratic_relation() {
        let w = group("A1");
        let s = w.simple(0);
        let hs = HeckeElement::standard(&w, s);
        let sq = multiply(&w, &hs, &hs);
        assert_eq!(*sq.coeff(0), LaurentPoly::one());
        assert_eq!(*sq.coeff(s), &LaurentPoly::v().bar() - &LaurentPoly::v());
    }

    #[test]
    fn length_additive_products() {
        let w = group("A2");
        let s1 = w.simple(0);
        let s2 = w.simple(1);
        let h12 = multiply(&w, &HeckeElement::standard(&w, s1), &HeckeElement::standard(&w, s2));
        assert_eq!(h12, HeckeElement::standard(&w, w.parse_word("12").unwrap()));
        let h121 = multiply(&w, &h12, &HeckeElement::standard(&w, s1));
        assert_eq!(h121, HeckeElement::standard(&w, w.longest()));
    }

    #[test]
    fn associativity_in_b2() {
        let w = group("B2");
        let a = HeckeElement::standard(&w, w.parse_word("12").unwrap());
        let b = HeckeElement::standard(&w, w.parse_word("21").unwrap()).add(&HeckeElement::standard(&w, 1));
        let c = HeckeElement::standard(&w, w.parse_word("2").unwrap());
        let left = multiply(&w, &multiply(&w, &a, &b), &c);
        let right = multiply(&w, &a, &multiply(&w, &b, &c));
        assert_eq!(left, right);
    }

    #[test]
    fn type_a2_polynomials_are_one() {
        let w = group("A2");
        let kl = KlTable::compute(&w).unwrap();
        let mut pairs = 0;
        for y in w.elements() {
            for x in w.elements() {
                if w.bruhat_leq(x, y) {
                    pairs += 1;
                    assert_eq!(kl.p(x, y), LaurentPoly::one());
                }
            }
        }
        assert_eq!(pairs, 19);
    }

    #[test]
    fn smallest_nontrivial_polynomial_in_a3() {
        let w = group("A3");
        let kl = KlTable::compute(&w).unwrap();
        let x = w.parse_word("2").unwrap();
        let y = w.parse_word("2132").unwrap();
        assert_eq!(kl.p(x, y), LaurentPoly::from_coeffs(0, &[1, 1]));
        // The identity element below the same element gives the same polynomial.
        assert_eq!(kl.p(0, y), LaurentPoly::from_coeffs(0, &[1, 1]));
    }

    #[test]
    fn inversion_and_bar_invariance() {
        for p in ["A1", "A2", "A3", "B2", "G2", "GL3"] {
            let w = group(p);
            let kl = KlTable::compute(&w).unwrap();
            assert_eq!(kl.inversion_check(&w), Ok(()), "{p}");
            assert_eq!(kl.bar_invariance_check(&w), Ok(()), "{p}");
            for y in w.elements() {
                for x in w.elements() {
                    assert!(kl.p(x, y).has_nonnegative_coeffs());
                }
            }
        }
    }
}
