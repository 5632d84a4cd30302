//! Based root data and their Weyl groups.
//!
//! A [`RootDatum`] is stored through its cocharacter lattice `Y`: simple
//! coroots are vectors in `Y`, simple roots are linear forms on `Y` (vectors
//! in the dual basis of `X`). Two families are supported. `GL_n` uses
//! `Y = Z^n` with the permutation action. Adjoint simple groups use the
//! coweight lattice, whose basis vector `ω_j^∨` pairs to `δ_ij` with `α_i`.
//! In both cases every simple root takes the value 1 on some basis vector,
//! which the coinvariant algebra needs.
//!
//! Orientation of non-simply-laced Cartan matrices: `cartan[i][j]` is
//! `⟨α_i, α_j^∨⟩`, and the short simple root is the last one for `B_n`, the
//! first one for `G_2`, and the last two for `F_4`. For `G_2` this gives
//! `[[2, -1], [-3, 2]]`.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::ring::is_prime;

/// Default bound on the size of a Weyl group the engine will enumerate.
pub const DEFAULT_WEYL_CAP: usize = 10_000;

/// Irreducible Cartan types available as adjoint presets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CartanType {
    A,
    B,
    C,
    D,
    F,
    G,
}

/// A supported group: `GL_n`, or the adjoint group of an irreducible type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Preset {
    Gl(usize),
    Adjoint(CartanType, usize),
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Preset> {
        let t: String = s.trim().chars().filter(|c| *c != '_').collect::<String>().to_ascii_uppercase();
        let bad = || Error::UnsupportedPreset(s.to_string());
        let (head, digits) = t.split_at(t.find(|c: char| c.is_ascii_digit()).ok_or_else(bad)?);
        let n: usize = digits.parse().map_err(|_| bad())?;
        let p = match head {
            "GL" if n >= 1 => Preset::Gl(n),
            "A" if n >= 1 => Preset::Adjoint(CartanType::A, n),
            "B" if n >= 2 => Preset::Adjoint(CartanType::B, n),
            "C" if n >= 2 => Preset::Adjoint(CartanType::C, n),
            "D" if n >= 4 => Preset::Adjoint(CartanType::D, n),
            "F" if n == 4 => Preset::Adjoint(CartanType::F, 4),
            "G" if n == 2 => Preset::Adjoint(CartanType::G, 2),
            _ => return Err(bad()),
        };
        Ok(p)
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Preset::Gl(n) => write!(f, "GL{n}"),
            Preset::Adjoint(t, n) => write!(f, "{t:?}{n}"),
        }
    }
}

/// A based root datum, described on the cocharacter lattice `Y`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootDatum {
    pub preset: Preset,
    /// Dimension of `Y`.
    pub rank: usize,
    /// Simple roots as linear forms on `Y`.
    pub simple_roots: Vec<Vec<i64>>,
    /// Simple coroots as vectors in `Y`.
    pub simple_coroots: Vec<Vec<i64>>,
    /// `cartan[i][j] = ⟨α_i, α_j^∨⟩`.
    pub cartan: Vec<Vec<i64>>,
}

fn cartan_matrix(t: CartanType, n: usize) -> Vec<Vec<i64>> {
    let mut c = vec![vec![0i64; n]; n];
    for (i, row) in c.iter_mut().enumerate() {
        row[i] = 2;
    }
    let chain = match t {
        CartanType::D => n - 1,
        _ => n,
    };
    for i in 0..chain.saturating_sub(1) {
        c[i][i + 1] = -1;
        c[i + 1][i] = -1;
    }
    match t {
        CartanType::A => {}
        CartanType::B => c[n - 2][n - 1] = -2,
        CartanType::C => c[n - 1][n - 2] = -2,
        CartanType::D => {
            c[n - 3][n - 1] = -1;
            c[n - 1][n - 3] = -1;
        }
        CartanType::F => c[1][2] = -2,
        CartanType::G => c[1][0] = -3,
    }
    c
}

pub fn pair(x: &[i64], y: &[i64]) -> i64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

impl RootDatum {
    pub fn from_preset(preset: Preset) -> RootDatum {
        match preset {
            Preset::Gl(n) => {
                let mut roots = Vec::new();
                for i in 0..n.saturating_sub(1) {
                    let mut a = vec![0i64; n];
                    a[i] = 1;
                    a[i + 1] = -1;
                    roots.push(a);
                }
                let coroots = roots.clone();
                let cartan = roots.iter().map(|a| coroots.iter().map(|c| pair(a, c)).collect()).collect();
                RootDatum { preset, rank: n, simple_roots: roots, simple_coroots: coroots, cartan }
            }
            Preset::Adjoint(t, n) => {
                let cartan = cartan_matrix(t, n);
                let roots = (0..n)
                    .map(|i| {
                        let mut a = vec![0i64; n];
                        a[i] = 1;
                        a
                    })
                    .collect();
                let coroots = (0..n).map(|j| (0..n).map(|i| cartan[i][j]).collect()).collect();
                RootDatum { preset, rank: n, simple_roots: roots, simple_coroots: coroots, cartan }
            }
        }
    }

    pub fn parse(s: &str) -> Result<RootDatum> {
        Ok(RootDatum::from_preset(s.parse()?))
    }

    pub fn num_simple(&self) -> usize {
        self.simple_roots.len()
    }

    /// Matrix of `s_i` on `Y` (row-major `rank x rank`): column `j` is the
    /// image of the basis vector `e_j`.
    pub fn reflection_matrix(&self, i: usize) -> Vec<i64> {
        let r = self.rank;
        let mut m = vec![0i64; r * r];
        for k in 0..r {
            for j in 0..r {
                m[k * r + j] = i64::from(k == j) - self.simple_coroots[i][k] * self.simple_roots[i][j];
            }
        }
        m
    }

    /// `s_i(y) = y - ⟨α_i, y⟩ α_i^∨`
    pub fn reflect(&self, i: usize, y: &[i64]) -> Vec<i64> {
        let c = pair(&self.simple_roots[i], y);
        y.iter().zip(&self.simple_coroots[i]).map(|(a, b)| a - c * b).collect()
    }

    /// The contragredient action on `X`: `s_i(x) = x - ⟨x, α_i^∨⟩ α_i`.
    pub fn reflect_weight(&self, i: usize, x: &[i64]) -> Vec<i64> {
        let c = pair(x, &self.simple_coroots[i]);
        x.iter().zip(&self.simple_roots[i]).map(|(a, b)| a - c * b).collect()
    }

    /// All roots, as the Weyl group orbit of the simple roots in `X`.
    pub fn roots(&self) -> Vec<Vec<i64>> {
        let mut seen: HashSet<Vec<i64>> = self.simple_roots.iter().cloned().collect();
        let mut queue: VecDeque<Vec<i64>> = self.simple_roots.iter().cloned().collect();
        while let Some(x) = queue.pop_front() {
            for i in 0..self.num_simple() {
                let y = self.reflect_weight(i, &x);
                if seen.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
        let mut v: Vec<_> = seen.into_iter().collect();
        v.sort();
        v
    }

    pub fn num_positive_roots(&self) -> usize {
        self.roots().len() / 2
    }

    /// Checks the structural invariants of a root datum.
    pub fn validate(&self) -> Result<()> {
        let n = self.num_simple();
        for i in 0..n {
            for j in 0..n {
                let p = pair(&self.simple_roots[i], &self.simple_coroots[j]);
                if p != self.cartan[i][j] {
                    return Err(Error::Invariant(format!("cartan[{i}][{j}] disagrees with the pairing")));
                }
                if (i == j && p != 2) || (i != j && p > 0) {
                    return Err(Error::Invariant(format!("cartan[{i}][{j}] = {p} is not a Cartan entry")));
                }
            }
        }
        Ok(())
    }

    /// Good primes: 2 is excluded outside type A, 3 for types F and G.
    pub fn is_good_prime(&self, l: u64) -> bool {
        match self.preset {
            Preset::Gl(_) | Preset::Adjoint(CartanType::A, _) => true,
            Preset::Adjoint(CartanType::B | CartanType::C | CartanType::D, _) => l != 2,
            Preset::Adjoint(CartanType::F | CartanType::G, _) => l != 2 && l != 3,
        }
    }

    /// Validates a prime for use as coefficient characteristic.
    ///
    /// Beyond goodness, the adjoint form of type `A_n` needs `l ∤ n+1`: the
    /// coroots then fail to span `Y ⊗ F_l` and the coinvariant algebra is too
    /// small. For instance, the reflection of adjoint `A_1` is trivial modulo
    /// 2.
    pub fn check_prime(&self, l: u64) -> Result<()> {
        if !is_prime(l) {
            return Err(Error::NotPrime(l));
        }
        if !self.is_good_prime(l) {
            return Err(Error::BadPrime { preset: self.preset.to_string(), prime: l });
        }
        if let Preset::Adjoint(CartanType::A, n) = self.preset {
            if (n as u64 + 1).is_multiple_of(l) {
                return Err(Error::TorsionPrime { preset: self.preset.to_string(), prime: l });
            }
        }
        Ok(())
    }

    /// `δ_s`: index of the first basis vector of `Y` on which `α_s` is 1.
    pub fn delta_index(&self, s: usize) -> usize {
        self.simple_roots[s].iter().position(|&x| x == 1).expect("presets always admit δ_s")
    }
}

/// A fixed-size bitset over group elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    pub fn new(n: usize) -> Self {
        BitSet { words: vec![0; n.div_ceil(64)] }
    }
    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }
    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| (0..64).filter(move |b| w >> b & 1 == 1).map(move |b| k * 64 + b))
    }
    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Elements of a Weyl group are indices into its sorted element list, so
/// comparing indices compares `(length, canonical word)`.
pub type WElem = usize;

/// The Weyl group of a root datum, fully enumerated.
#[derive(Clone, Debug)]
pub struct WeylGroup {
    datum: RootDatum,
    words: Vec<Vec<u8>>,
    matrices: Vec<Vec<i64>>,
    left: Vec<Vec<WElem>>,
    right: Vec<Vec<WElem>>,
    inverse: Vec<WElem>,
    below: Vec<BitSet>,
}

fn mat_mul(a: &[i64], b: &[i64], r: usize) -> Vec<i64> {
    let mut c = vec![0i64; r * r];
    for i in 0..r {
        for k in 0..r {
            let x = a[i * r + k];
            if x != 0 {
                for j in 0..r {
                    c[i * r + j] += x * b[k * r + j];
                }
            }
        }
    }
    c
}

impl WeylGroup {
    pub fn new(datum: RootDatum) -> Result<WeylGroup> {
        WeylGroup::with_cap(datum, DEFAULT_WEYL_CAP)
    }

    /// Enumerates `W` breadth-first by length. Each element receives its
    /// lexicographically least reduced word: processing the previous layer in
    /// lexicographic order of words and appending generators in index order
    /// reaches every element first along that word.
    pub fn with_cap(datum: RootDatum, cap: usize) -> Result<WeylGroup> {
        datum.validate()?;
        let r = datum.rank;
        let n = datum.num_simple();
        let gens: Vec<Vec<i64>> = (0..n).map(|i| datum.reflection_matrix(i)).collect();
        let mut id = vec![0i64; r * r];
        for i in 0..r {
            id[i * r + i] = 1;
        }
        let mut words: Vec<Vec<u8>> = vec![Vec::new()];
        let mut matrices = vec![id.clone()];
        let mut index: HashMap<Vec<i64>, WElem> = HashMap::from([(id, 0)]);
        let mut layer = vec![0usize];
        while !layer.is_empty() {
            let mut next = Vec::new();
            for &u in &layer {
                for (i, g) in gens.iter().enumerate() {
                    let m = mat_mul(&matrices[u], g, r);
                    if index.contains_key(&m) {
                        continue;
                    }
                    if words.len() >= cap {
                        return Err(Error::WeylCapExceeded { cap });
                    }
                    let mut w = words[u].clone();
                    w.push(i as u8);
                    index.insert(m.clone(), words.len());
                    next.push(words.len());
                    words.push(w);
                    matrices.push(m);
                }
            }
            layer = next;
        }
        // Insertion order is already (length, word) order; assert it anyway.
        debug_assert!(words.windows(2).all(|p| (p[0].len(), &p[0]) < (p[1].len(), &p[1])));
        let size = words.len();
        let lookup = |m: &Vec<i64>| *index.get(m).expect("closed under multiplication");
        let left: Vec<Vec<WElem>> =
            gens.iter().map(|g| (0..size).map(|x| lookup(&mat_mul(g, &matrices[x], r))).collect()).collect();
        let right: Vec<Vec<WElem>> =
            gens.iter().map(|g| (0..size).map(|x| lookup(&mat_mul(&matrices[x], g, r))).collect()).collect();
        let mut inverse = vec![0; size];
        for x in 0..size {
            let mut y = 0;
            for &c in words[x].iter().rev() {
                y = right[c as usize][y];
            }
            inverse[x] = y;
        }
        let mut below = Vec::with_capacity(size);
        let mut e = BitSet::new(size);
        e.insert(0);
        below.push(e);
        for w in 1..size {
            let s = *words[w].last().unwrap() as usize;
            let u = right[s][w];
            let mut set = below[u].clone();
            for x in below[u].iter() {
                set.insert(right[s][x]);
            }
            below.push(set);
        }
        Ok(WeylGroup { datum, words, matrices, left, right, inverse, below })
    }

    pub fn datum(&self) -> &RootDatum {
        &self.datum
    }

    pub fn size(&self) -> usize {
        self.words.len()
    }

    pub fn num_simple(&self) -> usize {
        self.datum.num_simple()
    }

    pub fn identity(&self) -> WElem {
        0
    }

    pub fn elements(&self) -> impl Iterator<Item = WElem> {
        0..self.size()
    }

    pub fn word(&self, w: WElem) -> &[u8] {
        &self.words[w]
    }

    pub fn length(&self, w: WElem) -> usize {
        self.words[w].len()
    }

    pub fn matrix(&self, w: WElem) -> &[i64] {
        &self.matrices[w]
    }

    /// The simple reflection `s_i` as an element.
    pub fn simple(&self, i: usize) -> WElem {
        self.right[i][0]
    }

    /// `s_i * x`
    pub fn lmul(&self, i: usize, x: WElem) -> WElem {
        self.left[i][x]
    }

    /// `x * s_i`
    pub fn rmul(&self, x: WElem, i: usize) -> WElem {
        self.right[i][x]
    }

    pub fn multiply(&self, x: WElem, y: WElem) -> WElem {
        self.words[y].iter().fold(x, |acc, &c| self.right[c as usize][acc])
    }

    pub fn inverse(&self, x: WElem) -> WElem {
        self.inverse[x]
    }

    pub fn longest(&self) -> WElem {
        self.size() - 1
    }

    pub fn from_word(&self, word: &[u8]) -> Result<WElem> {
        let mut x = 0;
        for &c in word {
            if c as usize >= self.num_simple() {
                return Err(Error::Parse(format!("generator index {c} out of range")));
            }
            x = self.right[c as usize][x];
        }
        Ok(x)
    }

    /// Parses a word written with 1-based generator indices, such as `"121"`
    /// or `"1.2.1"`; `"e"` and the empty string denote the identity.
    pub fn parse_word(&self, s: &str) -> Result<WElem> {
        let s = s.trim();
        if s.is_empty() || s == "e" {
            return Ok(0);
        }
        let parts: Vec<&str> = if s.contains('.') { s.split('.').collect() } else { s.split("").filter(|p| !p.is_empty()).collect() };
        let mut word = Vec::new();
        for p in parts {
            let k: usize = p.parse().map_err(|_| Error::Parse(format!("bad word {s:?}")))?;
            if k == 0 {
                return Err(Error::Parse(format!("generators are numbered from 1 in {s:?}")));
            }
            word.push((k - 1) as u8);
        }
        self.from_word(&word)
    }

    /// Canonical word with 1-based generator indices, `e` for the identity.
    /// Indices are joined by dots when the rank exceeds 9.
    pub fn format(&self, w: WElem) -> String {
        let word = &self.words[w];
        if word.is_empty() {
            return "e".to_string();
        }
        let parts: Vec<String> = word.iter().map(|c| (c + 1).to_string()).collect();
        if self.num_simple() > 9 {
            parts.join(".")
        } else {
            parts.concat()
        }
    }

    pub fn is_right_descent(&self, w: WElem, i: usize) -> bool {
        self.length(self.right[i][w]) < self.length(w)
    }

    pub fn is_left_descent(&self, w: WElem, i: usize) -> bool {
        self.length(self.left[i][w]) < self.length(w)
    }

    /// Bruhat order via the subword property of the canonical word of `y`.
    pub fn bruhat_leq(&self, x: WElem, y: WElem) -> bool {
        self.below[y].contains(x)
    }

    /// Lower Bruhat interval `[e, y]`.
    pub fn bruhat_below(&self, y: WElem) -> &BitSet {
        &self.below[y]
    }

    /// Bruhat order by the lifting property: for a right descent `s` of `y`,
    /// `x ≤ y` iff `min(x, xs) ≤ ys`. Independent of the subword tables.
    pub fn bruhat_leq_lifting(&self, x: WElem, y: WElem) -> bool {
        if y == 0 {
            return x == 0;
        }
        if self.length(x) > self.length(y) {
            return false;
        }
        let s = (0..self.num_simple()).find(|&i| self.is_right_descent(y, i)).unwrap();
        let xs = self.right[s][x];
        let m = if self.length(xs) < self.length(x) { xs } else { x };
        self.bruhat_leq_lifting(m, self.right[s][y])
    }

    /// Every reduced word of `w`, by exhaustive descent recursion.
    pub fn reduced_words(&self, w: WElem) -> Vec<Vec<u8>> {
        if w == 0 {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for i in 0..self.num_simple() {
            if self.is_right_descent(w, i) {
                for mut word in self.reduced_words(self.right[i][w]) {
                    word.push(i as u8);
                    out.push(word);
                }
            }
        }
        out.sort();
        out
    }

    /// `Σ_w v^{2ℓ(w)}`
    pub fn poincare_polynomial(&self) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        for w in self.elements() {
            p.add_term(2 * self.length(w) as i32, 1.into());
        }
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(s: &str) -> WeylGroup {
        WeylGroup::new(RootDatum::parse(s).unwrap()).unwrap()
    }

    #[test]
    fn presets_parse() {
        assert_eq!("A2".parse::<Preset>().unwrap(), Preset::Adjoint(CartanType::A, 2));
        assert_eq!("gl_3".parse::<Preset>().unwrap(), Preset::Gl(3));
        assert!("E8".parse::<Preset>().is_err());
        assert!("".parse::<Preset>().is_err());
        assert!("G3".parse::<Preset>().is_err());
    }

    #[test]
    fn cartan_matrices() {
        assert_eq!(RootDatum::parse("A2").unwrap().cartan, vec![vec![2, -1], vec![-1, 2]]);
        assert_eq!(RootDatum::parse("G2").unwrap().cartan, vec![vec![2, -1], vec![-3, 2]]);
        let gl2 = RootDatum::parse("GL2").unwrap();
        assert_eq!(gl2.rank, 2);
        assert_eq!(gl2.num_simple(), 1);
        assert_eq!(gl2.reflect(0, &[1, 0]), vec![0, 1]);
    }

    #[test]
    fn group_orders_and_lengths() {
        let a2 = group("A2");
        let lens: Vec<usize> = a2.elements().map(|w| a2.length(w)).collect();
        assert_eq!(lens, vec![0, 1, 1, 2, 2, 3]);
        let b2 = group("B2");
        assert_eq!((b2.size(), b2.length(b2.longest())), (8, 4));
        let g2 = group("G2");
        assert_eq!((g2.size(), g2.length(g2.longest())), (12, 6));
        assert_eq!(group("F4").size(), 1152);
        assert_eq!(group("D4").size(), 192);
        assert_eq!(group("GL4").size(), 24);
    }

    #[test]
    fn cap_is_enforced() {
        let err = WeylGroup::with_cap(RootDatum::parse("A3").unwrap(), 10).unwrap_err();
        assert!(matches!(err, Error::WeylCapExceeded { cap: 10 }));
    }

    #[test]
    fn group_laws_and_examples() {
        let a2 = group("A2");
        let s1 = a2.simple(0);
        assert_eq!(a2.multiply(s1, s1), 0);
        assert_eq!(a2.word(a2.longest()), &[0, 1, 0]);
        assert_eq!(a2.parse_word("212").unwrap(), a2.longest());
        let b2 = group("B2");
        let x = b2.parse_word("12").unwrap();
        assert_eq!(b2.format(b2.inverse(x)), "21");
        for g in [&a2, &b2] {
            for x in g.elements() {
                assert_eq!(g.multiply(x, g.inverse(x)), 0);
            }
        }
    }

    #[test]
    fn bruhat_examples() {
        let a2 = group("A2");
        for w in a2.elements() {
            assert!(a2.bruhat_leq(0, w));
        }
        assert!(!a2.bruhat_leq(a2.simple(0), a2.simple(1)));
        let a3 = group("A3");
        assert!(a3.bruhat_leq(a3.parse_word("2").unwrap(), a3.parse_word("2132").unwrap()));
    }

    #[test]
    fn longest_length_counts_positive_roots() {
        for p in ["A1", "A3", "B3", "C3", "D4", "G2", "F4", "GL4"] {
            let g = group(p);
            assert_eq!(g.length(g.longest()), g.datum().num_positive_roots(), "{p}");
        }
    }

    #[test]
    fn good_primes() {
        assert!(!RootDatum::parse("G2").unwrap().is_good_prime(3));
        assert!(RootDatum::parse("G2").unwrap().is_good_prime(5));
        assert!(RootDatum::parse("GL3").unwrap().is_good_prime(2));
        assert!(matches!(RootDatum::parse("A2").unwrap().check_prime(3), Err(Error::TorsionPrime { .. })));
        assert!(RootDatum::parse("GL3").unwrap().check_prime(3).is_ok());
    }
}
