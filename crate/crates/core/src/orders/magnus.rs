//! The Magnus embedding of `F(a, b)` into power series in non-commuting
//! `X_a, X_b`, and the bi-order it induces.
//!
//! `a ↦ 1 + X_a`, `a⁻¹ ↦ 1 - X_a + X_a² - ⋯`, and likewise for `b`. Terms
//! are ordered by degree, then lexicographically with `X_a < X_b`. Two words
//! compare by the coefficient of the first term on which their series
//! differ; the larger coefficient is the larger element.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::diagrams::free2::word_to_letters;
use crate::diagrams::DiagramError;
use crate::words::Word;

/// A monomial in `X_a` (0) and `X_b` (1), ordered by degree then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u8>);

impl Monomial {
    pub fn degree(&self) -> usize {
        self.0.len()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let mut i = 0;
        while i < self.0.len() {
            let v = self.0[i];
            let mut j = i;
            while j < self.0.len() && self.0[j] == v {
                j += 1;
            }
            let name = if v == 0 { "X_a" } else { "X_b" };
            if j - i == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{}", j - i)?;
            }
            i = j;
        }
        Ok(())
    }
}

/// A power series truncated at `degree_bound`, zero coefficients dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MagnusSeries {
    pub degree_bound: usize,
    pub terms: BTreeMap<Monomial, i64>,
}

impl MagnusSeries {
    pub fn coefficient(&self, m: &[u8]) -> i64 {
        self.terms.get(&Monomial(m.to_vec())).copied().unwrap_or(0)
    }

    /// Terms in order.
    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, i64)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }
}

impl fmt::Display for MagnusSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, &c)) in self.terms.iter().enumerate() {
            let sign = if c < 0 { "-" } else { "+" };
            if i == 0 {
                if c < 0 {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let a = c.unsigned_abs();
            if m.0.is_empty() {
                write!(f, "{a}")?;
            } else if a == 1 {
                write!(f, "{m}")?;
            } else {
                write!(f, "{a}{m}")?;
            }
        }
        Ok(())
    }
}

/// Sparse expansion of letter codes (`0 = a, 1 = a⁻¹, 2 = b, 3 = b⁻¹`) up to degree `d`.
fn expand_letters(letters: &[u8], d: usize) -> HashMap<Vec<u8>, i64> {
    let mut acc: HashMap<Vec<u8>, i64> = HashMap::from([(Vec::new(), 1)]);
    for &l in letters {
        let var = l / 2;
        let inverse = l % 2 == 1;
        let mut next: HashMap<Vec<u8>, i64> = HashMap::with_capacity(acc.len() * 2);
        for (m, c) in acc {
            let room = d - m.len();
            let top = if inverse { room } else { room.min(1) };
            let mut mono = m;
            for j in 0..=top {
                let coef = if inverse && j % 2 == 1 { -c } else { c };
                *next.entry(mono.clone()).or_insert(0) += coef;
                if j < top {
                    mono.push(var);
                }
            }
        }
        next.retain(|_, c| *c != 0);
        acc = next;
    }
    acc
}

fn to_series(terms: HashMap<Vec<u8>, i64>, d: usize) -> MagnusSeries {
    MagnusSeries { degree_bound: d, terms: terms.into_iter().map(|(m, c)| (Monomial(m), c)).collect() }
}

/// Expansion of a word over `a, b`, truncated at degree `d`.
pub fn magnus_expand(w: &Word, d: usize) -> Result<MagnusSeries, DiagramError> {
    let letters = word_to_letters(w)?;
    Ok(to_series(expand_letters(&letters, d), d))
}

/// Comparison of the degree-`k` parts only, in term order.
fn compare_degree(x: &HashMap<Vec<u8>, i64>, y: &HashMap<Vec<u8>, i64>, k: usize) -> Ordering {
    let mut keys: Vec<&Vec<u8>> = x.keys().chain(y.keys()).filter(|m| m.len() == k).collect();
    keys.sort();
    keys.dedup();
    for m in keys {
        let a = x.get(m).copied().unwrap_or(0);
        let b = y.get(m).copied().unwrap_or(0);
        if a != b {
            return a.cmp(&b);
        }
    }
    Ordering::Equal
}

/// Compare `w` and `v` by their series truncated at degree `d`.
///
/// Coefficients of degree `k` do not depend on the truncation once it is at
/// least `k`, so the degrees are examined in increasing order and the
/// expansion stops at the first degree where the series differ.
pub fn magnus_compare(w: &Word, v: &Word, d: usize) -> Result<Ordering, DiagramError> {
    let wl = word_to_letters(w)?;
    let vl = word_to_letters(v)?;
    for k in 1..=d {
        let x = expand_letters(&wl, k);
        let y = expand_letters(&vl, k);
        let o = compare_degree(&x, &y, k);
        if o != Ordering::Equal {
            return Ok(o);
        }
    }
    Ok(Ordering::Equal)
}

/// Truncation degree that makes [`magnus_compare`] agree with equality in `F₂`.
pub fn certified_degree(w: &Word, v: &Word) -> usize {
    (w.len() + v.len()).max(1)
}

/// Whether `w` lies strictly above the identity.
pub fn positive_cone_member(w: &Word, d: usize) -> Result<bool, DiagramError> {
    Ok(magnus_compare(w, &Word::identity(), d)? == Ordering::Greater)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{commutator, words_up_to, Generator};

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn expansions() {
        assert_eq!(magnus_expand(&w("a"), 4).unwrap().to_string(), "1 + X_a");
        assert_eq!(magnus_expand(&w("a^-1"), 3).unwrap().to_string(), "1 - X_a + X_a^2 - X_a^3");
        let c = commutator(&w("a"), &w("b"));
        assert_eq!(magnus_expand(&c, 2).unwrap().to_string(), "1 + X_aX_b - X_bX_a");
        assert_eq!(magnus_expand(&w("a^2"), 3).unwrap().to_string(), "1 + 2X_a + X_a^2");
        assert_eq!(magnus_expand(&Word::identity(), 3).unwrap().to_string(), "1");
    }

    #[test]
    fn comparisons() {
        assert_eq!(magnus_compare(&w("a*b"), &w("a*b"), 4).unwrap(), Ordering::Equal);
        assert_eq!(magnus_compare(&w("a"), &Word::identity(), 2).unwrap(), Ordering::Greater);
        assert_ne!(magnus_compare(&w("a*b"), &w("b*a"), 4).unwrap(), Ordering::Equal);
        assert!(!positive_cone_member(&Word::identity(), 4).unwrap());
        assert!(positive_cone_member(&w("a"), 1).unwrap());
        assert!(!positive_cone_member(&w("a^-1"), 1).unwrap());
        // [a, b] and [b, a] differ first at X_aX_b.
        assert!(positive_cone_member(&commutator(&w("a"), &w("b")), 4).unwrap());
        assert!(magnus_compare(&w("b"), &w("c"), 3).is_err());
    }

    #[test]
    fn lazy_comparison_matches_full_expansion() {
        let gens = [Generator::plain("a"), Generator::plain("b")];
        let words = words_up_to(&gens, 3);
        for x in &words {
            for y in &words {
                let d = 6;
                let full = magnus_expand(x, d).unwrap();
                let other = magnus_expand(y, d).unwrap();
                let mut keys: Vec<&Monomial> = full.terms.keys().chain(other.terms.keys()).collect();
                keys.sort();
                keys.dedup();
                let want = keys
                    .into_iter()
                    .map(|m| full.coefficient(&m.0).cmp(&other.coefficient(&m.0)))
                    .find(|o| *o != Ordering::Equal)
                    .unwrap_or(Ordering::Equal);
                assert_eq!(magnus_compare(x, y, d).unwrap(), want, "{x} vs {y}");
            }
        }
    }

    #[test]
    fn exactly_one_of_w_and_its_inverse() {
        let gens = [Generator::plain("a"), Generator::plain("b")];
        for x in words_up_to(&gens, 6).into_iter().filter(|x| !x.is_identity()) {
            let p = positive_cone_member(&x, 12).unwrap();
            let q = positive_cone_member(&x.inv(), 12).unwrap();
            assert!(p ^ q, "{x}");
        }
    }
}
