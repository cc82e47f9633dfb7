//! Free words over indexed generator alphabets.
//!
//! A [`Word`] is always freely reduced. Text syntax: `a`, `a^-1`, `y_{2,3}`,
//! `x_4^3`, concatenation by `*`, and `1` (or the empty string) for the identity.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// A generator symbol: a family name plus an index tuple (`y_{i,j}` has family `y`, index `[i, j]`).
///
/// Ordering is by family name, then index tuple lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator {
    pub family: String,
    pub index: Vec<u32>,
}

impl Generator {
    pub fn new(family: impl Into<String>, index: Vec<u32>) -> Self {
        Generator { family: family.into(), index }
    }

    /// A bare generator such as `a`.
    pub fn plain(family: impl Into<String>) -> Self {
        Generator::new(family, Vec::new())
    }

    /// A singly indexed generator such as `x_3`.
    pub fn indexed(family: impl Into<String>, i: u32) -> Self {
        Generator::new(family, vec![i])
    }

    /// The largest index component, used to decide when a generator is released.
    pub fn max_index(&self) -> u32 {
        self.index.iter().copied().max().unwrap_or(0)
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.index.len() {
            0 => write!(f, "{}", self.family),
            1 => write!(f, "{}_{}", self.family, self.index[0]),
            _ => {
                let parts: Vec<String> = self.index.iter().map(|i| i.to_string()).collect();
                write!(f, "{}_{{{}}}", self.family, parts.join(","))
            }
        }
    }
}

/// One letter of a word: a generator with sign +1 (`inverse == false`) or −1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub generator: Generator,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: Generator, inverse: bool) -> Self {
        Letter { generator, inverse }
    }

    pub fn pos(generator: Generator) -> Self {
        Letter::new(generator, false)
    }

    pub fn neg(generator: Generator) -> Self {
        Letter::new(generator, true)
    }

    pub fn inv(&self) -> Letter {
        Letter::new(self.generator.clone(), !self.inverse)
    }

    pub fn sign(&self) -> i32 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    fn cancels(&self, other: &Letter) -> bool {
        self.inverse != other.inverse && self.generator == other.generator
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("cannot parse word `{text}`: {reason}")]
    Parse { text: String, reason: String },
    #[error("derived commutator of depth {depth} needs {expected} arguments, got {got}")]
    Arity { depth: u32, expected: usize, got: usize },
    #[error("left-normed commutator needs at least one argument")]
    Empty,
}

/// A freely reduced word. The empty word is the identity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

/// Free reduction of an arbitrary letter sequence.
pub fn reduce(letters: impl IntoIterator<Item = Letter>) -> Word {
    let mut out: Vec<Letter> = Vec::new();
    for l in letters {
        if out.last().is_some_and(|last| last.cancels(&l)) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    Word { letters: out }
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    pub fn generator(g: Generator) -> Self {
        Word { letters: vec![Letter::pos(g)] }
    }

    pub fn letter(l: Letter) -> Self {
        Word { letters: vec![l] }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn mul(&self, other: &Word) -> Word {
        // Only the junction can cancel.
        let mut k = 0;
        let (a, b) = (&self.letters, &other.letters);
        while k < a.len() && k < b.len() && a[a.len() - 1 - k].cancels(&b[k]) {
            k += 1;
        }
        let mut letters = Vec::with_capacity(a.len() + b.len() - 2 * k);
        letters.extend_from_slice(&a[..a.len() - k]);
        letters.extend_from_slice(&b[k..]);
        Word { letters }
    }

    pub fn inv(&self) -> Word {
        Word { letters: self.letters.iter().rev().map(Letter::inv).collect() }
    }

    /// `w^n` for any integer `n`.
    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inv() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..n.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// `g w g^-1`.
    pub fn conjugate_by(&self, g: &Word) -> Word {
        g.mul(self).mul(&g.inv())
    }

    /// The set of generators occurring in the word, in canonical order.
    pub fn generators(&self) -> Vec<Generator> {
        let mut gs: Vec<Generator> = self.letters.iter().map(|l| l.generator.clone()).collect();
        gs.sort();
        gs.dedup();
        gs
    }

    /// Exponent sum of one generator.
    pub fn exponent_sum(&self, g: &Generator) -> i64 {
        self.letters.iter().filter(|l| &l.generator == g).map(|l| l.sign() as i64).sum()
    }

    /// Parse the text syntax. See the module docs.
    pub fn parse(text: &str) -> Result<Word, WordError> {
        text.parse()
    }
}

/// `w^-1 v^-1 w v`.
pub fn commutator(w: &Word, v: &Word) -> Word {
    w.inv().mul(&v.inv()).mul(w).mul(v)
}

/// `[[...[g0, g1], g2]..., gn]`.
pub fn left_normed_commutator(gs: &[Word]) -> Result<Word, WordError> {
    let (first, rest) = gs.split_first().ok_or(WordError::Empty)?;
    Ok(rest.iter().fold(first.clone(), |acc, g| commutator(&acc, g)))
}

/// Balanced commutator tree of the given depth over `2^depth` arguments.
pub fn derived_commutator(depth: u32, gs: &[Word]) -> Result<Word, WordError> {
    let expected = 1usize << depth;
    if gs.len() != expected {
        return Err(WordError::Arity { depth, expected, got: gs.len() });
    }
    fn go(gs: &[Word]) -> Word {
        if gs.len() == 1 {
            return gs[0].clone();
        }
        let (l, r) = gs.split_at(gs.len() / 2);
        commutator(&go(l), &go(r))
    }
    Ok(go(gs))
}

/// All reduced words of length at most `max_len` over `gens`, in shortlex order.
///
/// Letters are ordered `g0, g0^-1, g1, g1^-1, ...` following the order of `gens`.
pub fn words_up_to(gens: &[Generator], max_len: usize) -> Vec<Word> {
    let alphabet: Vec<Letter> = gens
        .iter()
        .flat_map(|g| [Letter::pos(g.clone()), Letter::neg(g.clone())])
        .collect();
    let mut out = vec![Word::identity()];
    let mut layer = vec![Word::identity()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for l in &alphabet {
                if w.letters.last().is_some_and(|last| last.cancels(l)) {
                    continue;
                }
                let mut letters = w.letters.clone();
                letters.push(l.clone());
                next.push(Word { letters });
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Shortlex comparison using the canonical generator order.
pub fn shortlex_cmp(a: &Word, b: &Word) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.letters.cmp(&b.letters))
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.letters.len() {
            let l = &self.letters[i];
            let mut j = i + 1;
            while j < self.letters.len() && self.letters[j] == *l {
                j += 1;
            }
            let e = (j - i) as i64 * l.sign() as i64;
            if e == 1 {
                parts.push(l.generator.to_string());
            } else {
                parts.push(format!("{}^{}", l.generator, e));
            }
            i = j;
        }
        write!(f, "{}", parts.join("*"))
    }
}

fn parse_factor(text: &str, full: &str) -> Result<(Generator, i64), WordError> {
    let err = |reason: &str| WordError::Parse { text: full.to_string(), reason: reason.to_string() };
    let (base, exp) = match text.split_once('^') {
        Some((b, e)) => {
            let e: i64 = e.trim().parse().map_err(|_| err("bad exponent"))?;
            (b.trim(), e)
        }
        None => (text.trim(), 1),
    };
    let (family, index) = match base.split_once('_') {
        Some((fam, idx)) => {
            let idx = idx.trim();
            let inner = idx.strip_prefix('{').and_then(|s| s.strip_suffix('}')).unwrap_or(idx);
            let index = inner
                .split(',')
                .map(|p| p.trim().parse::<u32>().map_err(|_| err("bad index")))
                .collect::<Result<Vec<_>, _>>()?;
            (fam.trim(), index)
        }
        None => (base, Vec::new()),
    };
    let ok = !family.is_empty()
        && family.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
        && family.chars().all(|c| c.is_ascii_alphanumeric() || c == '\'');
    if !ok {
        return Err(err("bad generator name"));
    }
    Ok((Generator::new(family, index), exp))
}

impl FromStr for Word {
    type Err = WordError;

    fn from_str(text: &str) -> Result<Word, WordError> {
        let trimmed = text.trim();
        if trimmed.is_empty() || trimmed == "1" {
            return Ok(Word::identity());
        }
        let mut letters = Vec::new();
        for part in trimmed.split('*') {
            let (g, e) = parse_factor(part, text)?;
            for _ in 0..e.unsigned_abs() {
                letters.push(Letter::new(g.clone(), e < 0));
            }
        }
        Ok(reduce(letters))
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Word, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

impl Serialize for Generator {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Generator {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Generator, D::Error> {
        let text = String::deserialize(d)?;
        let (g, e) = parse_factor(&text, &text).map_err(serde::de::Error::custom)?;
        if e != 1 {
            return Err(serde::de::Error::custom("generator names carry no exponent"));
        }
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn a() -> Generator {
        Generator::plain("a")
    }

    #[test]
    fn reduction_examples() {
        let seq = vec![Letter::pos(a()), Letter::neg(a())];
        assert!(reduce(seq).is_identity());
        let b = Generator::plain("b");
        let seq = vec![Letter::pos(a()), Letter::pos(b.clone()), Letter::neg(b), Letter::pos(a())];
        assert_eq!(reduce(seq), w("a^2"));
        assert_eq!(reduce(vec![Letter::pos(Generator::plain("x"))]), w("x"));
    }

    #[test]
    fn mul_inv_examples() {
        assert!(w("a").mul(&w("a^-1")).is_identity());
        assert_eq!(w("a*b").inv(), w("b^-1*a^-1"));
        assert_eq!(w("a*b").mul(&w("b^-1*c")), w("a*c"));
    }

    #[test]
    fn commutator_examples() {
        assert_eq!(commutator(&w("a"), &w("b")), w("a^-1*b^-1*a*b"));
        assert!(commutator(&w("a"), &w("a")).is_identity());
        assert!(commutator(&w("a"), &Word::identity()).is_identity());
        let abc = left_normed_commutator(&[w("a"), w("b"), w("c")]).unwrap();
        assert_eq!(abc, commutator(&commutator(&w("a"), &w("b")), &w("c")));
        assert_eq!(left_normed_commutator(&[w("a")]).unwrap(), w("a"));
        assert!(left_normed_commutator(&[w("a"), Word::identity()]).unwrap().is_identity());
        assert_eq!(left_normed_commutator(&[]), Err(WordError::Empty));
    }

    #[test]
    fn derived_commutator_examples() {
        assert_eq!(derived_commutator(1, &[w("a"), w("b")]).unwrap(), commutator(&w("a"), &w("b")));
        let d2 = derived_commutator(2, &[w("a"), w("b"), w("c"), w("d")]).unwrap();
        let expect = commutator(&commutator(&w("a"), &w("b")), &commutator(&w("c"), &w("d")));
        assert_eq!(d2, expect);
        assert_eq!(derived_commutator(0, &[w("a")]).unwrap(), w("a"));
        assert!(matches!(derived_commutator(2, &[w("a")]), Err(WordError::Arity { .. })));
    }

    #[test]
    fn text_round_trip() {
        for s in ["1", "a", "a^-1", "y_{2,3}", "x_4^3*b^-2", "a*b*a^-1*b^-1"] {
            let word = w(s);
            assert_eq!(w(&word.to_string()), word, "{s}");
        }
        assert_eq!(w("y_{2,3}").letters()[0].generator, Generator::new("y", vec![2, 3]));
        assert_eq!(w("a*a").to_string(), "a^2");
        assert!(Word::parse("a^x").is_err());
        assert!(Word::parse("_3").is_err());
    }

    #[test]
    fn generator_order_is_family_then_index() {
        let mut gs = [Generator::new("y", vec![1, 0]),
            Generator::indexed("x", 5),
            Generator::new("y", vec![0, 7]),
            Generator::plain("x")];
        gs.sort();
        let shown: Vec<String> = gs.iter().map(|g| g.to_string()).collect();
        assert_eq!(shown, ["x", "x_5", "y_{0,7}", "y_{1,0}"]);
    }

    #[test]
    fn group_axioms_exhaustive_len4() {
        let gens = [a(), Generator::plain("b")];
        let ws = words_up_to(&gens, 4);
        assert_eq!(ws.len(), 1 + 4 + 12 + 36 + 108);
        let small = words_up_to(&gens, 2);
        for x in &ws {
            assert_eq!(x.mul(&Word::identity()), *x);
            assert_eq!(Word::identity().mul(x), *x);
            assert!(x.mul(&x.inv()).is_identity());
            assert!(x.inv().mul(x).is_identity());
            for y in &small {
                for z in &small {
                    assert_eq!(x.mul(y).mul(z), x.mul(&y.mul(z)));
                }
            }
        }
    }

    #[test]
    fn exponent_sums() {
        assert_eq!(w("a^3*b*a^-1").exponent_sum(&a()), 2);
        assert_eq!(w("a*b").pow(-2), w("b^-1*a^-1*b^-1*a^-1"));
    }
}
