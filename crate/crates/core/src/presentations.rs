//! Recursive presentations: a staged generator family, a cumulative relator
//! stream, and a certified approximation `1_{G,s}` of the identity words.
//!
//! Membership of a word `t` in `1_{G,s}` is decided by an exhaustive search
//! that starts at `t` and tries to reach the empty word. The moves are cyclic
//! rotation (conjugation by the first letter) and insertion of a cyclic
//! permutation of a relator `r^{±1}` that cancels against at least one
//! neighbouring letter. Only relators with stream index `≤ s` are used and no
//! intermediate word may exceed `|t| + slack(s)` letters. The searched space
//! grows with `s`, so membership is monotone, and every hit is replayed into a
//! product of conjugates of relators.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::words::{Generator, Letter, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PresentationError {
    #[error("identity search for `{word}` at stage {stage} exceeded {limit} states")]
    SearchBudget { word: String, stage: usize, limit: usize },
    #[error("relator `{0}` is empty")]
    EmptyRelator(String),
    #[error("relator `{relator}` uses undeclared generator `{generator}`")]
    Undeclared { relator: String, generator: String },
    #[error("malformed presentation: {0}")]
    Malformed(String),
}

/// Source of a recursive presentation: what appears for the first time at each stage.
///
/// Implementations must be pure functions of the stage.
pub trait PresentationStream: Send + Sync {
    /// Generators that become visible at stage `s`.
    fn new_generators(&self, s: usize) -> Vec<Generator>;
    /// Relators emitted at stage `s`.
    fn new_relators(&self, s: usize) -> Vec<Word>;
    /// Generator family names used by this stream.
    fn families(&self) -> Vec<String>;
}

/// One factor of a certificate: `conjugator · relator^sign · conjugator⁻¹`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateFactor {
    pub conjugator: Word,
    pub relator: usize,
    pub sign: i8,
}

/// A product of conjugates of relators, read left to right.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Certificate {
    pub factors: Vec<CertificateFactor>,
}

impl Certificate {
    /// Multiply the factors out against the relator stream.
    pub fn evaluate(&self, relators: &[Word]) -> Option<Word> {
        let mut acc = Word::identity();
        for f in &self.factors {
            let r = relators.get(f.relator)?;
            let r = if f.sign < 0 { r.inv() } else { r.clone() };
            acc = acc.mul(&r.conjugate_by(&f.conjugator));
        }
        Some(acc)
    }
}

/// A finite approximation of `1_{G,s}`: certified identity words.
#[derive(Clone, Debug)]
pub struct IdentityApprox {
    pub stage: usize,
    pub words: Vec<(Word, Certificate)>,
}

impl IdentityApprox {
    pub fn contains(&self, w: &Word) -> bool {
        self.words.iter().any(|(v, _)| v == w)
    }
}

#[derive(Default)]
struct MemberEntry {
    found: Option<(usize, Certificate)>,
    absent_through: Option<usize>,
}

#[derive(Default)]
struct Cache {
    gens: Vec<Vec<Generator>>,
    rels: Vec<Vec<Word>>,
    members: HashMap<Word, MemberEntry>,
}

/// Upper bound on states explored by one identity search.
pub const SEARCH_STATE_LIMIT: usize = 2_000_000;

/// A recursive presentation. Cloning shares the stream and the caches.
#[derive(Clone)]
pub struct RecursivePresentation {
    name: String,
    stream: Arc<dyn PresentationStream>,
    cache: Arc<Mutex<Cache>>,
}

impl fmt::Debug for RecursivePresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RecursivePresentation").field("name", &self.name).finish()
    }
}

/// Extra length allowed above `|t|` during the identity search at stage `s`.
pub fn search_slack(s: usize) -> usize {
    ((s + 1).ilog2() / 4) as usize
}

impl RecursivePresentation {
    pub fn from_stream(name: impl Into<String>, stream: impl PresentationStream + 'static) -> Self {
        RecursivePresentation {
            name: name.into(),
            stream: Arc::new(stream),
            cache: Arc::new(Mutex::new(Cache::default())),
        }
    }

    /// A presentation whose generators and relators all appear at stage 0.
    pub fn finite(
        name: impl Into<String>,
        generators: Vec<Generator>,
        relators: Vec<Word>,
    ) -> Result<Self, PresentationError> {
        let rels = relators.into_iter().map(|r| (0, r)).collect();
        let gens = generators.into_iter().map(|g| (0, g)).collect();
        Ok(Self::from_stream(name, StagedList::new(gens, rels)?))
    }

    /// Parse a finite presentation from generator names and relator strings.
    pub fn parse(name: &str, generators: &[&str], relators: &[&str]) -> Result<Self, PresentationError> {
        let gens = generators
            .iter()
            .map(|g| {
                Word::parse(g)
                    .ok()
                    .filter(|w| w.len() == 1 && !w.letters()[0].inverse)
                    .map(|w| w.letters()[0].generator.clone())
                    .ok_or_else(|| PresentationError::Malformed(format!("bad generator `{g}`")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let rels = relators
            .iter()
            .map(|r| Word::parse(r).map_err(|e| PresentationError::Malformed(e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Self::finite(name, gens, rels)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn stream(&self) -> Arc<dyn PresentationStream> {
        self.stream.clone()
    }

    pub fn families(&self) -> Vec<String> {
        self.stream.families()
    }

    fn fill(&self, cache: &mut Cache, s: usize) {
        while cache.rels.len() <= s {
            let k = cache.rels.len();
            cache.gens.push(self.stream.new_generators(k));
            cache.rels.push(self.stream.new_relators(k));
        }
    }

    /// Generators visible by stage `s`, in release order.
    pub fn generators(&self, s: usize) -> Vec<Generator> {
        let mut cache = self.cache.lock().expect("cache poisoned");
        self.fill(&mut cache, s);
        cache.gens[..=s].iter().flatten().cloned().collect()
    }

    /// Cumulative relator list at stage `s`, in stream order.
    pub fn relators(&self, s: usize) -> Vec<Word> {
        let mut cache = self.cache.lock().expect("cache poisoned");
        self.fill(&mut cache, s);
        cache.rels[..=s].iter().flatten().cloned().collect()
    }

    /// Relators with the stage at which each first appeared.
    pub fn staged_relators(&self, s: usize) -> Vec<(usize, Word)> {
        let mut cache = self.cache.lock().expect("cache poisoned");
        self.fill(&mut cache, s);
        cache.rels[..=s]
            .iter()
            .enumerate()
            .flat_map(|(k, rs)| rs.iter().map(move |r| (k, r.clone())))
            .collect()
    }

    /// Relators usable by the identity search at stage `s`: stream index `≤ s`.
    pub fn search_relators(&self, s: usize) -> Vec<Word> {
        let mut cache = self.cache.lock().expect("cache poisoned");
        let mut k = 0;
        let mut out = Vec::new();
        while out.len() <= s {
            self.fill(&mut cache, k);
            out.extend(cache.rels[k].iter().cloned());
            if k >= s {
                break;
            }
            k += 1;
        }
        out.truncate(s + 1);
        out
    }

    /// Decide `t ∈ 1_{G,s}`, returning a certificate on success.
    pub fn identity_certificate(&self, t: &Word, s: usize) -> Result<Option<Certificate>, PresentationError> {
        if t.is_identity() {
            return Ok(Some(Certificate::default()));
        }
        {
            let cache = self.cache.lock().expect("cache poisoned");
            if let Some(e) = cache.members.get(t) {
                if let Some((st, cert)) = &e.found {
                    if *st <= s {
                        return Ok(Some(cert.clone()));
                    }
                }
                if e.absent_through.is_some_and(|a| a >= s) {
                    return Ok(None);
                }
            }
        }
        let relators = self.search_relators(s);
        let result = search_identity(t, &relators, t.len() + search_slack(s), SEARCH_STATE_LIMIT)
            .map_err(|limit| PresentationError::SearchBudget { word: t.to_string(), stage: s, limit })?;
        let mut cache = self.cache.lock().expect("cache poisoned");
        let entry = cache.members.entry(t.clone()).or_default();
        match &result {
            Some(cert) => {
                if entry.found.as_ref().is_none_or(|(st, _)| *st > s) {
                    entry.found = Some((s, cert.clone()));
                }
            }
            None => {
                entry.absent_through = Some(entry.absent_through.map_or(s, |a| a.max(s)));
            }
        }
        Ok(result)
    }

    /// `t ∈ 1_{G,s}`.
    pub fn is_identity_at(&self, t: &Word, s: usize) -> Result<bool, PresentationError> {
        Ok(self.identity_certificate(t, s)?.is_some())
    }

    /// `reduce(w v⁻¹) ∈ 1_{G,s}`: the stage-`s` semi-decision of `w =_G v`.
    pub fn equal_at_stage(&self, w: &Word, v: &Word, s: usize) -> Result<bool, PresentationError> {
        self.is_identity_at(&w.mul(&v.inv()), s)
    }

    /// The certified identity words of length `≤ max_len` over `gens` at stage `s`.
    pub fn identity_words(
        &self,
        s: usize,
        gens: &[Generator],
        max_len: usize,
    ) -> Result<IdentityApprox, PresentationError> {
        let mut words = Vec::new();
        for w in crate::words::words_up_to(gens, max_len) {
            if let Some(c) = self.identity_certificate(&w, s)? {
                words.push((w, c));
            }
        }
        Ok(IdentityApprox { stage: s, words })
    }

    /// Serializable prefix of the presentation up to stage `s`.
    pub fn snapshot(&self, s: usize) -> PresentationSnapshot {
        let mut cache = self.cache.lock().expect("cache poisoned");
        self.fill(&mut cache, s);
        let mut generators = Vec::new();
        let mut relators = Vec::new();
        for k in 0..=s {
            generators.extend(cache.gens[k].iter().map(|g| StagedGenerator { stage: k, generator: g.clone() }));
            relators.extend(cache.rels[k].iter().map(|r| StagedRelator { stage: k, word: r.clone() }));
        }
        PresentationSnapshot { name: self.name.clone(), stage: s, generators, relators }
    }
}

/// Serialized presentation prefix: stage-indexed generators and relators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationSnapshot {
    pub name: String,
    pub stage: usize,
    pub generators: Vec<StagedGenerator>,
    pub relators: Vec<StagedRelator>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StagedGenerator {
    pub stage: usize,
    pub generator: Generator,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StagedRelator {
    pub stage: usize,
    pub word: Word,
}

impl PresentationSnapshot {
    /// Rebuild a presentation whose stream is exactly this prefix.
    pub fn into_presentation(self) -> Result<RecursivePresentation, PresentationError> {
        let gens = self.generators.into_iter().map(|g| (g.stage, g.generator)).collect();
        let rels = self.relators.into_iter().map(|r| (r.stage, r.word)).collect();
        Ok(RecursivePresentation::from_stream(self.name, StagedList::new(gens, rels)?))
    }
}

/// A finite stream given by explicit stage tags.
#[derive(Clone, Debug)]
pub struct StagedList {
    gens: Vec<(usize, Generator)>,
    rels: Vec<(usize, Word)>,
}

impl StagedList {
    pub fn new(gens: Vec<(usize, Generator)>, rels: Vec<(usize, Word)>) -> Result<Self, PresentationError> {
        for (stage, r) in &rels {
            if r.is_identity() {
                return Err(PresentationError::EmptyRelator(r.to_string()));
            }
            for g in r.generators() {
                if !gens.iter().any(|(st, h)| *h == g && st <= stage) {
                    return Err(PresentationError::Undeclared { relator: r.to_string(), generator: g.to_string() });
                }
            }
        }
        Ok(StagedList { gens, rels })
    }
}

impl PresentationStream for StagedList {
    fn new_generators(&self, s: usize) -> Vec<Generator> {
        self.gens.iter().filter(|(st, _)| *st == s).map(|(_, g)| g.clone()).collect()
    }

    fn new_relators(&self, s: usize) -> Vec<Word> {
        self.rels.iter().filter(|(st, _)| *st == s).map(|(_, r)| r.clone()).collect()
    }

    fn families(&self) -> Vec<String> {
        let mut f: Vec<String> = self.gens.iter().map(|(_, g)| g.family.clone()).collect();
        f.sort();
        f.dedup();
        f
    }
}

/// Rename generator families of a word.
pub fn rename_word(w: &Word, map: &HashMap<String, String>) -> Word {
    crate::words::reduce(w.letters().iter().map(|l| {
        let fam = map.get(&l.generator.family).cloned().unwrap_or_else(|| l.generator.family.clone());
        Letter::new(Generator::new(fam, l.generator.index.clone()), l.inverse)
    }))
}

fn rename_gen(g: &Generator, map: &HashMap<String, String>) -> Generator {
    let fam = map.get(&g.family).cloned().unwrap_or_else(|| g.family.clone());
    Generator::new(fam, g.index.clone())
}

struct FreeProductStream {
    parts: Vec<(RecursivePresentation, HashMap<String, String>)>,
}

impl PresentationStream for FreeProductStream {
    fn new_generators(&self, s: usize) -> Vec<Generator> {
        let mut out = Vec::new();
        for (p, map) in &self.parts {
            out.extend(p.stream.new_generators(s).iter().map(|g| rename_gen(g, map)));
        }
        out
    }

    fn new_relators(&self, s: usize) -> Vec<Word> {
        let mut out = Vec::new();
        for (p, map) in &self.parts {
            out.extend(p.stream.new_relators(s).iter().map(|r| rename_word(r, map)));
        }
        out
    }

    fn families(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (p, map) in &self.parts {
            out.extend(p.families().iter().map(|f| map.get(f).cloned().unwrap_or_else(|| f.clone())));
        }
        out
    }
}

/// Append primes to `family` until it avoids `taken`.
pub fn fresh_family(family: &str, taken: &HashSet<String>) -> String {
    let mut f = family.to_string();
    while taken.contains(&f) {
        f.push('\'');
    }
    f
}

/// Free product. A factor whose family collides with an earlier one is renamed `x -> x'`.
pub fn free_product(parts: &[RecursivePresentation]) -> RecursivePresentation {
    if parts.len() == 1 {
        return parts[0].clone();
    }
    let mut taken = HashSet::new();
    let mut tagged = Vec::new();
    for p in parts {
        let mut map = HashMap::new();
        for f in p.families() {
            let g = fresh_family(&f, &taken);
            if g != f {
                map.insert(f.clone(), g.clone());
            }
            taken.insert(g);
        }
        tagged.push((p.clone(), map));
    }
    let name = parts.iter().map(|p| p.name.clone()).collect::<Vec<_>>().join(" * ");
    RecursivePresentation::from_stream(name, FreeProductStream { parts: tagged })
}

type StageFn = dyn Fn(usize) -> Vec<Word> + Send + Sync;

struct ExtraRelators {
    base: RecursivePresentation,
    extra: Arc<StageFn>,
}

impl PresentationStream for ExtraRelators {
    fn new_generators(&self, s: usize) -> Vec<Generator> {
        self.base.stream.new_generators(s)
    }

    fn new_relators(&self, s: usize) -> Vec<Word> {
        let mut out = self.base.stream.new_relators(s);
        let now = (self.extra)(s);
        let before = if s == 0 { 0 } else { (self.extra)(s - 1).len() };
        out.extend(now.into_iter().skip(before));
        out
    }

    fn families(&self) -> Vec<String> {
        self.base.families()
    }
}

/// Add a cumulative staged relator list; `extra(s)` must extend `extra(s - 1)`.
pub fn add_relators_staged(
    base: &RecursivePresentation,
    extra: impl Fn(usize) -> Vec<Word> + Send + Sync + 'static,
) -> RecursivePresentation {
    RecursivePresentation::from_stream(
        base.name.clone(),
        ExtraRelators { base: base.clone(), extra: Arc::new(extra) },
    )
}

// ---------------------------------------------------------------------------
// Identity search.

#[derive(Clone, Copy)]
enum Move {
    Rotate,
    Insert { at: usize, perm: usize },
}

struct Perm {
    relator: usize,
    sign: i8,
    // Rotation offset into r^sign.
    offset: usize,
    letters: Vec<i32>,
}

fn push_reduced(out: &mut Vec<i32>, x: i32) {
    if out.last() == Some(&-x) {
        out.pop();
    } else {
        out.push(x);
    }
}

/// Exhaustive search from `t` to the empty word. `Err(limit)` if the state budget runs out.
pub fn search_identity(
    t: &Word,
    relators: &[Word],
    cap: usize,
    limit: usize,
) -> Result<Option<Certificate>, usize> {
    // Local alphabet: generator k is encoded as ±(k+1).
    let mut alphabet: Vec<Generator> = Vec::new();
    let mut code: HashMap<Generator, i32> = HashMap::new();
    let mut encode = |w: &Word, alphabet: &mut Vec<Generator>| -> Vec<i32> {
        w.letters()
            .iter()
            .map(|l| {
                let k = *code.entry(l.generator.clone()).or_insert_with(|| {
                    alphabet.push(l.generator.clone());
                    alphabet.len() as i32
                });
                if l.inverse {
                    -k
                } else {
                    k
                }
            })
            .collect()
    };
    let start = encode(t, &mut alphabet);
    let mut perms = Vec::new();
    for (ri, r) in relators.iter().enumerate() {
        let enc = encode(r, &mut alphabet);
        for sign in [1i8, -1] {
            let base: Vec<i32> = if sign > 0 { enc.clone() } else { enc.iter().rev().map(|x| -x).collect() };
            let n = base.len();
            let mut seen = HashSet::new();
            for k in 0..n {
                let letters: Vec<i32> = base[k..].iter().chain(&base[..k]).copied().collect();
                if seen.insert(letters.clone()) {
                    perms.push(Perm { relator: ri, sign, offset: k, letters });
                }
            }
        }
    }
    let mut by_first: HashMap<i32, Vec<usize>> = HashMap::new();
    let mut by_last: HashMap<i32, Vec<usize>> = HashMap::new();
    for (i, p) in perms.iter().enumerate() {
        if let (Some(&f), Some(&l)) = (p.letters.first(), p.letters.last()) {
            by_first.entry(f).or_default().push(i);
            by_last.entry(l).or_default().push(i);
        }
    }

    let mut parent: HashMap<Vec<i32>, (Vec<i32>, Move)> = HashMap::new();
    let mut visited: HashSet<Vec<i32>> = HashSet::new();
    let mut queue = VecDeque::new();
    visited.insert(start.clone());
    queue.push_back(start.clone());
    let mut goal = None;
    'bfs: while let Some(w) = queue.pop_front() {
        let n = w.len();
        let mut next: Vec<(Vec<i32>, Move)> = Vec::new();
        if n > 0 {
            let mut r = Vec::with_capacity(n);
            for &x in w[1..].iter().chain(std::iter::once(&w[0])) {
                push_reduced(&mut r, x);
            }
            next.push((r, Move::Rotate));
        }
        for at in 0..=n {
            let mut cands: Vec<usize> = Vec::new();
            if at < n {
                if let Some(v) = by_last.get(&-w[at]) {
                    cands.extend(v);
                }
            }
            if at > 0 {
                if let Some(v) = by_first.get(&-w[at - 1]) {
                    cands.extend(v.iter().filter(|&&p| at == n || perms[p].letters.last() != Some(&-w[at])));
                }
            }
            for p in cands {
                let mut r = Vec::with_capacity(n + perms[p].letters.len());
                for &x in w[..at].iter().chain(&perms[p].letters).chain(&w[at..]) {
                    push_reduced(&mut r, x);
                }
                if r.len() <= cap {
                    next.push((r, Move::Insert { at, perm: p }));
                }
            }
        }
        for (r, mv) in next {
            if visited.contains(&r) {
                continue;
            }
            visited.insert(r.clone());
            parent.insert(r.clone(), (w.clone(), mv));
            if r.is_empty() {
                goal = Some(r);
                break 'bfs;
            }
            if visited.len() > limit {
                return Err(limit);
            }
            queue.push_back(r);
        }
    }
    let Some(goal) = goal else { return Ok(None) };

    // Recover the path t = w_0 -> ... -> w_k = ε.
    let mut path = vec![];
    let mut cur = goal;
    while let Some((prev, mv)) = parent.get(&cur) {
        path.push((prev.clone(), *mv));
        cur = prev.clone();
    }
    path.reverse();

    let decode = |xs: &[i32]| -> Word {
        crate::words::reduce(xs.iter().map(|&x| {
            let g = alphabet[(x.unsigned_abs() - 1) as usize].clone();
            Letter::new(g, x < 0)
        }))
    };
    // Invariant: t = g · w_j · g⁻¹ · Q.
    let mut g = Word::identity();
    let mut q: Vec<CertificateFactor> = Vec::new();
    for (w, mv) in path {
        match mv {
            Move::Rotate => {
                g = g.mul(&decode(&w[..1]));
            }
            Move::Insert { at, perm } => {
                let p = &perms[perm];
                let rel = if p.sign > 0 { relators[p.relator].clone() } else { relators[p.relator].inv() };
                let alpha = crate::words::reduce(rel.letters()[..p.offset].iter().cloned());
                let suffix = decode(&w[at..]);
                let u = suffix.inv().mul(&alpha.inv());
                q.insert(0, CertificateFactor { conjugator: g.mul(&u), relator: p.relator, sign: -p.sign });
            }
        }
    }
    let cert = Certificate { factors: q };
    debug_assert_eq!(cert.evaluate(relators).as_ref(), Some(t));
    Ok(Some(cert))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn y2() -> RecursivePresentation {
        RecursivePresentation::parse("Z2", &["y"], &["y^2"]).unwrap()
    }

    #[test]
    fn order_two_relator() {
        let p = y2();
        for s in [0, 1, 5] {
            assert!(p.is_identity_at(&w("y^2"), s).unwrap());
            assert!(p.is_identity_at(&w("y^4"), s).unwrap());
        }
        assert!(!p.is_identity_at(&w("y"), 1000).unwrap());
        assert!(!p.is_identity_at(&w("y^3"), 1000).unwrap());
        let cert = p.identity_certificate(&w("y^-4"), 3).unwrap().unwrap();
        assert_eq!(cert.evaluate(&p.relators(3)), Some(w("y^-4")));
    }

    #[test]
    fn free_group_has_only_the_empty_word() {
        let p = RecursivePresentation::parse("F1", &["x"], &[]).unwrap();
        let approx = p.identity_words(1000, &p.generators(0), 4).unwrap();
        assert_eq!(approx.words.len(), 1);
        assert!(approx.contains(&Word::identity()));
        assert!(!p.equal_at_stage(&w("x"), &Word::identity(), 1000).unwrap());
        assert!(p.equal_at_stage(&w("x^3"), &w("x^3"), 0).unwrap());
    }

    #[test]
    fn free_product_renames_and_interleaves() {
        let x = RecursivePresentation::parse("F", &["x"], &[]).unwrap();
        let fp = free_product(&[x.clone(), y2()]);
        assert_eq!(fp.generators(0), vec![Generator::plain("x"), Generator::plain("y")]);
        assert_eq!(fp.relators(0), vec![w("y^2")]);
        let clash = free_product(&[x.clone(), x.clone()]);
        assert_eq!(clash.generators(0), vec![Generator::plain("x"), Generator::plain("x'")]);
        assert!(clash.relators(5).is_empty());
        assert_eq!(free_product(std::slice::from_ref(&x)).generators(0), x.generators(0));
    }

    #[test]
    fn staged_relators_kill_generator() {
        let base = RecursivePresentation::parse("F2", &["x", "y_0"], &[]).unwrap();
        let p = add_relators_staged(&base, |s| if s >= 1 { vec![w("y_0")] } else { vec![] });
        assert!(!p.is_identity_at(&w("y_0"), 0).unwrap());
        assert!(p.is_identity_at(&w("y_0"), 1).unwrap());
        assert!(p.is_identity_at(&w("x*y_0*x^-1"), 1).unwrap());
        let same = add_relators_staged(&base, |_| vec![]);
        assert_eq!(same.relators(10), base.relators(10));
    }

    #[test]
    fn klein_bottle_words_with_certificates() {
        let p = RecursivePresentation::parse("K", &["a", "b"], &["a^2*b^-2"]).unwrap();
        for t in ["a^2*b^-2", "b^-2*a^2", "a*b^2*a^-1*b^-2", "b*a^2*b^-1*a^-2", "a^4*b^-4"] {
            let cert = p.identity_certificate(&w(t), 8).unwrap().expect(t);
            assert_eq!(cert.evaluate(&p.relators(8)), Some(w(t)));
        }
        assert!(!p.is_identity_at(&w("a*b^-1"), 8).unwrap());
        assert!(!p.is_identity_at(&w("a*b*a^-1*b^-1"), 8).unwrap());
    }

    #[test]
    fn snapshot_round_trip() {
        let p = add_relators_staged(&y2(), |s| if s >= 2 { vec![w("y^3")] } else { vec![] });
        let snap = p.snapshot(3);
        let text = serde_json::to_string(&snap).unwrap();
        let back: PresentationSnapshot = serde_json::from_str(&text).unwrap();
        let q = back.into_presentation().unwrap();
        assert_eq!(q.staged_relators(3), p.staged_relators(3));
        assert!(StagedList::new(vec![], vec![(0, w("z"))]).is_err());
    }
}
