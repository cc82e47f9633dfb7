//! Bounded evaluation of group-theoretic properties.
//!
//! Diagrams decide equality exactly, so a checker on a diagram can refute a
//! universal statement with a concrete counterexample. Presentations only
//! semi-decide equality through the stage-`s` identity search: they can
//! witness equalities but never certify an inequality, so their universal
//! checks end in `witnessed` (up to the bound) or `unknown`, never `refuted`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagrams::{element_order, power, Code, ComputableGroup, DiagramError, FiniteGroupTable};
use crate::presentations::{PresentationError, RecursivePresentation};
use crate::words::{words_up_to, Generator, Word};

#[derive(Debug, Error)]
pub enum CheckError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error("candidate decider diverged on `{word}` within {steps} steps")]
    Divergence { word: String, steps: u64 },
    #[error("{0}")]
    Invalid(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Witnessed,
    Refuted,
    Unknown,
}

/// Replay data for a verdict. Which fields are set depends on the checker.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evidence {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub codes: Vec<Code>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub words: Vec<Word>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub exponents: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stage: Option<usize>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub evidence: Option<Evidence>,
    pub bound: u64,
}

impl Verdict {
    pub fn witnessed(evidence: Evidence, bound: u64) -> Self {
        Verdict { status: Status::Witnessed, evidence: Some(evidence), bound }
    }
    pub fn refuted(evidence: Evidence, bound: u64) -> Self {
        Verdict { status: Status::Refuted, evidence: Some(evidence), bound }
    }
    pub fn unknown(bound: u64) -> Self {
        Verdict { status: Status::Unknown, evidence: None, bound }
    }
}

fn note(s: impl Into<String>) -> Evidence {
    Evidence { note: s.into(), ..Evidence::default() }
}

/// Codes `0..bound`, clipped to the order of a finite group. The flag says
/// whether the range covers the whole group.
fn code_range<G: ComputableGroup + ?Sized>(g: &G, bound: u64) -> (u64, bool) {
    match g.finite_order() {
        Some(n) if n <= bound => (n, true),
        _ => (bound, false),
    }
}

/// `t ∈ 1_{G,s}`, treating an exhausted search budget as "not found".
fn trivial_at(p: &RecursivePresentation, t: &Word, s: usize) -> Result<bool, CheckError> {
    match p.is_identity_at(t, s) {
        Ok(b) => Ok(b),
        Err(PresentationError::SearchBudget { .. }) => Ok(false),
        Err(e) => Err(e.into()),
    }
}

/// Pairs `(i, j)` in `0..n` ordered by `max(i, j)`, then lexicographically.
fn pairs_by_max(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(|m| (0..m).map(move |i| (i, m)).chain((0..=m).map(move |j| (m, j))))
}

// ----- abelian -----------------------------------------------------------------

/// Exact on diagrams: every pair of codes below `bound` commutes.
pub fn check_abelian<G: ComputableGroup + ?Sized>(g: &mut G, bound: u64) -> Result<Verdict, CheckError> {
    let (n, exhaustive) = code_range(g, bound);
    for (a, b) in pairs_by_max(n as usize) {
        let (a, b) = (a as Code, b as Code);
        if a >= b {
            continue;
        }
        let ab = g.mul(a, b)?;
        let ba = g.mul(b, a)?;
        if ab != ba {
            return Ok(Verdict::refuted(
                Evidence { codes: vec![a, b, ab, ba], note: "ab != ba".into(), ..Evidence::default() },
                bound,
            ));
        }
    }
    let scope = if exhaustive { "all elements" } else { "codes below the bound" };
    Ok(Verdict::witnessed(note(format!("{scope} commute")), bound))
}

/// Every pair of generators released by stage `s` commutes at stage `s`.
pub fn check_abelian_presentation(p: &RecursivePresentation, s: usize) -> Result<Verdict, CheckError> {
    let gens = p.generators(s);
    let mut words = Vec::new();
    for (i, x) in gens.iter().enumerate() {
        for y in &gens[i + 1..] {
            let c = crate::words::commutator(&Word::generator(x.clone()), &Word::generator(y.clone()));
            if !trivial_at(p, &c, s)? {
                return Ok(Verdict::unknown(s as u64));
            }
            words.push(c);
        }
    }
    Ok(Verdict::witnessed(
        Evidence { words, stage: Some(s), note: "generator commutators trivial".into(), ..Evidence::default() },
        s as u64,
    ))
}

// ----- torsion -----------------------------------------------------------------

/// A nonidentity code below `bound` with order at most `bound`.
pub fn find_torsion<G: ComputableGroup + ?Sized>(g: &mut G, bound: u64) -> Result<Verdict, CheckError> {
    let (n, _) = code_range(g, bound);
    for a in 1..n {
        if let Some(k) = element_order(g, a, bound)? {
            return Ok(Verdict::witnessed(
                Evidence { codes: vec![a], exponents: vec![k as i64], ..Evidence::default() },
                bound,
            ));
        }
    }
    Ok(Verdict::unknown(bound))
}

/// A word of length `≤ max_len`, not trivial at stage `s`, whose `k`-th
/// power is trivial at stage `s` for some `2 ≤ k ≤ max_exp`. Exponents are
/// the outer loop so short orders are found first.
pub fn find_torsion_presentation(
    p: &RecursivePresentation,
    s: usize,
    max_len: usize,
    max_exp: u64,
) -> Result<Verdict, CheckError> {
    let words = words_up_to(&p.generators(s), max_len);
    let mut nontrivial: HashMap<usize, bool> = HashMap::new();
    for k in 2..=max_exp {
        for (i, w) in words.iter().enumerate().skip(1) {
            let pw = w.pow(k as i64);
            if !trivial_at(p, &pw, s)? {
                continue;
            }
            let nt = match nontrivial.get(&i) {
                Some(&b) => b,
                None => {
                    let b = !trivial_at(p, w, s)?;
                    nontrivial.insert(i, b);
                    b
                }
            };
            if nt {
                return Ok(Verdict::witnessed(
                    Evidence {
                        words: vec![w.clone()],
                        exponents: vec![k as i64],
                        stage: Some(s),
                        note: "power trivial, element not yet trivial".into(),
                        ..Evidence::default()
                    },
                    s as u64,
                ));
            }
        }
    }
    Ok(Verdict::unknown(s as u64))
}

/// Every code below `code_bound` has order at most `order_bound`.
pub fn check_torsion_up_to<G: ComputableGroup + ?Sized>(
    g: &mut G,
    code_bound: u64,
    order_bound: u64,
) -> Result<Verdict, CheckError> {
    let (n, _) = code_range(g, code_bound);
    let mut orders = Vec::new();
    for a in 0..n {
        match element_order(g, a, order_bound)? {
            Some(k) => orders.push(k as i64),
            None => return Ok(Verdict::unknown(code_bound)),
        }
    }
    Ok(Verdict::witnessed(
        Evidence { codes: (0..n).collect(), exponents: orders, ..Evidence::default() },
        code_bound,
    ))
}

// ----- triviality ----------------------------------------------------------------

/// Every generator released by stage `s` with all indices `≤ max_index`
/// is trivial at stage `s`.
pub fn check_trivial_up_to(p: &RecursivePresentation, s: usize, max_index: u32) -> Result<Verdict, CheckError> {
    let mut words = Vec::new();
    for g in p.generators(s).into_iter().filter(|g| g.index.iter().all(|&i| i <= max_index)) {
        let w = Word::generator(g);
        if !trivial_at(p, &w, s)? {
            return Ok(Verdict::unknown(s as u64));
        }
        words.push(w);
    }
    Ok(Verdict::witnessed(Evidence { words, stage: Some(s), ..Evidence::default() }, s as u64))
}

// ----- divisibility --------------------------------------------------------------

/// For each code `g < code_max` and `2 ≤ n ≤ n_max`, search the codes below
/// `search` for `h` with `hⁿ = g`. The first pair without a root refutes
/// divisibility up to the search bound.
pub fn check_divisible_up_to<G: ComputableGroup + ?Sized>(
    g: &mut G,
    n_max: u64,
    code_max: u64,
    search: u64,
) -> Result<Verdict, CheckError> {
    let (limit, _) = code_range(g, search);
    let mut codes = Vec::new();
    let mut exponents = Vec::new();
    // powers[n] maps hⁿ to the least such h, filled lazily.
    let mut powers: HashMap<u64, HashMap<Code, Code>> = HashMap::new();
    let mut filled: HashMap<u64, Code> = HashMap::new();
    for target in 1..code_max {
        for n in 2..=n_max {
            let table = powers.entry(n).or_default();
            let next = filled.entry(n).or_insert(0);
            while !table.contains_key(&target) && *next < limit {
                let h = *next;
                let hn = power(g, h, n)?;
                table.entry(hn).or_insert(h);
                *next += 1;
            }
            match table.get(&target) {
                Some(&h) => {
                    codes.push(h);
                    exponents.push(n as i64);
                }
                None => {
                    return Ok(Verdict::refuted(
                        Evidence {
                            codes: vec![target],
                            exponents: vec![n as i64],
                            note: format!("no n-th root among codes below {limit}"),
                            ..Evidence::default()
                        },
                        search,
                    ));
                }
            }
        }
    }
    Ok(Verdict::witnessed(
        Evidence { codes, exponents, note: "roots listed per (target, n)".into(), ..Evidence::default() },
        search,
    ))
}

// ----- series on finite tables -----------------------------------------------------

fn subgroup_closure(t: &FiniteGroupTable, gens: &[usize]) -> Vec<usize> {
    let mut inside = vec![false; t.order()];
    inside[0] = true;
    let mut elems = vec![0];
    let mut i = 0;
    while i < elems.len() {
        let x = elems[i];
        for &g in gens {
            let y = t.at(x, g);
            if !inside[y] {
                inside[y] = true;
                elems.push(y);
            }
        }
        i += 1;
    }
    elems.sort_unstable();
    elems
}

fn table_commutator(t: &FiniteGroupTable, x: usize, y: usize) -> usize {
    t.at(t.at(t.inv(x), t.inv(y)), t.at(x, y))
}

fn commutator_subgroup(t: &FiniteGroupTable, a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut gens: Vec<usize> = a.iter().flat_map(|&x| b.iter().map(move |&y| (x, y))).map(|(x, y)| table_commutator(t, x, y)).collect();
    gens.sort_unstable();
    gens.dedup();
    subgroup_closure(t, &gens)
}

/// Length of the lower central series, or `None` if it stalls above `{1}`.
pub fn nilpotency_class(t: &FiniteGroupTable) -> Option<usize> {
    let all: Vec<usize> = (0..t.order()).collect();
    let mut cur = all.clone();
    let mut class = 0;
    while cur.len() > 1 {
        let next = commutator_subgroup(t, &cur, &all);
        if next.len() == cur.len() {
            return None;
        }
        cur = next;
        class += 1;
    }
    Some(class)
}

/// Length of the derived series, or `None` if it stalls above `{1}`.
pub fn solvability_degree(t: &FiniteGroupTable) -> Option<usize> {
    let mut cur: Vec<usize> = (0..t.order()).collect();
    let mut degree = 0;
    while cur.len() > 1 {
        let next = commutator_subgroup(t, &cur, &cur);
        if next.len() == cur.len() {
            return None;
        }
        cur = next;
        degree += 1;
    }
    Some(degree)
}

// ----- commutator identities on samples --------------------------------------------

/// Largest number of distinct commutator values kept per level.
pub const COMMUTATOR_VALUE_BUDGET: usize = 200_000;

/// Distinct values of a commutator word over tuples from a sample, each
/// with the first tuple producing it.
struct Values {
    codes: Vec<Code>,
    tuples: Vec<Vec<Code>>,
    index: HashMap<Code, usize>,
}

impl Values {
    fn new() -> Self {
        Values { codes: vec![], tuples: vec![], index: HashMap::new() }
    }
    fn push(&mut self, c: Code, tuple: Vec<Code>) {
        if !self.index.contains_key(&c) {
            self.index.insert(c, self.codes.len());
            self.codes.push(c);
            self.tuples.push(tuple);
        }
    }
}

fn dia_commutator<G: ComputableGroup + ?Sized>(g: &mut G, a: Code, b: Code) -> Result<Code, DiagramError> {
    crate::diagrams::commutator(g, a, b)
}

type Pairs = Box<dyn Iterator<Item = (usize, usize)>>;

/// Values of one commutator level, or the first nonvanishing tuple.
enum Level {
    Values(Values),
    Refuted(Vec<Code>, Code),
}

/// Evaluates `[level[i], pick(j)]` over `pairs`. On the last level the first
/// nonvanishing value ends the search. Commutators the diagram cannot name
/// (overflow or size budget) are dropped and `lost` is set.
fn next_level<G: ComputableGroup + ?Sized>(
    g: &mut G,
    level: &Values,
    pairs: impl Iterator<Item = (usize, usize)>,
    right: &dyn Fn(&Values, usize) -> (Code, Vec<Code>),
    last: bool,
    lost: &mut bool,
) -> Result<Option<Level>, CheckError> {
    let mut next = Values::new();
    for (i, j) in pairs {
        let (b, tail) = right(level, j);
        let c = match dia_commutator(g, level.codes[i], b) {
            Ok(c) => c,
            Err(DiagramError::CodeOverflow { .. } | DiagramError::SizeBudget { .. }) => {
                *lost = true;
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        let mut t = level.tuples[i].clone();
        t.extend(tail);
        if last && c != 0 {
            return Ok(Some(Level::Refuted(t, c)));
        }
        next.push(c, t);
        if next.codes.len() > COMMUTATOR_VALUE_BUDGET {
            return Ok(None);
        }
    }
    Ok(Some(Level::Values(next)))
}

fn commutator_search<G: ComputableGroup + ?Sized>(
    g: &mut G,
    levels: usize,
    sample: u64,
    pairs: &dyn Fn(usize, usize) -> Pairs,
    right: &dyn Fn(&Values, usize) -> (Code, Vec<Code>),
) -> Result<Verdict, CheckError> {
    let (m, exhaustive) = code_range(g, sample);
    let mut level = Values::new();
    for a in 0..m {
        level.push(a, vec![a]);
    }
    let mut lost = false;
    for k in 0..levels {
        let ps = pairs(level.codes.len(), m as usize);
        match next_level(g, &level, ps, right, k + 1 == levels, &mut lost)? {
            None => return Ok(Verdict::unknown(sample)),
            Some(Level::Refuted(codes, c)) => {
                return Ok(Verdict::refuted(
                    Evidence { codes, note: format!("commutator evaluates to code {c}"), ..Evidence::default() },
                    sample,
                ))
            }
            Some(Level::Values(v)) => level = v,
        }
    }
    if lost {
        return Ok(Verdict::unknown(sample));
    }
    let scope = if exhaustive { "all tuples" } else { "tuples below the sample bound" };
    Ok(Verdict::witnessed(note(format!("vanishes on {scope}")), sample))
}

/// All left-normed commutators `[g₁, …, gₙ]` with `gᵢ` below `sample`
/// vanish. Values are deduplicated level by level, which covers every tuple.
pub fn check_nilpotent_up_to<G: ComputableGroup + ?Sized>(
    g: &mut G,
    n: usize,
    sample: u64,
) -> Result<Verdict, CheckError> {
    if n < 2 {
        return Err(CheckError::Invalid("commutators need at least two entries".into()));
    }
    // Pairs (i, j) with i < len and j < m, ordered by max(i, j).
    let pairs = |len: usize, m: usize| -> Pairs {
        Box::new((0..len.max(m)).flat_map(move |k| {
            let column = (0..k.min(len)).filter(move |_| k < m).map(move |i| (i, k));
            let row = (0..=k.min(m.saturating_sub(1))).filter(move |&j| k < len && j < m).map(move |j| (k, j));
            column.chain(row)
        }))
    };
    commutator_search(g, n - 1, sample, &pairs, &|_, j| (j as Code, vec![j as Code]))
}

/// All derived commutators `δₙ` over elements below `sample` vanish.
pub fn check_solvable_up_to<G: ComputableGroup + ?Sized>(
    g: &mut G,
    n: usize,
    sample: u64,
) -> Result<Verdict, CheckError> {
    if n < 1 {
        return Err(CheckError::Invalid("derived depth must be positive".into()));
    }
    let pairs = |len: usize, _| -> Pairs { Box::new(pairs_by_max(len)) };
    commutator_search(g, n, sample, &pairs, &|level, j| (level.codes[j], level.tuples[j].clone()))
}

// ----- finiteness ------------------------------------------------------------------

/// Split the words of length `≤ max_len` over `gens` into classes by
/// stage-`s` equality; witnessed when at most `n` classes appear.
pub fn check_finite_up_to(
    p: &RecursivePresentation,
    n: usize,
    s: usize,
    gens: &[Generator],
    max_len: usize,
) -> Result<Verdict, CheckError> {
    let mut reps: Vec<Word> = Vec::new();
    for w in words_up_to(gens, max_len) {
        let mut found = false;
        for r in &reps {
            if trivial_at(p, &w.mul(&r.inv()), s)? {
                found = true;
                break;
            }
        }
        if !found {
            reps.push(w);
            if reps.len() > n {
                return Ok(Verdict::unknown(s as u64));
            }
        }
    }
    Ok(Verdict::witnessed(
        Evidence { words: reps, stage: Some(s), note: "class representatives".into(), ..Evidence::default() },
        s as u64,
    ))
}

// ----- word problem audit ----------------------------------------------------------

/// Compare a candidate decider with the stage-`s` identity search on every
/// nonempty word of length `≤ max_len` over `gens`. A word the search proves trivial
/// but the candidate rejects is a definite error; a word the candidate
/// accepts but the search does not find is a discrepancy at this stage.
/// The candidate returns `None` when it runs out of steps.
pub fn audit_word_problem_decider(
    p: &RecursivePresentation,
    gens: &[Generator],
    candidate: &mut dyn FnMut(&Word) -> Option<bool>,
    s: usize,
    max_len: usize,
    steps: u64,
) -> Result<Verdict, CheckError> {
    let mut checked = 0i64;
    let mut trivial = 0i64;
    for w in words_up_to(gens, max_len).into_iter().skip(1) {
        let said = candidate(&w).ok_or_else(|| CheckError::Divergence { word: w.to_string(), steps })?;
        let found = trivial_at(p, &w, s)?;
        if said != found {
            let what = if found { "trivial at the stage, candidate says no" } else { "candidate says trivial, not found at the stage" };
            return Ok(Verdict::refuted(
                Evidence { words: vec![w], stage: Some(s), note: what.into(), ..Evidence::default() },
                s as u64,
            ));
        }
        checked += 1;
        trivial += found as i64;
    }
    Ok(Verdict::witnessed(
        Evidence {
            exponents: vec![checked, trivial],
            stage: Some(s),
            note: "words checked, words trivial".into(),
            ..Evidence::default()
        },
        s as u64,
    ))
}

// ----- cyclicity -------------------------------------------------------------------

/// A code below `bound` whose powers `wᵏ`, `|k| ≤ bound`, cover every code
/// below `bound`. A noncommuting pair refutes.
pub fn check_cyclic_up_to<G: ComputableGroup + ?Sized>(g: &mut G, bound: u64) -> Result<Verdict, CheckError> {
    let ab = check_abelian(g, bound)?;
    if ab.status == Status::Refuted {
        return Ok(ab);
    }
    let (n, _) = code_range(g, bound);
    for w in 0..n {
        let winv = g.inverse(w)?;
        let mut hit: HashMap<Code, i64> = HashMap::from([(0, 0)]);
        let (mut up, mut down) = (0, 0);
        for k in 1..=bound as i64 {
            up = g.mul(up, w)?;
            down = g.mul(down, winv)?;
            hit.entry(up).or_insert(k);
            hit.entry(down).or_insert(-k);
        }
        if (0..n).all(|c| hit.contains_key(&c)) {
            return Ok(Verdict::witnessed(
                Evidence {
                    codes: vec![w],
                    exponents: (0..n).map(|c| hit[&c]).collect(),
                    note: "exponent for each code below the bound".into(),
                    ..Evidence::default()
                },
                bound,
            ));
        }
    }
    Ok(Verdict::unknown(bound))
}

/// A word of length `≤ max_len` such that each generator released by stage
/// `s` equals `wᵏ` at stage `s` for some `|k| ≤ max_exp`.
pub fn check_cyclic_presentation(
    p: &RecursivePresentation,
    s: usize,
    gens: &[Generator],
    max_len: usize,
    max_exp: i64,
) -> Result<Verdict, CheckError> {
    // Generators already trivial need no cover.
    let mut targets = Vec::new();
    for g in gens {
        let w = Word::generator(g.clone());
        if !trivial_at(p, &w, s)? {
            targets.push(w);
        }
    }
    'cand: for w in words_up_to(gens, max_len) {
        let mut exps = Vec::new();
        for t in &targets {
            let mut k_found = None;
            for k in (0..=max_exp).flat_map(|k| [k, -k]).skip(1) {
                if trivial_at(p, &w.pow(k).mul(&t.inv()), s)? {
                    k_found = Some(k);
                    break;
                }
            }
            match k_found {
                Some(k) => exps.push(k),
                None => continue 'cand,
            }
        }
        return Ok(Verdict::witnessed(
            Evidence {
                words: std::iter::once(w).chain(targets).collect(),
                exponents: exps,
                stage: Some(s),
                note: "generator, then each nontrivial generator with its exponent".into(),
                ..Evidence::default()
            },
            s as u64,
        ));
    }
    Ok(Verdict::unknown(s as u64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagrams::{Free2Diagram, ProductDiagram};

    #[test]
    fn pair_order() {
        let v: Vec<_> = pairs_by_max(3).collect();
        assert_eq!(v, [(0, 0), (0, 1), (1, 0), (1, 1), (0, 2), (1, 2), (2, 0), (2, 1), (2, 2)]);
    }

    #[test]
    fn abelian_checks() {
        let mut w = FiniteGroupTable::wreath_pp(2).unwrap();
        let v = check_abelian(&mut w, 100).unwrap();
        assert_eq!(v.status, Status::Refuted);
        let c = &v.evidence.unwrap().codes;
        assert_ne!(w.at(c[0] as usize, c[1] as usize), w.at(c[1] as usize, c[0] as usize));
        assert_eq!(check_abelian(&mut FiniteGroupTable::cyclic(6).unwrap(), 100).unwrap().status, Status::Witnessed);
        let f = check_abelian(&mut Free2Diagram::new(), 5).unwrap();
        assert_eq!(f.status, Status::Refuted);
    }

    #[test]
    fn torsion_checks() {
        let mut z = ProductDiagram::integers();
        assert_eq!(find_torsion(&mut z, 30).unwrap().status, Status::Unknown);
        let mut z6 = FiniteGroupTable::cyclic(6).unwrap();
        let v = find_torsion(&mut z6, 10).unwrap();
        assert_eq!(v.evidence.unwrap().exponents, [6]);
        assert_eq!(check_torsion_up_to(&mut z6, 100, 6).unwrap().status, Status::Witnessed);
        assert_eq!(check_torsion_up_to(&mut z, 10, 50).unwrap().status, Status::Unknown);
    }

    #[test]
    fn trivial_checks() {
        let free = RecursivePresentation::parse("Z", &["x"], &[]).unwrap();
        assert_eq!(check_trivial_up_to(&free, 20, 0).unwrap().status, Status::Unknown);
        let one = RecursivePresentation::parse("1", &["x"], &["x"]).unwrap();
        assert_eq!(check_trivial_up_to(&one, 1, 0).unwrap().status, Status::Witnessed);
    }

    #[test]
    fn series_on_tables() {
        assert_eq!(nilpotency_class(&FiniteGroupTable::wreath_pp(2).unwrap()), Some(2));
        assert_eq!(nilpotency_class(&FiniteGroupTable::cyclic(5).unwrap()), Some(1));
        assert_eq!(nilpotency_class(&FiniteGroupTable::cyclic(1).unwrap()), Some(0));
        assert_eq!(nilpotency_class(&FiniteGroupTable::dihedral(3).unwrap()), None);
        assert_eq!(solvability_degree(&FiniteGroupTable::dihedral(3).unwrap()), Some(2));
        assert_eq!(solvability_degree(&FiniteGroupTable::wreath_pp(2).unwrap()), Some(2));
    }

    #[test]
    fn commutator_checks_agree_with_series() {
        let mut d = FiniteGroupTable::dihedral(4).unwrap();
        assert_eq!(nilpotency_class(&d), Some(2));
        assert_eq!(check_nilpotent_up_to(&mut d, 2, 100).unwrap().status, Status::Refuted);
        assert_eq!(check_nilpotent_up_to(&mut d, 3, 100).unwrap().status, Status::Witnessed);
        let mut s3 = FiniteGroupTable::dihedral(3).unwrap();
        assert_eq!(check_solvable_up_to(&mut s3, 1, 100).unwrap().status, Status::Refuted);
        assert_eq!(check_solvable_up_to(&mut s3, 2, 100).unwrap().status, Status::Witnessed);
        let mut f = Free2Diagram::new();
        let v = check_nilpotent_up_to(&mut f, 2, 5).unwrap();
        assert_eq!(v.status, Status::Refuted);
    }

    #[test]
    fn finite_checks() {
        let one = RecursivePresentation::parse("1", &["x"], &["x"]).unwrap();
        let v = check_finite_up_to(&one, 1, 1, &one.generators(1), 3).unwrap();
        assert_eq!(v.status, Status::Witnessed);
        assert_eq!(v.evidence.unwrap().words.len(), 1);
        let free = RecursivePresentation::parse("Z", &["x"], &[]).unwrap();
        assert_eq!(check_finite_up_to(&free, 3, 5, &free.generators(5), 4).unwrap().status, Status::Unknown);
    }

    #[test]
    fn word_problem_audits() {
        let free = RecursivePresentation::parse("Z", &["x"], &[]).unwrap();
        let gens = free.generators(0);
        let v = audit_word_problem_decider(&free, &gens, &mut |w| Some(w.is_identity()), 5, 6, 0).unwrap();
        assert_eq!(v.status, Status::Witnessed);
        let one = RecursivePresentation::parse("1", &["x"], &["x"]).unwrap();
        let v = audit_word_problem_decider(&one, &gens, &mut |_| Some(false), 5, 3, 0).unwrap();
        assert_eq!(v.status, Status::Refuted);
        assert_eq!(v.evidence.unwrap().words[0].to_string(), "x");
        let e = audit_word_problem_decider(&free, &gens, &mut |_| None, 5, 3, 10);
        assert!(matches!(e, Err(CheckError::Divergence { .. })));
    }

    #[test]
    fn cyclic_checks() {
        let v = check_cyclic_up_to(&mut FiniteGroupTable::cyclic(6).unwrap(), 10).unwrap();
        assert_eq!(v.status, Status::Witnessed);
        let w = check_cyclic_up_to(&mut FiniteGroupTable::wreath_pp(2).unwrap(), 10).unwrap();
        assert_eq!(w.status, Status::Refuted);
        let z = check_cyclic_up_to(&mut ProductDiagram::integers(), 20).unwrap();
        assert_eq!(z.status, Status::Witnessed);
    }

    #[test]
    fn verdict_json() {
        let v = Verdict::unknown(7);
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"{"status":"unknown","bound":7}"#);
        let w = Verdict::witnessed(note("x"), 3);
        let back: Verdict = serde_json::from_str(&serde_json::to_string(&w).unwrap()).unwrap();
        assert_eq!(back, w);
    }
}
