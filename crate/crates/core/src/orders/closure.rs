//! Bounded subsemigroup closures and the sign-vector refuter for orderability.
//!
//! Level 1 of a closure holds the generators. Level `k + 1` holds products
//! `x·g` with `x` at level `k` and `g` a generator and, for normal closures,
//! conjugates `c x c⁻¹` by a group letter `c`. Right multiplication by
//! generators together with conjugation by letters reaches every product of
//! conjugates, so the union of all levels is the (normal) subsemigroup.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagrams::{Code, ComputableGroup, DiagramError, GroupElement};
use crate::presentations::{PresentationError, RecursivePresentation};
use crate::words::{Letter, Word};

#[derive(Debug, Error)]
pub enum OrderError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error("closure exceeded {0} elements")]
    Budget(usize),
    #[error("{0}")]
    Invalid(String),
}

/// Group operations a closure needs.
pub trait ClosureOps {
    type Elem: Clone + Eq + Hash;
    fn mul(&mut self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, OrderError>;
    fn inv(&mut self, a: &Self::Elem) -> Result<Self::Elem, OrderError>;
    fn is_identity(&mut self, a: &Self::Elem) -> Result<bool, OrderError>;
    /// Group letters (generators and their inverses) used as conjugators.
    fn letters(&mut self) -> Result<Vec<Self::Elem>, OrderError>;
    fn show(&mut self, a: &Self::Elem) -> String;
}

/// A diagram; equality is exact on codes.
pub struct DiagramOps<'a, G: ComputableGroup + ?Sized>(pub &'a mut G);

impl<G: ComputableGroup + ?Sized> ClosureOps for DiagramOps<'_, G> {
    type Elem = Code;
    fn mul(&mut self, a: &Code, b: &Code) -> Result<Code, OrderError> {
        Ok(self.0.mul(*a, *b)?)
    }
    fn inv(&mut self, a: &Code) -> Result<Code, OrderError> {
        Ok(self.0.inverse(*a)?)
    }
    fn is_identity(&mut self, a: &Code) -> Result<bool, OrderError> {
        Ok(*a == 0)
    }
    fn letters(&mut self) -> Result<Vec<Code>, OrderError> {
        let mut out = Vec::new();
        for g in self.0.generators()? {
            let h = self.0.inverse(g)?;
            out.push(g);
            if h != g {
                out.push(h);
            }
        }
        Ok(out)
    }
    fn show(&mut self, a: &Code) -> String {
        self.0.describe(*a).unwrap_or_else(|_| format!("#{a}"))
    }
}

/// A recursive presentation; words are identified up to free reduction and
/// tested for triviality against the relators of `stage`.
pub struct PresentationOps<'a> {
    pub presentation: &'a RecursivePresentation,
    pub stage: usize,
}

impl ClosureOps for PresentationOps<'_> {
    type Elem = Word;
    fn mul(&mut self, a: &Word, b: &Word) -> Result<Word, OrderError> {
        Ok(a.mul(b))
    }
    fn inv(&mut self, a: &Word) -> Result<Word, OrderError> {
        Ok(a.inv())
    }
    fn is_identity(&mut self, a: &Word) -> Result<bool, OrderError> {
        match self.presentation.is_identity_at(a, self.stage) {
            Err(PresentationError::SearchBudget { .. }) => Ok(false),
            r => Ok(r?),
        }
    }
    fn letters(&mut self) -> Result<Vec<Word>, OrderError> {
        Ok(self
            .presentation
            .generators(self.stage)
            .into_iter()
            .flat_map(|g| [Word::letter(Letter::pos(g.clone())), Word::letter(Letter::neg(g))])
            .collect())
    }
    fn show(&mut self, a: &Word) -> String {
        a.to_string()
    }
}

/// Elements with an exact normal form, such as the `⟨a, b | aⁿ = bⁿ⟩` forms.
pub struct FormOps<E> {
    pub letters: Vec<E>,
    pub show: fn(&E) -> String,
}

impl<E: GroupElement> ClosureOps for FormOps<E> {
    type Elem = E;
    fn mul(&mut self, a: &E, b: &E) -> Result<E, OrderError> {
        Ok(a.mul(b))
    }
    fn inv(&mut self, a: &E) -> Result<E, OrderError> {
        Ok(a.inv())
    }
    fn is_identity(&mut self, a: &E) -> Result<bool, OrderError> {
        Ok(a.is_identity())
    }
    fn letters(&mut self) -> Result<Vec<E>, OrderError> {
        Ok(self.letters.clone())
    }
    fn show(&mut self, a: &E) -> String {
        (self.show)(a)
    }
}

/// A freely reduced word as letter codes `2g + inverse`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct FreeReduced(pub Vec<u8>);

impl FreeReduced {
    pub fn letter(code: u8) -> Self {
        FreeReduced(vec![code])
    }

    /// Letters of a free group of the given rank.
    pub fn letters(rank: u8) -> Vec<Self> {
        (0..2 * rank).map(FreeReduced::letter).collect()
    }
}

impl GroupElement for FreeReduced {
    fn mul(&self, other: &Self) -> Self {
        let mut out = self.0.clone();
        for &l in &other.0 {
            if out.last() == Some(&(l ^ 1)) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        FreeReduced(out)
    }
    fn inv(&self) -> Self {
        FreeReduced(self.0.iter().rev().map(|l| l ^ 1).collect())
    }
    fn is_identity(&self) -> bool {
        self.0.is_empty()
    }
}

/// How an element of a closure was first reached.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Step {
    Generator(usize),
    /// `parent · generator`
    Times(usize, usize),
    /// `letter · parent · letter⁻¹`
    Conjugate(usize, usize),
}

#[derive(Clone, Debug)]
pub struct ClosureResult<E> {
    pub contains_identity: bool,
    pub elements: Vec<E>,
    pub steps: Vec<Step>,
    pub levels: Vec<usize>,
    pub depth: usize,
}

impl<E> ClosureResult<E> {
    /// Index of the first element equal to the identity.
    pub fn identity_index(&self, ops: &mut impl ClosureOps<Elem = E>) -> Option<usize> {
        if !self.contains_identity {
            return None;
        }
        self.elements.iter().position(|e| ops.is_identity(e).unwrap_or(false))
    }

    /// A readable derivation of element `i` from the generators `g1, g2, …`
    /// and the conjugating letters `c1, c2, …`.
    pub fn derivation(&self, i: usize) -> String {
        match self.steps[i] {
            Step::Generator(g) => format!("g{}", g + 1),
            Step::Times(p, g) => format!("{}*g{}", self.derivation(p), g + 1),
            Step::Conjugate(p, c) => format!("c{}({})", c + 1, self.derivation(p)),
        }
    }
}

/// Default cap on the number of elements a closure may hold.
pub const CLOSURE_BUDGET: usize = 4_000_000;

fn closure<O: ClosureOps>(
    ops: &mut O,
    gens: &[O::Elem],
    depth: usize,
    normal: bool,
    budget: usize,
) -> Result<ClosureResult<O::Elem>, OrderError> {
    let letters = if normal { ops.letters()? } else { Vec::new() };
    let letter_invs = letters.iter().map(|c| ops.inv(c)).collect::<Result<Vec<_>, _>>()?;
    let mut res = ClosureResult { contains_identity: false, elements: vec![], steps: vec![], levels: vec![], depth };
    let mut seen: HashMap<O::Elem, usize> = HashMap::new();
    let mut add = |ops: &mut O, res: &mut ClosureResult<O::Elem>, e: O::Elem, step: Step, level: usize| {
        if seen.contains_key(&e) {
            return Ok(false);
        }
        if res.elements.len() >= budget {
            return Err(OrderError::Budget(budget));
        }
        let id = ops.is_identity(&e)?;
        seen.insert(e.clone(), res.elements.len());
        res.elements.push(e);
        res.steps.push(step);
        res.levels.push(level);
        if id {
            res.contains_identity = true;
        }
        Ok::<bool, OrderError>(id)
    };
    if depth == 0 {
        return Ok(res);
    }
    for (i, g) in gens.iter().enumerate() {
        if add(ops, &mut res, g.clone(), Step::Generator(i), 1)? {
            return Ok(res);
        }
    }
    let mut frontier = 0..res.elements.len();
    for level in 2..=depth {
        let start = res.elements.len();
        for p in frontier.clone() {
            let x = res.elements[p].clone();
            for (i, g) in gens.iter().enumerate() {
                let y = ops.mul(&x, g)?;
                if add(ops, &mut res, y, Step::Times(p, i), level)? {
                    return Ok(res);
                }
            }
            for (c, (l, li)) in letters.iter().zip(&letter_invs).enumerate() {
                let lx = ops.mul(l, &x)?;
                let y = ops.mul(&lx, li)?;
                if add(ops, &mut res, y, Step::Conjugate(p, c), level)? {
                    return Ok(res);
                }
            }
        }
        frontier = start..res.elements.len();
        if frontier.is_empty() {
            break;
        }
    }
    Ok(res)
}

/// Products of at most `depth` factors from `gens`. Stops at the first
/// identity found.
pub fn sgr_closure<O: ClosureOps>(
    ops: &mut O,
    gens: &[O::Elem],
    depth: usize,
) -> Result<ClosureResult<O::Elem>, OrderError> {
    closure(ops, gens, depth, false, CLOSURE_BUDGET)
}

/// As [`sgr_closure`], also closed under conjugation by letters, so that
/// conjugators of length below `depth` are reached.
pub fn normal_sgr_closure<O: ClosureOps>(
    ops: &mut O,
    gens: &[O::Elem],
    depth: usize,
) -> Result<ClosureResult<O::Elem>, OrderError> {
    closure(ops, gens, depth, true, CLOSURE_BUDGET)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrderMode {
    Left,
    Bi,
}

impl std::str::FromStr for OrderMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "left" => Ok(OrderMode::Left),
            "bi" => Ok(OrderMode::Bi),
            _ => Err(format!("unknown mode `{s}`, expected left or bi")),
        }
    }
}

/// Evidence that one sign vector closes up to the identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SignCertificate {
    pub signs: Vec<i8>,
    pub level: usize,
    pub derivation: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum OlfVerdict {
    /// Every sign vector reaches the identity; one certificate per vector.
    Refuted { certificates: Vec<SignCertificate> },
    /// Some sign vector avoids the identity through `depth`.
    Survives { depth: usize, signs: Vec<i8> },
}

impl OlfVerdict {
    pub fn is_refuted(&self) -> bool {
        matches!(self, OlfVerdict::Refuted { .. })
    }
}

impl fmt::Display for OlfVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OlfVerdict::Refuted { certificates } => {
                write!(f, "refuted")?;
                for c in certificates {
                    write!(f, "\n  signs {:?}: identity at level {} as {}", c.signs, c.level, c.derivation)?;
                }
                Ok(())
            }
            OlfVerdict::Survives { depth, signs } => write!(f, "survives({depth}) with signs {signs:?}"),
        }
    }
}

/// Try every sign vector on `gs`; refuted iff each one's closure at `depth`
/// contains the identity. Never claims the group is orderable.
pub fn olf_refute<O: ClosureOps>(
    ops: &mut O,
    gs: &[O::Elem],
    depth: usize,
    mode: OrderMode,
) -> Result<OlfVerdict, OrderError> {
    if gs.is_empty() {
        return Err(OrderError::Invalid("empty element tuple".into()));
    }
    if gs.len() > 16 {
        return Err(OrderError::Invalid("at most 16 elements".into()));
    }
    let inverses = gs.iter().map(|g| ops.inv(g)).collect::<Result<Vec<_>, _>>()?;
    let mut certificates = Vec::new();
    for mask in 0u32..(1 << gs.len()) {
        let signs: Vec<i8> = (0..gs.len()).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect();
        let signed: Vec<O::Elem> =
            (0..gs.len()).map(|i| if signs[i] > 0 { gs[i].clone() } else { inverses[i].clone() }).collect();
        let res = closure(ops, &signed, depth, mode == OrderMode::Bi, CLOSURE_BUDGET)?;
        match res.identity_index(ops) {
            Some(i) => certificates.push(SignCertificate { signs, level: res.levels[i], derivation: res.derivation(i) }),
            None => return Ok(OlfVerdict::Survives { depth, signs }),
        }
    }
    Ok(OlfVerdict::Refuted { certificates })
}

/// Search for a tuple of at most `max_size` nonidentity candidates that
/// [`olf_refute`] refutes, trying smaller tuples first.
pub fn find_refuting_tuple<O: ClosureOps>(
    ops: &mut O,
    candidates: &[O::Elem],
    max_size: usize,
    depth: usize,
    mode: OrderMode,
) -> Result<Option<(Vec<usize>, OlfVerdict)>, OrderError> {
    let mut pool = Vec::new();
    for (i, c) in candidates.iter().enumerate() {
        if !ops.is_identity(c)? {
            pool.push(i);
        }
    }
    for size in 1..=max_size {
        let mut idx: Vec<usize> = (0..size).collect();
        if size > pool.len() {
            break;
        }
        loop {
            let tuple: Vec<O::Elem> = idx.iter().map(|&k| candidates[pool[k]].clone()).collect();
            let v = olf_refute(ops, &tuple, depth, mode)?;
            if v.is_refuted() {
                return Ok(Some((idx.iter().map(|&k| pool[k]).collect(), v)));
            }
            // next combination
            let mut k = size;
            while k > 0 && idx[k - 1] == pool.len() - size + k - 1 {
                k -= 1;
            }
            if k == 0 {
                break;
            }
            idx[k - 1] += 1;
            for j in k..size {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    Ok(None)
}
