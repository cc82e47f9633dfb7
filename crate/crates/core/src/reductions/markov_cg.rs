//! A computable diagram that is a copy of `G₊` unless a computation halts,
//! in which case it becomes `G₊ × G₋`.
//!
//! Elements are pairs `(u, v)` of witness codes. Before halting each stage
//! names the least unnamed `(u, 0)` and completes one more row of products
//! in the first coordinate. At the halting stage every named `(u, 0)` with
//! `u > 0` receives a partner `(u, 1)`. Afterwards every remaining pair gets
//! a code from a fixed sweep of the grid by shells `max(u, v) = m`, shell `m`
//! being named at stage `h + 1 + m`, and a product is declared at the first
//! stage after `h` at which its three codes are all named. Before halting,
//! codes are handed out in order of first need.

use std::collections::HashMap;
use std::sync::Arc;

use crate::cesets::HaltingScenario;
use crate::diagrams::{Code, ComputableGroup, DiagramError, FiniteGroupTable, ProductDiagram};

/// Stages run before a missing triple is reported as a budget failure.
pub const MARKOV_STAGE_BUDGET: usize = 20_000;

pub struct MarkovDiagram {
    name: String,
    positive: Box<dyn ComputableGroup>,
    negative: Box<dyn ComputableGroup>,
    halting: HaltingScenario,
    pairs: Vec<(u64, u64)>,
    codes: HashMap<(u64, u64), Code>,
    code_stages: Vec<usize>,
    triples: HashMap<(Code, Code), (Code, usize)>,
    // totals[s] = codes named by stage s.
    totals: Vec<u64>,
    next_row: u64,
    sweep: Option<Sweep>,
    budget: usize,
}

/// Canonical coding of the pairs left unnamed at the halting stage.
#[derive(Clone, Debug)]
struct Sweep {
    halt: usize,
    // Codes named by the halting stage.
    base: u64,
    // Order of the positive witness, if finite.
    n: Option<u64>,
    // Sweep ranks of the pairs named by the halting stage, sorted.
    taken: Arc<[u64]>,
}

impl Sweep {
    /// Pairs in shells below `m`.
    fn shell_start(&self, m: u64) -> u64 {
        match self.n {
            Some(n) if m > n => n * n + (m - n) * n,
            _ => m * m,
        }
    }

    fn shell_of_rank(&self, r: u64) -> u64 {
        match self.n {
            Some(n) if r >= n * n => n + (r - n * n) / n,
            _ => r.isqrt(),
        }
    }

    /// Shell `m` lists `(u, m)` for increasing `u`, then `(m, v)` for `v < m`.
    fn rank(&self, (u, v): (u64, u64)) -> u64 {
        let m = u.max(v);
        self.shell_start(m) + if v == m { u } else { m + 1 + v }
    }

    fn unrank(&self, r: u64) -> (u64, u64) {
        let m = self.shell_of_rank(r);
        let off = r - self.shell_start(m);
        let first = self.n.map_or(m + 1, |n| n.min(m + 1));
        if off < first {
            (off, m)
        } else {
            (m, off - first)
        }
    }

    fn taken_below(&self, r: u64) -> u64 {
        self.taken.partition_point(|&t| t < r) as u64
    }

    fn code(&self, pair: (u64, u64)) -> Code {
        let r = self.rank(pair);
        self.base + r - self.taken_below(r)
    }

    fn pair(&self, code: Code) -> (u64, u64) {
        let mut r = code - self.base;
        for &t in self.taken.iter() {
            if t <= r {
                r += 1;
            } else {
                break;
            }
        }
        self.unrank(r)
    }

    fn stage(&self, code: Code) -> usize {
        self.halt + 1 + self.shell_of_rank(self.rank(self.pair(code))) as usize
    }

    fn codes_at(&self, s: usize) -> u64 {
        let end = self.shell_start((s - self.halt) as u64);
        self.base + end - self.taken_below(end)
    }
}

impl std::fmt::Debug for MarkovDiagram {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MarkovDiagram").field("name", &self.name).field("stages", &self.totals.len()).finish()
    }
}

/// `G₋`, replaced by `G₋ × ℤ` when it is finite so that the second
/// coordinate never runs out of fresh elements.
fn augment(mut negative: Box<dyn ComputableGroup>) -> Result<Box<dyn ComputableGroup>, DiagramError> {
    let Some(n) = negative.finite_order() else {
        return Ok(negative);
    };
    let mut table = Vec::with_capacity((n * n) as usize);
    for a in 0..n {
        for b in 0..n {
            table.push(negative.mul(a, b)? as u32);
        }
    }
    let t = FiniteGroupTable::new(negative.name(), n as usize, table)?;
    Ok(Box::new(ProductDiagram::table_times_integers(t)))
}

/// Build the diagram for the witnesses `positive`, `negative` and the halting scenario.
pub fn markov_cg(
    positive: Box<dyn ComputableGroup>,
    negative: Box<dyn ComputableGroup>,
    halting: HaltingScenario,
) -> Result<MarkovDiagram, DiagramError> {
    let negative = augment(negative)?;
    let name = format!("markovCg({}, {})", positive.name(), negative.name());
    let mut d = MarkovDiagram {
        name,
        positive,
        negative,
        halting,
        pairs: Vec::new(),
        codes: HashMap::new(),
        code_stages: Vec::new(),
        triples: HashMap::new(),
        totals: Vec::new(),
        next_row: 0,
        sweep: None,
        budget: MARKOV_STAGE_BUDGET,
    };
    d.name_pair((0, 0), 0);
    d.triples.insert((0, 0), (0, 0));
    d.totals.push(1);
    Ok(d)
}

impl MarkovDiagram {
    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn positive_mut(&mut self) -> &mut dyn ComputableGroup {
        self.positive.as_mut()
    }

    pub fn negative_mut(&mut self) -> &mut dyn ComputableGroup {
        self.negative.as_mut()
    }

    /// The witness codes `(u, v)` behind `code`.
    pub fn pair(&mut self, code: Code) -> Result<(u64, u64), DiagramError> {
        if let Some(sw) = self.swept()? {
            if code >= sw.base {
                return Ok(sw.pair(code));
            }
        }
        self.run_until(|d| (code as usize) < d.pairs.len())?;
        Ok(self.pairs[code as usize])
    }

    /// The code of `(u, v)`, running the construction until it is named.
    pub fn code_of(&mut self, pair: (u64, u64)) -> Result<Code, DiagramError> {
        if let Some(sw) = self.swept()? {
            return Ok(self.codes.get(&pair).copied().unwrap_or_else(|| sw.code(pair)));
        }
        self.run_until(|d| d.codes.contains_key(&pair))?;
        Ok(self.codes[&pair])
    }

    /// The sweep, once the halting stage has run; `None` if it never halts.
    fn swept(&mut self) -> Result<Option<Sweep>, DiagramError> {
        let Some(h) = self.halting.halting_stage() else {
            return Ok(None);
        };
        if self.sweep.is_none() {
            self.run_through(h)?;
            let mut sw = Sweep {
                halt: h,
                base: self.pairs.len() as u64,
                n: self.positive.finite_order(),
                taken: Arc::new([]),
            };
            let mut taken: Vec<u64> = self.pairs.iter().map(|&p| sw.rank(p)).collect();
            taken.sort_unstable();
            sw.taken = taken.into();
            self.sweep = Some(sw);
        }
        Ok(self.sweep.clone())
    }

    fn name_pair(&mut self, pair: (u64, u64), stage: usize) -> Code {
        if let Some(&c) = self.codes.get(&pair) {
            return c;
        }
        let c = self.pairs.len() as Code;
        self.pairs.push(pair);
        self.codes.insert(pair, c);
        self.code_stages.push(stage);
        c
    }

    fn positive_has(&self, u: u64) -> bool {
        self.positive.finite_order().is_none_or(|n| u < n)
    }

    fn product_pair(&mut self, x: (u64, u64), y: (u64, u64)) -> Result<(u64, u64), DiagramError> {
        Ok((self.positive.mul(x.0, y.0)?, self.negative.mul(x.1, y.1)?))
    }

    /// Declare `a·b`, naming the product if needed.
    fn declare(&mut self, a: Code, b: Code, stage: usize) -> Result<(), DiagramError> {
        if self.triples.contains_key(&(a, b)) {
            return Ok(());
        }
        let p = self.product_pair(self.pairs[a as usize], self.pairs[b as usize])?;
        let c = self.name_pair(p, stage);
        self.triples.insert((a, b), (c, stage));
        Ok(())
    }

    fn least_unnamed(&self, mut pair: impl FnMut(u64) -> (u64, u64), exists: impl Fn(u64) -> bool) -> Option<u64> {
        (0..).take_while(|&k| exists(k)).find(|&k| !self.codes.contains_key(&pair(k)))
    }

    fn stage_before_halt(&mut self, s: usize) -> Result<(), DiagramError> {
        let n = self.positive.finite_order();
        let exists = move |u: u64| n.is_none_or(|n| u < n);
        if let Some(i) = self.least_unnamed(|u| (u, 0), exists) {
            self.name_pair((i, 0), s);
        }
        let j = self.next_row;
        if self.positive_has(j) && self.codes.contains_key(&(j, 0)) {
            let cj = self.codes[&(j, 0)];
            for k in 0..=j {
                let ck = self.codes[&(k, 0)];
                self.declare(cj, ck, s)?;
                self.declare(ck, cj, s)?;
            }
            self.next_row += 1;
        }
        Ok(())
    }

    fn halting_stage(&mut self, s: usize) -> Result<(), DiagramError> {
        let mut firsts: Vec<u64> = self.pairs.iter().filter(|p| p.1 == 0 && p.0 > 0).map(|p| p.0).collect();
        firsts.sort_unstable();
        for u in firsts {
            self.name_pair((u, 1), s);
        }
        let n = self.pairs.len() as Code;
        for a in 0..n {
            for b in 0..n {
                if self.triples.contains_key(&(a, b)) {
                    continue;
                }
                let p = self.product_pair(self.pairs[a as usize], self.pairs[b as usize])?;
                if let Some(&c) = self.codes.get(&p) {
                    self.triples.insert((a, b), (c, s));
                }
            }
        }
        Ok(())
    }

    fn run_stage(&mut self) -> Result<(), DiagramError> {
        let s = self.totals.len();
        if s > self.budget {
            return Err(DiagramError::StageBudget { name: self.name.clone(), budget: self.budget });
        }
        match self.halting.halting_stage() {
            Some(h) if s == h => self.halting_stage(s)?,
            Some(h) if s > h => unreachable!("stages after halting are swept"),
            _ => self.stage_before_halt(s)?,
        }
        self.totals.push(self.pairs.len() as u64);
        Ok(())
    }

    fn run_until(&mut self, done: impl Fn(&Self) -> bool) -> Result<(), DiagramError> {
        while !done(self) {
            self.run_stage()?;
        }
        Ok(())
    }

    fn run_through(&mut self, s: usize) -> Result<(), DiagramError> {
        while self.totals.len() <= s {
            self.run_stage()?;
        }
        Ok(())
    }
}

impl ComputableGroup for MarkovDiagram {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn codes_at(&mut self, s: usize) -> Result<u64, DiagramError> {
        if let Some(sw) = self.swept()? {
            if s > sw.halt {
                return Ok(sw.codes_at(s));
            }
        }
        self.run_through(s)?;
        Ok(self.totals[s])
    }

    fn code_stage(&mut self, a: Code) -> Result<usize, DiagramError> {
        if let Some(sw) = self.swept()? {
            if a >= sw.base {
                return Ok(sw.stage(a));
            }
        }
        self.run_until(|d| (a as usize) < d.pairs.len())?;
        Ok(self.code_stages[a as usize])
    }

    fn mul_staged(&mut self, a: Code, b: Code) -> Result<(Code, usize), DiagramError> {
        let Some(sw) = self.swept()? else {
            self.run_until(|d| d.triples.contains_key(&(a, b)))?;
            return Ok(self.triples[&(a, b)]);
        };
        if let Some(&t) = self.triples.get(&(a, b)) {
            return Ok(t);
        }
        let (x, y) = (self.pair(a)?, self.pair(b)?);
        let p = self.product_pair(x, y)?;
        let c = self.code_of(p)?;
        let stage = [sw.halt + 1, self.code_stage(a)?, self.code_stage(b)?, self.code_stage(c)?]
            .into_iter()
            .max()
            .unwrap_or(0);
        Ok((c, stage))
    }

    fn inverse(&mut self, a: Code) -> Result<Code, DiagramError> {
        let (u, v) = self.pair(a)?;
        let p = (self.positive.inverse(u)?, self.negative.inverse(v)?);
        self.code_of(p)
    }

    fn describe(&mut self, a: Code) -> Result<String, DiagramError> {
        let (u, v) = self.pair(a)?;
        Ok(format!("({}, {})", self.positive.describe(u)?, self.negative.describe(v)?))
    }

    fn generators(&mut self) -> Result<Vec<Code>, DiagramError> {
        let mut out = Vec::new();
        for u in self.positive.generators()? {
            out.push(self.code_of((u, 0))?);
        }
        if self.halting.halting_stage().is_some() {
            for v in self.negative.generators()? {
                out.push(self.code_of((0, v))?);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagrams::{testing, triples_below, IntegerFactor};

    fn z() -> Box<dyn ComputableGroup> {
        Box::new(ProductDiagram::integers())
    }

    fn wreath() -> Box<dyn ComputableGroup> {
        Box::new(FiniteGroupTable::wreath_pp(2).unwrap())
    }

    #[test]
    fn stage_zero_is_the_identity() {
        let mut d = markov_cg(z(), wreath(), HaltingScenario::Never).unwrap();
        assert_eq!(d.codes_at(0).unwrap(), 1);
        assert_eq!(triples_below(&mut d, 10, 0).unwrap(), vec![(0, 0, 0)]);
    }

    #[test]
    fn never_is_a_copy_of_the_positive_group() {
        let mut d = markov_cg(z(), wreath(), HaltingScenario::Never).unwrap();
        for s in [5, 20, 60] {
            for (a, b, c) in triples_below(&mut d, 100, s).unwrap() {
                let (u, v) = (d.pair(a).unwrap(), d.pair(b).unwrap());
                let w = d.pair(c).unwrap();
                assert_eq!((u.1, v.1, w.1), (0, 0, 0));
                let sum = IntegerFactor::value(u.0) + IntegerFactor::value(v.0);
                assert_eq!(IntegerFactor::value(w.0), sum);
            }
        }
        testing::check_monotone(&mut d, 30, 10);
    }

    #[test]
    fn halting_gives_the_product() {
        let mut d = markov_cg(z(), wreath(), HaltingScenario::halts_at(5).unwrap()).unwrap();
        testing::check_axioms(&mut d, 25);
        testing::check_monotone(&mut d, 25, 10);
        // Some element has a nontrivial second coordinate and the second
        // coordinate is nonabelian.
        let (mut found, mut nonabelian) = (false, false);
        for a in 0..60 {
            let (_, v) = d.pair(a).unwrap();
            found |= v != 0;
            for b in 0..60 {
                nonabelian |= d.mul(a, b).unwrap() != d.mul(b, a).unwrap();
            }
        }
        assert!(found && nonabelian);
    }

    #[test]
    fn halting_stage_pairs_named_elements() {
        let mut d = markov_cg(z(), wreath(), HaltingScenario::halts_at(3).unwrap()).unwrap();
        let before = d.codes_at(2).unwrap();
        let at = d.codes_at(3).unwrap();
        // Every (u, 0) with u > 0 gets a partner (u, 1).
        assert_eq!(at - before, before - 1);
        for c in before..at {
            assert_eq!(d.pair(c).unwrap().1, 1);
        }
    }

    #[test]
    fn sweep_codes_are_a_staged_bijection() {
        let finite: Box<dyn ComputableGroup> = Box::new(FiniteGroupTable::cyclic(3).unwrap());
        for positive in [z(), finite] {
            let mut d = markov_cg(positive, wreath(), HaltingScenario::halts_at(4).unwrap()).unwrap();
            let mut seen = std::collections::HashSet::new();
            for c in 0..400 {
                let p = d.pair(c).unwrap();
                assert!(seen.insert(p));
                assert_eq!(d.code_of(p).unwrap(), c);
                let s = d.code_stage(c).unwrap();
                assert!(c < d.codes_at(s).unwrap());
                assert!(s == 0 || c >= d.codes_at(s - 1).unwrap());
            }
            testing::check_axioms(&mut d, 30);
        }
    }
}
