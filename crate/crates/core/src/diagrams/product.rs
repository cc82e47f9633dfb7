//! Diagrams for `ℤ × B₁ × B₂ × …` where the blocks open at scheduled stages.
//!
//! Each factor names a growing prefix of its elements by local stage. At
//! stage `s` the universe is the box of all tuples whose entries are named
//! in their factors; a block that opens at `s ≥ 1` has its nonidentity
//! elements (with every other coordinate trivial) named first, then the rest
//! of the new box in mixed-radix order with `ℤ` most significant. Codes are
//! ranked and unranked arithmetically, so nothing is materialized beyond
//! the factors' own element lists.

use super::ball::Ball;
use super::free_solvable::FreeSolvable;
use super::table::{FiniteGroupTable, Wreath};
use super::{Code, ComputableGroup, DiagramError};

/// One coordinate of a product diagram, on element indices.
pub trait Factor {
    fn label(&self) -> String;
    /// Number of elements named by local stage `t`; nondecreasing in `t`.
    fn size_at(&mut self, t: usize) -> Result<u128, DiagramError>;
    /// Local stage at which index `i` is named.
    fn local_stage(&mut self, i: u64) -> Result<usize, DiagramError>;
    fn mul(&mut self, x: u64, y: u64) -> Result<u64, DiagramError>;
    fn inv(&mut self, x: u64) -> Result<u64, DiagramError>;
    fn describe(&mut self, x: u64) -> String;
    fn generators(&self) -> Vec<u64>;
    fn finite_order(&self) -> Option<u64> {
        None
    }
}

/// `ℤ` with zigzag indices `0, 1, -1, 2, -2, …`; `[-(t+1), t+1]` is named at local stage `t`.
#[derive(Clone, Copy, Debug, Default)]
pub struct IntegerFactor;

impl IntegerFactor {
    pub fn index(v: i64) -> u64 {
        if v > 0 {
            2 * v as u64 - 1
        } else {
            2 * v.unsigned_abs()
        }
    }

    pub fn value(i: u64) -> i64 {
        if i % 2 == 1 {
            i.div_ceil(2) as i64
        } else {
            -((i / 2) as i64)
        }
    }
}

impl Factor for IntegerFactor {
    fn label(&self) -> String {
        "Z".into()
    }
    fn size_at(&mut self, t: usize) -> Result<u128, DiagramError> {
        Ok(2 * t as u128 + 3)
    }
    fn local_stage(&mut self, i: u64) -> Result<usize, DiagramError> {
        Ok(if i < 3 { 0 } else { ((i - 3) / 2 + 1) as usize })
    }
    fn mul(&mut self, x: u64, y: u64) -> Result<u64, DiagramError> {
        Ok(IntegerFactor::index(IntegerFactor::value(x) + IntegerFactor::value(y)))
    }
    fn inv(&mut self, x: u64) -> Result<u64, DiagramError> {
        Ok(IntegerFactor::index(-IntegerFactor::value(x)))
    }
    fn describe(&mut self, x: u64) -> String {
        IntegerFactor::value(x).to_string()
    }
    fn generators(&self) -> Vec<u64> {
        vec![1]
    }
}

/// `ℤ/p ≀ ℤ/p`, all elements named when the block opens.
#[derive(Clone, Copy, Debug)]
pub struct WreathFactor(pub Wreath);

impl Factor for WreathFactor {
    fn label(&self) -> String {
        format!("W({})", self.0.p())
    }
    fn size_at(&mut self, _t: usize) -> Result<u128, DiagramError> {
        Ok(self.0.order() as u128)
    }
    fn local_stage(&mut self, _i: u64) -> Result<usize, DiagramError> {
        Ok(0)
    }
    fn mul(&mut self, x: u64, y: u64) -> Result<u64, DiagramError> {
        Ok(self.0.mul(x, y))
    }
    fn inv(&mut self, x: u64) -> Result<u64, DiagramError> {
        Ok(self.0.inv(x))
    }
    fn describe(&mut self, x: u64) -> String {
        let (f, k) = self.0.decode(x);
        format!("({f:?},{k})")
    }
    fn generators(&self) -> Vec<u64> {
        self.0.generators()
    }
    fn finite_order(&self) -> Option<u64> {
        Some(self.0.order())
    }
}

/// A tabled finite group, all elements named when the block opens.
#[derive(Clone, Debug)]
pub struct TableFactor(pub FiniteGroupTable);

impl Factor for TableFactor {
    fn label(&self) -> String {
        self.0.name()
    }
    fn size_at(&mut self, _t: usize) -> Result<u128, DiagramError> {
        Ok(self.0.order() as u128)
    }
    fn local_stage(&mut self, _i: u64) -> Result<usize, DiagramError> {
        Ok(0)
    }
    fn mul(&mut self, x: u64, y: u64) -> Result<u64, DiagramError> {
        Ok(self.0.at(x as usize, y as usize) as u64)
    }
    fn inv(&mut self, x: u64) -> Result<u64, DiagramError> {
        Ok(self.0.inv(x as usize) as u64)
    }
    fn describe(&mut self, x: u64) -> String {
        format!("#{x}")
    }
    fn generators(&self) -> Vec<u64> {
        let mut g = self.0.clone();
        g.generators().unwrap_or_default()
    }
    fn finite_order(&self) -> Option<u64> {
        Some(self.0.order() as u64)
    }
}

/// `F₂/F₂⁽ᵈ⁾` with the ball of radius `t + 1` named at local stage `t`.
#[derive(Clone, Debug)]
pub struct FreeSolvableFactor {
    depth: u32,
    ball: Ball<FreeSolvable>,
}

impl FreeSolvableFactor {
    pub fn new(depth: u32) -> Self {
        let letters = [(0, false), (0, true), (1, false), (1, true)]
            .iter()
            .map(|&l| FreeSolvable::from_letters(depth, [l]))
            .collect();
        let ball = Ball::new(format!("F2/F2^({depth})"), FreeSolvable::identity(depth), letters);
        FreeSolvableFactor { depth, ball }
    }

    pub fn with_limit(mut self, limit: usize) -> Self {
        self.ball = self.ball.with_limit(limit);
        self
    }

    pub fn element(&self, i: u64) -> &FreeSolvable {
        self.ball.element(i)
    }

    pub fn word(&self, i: u64) -> String {
        let w: String = self.ball.word(i).iter().map(|&l| ["a", "A", "b", "B"][l as usize]).collect();
        if w.is_empty() {
            "1".into()
        } else {
            w
        }
    }
}

impl Factor for FreeSolvableFactor {
    fn label(&self) -> String {
        self.ball.label().to_string()
    }
    fn size_at(&mut self, t: usize) -> Result<u128, DiagramError> {
        Ok(self.ball.size(t + 1)? as u128)
    }
    fn local_stage(&mut self, i: u64) -> Result<usize, DiagramError> {
        Ok(self.ball.radius(i)?.saturating_sub(1))
    }
    fn mul(&mut self, x: u64, y: u64) -> Result<u64, DiagramError> {
        self.ball.mul(x, y)
    }
    fn inv(&mut self, x: u64) -> Result<u64, DiagramError> {
        self.ball.inv(x)
    }
    fn describe(&mut self, x: u64) -> String {
        self.word(x)
    }
    fn generators(&self) -> Vec<u64> {
        if self.depth == 0 {
            vec![]
        } else {
            vec![1, 3]
        }
    }
    fn finite_order(&self) -> Option<u64> {
        (self.depth == 0).then_some(1)
    }
}

/// Source of blocks: block `k ≥ 1` and the stage at which it opens.
/// Opening stages must be nondecreasing; at most one block opens per
/// stage after stage 0.
pub type BlockSource = Box<dyn FnMut(usize) -> Option<(usize, Box<dyn Factor>)>>;

pub struct ProductDiagram {
    name: String,
    // Coordinate 0 is ℤ, opened at stage 0.
    digits: Vec<(usize, Box<dyn Factor>)>,
    source: BlockSource,
    pending: Option<(usize, Box<dyn Factor>)>,
    exhausted: bool,
    // totals[s] = |U_s|.
    totals: Vec<u128>,
}

impl std::fmt::Debug for ProductDiagram {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ProductDiagram").field("name", &self.name).finish()
    }
}

impl ProductDiagram {
    pub fn new(name: impl Into<String>, source: BlockSource) -> Self {
        ProductDiagram {
            name: name.into(),
            digits: vec![(0, Box::new(IntegerFactor))],
            source,
            pending: None,
            exhausted: false,
            totals: Vec::new(),
        }
    }

    /// `ℤ` alone: codes `0, 1, 2, 3, 4, …` are `0, 1, -1, 2, -2, …`.
    pub fn integers() -> Self {
        ProductDiagram::new("integers", Box::new(|_| None))
    }

    /// `F × ℤ` for a finite table `F`, both present from stage 0.
    pub fn table_times_integers(table: FiniteGroupTable) -> Self {
        let name = format!("{} x Z", table.name());
        let mut block = Some(TableFactor(table));
        ProductDiagram::new(
            name,
            Box::new(move |k| {
                if k == 1 {
                    block.take().map(|b| (0, Box::new(b) as Box<dyn Factor>))
                } else {
                    None
                }
            }),
        )
    }

    fn next_block(&mut self) -> Option<usize> {
        if self.pending.is_none() && !self.exhausted {
            let k = self.digits.len();
            self.pending = (self.source)(k);
            if self.pending.is_none() {
                self.exhausted = true;
            }
        }
        self.pending.as_ref().map(|(o, _)| *o)
    }

    fn open_through(&mut self, s: usize) {
        while let Some(o) = self.next_block() {
            if o > s {
                break;
            }
            let block = self.pending.take().expect("peeked");
            self.digits.push(block);
        }
    }

    /// Number of coordinates open by stage `s`.
    fn open_count(&mut self, s: usize) -> usize {
        self.open_through(s);
        self.digits.partition_point(|(o, _)| *o <= s)
    }

    fn sizes(&mut self, s: usize) -> Result<Vec<u128>, DiagramError> {
        let m = self.open_count(s);
        let mut out = Vec::with_capacity(m);
        for (o, f) in self.digits[..m].iter_mut() {
            out.push(f.size_at(s - *o)?);
        }
        Ok(out)
    }

    /// Sizes at `s - 1` aligned to the coordinates open at `s`.
    fn prev_sizes(&mut self, s: usize, m: usize) -> Result<Vec<u128>, DiagramError> {
        if s == 0 {
            return Ok(vec![0; m]);
        }
        let mut out = self.sizes(s - 1)?;
        out.resize(m, 1);
        Ok(out)
    }

    fn total(&mut self, s: usize) -> Result<u128, DiagramError> {
        while self.totals.len() <= s {
            let t = self.totals.len();
            let sizes = self.sizes(t)?;
            let total = sizes
                .iter()
                .try_fold(1u128, |acc, &x| acc.checked_mul(x))
                .unwrap_or(u128::MAX);
            self.totals.push(total);
        }
        Ok(self.totals[s])
    }

    fn base(&mut self, s: usize) -> Result<u128, DiagramError> {
        if s == 0 {
            Ok(0)
        } else {
            self.total(s - 1)
        }
    }

    fn overflow(&self, stage: usize) -> DiagramError {
        DiagramError::CodeOverflow { name: self.name.clone(), stage }
    }

    /// The block opened exactly at `s ≥ 1`, as (position, size).
    fn new_block(&mut self, s: usize, sizes: &[u128]) -> Option<(usize, u128)> {
        let m = sizes.len();
        (s >= 1 && m > 1 && self.digits[m - 1].0 == s).then(|| (m - 1, sizes[m - 1]))
    }

    fn stage_of_digits(&mut self, d: &[u64]) -> Result<usize, DiagramError> {
        let mut s = 0;
        for (k, &x) in d.iter().enumerate() {
            if x != 0 {
                let (o, f) = &mut self.digits[k];
                s = s.max(*o + f.local_stage(x)?);
            }
        }
        Ok(s)
    }

    fn encode(&mut self, digits: &[u64]) -> Result<(Code, usize), DiagramError> {
        let mut d = digits.to_vec();
        while d.len() > 1 && *d.last().unwrap() == 0 {
            d.pop();
        }
        let s = self.stage_of_digits(&d)?;
        let sizes = self.sizes(s)?;
        let m = sizes.len();
        d.resize(m, 0);
        let prev = self.prev_sizes(s, m)?;
        let base = self.base(s)?;
        let nb = self.new_block(s, &sizes);
        let code = match nb {
            Some((pos, _)) if d[pos] != 0 && d[..pos].iter().all(|&x| x == 0) => base + d[pos] as u128 - 1,
            _ => {
                let idx = radix(&d, &sizes);
                let p = nb.map_or(0, |(_, n)| n - 1);
                base + p + rest_below(idx, &sizes, &prev, nb)
            }
        };
        let code = u64::try_from(code).map_err(|_| self.overflow(s))?;
        Ok((code, s))
    }

    fn decode(&mut self, code: Code) -> Result<(Vec<u64>, usize), DiagramError> {
        let c = code as u128;
        let mut s = self.totals.partition_point(|&t| t <= c);
        while self.total(s)? <= c {
            s += 1;
        }
        let sizes = self.sizes(s)?;
        let m = sizes.len();
        let prev = self.prev_sizes(s, m)?;
        let off = c - self.base(s)?;
        let nb = self.new_block(s, &sizes);
        let p = nb.map_or(0, |(_, n)| n - 1);
        let mut d = vec![0u64; m];
        if let Some((pos, _)) = nb.filter(|_| off < p) {
            d[pos] = (off + 1) as u64;
            return Ok((d, s));
        }
        let target = off - p;
        // Smallest idx whose rest-count through idx exceeds target.
        let (mut lo, mut hi) = (0u128, self.total(s)?);
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if rest_below(mid + 1, &sizes, &prev, nb) > target {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        let mut x = lo;
        for k in (0..m).rev() {
            d[k] = (x % sizes[k]) as u64;
            x /= sizes[k];
        }
        Ok((d, s))
    }

    /// Describe a tuple coordinatewise.
    pub fn coordinates(&mut self, code: Code) -> Result<Vec<String>, DiagramError> {
        let (d, _) = self.decode(code)?;
        Ok(d.iter().enumerate().map(|(k, &x)| self.digits[k].1.describe(x)).collect())
    }

    /// Code of the element that is `x` in coordinate `k` and trivial elsewhere.
    pub fn embed(&mut self, k: usize, x: u64) -> Result<Code, DiagramError> {
        let mut d = vec![0; k + 1];
        d[k] = x;
        Ok(self.encode(&d)?.0)
    }

    /// Stage at which coordinate `k` opens, opening blocks as needed.
    pub fn block_opening(&mut self, k: usize) -> Option<usize> {
        while self.digits.len() <= k {
            let o = self.next_block()?;
            self.open_through(o);
        }
        Some(self.digits[k].0)
    }
}

fn radix(d: &[u64], sizes: &[u128]) -> u128 {
    d.iter().zip(sizes).fold(0u128, |acc, (&x, &n)| acc * n + x as u128)
}

/// Number of old tuples (entries below `prev`) with radix index below `x`.
fn old_below(x: u128, sizes: &[u128], prev: &[u128]) -> u128 {
    let total: u128 = sizes.iter().product();
    if x >= total {
        return prev.iter().product();
    }
    let m = sizes.len();
    let mut digits = vec![0u128; m];
    let mut y = x;
    for k in (0..m).rev() {
        digits[k] = y % sizes[k];
        y /= sizes[k];
    }
    let mut count = 0u128;
    for k in 0..m {
        let tail: u128 = prev[k + 1..].iter().product();
        count += digits[k].min(prev[k]) * tail;
        if digits[k] >= prev[k] {
            break;
        }
    }
    count
}

/// Number of elements below radix index `x` that are neither old nor
/// pure elements of the newly opened block.
fn rest_below(x: u128, sizes: &[u128], prev: &[u128], nb: Option<(usize, u128)>) -> u128 {
    let pure = nb.map_or(0, |(_, n)| x.saturating_sub(1).min(n - 1));
    x - old_below(x, sizes, prev) - pure
}

impl ComputableGroup for ProductDiagram {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn codes_at(&mut self, s: usize) -> Result<u64, DiagramError> {
        let t = self.total(s)?;
        u64::try_from(t).map_err(|_| self.overflow(s))
    }

    fn code_stage(&mut self, a: Code) -> Result<usize, DiagramError> {
        Ok(self.decode(a)?.1)
    }

    fn mul_staged(&mut self, a: Code, b: Code) -> Result<(Code, usize), DiagramError> {
        let (da, sa) = self.decode(a)?;
        let (db, sb) = self.decode(b)?;
        let m = da.len().max(db.len());
        let mut dc = vec![0u64; m];
        for k in 0..m {
            let x = da.get(k).copied().unwrap_or(0);
            let y = db.get(k).copied().unwrap_or(0);
            dc[k] = self.digits[k].1.mul(x, y)?;
        }
        let (c, sc) = self.encode(&dc)?;
        Ok((c, sa.max(sb).max(sc)))
    }

    fn inverse(&mut self, a: Code) -> Result<Code, DiagramError> {
        let (da, _) = self.decode(a)?;
        let mut d = Vec::with_capacity(da.len());
        for (k, &x) in da.iter().enumerate() {
            d.push(self.digits[k].1.inv(x)?);
        }
        Ok(self.encode(&d)?.0)
    }

    fn describe(&mut self, a: Code) -> Result<String, DiagramError> {
        Ok(format!("({})", self.coordinates(a)?.join(", ")))
    }

    /// Generators of the coordinates opened so far.
    fn generators(&mut self) -> Result<Vec<Code>, DiagramError> {
        let mut out = Vec::new();
        for k in 0..self.digits.len() {
            for g in self.digits[k].1.generators() {
                out.push(self.embed(k, g)?);
            }
        }
        Ok(out)
    }

    fn finite_order(&self) -> Option<u64> {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagrams::{integer_seed_triples, testing, triples_below};

    #[test]
    fn integer_codes() {
        let mut z = ProductDiagram::integers();
        assert_eq!(z.codes_at(0).unwrap(), 3);
        let seeds = triples_below(&mut z, 3, 0).unwrap();
        let mut expected = integer_seed_triples();
        expected.sort();
        let mut got = seeds.clone();
        got.sort();
        assert_eq!(got, expected);
        // 2 + 2 = 4 is code 7.
        assert_eq!(z.mul(3, 3).unwrap(), 7);
        assert_eq!(z.mul_staged(3, 3).unwrap().1, 3);
        testing::check_axioms(&mut z, 20);
        testing::check_monotone(&mut z, 12, 6);
    }

    fn wreath_blocks(primes: Vec<u64>, stages: Vec<usize>) -> ProductDiagram {
        ProductDiagram::new(
            "test",
            Box::new(move |k| {
                let p = *primes.get(k - 1)?;
                Some((stages[k - 1], Box::new(WreathFactor(Wreath::new(p).unwrap())) as Box<dyn Factor>))
            }),
        )
    }

    #[test]
    fn new_block_names_come_first() {
        let mut g = wreath_blocks(vec![2, 3], vec![1, 2]);
        // Stage 0: 0, 1, -1. Stage 1: the seven nonidentity elements of W(2).
        assert_eq!(g.codes_at(0).unwrap(), 3);
        for c in 3..10 {
            let (d, s) = g.decode(c).unwrap();
            assert_eq!(s, 1);
            assert_eq!(d, vec![0, c - 2]);
        }
        assert_eq!(g.codes_at(1).unwrap(), 5 * 8);
        for c in 40..120 {
            let (d, s) = g.decode(c).unwrap();
            assert_eq!(s, 2);
            assert_eq!(d, vec![0, 0, c - 39]);
        }
    }

    #[test]
    fn rank_unrank_round_trip() {
        let mut g = wreath_blocks(vec![2, 3], vec![1, 3]);
        let n = g.codes_at(4).unwrap();
        let mut seen = std::collections::HashSet::new();
        for c in 0..n {
            let (d, s) = g.decode(c).unwrap();
            assert!(seen.insert(d.clone()));
            assert_eq!(g.encode(&d).unwrap(), (c, s));
            assert!(c < g.codes_at(s).unwrap());
            if s > 0 {
                assert!(c >= g.codes_at(s - 1).unwrap());
            }
        }
        testing::check_axioms(&mut g, 30);
        testing::check_monotone(&mut g, 30, 4);
    }

    #[test]
    fn free_solvable_factor() {
        let mut f = FreeSolvableFactor::new(2);
        // Ball of radius 1 in any nontrivial quotient: 1, a, A, b, B.
        assert_eq!(f.size_at(0).unwrap(), 5);
        let ab = f.mul(1, 3).unwrap();
        let ba = f.mul(3, 1).unwrap();
        assert_ne!(ab, ba);
        let mut h1 = FreeSolvableFactor::new(1);
        assert_eq!(h1.mul(1, 3).unwrap(), h1.mul(3, 1).unwrap());
        // Z^2 ball of radius 2 has 13 elements.
        assert_eq!(h1.size_at(1).unwrap(), 13);
        assert_eq!(f.word(ab), "ab");
    }

    #[test]
    fn table_times_integers() {
        let mut g = ProductDiagram::table_times_integers(FiniteGroupTable::wreath_pp(2).unwrap());
        assert_eq!(g.codes_at(0).unwrap(), 24);
        for c in 0..8 {
            assert_eq!(g.decode(c).unwrap().0, vec![0, c]);
        }
        testing::check_axioms(&mut g, 24);
    }
}
