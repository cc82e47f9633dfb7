//! Subgroups of `ℚ` generated by `1` and scheduled unit fractions `1/m`.
//!
//! With `L_s` the lcm of the denominators added by stage `s`, stage `s`
//! names `{ j/L_s : |j/L_s| ≤ s + 1 }`. A fraction `1/m` added at stage `s`
//! takes the first new code of that stage; the other new elements follow
//! in zigzag order of the numerator `j`. Ranking is arithmetic.

use super::{Code, ComputableGroup, DiagramError};

/// Source of unit fractions: the `k`-th (from 0) added fraction as
/// `(stage, m)`. Stages are nondecreasing and at least 1.
pub type FractionSource = Box<dyn FnMut(usize) -> Option<(usize, u64)>>;

pub struct RationalDiagram {
    name: String,
    source: FractionSource,
    adds: Vec<(usize, u64)>,
    exhausted: bool,
}

impl std::fmt::Debug for RationalDiagram {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RationalDiagram").field("name", &self.name).field("adds", &self.adds).finish()
    }
}

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u128, b: u128) -> Option<u128> {
    (a / gcd(a, b)).checked_mul(b)
}

/// A rational in lowest terms with positive denominator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Rational {
    pub num: i128,
    pub den: u128,
}

impl Rational {
    pub fn new(num: i128, den: u128) -> Rational {
        let g = gcd(num.unsigned_abs(), den).max(1);
        Rational { num: num / g as i128, den: den / g }
    }

    pub fn add(self, o: Rational) -> Rational {
        let d = lcm(self.den, o.den).expect("denominator overflow");
        Rational::new(self.num * (d / self.den) as i128 + o.num * (d / o.den) as i128, d)
    }

    pub fn neg(self) -> Rational {
        Rational { num: -self.num, den: self.den }
    }
}

impl std::fmt::Display for Rational {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

fn zigzag(j: i128) -> u128 {
    if j > 0 {
        2 * j as u128 - 1
    } else {
        2 * j.unsigned_abs()
    }
}

fn unzigzag(z: u128) -> i128 {
    if z % 2 == 1 {
        z.div_ceil(2) as i128
    } else {
        -((z / 2) as i128)
    }
}

struct Layer {
    base: u128,
    l: u128,
    // Ratio L_s / L_{s-1}; 0 at stage 0 where nothing is old.
    ratio: u128,
    old_bound: u128,
    bound: u128,
    special: Option<i128>,
}

impl Layer {
    fn size(&self) -> u128 {
        2 * self.bound + 1
    }

    /// Old elements with zigzag index below `x`.
    fn old_below(&self, x: u128) -> u128 {
        if self.ratio == 0 || x == 0 {
            return 0;
        }
        let (pos, neg) = if x % 2 == 1 { (x / 2, x / 2) } else { (x / 2, x / 2 - 1) };
        1 + pos.min(self.old_bound) / self.ratio + neg.min(self.old_bound) / self.ratio
    }

    fn rest_below(&self, x: u128) -> u128 {
        let special = self.special.map_or(0, |j| (zigzag(j) < x) as u128);
        x - self.old_below(x) - special
    }

    fn is_old(&self, j: i128) -> bool {
        self.ratio != 0 && j.unsigned_abs() <= self.old_bound && j.unsigned_abs().is_multiple_of(self.ratio)
    }
}

impl RationalDiagram {
    pub fn new(name: impl Into<String>, source: FractionSource) -> Self {
        RationalDiagram { name: name.into(), source, adds: Vec::new(), exhausted: false }
    }

    /// All of `ℚ`: `1/s` is added at stage `s`.
    pub fn rationals_full() -> Self {
        RationalDiagram::new("rationalsFull", Box::new(|k| Some((k + 1, k as u64 + 1))))
    }

    fn fetch_through(&mut self, s: usize) {
        while !self.exhausted && self.adds.last().is_none_or(|&(st, _)| st <= s) {
            match (self.source)(self.adds.len()) {
                Some(a) => self.adds.push(a),
                None => self.exhausted = true,
            }
        }
    }

    fn overflow(&self, stage: usize) -> DiagramError {
        DiagramError::CodeOverflow { name: self.name.clone(), stage }
    }

    fn lcm_at(&mut self, s: usize) -> Result<u128, DiagramError> {
        self.fetch_through(s);
        let mut l = 1u128;
        for &(st, m) in &self.adds {
            if st > s {
                break;
            }
            l = lcm(l, m as u128).ok_or_else(|| self.overflow(s))?;
        }
        Ok(l)
    }

    fn special_at(&mut self, s: usize) -> Option<u64> {
        self.fetch_through(s);
        self.adds.iter().find(|&&(st, _)| st == s).map(|&(_, m)| m)
    }

    fn total(&mut self, s: usize) -> Result<u128, DiagramError> {
        let l = self.lcm_at(s)?;
        (s as u128 + 1)
            .checked_mul(l)
            .and_then(|b| b.checked_mul(2))
            .map(|x| x + 1)
            .ok_or_else(|| self.overflow(s))
    }

    fn layer(&mut self, s: usize) -> Result<Layer, DiagramError> {
        let l = self.lcm_at(s)?;
        let bound = (s as u128 + 1).checked_mul(l).ok_or_else(|| self.overflow(s))?;
        let (base, ratio, old_bound) = if s == 0 {
            (0, 0, 0)
        } else {
            let lp = self.lcm_at(s - 1)?;
            (self.total(s - 1)?, l / lp, s as u128 * l)
        };
        let mut layer = Layer { base, l, ratio, old_bound, bound, special: None };
        if let Some(m) = self.special_at(s) {
            let j = (l / m as u128) as i128;
            if !layer.is_old(j) {
                layer.special = Some(j);
            }
        }
        Ok(layer)
    }

    /// Stage at which `q` is named, or `None` if it is not in the group.
    fn stage_of(&mut self, q: Rational) -> Result<Option<usize>, DiagramError> {
        let mag = q.num.unsigned_abs().div_ceil(q.den);
        let s0 = mag.saturating_sub(1) as usize;
        let (mut l, mut t, mut k) = (1u128, 0usize, 0usize);
        while l % q.den != 0 {
            if k >= self.adds.len() {
                if self.exhausted {
                    return Ok(None);
                }
                match (self.source)(self.adds.len()) {
                    Some(a) => self.adds.push(a),
                    None => {
                        self.exhausted = true;
                        return Ok(None);
                    }
                }
            }
            let (st, m) = self.adds[k];
            l = lcm(l, m as u128).ok_or_else(|| self.overflow(st))?;
            t = st;
            k += 1;
        }
        Ok(Some(s0.max(t)))
    }

    pub fn code_of(&mut self, q: Rational) -> Result<(Code, usize), DiagramError> {
        let s = self.stage_of(q)?.ok_or_else(|| {
            DiagramError::InvalidParameter(format!("{}: {q} is not in the group", self.name))
        })?;
        let layer = self.layer(s)?;
        let j = q.num * (layer.l / q.den) as i128;
        let code = if layer.special == Some(j) {
            layer.base
        } else {
            let p = layer.special.is_some() as u128;
            layer.base + p + layer.rest_below(zigzag(j))
        };
        Ok((u64::try_from(code).map_err(|_| self.overflow(s))?, s))
    }

    pub fn value(&mut self, code: Code) -> Result<(Rational, usize), DiagramError> {
        let c = code as u128;
        let mut s = 0;
        while self.total(s)? <= c {
            s += 1;
        }
        let layer = self.layer(s)?;
        let off = c - layer.base;
        let p = layer.special.is_some() as u128;
        let j = match layer.special {
            Some(j) if off == 0 => j,
            _ => {
                let target = off - p;
                let (mut lo, mut hi) = (0u128, layer.size());
                while lo < hi {
                    let mid = lo + (hi - lo) / 2;
                    if layer.rest_below(mid + 1) > target {
                        hi = mid;
                    } else {
                        lo = mid + 1;
                    }
                }
                unzigzag(lo)
            }
        };
        Ok((Rational::new(j, layer.l), s))
    }

    /// Codes of `1` and of the fractions added by stage `s`.
    pub fn generators_through(&mut self, s: usize) -> Result<Vec<Code>, DiagramError> {
        self.fetch_through(s);
        let ms: Vec<u64> = self.adds.iter().filter(|&&(st, _)| st <= s).map(|&(_, m)| m).collect();
        let mut out = vec![1];
        for m in ms {
            let c = self.code_of(Rational::new(1, m as u128))?.0;
            if !out.contains(&c) {
                out.push(c);
            }
        }
        Ok(out)
    }
}

impl ComputableGroup for RationalDiagram {
    fn name(&self) -> String {
        self.name.clone()
    }
    fn codes_at(&mut self, s: usize) -> Result<u64, DiagramError> {
        let t = self.total(s)?;
        u64::try_from(t).map_err(|_| self.overflow(s))
    }
    fn code_stage(&mut self, a: Code) -> Result<usize, DiagramError> {
        Ok(self.value(a)?.1)
    }
    fn mul_staged(&mut self, a: Code, b: Code) -> Result<(Code, usize), DiagramError> {
        let (x, sa) = self.value(a)?;
        let (y, sb) = self.value(b)?;
        let (c, sc) = self.code_of(x.add(y))?;
        Ok((c, sa.max(sb).max(sc)))
    }
    fn inverse(&mut self, a: Code) -> Result<Code, DiagramError> {
        let (x, _) = self.value(a)?;
        Ok(self.code_of(x.neg())?.0)
    }
    fn describe(&mut self, a: Code) -> Result<String, DiagramError> {
        Ok(self.value(a)?.0.to_string())
    }
    fn generators(&mut self) -> Result<Vec<Code>, DiagramError> {
        let last = self.adds.last().map_or(0, |&(s, _)| s);
        self.generators_through(last)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagrams::{integer_seed_triples, testing, triples_below};

    fn halves() -> RationalDiagram {
        RationalDiagram::new("halves", Box::new(|k| (k == 0).then_some((2, 2))))
    }

    #[test]
    fn stage_zero_seeds() {
        let mut q = RationalDiagram::rationals_full();
        assert_eq!(q.codes_at(0).unwrap(), 3);
        let mut got = triples_below(&mut q, 3, 0).unwrap();
        got.sort();
        let mut want = integer_seed_triples();
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn unit_fraction_takes_first_new_code() {
        let mut q = halves();
        let before = q.codes_at(1).unwrap();
        assert_eq!(q.code_of(Rational::new(1, 2)).unwrap(), (before, 2));
        let mut full = RationalDiagram::rationals_full();
        // 1/6 is already named at stage 3, so only prime powers are new.
        for m in [2u128, 3, 4, 5, 7, 8, 9] {
            let (c, s) = full.code_of(Rational::new(1, m)).unwrap();
            assert_eq!(s, m as usize);
            assert_eq!(c, full.codes_at(m as usize - 1).unwrap());
        }
    }

    #[test]
    fn round_trip_and_axioms() {
        let mut q = RationalDiagram::rationals_full();
        let n = q.codes_at(4).unwrap();
        for c in 0..n {
            let (x, s) = q.value(c).unwrap();
            assert_eq!(q.code_of(x).unwrap(), (c, s), "{x}");
        }
        testing::check_axioms(&mut q, 40);
        testing::check_monotone(&mut q, 40, 5);
        let mut h = halves();
        testing::check_axioms(&mut h, 30);
    }

    #[test]
    fn missing_denominators_are_rejected() {
        let mut h = halves();
        assert!(h.code_of(Rational::new(1, 3)).is_err());
    }
}
