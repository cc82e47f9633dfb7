//! Finite groups given by a full multiplication table.

use super::{Code, ComputableGroup, DiagramError};

/// A finite group on codes `0..order` with identity `0`. Every code and
/// triple is present from stage 0.
#[derive(Clone, Debug)]
pub struct FiniteGroupTable {
    name: String,
    order: usize,
    table: Vec<u32>,
    inverses: Vec<u32>,
    generators: Vec<Code>,
}

/// Largest order for which a table is materialized.
pub const MAX_TABLE_ORDER: usize = 4096;

impl FiniteGroupTable {
    /// Validate closure, identity `0`, inverses and associativity.
    pub fn new(name: impl Into<String>, order: usize, table: Vec<u32>) -> Result<Self, DiagramError> {
        let name = name.into();
        if order == 0 || table.len() != order * order {
            return Err(DiagramError::NotAGroup(format!("{name}: table is not {order}x{order}")));
        }
        if let Some(&bad) = table.iter().find(|&&c| c as usize >= order) {
            return Err(DiagramError::NotAGroup(format!("{name}: entry {bad} out of range")));
        }
        let at = |a: usize, b: usize| table[a * order + b] as usize;
        for a in 0..order {
            if at(0, a) != a || at(a, 0) != a {
                return Err(DiagramError::NotAGroup(format!("{name}: 0 is not the identity at {a}")));
            }
        }
        let mut inverses = vec![0u32; order];
        for a in 0..order {
            match (0..order).find(|&b| at(a, b) == 0) {
                Some(b) if at(b, a) == 0 => inverses[a] = b as u32,
                _ => return Err(DiagramError::NotAGroup(format!("{name}: {a} has no inverse"))),
            }
        }
        for a in 0..order {
            for b in 0..order {
                let ab = at(a, b);
                for c in 0..order {
                    if at(ab, c) != at(a, at(b, c)) {
                        return Err(DiagramError::NotAGroup(format!(
                            "{name}: associativity fails at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        let generators = (1..order as Code).collect();
        Ok(FiniteGroupTable { name, order, table, inverses, generators })
    }

    /// Build from a multiplication function on codes.
    pub fn from_fn(
        name: impl Into<String>,
        order: usize,
        mul: impl Fn(usize, usize) -> usize,
    ) -> Result<Self, DiagramError> {
        let name = name.into();
        if order > MAX_TABLE_ORDER {
            return Err(DiagramError::InvalidParameter(format!(
                "{name}: order {order} exceeds the table limit {MAX_TABLE_ORDER}"
            )));
        }
        let mut table = Vec::with_capacity(order * order);
        for a in 0..order {
            for b in 0..order {
                table.push(mul(a, b) as u32);
            }
        }
        FiniteGroupTable::new(name, order, table)
    }

    pub fn with_generators(mut self, generators: Vec<Code>) -> Self {
        self.generators = generators;
        self
    }

    /// `ℤ/n` with code `k` for the residue `k`.
    pub fn cyclic(n: usize) -> Result<Self, DiagramError> {
        if n == 0 {
            return Err(DiagramError::InvalidParameter("cyclic order must be positive".into()));
        }
        Ok(FiniteGroupTable::from_fn(format!("cyclic({n})"), n, |a, b| (a + b) % n)?
            .with_generators(if n > 1 { vec![1] } else { vec![] }))
    }

    /// Dihedral group of order `2n`: code `k + n·f` is `r^k s^f`.
    pub fn dihedral(n: usize) -> Result<Self, DiagramError> {
        if n < 1 {
            return Err(DiagramError::InvalidParameter("dihedral needs n >= 1".into()));
        }
        let mul = |x: usize, y: usize| {
            let (k1, f1) = (x % n, x / n);
            let (k2, f2) = (y % n, y / n);
            let k = if f1 == 0 { (k1 + k2) % n } else { (k1 + n - k2) % n };
            k + n * ((f1 + f2) % 2)
        };
        Ok(FiniteGroupTable::from_fn(format!("dihedral({n})"), 2 * n, mul)?.with_generators(vec![1 % (2 * n) as Code, n as Code]))
    }

    /// `ℤ/p ≀ ℤ/p` with the coding of [`Wreath`].
    pub fn wreath_pp(p: u64) -> Result<Self, DiagramError> {
        let w = Wreath::new(p)?;
        let order = w.order();
        if order > MAX_TABLE_ORDER as u64 {
            return Err(DiagramError::InvalidParameter(format!(
                "wreathPP({p}) has order {order}; use the arithmetic factor instead"
            )));
        }
        Ok(FiniteGroupTable::from_fn(format!("wreathPP({p})"), order as usize, |a, b| {
            w.mul(a as u64, b as u64) as usize
        })?
        .with_generators(w.generators()))
    }

    /// Direct product; code `a + |self|·b`.
    pub fn direct_product(&self, other: &FiniteGroupTable) -> Result<Self, DiagramError> {
        let n = self.order;
        FiniteGroupTable::from_fn(
            format!("{} x {}", self.name, other.name),
            n * other.order,
            |x, y| self.at(x % n, y % n) + n * other.at(x / n, y / n),
        )
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn at(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a] as usize
    }

    fn check(&self, a: Code) -> Result<usize, DiagramError> {
        if (a as usize) < self.order {
            Ok(a as usize)
        } else {
            Err(DiagramError::InvalidParameter(format!("{}: no code {a}", self.name)))
        }
    }
}

impl ComputableGroup for FiniteGroupTable {
    fn name(&self) -> String {
        self.name.clone()
    }
    fn codes_at(&mut self, _s: usize) -> Result<u64, DiagramError> {
        Ok(self.order as u64)
    }
    fn code_stage(&mut self, a: Code) -> Result<usize, DiagramError> {
        self.check(a)?;
        Ok(0)
    }
    fn mul_staged(&mut self, a: Code, b: Code) -> Result<(Code, usize), DiagramError> {
        let (a, b) = (self.check(a)?, self.check(b)?);
        Ok((self.at(a, b) as Code, 0))
    }
    fn inverse(&mut self, a: Code) -> Result<Code, DiagramError> {
        Ok(self.inv(self.check(a)?) as Code)
    }
    fn describe(&mut self, a: Code) -> Result<String, DiagramError> {
        self.check(a)?;
        Ok(format!("{}#{a}", self.name))
    }
    fn generators(&mut self) -> Result<Vec<Code>, DiagramError> {
        Ok(self.generators.clone())
    }
    fn finite_order(&self) -> Option<u64> {
        Some(self.order as u64)
    }
}

/// Arithmetic for `ℤ/p ≀ ℤ/p = (ℤ/p)^p ⋊ ℤ/p`.
///
/// An element `(f, k)` has code `k + p·Σ f_i p^i`, so the shift and the
/// first base generator have small codes. The product is
/// `(f, k)(g, l) = (f + σ^k g, k + l)` with `(σ^k g)_i = g_{i-k}`.
#[derive(Clone, Copy, Debug)]
pub struct Wreath {
    p: u64,
}

impl Wreath {
    pub fn new(p: u64) -> Result<Self, DiagramError> {
        if p < 2 || !(2..p).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d)) {
            return Err(DiagramError::InvalidParameter(format!("wreath parameter {p} is not prime")));
        }
        if (p + 1) as f64 * (p as f64).log2() >= 63.0 {
            return Err(DiagramError::InvalidParameter(format!("wreathPP({p}) does not fit in 64-bit codes")));
        }
        Ok(Wreath { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn order(&self) -> u64 {
        self.p.pow(self.p as u32 + 1)
    }

    pub fn decode(&self, code: u64) -> (Vec<u64>, u64) {
        let p = self.p;
        let k = code % p;
        let mut rest = code / p;
        let f = (0..p)
            .map(|_| {
                let d = rest % p;
                rest /= p;
                d
            })
            .collect();
        (f, k)
    }

    pub fn encode(&self, f: &[u64], k: u64) -> u64 {
        let p = self.p;
        let base = f.iter().rev().fold(0, |acc, &d| acc * p + d);
        k + p * base
    }

    pub fn mul(&self, x: u64, y: u64) -> u64 {
        let p = self.p as usize;
        let (f, k) = self.decode(x);
        let (g, l) = self.decode(y);
        let h: Vec<u64> = (0..p).map(|i| (f[i] + g[(i + p - k as usize) % p]) % self.p).collect();
        self.encode(&h, (k + l) % self.p)
    }

    pub fn inv(&self, x: u64) -> u64 {
        // (f, k)^-1 = (-σ^{-k} f, -k)
        let p = self.p as usize;
        let (f, k) = self.decode(x);
        let h: Vec<u64> = (0..p).map(|i| (self.p - f[(i + k as usize) % p]) % self.p).collect();
        self.encode(&h, (self.p - k) % self.p)
    }

    /// The shift `t` and the base generator `a = δ₀`.
    pub fn generators(&self) -> Vec<u64> {
        vec![1, self.p]
    }
}
