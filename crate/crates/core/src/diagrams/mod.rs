//! Staged atomic diagrams: groups whose elements are natural-number codes.
//!
//! A diagram names an initial segment of codes at every stage and declares
//! multiplication triples that are never revised. Code `0` is the identity.
//! Constructions differ in how they extend a stage; all of them compute
//! products on demand and report the stage at which a triple first appears.

use std::collections::HashMap;

use thiserror::Error;

pub mod ball;
pub mod free2;
pub mod free_solvable;
pub mod one_relator;
pub mod product;
pub mod rationals;
pub mod table;

pub use ball::{Ball, GroupElement};
pub use free2::Free2Diagram;
pub use free_solvable::FreeSolvable;
pub use one_relator::{EqualPowersForm, OneRelatorEqualPowers};
pub use product::{Factor, FreeSolvableFactor, IntegerFactor, ProductDiagram, TableFactor, WreathFactor};
pub use rationals::RationalDiagram;
pub use table::FiniteGroupTable;

pub type Code = u64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("{name}: stage budget {budget} exhausted")]
    StageBudget { name: String, budget: usize },
    #[error("{name}: codes at stage {stage} do not fit in 64 bits")]
    CodeOverflow { name: String, stage: usize },
    #[error("{name}: more than {limit} elements would be materialized")]
    SizeBudget { name: String, limit: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("table is not a group: {0}")]
    NotAGroup(String),
}

/// A computable group given by a staged atomic diagram.
pub trait ComputableGroup {
    fn name(&self) -> String;

    /// Number of codes named by stage `s`, running the construction if needed.
    fn codes_at(&mut self, s: usize) -> Result<u64, DiagramError>;

    /// Stage at which `a` is first named.
    fn code_stage(&mut self, a: Code) -> Result<usize, DiagramError>;

    /// The product `ab` and the stage at which the triple `(a, b, ab)` appears.
    fn mul_staged(&mut self, a: Code, b: Code) -> Result<(Code, usize), DiagramError>;

    fn inverse(&mut self, a: Code) -> Result<Code, DiagramError>;

    /// A readable decoding of `a`.
    fn describe(&mut self, a: Code) -> Result<String, DiagramError>;

    /// Codes of a generating set of the limit group, when one is known.
    fn generators(&mut self) -> Result<Vec<Code>, DiagramError>;

    /// Order of the limit group when it is known to be finite.
    fn finite_order(&self) -> Option<u64> {
        None
    }

    fn mul(&mut self, a: Code, b: Code) -> Result<Code, DiagramError> {
        Ok(self.mul_staged(a, b)?.0)
    }

    /// The product if its triple is present by stage `s`.
    fn product_at(&mut self, a: Code, b: Code, s: usize) -> Result<Option<Code>, DiagramError> {
        let (c, st) = self.mul_staged(a, b)?;
        Ok((st <= s).then_some(c))
    }
}

impl<G: ComputableGroup + ?Sized> ComputableGroup for Box<G> {
    fn name(&self) -> String {
        (**self).name()
    }
    fn codes_at(&mut self, s: usize) -> Result<u64, DiagramError> {
        (**self).codes_at(s)
    }
    fn code_stage(&mut self, a: Code) -> Result<usize, DiagramError> {
        (**self).code_stage(a)
    }
    fn mul_staged(&mut self, a: Code, b: Code) -> Result<(Code, usize), DiagramError> {
        (**self).mul_staged(a, b)
    }
    fn inverse(&mut self, a: Code) -> Result<Code, DiagramError> {
        (**self).inverse(a)
    }
    fn describe(&mut self, a: Code) -> Result<String, DiagramError> {
        (**self).describe(a)
    }
    fn generators(&mut self) -> Result<Vec<Code>, DiagramError> {
        (**self).generators()
    }
    fn finite_order(&self) -> Option<u64> {
        (**self).finite_order()
    }
}

/// `a^n` for `n ≥ 0` by balanced splitting, so no chain of products is
/// longer than `⌈log₂ n⌉`.
pub fn power<G: ComputableGroup + ?Sized>(g: &mut G, a: Code, n: u64) -> Result<Code, DiagramError> {
    let mut memo = HashMap::new();
    power_memo(g, a, n, &mut memo)
}

fn power_memo<G: ComputableGroup + ?Sized>(
    g: &mut G,
    a: Code,
    n: u64,
    memo: &mut HashMap<u64, Code>,
) -> Result<Code, DiagramError> {
    match n {
        0 => return Ok(0),
        1 => return Ok(a),
        _ => {}
    }
    if let Some(&c) = memo.get(&n) {
        return Ok(c);
    }
    let lo = power_memo(g, a, n / 2, memo)?;
    let hi = power_memo(g, a, n - n / 2, memo)?;
    let c = g.mul(hi, lo)?;
    memo.insert(n, c);
    Ok(c)
}

/// Least `k` in `1..=bound` with `a^k = 1`.
pub fn element_order<G: ComputableGroup + ?Sized>(
    g: &mut G,
    a: Code,
    bound: u64,
) -> Result<Option<u64>, DiagramError> {
    let mut memo = HashMap::new();
    for k in 1..=bound {
        if power_memo(g, a, k, &mut memo)? == 0 {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

/// `[a, b] = a⁻¹b⁻¹ab`, evaluated as `(ba)⁻¹(ab)` to keep product chains short.
pub fn commutator<G: ComputableGroup + ?Sized>(g: &mut G, a: Code, b: Code) -> Result<Code, DiagramError> {
    let ab = g.mul(a, b)?;
    let ba = g.mul(b, a)?;
    let ba_inv = g.inverse(ba)?;
    g.mul(ba_inv, ab)
}

/// Inverse by scanning the codes named at each stage from `stage(a)` up to
/// `max_stage`. Used by constructions that have no direct inverse.
pub fn inverse_by_search<G: ComputableGroup + ?Sized>(
    g: &mut G,
    a: Code,
    max_stage: usize,
) -> Result<Option<Code>, DiagramError> {
    let start = g.code_stage(a)?;
    for s in start..=max_stage.max(start) {
        let n = g.codes_at(s)?;
        for c in 0..n {
            if g.product_at(a, c, s)? == Some(0) {
                return Ok(Some(c));
            }
        }
    }
    Ok(None)
}

/// All triples `(a, b, ab)` with `a, b < n` present by stage `s`, in
/// row-major order.
pub fn triples_below<G: ComputableGroup + ?Sized>(
    g: &mut G,
    n: Code,
    s: usize,
) -> Result<Vec<(Code, Code, Code)>, DiagramError> {
    let named = g.codes_at(s)?.min(n);
    let mut out = Vec::new();
    for a in 0..named {
        for b in 0..named {
            if let Some(c) = g.product_at(a, b, s)? {
                out.push((a, b, c));
            }
        }
    }
    Ok(out)
}

/// The stage-0 seeds shared by the constructions over `ℤ`: codes `0, 1, 2`
/// for `0, 1, -1` and their seven triples.
pub fn integer_seed_triples() -> Vec<(Code, Code, Code)> {
    vec![(0, 0, 0), (0, 1, 1), (1, 0, 1), (0, 2, 2), (2, 0, 2), (1, 2, 0), (2, 1, 0)]
}
