//! Diagram constructions over the arithmetic engines in [`crate::diagrams`].

use crate::cesets::{HaltingScenario, StagedCeSet};
use crate::diagrams::table::Wreath;
use crate::diagrams::{
    Code, ComputableGroup, DiagramError, Factor, Free2Diagram, FreeSolvableFactor, OneRelatorEqualPowers,
    ProductDiagram, RationalDiagram, WreathFactor,
};

use super::nth_prime;

/// Subgroup of `ℚ` generated by `1` and `1/m` for every `m ≤ |S|`; the
/// fraction `1/m` is added at the stage the `m`-th element is enumerated.
pub fn divisible_cg(set: &StagedCeSet) -> RationalDiagram {
    let set = set.clone();
    RationalDiagram::new("divisibleCg", Box::new(move |k| set.nth(k).map(|(st, _)| (st, k as u64 + 1))))
}

/// A wreath factor whose codes do not fit in 64 bits.
struct UnavailableFactor {
    label: String,
}

impl UnavailableFactor {
    fn error(&self, stage: usize) -> DiagramError {
        DiagramError::CodeOverflow { name: self.label.clone(), stage }
    }
}

impl Factor for UnavailableFactor {
    fn label(&self) -> String {
        self.label.clone()
    }
    fn size_at(&mut self, t: usize) -> Result<u128, DiagramError> {
        Err(self.error(t))
    }
    fn local_stage(&mut self, _i: u64) -> Result<usize, DiagramError> {
        Err(self.error(0))
    }
    fn mul(&mut self, _x: u64, _y: u64) -> Result<u64, DiagramError> {
        Err(self.error(0))
    }
    fn inv(&mut self, _x: u64) -> Result<u64, DiagramError> {
        Err(self.error(0))
    }
    fn describe(&mut self, _x: u64) -> String {
        "?".into()
    }
    fn generators(&self) -> Vec<u64> {
        vec![]
    }
}

fn wreath_factor(p: u64) -> Box<dyn Factor> {
    match Wreath::new(p) {
        Ok(w) => Box::new(WreathFactor(w)),
        Err(_) => Box::new(UnavailableFactor { label: format!("W({p})") }),
    }
}

/// `ℤ × W(1) × ⋯ × W(n)` with `W(k) = ℤ_{p_k} ≀ ℤ_{p_k}` opened, all
/// elements at once, when the `k`-th element is enumerated.
pub fn nilpotent_cg(set: &StagedCeSet) -> ProductDiagram {
    let set = set.clone();
    ProductDiagram::new(
        "nilpotentCg",
        Box::new(move |k| set.nth(k - 1).map(|(st, _)| (st, wreath_factor(nth_prime(k))))),
    )
}

/// `ℤ × H₁ × ⋯ × Hₙ` with `H_k = F₂/F₂⁽ᵏ⁾` opened when the `k`-th element
/// is enumerated; names in `H_k` are released one sphere per stage.
pub fn solvable_cg(set: &StagedCeSet) -> ProductDiagram {
    let set = set.clone();
    ProductDiagram::new(
        "solvableCg",
        Box::new(move |k| {
            set.nth(k - 1).map(|(st, _)| (st, Box::new(FreeSolvableFactor::new(k as u32)) as Box<dyn Factor>))
        }),
    )
}

/// The free group on `a, b` if the computation never halts, otherwise
/// `⟨a, b | aᵗ = bᵗ⟩` for the halting stage `t`. The two diagrams agree on
/// every triple declared before stage `t`.
#[derive(Clone, Debug)]
pub enum BiorderDiagram {
    Free(Free2Diagram),
    EqualPowers(OneRelatorEqualPowers),
}

pub fn biorder_cg(halting: HaltingScenario) -> Result<BiorderDiagram, DiagramError> {
    Ok(match halting.halting_stage() {
        None => BiorderDiagram::Free(Free2Diagram::new()),
        Some(t) => BiorderDiagram::EqualPowers(OneRelatorEqualPowers::new(t as u32)?),
    })
}

impl BiorderDiagram {
    fn inner(&mut self) -> &mut dyn ComputableGroup {
        match self {
            BiorderDiagram::Free(g) => g,
            BiorderDiagram::EqualPowers(g) => g,
        }
    }

    /// Code of a word over `a, b`.
    pub fn code_of(&mut self, w: &crate::words::Word) -> Result<Code, DiagramError> {
        match self {
            BiorderDiagram::Free(_) => Free2Diagram::code_of(w),
            BiorderDiagram::EqualPowers(g) => g.code_of(w),
        }
    }
}

impl ComputableGroup for BiorderDiagram {
    fn name(&self) -> String {
        match self {
            BiorderDiagram::Free(_) => "biorderCg(free2)".into(),
            BiorderDiagram::EqualPowers(g) => format!("biorderCg(t={})", g.n()),
        }
    }
    fn codes_at(&mut self, s: usize) -> Result<u64, DiagramError> {
        self.inner().codes_at(s)
    }
    fn code_stage(&mut self, a: Code) -> Result<usize, DiagramError> {
        self.inner().code_stage(a)
    }
    fn mul_staged(&mut self, a: Code, b: Code) -> Result<(Code, usize), DiagramError> {
        self.inner().mul_staged(a, b)
    }
    fn inverse(&mut self, a: Code) -> Result<Code, DiagramError> {
        self.inner().inverse(a)
    }
    fn describe(&mut self, a: Code) -> Result<String, DiagramError> {
        self.inner().describe(a)
    }
    fn generators(&mut self) -> Result<Vec<Code>, DiagramError> {
        self.inner().generators()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagrams::rationals::Rational;
    use crate::diagrams::{element_order, integer_seed_triples, testing, triples_below};
    use crate::words::Word;

    #[test]
    fn divisible_seeds_and_fractions() {
        let mut d = divisible_cg(&StagedCeSet::all());
        let mut got = triples_below(&mut d, 3, 0).unwrap();
        got.sort();
        let mut want = integer_seed_triples();
        want.sort();
        assert_eq!(got, want);
        assert_eq!(d.mul(0, 0).unwrap(), 0);
        let half = d.code_of(Rational::new(1, 2)).unwrap().0;
        assert_eq!(d.mul(half, half).unwrap(), 1);
        let mut f = divisible_cg(&StagedCeSet::finite([9, 12]));
        assert!(f.code_of(Rational::new(1, 2)).is_ok());
        assert!(f.code_of(Rational::new(1, 3)).is_err());
    }

    #[test]
    fn nilpotent_blocks() {
        let mut e = nilpotent_cg(&StagedCeSet::empty());
        assert_eq!(e.codes_at(4).unwrap(), 11);
        let mut d = nilpotent_cg(&StagedCeSet::finite([3]));
        // W(1) opens at stage 1 with its 7 nonidentity elements first.
        assert_eq!(d.codes_at(0).unwrap(), 3);
        assert_eq!(d.codes_at(1).unwrap(), 5 * 8);
        for c in 3..10 {
            assert_eq!(d.code_stage(c).unwrap(), 1);
            assert!(element_order(&mut d, c, 4).unwrap().is_some());
        }
        testing::check_axioms(&mut d, 30);
    }

    #[test]
    fn large_primes_are_reported_not_fabricated() {
        let mut d = nilpotent_cg(&StagedCeSet::all());
        assert!(d.codes_at(3).is_ok());
        assert!(matches!(d.codes_at(7), Err(DiagramError::CodeOverflow { .. })));
    }

    #[test]
    fn solvable_blocks() {
        let mut d = solvable_cg(&StagedCeSet::finite([0, 1]));
        testing::check_axioms(&mut d, 25);
        testing::check_monotone(&mut d, 25, 3);
    }

    #[test]
    fn biorder_switches_at_the_halting_stage() {
        let mut f = biorder_cg(HaltingScenario::Never).unwrap();
        let mut h = biorder_cg(HaltingScenario::halts_at(2).unwrap()).unwrap();
        let w = Word::parse("a^2*b^-2").unwrap();
        assert_eq!(h.code_of(&w).unwrap(), 0);
        assert_ne!(f.code_of(&w).unwrap(), 0);
        // Triples before stage 2 agree.
        assert_eq!(triples_below(&mut f, 5, 1).unwrap(), triples_below(&mut h, 5, 1).unwrap());
        // Torsion-freeness on the normal forms.
        let eq = OneRelatorEqualPowers::new(2).unwrap();
        for c in 1..50 {
            let w = Free2Diagram::word(c);
            for k in 1..=20 {
                assert!(!w.pow(k).is_identity());
                assert!(!eq.decide(&w.pow(k)).unwrap(), "{w}^{k}");
            }
            assert_eq!(element_order(&mut h, c, 6).unwrap(), None);
        }
    }
}
