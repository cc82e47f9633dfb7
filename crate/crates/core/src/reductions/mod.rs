//! Constructions that turn a staged c.e. set (or halting event) into a group.
//!
//! The `*_rp` functions build recursive presentations, the `*_cg` functions
//! build computable atomic diagrams. Each is a pure function of its scenario.

pub mod cg;
pub mod markov_cg;
pub mod rp;
pub mod torsion;

pub use cg::{biorder_cg, divisible_cg, nilpotent_cg, solvable_cg, BiorderDiagram};
pub use markov_cg::{markov_cg, MarkovDiagram};
pub use rp::{biorder_rp, cyclic_rp, finiteness_rp, markov_rp, nilpotent_rp, solvable_rp, word_problem_rp};
pub use torsion::{torsion_cg, TorsionDiagram};

use std::fmt;
use std::str::FromStr;

use crate::diagrams::{ComputableGroup, Free2Diagram, FiniteGroupTable, ProductDiagram, RationalDiagram};
use crate::presentations::{PresentationStream, RecursivePresentation};
use crate::words::{Generator, Word};

/// The `n`-th prime, counting from `nth_prime(1) = 2`.
pub fn nth_prime(n: usize) -> u64 {
    assert!(n >= 1, "primes are indexed from 1");
    let mut count = 0;
    let mut k = 1u64;
    while count < n {
        k += 1;
        if (2..).take_while(|d| d * d <= k).all(|d| !k.is_multiple_of(d)) {
            count += 1;
        }
    }
    k
}

struct PrueferStream {
    p: u64,
}

impl PresentationStream for PrueferStream {
    fn new_generators(&self, s: usize) -> Vec<Generator> {
        vec![Generator::indexed("x", s as u32 + 1)]
    }

    fn new_relators(&self, s: usize) -> Vec<Word> {
        let k = s as u32 + 1;
        let xk = Word::generator(Generator::indexed("x", k)).pow(self.p as i64);
        if k == 1 {
            vec![xk]
        } else {
            vec![xk.mul(&Word::generator(Generator::indexed("x", k - 1)).inv())]
        }
    }

    fn families(&self) -> Vec<String> {
        vec!["x".into()]
    }
}

/// `ℤ(p^∞) = ⟨x₁, x₂, … | x₁ᵖ, x₂ᵖ = x₁, x₃ᵖ = x₂, …⟩`, with `x_k` released at stage `k - 1`.
pub fn pruefer(p: u64) -> RecursivePresentation {
    RecursivePresentation::from_stream(format!("pruefer({p})"), PrueferStream { p })
}

/// Properties with built-in witness pairs: a group with the property and a
/// group that embeds in no group with it. Generators of the second group
/// are indexed from 0 so that its copies read `y_{i,0}, y_{i,1}, …`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MarkovProperty {
    Abelian,
    TorsionFree,
    Trivial,
    Divisible,
    Torsion,
    Orderable,
}

impl MarkovProperty {
    pub const ALL: [MarkovProperty; 6] = [
        MarkovProperty::Abelian,
        MarkovProperty::TorsionFree,
        MarkovProperty::Trivial,
        MarkovProperty::Divisible,
        MarkovProperty::Torsion,
        MarkovProperty::Orderable,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MarkovProperty::Abelian => "abelian",
            MarkovProperty::TorsionFree => "torsion-free",
            MarkovProperty::Trivial => "trivial",
            MarkovProperty::Divisible => "divisible",
            MarkovProperty::Torsion => "torsion",
            MarkovProperty::Orderable => "orderable",
        }
    }

    /// `(positive, negative)` recursive presentations.
    pub fn presentations(self) -> (RecursivePresentation, RecursivePresentation) {
        let p = |name: &str, gens: &[&str], rels: &[&str]| {
            RecursivePresentation::parse(name, gens, rels).expect("built-in presentation")
        };
        match self {
            MarkovProperty::Abelian => (p("Z", &["x"], &[]), p("F2", &["y_0", "y_1"], &[])),
            MarkovProperty::TorsionFree | MarkovProperty::Orderable => {
                (p("Z", &["x"], &[]), p("Z2", &["y_0"], &["y_0^2"]))
            }
            MarkovProperty::Trivial => (p("1", &["x"], &["x"]), p("Z", &["y_0"], &[])),
            MarkovProperty::Divisible => (pruefer(2), p("Z", &["y_0"], &[])),
            MarkovProperty::Torsion => (p("Z2", &["x"], &["x^2"]), p("Z", &["y_0"], &[])),
        }
    }

    /// `(positive, negative)` computable diagrams.
    pub fn diagrams(self) -> (Box<dyn ComputableGroup>, Box<dyn ComputableGroup>) {
        let table = |n| FiniteGroupTable::cyclic(n).expect("small cyclic table");
        let z = || Box::new(ProductDiagram::integers()) as Box<dyn ComputableGroup>;
        match self {
            MarkovProperty::Abelian => (z(), Box::new(Free2Diagram::new())),
            MarkovProperty::TorsionFree | MarkovProperty::Orderable => (z(), Box::new(table(2))),
            MarkovProperty::Trivial => (Box::new(table(1)), z()),
            MarkovProperty::Divisible => (Box::new(RationalDiagram::rationals_full()), z()),
            MarkovProperty::Torsion => (Box::new(table(2)), z()),
        }
    }
}

impl fmt::Display for MarkovProperty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MarkovProperty {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        MarkovProperty::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| format!("unknown property `{s}`"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        let ps: Vec<u64> = (1..=8).map(nth_prime).collect();
        assert_eq!(ps, [2, 3, 5, 7, 11, 13, 17, 19]);
    }

    #[test]
    fn pruefer_relations() {
        let g = pruefer(2);
        let rels: Vec<String> = g.relators(2).iter().map(|r| r.to_string()).collect();
        assert_eq!(rels, ["x_1^2", "x_2^2*x_1^-1", "x_3^2*x_2^-1"]);
        let x3 = Word::generator(Generator::indexed("x", 3));
        assert!(g.is_identity_at(&x3.pow(8), 10).unwrap());
    }

    #[test]
    fn property_names_round_trip() {
        for p in MarkovProperty::ALL {
            assert_eq!(p.name().parse::<MarkovProperty>().unwrap(), p);
        }
    }
}
