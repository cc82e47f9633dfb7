//! `⟨a, b | aⁿ = bⁿ⟩` via the amalgamated free product `⟨a⟩ ∗_{aⁿ=bⁿ} ⟨b⟩`.
//!
//! `z = aⁿ = bⁿ` is central, and every element is uniquely `z^k` times an
//! alternating product of syllables `a^e`, `b^e` with `1 ≤ e < n`.

use crate::words::Word;

use super::ball::{Ball, GroupElement};
use super::free2::word_to_letters;
use super::{Code, ComputableGroup, DiagramError};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EqualPowersForm {
    n: u32,
    central: i64,
    // (generator 0 = a / 1 = b, exponent in 1..n)
    syllables: Vec<(u8, u32)>,
}

impl EqualPowersForm {
    pub fn identity(n: u32) -> Self {
        EqualPowersForm { n, central: 0, syllables: Vec::new() }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn central(&self) -> i64 {
        self.central
    }

    pub fn syllables(&self) -> &[(u8, u32)] {
        &self.syllables
    }

    /// Right-multiply by `g^{±1}`.
    fn push(&mut self, g: u8, inverse: bool) {
        let n = self.n;
        match self.syllables.last_mut() {
            Some((h, e)) if *h == g => {
                if inverse {
                    *e -= 1;
                    if *e == 0 {
                        self.syllables.pop();
                    }
                } else {
                    *e += 1;
                    if *e == n {
                        self.syllables.pop();
                        self.central += 1;
                    }
                }
            }
            _ => {
                if inverse {
                    // g⁻¹ = z⁻¹ g^{n-1}
                    self.central -= 1;
                    if n > 1 {
                        self.syllables.push((g, n - 1));
                    }
                } else if n == 1 {
                    self.central += 1;
                } else {
                    self.syllables.push((g, 1));
                }
            }
        }
    }

    /// Image of letter codes `0 = a, 1 = a⁻¹, 2 = b, 3 = b⁻¹`.
    pub fn from_letters(n: u32, letters: &[u8]) -> Self {
        let mut x = EqualPowersForm::identity(n);
        for &l in letters {
            x.push(l / 2, l % 2 == 1);
        }
        x
    }

    pub fn from_word(n: u32, w: &Word) -> Result<Self, DiagramError> {
        Ok(EqualPowersForm::from_letters(n, &word_to_letters(w)?))
    }
}

impl GroupElement for EqualPowersForm {
    fn mul(&self, other: &Self) -> Self {
        let mut x = self.clone();
        for &(g, e) in &other.syllables {
            for _ in 0..e {
                x.push(g, false);
            }
        }
        x.central += other.central;
        x
    }

    fn inv(&self) -> Self {
        let mut x = EqualPowersForm::identity(self.n);
        x.central = -self.central;
        for &(g, e) in self.syllables.iter().rev() {
            for _ in 0..e {
                x.push(g, true);
            }
        }
        x
    }

    fn is_identity(&self) -> bool {
        self.central == 0 && self.syllables.is_empty()
    }
}

/// Total diagram of `⟨a, b | aⁿ = bⁿ⟩`: stage `s` names the elements of
/// word length at most `s`, coded in shortlex order of their least word.
#[derive(Clone, Debug)]
pub struct OneRelatorEqualPowers {
    n: u32,
    ball: Ball<EqualPowersForm>,
}

impl OneRelatorEqualPowers {
    pub fn new(n: u32) -> Result<Self, DiagramError> {
        if n < 1 {
            return Err(DiagramError::InvalidParameter("equal-powers exponent must be positive".into()));
        }
        let letters = (0..4).map(|l| EqualPowersForm::from_letters(n, &[l])).collect();
        let ball = Ball::new(format!("oneRelatorEqualPowers({n})"), EqualPowersForm::identity(n), letters);
        Ok(OneRelatorEqualPowers { n, ball })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Whether `w` is trivial in the group.
    pub fn decide(&self, w: &Word) -> Result<bool, DiagramError> {
        Ok(EqualPowersForm::from_word(self.n, w)?.is_identity())
    }

    pub fn form(&self, code: Code) -> &EqualPowersForm {
        self.ball.element(code)
    }

    /// Code of the element represented by `w`.
    pub fn code_of(&mut self, w: &Word) -> Result<Code, DiagramError> {
        let x = EqualPowersForm::from_word(self.n, w)?;
        self.ball.index_of(&x, w.len())
    }

    /// Shortlex-least word for a code.
    pub fn word(&mut self, code: Code) -> Result<Word, DiagramError> {
        self.ball.radius(code)?;
        Ok(super::free2::letters_to_word(&self.ball.word(code)))
    }
}

impl ComputableGroup for OneRelatorEqualPowers {
    fn name(&self) -> String {
        self.ball.label().to_string()
    }
    fn codes_at(&mut self, s: usize) -> Result<u64, DiagramError> {
        self.ball.size(s)
    }
    fn code_stage(&mut self, a: Code) -> Result<usize, DiagramError> {
        self.ball.radius(a)
    }
    fn mul_staged(&mut self, a: Code, b: Code) -> Result<(Code, usize), DiagramError> {
        let c = self.ball.mul(a, b)?;
        let s = self.ball.radius(a)?.max(self.ball.radius(b)?).max(self.ball.radius(c)?);
        Ok((c, s))
    }
    fn inverse(&mut self, a: Code) -> Result<Code, DiagramError> {
        self.ball.inv(a)
    }
    fn describe(&mut self, a: Code) -> Result<String, DiagramError> {
        Ok(self.word(a)?.to_string())
    }
    fn generators(&mut self) -> Result<Vec<Code>, DiagramError> {
        Ok(vec![1, 3])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagrams::{testing, Free2Diagram};

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn klein_relations() {
        let g = OneRelatorEqualPowers::new(2).unwrap();
        assert!(g.decide(&w("a^2*b^-2")).unwrap());
        assert!(!g.decide(&w("a*b*a^-1*b^-1")).unwrap());
        // a commutes with b^2 since b^2 = a^2.
        assert!(g.decide(&w("a*b^2*a^-1*b^-2")).unwrap());
        let t = OneRelatorEqualPowers::new(3).unwrap();
        assert!(t.decide(&w("a^3*b^-3")).unwrap());
        assert!(!t.decide(&w("a^2*b^-2")).unwrap());
    }

    #[test]
    fn diagram_axioms_and_monotonicity() {
        let mut g = OneRelatorEqualPowers::new(2).unwrap();
        testing::check_axioms(&mut g, 30);
        testing::check_monotone(&mut g, 25, 4);
        let a2 = g.code_of(&w("a^2")).unwrap();
        let b2 = g.code_of(&w("b^2")).unwrap();
        assert_eq!(a2, b2);
    }

    #[test]
    fn short_words_match_free_codes() {
        // Below length n nothing collapses, so codes agree with the free group.
        let mut g = OneRelatorEqualPowers::new(4).unwrap();
        let n = Free2Diagram::new().codes_at(3).unwrap();
        assert_eq!(g.codes_at(3).unwrap(), n);
        for c in 0..n {
            assert_eq!(g.word(c).unwrap(), Free2Diagram::word(c));
        }
    }
}
