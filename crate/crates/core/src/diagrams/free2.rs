//! The free group on `a, b` coded by shortlex rank of reduced words.

use crate::words::{reduce, Generator, Letter, Word};

use super::{Code, ComputableGroup, DiagramError};

/// Letters are `0 = a, 1 = a⁻¹, 2 = b, 3 = b⁻¹`; `x ^ 1` inverts.
/// Stage `s` names the reduced words of length at most `s`.
#[derive(Clone, Debug, Default)]
pub struct Free2Diagram;

/// Longest word whose rank fits in 64 bits.
pub const MAX_FREE2_LENGTH: usize = 39;

impl Free2Diagram {
    pub fn new() -> Self {
        Free2Diagram
    }

    /// Number of reduced words of length `n`.
    fn sphere(n: usize) -> u128 {
        if n == 0 {
            1
        } else {
            4 * 3u128.pow(n as u32 - 1)
        }
    }

    /// Number of reduced words of length below `n`.
    fn ball_below(n: usize) -> u128 {
        (0..n).map(Free2Diagram::sphere).sum()
    }

    pub fn rank(letters: &[u8]) -> Result<Code, DiagramError> {
        let n = letters.len();
        if n > MAX_FREE2_LENGTH {
            return Err(DiagramError::CodeOverflow { name: "free2".into(), stage: n });
        }
        let mut r: u128 = 0;
        for (i, &x) in letters.iter().enumerate() {
            let digit = if i == 0 {
                x as u128
            } else {
                // Skip the letter that would cancel the previous one.
                let forbidden = letters[i - 1] ^ 1;
                (x - (x > forbidden) as u8) as u128
            };
            r = r * if i == 0 { 4 } else { 3 } + digit;
        }
        Ok((Free2Diagram::ball_below(n) + r) as Code)
    }

    pub fn unrank(code: Code) -> Vec<u8> {
        let mut c = code as u128;
        let mut n = 0;
        while c >= Free2Diagram::sphere(n) {
            c -= Free2Diagram::sphere(n);
            n += 1;
        }
        let mut digits = vec![0u8; n];
        for i in (1..n).rev() {
            digits[i] = (c % 3) as u8;
            c /= 3;
        }
        if n > 0 {
            digits[0] = c as u8;
        }
        let mut letters = Vec::with_capacity(n);
        for (i, &d) in digits.iter().enumerate() {
            let x = if i == 0 {
                d
            } else {
                let forbidden = letters[i - 1] ^ 1;
                d + (d >= forbidden) as u8
            };
            letters.push(x);
        }
        letters
    }

    fn reduce(mut letters: Vec<u8>, tail: &[u8]) -> Vec<u8> {
        for &x in tail {
            if letters.last() == Some(&(x ^ 1)) {
                letters.pop();
            } else {
                letters.push(x);
            }
        }
        letters
    }

    pub fn word(code: Code) -> Word {
        letters_to_word(&Free2Diagram::unrank(code))
    }

    /// Code of a word over `a, b`.
    pub fn code_of(w: &Word) -> Result<Code, DiagramError> {
        Free2Diagram::rank(&word_to_letters(w)?)
    }
}

/// Letter codes `0..4` to a word over `a, b`.
pub fn letters_to_word(letters: &[u8]) -> Word {
    let gens = [Generator::plain("a"), Generator::plain("b")];
    reduce(
        letters
            .iter()
            .map(|&x| Letter { generator: gens[(x / 2) as usize].clone(), inverse: x % 2 == 1 }),
    )
}

/// A word over `a, b` to letter codes `0..4`.
pub fn word_to_letters(w: &Word) -> Result<Vec<u8>, DiagramError> {
    w.letters()
        .iter()
        .map(|l| {
            let g = match (l.generator.family.as_str(), l.generator.index.is_empty()) {
                ("a", true) => 0,
                ("b", true) => 2,
                _ => {
                    return Err(DiagramError::InvalidParameter(format!(
                        "generator {} is not a or b",
                        l.generator
                    )))
                }
            };
            Ok(g + l.inverse as u8)
        })
        .collect()
}

impl ComputableGroup for Free2Diagram {
    fn name(&self) -> String {
        "free2".into()
    }
    fn codes_at(&mut self, s: usize) -> Result<u64, DiagramError> {
        let n = Free2Diagram::ball_below(s + 1);
        u64::try_from(n).map_err(|_| DiagramError::CodeOverflow { name: self.name(), stage: s })
    }
    fn code_stage(&mut self, a: Code) -> Result<usize, DiagramError> {
        Ok(Free2Diagram::unrank(a).len())
    }
    fn mul_staged(&mut self, a: Code, b: Code) -> Result<(Code, usize), DiagramError> {
        let (u, v) = (Free2Diagram::unrank(a), Free2Diagram::unrank(b));
        let stage = u.len().max(v.len());
        let w = Free2Diagram::reduce(u, &v);
        let stage = stage.max(w.len());
        Ok((Free2Diagram::rank(&w)?, stage))
    }
    fn inverse(&mut self, a: Code) -> Result<Code, DiagramError> {
        let w: Vec<u8> = Free2Diagram::unrank(a).iter().rev().map(|x| x ^ 1).collect();
        Free2Diagram::rank(&w)
    }
    fn describe(&mut self, a: Code) -> Result<String, DiagramError> {
        Ok(Free2Diagram::word(a).to_string())
    }
    fn generators(&mut self) -> Result<Vec<Code>, DiagramError> {
        Ok(vec![1, 3])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagrams::testing;
    use crate::words::words_up_to;

    #[test]
    fn ranks_follow_shortlex() {
        let gens = [Generator::plain("a"), Generator::plain("b")];
        let words = words_up_to(&gens, 5);
        for (i, w) in words.iter().enumerate() {
            assert_eq!(Free2Diagram::code_of(w).unwrap(), i as Code, "{w}");
            assert_eq!(&Free2Diagram::word(i as Code), w);
        }
    }

    #[test]
    fn group_laws() {
        let mut f = Free2Diagram::new();
        testing::check_axioms(&mut f, 40);
        testing::check_monotone(&mut f, 30, 4);
        let ab = f.mul(1, 3).unwrap();
        let ba = f.mul(3, 1).unwrap();
        assert_ne!(ab, ba);
        assert_eq!(f.describe(ab).unwrap(), "a*b");
        assert_eq!(f.codes_at(2).unwrap(), 17);
    }
}
