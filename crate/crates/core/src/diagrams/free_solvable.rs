//! Normal forms for the free solvable groups `F₂/F₂⁽ᵏ⁾`.
//!
//! `F/N'` embeds into pairs (image in `F/N`, 1-chain on the Cayley graph of
//! `F/N`): a word maps to its endpoint together with the signed count of
//! traversals of every edge. Iterating from `F/F⁽⁰⁾ = 1` gives a canonical,
//! hashable form for every level.

use std::collections::BTreeMap;

use super::ball::GroupElement;

/// Element of `F₂/F₂⁽ᵈᵉᵖᵗʰ⁾` on generators `0 = a`, `1 = b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FreeSolvable {
    depth: u32,
    base: Option<Box<FreeSolvable>>,
    // Edge (vertex, generator) -> signed traversal count; no zero entries.
    chain: BTreeMap<(FreeSolvable, u8), i64>,
}

impl FreeSolvable {
    pub fn identity(depth: u32) -> Self {
        let base = (depth > 0).then(|| Box::new(FreeSolvable::identity(depth - 1)));
        FreeSolvable { depth, base, chain: BTreeMap::new() }
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn is_identity(&self) -> bool {
        self.chain.is_empty() && self.base.as_ref().is_none_or(|b| b.is_identity())
    }

    /// The generator `g ∈ {0, 1}`.
    pub fn generator(depth: u32, g: u8) -> Self {
        if depth == 0 {
            return FreeSolvable::identity(0);
        }
        let mut chain = BTreeMap::new();
        chain.insert((FreeSolvable::identity(depth - 1), g), 1);
        FreeSolvable { depth, base: Some(Box::new(FreeSolvable::generator(depth - 1, g))), chain }
    }

    /// Image of a letter sequence `(generator, inverse?)`.
    pub fn from_letters(depth: u32, letters: impl IntoIterator<Item = (u8, bool)>) -> Self {
        let gens = [FreeSolvable::generator(depth, 0), FreeSolvable::generator(depth, 1)];
        let invs = [gens[0].inv(), gens[1].inv()];
        letters.into_iter().fold(FreeSolvable::identity(depth), |acc, (g, inv)| {
            acc.mul(if inv { &invs[g as usize] } else { &gens[g as usize] })
        })
    }

    fn translate(v: &FreeSolvable, chain: &BTreeMap<(FreeSolvable, u8), i64>, scale: i64) -> Vec<((FreeSolvable, u8), i64)> {
        chain.iter().map(|((u, g), c)| ((v.mul(u), *g), c * scale)).collect()
    }

    pub fn mul(&self, other: &FreeSolvable) -> FreeSolvable {
        debug_assert_eq!(self.depth, other.depth);
        if self.depth == 0 {
            return self.clone();
        }
        let (xb, yb) = (self.base.as_ref().unwrap(), other.base.as_ref().unwrap());
        let mut chain = self.chain.clone();
        for (k, c) in FreeSolvable::translate(xb, &other.chain, 1) {
            *chain.entry(k).or_insert(0) += c;
        }
        chain.retain(|_, c| *c != 0);
        FreeSolvable { depth: self.depth, base: Some(Box::new(xb.mul(yb))), chain }
    }

    pub fn inv(&self) -> FreeSolvable {
        if self.depth == 0 {
            return self.clone();
        }
        let binv = self.base.as_ref().unwrap().inv();
        let chain = FreeSolvable::translate(&binv, &self.chain, -1).into_iter().collect();
        FreeSolvable { depth: self.depth, base: Some(Box::new(binv)), chain }
    }

    /// Number of chain entries summed over all levels; a rough size measure.
    pub fn weight(&self) -> usize {
        self.chain.len() + self.base.as_ref().map_or(0, |b| b.weight())
    }
}

impl GroupElement for FreeSolvable {
    fn mul(&self, other: &Self) -> Self {
        FreeSolvable::mul(self, other)
    }
    fn inv(&self) -> Self {
        FreeSolvable::inv(self)
    }
    fn is_identity(&self) -> bool {
        FreeSolvable::is_identity(self)
    }
}
