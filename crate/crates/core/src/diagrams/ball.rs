//! Breadth-first enumeration of a finitely generated group by word length.
//!
//! Elements are listed by radius; within a radius, by the shortlex-least word
//! representing them, with letters ordered `a, a⁻¹, b, b⁻¹, …`. Processing
//! the previous sphere in list order and extending by letters in that order
//! yields exactly this order, because the shortlex-least word for an element
//! has the shortlex-least word of its prefix element as a prefix.

use std::collections::HashMap;
use std::hash::Hash;

use super::DiagramError;

/// A group element with exact equality.
pub trait GroupElement: Clone + Eq + Hash {
    fn mul(&self, other: &Self) -> Self;
    fn inv(&self) -> Self;
    fn is_identity(&self) -> bool;
}

#[derive(Clone, Debug)]
pub struct Ball<E> {
    label: String,
    letters: Vec<E>,
    elems: Vec<E>,
    parent: Vec<(usize, u8)>,
    index: HashMap<E, u64>,
    // radius_end[r] = number of elements of radius at most r.
    radius_end: Vec<usize>,
    limit: usize,
}

impl<E: GroupElement> Ball<E> {
    pub const DEFAULT_LIMIT: usize = 2_000_000;

    /// `letters` are the generators and their inverses in letter order.
    pub fn new(label: impl Into<String>, identity: E, letters: Vec<E>) -> Self {
        let mut index = HashMap::new();
        index.insert(identity.clone(), 0);
        Ball {
            label: label.into(),
            letters,
            elems: vec![identity],
            parent: vec![(0, 0)],
            index,
            radius_end: vec![1],
            limit: Ball::<E>::DEFAULT_LIMIT,
        }
    }

    pub fn with_limit(mut self, limit: usize) -> Self {
        self.limit = limit;
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn element(&self, i: u64) -> &E {
        &self.elems[i as usize]
    }

    /// Radius enumerated so far.
    pub fn radius_done(&self) -> usize {
        self.radius_end.len() - 1
    }

    fn grow(&mut self) -> Result<(), DiagramError> {
        let r = self.radius_end.len();
        let start = if r >= 2 { self.radius_end[r - 2] } else { 0 };
        let end = self.radius_end[r - 1];
        for i in start..end {
            for li in 0..self.letters.len() {
                let y = self.elems[i].mul(&self.letters[li]);
                if !self.index.contains_key(&y) {
                    if self.elems.len() >= self.limit {
                        return Err(DiagramError::SizeBudget { name: self.label.clone(), limit: self.limit });
                    }
                    self.index.insert(y.clone(), self.elems.len() as u64);
                    self.elems.push(y);
                    self.parent.push((i, li as u8));
                }
            }
        }
        self.radius_end.push(self.elems.len());
        Ok(())
    }

    pub fn ensure_radius(&mut self, r: usize) -> Result<(), DiagramError> {
        while self.radius_end.len() <= r {
            self.grow()?;
        }
        Ok(())
    }

    /// Number of elements of radius at most `r`.
    pub fn size(&mut self, r: usize) -> Result<u64, DiagramError> {
        self.ensure_radius(r)?;
        Ok(self.radius_end[r] as u64)
    }

    /// Ensure index `i` exists and return its radius.
    pub fn radius(&mut self, i: u64) -> Result<usize, DiagramError> {
        while self.elems.len() as u64 <= i {
            let before = self.elems.len();
            self.grow()?;
            if self.elems.len() == before {
                return Err(DiagramError::InvalidParameter(format!(
                    "{}: no element {i} in a group of order {before}",
                    self.label
                )));
            }
        }
        Ok(self.radius_end.partition_point(|&end| end <= i as usize))
    }

    /// Index of `x`, growing the ball up to radius `bound`.
    pub fn index_of(&mut self, x: &E, bound: usize) -> Result<u64, DiagramError> {
        loop {
            if let Some(&i) = self.index.get(x) {
                return Ok(i);
            }
            if self.radius_end.len() > bound + 1 {
                return Err(DiagramError::InvalidParameter(format!(
                    "{}: element not found within radius {bound}",
                    self.label
                )));
            }
            self.grow()?;
        }
    }

    /// Index of `x` if it has already been enumerated.
    pub fn lookup(&self, x: &E) -> Option<u64> {
        self.index.get(x).copied()
    }

    /// Shortlex-least word for element `i`, as letter indices.
    pub fn word(&self, mut i: u64) -> Vec<u8> {
        let mut letters = Vec::new();
        while i != 0 {
            let (p, li) = self.parent[i as usize];
            letters.push(li);
            i = p as u64;
        }
        letters.reverse();
        letters
    }

    /// Product of indices, growing up to the sum of the radii.
    pub fn mul(&mut self, x: u64, y: u64) -> Result<u64, DiagramError> {
        let bound = self.radius(x)? + self.radius(y)?;
        let z = self.elems[x as usize].mul(&self.elems[y as usize]);
        self.index_of(&z, bound)
    }

    pub fn inv(&mut self, x: u64) -> Result<u64, DiagramError> {
        let bound = self.radius(x)?;
        let z = self.elems[x as usize].inv();
        self.index_of(&z, bound)
    }
}
