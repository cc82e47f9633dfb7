//! An abelian group of integer tuples that becomes a torsion group exactly
//! when infinitely many elements are enumerated.
//!
//! Stage 0 names `0, (1), (-1)`. A quiet stage closes the named set under
//! pairwise sums. A stage where an element is enumerated first fixes the
//! modulus of the current last component at `4m`, where `m` is the largest
//! value seen there, with representatives in `[-2m, 2m-1]`; it then closes
//! under sums and opens a new component with `±(0, …, 0, 1)`. New elements
//! are named in sweep order of the pair `(a, b)`, each followed by its
//! inverse.

use std::collections::HashMap;

use crate::cesets::StagedCeSet;
use crate::diagrams::{Code, ComputableGroup, DiagramError};

/// Largest number of pair sums one stage may compute.
pub const TORSION_PAIR_BUDGET: u128 = 60_000_000;

#[derive(Clone, Debug)]
pub struct TorsionDiagram {
    set: StagedCeSet,
    elems: Vec<Vec<i64>>,
    index: HashMap<Vec<i64>, Code>,
    code_stages: Vec<usize>,
    // Modulus of each closed component; the last component is always open.
    moduli: Vec<u64>,
    totals: Vec<u64>,
}

fn trim(mut t: Vec<i64>) -> Vec<i64> {
    while t.last() == Some(&0) {
        t.pop();
    }
    t
}

/// Reduce into `[-M/2, M/2 - 1]`.
fn shifted(v: i64, modulus: u64) -> i64 {
    let m = modulus as i64;
    (v + m / 2).rem_euclid(m) - m / 2
}

impl TorsionDiagram {
    fn new(set: &StagedCeSet) -> Self {
        let mut d = TorsionDiagram {
            set: set.clone(),
            elems: Vec::new(),
            index: HashMap::new(),
            code_stages: Vec::new(),
            moduli: Vec::new(),
            totals: Vec::new(),
        };
        d.name_tuple(vec![], 0);
        d.name_tuple(vec![1], 0);
        d.name_tuple(vec![-1], 0);
        d.totals.push(3);
        d
    }

    fn name_tuple(&mut self, t: Vec<i64>, stage: usize) -> Code {
        if let Some(&c) = self.index.get(&t) {
            return c;
        }
        let c = self.elems.len() as Code;
        self.index.insert(t.clone(), c);
        self.elems.push(t);
        self.code_stages.push(stage);
        c
    }

    fn reduce(&self, mut t: Vec<i64>) -> Vec<i64> {
        for (k, &m) in self.moduli.iter().enumerate() {
            if let Some(x) = t.get_mut(k) {
                *x = shifted(*x, m);
            }
        }
        trim(t)
    }

    fn add(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        let n = a.len().max(b.len());
        let t = (0..n).map(|k| a.get(k).unwrap_or(&0) + b.get(k).unwrap_or(&0)).collect();
        self.reduce(t)
    }

    fn neg(&self, a: &[i64]) -> Vec<i64> {
        self.reduce(a.iter().map(|x| -x).collect())
    }

    /// Name `t` and then its inverse.
    fn name_with_inverse(&mut self, t: Vec<i64>, stage: usize) {
        if self.index.contains_key(&t) {
            return;
        }
        let n = self.neg(&t);
        self.name_tuple(t, stage);
        self.name_tuple(n, stage);
    }

    fn run_stage(&mut self) -> Result<(), DiagramError> {
        let s = self.totals.len();
        let count = self.elems.len();
        if (count as u128).pow(2) > TORSION_PAIR_BUDGET {
            return Err(DiagramError::SizeBudget { name: self.name_str(), limit: TORSION_PAIR_BUDGET as usize });
        }
        let torsion = self.set.new_element(s).is_some();
        let width = self.moduli.len() + 1;
        if torsion {
            let m = self
                .elems
                .iter()
                .filter(|t| t.len() == width)
                .map(|t| t[width - 1])
                .max()
                .unwrap_or(1)
                .max(1);
            self.moduli.push(4 * m as u64);
        }
        // Without new moduli, pairs of previously named elements already
        // have their sums named.
        let old = if torsion || s < 2 { 0 } else { self.totals[s - 2] as usize };
        for a in 0..count {
            for b in 0..count {
                if a < old && b < old {
                    continue;
                }
                let t = self.add(&self.elems[a], &self.elems[b]);
                self.name_with_inverse(t, s);
            }
        }
        if torsion {
            let mut e = vec![0; width + 1];
            e[width] = 1;
            self.name_with_inverse(e, s);
        }
        self.totals.push(self.elems.len() as u64);
        Ok(())
    }

    fn name_str(&self) -> String {
        "torsionCg".into()
    }

    fn run_through(&mut self, s: usize) -> Result<(), DiagramError> {
        while self.totals.len() <= s {
            self.run_stage()?;
        }
        Ok(())
    }

    fn run_until_named(&mut self, a: Code) -> Result<(), DiagramError> {
        while self.elems.len() as u64 <= a {
            self.run_stage()?;
        }
        Ok(())
    }

    /// The integer tuple behind `a`.
    pub fn tuple(&mut self, a: Code) -> Result<Vec<i64>, DiagramError> {
        self.run_until_named(a)?;
        Ok(self.elems[a as usize].clone())
    }

    /// Moduli fixed so far, one per closed component.
    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    /// Product of the moduli of the components `a` uses, once all of them
    /// are closed.
    pub fn moduli_product(&mut self, a: Code) -> Result<Option<u64>, DiagramError> {
        let t = self.tuple(a)?;
        if t.len() > self.moduli.len() {
            return Ok(None);
        }
        Ok(Some(self.moduli[..t.len()].iter().product()))
    }

    fn code_of(&mut self, t: &[i64]) -> Result<Code, DiagramError> {
        loop {
            if let Some(&c) = self.index.get(t) {
                return Ok(c);
            }
            self.run_stage()?;
        }
    }
}

/// Build the torsion construction for `set`.
pub fn torsion_cg(set: &StagedCeSet) -> TorsionDiagram {
    TorsionDiagram::new(set)
}

impl ComputableGroup for TorsionDiagram {
    fn name(&self) -> String {
        self.name_str()
    }

    fn codes_at(&mut self, s: usize) -> Result<u64, DiagramError> {
        self.run_through(s)?;
        Ok(self.totals[s])
    }

    fn code_stage(&mut self, a: Code) -> Result<usize, DiagramError> {
        self.run_until_named(a)?;
        Ok(self.code_stages[a as usize])
    }

    fn mul_staged(&mut self, a: Code, b: Code) -> Result<(Code, usize), DiagramError> {
        let sa = self.code_stage(a)?;
        let sb = self.code_stage(b)?;
        // Moduli that matter for the sum are fixed by the next stage.
        self.run_through(sa.max(sb) + 1)?;
        let t = self.add(&self.elems[a as usize], &self.elems[b as usize]);
        let c = self.code_of(&t)?;
        Ok((c, sa.max(sb).max(self.code_stages[c as usize])))
    }

    fn inverse(&mut self, a: Code) -> Result<Code, DiagramError> {
        let s = self.code_stage(a)?;
        self.run_through(s + 1)?;
        let t = self.neg(&self.elems[a as usize]);
        self.code_of(&t)
    }

    fn describe(&mut self, a: Code) -> Result<String, DiagramError> {
        let t = self.tuple(a)?;
        let parts: Vec<String> = t.iter().map(|x| x.to_string()).collect();
        Ok(format!("({})", parts.join(",")))
    }

    fn generators(&mut self) -> Result<Vec<Code>, DiagramError> {
        let mut out = Vec::new();
        for k in 0..=self.moduli.len() {
            let mut e = vec![0; k + 1];
            e[k] = 1;
            if let Some(&c) = self.index.get(&e) {
                out.push(c);
            }
        }
        Ok(out)
    }
}
