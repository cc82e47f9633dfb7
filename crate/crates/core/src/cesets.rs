//! Staged approximations of c.e. sets and halting events.
//!
//! Stage 0 is always empty and at most one element enters per stage.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CeSetError {
    #[error("explicit schedule uses stage 0; stage 0 is always empty")]
    StageZero,
    #[error("explicit schedule enumerates two elements at stage {0}")]
    TwoAtOnce(usize),
    #[error("explicit schedule enumerates element {0} twice")]
    Repeated(u64),
    #[error("halting stage must be at least 1")]
    HaltAtZero,
    #[error("malformed scenario: {0}")]
    Malformed(String),
}

/// How the set is enumerated.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CeSetKind {
    Empty,
    /// Enumerated in ascending order, one per stage from stage 1.
    Finite { elements: Vec<u64> },
    /// Element `s - 1` enters at stage `s`.
    All,
    /// Element `2(s - 1)` enters at stage `s`.
    Evens,
    /// Every natural outside `complement`, ascending, one per stage.
    Cofinite { complement: Vec<u64> },
    /// Declared `(stage, element)` pairs.
    Explicit { schedule: Vec<(usize, u64)> },
}

/// A staged c.e. set. `class` is advisory and never read by constructions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawSet", into = "RawSet")]
pub struct StagedCeSet {
    kind: CeSetKind,
    class: Option<String>,
    // Explicit schedules sorted by stage.
    schedule: Vec<(usize, u64)>,
}

#[derive(Serialize, Deserialize)]
struct RawSet {
    #[serde(flatten)]
    kind: CeSetKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    class: Option<String>,
}

impl TryFrom<RawSet> for StagedCeSet {
    type Error = CeSetError;
    fn try_from(raw: RawSet) -> Result<Self, CeSetError> {
        Ok(StagedCeSet::new(raw.kind)?.with_class(raw.class))
    }
}

impl From<StagedCeSet> for RawSet {
    fn from(s: StagedCeSet) -> RawSet {
        RawSet { kind: s.kind, class: s.class }
    }
}

impl StagedCeSet {
    pub fn new(kind: CeSetKind) -> Result<Self, CeSetError> {
        let kind = match kind {
            CeSetKind::Finite { mut elements } => {
                elements.sort_unstable();
                elements.dedup();
                CeSetKind::Finite { elements }
            }
            CeSetKind::Cofinite { mut complement } => {
                complement.sort_unstable();
                complement.dedup();
                CeSetKind::Cofinite { complement }
            }
            other => other,
        };
        let mut schedule = Vec::new();
        if let CeSetKind::Explicit { schedule: pairs } = &kind {
            schedule = pairs.clone();
            schedule.sort_by_key(|&(s, _)| s);
            let mut seen = BTreeSet::new();
            for (i, &(stage, elem)) in schedule.iter().enumerate() {
                if stage == 0 {
                    return Err(CeSetError::StageZero);
                }
                if i > 0 && schedule[i - 1].0 == stage {
                    return Err(CeSetError::TwoAtOnce(stage));
                }
                if !seen.insert(elem) {
                    return Err(CeSetError::Repeated(elem));
                }
            }
        }
        Ok(StagedCeSet { kind, class: None, schedule })
    }

    pub fn empty() -> Self {
        StagedCeSet::new(CeSetKind::Empty).expect("valid")
    }

    pub fn all() -> Self {
        StagedCeSet::new(CeSetKind::All).expect("valid")
    }

    pub fn evens() -> Self {
        StagedCeSet::new(CeSetKind::Evens).expect("valid")
    }

    pub fn finite(elements: impl IntoIterator<Item = u64>) -> Self {
        StagedCeSet::new(CeSetKind::Finite { elements: elements.into_iter().collect() }).expect("valid")
    }

    pub fn cofinite(complement: impl IntoIterator<Item = u64>) -> Self {
        StagedCeSet::new(CeSetKind::Cofinite { complement: complement.into_iter().collect() })
            .expect("valid")
    }

    pub fn explicit(schedule: impl IntoIterator<Item = (usize, u64)>) -> Result<Self, CeSetError> {
        StagedCeSet::new(CeSetKind::Explicit { schedule: schedule.into_iter().collect() })
    }

    pub fn with_class(mut self, class: Option<String>) -> Self {
        self.class = class;
        self
    }

    pub fn kind(&self) -> &CeSetKind {
        &self.kind
    }

    pub fn class(&self) -> Option<&str> {
        self.class.as_deref()
    }

    /// The `k`-th enumerated element (0-based) together with the stage it enters.
    pub fn nth(&self, k: usize) -> Option<(usize, u64)> {
        let stage = k + 1;
        match &self.kind {
            CeSetKind::Empty => None,
            CeSetKind::Finite { elements } => elements.get(k).map(|&e| (stage, e)),
            CeSetKind::All => Some((stage, k as u64)),
            CeSetKind::Evens => Some((stage, 2 * k as u64)),
            CeSetKind::Cofinite { complement } => {
                // The k-th natural not in the (sorted) complement.
                let mut e = k as u64;
                for &c in complement {
                    if c <= e {
                        e += 1;
                    } else {
                        break;
                    }
                }
                Some((stage, e))
            }
            CeSetKind::Explicit { .. } => self.schedule.get(k).copied(),
        }
    }

    /// Number of elements enumerated by stage `s`.
    pub fn count_at(&self, s: usize) -> usize {
        match &self.kind {
            CeSetKind::Empty => 0,
            CeSetKind::Finite { elements } => s.min(elements.len()),
            CeSetKind::All | CeSetKind::Evens | CeSetKind::Cofinite { .. } => s,
            CeSetKind::Explicit { .. } => self.schedule.partition_point(|&(st, _)| st <= s),
        }
    }

    /// Elements enumerated by stage `s`, in enumeration order.
    pub fn enumerated(&self, s: usize) -> Vec<u64> {
        (0..self.count_at(s)).filter_map(|k| self.nth(k).map(|(_, e)| e)).collect()
    }

    /// `W_{e,s}` as a set.
    pub fn at_stage(&self, s: usize) -> BTreeSet<u64> {
        self.enumerated(s).into_iter().collect()
    }

    /// The element entering at stage `s`, if any.
    pub fn new_element(&self, s: usize) -> Option<u64> {
        if s == 0 {
            return None;
        }
        let before = self.count_at(s - 1);
        if self.count_at(s) > before {
            self.nth(before).map(|(_, e)| e)
        } else {
            None
        }
    }

    /// Whether the enumeration is finite (known from the declared kind).
    pub fn is_finite(&self) -> bool {
        matches!(
            self.kind,
            CeSetKind::Empty | CeSetKind::Finite { .. } | CeSetKind::Explicit { .. }
        )
    }
}

/// Whether `φ_e(e)` halts, and when.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", try_from = "RawHalting")]
pub enum HaltingScenario {
    Never,
    At { stage: usize },
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum RawHalting {
    Never,
    At { stage: usize },
}

impl TryFrom<RawHalting> for HaltingScenario {
    type Error = CeSetError;
    fn try_from(raw: RawHalting) -> Result<Self, CeSetError> {
        match raw {
            RawHalting::Never => Ok(HaltingScenario::Never),
            RawHalting::At { stage } => HaltingScenario::halts_at(stage),
        }
    }
}

impl HaltingScenario {
    pub fn halts_at(stage: usize) -> Result<Self, CeSetError> {
        if stage == 0 {
            Err(CeSetError::HaltAtZero)
        } else {
            Ok(HaltingScenario::At { stage })
        }
    }

    /// Whether the computation has halted by stage `s`.
    pub fn halted_by(&self, s: usize) -> bool {
        matches!(self, HaltingScenario::At { stage } if s >= *stage)
    }

    pub fn halting_stage(&self) -> Option<usize> {
        match self {
            HaltingScenario::Never => None,
            HaltingScenario::At { stage } => Some(*stage),
        }
    }
}

/// The input to a construction: a staged set and a halting event.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scenario {
    #[serde(default = "StagedCeSet::empty")]
    pub set: StagedCeSet,
    #[serde(default = "never")]
    pub halting: HaltingScenario,
}

fn never() -> HaltingScenario {
    HaltingScenario::Never
}

impl Scenario {
    pub fn from_set(set: StagedCeSet) -> Self {
        Scenario { set, halting: HaltingScenario::Never }
    }

    pub fn from_halting(halting: HaltingScenario) -> Self {
        Scenario { set: StagedCeSet::empty(), halting }
    }

    pub fn from_json(text: &str) -> Result<Self, CeSetError> {
        serde_json::from_str(text).map_err(|e| CeSetError::Malformed(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stage_examples() {
        assert!(StagedCeSet::empty().at_stage(100).is_empty());
        let f = StagedCeSet::finite([7, 3]);
        assert_eq!(f.at_stage(1), BTreeSet::from([3]));
        assert_eq!(f.at_stage(2), BTreeSet::from([3, 7]));
        let e = StagedCeSet::explicit([(5, 9)]).unwrap();
        assert!(e.at_stage(4).is_empty());
        assert_eq!(e.at_stage(5), BTreeSet::from([9]));
    }

    #[test]
    fn new_element_examples() {
        let all = StagedCeSet::all();
        for s in 1..20 {
            assert_eq!(all.new_element(s), Some(s as u64 - 1));
        }
        assert_eq!(StagedCeSet::empty().new_element(4), None);
        assert_eq!(StagedCeSet::evens().new_element(3), Some(4));
        assert_eq!(StagedCeSet::cofinite([0, 1, 5]).enumerated(5), vec![2, 3, 4, 6, 7]);
    }

    #[test]
    fn explicit_rejections() {
        assert_eq!(StagedCeSet::explicit([(0, 1)]), Err(CeSetError::StageZero));
        assert_eq!(StagedCeSet::explicit([(2, 1), (2, 5)]), Err(CeSetError::TwoAtOnce(2)));
        assert_eq!(StagedCeSet::explicit([(2, 1), (3, 1)]), Err(CeSetError::Repeated(1)));
    }

    #[test]
    fn scenario_json() {
        let sc = Scenario::from_json(
            r#"{"set":{"kind":"finite","elements":[3,7]},"halting":{"kind":"at","stage":5}}"#,
        )
        .unwrap();
        assert_eq!(sc.set, StagedCeSet::finite([3, 7]));
        assert_eq!(sc.halting, HaltingScenario::At { stage: 5 });
        let sc = Scenario::from_json(r#"{"set":{"kind":"cofinite","complement":[1],"class":"COF"}}"#)
            .unwrap();
        assert_eq!(sc.set.class(), Some("COF"));
        assert_eq!(sc.halting, HaltingScenario::Never);
        assert!(Scenario::from_json(r#"{"halting":{"kind":"at","stage":0}}"#).is_err());
        assert!(Scenario::from_json(r#"{"set":{"kind":"explicit","schedule":[[0,1]]}}"#).is_err());
        let back: Scenario = serde_json::from_str(&serde_json::to_string(&sc).unwrap()).unwrap();
        assert_eq!(back, sc);
    }

    #[test]
    fn halting() {
        let h = HaltingScenario::halts_at(5).unwrap();
        assert!(!h.halted_by(4));
        assert!(h.halted_by(5));
        assert!(!HaltingScenario::Never.halted_by(1000));
    }
}
