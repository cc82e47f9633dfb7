//! Experiment plumbing: build a group from a recipe, run checkers at a
//! budget, compare against expected statuses and emit JSON-lines reports.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::cesets::{CeSetError, Scenario};
use crate::checkers::{self, CheckError, Evidence, Status, Verdict};
use crate::diagrams::free2::word_to_letters;
use crate::diagrams::{
    Code, ComputableGroup, DiagramError, EqualPowersForm, FiniteGroupTable, Free2Diagram, OneRelatorEqualPowers,
    ProductDiagram, RationalDiagram,
};
use crate::orders::{self, DiagramOps, FormOps, FreeReduced, OlfVerdict, OrderError, OrderMode, PresentationOps};
use crate::presentations::{PresentationError, PresentationSnapshot, RecursivePresentation};
use crate::reductions::{self, MarkovProperty};
use crate::words::{words_up_to, Generator, Word};

/// Default stage budget for presentations.
pub const DEFAULT_STAGES: usize = 200;
/// Default code budget for diagrams.
pub const DEFAULT_CODES: u64 = 100;
/// Codes whose products enter a diagram fingerprint.
pub const FINGERPRINT_CODES: u64 = 24;

pub const CONSTRUCTIONS: [&str; 13] = [
    "markov-rp",
    "finiteness-rp",
    "wordproblem-rp",
    "cyclic-rp",
    "nilpotent-rp",
    "solvable-rp",
    "biorder-rp",
    "markov-cg",
    "torsion-cg",
    "divisible-cg",
    "nilpotent-cg",
    "solvable-cg",
    "biorder-cg",
];

pub const CHECKERS: [&str; 14] = [
    "abelian",
    "find-torsion",
    "torsion",
    "trivial",
    "divisible",
    "nilpotent",
    "solvable",
    "finite",
    "cyclic",
    "word-problem",
    "nilpotency-class",
    "solvability-degree",
    "olf",
    "olf-search",
];

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("unknown construction `{0}`")]
    UnknownConstruction(String),
    #[error("unknown checker `{0}`")]
    UnknownChecker(String),
    #[error("unknown builtin `{0}`")]
    UnknownBuiltin(String),
    #[error("budget must be positive")]
    Budget,
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Scenario(#[from] CeSetError),
    #[error(transparent)]
    Check(#[from] CheckError),
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// `GROUPLAB_BUDGET` if set, else `default`.
pub fn budget_override() -> Result<Option<u64>, HarnessError> {
    match std::env::var("GROUPLAB_BUDGET") {
        Ok(v) => {
            let b: u64 = v.trim().parse().map_err(|_| HarnessError::Invalid(format!("GROUPLAB_BUDGET=`{v}`")))?;
            if b == 0 {
                return Err(HarnessError::Budget);
            }
            Ok(Some(b))
        }
        Err(_) => Ok(None),
    }
}

/// Exact normal forms a diagram admits, used to run closures without codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Forms {
    None,
    Free2,
    EqualPowers(u32),
}

pub enum Group {
    Presentation(RecursivePresentation),
    Diagram { diagram: Box<dyn ComputableGroup>, forms: Forms },
}

impl Group {
    pub fn name(&self) -> String {
        match self {
            Group::Presentation(p) => p.name().to_string(),
            Group::Diagram { diagram, .. } => diagram.name(),
        }
    }
}

fn arg<T: std::str::FromStr>(name: &str, text: &str) -> Result<T, HarnessError> {
    text.trim().parse().map_err(|_| HarnessError::Invalid(format!("bad argument `{text}` for {name}")))
}

/// `cyclic(n)`, `dihedral(n)`, `integers`, `wreathPP(p)`, `rationalsFull`,
/// `free2`, `oneRelatorEqualPowers(n)`.
pub fn builtin(spec: &str) -> Result<Group, HarnessError> {
    let spec = spec.trim();
    let (name, inner) = match spec.find('(') {
        Some(i) if spec.ends_with(')') => (&spec[..i], &spec[i + 1..spec.len() - 1]),
        _ => (spec, ""),
    };
    let d = |x: Box<dyn ComputableGroup>| Group::Diagram { diagram: x, forms: Forms::None };
    Ok(match name {
        "cyclic" => d(Box::new(FiniteGroupTable::cyclic(arg(name, inner)?)?)),
        "dihedral" => d(Box::new(FiniteGroupTable::dihedral(arg(name, inner)?)?)),
        "wreathPP" => d(Box::new(FiniteGroupTable::wreath_pp(arg(name, inner)?)?)),
        "integers" => d(Box::new(ProductDiagram::integers())),
        "rationalsFull" => d(Box::new(RationalDiagram::rationals_full())),
        "free2" => Group::Diagram { diagram: Box::new(Free2Diagram::new()), forms: Forms::Free2 },
        "oneRelatorEqualPowers" => {
            let n: u32 = arg(name, inner)?;
            Group::Diagram { diagram: Box::new(OneRelatorEqualPowers::new(n)?), forms: Forms::EqualPowers(n) }
        }
        _ => return Err(HarnessError::UnknownBuiltin(spec.to_string())),
    })
}

fn builtin_diagram(spec: &str) -> Result<Box<dyn ComputableGroup>, HarnessError> {
    match builtin(spec)? {
        Group::Diagram { diagram, .. } => Ok(diagram),
        Group::Presentation(_) => Err(HarnessError::Invalid(format!("`{spec}` is not a diagram"))),
    }
}

/// How to obtain a group: a construction applied to a scenario, a builtin,
/// or a stored presentation prefix.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Recipe {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub construction: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scenario: Option<Scenario>,
    /// Witness pair for the Markov constructions (default `torsion-free`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub property: Option<String>,
    /// Builtin diagrams overriding the Markov witnesses of `markov-cg`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub positive: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub negative: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub builtin: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub presentation: Option<PresentationSnapshot>,
}

impl Recipe {
    pub fn construction(name: &str, scenario: Scenario) -> Self {
        Recipe { construction: Some(name.into()), scenario: Some(scenario), ..Recipe::default() }
    }

    pub fn build(&self) -> Result<Group, HarnessError> {
        if let Some(name) = &self.construction {
            let scenario = self.scenario.clone().unwrap_or_else(|| Scenario::from_set(crate::cesets::StagedCeSet::empty()));
            return construct(name, &scenario, self);
        }
        if let Some(b) = &self.builtin {
            return builtin(b);
        }
        if let Some(snap) = &self.presentation {
            return Ok(Group::Presentation(snap.clone().into_presentation()?));
        }
        Err(HarnessError::Invalid("recipe names no construction, builtin or presentation".into()))
    }

    fn property(&self) -> Result<MarkovProperty, HarnessError> {
        match &self.property {
            None => Ok(MarkovProperty::TorsionFree),
            Some(p) => p.parse().map_err(HarnessError::Invalid),
        }
    }
}

/// What `construct` writes: the recipe plus the stage it was run to and
/// the fingerprint of that prefix. Presentations also carry their snapshot.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupFile {
    #[serde(flatten)]
    pub recipe: Recipe,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stage: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub codes: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fingerprint: Option<String>,
}

impl GroupFile {
    /// Run `recipe` to `stage` and record the result.
    pub fn record(recipe: Recipe, stage: usize) -> Result<Self, HarnessError> {
        let mut group = recipe.build()?;
        let fingerprint = Some(fingerprint(&mut group, stage)?);
        let mut recipe = recipe;
        let mut codes = None;
        match &mut group {
            Group::Presentation(p) => recipe.presentation = Some(p.snapshot(stage)),
            Group::Diagram { diagram, .. } => codes = Some(diagram.codes_at(stage)?),
        }
        Ok(GroupFile { recipe, stage: Some(stage), codes, fingerprint })
    }

    /// Read a group file, or treat `text` as a builtin name when it is not a path.
    pub fn load(text: &str) -> Result<Self, HarnessError> {
        let path = Path::new(text);
        if !path.exists() {
            builtin(text)?;
            let recipe = Recipe { builtin: Some(text.to_string()), ..Recipe::default() };
            return Ok(GroupFile { recipe, stage: None, codes: None, fingerprint: None });
        }
        let body = fs::read_to_string(path).map_err(|e| HarnessError::Io { path: text.into(), message: e.to_string() })?;
        Ok(serde_json::from_str(&body)?)
    }
}

/// Apply a registered construction.
pub fn construct(name: &str, scenario: &Scenario, recipe: &Recipe) -> Result<Group, HarnessError> {
    let set = &scenario.set;
    let p = |x: RecursivePresentation| Ok(Group::Presentation(x));
    let d = |x: Box<dyn ComputableGroup>| Ok(Group::Diagram { diagram: x, forms: Forms::None });
    match name {
        "markov-rp" => {
            let (pos, neg) = recipe.property()?.presentations();
            p(reductions::markov_rp(&pos, &neg, set))
        }
        "finiteness-rp" => p(reductions::finiteness_rp(set)),
        "wordproblem-rp" => p(reductions::word_problem_rp(set)),
        "cyclic-rp" => p(reductions::cyclic_rp(set)),
        "nilpotent-rp" => p(reductions::nilpotent_rp(set)),
        "solvable-rp" => p(reductions::solvable_rp(set)),
        "biorder-rp" => p(reductions::biorder_rp(set)),
        "markov-cg" => {
            let (mut pos, mut neg) = recipe.property()?.diagrams();
            if let Some(b) = &recipe.positive {
                pos = builtin_diagram(b)?;
            }
            if let Some(b) = &recipe.negative {
                neg = builtin_diagram(b)?;
            }
            d(Box::new(reductions::markov_cg(pos, neg, scenario.halting)?))
        }
        "torsion-cg" => d(Box::new(reductions::torsion_cg(set))),
        "divisible-cg" => d(Box::new(reductions::divisible_cg(set))),
        "nilpotent-cg" => d(Box::new(reductions::nilpotent_cg(set))),
        "solvable-cg" => d(Box::new(reductions::solvable_cg(set))),
        "biorder-cg" => {
            let forms = match scenario.halting.halting_stage() {
                None => Forms::Free2,
                Some(t) => Forms::EqualPowers(t as u32),
            };
            Ok(Group::Diagram { diagram: Box::new(reductions::biorder_cg(scenario.halting)?), forms })
        }
        _ => Err(HarnessError::UnknownConstruction(name.to_string())),
    }
}

/// SHA-256 of the serialized prefix: the presentation snapshot at `stage`,
/// or the staged products of the first [`FINGERPRINT_CODES`] codes.
pub fn fingerprint(group: &mut Group, stage: usize) -> Result<String, HarnessError> {
    let text = match group {
        Group::Presentation(p) => serde_json::to_string(&p.snapshot(stage))?,
        Group::Diagram { diagram, .. } => {
            let mut rows = Vec::new();
            for a in 0..FINGERPRINT_CODES {
                for b in 0..FINGERPRINT_CODES {
                    let (c, s) = diagram.mul_staged(a, b)?;
                    rows.push((a, b, c, s));
                }
            }
            serde_json::to_string(&(diagram.name(), rows))?
        }
    };
    Ok(hex::encode(Sha256::digest(text.as_bytes())))
}

/// One checker invocation. Unset bounds fall back to the experiment budget.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CheckSpec {
    pub checker: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<u64>,
    /// Commutator length (nilpotent), derived depth (solvable), class size (finite) or tuple size (olf-search).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_len: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_exp: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_index: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub code_max: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order_bound: Option<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub elements: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<OrderMode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    /// `free`, `constant-0`, `constant-1` or `equal-powers(n)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decider: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<Status>,
}

impl CheckSpec {
    pub fn new(checker: &str) -> Self {
        CheckSpec { checker: checker.into(), ..CheckSpec::default() }
    }
}

/// Resolve an element: `#k` is a raw code; otherwise a word. On diagrams,
/// letters `a, b, c, …` (or `g_i`) stand for the listed generators.
fn diagram_element(d: &mut dyn ComputableGroup, text: &str) -> Result<Code, HarnessError> {
    let text = text.trim();
    if let Some(code) = text.strip_prefix('#') {
        return arg("code", code);
    }
    let w = Word::parse(text).map_err(|e| HarnessError::Invalid(e.to_string()))?;
    let gens = d.generators()?;
    let mut acc = 0;
    for l in w.letters() {
        let g = &l.generator;
        let i = if g.family == "g" && g.index.len() == 1 {
            g.index[0] as usize
        } else if g.index.is_empty() && g.family.len() == 1 {
            (g.family.as_bytes()[0] - b'a') as usize
        } else {
            usize::MAX
        };
        let c = *gens.get(i).ok_or_else(|| HarnessError::Invalid(format!("no generator for letter {g}")))?;
        let c = if l.inverse { d.inverse(c)? } else { c };
        acc = d.mul(acc, c)?;
    }
    Ok(acc)
}

fn parse_words(items: &[String]) -> Result<Vec<Word>, HarnessError> {
    items.iter().map(|s| Word::parse(s.trim()).map_err(|e| HarnessError::Invalid(e.to_string()))).collect()
}

/// Generators named one per item, as in `x_0`.
fn single_letters(items: &[String]) -> Result<Vec<Generator>, HarnessError> {
    parse_words(items)?
        .into_iter()
        .map(|w| match w.letters() {
            [l] if !l.inverse => Ok(l.generator.clone()),
            _ => Err(HarnessError::Invalid(format!("`{w}` is not a generator"))),
        })
        .collect()
}

fn olf_verdict(v: OlfVerdict, depth: usize) -> Verdict {
    let evidence = Evidence { note: serde_json::to_string(&v).unwrap_or_default(), ..Evidence::default() };
    match v {
        OlfVerdict::Refuted { .. } => Verdict::refuted(evidence, depth as u64),
        OlfVerdict::Survives { .. } => Verdict::witnessed(evidence, depth as u64),
    }
}

fn show_free(e: &FreeReduced) -> String {
    crate::diagrams::free2::letters_to_word(&e.0).to_string()
}

fn show_form(e: &EqualPowersForm) -> String {
    format!("{e:?}")
}

/// Run the sign-vector refuter on the best available representation.
pub fn olf_on(
    group: &mut Group,
    elements: &[String],
    depth: usize,
    mode: OrderMode,
    stage: usize,
) -> Result<OlfVerdict, HarnessError> {
    match group {
        Group::Presentation(p) => {
            let gs = parse_words(elements)?;
            Ok(orders::olf_refute(&mut PresentationOps { presentation: p, stage }, &gs, depth, mode)?)
        }
        Group::Diagram { forms: Forms::Free2, .. } => {
            let gs = parse_words(elements)?
                .iter()
                .map(|w| word_to_letters(w).map(FreeReduced))
                .collect::<Result<Vec<_>, _>>()?;
            let mut ops = FormOps { letters: FreeReduced::letters(2), show: show_free };
            Ok(orders::olf_refute(&mut ops, &gs, depth, mode)?)
        }
        Group::Diagram { forms: Forms::EqualPowers(n), .. } => {
            let n = *n;
            let gs = parse_words(elements)?
                .iter()
                .map(|w| EqualPowersForm::from_word(n, w))
                .collect::<Result<Vec<_>, _>>()?;
            let mut ops = FormOps { letters: (0..4).map(|l| EqualPowersForm::from_letters(n, &[l])).collect(), show: show_form };
            Ok(orders::olf_refute(&mut ops, &gs, depth, mode)?)
        }
        Group::Diagram { diagram, .. } => {
            let gs = elements.iter().map(|e| diagram_element(diagram.as_mut(), e)).collect::<Result<Vec<_>, _>>()?;
            Ok(orders::olf_refute(&mut DiagramOps(diagram.as_mut()), &gs, depth, mode)?)
        }
    }
}

/// Search tuples of at most `size` words of length `≤ max_len` over `a, b`.
fn olf_search(group: &mut Group, max_len: usize, size: usize, depth: usize, mode: OrderMode) -> Result<Verdict, HarnessError> {
    let gens = [Generator::plain("a"), Generator::plain("b")];
    let words: Vec<Word> = words_up_to(&gens, max_len).into_iter().skip(1).collect();
    let found = match group {
        Group::Diagram { forms: Forms::EqualPowers(n), .. } => {
            let n = *n;
            let cands = words.iter().map(|w| EqualPowersForm::from_word(n, w)).collect::<Result<Vec<_>, _>>()?;
            let mut ops = FormOps { letters: (0..4).map(|l| EqualPowersForm::from_letters(n, &[l])).collect(), show: show_form };
            orders::find_refuting_tuple(&mut ops, &cands, size, depth, mode)?
        }
        Group::Diagram { forms: Forms::Free2, .. } => {
            let cands = words.iter().map(|w| word_to_letters(w).map(FreeReduced)).collect::<Result<Vec<_>, _>>()?;
            let mut ops = FormOps { letters: FreeReduced::letters(2), show: show_free };
            orders::find_refuting_tuple(&mut ops, &cands, size, depth, mode)?
        }
        _ => return Err(HarnessError::Invalid("olf-search needs a group on a, b with normal forms".into())),
    };
    Ok(match found {
        Some((idx, v)) => {
            let mut verdict = olf_verdict(v, depth);
            if let Some(e) = verdict.evidence.as_mut() {
                e.words = idx.iter().map(|&i| words[i].clone()).collect();
            }
            verdict
        }
        None => Verdict::unknown(depth as u64),
    })
}

fn table_of(d: &mut dyn ComputableGroup) -> Result<FiniteGroupTable, HarnessError> {
    let n = d.finite_order().ok_or_else(|| HarnessError::Invalid(format!("{} is not a finite table", d.name())))?;
    let mut table = Vec::with_capacity((n * n) as usize);
    for a in 0..n {
        for b in 0..n {
            table.push(d.mul(a, b)? as u32);
        }
    }
    Ok(FiniteGroupTable::new(d.name(), n as usize, table)?)
}

fn decider(name: &str) -> Result<Box<dyn FnMut(&Word) -> Option<bool>>, HarnessError> {
    if let Some(inner) = name.strip_prefix("equal-powers(").and_then(|s| s.strip_suffix(')')) {
        let g = OneRelatorEqualPowers::new(arg("equal-powers", inner)?)?;
        return Ok(Box::new(move |w| g.decide(w).ok()));
    }
    Ok(match name {
        "free" => Box::new(|w: &Word| Some(w.is_identity())),
        "constant-0" => Box::new(|_: &Word| Some(false)),
        "constant-1" => Box::new(|_: &Word| Some(true)),
        _ => return Err(HarnessError::Invalid(format!("unknown decider `{name}`"))),
    })
}

/// Run one checker. `budget` is the stage (presentations) or code bound
/// (diagrams) used when the check sets no bound of its own.
pub fn run_check(group: &mut Group, check: &CheckSpec, budget: u64) -> Result<Verdict, HarnessError> {
    let bound = check.bound.unwrap_or(budget);
    if bound == 0 {
        return Err(HarnessError::Budget);
    }
    let stage = bound as usize;
    let wrong = || HarnessError::Invalid(format!("checker `{}` does not apply to this group", check.checker));
    let v = match (check.checker.as_str(), group) {
        ("abelian", Group::Diagram { diagram, .. }) => checkers::check_abelian(diagram.as_mut(), bound)?,
        ("abelian", Group::Presentation(p)) => checkers::check_abelian_presentation(p, stage)?,
        ("find-torsion", Group::Diagram { diagram, .. }) => checkers::find_torsion(diagram.as_mut(), bound)?,
        ("find-torsion", Group::Presentation(p)) => {
            checkers::find_torsion_presentation(p, stage, check.max_len.unwrap_or(1), check.max_exp.unwrap_or(6))?
        }
        ("torsion", Group::Diagram { diagram, .. }) => {
            checkers::check_torsion_up_to(diagram.as_mut(), bound, check.order_bound.unwrap_or(4096))?
        }
        ("trivial", Group::Presentation(p)) => {
            checkers::check_trivial_up_to(p, stage, check.max_index.unwrap_or(stage as u32))?
        }
        ("divisible", Group::Diagram { diagram, .. }) => checkers::check_divisible_up_to(
            diagram.as_mut(),
            check.max_exp.unwrap_or(5),
            check.code_max.unwrap_or(10),
            bound,
        )?,
        ("nilpotent", Group::Diagram { diagram, .. }) => {
            checkers::check_nilpotent_up_to(diagram.as_mut(), check.n.unwrap_or(2), bound)?
        }
        ("solvable", Group::Diagram { diagram, .. }) => {
            checkers::check_solvable_up_to(diagram.as_mut(), check.n.unwrap_or(1), bound)?
        }
        ("finite", Group::Presentation(p)) => {
            let gens = if check.elements.is_empty() { p.generators(stage) } else { single_letters(&check.elements)? };
            checkers::check_finite_up_to(p, check.n.unwrap_or(1), stage, &gens, check.max_len.unwrap_or(2))?
        }
        ("cyclic", Group::Diagram { diagram, .. }) => checkers::check_cyclic_up_to(diagram.as_mut(), bound)?,
        ("cyclic", Group::Presentation(p)) => {
            let gens = if check.elements.is_empty() { p.generators(stage) } else { single_letters(&check.elements)? };
            checkers::check_cyclic_presentation(
                p,
                stage,
                &gens,
                check.max_len.unwrap_or(2),
                check.max_exp.unwrap_or(12) as i64,
            )?
        }
        ("word-problem", Group::Presentation(p)) => {
            let mut f = decider(check.decider.as_deref().unwrap_or("free"))?;
            let gens = p.generators(stage);
            checkers::audit_word_problem_decider(p, &gens, &mut *f, stage, check.max_len.unwrap_or(4), 0)?
        }
        (c @ ("nilpotency-class" | "solvability-degree"), Group::Diagram { diagram, .. }) => {
            let t = table_of(diagram.as_mut())?;
            let r = if c == "nilpotency-class" { checkers::nilpotency_class(&t) } else { checkers::solvability_degree(&t) };
            match r {
                Some(k) => Verdict::witnessed(Evidence { exponents: vec![k as i64], ..Evidence::default() }, t.order() as u64),
                None => Verdict::refuted(
                    Evidence { note: "series stalls above the trivial subgroup".into(), ..Evidence::default() },
                    t.order() as u64,
                ),
            }
        }
        ("olf", g) => {
            let depth = check.depth.unwrap_or(6);
            let v = olf_on(g, &check.elements, depth, check.mode.unwrap_or(OrderMode::Left), stage)?;
            olf_verdict(v, depth)
        }
        ("olf-search", g) => olf_search(
            g,
            check.max_len.unwrap_or(4),
            check.n.unwrap_or(1),
            check.depth.unwrap_or(6),
            check.mode.unwrap_or(OrderMode::Bi),
        )?,
        (name, _) if !CHECKERS.contains(&name) => return Err(HarnessError::UnknownChecker(name.to_string())),
        _ => return Err(wrong()),
    };
    Ok(v)
}

/// A construction (or builtin) with a budget and the checks to run on it.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub name: String,
    #[serde(flatten)]
    pub recipe: Recipe,
    /// Stage (presentations) or code (diagrams) budget.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
    #[serde(default)]
    pub checks: Vec<CheckSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub checker: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<Status>,
    pub matched: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub name: String,
    pub group: String,
    pub fingerprint: String,
    pub budget: u64,
    pub checks: Vec<CheckReport>,
    pub millis: u64,
    pub ok: bool,
}

impl ExperimentSpec {
    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        Ok(serde_json::from_str(text)?)
    }
}

fn default_budget(group: &Group) -> Result<u64, HarnessError> {
    Ok(budget_override()?.unwrap_or(match group {
        Group::Presentation(_) => DEFAULT_STAGES as u64,
        Group::Diagram { .. } => DEFAULT_CODES,
    }))
}

/// Build the group, fingerprint it, run every check and compare statuses.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Report, HarnessError> {
    let start = Instant::now();
    for c in &spec.checks {
        if !CHECKERS.contains(&c.checker.as_str()) {
            return Err(HarnessError::UnknownChecker(c.checker.clone()));
        }
    }
    let mut group = spec.recipe.build()?;
    let budget = match spec.budget {
        Some(0) => return Err(HarnessError::Budget),
        Some(b) => b,
        None => default_budget(&group)?,
    };
    let fp = fingerprint(&mut group, budget.min(DEFAULT_STAGES as u64) as usize)?;
    let mut checks = Vec::new();
    for c in &spec.checks {
        let (verdict, error) = match run_check(&mut group, c, budget) {
            Ok(v) => (Some(v), None),
            Err(e) => (None, Some(e.to_string())),
        };
        let matched = match c.expect {
            Some(want) => verdict.as_ref().is_some_and(|v| v.status == want),
            None => error.is_none(),
        };
        checks.push(CheckReport { checker: c.checker.clone(), verdict, error, expect: c.expect, matched });
    }
    let ok = checks.iter().all(|c| c.matched);
    Ok(Report {
        name: spec.name.clone(),
        group: group.name(),
        fingerprint: fp,
        budget,
        checks,
        millis: start.elapsed().as_millis() as u64,
        ok,
    })
}

/// Outcome of running one suite file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SuiteEntry {
    Report(Report),
    Failed { file: String, error: String, ok: bool },
}

impl SuiteEntry {
    pub fn ok(&self) -> bool {
        match self {
            SuiteEntry::Report(r) => r.ok,
            SuiteEntry::Failed { .. } => false,
        }
    }
}

/// The `*.json` specs of a directory, sorted by file name.
pub fn suite_files(dir: &Path) -> Result<Vec<PathBuf>, HarnessError> {
    let io = |e: std::io::Error| HarnessError::Io { path: dir.display().to_string(), message: e.to_string() };
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(io)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    Ok(files)
}

/// Run every spec in `dir`, writing one JSON line per spec to `out`.
/// Returns the entries; the suite passes iff every entry is ok.
pub fn run_suite(dir: &Path, out: &mut dyn Write) -> Result<Vec<SuiteEntry>, HarnessError> {
    let mut entries = Vec::new();
    for path in suite_files(dir)? {
        let file = path.display().to_string();
        let entry = fs::read_to_string(&path)
            .map_err(|e| HarnessError::Io { path: file.clone(), message: e.to_string() })
            .and_then(|t| ExperimentSpec::from_json(&t))
            .and_then(|s| run_experiment(&s));
        let entry = match entry {
            Ok(r) => SuiteEntry::Report(r),
            Err(e) => SuiteEntry::Failed { file, error: e.to_string(), ok: false },
        };
        writeln!(out, "{}", serde_json::to_string(&entry)?)
            .map_err(|e| HarnessError::Io { path: "<output>".into(), message: e.to_string() })?;
        entries.push(entry);
    }
    Ok(entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cesets::{HaltingScenario, StagedCeSet};

    fn spec(construction: &str, scenario: Scenario, checks: Vec<CheckSpec>) -> ExperimentSpec {
        ExperimentSpec { name: construction.into(), recipe: Recipe::construction(construction, scenario), budget: None, checks }
    }

    #[test]
    fn builtins_parse() {
        for b in ["cyclic(6)", "integers", "wreathPP(2)", "rationalsFull", "free2", "oneRelatorEqualPowers(2)", "dihedral(4)"] {
            builtin(b).unwrap();
        }
        assert!(matches!(builtin("sphere(2)"), Err(HarnessError::UnknownBuiltin(_))));
    }

    #[test]
    fn every_construction_builds() {
        let sc = Scenario { set: StagedCeSet::finite([1]), halting: HaltingScenario::halts_at(3).unwrap() };
        for c in CONSTRUCTIONS {
            let mut g = construct(c, &sc, &Recipe::default()).unwrap();
            fingerprint(&mut g, 5).unwrap();
        }
        assert!(matches!(construct("nope", &sc, &Recipe::default()), Err(HarnessError::UnknownConstruction(_))));
    }

    #[test]
    fn markov_torsion_report() {
        let mut find = CheckSpec::new("find-torsion");
        find.expect = Some(Status::Witnessed);
        let mut s = spec("markov-rp", Scenario::from_set(StagedCeSet::empty()), vec![find]);
        s.budget = Some(20);
        let r = run_experiment(&s).unwrap();
        assert!(r.ok, "{r:?}");
        let e = r.checks[0].verdict.as_ref().unwrap().evidence.as_ref().unwrap();
        assert_eq!(e.words[0].to_string(), "y_{0,0}");
        assert_eq!(e.exponents, [2]);
    }

    #[test]
    fn biorder_free_survives() {
        let mut olf = CheckSpec::new("olf");
        olf.elements = vec!["a".into(), "b".into(), "a^-1*b^-1*a*b".into()];
        olf.mode = Some(OrderMode::Bi);
        olf.expect = Some(Status::Witnessed);
        let r = run_experiment(&spec("biorder-cg", Scenario::from_halting(HaltingScenario::Never), vec![olf])).unwrap();
        assert!(r.ok, "{r:?}");
    }

    #[test]
    fn torsion_report_and_determinism() {
        let mut t = CheckSpec::new("torsion");
        t.bound = Some(50);
        t.expect = Some(Status::Witnessed);
        let s = spec("torsion-cg", Scenario::from_set(StagedCeSet::all()), vec![t]);
        let a = run_experiment(&s).unwrap();
        let b = run_experiment(&s).unwrap();
        assert!(a.ok);
        assert_eq!(a.fingerprint, b.fingerprint);
    }

    #[test]
    fn errors_are_reported() {
        let s = spec("torsion-cg", Scenario::from_set(StagedCeSet::all()), vec![CheckSpec::new("magic")]);
        assert!(matches!(run_experiment(&s), Err(HarnessError::UnknownChecker(_))));
        let mut z = spec("torsion-cg", Scenario::from_set(StagedCeSet::all()), vec![]);
        z.budget = Some(0);
        assert!(matches!(run_experiment(&z), Err(HarnessError::Budget)));
        // A checker that does not apply is a mismatch, not a crash.
        let w = spec("torsion-cg", Scenario::from_set(StagedCeSet::all()), vec![CheckSpec::new("trivial")]);
        let r = run_experiment(&w).unwrap();
        assert!(!r.ok);
        assert!(r.checks[0].error.is_some());
    }

    #[test]
    fn diagram_elements_resolve_through_generators() {
        let mut g = builtin("cyclic(3)").unwrap();
        let v = olf_on(&mut g, &["a".into()], 3, OrderMode::Left, 0).unwrap();
        assert!(v.is_refuted());
        let Group::Diagram { diagram, .. } = &mut g else { unreachable!() };
        assert_eq!(diagram_element(diagram.as_mut(), "#2").unwrap(), 2);
        assert_eq!(diagram_element(diagram.as_mut(), "a^2").unwrap(), diagram.mul(1, 1).unwrap());
    }

    #[test]
    fn spec_json_round_trip() {
        let text = r#"{"name":"t","construction":"torsion-cg","scenario":{"set":{"kind":"all"}},
            "checks":[{"checker":"torsion","bound":20,"expect":"witnessed"}]}"#;
        let s = ExperimentSpec::from_json(text).unwrap();
        assert_eq!(s.checks[0].expect, Some(Status::Witnessed));
        let back = ExperimentSpec::from_json(&serde_json::to_string(&s).unwrap()).unwrap();
        assert_eq!(back, s);
    }
}
