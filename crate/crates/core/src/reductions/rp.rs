//! Recursive presentations built from a staged c.e. set.
//!
//! Infinite free products and direct sums release block `n` at stage `n`,
//! so every stage emits finitely many generators and relators.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use crate::cesets::StagedCeSet;
use crate::diagrams::Free2Diagram;
use crate::presentations::{fresh_family, PresentationStream, RecursivePresentation};
use crate::words::{commutator, derived_commutator, Generator, Word};

use super::nth_prime;

fn gen_word(g: &Generator) -> Word {
    Word::generator(g.clone())
}

fn block_generator(g: &Generator, block: u32, rename: &HashMap<String, String>) -> Generator {
    let family = rename.get(&g.family).cloned().unwrap_or_else(|| g.family.clone());
    let mut index = vec![block];
    index.extend(&g.index);
    Generator::new(family, index)
}

fn block_word(w: &Word, block: u32, rename: &HashMap<String, String>) -> Word {
    crate::words::reduce(w.letters().iter().map(|l| {
        crate::words::Letter::new(block_generator(&l.generator, block, rename), l.inverse)
    }))
}

struct MarkovStream {
    positive: Arc<dyn PresentationStream>,
    negative: Arc<dyn PresentationStream>,
    rename: HashMap<String, String>,
    set: StagedCeSet,
}

impl PresentationStream for MarkovStream {
    fn new_generators(&self, s: usize) -> Vec<Generator> {
        let mut out = self.positive.new_generators(s);
        for i in 0..=s {
            out.extend(self.negative.new_generators(s - i).iter().map(|g| block_generator(g, i as u32, &self.rename)));
        }
        out
    }

    fn new_relators(&self, s: usize) -> Vec<Word> {
        let mut out = self.positive.new_relators(s);
        for i in 0..=s {
            out.extend(self.negative.new_relators(s - i).iter().map(|r| block_word(r, i as u32, &self.rename)));
        }
        // The n-th enumerated element kills block n; a generator released
        // later in that block is killed as soon as it appears.
        for n in 0..self.set.count_at(s).min(s + 1) {
            let (entered, _) = self.set.nth(n).expect("counted element");
            for t in 0..=(s - n) {
                if entered.max(n + t) == s {
                    out.extend(
                        self.negative
                            .new_generators(t)
                            .iter()
                            .map(|g| gen_word(&block_generator(g, n as u32, &self.rename))),
                    );
                }
            }
        }
        out
    }

    fn families(&self) -> Vec<String> {
        let mut f = self.positive.families();
        f.extend(self.negative.families().iter().map(|x| self.rename.get(x).cloned().unwrap_or_else(|| x.clone())));
        f
    }
}

/// `G₊ ∗ G₋(y₀) ∗ G₋(y₁) ∗ ⋯` where each newly enumerated element kills the
/// next copy of `G₋`. Block `i` renames `g_{idx}` to `g_{i,idx}`; a family of
/// `G₋` that clashes with one of `G₊` is primed.
pub fn markov_rp(
    positive: &RecursivePresentation,
    negative: &RecursivePresentation,
    set: &StagedCeSet,
) -> RecursivePresentation {
    let taken: HashSet<String> = positive.families().into_iter().collect();
    let mut rename = HashMap::new();
    for f in negative.families() {
        let g = fresh_family(&f, &taken);
        if g != f {
            rename.insert(f, g);
        }
    }
    let name = format!("markovRp({}, {})", positive.name(), negative.name());
    RecursivePresentation::from_stream(
        name,
        MarkovStream { positive: positive.stream(), negative: negative.stream(), rename, set: set.clone() },
    )
}

type BlockGens = dyn Fn(u32) -> Vec<Generator> + Send + Sync;
type BlockRels = dyn Fn(u32, usize) -> Vec<Word> + Send + Sync;

/// `⊕ₙ Hₙ` with block `n` released at stage `n`, cross commutators emitted
/// when the later block appears, and block `n` killed when the value `n` is
/// enumerated.
struct DirectSumStream {
    families: Vec<String>,
    gens: Arc<BlockGens>,
    rels: Arc<BlockRels>,
    set: StagedCeSet,
}

impl PresentationStream for DirectSumStream {
    fn new_generators(&self, s: usize) -> Vec<Generator> {
        (self.gens)(s as u32)
    }

    fn new_relators(&self, s: usize) -> Vec<Word> {
        let mut out = Vec::new();
        for n in 0..=s {
            out.extend((self.rels)(n as u32, s - n));
        }
        let fresh = (self.gens)(s as u32);
        for m in 0..s {
            for g in (self.gens)(m as u32) {
                for h in &fresh {
                    out.push(commutator(&gen_word(&g), &gen_word(h)));
                }
            }
        }
        for k in 0..self.set.count_at(s) {
            let (entered, v) = self.set.nth(k).expect("counted element");
            if entered.max(v as usize) == s {
                out.extend((self.gens)(v as u32).iter().map(gen_word));
            }
        }
        out
    }

    fn families(&self) -> Vec<String> {
        self.families.clone()
    }
}

fn direct_sum(
    name: String,
    families: &[&str],
    set: &StagedCeSet,
    gens: impl Fn(u32) -> Vec<Generator> + Send + Sync + 'static,
    rels: impl Fn(u32, usize) -> Vec<Word> + Send + Sync + 'static,
) -> RecursivePresentation {
    RecursivePresentation::from_stream(
        name,
        DirectSumStream {
            families: families.iter().map(|f| f.to_string()).collect(),
            gens: Arc::new(gens),
            rels: Arc::new(rels),
            set: set.clone(),
        },
    )
}

fn x(i: u32) -> Generator {
    Generator::indexed("x", i)
}

/// `ℤ₂^ω = ⟨x₀, x₁, … | x_i², [x_i, x_j]⟩` with `x_k` killed when `k` is enumerated.
pub fn finiteness_rp(set: &StagedCeSet) -> RecursivePresentation {
    direct_sum(
        "finitenessRp".into(),
        &["x"],
        set,
        |n| vec![x(n)],
        |n, t| if t == 0 { vec![gen_word(&x(n)).pow(2)] } else { vec![] },
    )
}

/// `⊕ᵢ ℤ_{pᵢ}` on `x₀, x₁, …` with `x₀` of order 2, `x₁` of order 3, and so
/// on; `x_n` is killed when the value `n` is enumerated.
pub fn cyclic_rp(set: &StagedCeSet) -> RecursivePresentation {
    direct_sum(
        "cyclicRp".into(),
        &["x"],
        set,
        |n| vec![x(n)],
        |n, t| if t == 0 { vec![gen_word(&x(n)).pow(nth_prime(n as usize + 1) as i64)] } else { vec![] },
    )
}

/// `ℤ_p ≀ ℤ_p = ⟨a, t | aᵖ, tᵖ, [a, tⁱat⁻ⁱ] (0 < i < p)⟩`.
pub fn wreath_relators(a: &Word, t: &Word, p: u64) -> Vec<Word> {
    let mut out = vec![a.pow(p as i64), t.pow(p as i64)];
    for i in 1..p as i64 {
        out.push(commutator(a, &a.conjugate_by(&t.pow(i))));
    }
    out
}

/// Direct sum of `ℤ_p ≀ ℤ_p` over the primes `p = 2, 3, 5, …`; block `n`
/// uses the `(n+1)`-th prime and has nilpotency class equal to it.
pub fn nilpotent_rp(set: &StagedCeSet) -> RecursivePresentation {
    let gens = |n: u32| vec![Generator::indexed("a", n), Generator::indexed("t", n)];
    direct_sum("nilpotentRp".into(), &["a", "t"], set, gens, move |n, t| {
        if t > 0 {
            return vec![];
        }
        let g = gens(n);
        wreath_relators(&gen_word(&g[0]), &gen_word(&g[1]), nth_prime(n as usize + 1))
    })
}

/// The `k`-th tuple of `width` naturals, ordered by maximum entry and then
/// lexicographically.
pub fn tuple_by_max(k: u64, width: usize) -> Vec<u64> {
    if width == 0 {
        return vec![];
    }
    let w = width as u32;
    // Tuples with max exactly m: (m+1)^w - m^w.
    let mut m = 0u64;
    let mut before = 0u64;
    loop {
        let count = (m + 1).pow(w) - m.pow(w);
        if k < before + count {
            break;
        }
        before += count;
        m += 1;
    }
    let mut r = k - before;
    let mut out = Vec::with_capacity(width);
    let mut hit = false;
    for pos in 0..width {
        let rest = (width - pos - 1) as u32;
        for d in 0..=m {
            // Completions of the remaining positions that keep the max at m.
            let n = if hit || d == m { (m + 1).pow(rest) } else { (m + 1).pow(rest) - m.pow(rest) };
            if r < n {
                out.push(d);
                hit |= d == m;
                break;
            }
            r -= n;
        }
    }
    out
}

/// The relator released at local stage `t` of the free solvable block of
/// depth `n`: the `t`-th `n`-deep derived commutator over free-group
/// arguments (nonidentity words in shortlex order), skipping those that
/// reduce to the identity.
fn derived_relator(a: &Generator, b: &Generator, depth: u32, t: usize) -> Option<Word> {
    let width = 1usize << depth;
    let mut map = HashMap::new();
    map.insert("a".to_string(), a.family.clone());
    map.insert("b".to_string(), b.family.clone());
    let args: Vec<Word> = tuple_by_max(t as u64, width)
        .iter()
        .map(|&c| {
            let w = Free2Diagram::word(c + 1);
            crate::words::reduce(w.letters().iter().map(|l| {
                let g = if l.generator.family == "a" { a.clone() } else { b.clone() };
                crate::words::Letter::new(g, l.inverse)
            }))
        })
        .collect();
    let w = derived_commutator(depth, &args).expect("arity matches");
    (!w.is_identity()).then_some(w)
}

/// Direct sum of the free solvable groups `F₂/F₂⁽ⁿ⁾`, `n = 0, 1, 2, …`.
/// Block `n` receives one derived commutator per stage, so its relators
/// normally generate `F₂⁽ⁿ⁾` in the limit.
pub fn solvable_rp(set: &StagedCeSet) -> RecursivePresentation {
    let gens = |n: u32| vec![Generator::indexed("a", n), Generator::indexed("b", n)];
    direct_sum("solvableRp".into(), &["a", "b"], set, gens, move |n, t| {
        let g = gens(n);
        derived_relator(&g[0], &g[1], n, t).into_iter().collect()
    })
}

fn power_word(g: &Word, n: u64) -> Word {
    g.pow(n as i64)
}

/// `⟨a, b, c, d | aⁿbaⁿ = cⁿdcⁿ (n ∈ S)⟩`, one relator per enumerated `n`.
pub fn word_problem_rp(set: &StagedCeSet) -> RecursivePresentation {
    let [a, b, c, d] = ["a", "b", "c", "d"].map(|f| gen_word(&Generator::plain(f)));
    let set = set.clone();
    RecursivePresentation::from_stream(
        "wordProblemRp",
        WordProblemStream { gens: [a, b, c, d], set },
    )
}

struct WordProblemStream {
    gens: [Word; 4],
    set: StagedCeSet,
}

impl PresentationStream for WordProblemStream {
    fn new_generators(&self, s: usize) -> Vec<Generator> {
        if s == 0 {
            ["a", "b", "c", "d"].map(Generator::plain).to_vec()
        } else {
            vec![]
        }
    }

    fn new_relators(&self, s: usize) -> Vec<Word> {
        let [a, b, c, d] = &self.gens;
        self.set
            .new_element(s)
            .map(|n| {
                let left = power_word(a, n).mul(b).mul(&power_word(a, n));
                let right = power_word(c, n).mul(d).mul(&power_word(c, n));
                left.mul(&right.inv())
            })
            .into_iter()
            .collect()
    }

    fn families(&self) -> Vec<String> {
        ["a", "b", "c", "d"].map(String::from).to_vec()
    }
}

struct BiorderStream {
    set: StagedCeSet,
}

fn square_relation(i: u32) -> Word {
    let xi = gen_word(&Generator::indexed("x", i));
    let yi = gen_word(&Generator::indexed("y", i));
    xi.pow(2).mul(&yi.pow(-2))
}

impl PresentationStream for BiorderStream {
    fn new_generators(&self, s: usize) -> Vec<Generator> {
        vec![Generator::indexed("x", s as u32), Generator::indexed("y", s as u32)]
    }

    fn new_relators(&self, s: usize) -> Vec<Word> {
        let mut out = Vec::new();
        if s == 0 {
            out.push(square_relation(0));
        }
        if self.set.new_element(s).is_some() {
            let m = self.set.count_at(s) as u32;
            out.push(gen_word(&Generator::indexed("x", m - 1)));
            out.push(gen_word(&Generator::indexed("y", m - 1)));
            out.push(square_relation(m));
        }
        out
    }

    fn families(&self) -> Vec<String> {
        vec!["x".into(), "y".into()]
    }
}

/// Free group on `x₀, y₀, x₁, y₁, …` with `x₀² = y₀²`. The `m`-th
/// enumerated element kills `x_{m-1}, y_{m-1}` and imposes `x_m² = y_m²`.
pub fn biorder_rp(set: &StagedCeSet) -> RecursivePresentation {
    RecursivePresentation::from_stream("biorderRp", BiorderStream { set: set.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagrams::table::Wreath;
    use crate::presentations::RecursivePresentation as RP;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    fn gw(f: &str, idx: &[u32]) -> Word {
        gen_word(&Generator::new(f, idx.to_vec()))
    }

    fn torsion_witnesses() -> (RP, RP) {
        (RP::parse("Z", &["x"], &[]).unwrap(), RP::parse("Z2", &["y_0"], &["y_0^2"]).unwrap())
    }

    #[test]
    fn markov_stream_order() {
        let (p, n) = torsion_witnesses();
        let g = markov_rp(&p, &n, &StagedCeSet::all());
        let rels: Vec<String> = g.relators(3).iter().map(|r| r.to_string()).collect();
        assert_eq!(rels[..5], ["y_{0,0}^2", "y_{1,0}^2", "y_{0,0}", "y_{2,0}^2", "y_{1,0}"]);
    }

    #[test]
    fn markov_all_kills_blocks() {
        let (p, n) = torsion_witnesses();
        let g = markov_rp(&p, &n, &StagedCeSet::all());
        for i in 0..4 {
            assert!(g.is_identity_at(&gw("y", &[i, 0]), 40).unwrap(), "block {i}");
        }
        assert!(!g.is_identity_at(&w("x"), 40).unwrap());
    }

    #[test]
    fn markov_finite_kills_one_block() {
        let (p, n) = torsion_witnesses();
        let g = markov_rp(&p, &n, &StagedCeSet::finite([5]));
        let kills: Vec<Word> = g.relators(30).into_iter().filter(|r| r.len() == 1).collect();
        assert_eq!(kills, vec![gw("y", &[0, 0])]);
        let e = markov_rp(&p, &n, &StagedCeSet::empty());
        assert!(e.relators(30).iter().all(|r| r.len() == 2));
    }

    #[test]
    fn markov_renames_clashing_families() {
        let p = RP::parse("Z", &["x"], &[]).unwrap();
        let n = RP::parse("F", &["x", "y"], &[]).unwrap();
        let g = markov_rp(&p, &n, &StagedCeSet::empty());
        let names: Vec<String> = g.generators(0).iter().map(|x| x.to_string()).collect();
        assert_eq!(names, ["x", "x'_0", "y_0"]);
    }

    #[test]
    fn finiteness_kills_by_value() {
        let g = finiteness_rp(&StagedCeSet::cofinite([0, 1, 2]));
        // 3 enters at stage 1 but x_3 appears at stage 3.
        let st = g.staged_relators(6);
        assert!(st.contains(&(3, gw("x", &[3]))));
        assert!(st.contains(&(4, gw("x", &[4]))));
        assert!(!st.iter().any(|(_, r)| *r == gw("x", &[1])));
    }

    #[test]
    fn cyclic_uses_successive_primes() {
        let g = cyclic_rp(&StagedCeSet::empty());
        let rels = g.relators(2);
        assert!(rels.contains(&gw("x", &[0]).pow(2)));
        assert!(rels.contains(&gw("x", &[1]).pow(3)));
        assert!(rels.contains(&gw("x", &[2]).pow(5)));
        assert!(rels.contains(&commutator(&gw("x", &[0]), &gw("x", &[2]))));
    }

    #[test]
    fn word_problem_schedule() {
        let e = word_problem_rp(&StagedCeSet::empty());
        assert!(e.relators(20).is_empty());
        let f = word_problem_rp(&StagedCeSet::finite([2]));
        let st = f.staged_relators(5);
        assert_eq!(st.len(), 1);
        assert_eq!(st[0].0, 1);
        assert_eq!(st[0].1, w("a^2*b*a^2*c^-2*d^-1*c^-2"));
        let ev = word_problem_rp(&StagedCeSet::evens());
        assert_eq!(ev.relators(3)[1], w("a^2*b*a^2*c^-2*d^-1*c^-2"));
        assert_eq!(ev.relators(3)[0], w("b*d^-1"));
    }

    #[test]
    fn wreath_relators_hold_in_table() {
        for p in [2u64, 3] {
            let wr = Wreath::new(p).unwrap();
            let (t, a) = (wr.generators()[0], wr.generators()[1]);
            for r in wreath_relators(&w("a"), &w("t"), p) {
                let v = r.letters().iter().fold(0, |acc, l| {
                    let x = if l.generator.family == "a" { a } else { t };
                    wr.mul(acc, if l.inverse { wr.inv(x) } else { x })
                });
                assert_eq!(v, 0, "{r}");
            }
        }
    }

    #[test]
    fn tuples_by_max_are_a_bijection() {
        let mut seen = HashSet::new();
        for k in 0..125 {
            let t = tuple_by_max(k, 3);
            assert!(t.iter().all(|&d| d < 5));
            assert!(seen.insert(t));
        }
        assert_eq!(tuple_by_max(0, 2), vec![0, 0]);
        assert_eq!(tuple_by_max(1, 2), vec![0, 1]);
        assert_eq!(tuple_by_max(3, 2), vec![1, 1]);
        assert_eq!(tuple_by_max(4, 2), vec![0, 2]);
    }

    #[test]
    fn solvable_blocks() {
        let g = solvable_rp(&StagedCeSet::empty());
        // Depth 0 kills its generators; depth 1 receives commutators.
        let rels = g.relators(6);
        assert!(rels.contains(&gw("a", &[0])));
        assert!(rels.contains(&commutator(&gw("a", &[1]), &gw("b", &[1]))));
        assert!(!rels.contains(&commutator(&gw("a", &[2]), &gw("b", &[2]))));
    }

    #[test]
    fn biorder_schedule() {
        let g = biorder_rp(&StagedCeSet::finite([4]));
        let st = g.staged_relators(5);
        assert_eq!(
            st,
            vec![
                (0, w("x_0^2*y_0^-2")),
                (1, gw("x", &[0])),
                (1, gw("y", &[0])),
                (1, w("x_1^2*y_1^-2")),
            ]
        );
        let e = biorder_rp(&StagedCeSet::empty());
        assert_eq!(e.relators(10), vec![w("x_0^2*y_0^-2")]);
    }
}
