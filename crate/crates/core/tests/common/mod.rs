//! Random generators and brute-force reference semantics shared by the
//! integration tests. Nothing here calls the library's evaluators.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use rand::seq::SliceRandom;
use rand::Rng;

use obscheck::lts::{LabelExpr, Lts};
use obscheck::mucalc::MuFormula;
use obscheck::pathregex::{Nfa, PathRegex, Step};

pub const ALPHABET: [&str; 4] = ["a", "b", "t", "z"];

pub fn random_lts(rng: &mut impl Rng, max_states: usize, labels: &[&str]) -> Lts {
    let n = rng.gen_range(1..=max_states);
    let density = rng.gen_range(0.5..2.5);
    let m = ((n as f64) * density).round() as usize;
    let mut edges = Vec::new();
    for _ in 0..m {
        let l = *labels.choose(rng).expect("labels");
        edges.push((rng.gen_range(0..n), l, rng.gen_range(0..n)));
    }
    Lts::from_edges(n, rng.gen_range(0..n), edges).expect("valid edges")
}

pub fn random_label(rng: &mut impl Rng, depth: u32, labels: &[&str]) -> LabelExpr {
    if depth == 0 || rng.gen_bool(0.5) {
        return if rng.gen_bool(0.1) {
            LabelExpr::Top
        } else {
            LabelExpr::atom(*labels.choose(rng).expect("labels"))
        };
    }
    match rng.gen_range(0..3) {
        0 => LabelExpr::not(random_label(rng, depth - 1, labels)),
        1 => LabelExpr::and(
            random_label(rng, depth - 1, labels),
            random_label(rng, depth - 1, labels),
        ),
        _ => LabelExpr::or(
            random_label(rng, depth - 1, labels),
            random_label(rng, depth - 1, labels),
        ),
    }
}

/// Random path expression of nesting depth at most `depth`.
pub fn random_regex(rng: &mut impl Rng, depth: usize, labels: &[&str]) -> PathRegex {
    if depth == 0 || rng.gen_bool(0.15) {
        return PathRegex::Eps;
    }
    if rng.gen_bool(0.2) {
        let l = random_regex(rng, depth - 1, labels);
        let r = random_regex(rng, depth - 1, labels);
        return PathRegex::union(l, r);
    }
    let prefix = random_regex(rng, depth - 1, labels);
    let step = match rng.gen_range(0..5) {
        0 | 1 => Step::One(random_label(rng, 2, labels)),
        2 | 3 => Step::Star(random_label(rng, 2, labels)),
        _ => Step::Tick,
    };
    prefix.then(step)
}

/// Random closed formula with at most `fixpoints` fixpoint operators
/// (stars included). With `monotone`, negation only wraps variable-free
/// subformulas.
pub fn random_formula(
    rng: &mut impl Rng,
    depth: u32,
    labels: &[&str],
    monotone: bool,
    fixpoints: u32,
) -> MuFormula {
    let mut bound = Vec::new();
    let mut g = Gen {
        labels,
        monotone,
        budget: fixpoints,
    };
    g.formula(rng, depth, &mut bound)
}

struct Gen<'a> {
    labels: &'a [&'a str],
    monotone: bool,
    budget: u32,
}

impl Gen<'_> {
    fn formula(&mut self, rng: &mut impl Rng, depth: u32, bound: &mut Vec<String>) -> MuFormula {
        let (labels, monotone) = (self.labels, self.monotone);
        if depth == 0 || rng.gen_bool(0.2) {
            return match rng.gen_range(0..3) {
                0 if !bound.is_empty() => {
                    MuFormula::var(bound.choose(rng).expect("nonempty").clone())
                }
                0 | 1 => MuFormula::True,
                _ => MuFormula::InitConst,
            };
        }
        let d = depth - 1;
        match rng.gen_range(0..11) {
            0 => {
                if monotone {
                    let mut none = Vec::new();
                    MuFormula::not(self.formula(rng, d, &mut none))
                } else {
                    MuFormula::not(self.formula(rng, d, bound))
                }
            }
            1 => MuFormula::and(self.formula(rng, d, bound), self.formula(rng, d, bound)),
            2 => MuFormula::or(self.formula(rng, d, bound), self.formula(rng, d, bound)),
            3 if !monotone => {
                let l = self.formula(rng, d, bound);
                let r = self.formula(rng, d, bound);
                if rng.gen_bool(0.5) {
                    MuFormula::implies(l, r)
                } else {
                    MuFormula::iff(l, r)
                }
            }
            3 | 4 => {
                let l = random_label(rng, 1, labels);
                MuFormula::fwd(l, self.formula(rng, d, bound))
            }
            5 => {
                let l = random_label(rng, 1, labels);
                MuFormula::bwd(self.formula(rng, d, bound), l)
            }
            6 => {
                let l = random_label(rng, 1, labels);
                MuFormula::suffix_o(self.formula(rng, d, bound), l)
            }
            7 | 9 | 10 if self.budget == 0 => {
                let l = random_label(rng, 1, labels);
                MuFormula::fwd(l, self.formula(rng, d, bound))
            }
            7 => {
                self.budget -= 1;
                let l = random_label(rng, 1, labels);
                MuFormula::suffix_star(self.formula(rng, d, bound), l)
            }
            8 => MuFormula::suffix_tick(self.formula(rng, d, bound)),
            _ => {
                self.budget -= 1;
                let x = format!("V{}", bound.len());
                bound.push(x.clone());
                let body = self.formula(rng, d, bound);
                bound.pop();
                if rng.gen_bool(0.5) {
                    MuFormula::min(x, body)
                } else {
                    MuFormula::max(x, body)
                }
            }
        }
    }
}

pub type Set = BTreeSet<usize>;

fn edges(g: &Lts) -> Vec<(usize, String, usize)> {
    g.transitions()
        .iter()
        .map(|t| (t.src, g.label_name(t.label).to_string(), t.dst))
        .collect()
}

/// Reference semantics over bitmask sets. `f * A` is a forward closure;
/// `min`/`max` are solved by enumerating every subset of states (least = intersection of all pre-fixed points,
/// greatest = union of all post-fixed points).
pub struct BruteForce {
    n: usize,
    init: usize,
    edges: Vec<(usize, String, usize)>,
}

impl BruteForce {
    pub fn new(g: &Lts) -> Self {
        assert!(
            g.num_states() <= 8,
            "exhaustive semantics needs a tiny graph"
        );
        BruteForce {
            n: g.num_states(),
            init: g.initial(),
            edges: edges(g),
        }
    }

    fn all(&self) -> u64 {
        (1u64 << self.n) - 1
    }

    pub fn eval_set(&self, f: &MuFormula) -> Set {
        let bits = self.eval(f, &mut HashMap::new());
        (0..self.n).filter(|i| bits >> i & 1 == 1).collect()
    }

    fn eval(&self, f: &MuFormula, env: &mut HashMap<String, u64>) -> u64 {
        match f {
            MuFormula::True => self.all(),
            MuFormula::InitConst => 1 << self.init,
            MuFormula::Var(x) => env[x],
            MuFormula::Not(g) => self.all() & !self.eval(g, env),
            MuFormula::And(l, r) => self.eval(l, env) & self.eval(r, env),
            MuFormula::Or(l, r) => self.eval(l, env) | self.eval(r, env),
            MuFormula::Implies(l, r) => self.all() & (!self.eval(l, env) | self.eval(r, env)),
            MuFormula::Iff(l, r) => self.all() & !(self.eval(l, env) ^ self.eval(r, env)),
            MuFormula::FwdDiamond(a, g) => {
                let s = self.eval(g, env);
                self.edges
                    .iter()
                    .filter(|(_, l, d)| a.eval(l) && s >> d & 1 == 1)
                    .fold(0, |acc, (src, _, _)| acc | 1 << src)
            }
            MuFormula::BwdDiamond(g, a) | MuFormula::SuffixO(g, a) => {
                let s = self.eval(g, env);
                self.edges
                    .iter()
                    .filter(|(src, l, _)| a.eval(l) && s >> src & 1 == 1)
                    .fold(0, |acc, (_, _, d)| acc | 1 << d)
            }
            MuFormula::SuffixStar(g, a) => {
                let mut s = self.eval(g, env);
                loop {
                    let next = self
                        .edges
                        .iter()
                        .filter(|(src, l, _)| a.eval(l) && s >> src & 1 == 1)
                        .fold(s, |acc, (_, _, d)| acc | 1 << d);
                    if next == s {
                        break s;
                    }
                    s = next;
                }
            }
            MuFormula::Min(x, body) => self.lfp(x, body, env),
            MuFormula::Max(x, body) => self.gfp(x, body, env),
        }
    }

    fn lfp(&self, x: &str, body: &MuFormula, env: &mut HashMap<String, u64>) -> u64 {
        let prev = env.get(x).copied();
        let mut acc = self.all();
        for s in 0..=self.all() {
            env.insert(x.to_string(), s);
            if self.eval(body, env) & !s == 0 {
                acc &= s;
            }
        }
        restore(env, x, prev);
        acc
    }

    fn gfp(&self, x: &str, body: &MuFormula, env: &mut HashMap<String, u64>) -> u64 {
        let prev = env.get(x).copied();
        let mut acc = 0;
        for s in 0..=self.all() {
            env.insert(x.to_string(), s);
            if s & !self.eval(body, env) == 0 {
                acc |= s;
            }
        }
        restore(env, x, prev);
        acc
    }
}

fn restore(env: &mut HashMap<String, u64>, x: &str, prev: Option<u64>) {
    match prev {
        Some(p) => {
            env.insert(x.to_string(), p);
        }
        None => {
            env.remove(x);
        }
    }
}

/// States from which an `e` edge is reachable through `internal` edges, by
/// backward breadth-first search.
pub fn bfs_reach(g: &Lts, e: &LabelExpr, internal: &LabelExpr) -> Set {
    let es = edges(g);
    let mut out: Set = es
        .iter()
        .filter(|(_, l, _)| e.eval(l))
        .map(|(s, _, _)| *s)
        .collect();
    let mut frontier: Vec<usize> = out.iter().copied().collect();
    while let Some(d) = frontier.pop() {
        for (s, l, t) in &es {
            if *t == d && internal.eval(l) && out.insert(*s) {
                frontier.push(*s);
            }
        }
    }
    out
}

/// Every word over `alphabet` of length at most `max_len`.
pub fn all_words(alphabet: &[&str], max_len: usize) -> Vec<Vec<String>> {
    let mut out = vec![Vec::new()];
    let mut layer: Vec<Vec<String>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for a in alphabet {
                let mut v = w.clone();
                v.push(a.to_string());
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// End states by breadth-first search over the product of `g` with the
/// automaton of `r`.
pub fn product_end(g: &Lts, r: &PathRegex) -> Set {
    let nfa = Nfa::compile(r);
    let es = edges(g);
    let mut seen = BTreeSet::from([(nfa.initial, g.initial())]);
    let mut queue = std::collections::VecDeque::from([(nfa.initial, g.initial())]);
    let mut out = Set::new();
    while let Some((p, q)) = queue.pop_front() {
        if nfa.accepting[p] {
            out.insert(q);
        }
        for (p0, a, p1) in &nfa.edges {
            if *p0 != p {
                continue;
            }
            for (s, l, d) in &es {
                if *s == q && a.eval(l) && seen.insert((*p1, *d)) {
                    queue.push_back((*p1, *d));
                }
            }
        }
    }
    out
}

/// Initial state plus the end states of every prefix sub-expression.
pub fn product_visited(g: &Lts, r: &PathRegex) -> Set {
    match r {
        PathRegex::Eps => Set::from([g.initial()]),
        PathRegex::Seq(prefix, _) => product_visited(g, prefix)
            .union(&product_end(g, r))
            .copied()
            .collect(),
        PathRegex::Union(l, rr) => product_visited(g, l)
            .union(&product_visited(g, rr))
            .copied()
            .collect(),
    }
}
