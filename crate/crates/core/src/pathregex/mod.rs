//! Regular path expressions over label expressions.
//!
//! The grammar is restricted to what the mu-calculus encoding covers:
//! single label-expression steps, stars over a label expression, the `Tick`
//! macro (`t . (-t)*`), union and the empty expression. Sequences are
//! left-nested, so every expression reads `((eps . s1) . s2) ...`.

mod nfa;
mod oracle;
mod parse;

use std::fmt;
use std::str::FromStr;

pub use nfa::Nfa;
pub use oracle::{oracle_end_states, oracle_visited_states};
pub use parse::parse_regex;

use crate::lts::{LabelExpr, TICK};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Step {
    One(LabelExpr),
    Star(LabelExpr),
    Tick,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PathRegex {
    Eps,
    Seq(Box<PathRegex>, Step),
    Union(Box<PathRegex>, Box<PathRegex>),
}

impl PathRegex {
    pub fn then(self, step: Step) -> PathRegex {
        PathRegex::Seq(Box::new(self), step)
    }

    pub fn one(self, a: LabelExpr) -> PathRegex {
        self.then(Step::One(a))
    }

    pub fn star(self, a: LabelExpr) -> PathRegex {
        self.then(Step::Star(a))
    }

    pub fn tick(self) -> PathRegex {
        self.then(Step::Tick)
    }

    pub fn union(l: PathRegex, r: PathRegex) -> PathRegex {
        PathRegex::Union(Box::new(l), Box::new(r))
    }

    /// Replaces every `Tick` by `t` followed by `(-t)*`.
    pub fn expand_tick(&self) -> PathRegex {
        match self {
            PathRegex::Eps => PathRegex::Eps,
            PathRegex::Seq(r, Step::Tick) => {
                let t = LabelExpr::atom(TICK);
                r.expand_tick().one(t.clone()).star(LabelExpr::not(t))
            }
            PathRegex::Seq(r, s) => r.expand_tick().then(s.clone()),
            PathRegex::Union(l, r) => PathRegex::union(l.expand_tick(), r.expand_tick()),
        }
    }

    pub fn has_tick(&self) -> bool {
        match self {
            PathRegex::Eps => false,
            PathRegex::Seq(_, Step::Tick) => true,
            PathRegex::Seq(r, _) => r.has_tick(),
            PathRegex::Union(l, r) => l.has_tick() || r.has_tick(),
        }
    }

    /// Nesting depth: `eps` is 0, each step or union adds one.
    pub fn depth(&self) -> usize {
        match self {
            PathRegex::Eps => 0,
            PathRegex::Seq(r, _) => 1 + r.depth(),
            PathRegex::Union(l, r) => 1 + l.depth().max(r.depth()),
        }
    }

    /// Whether `w` belongs to the language. Computes, for each prefix length,
    /// whether that prefix is matched; independent of the [`Nfa`] route.
    pub fn match_word(&self, w: &Word) -> bool {
        let ends = prefix_ends(&self.expand_tick(), &w.0);
        ends[w.len()]
    }
}

fn prefix_ends(r: &PathRegex, w: &[String]) -> Vec<bool> {
    match r {
        PathRegex::Eps => {
            let mut v = vec![false; w.len() + 1];
            v[0] = true;
            v
        }
        PathRegex::Seq(r, step) => {
            let prev = prefix_ends(r, w);
            let mut v = vec![false; w.len() + 1];
            match step {
                Step::One(a) => {
                    for i in 0..w.len() {
                        if prev[i] && a.eval(&w[i]) {
                            v[i + 1] = true;
                        }
                    }
                }
                Step::Star(a) => {
                    for i in 0..=w.len() {
                        v[i] |= prev[i];
                        if v[i] && i < w.len() && a.eval(&w[i]) {
                            v[i + 1] = true;
                        }
                    }
                }
                Step::Tick => unreachable!("expanded before matching"),
            }
            v
        }
        PathRegex::Union(l, r) => prefix_ends(l, w)
            .into_iter()
            .zip(prefix_ends(r, w))
            .map(|(a, b)| a || b)
            .collect(),
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::One(a) => f.write_str(&a.primary_string()),
            Step::Star(a) => write!(f, "{}*", a.primary_string()),
            Step::Tick => f.write_str("Tick"),
        }
    }
}

impl fmt::Display for PathRegex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PathRegex::Eps => f.write_str("eps"),
            PathRegex::Seq(r, s) => match **r {
                PathRegex::Eps => write!(f, "{s}"),
                PathRegex::Union(..) => write!(f, "({r}) . {s}"),
                _ => write!(f, "{r} . {s}"),
            },
            PathRegex::Union(l, r) => match **r {
                PathRegex::Union(..) => write!(f, "{l} \\/ ({r})"),
                _ => write!(f, "{l} \\/ {r}"),
            },
        }
    }
}

impl FromStr for PathRegex {
    type Err = crate::syntax::ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_regex(s)
    }
}

/// A finite discrete trace: events, `t` ticks and `z` silent steps.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<String>);

impl Word {
    pub fn new<S: Into<String>>(symbols: impl IntoIterator<Item = S>) -> Self {
        Word(symbols.into_iter().map(Into::into).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[String] {
        &self.0
    }
}

/// Whitespace-separated symbols; the empty string is the empty word.
impl FromStr for Word {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(Word::new(s.split_whitespace()))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.join(" "))
    }
}
