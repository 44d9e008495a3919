//! First-order formulas over finite discrete traces.
//!
//! Formulas talk about words over event labels, `t` (one time unit) and `z`.
//! Quantified variables must be anchored: each one is a part of some
//! concatenation `x = y z` whose whole is the free variable or another
//! anchored variable. Quantifiers then range over subwords of the words
//! already bound, which keeps evaluation finite.

mod eval;

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

pub use eval::{eval_fott, Assignment};

use crate::lts::{LabelExpr, TICK};
use crate::pathregex::{PathRegex, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FottError {
    #[error("interval {0} contains no natural number")]
    EmptyInterval(Interval),
    #[error("quantified variable `{0}` is not anchored to the free variable")]
    Unanchored(String),
    #[error("variable `{0}` is not bound")]
    Unbound(String),
    #[error("no value assigned to free variable `{0}`")]
    Unassigned(String),
    #[error("the two events of a pattern must differ, got `{0}` twice")]
    SameEvent(String),
}

/// Interval over the naturals; `upper == None` is infinity (always open).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Interval {
    pub lower: u64,
    pub lower_open: bool,
    pub upper: Option<u64>,
    pub upper_open: bool,
}

/// Inclusive range of tick counts; `hi == None` is unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TickRange {
    pub lo: u64,
    pub hi: Option<u64>,
}

impl Interval {
    pub fn new(lower: u64, lower_open: bool, upper: Option<u64>, upper_open: bool) -> Self {
        Interval {
            lower,
            lower_open,
            upper,
            upper_open: upper_open || upper.is_none(),
        }
    }

    /// `[lo, hi[`
    pub fn closed_open(lo: u64, hi: u64) -> Self {
        Interval::new(lo, false, Some(hi), true)
    }

    /// `[lo, hi]`
    pub fn closed(lo: u64, hi: u64) -> Self {
        Interval::new(lo, false, Some(hi), false)
    }

    /// `[lo, inf[`
    pub fn at_least(lo: u64) -> Self {
        Interval::new(lo, false, None, true)
    }

    pub fn contains(&self, k: u64) -> bool {
        let above = if self.lower_open {
            k > self.lower
        } else {
            k >= self.lower
        };
        let below = match self.upper {
            None => true,
            Some(u) if self.upper_open => k < u,
            Some(u) => k <= u,
        };
        above && below
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let open = if self.lower_open { "]" } else { "[" };
        match self.upper {
            None => write!(f, "{open}{},inf[", self.lower),
            Some(u) => {
                let close = if self.upper_open { "[" } else { "]" };
                write!(f, "{open}{},{u}{close}", self.lower)
            }
        }
    }
}

/// Integer tick counts admitted by `i`.
pub fn interval_ticks(i: &Interval) -> Result<TickRange, FottError> {
    let lo = i.lower + u64::from(i.lower_open);
    let hi = match i.upper {
        None => None,
        Some(u) if i.upper_open => match u.checked_sub(1) {
            Some(h) => Some(h),
            None => return Err(FottError::EmptyInterval(*i)),
        },
        Some(u) => Some(u),
    };
    if matches!(hi, Some(h) if h < lo) {
        return Err(FottError::EmptyInterval(*i));
    }
    Ok(TickRange { lo, hi })
}

/// Duration of a word: its number of `t` symbols.
pub fn delta(w: &Word) -> u64 {
    w.symbols().iter().filter(|s| *s == TICK).count() as u64
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FottFormula {
    And(Box<FottFormula>, Box<FottFormula>),
    Not(Box<FottFormula>),
    Exists(String, Box<FottFormula>),
    /// `x = w`
    EqLit(String, Word),
    /// `x = y z`
    EqCat(String, String, String),
    DurIn(String, Interval),
}

impl FottFormula {
    pub fn and(l: FottFormula, r: FottFormula) -> Self {
        FottFormula::And(Box::new(l), Box::new(r))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: FottFormula) -> Self {
        FottFormula::Not(Box::new(f))
    }

    pub fn or(l: FottFormula, r: FottFormula) -> Self {
        FottFormula::not(FottFormula::and(FottFormula::not(l), FottFormula::not(r)))
    }

    pub fn exists(x: impl Into<String>, f: FottFormula) -> Self {
        FottFormula::Exists(x.into(), Box::new(f))
    }

    pub fn exists_all<S: Into<String>>(xs: impl IntoIterator<Item = S>, f: FottFormula) -> Self {
        let xs: Vec<String> = xs.into_iter().map(Into::into).collect();
        xs.into_iter()
            .rev()
            .fold(f, |acc, x| FottFormula::exists(x, acc))
    }

    pub fn eq_lit(x: impl Into<String>, w: Word) -> Self {
        FottFormula::EqLit(x.into(), w)
    }

    pub fn eq_cat(x: impl Into<String>, y: impl Into<String>, z: impl Into<String>) -> Self {
        FottFormula::EqCat(x.into(), y.into(), z.into())
    }

    pub fn dur_in(x: impl Into<String>, i: Interval) -> Self {
        FottFormula::DurIn(x.into(), i)
    }

    pub fn conj(parts: impl IntoIterator<Item = FottFormula>) -> Self {
        parts
            .into_iter()
            .reduce(FottFormula::and)
            .expect("empty conjunction")
    }

    /// `e` does not occur in `x`: `-(exists p, s, m, q . x = p s /\ s = m q /\ m = e)`.
    /// Helper variables are named after `x`.
    pub fn not_in(event: &str, x: &str) -> Self {
        let [p, s, m, q] = ["pre", "suf", "mid", "post"].map(|k| format!("{x}.{k}"));
        let body = FottFormula::conj([
            FottFormula::eq_cat(x, &p, &s),
            FottFormula::eq_cat(&s, &m, &q),
            FottFormula::eq_lit(&m, Word::new([event])),
        ]);
        FottFormula::not(FottFormula::exists_all(
            [p.clone(), s.clone(), m.clone(), q.clone()],
            body,
        ))
    }

    /// The scope after the first `event` in `x`: `x = y event scope` with no
    /// `event` in `y`. `y` and `scope` stay free in the result.
    pub fn after_scope(y: &str, event: &str, scope: &str, x: &str) -> Self {
        let rest = format!("{x}.rest");
        let ev = format!("{x}.ev");
        FottFormula::exists_all(
            [rest.clone(), ev.clone()],
            FottFormula::conj([
                FottFormula::eq_cat(x, y, &rest),
                FottFormula::eq_cat(&rest, &ev, scope),
                FottFormula::eq_lit(&ev, Word::new([event])),
                FottFormula::not_in(event, y),
            ]),
        )
    }

    fn collect_cats<'a>(&'a self, out: &mut Vec<(&'a str, &'a str, &'a str)>) {
        match self {
            FottFormula::And(l, r) => {
                l.collect_cats(out);
                r.collect_cats(out);
            }
            FottFormula::Not(f) | FottFormula::Exists(_, f) => f.collect_cats(out),
            FottFormula::EqCat(x, y, z) => out.push((x, y, z)),
            FottFormula::EqLit(..) | FottFormula::DurIn(..) => {}
        }
    }

    fn check_scopes(
        &self,
        scope: &mut Vec<String>,
        anchored: &BTreeSet<&str>,
    ) -> Result<(), FottError> {
        let bound = |x: &str, scope: &Vec<String>| {
            if scope.iter().any(|s| s == x) {
                Ok(())
            } else {
                Err(FottError::Unbound(x.to_string()))
            }
        };
        match self {
            FottFormula::And(l, r) => {
                l.check_scopes(scope, anchored)?;
                r.check_scopes(scope, anchored)
            }
            FottFormula::Not(f) => f.check_scopes(scope, anchored),
            FottFormula::Exists(x, f) => {
                if !anchored.contains(x.as_str()) {
                    return Err(FottError::Unanchored(x.clone()));
                }
                scope.push(x.clone());
                let res = f.check_scopes(scope, anchored);
                scope.pop();
                res
            }
            FottFormula::EqLit(x, _) | FottFormula::DurIn(x, _) => bound(x, scope),
            FottFormula::EqCat(x, y, z) => {
                bound(x, scope)?;
                bound(y, scope)?;
                bound(z, scope)
            }
        }
    }
}

/// A formula with exactly one designated free variable, checked anchored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fott {
    free: String,
    formula: FottFormula,
}

impl Fott {
    pub fn new(free: impl Into<String>, formula: FottFormula) -> Result<Self, FottError> {
        let free = free.into();
        let mut cats = Vec::new();
        formula.collect_cats(&mut cats);
        let mut anchored: BTreeSet<&str> = BTreeSet::from([free.as_str()]);
        loop {
            let before = anchored.len();
            for (x, y, z) in &cats {
                if anchored.contains(x) {
                    anchored.insert(y);
                    anchored.insert(z);
                }
            }
            if anchored.len() == before {
                break;
            }
        }
        formula.check_scopes(&mut vec![free.clone()], &anchored)?;
        Ok(Fott { free, formula })
    }

    pub fn free_var(&self) -> &str {
        &self.free
    }

    pub fn formula(&self) -> &FottFormula {
        &self.formula
    }
}

fn check_events(a: &str, b: &str) -> Result<(), FottError> {
    if a == b {
        Err(FottError::SameEvent(a.to_string()))
    } else {
        Ok(())
    }
}

/// `a` occurs after the first `b` with a delay in `i`, or `b` never occurs:
/// `(b not in x) \/ exists y, z, w . x = y b z a w /\ (b not in y) /\ D(z) in i`.
pub fn present_fott(a: &str, b: &str, i: &Interval) -> Result<Fott, FottError> {
    check_events(a, b)?;
    interval_ticks(i)?;
    // x = y r1, r1 = b1 r2, r2 = z r3, r3 = a1 w
    let body = FottFormula::conj([
        FottFormula::eq_cat("x", "y", "r1"),
        FottFormula::eq_cat("r1", "b1", "r2"),
        FottFormula::eq_lit("b1", Word::new([b])),
        FottFormula::eq_cat("r2", "z", "r3"),
        FottFormula::eq_cat("r3", "a1", "w"),
        FottFormula::eq_lit("a1", Word::new([a])),
        FottFormula::not_in(b, "y"),
        FottFormula::dur_in("z", *i),
    ]);
    let vars = ["y", "r1", "b1", "r2", "z", "r3", "a1", "w"];
    let witnessed = FottFormula::exists_all(vars, body);
    Fott::new("x", FottFormula::or(FottFormula::not_in(b, "x"), witnessed))
}

/// Regex with the same language as [`present_fott`]:
/// `(-b)* \/ (-b)* . b . (-t)* . Tick^k . a . T*` for each admitted `k`, or
/// `... . Tick^lo . T* . a . T*` when the window is unbounded.
pub fn present_regex(a: &str, b: &str, i: &Interval) -> Result<PathRegex, FottError> {
    check_events(a, b)?;
    let range = interval_ticks(i)?;
    let not_b = LabelExpr::not(LabelExpr::atom(b));
    let not_t = LabelExpr::not(LabelExpr::atom(TICK));
    let r1 = PathRegex::Eps.star(not_b.clone());
    let branch = |k: u64, unbounded: bool| {
        let mut r = PathRegex::Eps
            .star(not_b.clone())
            .one(LabelExpr::atom(b))
            .star(not_t.clone());
        for _ in 0..k {
            r = r.tick();
        }
        if unbounded {
            r = r.star(LabelExpr::Top);
        }
        r.one(LabelExpr::atom(a)).star(LabelExpr::Top)
    };
    let branches: Vec<PathRegex> = match range.hi {
        Some(hi) => (range.lo..=hi).map(|k| branch(k, false)).collect(),
        None => vec![branch(range.lo, true)],
    };
    Ok(branches.into_iter().fold(r1, PathRegex::union))
}
