//! Modal mu-calculus with forward (`<A>f`) and backward (`f<A>`) modalities,
//! evaluated over an [`Lts`](crate::lts::Lts) by bit-set fixpoint iteration.
//!
//! Concrete syntax, loosest to tightest:
//!
//! | form | meaning |
//! |------|---------|
//! | `min X \| f`, `max X \| f` | least / greatest fixpoint, body extends to the right |
//! | `f => g`, `f <=> g` | implication, equivalence (right-associative) |
//! | `f \/ g` | disjunction |
//! | `f /\ g` | conjunction |
//! | `-f`, `<A> f` | negation, forward diamond |
//! | `f <A>`, `f o A`, `f * A` | backward diamond, its alias, backward reachability closure |
//! | `T`, `` `0 ``, `X`, `(f)` | all states, initial state, variable |
//!
//! `f o Tick` abbreviates `(f o t) * (-t)`.

mod check;
mod eval;
mod parse;
mod print;

use std::collections::BTreeSet;

pub use check::{check_closed, check_monotone, FormulaError};
pub use eval::{eval_mu, eval_mu_with_stats, is_tautology, EvalStats, Tautology};
pub use parse::parse_mu;

use crate::lts::LabelExpr;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum MuFormula {
    True,
    /// The initial state.
    InitConst,
    Var(String),
    Not(Box<MuFormula>),
    And(Box<MuFormula>, Box<MuFormula>),
    Or(Box<MuFormula>, Box<MuFormula>),
    Implies(Box<MuFormula>, Box<MuFormula>),
    Iff(Box<MuFormula>, Box<MuFormula>),
    /// `<A> f`: states with an `A`-successor satisfying `f`.
    FwdDiamond(LabelExpr, Box<MuFormula>),
    /// `f <A>`: states with an `A`-predecessor satisfying `f`.
    BwdDiamond(Box<MuFormula>, LabelExpr),
    Min(String, Box<MuFormula>),
    Max(String, Box<MuFormula>),
    /// `f o A`, same meaning as `f <A>`.
    SuffixO(Box<MuFormula>, LabelExpr),
    /// `f * A`, i.e. `min X | f \/ X<A>`.
    SuffixStar(Box<MuFormula>, LabelExpr),
}

impl MuFormula {
    pub fn var(name: impl Into<String>) -> Self {
        MuFormula::Var(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: MuFormula) -> Self {
        MuFormula::Not(Box::new(f))
    }

    pub fn and(l: MuFormula, r: MuFormula) -> Self {
        MuFormula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: MuFormula, r: MuFormula) -> Self {
        MuFormula::Or(Box::new(l), Box::new(r))
    }

    pub fn implies(l: MuFormula, r: MuFormula) -> Self {
        MuFormula::Implies(Box::new(l), Box::new(r))
    }

    pub fn iff(l: MuFormula, r: MuFormula) -> Self {
        MuFormula::Iff(Box::new(l), Box::new(r))
    }

    pub fn fwd(a: LabelExpr, f: MuFormula) -> Self {
        MuFormula::FwdDiamond(a, Box::new(f))
    }

    pub fn bwd(f: MuFormula, a: LabelExpr) -> Self {
        MuFormula::BwdDiamond(Box::new(f), a)
    }

    pub fn min(x: impl Into<String>, body: MuFormula) -> Self {
        MuFormula::Min(x.into(), Box::new(body))
    }

    pub fn max(x: impl Into<String>, body: MuFormula) -> Self {
        MuFormula::Max(x.into(), Box::new(body))
    }

    pub fn suffix_o(f: MuFormula, a: LabelExpr) -> Self {
        MuFormula::SuffixO(Box::new(f), a)
    }

    pub fn suffix_star(f: MuFormula, a: LabelExpr) -> Self {
        MuFormula::SuffixStar(Box::new(f), a)
    }

    /// `(f o t) * (-t)`.
    pub fn suffix_tick(f: MuFormula) -> Self {
        let t = LabelExpr::atom(crate::lts::TICK);
        MuFormula::suffix_star(MuFormula::suffix_o(f, t.clone()), LabelExpr::not(t))
    }

    /// Every variable name appearing in the formula, bound or free.
    pub fn variable_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            MuFormula::Var(x) | MuFormula::Min(x, _) | MuFormula::Max(x, _) => {
                out.insert(x.clone());
            }
            _ => {}
        });
        out
    }

    fn visit(&self, on: &mut impl FnMut(&MuFormula)) {
        on(self);
        match self {
            MuFormula::True | MuFormula::InitConst | MuFormula::Var(_) => {}
            MuFormula::Not(f)
            | MuFormula::FwdDiamond(_, f)
            | MuFormula::BwdDiamond(f, _)
            | MuFormula::Min(_, f)
            | MuFormula::Max(_, f)
            | MuFormula::SuffixO(f, _)
            | MuFormula::SuffixStar(f, _) => f.visit(on),
            MuFormula::And(l, r)
            | MuFormula::Or(l, r)
            | MuFormula::Implies(l, r)
            | MuFormula::Iff(l, r) => {
                l.visit(on);
                r.visit(on);
            }
        }
    }

    /// Rewrites the derived suffix operators into core forms. Fresh fixpoint
    /// variables are named `X0`, `X1`, ... in left-to-right order, skipping
    /// names already used in the formula.
    pub fn normalize(&self) -> MuFormula {
        let used = self.variable_names();
        let mut next = 0usize;
        let mut fresh = || loop {
            let name = format!("X{next}");
            next += 1;
            if !used.contains(&name) {
                return name;
            }
        };
        fn go(f: &MuFormula, fresh: &mut dyn FnMut() -> String) -> MuFormula {
            use MuFormula as M;
            match f {
                M::True => M::True,
                M::InitConst => M::InitConst,
                M::Var(x) => M::Var(x.clone()),
                M::Not(g) => M::not(go(g, fresh)),
                M::And(l, r) => M::and(go(l, fresh), go(r, fresh)),
                M::Or(l, r) => M::or(go(l, fresh), go(r, fresh)),
                M::Implies(l, r) => M::implies(go(l, fresh), go(r, fresh)),
                M::Iff(l, r) => M::iff(go(l, fresh), go(r, fresh)),
                M::FwdDiamond(a, g) => M::fwd(a.clone(), go(g, fresh)),
                M::BwdDiamond(g, a) | M::SuffixO(g, a) => M::bwd(go(g, fresh), a.clone()),
                M::Min(x, g) => M::min(x.clone(), go(g, fresh)),
                M::Max(x, g) => M::max(x.clone(), go(g, fresh)),
                M::SuffixStar(g, a) => {
                    let x = fresh();
                    let inner = go(g, fresh);
                    M::min(x.clone(), M::or(inner, M::bwd(M::Var(x), a.clone())))
                }
            }
        }
        go(self, &mut fresh)
    }
}
