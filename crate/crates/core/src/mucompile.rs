//! Encoding of path expressions as mu-calculus formulas.
//!
//! `compile_end(r)` holds exactly in the states where some run spelling a
//! word of `r` may end; `compile_visited(r)` in the states reached by some
//! step-boundary prefix of such a run.

use crate::lts::{LabelExpr, TICK};
use crate::mucalc::MuFormula;
use crate::pathregex::{PathRegex, Step};

pub fn compile_end(r: &PathRegex) -> MuFormula {
    match r {
        PathRegex::Eps => MuFormula::InitConst,
        PathRegex::Seq(prefix, step) => {
            let e = compile_end(prefix);
            match step {
                Step::One(a) => MuFormula::suffix_o(e, a.clone()),
                Step::Star(a) => MuFormula::suffix_star(e, a.clone()),
                Step::Tick => MuFormula::suffix_tick(e),
            }
        }
        PathRegex::Union(l, r) => MuFormula::or(compile_end(l), compile_end(r)),
    }
}

pub fn compile_visited(r: &PathRegex) -> MuFormula {
    match r {
        PathRegex::Eps => MuFormula::InitConst,
        PathRegex::Seq(prefix, _) => MuFormula::or(compile_visited(prefix), compile_end(r)),
        PathRegex::Union(l, r) => MuFormula::or(compile_visited(l), compile_visited(r)),
    }
}

/// `<err>T \/ ((T<err> * T) /\ -(`0 * (-err)))`: states about to fire `err`,
/// or reachable after an `err` edge but not along an `err`-free run.
pub fn error_condition(err_label: &str) -> MuFormula {
    MuFormula::or(
        MuFormula::fwd(LabelExpr::atom(err_label), MuFormula::True),
        post_error_condition(err_label),
    )
}

/// The second disjunct of [`error_condition`]: states only reachable through
/// an `err` edge.
pub fn post_error_condition(err_label: &str) -> MuFormula {
    let err = LabelExpr::atom(err_label);
    MuFormula::and(
        MuFormula::suffix_star(MuFormula::bwd(MuFormula::True, err.clone()), LabelExpr::Top),
        MuFormula::not(MuFormula::suffix_star(
            MuFormula::InitConst,
            LabelExpr::not(err),
        )),
    )
}

/// `min X | (<e>T \/ <internal>X)`: an `e` edge is reachable through
/// `internal` edges only.
pub fn reach_formula(e: &LabelExpr, internal: &LabelExpr) -> MuFormula {
    MuFormula::min(
        "X",
        MuFormula::or(
            MuFormula::fwd(e.clone(), MuFormula::True),
            MuFormula::fwd(internal.clone(), MuFormula::var("X")),
        ),
    )
}

/// `-(e1 \/ ... \/ en \/ t)`, the default internal label expression. `t` is
/// not repeated when already listed.
pub fn default_internal(events: &[LabelExpr]) -> LabelExpr {
    let tick = LabelExpr::atom(TICK);
    let mut all: Vec<LabelExpr> = events.to_vec();
    if !all.contains(&tick) {
        all.push(tick);
    }
    let union = all
        .into_iter()
        .reduce(LabelExpr::or)
        .expect("tick always present");
    LabelExpr::not(union)
}
