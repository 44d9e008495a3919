//! Verdicts on generated or imported state graphs: the `EQ` tautology
//! between a pattern and an observer's error condition, innocuousness of
//! the observer, the naive set-inclusion check with its lasso
//! counterexample, and reachability.

pub mod graph;

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::lts::{LabelExpr, Lts, StateSet, TICK};
use crate::mucalc::{eval_mu, is_tautology, FormulaError, MuFormula};
use crate::mucompile::{
    compile_end, compile_visited, error_condition, post_error_condition, reach_formula,
};
use crate::pathregex::{oracle_end_states, oracle_visited_states, PathRegex};
use crate::timednet::{Exploration, TransitionKind};

use graph::{cycle_through, cyclic_states, shortest_path, Path};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error(transparent)]
    Formula(#[from] FormulaError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Verdict {
    pub name: String,
    pub holds: bool,
    pub witness_state: Option<usize>,
    pub witness_trace: Option<Vec<String>>,
    /// Index in `witness_trace` where the repeated cycle starts.
    pub lasso_split: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    /// Reported for reference only; does not affect [`Report::holds`].
    pub informational: bool,
}

impl Verdict {
    fn new(name: &str, holds: bool) -> Self {
        Verdict {
            name: name.to_string(),
            holds,
            witness_state: None,
            witness_trace: None,
            lasso_split: None,
            detail: None,
            informational: false,
        }
    }

    fn informational(mut self) -> Self {
        self.informational = true;
        self
    }

    fn detail(mut self, d: impl Into<String>) -> Self {
        self.detail = Some(d.into());
        self
    }

    /// Attaches `state` and the shortest path leading to it.
    fn witness(mut self, g: &Lts, state: usize) -> Self {
        self.witness_state = Some(state);
        let target = StateSet::singleton(g.num_states(), state);
        if let Some((_, path)) = shortest_path(g, g.initial(), &target, None) {
            self.witness_trace = Some(labels(&path));
        }
        self
    }

    fn lasso(mut self, state: usize, prefix: &Path, cycle: &Path) -> Self {
        self.witness_state = Some(state);
        let mut trace = labels(prefix);
        self.lasso_split = Some(trace.len());
        trace.extend(labels(cycle));
        self.witness_trace = Some(trace);
        self
    }

    /// The repeated part of a lasso trace.
    pub fn cycle(&self) -> Option<&[String]> {
        Some(&self.witness_trace.as_ref()?[self.lasso_split?..])
    }

    /// The part of a lasso trace before the cycle, or the whole trace.
    pub fn prefix(&self) -> Option<&[String]> {
        let t = self.witness_trace.as_ref()?;
        Some(&t[..self.lasso_split.unwrap_or(t.len())])
    }
}

fn labels(p: &Path) -> Vec<String> {
    p.iter().map(|(l, _)| l.clone()).collect()
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Report {
    pub verdicts: Vec<Verdict>,
    /// Milliseconds per verdict group.
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub timings: BTreeMap<String, f64>,
}

impl Report {
    /// All non-informational verdicts hold.
    pub fn holds(&self) -> bool {
        self.verdicts.iter().all(|v| v.informational || v.holds)
    }

    pub fn verdict(&self, name: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.name == name)
    }

    pub fn without_timings(mut self) -> Self {
        self.timings.clear();
        self
    }

    fn merge(&mut self, other: Report) {
        self.verdicts.extend(other.verdicts);
        self.timings.extend(other.timings);
    }

    fn timed(
        name: &str,
        f: impl FnOnce() -> Result<Vec<Verdict>, CheckError>,
    ) -> Result<Report, CheckError> {
        let start = Instant::now();
        let verdicts = f()?;
        let ms = start.elapsed().as_secs_f64() * 1e3;
        Ok(Report {
            verdicts,
            timings: BTreeMap::from([(name.to_string(), ms)]),
        })
    }

    /// Plain-text rendering, one line per verdict followed by its witness.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for v in &self.verdicts {
            let status = match (v.holds, v.informational) {
                (true, _) => "HOLDS",
                (false, false) => "FAILS",
                (false, true) => "fails",
            };
            let note = if v.informational {
                " (informational)"
            } else {
                ""
            };
            out.push_str(&format!("{:<32} {status}{note}\n", v.name));
            if let Some(d) = &v.detail {
                out.push_str(&format!("    {d}\n"));
            }
            if let Some(s) = v.witness_state {
                out.push_str(&format!("    witness state: {s}\n"));
            }
            if let Some(t) = &v.witness_trace {
                match v.lasso_split {
                    Some(k) => out.push_str(&format!(
                        "    trace: {} ({})*\n",
                        t[..k].join("."),
                        t[k..].join(".")
                    )),
                    None => out.push_str(&format!("    trace: {}\n", t.join("."))),
                }
            }
        }
        for (name, ms) in &self.timings {
            out.push_str(&format!("time {name}: {ms:.3} ms\n"));
        }
        out
    }
}

/// `EQ`: `visited(pattern) <=> -error_condition(err)` must hold everywhere.
/// Also reports each implication separately.
pub fn check_eq(g: &Lts, pattern: &PathRegex, err_label: &str) -> Result<Report, CheckError> {
    Report::timed("eq", || {
        let visited = compile_visited(pattern);
        let psi = error_condition(err_label);
        let eq = MuFormula::iff(visited.clone(), MuFormula::not(psi.clone()));
        let sound = MuFormula::implies(MuFormula::not(visited.clone()), psi.clone());
        let correct = MuFormula::implies(visited, MuFormula::not(psi));
        let mut out = Vec::new();
        for (name, f, what) in [
            (
                "eq",
                eq,
                "pattern-visited states and non-error states differ",
            ),
            (
                "eq.soundness",
                sound,
                "state outside the pattern without error condition",
            ),
            (
                "eq.correctness",
                correct,
                "state inside the pattern with error condition",
            ),
        ] {
            let t = is_tautology(g, &f)?;
            let mut v = Verdict::new(name, t.holds);
            if let Some(w) = t.witness {
                v = v.witness(g, w).detail(what);
            }
            out.push(v);
        }
        Ok(out)
    })
}

/// Every event in `events` stays reachable through `internal` steps from
/// every state.
pub fn check_innocuous(
    g: &Lts,
    events: &[LabelExpr],
    internal: &LabelExpr,
) -> Result<Report, CheckError> {
    Report::timed("innocuous", || {
        let mut sets = Vec::new();
        for e in events {
            sets.push((e, eval_mu(g, &reach_formula(e, internal))?));
        }
        let mut all = g.all_states();
        for (_, s) in &sets {
            all.intersect_with(s);
        }
        let mut v = Verdict::new("innocuous", all.is_full());
        if let Some(w) = all.first_missing() {
            let missing: Vec<String> = sets
                .iter()
                .filter(|(_, s)| !s.contains(w))
                .map(|(e, _)| format!("Reach_{}", e.primary_string()))
                .collect();
            v = v
                .witness(g, w)
                .detail(format!("fails: {}", missing.join(", ")));
        }
        Ok(vec![v])
    })
}

/// Compares the states only reachable through an `err` edge with the
/// states the pattern never visits, as plain sets. The converse inclusion
/// fails on observers whose error transition may be postponed forever; its
/// witness comes with a lasso that avoids `err`.
pub fn check_inclusion_naive(
    g: &Lts,
    pattern: &PathRegex,
    err_label: &str,
) -> Result<Report, CheckError> {
    Report::timed("naive", || {
        let errors = eval_mu(g, &post_error_condition(err_label))?;
        let not_present = oracle_visited_states(g, pattern).complement();

        let mut first = Verdict::new(
            "naive.errors_in_not_present",
            errors.is_subset(&not_present),
        )
        .informational()
        .detail(format!(
            "|Errors| = {}, |NotPresent| = {}",
            errors.len(),
            not_present.len()
        ));
        if let Some(w) = errors.difference(&not_present).iter().next() {
            first = first.witness(g, w);
        }

        let missed = not_present.difference(&errors);
        let mut second = Verdict::new("naive.not_present_in_errors", missed.is_empty())
            .informational()
            .detail(format!(
                "|Errors| = {}, |NotPresent| = {}",
                errors.len(),
                not_present.len()
            ));
        if !missed.is_empty() {
            second = match lasso_to(g, &missed, err_label) {
                Some((w, prefix, cycle)) => second.lasso(w, &prefix, &cycle),
                None => second.witness(g, missed.iter().next().expect("nonempty")),
            };
        }
        Ok(vec![first, second])
    })
}

/// Lasso from the initial state to a state of `targets`, then a cycle back
/// to it. An all-`t` cycle is preferred, then any cycle avoiding `err`.
fn lasso_to(g: &Lts, targets: &StateSet, err_label: &str) -> Option<(usize, Path, Path)> {
    let tick = g.label_mask(&LabelExpr::atom(TICK));
    let no_err = g.label_mask(&LabelExpr::not(LabelExpr::atom(err_label)));
    for mask in [&tick, &no_err] {
        let on_cycle = targets.intersection(&cyclic_states(g, mask));
        if let Some((w, prefix)) = shortest_path(g, g.initial(), &on_cycle, None) {
            let cycle = cycle_through(g, w, mask).expect("state on a cycle");
            return Some((w, prefix, cycle));
        }
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReachMode {
    /// Some reachable state has an outgoing matching edge.
    Source,
    /// Some reachable state is entered by a matching edge.
    Target,
}

pub fn check_reachable(g: &Lts, target: &LabelExpr, mode: ReachMode) -> Report {
    Report::timed("reachable", || {
        let mask = g.label_mask(target);
        let mut sources = g.empty_set();
        for t in g.transitions() {
            if mask[t.label.index()] {
                sources.insert(t.src);
            }
        }
        let name = format!("reachable({target})");
        let Some((s, mut path)) = shortest_path(g, g.initial(), &sources, None) else {
            return Ok(vec![
                Verdict::new(&name, false).detail("no reachable matching edge")
            ]);
        };
        let &(label, d) = g
            .successors(s)
            .iter()
            .find(|(l, _)| mask[l.index()])
            .expect("source has a matching edge");
        path.push((g.label_name(label).to_string(), d));
        let mut v = Verdict::new(&name, true);
        v.witness_state = Some(match mode {
            ReachMode::Source => s,
            ReachMode::Target => d,
        });
        v.witness_trace = Some(labels(&path));
        Ok(vec![v])
    })
    .expect("reachability needs no formula")
}

/// No cycle made only of `internal` steps, so time and the observed events
/// cannot be starved forever by the observer.
pub fn check_no_zeno(g: &Lts, internal: &LabelExpr) -> Report {
    Report::timed("no_zeno", || {
        let mask = g.label_mask(internal);
        let cyclic = cyclic_states(g, &mask);
        let mut v = Verdict::new("no_zeno", cyclic.is_empty());
        // Unreachable cycles still count; their lasso has an empty prefix.
        let start = shortest_path(g, g.initial(), &cyclic, None)
            .or_else(|| cyclic.iter().next().map(|w| (w, Vec::new())));
        if let Some((w, prefix)) = start {
            let cycle = cycle_through(g, w, &mask).expect("state on a cycle");
            v = v
                .lasso(w, &prefix, &cycle)
                .detail("cycle of internal steps without t");
        }
        Ok(vec![v])
    })
    .expect("cycle detection needs no formula")
}

/// Compiled formulas against the product oracles on `g`, for the pattern.
pub fn check_oracle_agreement(g: &Lts, pattern: &PathRegex) -> Result<Report, CheckError> {
    Report::timed("oracle_agreement", || {
        let end_ok = eval_mu(g, &compile_end(pattern))? == oracle_end_states(g, pattern);
        let visited_ok =
            eval_mu(g, &compile_visited(pattern))? == oracle_visited_states(g, pattern);
        let mut v = Verdict::new("oracle_agreement", end_ok && visited_ok);
        if !v.holds {
            v = v.detail(format!(
                "end agrees: {end_ok}, visited agrees: {visited_ok}"
            ));
        }
        Ok(vec![v])
    })
}

/// States whose observer sits in the target of an `err` transition must
/// satisfy the label-based error condition.
pub fn check_error_metadata(ex: &Exploration, err_label: &str) -> Result<Report, CheckError> {
    Report::timed("metadata", || {
        let g = ex.lts();
        let mut located = g.empty_set();
        for p in &ex.net().processes {
            for t in &p.transitions {
                if t.label == err_label && t.kind != TransitionKind::Event {
                    located.union_with(&ex.states_at(&p.name, &t.to));
                }
            }
        }
        let psi = eval_mu(g, &error_condition(err_label))?;
        let mut v = Verdict::new("metadata.error_locations", located.is_subset(&psi))
            .detail(format!("{} states in error locations", located.len()));
        if let Some(w) = located.difference(&psi).iter().next() {
            v = v.witness(g, w);
        }
        Ok(vec![v])
    })
}

/// What a full check runs on.
pub enum Model<'a> {
    Graph(&'a Lts),
    Generated(&'a Exploration),
}

impl Model<'_> {
    pub fn lts(&self) -> &Lts {
        match self {
            Model::Graph(g) => g,
            Model::Generated(ex) => ex.lts(),
        }
    }
}

/// All checks in sequence. `metadata.*` only runs on generated graphs.
pub fn full_report(
    model: Model<'_>,
    pattern: &PathRegex,
    err_label: &str,
    events: &[LabelExpr],
    internal: &LabelExpr,
) -> Result<Report, CheckError> {
    let g = model.lts();
    let mut r = check_eq(g, pattern, err_label)?;
    r.merge(check_innocuous(g, events, internal)?);
    r.merge(check_inclusion_naive(g, pattern, err_label)?);
    r.merge(check_oracle_agreement(g, pattern)?);
    r.merge(check_no_zeno(g, internal));
    if let Model::Generated(ex) = model {
        r.merge(check_error_metadata(ex, err_label)?);
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fott::{present_regex, Interval};
    use crate::mucompile::default_internal;
    use crate::pathregex::parse_regex;
    use crate::timednet::{builtin_present, explore};

    fn events() -> Vec<LabelExpr> {
        ["a", "b", "t"].map(LabelExpr::atom).to_vec()
    }

    #[test]
    fn trivial_eq_without_errors() {
        let g = Lts::from_edges(2, 0, [(0, "a", 1), (1, "t", 0)]).unwrap();
        let r = check_eq(&g, &parse_regex("T*").unwrap(), "error").unwrap();
        assert!(r.holds());
    }

    #[test]
    fn single_tick_loop_is_innocuous() {
        let g = Lts::from_edges(1, 0, [(0, "t", 0)]).unwrap();
        let t = [LabelExpr::atom("t")];
        let r = check_innocuous(&g, &t, &default_internal(&t)).unwrap();
        assert!(r.holds());
    }

    #[test]
    fn present_full_report() {
        let ex = explore(&builtin_present(4, 5).unwrap()).unwrap();
        let pattern = present_regex("a", "b", &Interval::closed_open(4, 5)).unwrap();
        let ev = events();
        let r = full_report(
            Model::Generated(&ex),
            &pattern,
            "error",
            &ev,
            &default_internal(&ev),
        )
        .unwrap();
        assert!(r.holds(), "{}", r.render());
        let naive = r.verdict("naive.not_present_in_errors").unwrap();
        assert!(!naive.holds);
        assert!(naive.cycle().unwrap().iter().all(|l| l == "t"));
        assert_eq!(
            naive.prefix().unwrap().join("."),
            "b.start.z.t.t.t.t.watch.t"
        );
        assert!(r.verdict("naive.errors_in_not_present").unwrap().holds);
    }

    #[test]
    fn unmatched_label_is_unreachable() {
        let g = Lts::from_edges(2, 0, [(0, "a", 1)]).unwrap();
        let r = check_reachable(&g, &LabelExpr::atom("nope"), ReachMode::Source);
        assert!(!r.holds());
        let r = check_reachable(&g, &LabelExpr::atom("a"), ReachMode::Target);
        assert_eq!(r.verdicts[0].witness_state, Some(1));
    }
}
