use std::collections::{HashMap, VecDeque};

use thiserror::Error;

use crate::fott::interval_ticks;
use crate::lts::{Lts, LtsBuilder, StateSet, TICK};

use super::{NetError, TimedNet, TransitionKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExploreError {
    #[error(transparent)]
    Net(#[from] NetError),
    #[error("state space exceeds {0} states")]
    TooManyStates(usize),
    #[error("assignment sets `{var}` to {value}, outside its domain {lo}..{hi}")]
    OutOfDomain {
        var: String,
        value: i64,
        lo: i64,
        hi: i64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExploreOptions {
    pub max_states: usize,
}

impl Default for ExploreOptions {
    fn default() -> Self {
        ExploreOptions {
            max_states: 100_000,
        }
    }
}

/// A global state: location index, clock per process, variable values and
/// the queued probe reactions as sorted `(process, transition)` pairs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NetState {
    pub locations: Vec<usize>,
    pub clocks: Vec<u64>,
    pub values: Vec<i64>,
    pub pending: Vec<(usize, usize)>,
}

/// The state graph of a net together with the net state behind every node.
#[derive(Debug, Clone)]
pub struct Exploration {
    net: TimedNet,
    lts: Lts,
    states: Vec<NetState>,
    ceilings: Vec<Vec<u64>>,
}

impl Exploration {
    pub fn lts(&self) -> &Lts {
        &self.lts
    }

    pub fn into_lts(self) -> Lts {
        self.lts
    }

    pub fn net(&self) -> &TimedNet {
        &self.net
    }

    pub fn states(&self) -> &[NetState] {
        &self.states
    }

    fn process_index(&self, process: &str) -> Option<usize> {
        self.net.processes.iter().position(|p| p.name == process)
    }

    pub fn location(&self, state: usize, process: &str) -> Option<&str> {
        let p = self.process_index(process)?;
        Some(&self.net.processes[p].locations[self.states[state].locations[p]])
    }

    pub fn clock(&self, state: usize, process: &str) -> Option<u64> {
        let p = self.process_index(process)?;
        Some(self.states[state].clocks[p])
    }

    /// Clock ceiling of the location `process` occupies in `state`.
    pub fn ceiling(&self, state: usize, process: &str) -> Option<u64> {
        let p = self.process_index(process)?;
        Some(self.ceilings[p][self.states[state].locations[p]])
    }

    pub fn value(&self, state: usize, var: &str) -> Option<i64> {
        let v = self.net.variables.iter().position(|d| d.name == var)?;
        Some(self.states[state].values[v])
    }

    /// States where `process` sits in `location`.
    pub fn states_at(&self, process: &str, location: &str) -> StateSet {
        let mut out = self.lts.empty_set();
        for s in 0..self.states.len() {
            if self.location(s, process) == Some(location) {
                out.insert(s);
            }
        }
        out
    }

    /// One-line rendering such as `Universal:u Present:watch/1 x=0`.
    pub fn describe(&self, state: usize) -> String {
        let st = &self.states[state];
        let mut parts = Vec::new();
        for (p, proc_) in self.net.processes.iter().enumerate() {
            let loc = &proc_.locations[st.locations[p]];
            if self.ceilings[p][st.locations[p]] > 0 {
                parts.push(format!("{}:{}/{}", proc_.name, loc, st.clocks[p]));
            } else {
                parts.push(format!("{}:{}", proc_.name, loc));
            }
        }
        for (v, d) in self.net.variables.iter().enumerate() {
            parts.push(format!("{}={}", d.name, st.values[v]));
        }
        for &(p, t) in &st.pending {
            parts.push(format!(
                "pending:{}.{}",
                self.net.processes[p].name, self.net.processes[p].transitions[t].label
            ));
        }
        parts.join(" ")
    }
}

pub fn explore(net: &TimedNet) -> Result<Exploration, ExploreError> {
    explore_with(net, ExploreOptions::default())
}

/// Breadth-first generation; state 0 is the initial state and successors
/// are visited in a fixed order, so numbering is reproducible.
pub fn explore_with(net: &TimedNet, opts: ExploreOptions) -> Result<Exploration, ExploreError> {
    net.validate()?;
    let sem = Semantics::new(net);
    let init = NetState {
        locations: net
            .processes
            .iter()
            .map(|p| p.location_index(&p.initial).expect("validated"))
            .collect(),
        clocks: vec![0; net.processes.len()],
        values: net.variables.iter().map(|v| v.init).collect(),
        pending: Vec::new(),
    };
    let mut index: HashMap<NetState, usize> = HashMap::new();
    let mut states = vec![init.clone()];
    index.insert(init, 0);
    let mut builder = LtsBuilder::new(1);
    let mut queue = VecDeque::from([0usize]);
    while let Some(s) = queue.pop_front() {
        let succ = sem.successors(&states[s])?;
        for (label, next) in succ {
            let d = match index.get(&next) {
                Some(&d) => d,
                None => {
                    let d = states.len();
                    if d >= opts.max_states {
                        return Err(ExploreError::TooManyStates(opts.max_states));
                    }
                    states.push(next.clone());
                    index.insert(next, d);
                    builder.add_state();
                    queue.push_back(d);
                    d
                }
            };
            builder
                .add_transition(s, label, d)
                .expect("labels validated and states allocated");
        }
    }
    let lts = builder.build().expect("initial state exists");
    Ok(Exploration {
        net: net.clone(),
        lts,
        states,
        ceilings: sem.ceilings,
    })
}

/// Largest clock value that still matters for the interval: membership is
/// the same for every clock at or beyond it.
fn threshold(i: &crate::fott::Interval) -> u64 {
    let lower = i.lower + u64::from(i.lower_open);
    match i.upper {
        None => lower,
        Some(u) => lower.max(if i.upper_open { u } else { u + 1 }),
    }
}

struct Semantics<'n> {
    net: &'n TimedNet,
    /// Per process and location, the clock ceiling.
    ceilings: Vec<Vec<u64>>,
    /// Per process and location, the outgoing transition indices.
    outgoing: Vec<Vec<Vec<usize>>>,
    /// Transition targets as location indices.
    targets: Vec<Vec<usize>>,
    reactions: HashMap<&'n str, Vec<(usize, usize)>>,
    /// Low label to the labels that suppress it.
    suppressors: HashMap<&'n str, Vec<&'n str>>,
    var_index: HashMap<&'n str, usize>,
}

impl<'n> Semantics<'n> {
    fn new(net: &'n TimedNet) -> Self {
        let mut ceilings = Vec::new();
        let mut outgoing = Vec::new();
        let mut targets = Vec::new();
        for p in &net.processes {
            let mut ceil = vec![0u64; p.locations.len()];
            let mut out = vec![Vec::new(); p.locations.len()];
            let mut tgt = Vec::new();
            for (ti, t) in p.transitions.iter().enumerate() {
                let from = p.location_index(&t.from).expect("locations collected");
                out[from].push(ti);
                tgt.push(p.location_index(&t.to).expect("locations collected"));
                if let Some(i) = t.interval() {
                    ceil[from] = ceil[from].max(threshold(i));
                }
            }
            ceilings.push(ceil);
            outgoing.push(out);
            targets.push(tgt);
        }
        let mut suppressors: HashMap<&str, Vec<&str>> = HashMap::new();
        for (hi, lo) in &net.priorities {
            suppressors.entry(lo).or_default().push(hi);
        }
        Semantics {
            net,
            ceilings,
            outgoing,
            targets,
            reactions: net.probes().into_iter().collect(),
            suppressors,
            var_index: net
                .variables
                .iter()
                .enumerate()
                .map(|(i, v)| (v.name.as_str(), i))
                .collect(),
        }
    }

    fn guard_holds(&self, st: &NetState, p: usize, t: usize) -> bool {
        let tr = &self.net.processes[p].transitions[t];
        match &tr.guard {
            None => true,
            Some(g) => g.eval(&|x| st.values[self.var_index[x]]) != 0,
        }
    }

    fn move_process(&self, st: &mut NetState, p: usize, t: usize) {
        let tr = &self.net.processes[p].transitions[t];
        st.locations[p] = self.targets[p][t];
        if !tr.keepclock {
            st.clocks[p] = 0;
        }
    }

    fn successors(&self, st: &NetState) -> Result<Vec<(&'n str, NetState)>, ExploreError> {
        let net = self.net;
        let mut out = Vec::new();
        if !st.pending.is_empty() {
            for &(p, t) in &st.pending {
                let mut next = st.clone();
                next.pending.retain(|&(q, _)| q != p);
                self.move_process(&mut next, p, t);
                out.push((net.processes[p].transitions[t].label.as_str(), next));
            }
            return Ok(out);
        }

        let mut enabled = Vec::new();
        let mut tick_blocked = false;
        for (p, proc_) in net.processes.iter().enumerate() {
            for &t in &self.outgoing[p][st.locations[p]] {
                let tr = &proc_.transitions[t];
                let timed_ok = match &tr.kind {
                    TransitionKind::Event => true,
                    TransitionKind::Elapse(i) => i.contains(st.clocks[p]),
                    TransitionKind::Reaction { .. } => continue,
                };
                if !timed_ok || !self.guard_holds(st, p, t) {
                    continue;
                }
                if tr.urgent {
                    tick_blocked |= match &tr.kind {
                        TransitionKind::Elapse(i) => {
                            let last = interval_ticks(i).expect("validated").hi;
                            last == Some(st.clocks[p])
                        }
                        _ => true,
                    };
                }
                enabled.push((p, t));
            }
        }
        let enabled_labels: Vec<&str> = enabled
            .iter()
            .map(|&(p, t)| net.processes[p].transitions[t].label.as_str())
            .collect();

        for &(p, t) in &enabled {
            let tr = &net.processes[p].transitions[t];
            let suppressed = self
                .suppressors
                .get(tr.label.as_str())
                .is_some_and(|his| his.iter().any(|h| enabled_labels.contains(h)));
            if suppressed {
                continue;
            }
            let mut next = st.clone();
            for (x, e) in &tr.assignments {
                let v = self.var_index[x.as_str()];
                let value = e.eval(&|y| st.values[self.var_index[y]]);
                let decl = &net.variables[v];
                if value < decl.lo || value > decl.hi {
                    return Err(ExploreError::OutOfDomain {
                        var: x.clone(),
                        value,
                        lo: decl.lo,
                        hi: decl.hi,
                    });
                }
                next.values[v] = value;
            }
            self.move_process(&mut next, p, t);
            if tr.kind == TransitionKind::Event {
                for &(q, r) in self.reactions.get(tr.label.as_str()).into_iter().flatten() {
                    let rt = &net.processes[q].transitions[r];
                    let TransitionKind::Reaction { elapsed, .. } = &rt.kind else {
                        unreachable!()
                    };
                    let here = net.processes[q].location_index(&rt.from) == Some(st.locations[q]);
                    if here && elapsed.contains(st.clocks[q]) && self.guard_holds(&next, q, r) {
                        next.pending.push((q, r));
                    }
                }
                next.pending.sort_unstable();
            }
            out.push((tr.label.as_str(), next));
        }

        if !tick_blocked {
            let mut next = st.clone();
            for (p, c) in next.clocks.iter_mut().enumerate() {
                *c = (*c + 1).min(self.ceilings[p][st.locations[p]]);
            }
            debug_assert!(next.pending.is_empty());
            out.push((TICK, next));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::super::{BinOp, Expr, NetTransition, Process};
    use super::*;
    use crate::fott::Interval;

    #[test]
    fn urgent_untimed_loop_freezes_time() {
        let mut net = TimedNet::default();
        net.process(Process::new("S", "s").with(NetTransition::on("s", "go", "s").urgent()));
        let ex = explore(&net).unwrap();
        assert_eq!(ex.lts().num_states(), 1);
        assert!(ex.lts().label_id("t").is_none());
    }

    #[test]
    fn clocks_clamp_at_ceiling() {
        let mut net = TimedNet::default();
        net.process(Process::new("S", "s").with(NetTransition::elapse(
            "s",
            Interval::at_least(2),
            "go",
            "d",
        )));
        let ex = explore(&net).unwrap();
        // s/0, s/1, s/2 (clamped), d/0
        assert_eq!(ex.lts().num_states(), 4);
        assert_eq!(ex.clock(2, "S"), Some(2));
        assert_eq!(ex.ceiling(2, "S"), Some(2));
    }

    #[test]
    fn state_ceiling_is_enforced() {
        let mut net = TimedNet::default();
        net.var("n", 0, 100, 0);
        net.process(
            Process::new("S", "s").with(
                NetTransition::on("s", "inc", "s")
                    .when(Expr::bin(BinOp::Lt, Expr::var("n"), Expr::int(100)))
                    .assign("n", Expr::bin(BinOp::Add, Expr::var("n"), Expr::int(1))),
            ),
        );
        let err = explore_with(&net, ExploreOptions { max_states: 10 }).unwrap_err();
        assert_eq!(err, ExploreError::TooManyStates(10));
    }

    #[test]
    fn out_of_domain_assignment() {
        let mut net = TimedNet::default();
        net.var("n", 0, 1, 0);
        net.process(
            Process::new("S", "s")
                .with(NetTransition::on("s", "inc", "s").assign("n", Expr::int(5))),
        );
        assert!(matches!(
            explore(&net),
            Err(ExploreError::OutOfDomain { .. })
        ));
    }
}
