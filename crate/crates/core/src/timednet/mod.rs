//! Discrete-time process networks with probes, priorities and urgency, and
//! their state-graph generator.
//!
//! A net is a set of bounded integer variables and a list of processes.
//! System processes fire events (guarded, with assignments) and timed
//! `elapse` transitions. Observer processes only react to system events
//! through probes; a reaction never blocks or alters the observed event.
//!
//! [`explore`] builds the state graph under these rules, applied to each
//! state in order:
//!
//! 1. if some probe reactions are pending, only they may fire;
//! 2. otherwise any guard-enabled event or elapse transition not suppressed
//!    by a priority pair may fire; an event queues the reactions of every
//!    observer probing it whose elapsed-time guard holds;
//! 3. a tick `t` may fire unless an urgent event is enabled or an urgent
//!    elapse transition is at the last point of its window. A tick advances
//!    every process clock, clamped at a per-location ceiling.

mod builtin;
mod explore;
mod expr;
mod parse;

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

pub use builtin::{builtin_mouse, builtin_present, builtin_zeno};
pub use explore::{explore, explore_with, Exploration, ExploreError, ExploreOptions, NetState};
pub use expr::{BinOp, Expr};
pub use parse::parse_net;

use crate::fott::Interval;
use crate::lts::{SILENT, TICK};
use crate::syntax::is_identifier;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarDecl {
    pub name: String,
    pub lo: i64,
    pub hi: i64,
    pub init: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TransitionKind {
    /// A system event; the transition label is the event name.
    Event,
    /// Fires once the location clock lies in the interval.
    Elapse(Interval),
    /// Probe reaction to `event`, allowed when the location clock lies in
    /// `elapsed` at the instant the event fires.
    Reaction { event: String, elapsed: Interval },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetTransition {
    pub from: String,
    pub to: String,
    pub label: String,
    pub kind: TransitionKind,
    pub guard: Option<Expr>,
    pub assignments: Vec<(String, Expr)>,
    pub urgent: bool,
    /// Self-loop that keeps the location clock running.
    pub keepclock: bool,
}

impl NetTransition {
    fn new(from: &str, kind: TransitionKind, label: &str, to: &str) -> Self {
        NetTransition {
            from: from.to_string(),
            to: to.to_string(),
            label: label.to_string(),
            kind,
            guard: None,
            assignments: Vec::new(),
            urgent: false,
            keepclock: false,
        }
    }

    pub fn on(from: &str, event: &str, to: &str) -> Self {
        NetTransition::new(from, TransitionKind::Event, event, to)
    }

    pub fn elapse(from: &str, window: Interval, label: &str, to: &str) -> Self {
        NetTransition::new(from, TransitionKind::Elapse(window), label, to)
    }

    pub fn probe(from: &str, event: &str, elapsed: Interval, label: &str, to: &str) -> Self {
        let kind = TransitionKind::Reaction {
            event: event.to_string(),
            elapsed,
        };
        NetTransition::new(from, kind, label, to)
    }

    pub fn when(mut self, guard: Expr) -> Self {
        self.guard = Some(guard);
        self
    }

    pub fn assign(mut self, var: &str, value: Expr) -> Self {
        self.assignments.push((var.to_string(), value));
        self
    }

    pub fn urgent(mut self) -> Self {
        self.urgent = true;
        self
    }

    pub fn keepclock(mut self) -> Self {
        self.keepclock = true;
        self
    }

    pub fn is_reaction(&self) -> bool {
        matches!(self.kind, TransitionKind::Reaction { .. })
    }

    /// The timing interval of an elapse or reaction transition.
    pub fn interval(&self) -> Option<&Interval> {
        match &self.kind {
            TransitionKind::Event => None,
            TransitionKind::Elapse(i) => Some(i),
            TransitionKind::Reaction { elapsed, .. } => Some(elapsed),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Process {
    pub name: String,
    /// In order of first mention, the initial location first.
    pub locations: Vec<String>,
    pub initial: String,
    pub transitions: Vec<NetTransition>,
}

impl Process {
    pub fn new(name: &str, initial: &str) -> Self {
        Process {
            name: name.to_string(),
            locations: vec![initial.to_string()],
            initial: initial.to_string(),
            transitions: Vec::new(),
        }
    }

    pub fn add(&mut self, t: NetTransition) -> &mut Self {
        for loc in [&t.from, &t.to] {
            if !self.locations.contains(loc) {
                self.locations.push(loc.clone());
            }
        }
        self.transitions.push(t);
        self
    }

    pub fn with(mut self, t: NetTransition) -> Self {
        self.add(t);
        self
    }

    /// True if the process reacts to probes, i.e. is an observer.
    pub fn is_observer(&self) -> bool {
        self.transitions.iter().any(NetTransition::is_reaction)
    }

    pub fn location_index(&self, loc: &str) -> Option<usize> {
        self.locations.iter().position(|l| l == loc)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TimedNet {
    pub variables: Vec<VarDecl>,
    pub processes: Vec<Process>,
    /// `(high, low)`: a `low`-labeled transition cannot fire while a
    /// `high`-labeled one is enabled.
    pub priorities: Vec<(String, String)>,
}

/// Where a validation problem sits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Site {
    Net,
    Variable(usize),
    Process(usize),
    Transition(usize, usize),
    Priority(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("{}{message}", line.map(|l| format!("line {l}: ")).unwrap_or_default())]
    Invalid {
        line: Option<usize>,
        site: Site,
        message: String,
    },
    #[error("observer window must satisfy d1 < d2, got d1 = {d1}, d2 = {d2}")]
    BadWindow { d1: u64, d2: u64 },
}

fn invalid(site: Site, message: impl Into<String>) -> NetError {
    NetError::Invalid {
        line: None,
        site,
        message: message.into(),
    }
}

impl TimedNet {
    pub fn var(&mut self, name: &str, lo: i64, hi: i64, init: i64) -> &mut Self {
        self.variables.push(VarDecl {
            name: name.to_string(),
            lo,
            hi,
            init,
        });
        self
    }

    pub fn priority(&mut self, high: &str, low: &str) -> &mut Self {
        self.priorities.push((high.to_string(), low.to_string()));
        self
    }

    pub fn process(&mut self, p: Process) -> &mut Self {
        self.processes.push(p);
        self
    }

    /// Probed event name to the `(process, transition)` reactions on it.
    pub fn probes(&self) -> BTreeMap<&str, Vec<(usize, usize)>> {
        let mut out: BTreeMap<&str, Vec<(usize, usize)>> = BTreeMap::new();
        for (pi, p) in self.processes.iter().enumerate() {
            for (ti, t) in p.transitions.iter().enumerate() {
                if let TransitionKind::Reaction { event, .. } = &t.kind {
                    out.entry(event).or_default().push((pi, ti));
                }
            }
        }
        out
    }

    pub fn labels(&self) -> BTreeSet<&str> {
        self.processes
            .iter()
            .flat_map(|p| p.transitions.iter().map(|t| t.label.as_str()))
            .collect()
    }

    pub fn validate(&self) -> Result<(), NetError> {
        let mut names = BTreeSet::new();
        for (vi, v) in self.variables.iter().enumerate() {
            let site = Site::Variable(vi);
            if !is_identifier(&v.name) {
                return Err(invalid(site, format!("bad variable name `{}`", v.name)));
            }
            if !names.insert(v.name.as_str()) {
                return Err(invalid(
                    site,
                    format!("variable `{}` declared twice", v.name),
                ));
            }
            if v.lo > v.hi || v.init < v.lo || v.init > v.hi {
                return Err(invalid(
                    site,
                    format!(
                        "variable `{}`: need {} <= init {} <= {}",
                        v.name, v.lo, v.init, v.hi
                    ),
                ));
            }
        }
        if self.processes.is_empty() {
            return Err(invalid(Site::Net, "net has no process"));
        }
        let mut pnames = BTreeSet::new();
        for (pi, p) in self.processes.iter().enumerate() {
            if !pnames.insert(p.name.as_str()) {
                return Err(invalid(
                    Site::Process(pi),
                    format!("process `{}` declared twice", p.name),
                ));
            }
            if p.location_index(&p.initial).is_none() {
                return Err(invalid(
                    Site::Process(pi),
                    "initial location is not a location",
                ));
            }
            let observer = p.is_observer();
            for (ti, t) in p.transitions.iter().enumerate() {
                self.validate_transition(observer, t)
                    .map_err(|m| invalid(Site::Transition(pi, ti), m))?;
            }
        }
        let system_events: BTreeSet<&str> = self
            .processes
            .iter()
            .filter(|p| !p.is_observer())
            .flat_map(|p| p.transitions.iter())
            .filter(|t| t.kind == TransitionKind::Event)
            .map(|t| t.label.as_str())
            .collect();
        for (pi, p) in self.processes.iter().enumerate() {
            for (ti, t) in p.transitions.iter().enumerate() {
                if let TransitionKind::Reaction { event, .. } = &t.kind {
                    if !system_events.contains(event.as_str()) {
                        return Err(invalid(
                            Site::Transition(pi, ti),
                            format!("probe on unknown event `{event}`"),
                        ));
                    }
                }
            }
        }
        let labels = self.labels();
        for (k, (hi, lo)) in self.priorities.iter().enumerate() {
            for l in [hi, lo] {
                if !labels.contains(l.as_str()) {
                    return Err(invalid(
                        Site::Priority(k),
                        format!("priority on unknown label `{l}`"),
                    ));
                }
            }
            if hi == lo {
                return Err(invalid(
                    Site::Priority(k),
                    format!("label `{hi}` has priority over itself"),
                ));
            }
        }
        Ok(())
    }

    fn validate_transition(&self, observer: bool, t: &NetTransition) -> Result<(), String> {
        if !is_identifier(&t.label) || t.label == TICK || t.label == "T" {
            return Err(format!(
                "`{}` cannot be used as a transition label",
                t.label
            ));
        }
        match &t.kind {
            TransitionKind::Event if observer => {
                return Err("an observer process may only react to probes, not fire events".into());
            }
            TransitionKind::Event => {}
            TransitionKind::Elapse(i) => {
                crate::fott::interval_ticks(i).map_err(|e| e.to_string())?;
                if i.upper.is_some() && !t.urgent {
                    return Err(format!(
                        "elapse {i} has a finite upper bound and must be urgent"
                    ));
                }
            }
            TransitionKind::Reaction { elapsed, .. } => {
                crate::fott::interval_ticks(elapsed).map_err(|e| e.to_string())?;
                if t.urgent {
                    return Err("probe reactions are always immediate; drop `urgent`".into());
                }
            }
        }
        if observer && !t.assignments.is_empty() {
            return Err("an observer process cannot assign variables".into());
        }
        if t.keepclock && t.from != t.to {
            return Err("`keepclock` is only allowed on self-loops".into());
        }
        if observer && t.label == SILENT {
            return Err(format!("`{SILENT}` is reserved for system silent steps"));
        }
        let declared = |x: &str| self.variables.iter().any(|v| v.name == x);
        let mut used: Vec<&str> = Vec::new();
        if let Some(g) = &t.guard {
            used.extend(g.vars());
        }
        for (x, e) in &t.assignments {
            used.push(x);
            used.extend(e.vars());
        }
        if let Some(x) = used.into_iter().find(|x| !declared(x)) {
            return Err(format!("unknown variable `{x}`"));
        }
        Ok(())
    }
}
