//! Labeled transition systems: the state graphs every check runs on.

mod aut;
mod dot;
mod label;
mod stateset;

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

pub use aut::{load_aut, save_aut, AutError};
pub use dot::to_dot;
pub use label::{parse_label_expr, LabelExpr};
pub(crate) use label::{parse_or as parse_label_or, parse_primary as parse_label_primary};
pub use stateset::StateSet;

/// Label of the discrete-time tick.
pub const TICK: &str = "t";
/// Label of silent system steps.
pub const SILENT: &str = "z";

/// Index of an interned label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabelId(pub u32);

impl LabelId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transition {
    pub src: usize,
    pub label: LabelId,
    pub dst: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LtsError {
    #[error("a transition system needs at least one state")]
    NoStates,
    #[error("initial state {initial} out of range for {states} states")]
    InitialOutOfRange { initial: usize, states: usize },
    #[error("transition ({src}, {label:?}, {dst}) has an endpoint outside 0..{states}")]
    EndpointOutOfRange {
        src: usize,
        label: String,
        dst: usize,
        states: usize,
    },
    #[error("invalid transition label {0:?}")]
    BadLabel(String),
}

/// Check a label is usable on a transition: an identifier other than `T`.
pub fn validate_label(label: &str) -> Result<(), LtsError> {
    if label == "T" || !crate::syntax::is_identifier(label) {
        Err(LtsError::BadLabel(label.to_string()))
    } else {
        Ok(())
    }
}

/// A finite labeled transition system with a distinguished initial state.
///
/// Immutable once built. States are `0..num_states()`; the transition list
/// holds no exact duplicates.
#[derive(Debug, Clone)]
pub struct Lts {
    initial: usize,
    labels: Vec<String>,
    label_index: HashMap<String, LabelId>,
    transitions: Vec<Transition>,
    succ: Vec<Vec<(LabelId, usize)>>,
    pred: Vec<Vec<(LabelId, usize)>>,
}

impl Lts {
    /// Convenience constructor from `(src, label, dst)` triples.
    pub fn from_edges<'a>(
        num_states: usize,
        initial: usize,
        edges: impl IntoIterator<Item = (usize, &'a str, usize)>,
    ) -> Result<Lts, LtsError> {
        let mut b = LtsBuilder::new(num_states);
        b.set_initial(initial);
        for (s, l, d) in edges {
            b.add_transition(s, l, d)?;
        }
        b.build()
    }

    pub fn num_states(&self) -> usize {
        self.succ.len()
    }

    pub fn num_transitions(&self) -> usize {
        self.transitions.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    /// Transitions in insertion order (duplicates removed).
    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label_name(&self, id: LabelId) -> &str {
        &self.labels[id.index()]
    }

    pub fn label_id(&self, name: &str) -> Option<LabelId> {
        self.label_index.get(name).copied()
    }

    /// Outgoing `(label, target)` pairs of a state.
    pub fn successors(&self, state: usize) -> &[(LabelId, usize)] {
        &self.succ[state]
    }

    /// Incoming `(label, source)` pairs of a state.
    pub fn predecessors(&self, state: usize) -> &[(LabelId, usize)] {
        &self.pred[state]
    }

    pub fn empty_set(&self) -> StateSet {
        StateSet::empty(self.num_states())
    }

    pub fn all_states(&self) -> StateSet {
        StateSet::full(self.num_states())
    }

    /// Which interned labels satisfy `e`, indexed by [`LabelId`].
    pub fn label_mask(&self, e: &LabelExpr) -> Vec<bool> {
        self.labels.iter().map(|l| e.eval(l)).collect()
    }

    /// Successors of `s` along edges whose label satisfies `a`.
    pub fn post(&self, s: &StateSet, a: &LabelExpr) -> StateSet {
        self.post_masked(s, &self.label_mask(a))
    }

    /// Predecessors of `s` along edges whose label satisfies `a`.
    pub fn pre(&self, s: &StateSet, a: &LabelExpr) -> StateSet {
        self.pre_masked(s, &self.label_mask(a))
    }

    pub(crate) fn post_masked(&self, s: &StateSet, mask: &[bool]) -> StateSet {
        self.image(s, mask, &self.succ)
    }

    pub(crate) fn pre_masked(&self, s: &StateSet, mask: &[bool]) -> StateSet {
        self.image(s, mask, &self.pred)
    }

    fn image(&self, s: &StateSet, mask: &[bool], adj: &[Vec<(LabelId, usize)>]) -> StateSet {
        assert_eq!(s.width(), self.num_states(), "state set of another system");
        let mut out = self.empty_set();
        for q in s.iter() {
            for &(l, r) in &adj[q] {
                if mask[l.index()] {
                    out.insert(r);
                }
            }
        }
        out
    }
}

/// Incremental construction of an [`Lts`].
#[derive(Debug, Clone, Default)]
pub struct LtsBuilder {
    num_states: usize,
    initial: usize,
    labels: Vec<String>,
    label_index: HashMap<String, LabelId>,
    transitions: Vec<Transition>,
    seen: BTreeSet<Transition>,
}

impl LtsBuilder {
    pub fn new(num_states: usize) -> Self {
        LtsBuilder {
            num_states,
            ..Default::default()
        }
    }

    pub fn add_state(&mut self) -> usize {
        self.num_states += 1;
        self.num_states - 1
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn set_initial(&mut self, initial: usize) {
        self.initial = initial;
    }

    /// Intern a label without requiring a transition to carry it.
    pub fn register_label(&mut self, label: &str) -> Result<LabelId, LtsError> {
        validate_label(label)?;
        if let Some(&id) = self.label_index.get(label) {
            return Ok(id);
        }
        let id = LabelId(self.labels.len() as u32);
        self.labels.push(label.to_string());
        self.label_index.insert(label.to_string(), id);
        Ok(id)
    }

    /// Adds a transition; exact duplicates are ignored. Endpoints are checked
    /// at [`build`](Self::build) time.
    pub fn add_transition(&mut self, src: usize, label: &str, dst: usize) -> Result<(), LtsError> {
        let label = self.register_label(label)?;
        let t = Transition { src, label, dst };
        if self.seen.insert(t) {
            self.transitions.push(t);
        }
        Ok(())
    }

    pub fn build(self) -> Result<Lts, LtsError> {
        let n = self.num_states;
        if n == 0 {
            return Err(LtsError::NoStates);
        }
        if self.initial >= n {
            return Err(LtsError::InitialOutOfRange {
                initial: self.initial,
                states: n,
            });
        }
        let mut succ = vec![Vec::new(); n];
        let mut pred = vec![Vec::new(); n];
        for t in &self.transitions {
            if t.src >= n || t.dst >= n {
                return Err(LtsError::EndpointOutOfRange {
                    src: t.src,
                    label: self.labels[t.label.index()].clone(),
                    dst: t.dst,
                    states: n,
                });
            }
            succ[t.src].push((t.label, t.dst));
            pred[t.dst].push((t.label, t.src));
        }
        Ok(Lts {
            initial: self.initial,
            labels: self.labels,
            label_index: self.label_index,
            transitions: self.transitions,
            succ,
            pred,
        })
    }
}
