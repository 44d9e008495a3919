use crate::lts::LabelExpr;

use super::{PathRegex, Step, Word};

/// Epsilon-free automaton with edges labeled by label expressions.
///
/// Each `One` or `Star` step gets a fresh state; a union shares the start
/// states of its branches, which only ever have edges into fresh states.
#[derive(Debug, Clone)]
pub struct Nfa {
    pub num_states: usize,
    pub initial: usize,
    pub accepting: Vec<bool>,
    pub edges: Vec<(usize, LabelExpr, usize)>,
}

impl Nfa {
    pub fn compile(r: &PathRegex) -> Nfa {
        let mut nfa = Nfa {
            num_states: 1,
            initial: 0,
            accepting: Vec::new(),
            edges: Vec::new(),
        };
        let ends = nfa.build(&r.expand_tick());
        nfa.accepting = vec![false; nfa.num_states];
        for e in ends {
            nfa.accepting[e] = true;
        }
        nfa
    }

    /// Returns the states reached at the end of `r`.
    fn build(&mut self, r: &PathRegex) -> Vec<usize> {
        match r {
            PathRegex::Eps => vec![self.initial],
            PathRegex::Seq(r, step) => {
                let mut ends = self.build(r);
                let q = self.num_states;
                self.num_states += 1;
                let (a, looping) = match step {
                    Step::One(a) => (a, false),
                    Step::Star(a) => (a, true),
                    Step::Tick => unreachable!("expanded before compiling"),
                };
                for &e in &ends {
                    self.edges.push((e, a.clone(), q));
                }
                if looping {
                    self.edges.push((q, a.clone(), q));
                    ends.push(q);
                    ends
                } else {
                    vec![q]
                }
            }
            PathRegex::Union(l, r) => {
                let mut ends = self.build(l);
                for e in self.build(r) {
                    if !ends.contains(&e) {
                        ends.push(e);
                    }
                }
                ends
            }
        }
    }

    /// Subset simulation.
    pub fn accepts(&self, w: &Word) -> bool {
        let mut cur = vec![false; self.num_states];
        cur[self.initial] = true;
        for sym in w.symbols() {
            let mut next = vec![false; self.num_states];
            for (p, a, q) in &self.edges {
                if cur[*p] && a.eval(sym) {
                    next[*q] = true;
                }
            }
            cur = next;
        }
        cur.iter().zip(&self.accepting).any(|(c, a)| *c && *a)
    }
}
