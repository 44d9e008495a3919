use std::collections::HashMap;

use crate::lts::{LabelExpr, Lts, StateSet};

use super::{check_monotone, FormulaError, MuFormula};

/// Counters collected during one evaluation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EvalStats {
    /// Number of fixpoint computations performed (nested ones count every
    /// time they are re-entered).
    pub fixpoints: usize,
    /// Largest number of approximant changes seen in a single fixpoint
    /// computation. Never exceeds the state count.
    pub max_rounds: usize,
}

/// Set of states satisfying a closed, monotone formula.
pub fn eval_mu(g: &Lts, f: &MuFormula) -> Result<StateSet, FormulaError> {
    eval_mu_with_stats(g, f).map(|(s, _)| s)
}

pub fn eval_mu_with_stats(g: &Lts, f: &MuFormula) -> Result<(StateSet, EvalStats), FormulaError> {
    check_monotone(f)?;
    let mut ev = Evaluator {
        g,
        masks: HashMap::new(),
        env: Vec::new(),
        stats: EvalStats::default(),
    };
    let s = ev.eval(f);
    Ok((s, ev.stats))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tautology {
    pub holds: bool,
    /// Least-index state where the formula is false.
    pub witness: Option<usize>,
}

pub fn is_tautology(g: &Lts, f: &MuFormula) -> Result<Tautology, FormulaError> {
    let s = eval_mu(g, f)?;
    let witness = s.first_missing();
    Ok(Tautology {
        holds: witness.is_none(),
        witness,
    })
}

struct Evaluator<'g> {
    g: &'g Lts,
    masks: HashMap<LabelExpr, Vec<bool>>,
    env: Vec<(String, StateSet)>,
    stats: EvalStats,
}

impl Evaluator<'_> {
    fn mask(&mut self, a: &LabelExpr) -> &[bool] {
        let g = self.g;
        self.masks
            .entry(a.clone())
            .or_insert_with(|| g.label_mask(a))
    }

    fn lookup(&self, x: &str) -> StateSet {
        self.env
            .iter()
            .rev()
            .find(|(name, _)| name == x)
            .map(|(_, s)| s.clone())
            .expect("formula checked closed")
    }

    /// Kleene iteration of `step` from `start` until it stabilizes.
    fn iterate(
        &mut self,
        start: StateSet,
        mut step: impl FnMut(&mut Self, &StateSet) -> StateSet,
    ) -> StateSet {
        let n = self.g.num_states();
        let mut cur = start;
        let mut rounds = 0;
        loop {
            let next = step(self, &cur);
            if next == cur {
                break;
            }
            rounds += 1;
            assert!(
                rounds <= n,
                "fixpoint did not converge within {n} rounds; body is not monotone"
            );
            cur = next;
        }
        self.stats.fixpoints += 1;
        self.stats.max_rounds = self.stats.max_rounds.max(rounds);
        cur
    }

    fn fixpoint(&mut self, x: &str, body: &MuFormula, start: StateSet) -> StateSet {
        self.iterate(start, |ev, cur| {
            ev.env.push((x.to_string(), cur.clone()));
            let next = ev.eval(body);
            ev.env.pop();
            next
        })
    }

    fn eval(&mut self, f: &MuFormula) -> StateSet {
        let g = self.g;
        match f {
            MuFormula::True => g.all_states(),
            MuFormula::InitConst => StateSet::singleton(g.num_states(), g.initial()),
            MuFormula::Var(x) => self.lookup(x),
            MuFormula::Not(h) => self.eval(h).complement(),
            MuFormula::And(l, r) => {
                let mut s = self.eval(l);
                s.intersect_with(&self.eval(r));
                s
            }
            MuFormula::Or(l, r) => {
                let mut s = self.eval(l);
                s.union_with(&self.eval(r));
                s
            }
            MuFormula::Implies(l, r) => {
                let mut s = self.eval(l).complement();
                s.union_with(&self.eval(r));
                s
            }
            MuFormula::Iff(l, r) => {
                let a = self.eval(l);
                let b = self.eval(r);
                let mut both = a.intersection(&b);
                both.union_with(&a.union(&b).complement());
                both
            }
            MuFormula::FwdDiamond(a, h) => {
                let s = self.eval(h);
                let mask = self.mask(a).to_vec();
                g.pre_masked(&s, &mask)
            }
            MuFormula::BwdDiamond(h, a) | MuFormula::SuffixO(h, a) => {
                let s = self.eval(h);
                let mask = self.mask(a).to_vec();
                g.post_masked(&s, &mask)
            }
            MuFormula::Min(x, body) => self.fixpoint(x, body, g.empty_set()),
            MuFormula::Max(x, body) => self.fixpoint(x, body, g.all_states()),
            MuFormula::SuffixStar(h, a) => {
                // min X | h \/ X<a>
                let base = self.eval(h);
                let mask = self.mask(a).to_vec();
                self.iterate(g.empty_set(), |_, cur| {
                    let mut next = g.post_masked(cur, &mask);
                    next.union_with(&base);
                    next
                })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse_mu;
    use super::*;

    fn ev(g: &Lts, s: &str) -> Vec<usize> {
        eval_mu(g, &parse_mu(s).unwrap()).unwrap().to_vec()
    }

    fn chain() -> Lts {
        Lts::from_edges(3, 0, [(0, "a", 1), (1, "t", 2)]).unwrap()
    }

    #[test]
    fn forward_diamond() {
        assert_eq!(ev(&chain(), "<a>T"), vec![0]);
    }

    #[test]
    fn backward_diamond() {
        assert_eq!(ev(&chain(), "T<a>"), vec![1]);
    }

    #[test]
    fn star_from_initial_reaches_everything() {
        let g = Lts::from_edges(3, 0, [(0, "a", 1), (1, "t", 2), (2, "t", 2)]).unwrap();
        assert_eq!(ev(&g, "`0 * T"), vec![0, 1, 2]);
        assert_eq!(ev(&g, "`0 * a"), vec![0, 1]);
    }

    #[test]
    fn greatest_fixpoint() {
        // states with an infinite t-path
        let g = Lts::from_edges(3, 0, [(0, "a", 1), (1, "t", 2), (2, "t", 2)]).unwrap();
        assert_eq!(ev(&g, "max X | <t>X"), vec![1, 2]);
        assert_eq!(ev(&g, "min X | <t>X"), Vec::<usize>::new());
    }

    #[test]
    fn connectives() {
        let g = chain();
        assert_eq!(ev(&g, "-<a>T"), vec![1, 2]);
        assert_eq!(ev(&g, "<a>T => `0"), vec![0, 1, 2]);
        assert_eq!(ev(&g, "<a>T <=> <t>T"), vec![2]);
        assert_eq!(ev(&g, "<a>T \\/ <t>T"), vec![0, 1]);
        assert_eq!(ev(&g, "T<T> /\\ <t>T"), vec![1]);
    }

    #[test]
    fn rejects_non_monotone() {
        let f = parse_mu("min X | -X").unwrap();
        assert!(matches!(
            eval_mu(&chain(), &f),
            Err(FormulaError::NonMonotone { .. })
        ));
    }

    #[test]
    fn tautology_and_witness() {
        let g = chain();
        assert_eq!(
            is_tautology(&g, &MuFormula::True).unwrap(),
            Tautology {
                holds: true,
                witness: None
            }
        );
        let two = Lts::from_edges(2, 0, [(0, "a", 1)]).unwrap();
        assert_eq!(
            is_tautology(&two, &MuFormula::InitConst).unwrap(),
            Tautology {
                holds: false,
                witness: Some(1)
            }
        );
    }

    #[test]
    fn round_counter_is_bounded() {
        let g = Lts::from_edges(4, 0, [(0, "a", 1), (1, "a", 2), (2, "a", 3)]).unwrap();
        let (s, stats) = eval_mu_with_stats(&g, &parse_mu("`0 * a").unwrap()).unwrap();
        assert_eq!(s.len(), 4);
        assert_eq!(stats.max_rounds, 4);
        assert_eq!(stats.fixpoints, 1);
    }
}
