use crate::lts::{Lts, StateSet};

use super::{Nfa, PathRegex};

/// States `q` such that some path from the initial state to `q` spells a word
/// of `r`. Computed by reachability in the product of `g` with the NFA of `r`.
pub fn oracle_end_states(g: &Lts, r: &PathRegex) -> StateSet {
    let nfa = Nfa::compile(r);
    let n = g.num_states();
    let masks: Vec<Vec<bool>> = nfa.edges.iter().map(|(_, a, _)| g.label_mask(a)).collect();
    let mut out_edges: Vec<Vec<usize>> = vec![Vec::new(); nfa.num_states];
    for (k, (p, _, _)) in nfa.edges.iter().enumerate() {
        out_edges[*p].push(k);
    }

    let idx = |p: usize, q: usize| p * n + q;
    let mut seen = vec![false; nfa.num_states * n];
    let mut stack = vec![(nfa.initial, g.initial())];
    seen[idx(nfa.initial, g.initial())] = true;
    let mut result = g.empty_set();
    while let Some((p, q)) = stack.pop() {
        if nfa.accepting[p] {
            result.insert(q);
        }
        for &k in &out_edges[p] {
            let p2 = nfa.edges[k].2;
            for &(label, q2) in g.successors(q) {
                if masks[k][label.index()] && !seen[idx(p2, q2)] {
                    seen[idx(p2, q2)] = true;
                    stack.push((p2, q2));
                }
            }
        }
    }
    result
}

/// States on some path spelling a prefix, cut at a step boundary, of a word
/// of `r`. Defined recursively: the initial state, then the end states of
/// every prefix sub-expression.
pub fn oracle_visited_states(g: &Lts, r: &PathRegex) -> StateSet {
    match r {
        PathRegex::Eps => StateSet::singleton(g.num_states(), g.initial()),
        PathRegex::Seq(prefix, _) => {
            let mut s = oracle_visited_states(g, prefix);
            s.union_with(&oracle_end_states(g, r));
            s
        }
        PathRegex::Union(l, r) => {
            let mut s = oracle_visited_states(g, l);
            s.union_with(&oracle_visited_states(g, r));
            s
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse_regex;
    use super::*;

    fn chain() -> Lts {
        Lts::from_edges(4, 0, [(0, "a", 1), (1, "t", 2), (2, "z", 3), (3, "t", 3)]).unwrap()
    }

    #[test]
    fn end_states_on_chain() {
        let g = chain();
        let end = |s: &str| oracle_end_states(&g, &parse_regex(s).unwrap()).to_vec();
        assert_eq!(end("eps"), vec![0]);
        assert_eq!(end("a"), vec![1]);
        assert_eq!(end("a . Tick"), vec![2, 3]);
        assert_eq!(end("T*"), vec![0, 1, 2, 3]);
        assert_eq!(end("b"), Vec::<usize>::new());
        assert_eq!(end("a . Tick . Tick"), vec![3]);
    }

    #[test]
    fn visited_includes_intermediate_steps() {
        let g = chain();
        let r = parse_regex("a . t").unwrap();
        assert_eq!(oracle_visited_states(&g, &r).to_vec(), vec![0, 1, 2]);
        let r = parse_regex("b . t").unwrap();
        assert_eq!(oracle_visited_states(&g, &r).to_vec(), vec![0]);
    }
}
