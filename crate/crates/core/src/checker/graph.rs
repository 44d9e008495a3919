use std::collections::VecDeque;

use crate::lts::{Lts, StateSet};

/// A path as `(label, reached state)` steps.
pub type Path = Vec<(String, usize)>;

/// Shortest path from `from` to any state of `targets`, using edges whose
/// label passes `mask` (indexed by label id). Returns the reached target.
pub fn shortest_path(
    g: &Lts,
    from: usize,
    targets: &StateSet,
    mask: Option<&[bool]>,
) -> Option<(usize, Path)> {
    let n = g.num_states();
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut seen = vec![false; n];
    seen[from] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(s) = queue.pop_front() {
        if targets.contains(s) {
            return Some((s, rebuild(g, &parent, s)));
        }
        for (k, &(label, d)) in g.successors(s).iter().enumerate() {
            if mask.is_some_and(|m| !m[label.index()]) || seen[d] {
                continue;
            }
            seen[d] = true;
            parent[d] = Some((s, k));
            queue.push_back(d);
        }
    }
    None
}

fn rebuild(g: &Lts, parent: &[Option<(usize, usize)>], mut s: usize) -> Path {
    let mut out = Vec::new();
    while let Some((p, k)) = parent[s] {
        let (label, d) = g.successors(p)[k];
        out.push((g.label_name(label).to_string(), d));
        s = p;
    }
    out.reverse();
    out
}

/// Shortest nonempty cycle through `s` over `mask` edges.
pub fn cycle_through(g: &Lts, s: usize, mask: &[bool]) -> Option<Path> {
    let n = g.num_states();
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    for (k, &(label, d)) in g.successors(s).iter().enumerate() {
        if !mask[label.index()] {
            continue;
        }
        if d == s {
            return Some(vec![(g.label_name(label).to_string(), s)]);
        }
        if !seen[d] {
            seen[d] = true;
            parent[d] = Some((s, k));
            queue.push_back(d);
        }
    }
    while let Some(u) = queue.pop_front() {
        for (k, &(label, d)) in g.successors(u).iter().enumerate() {
            if !mask[label.index()] {
                continue;
            }
            if d == s {
                let mut path = rebuild(g, &parent, u);
                path.push((g.label_name(label).to_string(), s));
                return Some(path);
            }
            if !seen[d] {
                seen[d] = true;
                parent[d] = Some((u, k));
                queue.push_back(d);
            }
        }
    }
    None
}

/// States lying on some cycle of `mask` edges (nontrivial strongly
/// connected components and self-loops), by iterative Tarjan.
pub fn cyclic_states(g: &Lts, mask: &[bool]) -> StateSet {
    let n = g.num_states();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut out = g.empty_set();
    let mut counter = 0;
    let edges = |u: usize| {
        g.successors(u)
            .iter()
            .filter(|(l, _)| mask[l.index()])
            .map(|&(_, d)| d)
            .collect::<Vec<_>>()
    };
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut work: Vec<(usize, Vec<usize>, usize)> = vec![(root, edges(root), 0)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some((u, succ, i)) = work.last_mut() {
            let u = *u;
            if *i < succ.len() {
                let d = succ[*i];
                *i += 1;
                if index[d] == usize::MAX {
                    index[d] = counter;
                    low[d] = counter;
                    counter += 1;
                    stack.push(d);
                    on_stack[d] = true;
                    work.push((d, edges(d), 0));
                } else if on_stack[d] {
                    low[u] = low[u].min(index[d]);
                }
                continue;
            }
            work.pop();
            if let Some((parent, _, _)) = work.last() {
                low[*parent] = low[*parent].min(low[u]);
            }
            if low[u] == index[u] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack");
                    on_stack[w] = false;
                    comp.push(w);
                    if w == u {
                        break;
                    }
                }
                let self_loop = edges(u).contains(&u);
                if comp.len() > 1 || self_loop {
                    for w in comp {
                        out.insert(w);
                    }
                }
            }
        }
    }
    out
}

/// States reachable from the initial state.
pub fn reachable(g: &Lts) -> StateSet {
    let mut out = g.empty_set();
    out.insert(g.initial());
    let mut stack = vec![g.initial()];
    while let Some(s) = stack.pop() {
        for &(_, d) in g.successors(s) {
            if out.insert(d) {
                stack.push(d);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g() -> Lts {
        Lts::from_edges(
            5,
            0,
            [
                (0, "a", 1),
                (1, "b", 2),
                (2, "c", 1),
                (2, "t", 3),
                (3, "t", 3),
                (4, "a", 0),
            ],
        )
        .unwrap()
    }

    #[test]
    fn paths_and_cycles() {
        let g = g();
        let all = vec![true; g.labels().len()];
        let (s, p) = shortest_path(&g, 0, &StateSet::singleton(5, 3), None).unwrap();
        assert_eq!(s, 3);
        let labels: Vec<&str> = p.iter().map(|(l, _)| l.as_str()).collect();
        assert_eq!(labels, vec!["a", "b", "t"]);
        let c = cycle_through(&g, 1, &all).unwrap();
        assert_eq!(c, vec![("b".to_string(), 2), ("c".to_string(), 1)]);
        assert_eq!(cycle_through(&g, 3, &all).unwrap().len(), 1);
        assert!(cycle_through(&g, 0, &all).is_none());
        assert_eq!(cyclic_states(&g, &all).to_vec(), vec![1, 2, 3]);
        assert_eq!(reachable(&g).to_vec(), vec![0, 1, 2, 3]);
    }
}
