use std::fmt::Write;

use super::{Lts, StateSet};

/// Renders the graph as a DOT digraph. The initial state is double-circled,
/// highlighted states are filled.
pub fn to_dot(g: &Lts, highlight: Option<&StateSet>) -> String {
    let mut out = String::from("digraph lts {\n  node [shape=circle];\n");
    for q in 0..g.num_states() {
        let mut attrs = Vec::new();
        if q == g.initial() {
            attrs.push("shape=doublecircle");
        }
        if highlight.is_some_and(|h| h.contains(q)) {
            attrs.push("style=filled");
            attrs.push("fillcolor=salmon");
        }
        if attrs.is_empty() {
            let _ = writeln!(out, "  {q};");
        } else {
            let _ = writeln!(out, "  {q} [{}];", attrs.join(", "));
        }
    }
    for t in g.transitions() {
        let _ = writeln!(
            out,
            "  {} -> {} [label={}];",
            t.src,
            t.dst,
            g.label_name(t.label)
        );
    }
    out.push_str("}\n");
    out
}
