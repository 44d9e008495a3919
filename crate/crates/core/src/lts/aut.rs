//! Aldebaran `.aut` reader and canonical writer.
//!
//! ```text
//! des (0, 2, 3)
//! (0, "a", 1)
//! (1, "t", 2)
//! ```

use std::fmt::Write;

use thiserror::Error;

use super::{Lts, LtsBuilder, LtsError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutError {
    #[error("line {line}: malformed header, expected `des (<init>, <#transitions>, <#states>)`")]
    BadHeader { line: usize },
    #[error("line {line}: malformed transition, expected `(<src>, \"<label>\", <dst>)`")]
    BadTransition { line: usize },
    #[error("header declares {declared} transitions, found {found}")]
    CountMismatch { declared: usize, found: usize },
    #[error("line {line}: {source}")]
    Invalid {
        line: usize,
        #[source]
        source: LtsError,
    },
    #[error("{0}")]
    Structure(#[from] LtsError),
}

fn parse_header(line: &str) -> Option<(usize, usize, usize)> {
    let rest = line.trim().strip_prefix("des")?.trim_start();
    let inner = rest.strip_prefix('(')?.strip_suffix(')')?;
    let mut parts = inner.split(',').map(|p| p.trim().parse::<usize>());
    let init = parts.next()?.ok()?;
    let ntrans = parts.next()?.ok()?;
    let nstates = parts.next()?.ok()?;
    if parts.next().is_some() {
        return None;
    }
    Some((init, ntrans, nstates))
}

fn parse_transition(line: &str) -> Option<(usize, &str, usize)> {
    let inner = line.trim().strip_prefix('(')?.strip_suffix(')')?;
    let (src, rest) = inner.split_once(',')?;
    let rest = rest.trim_start().strip_prefix('"')?;
    let (label, rest) = rest.split_once('"')?;
    let dst = rest.trim_start().strip_prefix(',')?;
    Some((src.trim().parse().ok()?, label, dst.trim().parse().ok()?))
}

/// Parses `.aut` text. Exact duplicate transitions are merged; the header's
/// transition count refers to the lines as written.
pub fn load_aut(text: &str) -> Result<Lts, AutError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty());
    let (hline, header) = lines.next().ok_or(AutError::BadHeader { line: 1 })?;
    let (init, ntrans, nstates) =
        parse_header(header).ok_or(AutError::BadHeader { line: hline })?;
    let mut b = LtsBuilder::new(nstates);
    b.set_initial(init);
    let mut found = 0;
    for (line, l) in lines {
        let (src, label, dst) = parse_transition(l).ok_or(AutError::BadTransition { line })?;
        if src >= nstates || dst >= nstates {
            return Err(AutError::Invalid {
                line,
                source: LtsError::EndpointOutOfRange {
                    src,
                    label: label.to_string(),
                    dst,
                    states: nstates,
                },
            });
        }
        b.add_transition(src, label, dst)
            .map_err(|source| AutError::Invalid { line, source })?;
        found += 1;
    }
    if found != ntrans {
        return Err(AutError::CountMismatch {
            declared: ntrans,
            found,
        });
    }
    Ok(b.build()?)
}

/// Canonical text: transitions sorted by (source, label text, target).
pub fn save_aut(g: &Lts) -> String {
    let mut edges: Vec<(usize, &str, usize)> = g
        .transitions()
        .iter()
        .map(|t| (t.src, g.label_name(t.label), t.dst))
        .collect();
    edges.sort_unstable();
    let mut out = String::new();
    let _ = writeln!(
        out,
        "des ({}, {}, {})",
        g.initial(),
        edges.len(),
        g.num_states()
    );
    for (s, l, d) in edges {
        let _ = writeln!(out, "({s}, \"{l}\", {d})");
    }
    out
}
