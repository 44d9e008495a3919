use std::collections::HashMap;

use crate::fott::Interval;

use super::{BinOp, Expr, NetError, NetTransition, Process, Site, TimedNet};

/// Parses the line-oriented net format:
///
/// ```text
/// # comment
/// var x : 0..2 = 0
/// process Universal
/// init u
/// from u on a do x := 1 to u
/// from u on z when x != 0 do x := 0 urgent to u
/// process Present
/// from watch probe a when elapsed in [0,1[ label stop to ok
/// from watch elapse [1,w[ label error to error
/// priority watch > a
/// ```
///
/// Transitions on events are labeled by the event; elapse and probe
/// transitions need a `label`. Without `init`, a process starts in the
/// source of its first transition. Intervals are written `[lo,hi]`,
/// `[lo,hi[`, `]lo,hi]`, `]lo,hi[`, with `w` or `inf` for infinity.
pub fn parse_net(text: &str) -> Result<TimedNet, NetError> {
    let mut net = TimedNet::default();
    let mut lines: HashMap<SiteKey, usize> = HashMap::new();
    let mut current: Option<Draft> = None;
    let mut drafts: Vec<Draft> = Vec::new();

    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let content = raw.split('#').next().unwrap_or("");
        let toks = lex(content).map_err(|message| NetError::Syntax { line, message })?;
        if toks.is_empty() {
            continue;
        }
        let mut p = LineParser { toks, pos: 0, line };
        let head = p.ident("a declaration")?;
        match head.as_str() {
            "var" => {
                let name = p.ident("a variable name")?;
                p.sym(":")?;
                let lo = p.int()?;
                p.sym("..")?;
                let hi = p.int()?;
                p.sym("=")?;
                let init = p.int()?;
                p.end()?;
                lines.insert(SiteKey::Var(net.variables.len()), line);
                net.var(&name, lo, hi, init);
            }
            "process" => {
                let name = p.ident("a process name")?;
                p.end()?;
                drafts.extend(current.take());
                current = Some(Draft {
                    name,
                    line,
                    initial: None,
                    transitions: Vec::new(),
                });
            }
            "init" => {
                let loc = p.ident("a location")?;
                p.end()?;
                let d = current
                    .as_mut()
                    .ok_or_else(|| p.error("`init` outside a process"))?;
                if d.initial.is_some() {
                    return Err(p.error("initial location given twice"));
                }
                d.initial = Some(loc);
            }
            "from" => {
                let t = p.transition()?;
                let d = current
                    .as_mut()
                    .ok_or_else(|| p.error("transition outside a process"))?;
                d.transitions.push((t, line));
            }
            "priority" => {
                let hi = p.ident("a label")?;
                p.sym(">")?;
                let lo = p.ident("a label")?;
                p.end()?;
                lines.insert(SiteKey::Priority(net.priorities.len()), line);
                net.priority(&hi, &lo);
            }
            other => return Err(p.error(&format!("unknown declaration `{other}`"))),
        }
    }
    drafts.extend(current.take());

    for (pi, d) in drafts.into_iter().enumerate() {
        let initial = match (d.initial, d.transitions.first()) {
            (Some(i), _) => i,
            (None, Some((t, _))) => t.from.clone(),
            (None, None) => {
                return Err(NetError::Syntax {
                    line: d.line,
                    message: format!("process `{}` has neither `init` nor transitions", d.name),
                })
            }
        };
        lines.insert(SiteKey::Process(pi), d.line);
        let mut proc_ = Process::new(&d.name, &initial);
        for (ti, (t, line)) in d.transitions.into_iter().enumerate() {
            lines.insert(SiteKey::Transition(pi, ti), line);
            proc_.add(t);
        }
        net.process(proc_);
    }

    net.validate().map_err(|e| match e {
        NetError::Invalid { site, message, .. } => NetError::Invalid {
            line: SiteKey::from_site(site).and_then(|k| lines.get(&k).copied()),
            site,
            message,
        },
        other => other,
    })?;
    Ok(net)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum SiteKey {
    Var(usize),
    Process(usize),
    Transition(usize, usize),
    Priority(usize),
}

impl SiteKey {
    fn from_site(site: Site) -> Option<SiteKey> {
        match site {
            Site::Net => None,
            Site::Variable(v) => Some(SiteKey::Var(v)),
            Site::Process(p) => Some(SiteKey::Process(p)),
            Site::Transition(p, t) => Some(SiteKey::Transition(p, t)),
            Site::Priority(k) => Some(SiteKey::Priority(k)),
        }
    }
}

struct Draft {
    name: String,
    line: usize,
    initial: Option<String>,
    transitions: Vec<(NetTransition, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    Sym(&'static str),
}

const SYMBOLS: [&str; 22] = [
    ":=", "..", "&&", "||", "==", "!=", "<=", ">=", "[", "]", ",", "(", ")", "!", "<", ">", "+",
    "-", ":", "=", ";", "*",
];

fn lex(s: &str) -> Result<Vec<Tok>, String> {
    let mut out = Vec::new();
    let mut rest = s.trim_start();
    while !rest.is_empty() {
        let c = rest.chars().next().expect("nonempty");
        let len = if c.is_ascii_digit() {
            let n = rest
                .find(|ch: char| !ch.is_ascii_digit())
                .unwrap_or(rest.len());
            let v = rest[..n]
                .parse()
                .map_err(|_| format!("integer `{}` out of range", &rest[..n]))?;
            out.push(Tok::Int(v));
            n
        } else if c.is_ascii_alphabetic() || c == '_' {
            let n = rest
                .find(|ch: char| !(ch.is_ascii_alphanumeric() || ch == '_'))
                .unwrap_or(rest.len());
            out.push(Tok::Ident(rest[..n].to_string()));
            n
        } else if let Some(sym) = SYMBOLS.iter().find(|sym| rest.starts_with(**sym)) {
            out.push(Tok::Sym(sym));
            sym.len()
        } else {
            return Err(format!("unexpected character {c:?}"));
        };
        rest = rest[len..].trim_start();
    }
    Ok(out)
}

const CLAUSE_WORDS: [&str; 6] = ["when", "do", "urgent", "keepclock", "label", "to"];

struct LineParser {
    toks: Vec<Tok>,
    pos: usize,
    line: usize,
}

impl LineParser {
    fn error(&self, message: &str) -> NetError {
        NetError::Syntax {
            line: self.line,
            message: message.to_string(),
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn peek_word(&self, w: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == w)
    }

    fn peek_sym(&self, sym: &str) -> bool {
        matches!(self.peek(), Some(Tok::Sym(s)) if *s == sym)
    }

    fn describe_next(&self) -> String {
        match self.peek() {
            None => "end of line".into(),
            Some(Tok::Ident(s)) => format!("`{s}`"),
            Some(Tok::Int(v)) => format!("`{v}`"),
            Some(Tok::Sym(s)) => format!("`{s}`"),
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, NetError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.error(&format!("expected {what}, found {}", self.describe_next()))),
        }
    }

    fn word(&mut self, w: &str) -> Result<(), NetError> {
        if self.peek_word(w) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected `{w}`, found {}", self.describe_next())))
        }
    }

    fn eat_word(&mut self, w: &str) -> bool {
        let hit = self.peek_word(w);
        if hit {
            self.pos += 1;
        }
        hit
    }

    fn sym(&mut self, sym: &str) -> Result<(), NetError> {
        if self.eat_sym(sym) {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{sym}`, found {}", self.describe_next())))
        }
    }

    fn eat_sym(&mut self, sym: &str) -> bool {
        let hit = self.peek_sym(sym);
        if hit {
            self.pos += 1;
        }
        hit
    }

    fn nat(&mut self) -> Result<u64, NetError> {
        match self.peek() {
            Some(Tok::Int(v)) => {
                let v = *v as u64;
                self.pos += 1;
                Ok(v)
            }
            _ => Err(self.error(&format!(
                "expected a number, found {}",
                self.describe_next()
            ))),
        }
    }

    fn int(&mut self) -> Result<i64, NetError> {
        let neg = self.eat_sym("-");
        let v = self.nat()? as i64;
        Ok(if neg { -v } else { v })
    }

    fn end(&self) -> Result<(), NetError> {
        if self.pos == self.toks.len() {
            Ok(())
        } else {
            Err(self.error(&format!(
                "unexpected {} at end of line",
                self.describe_next()
            )))
        }
    }

    fn interval(&mut self) -> Result<Interval, NetError> {
        let lower_open = if self.eat_sym("[") {
            false
        } else if self.eat_sym("]") {
            true
        } else {
            return Err(self.error("expected an interval"));
        };
        let lower = self.nat()?;
        self.sym(",")?;
        let upper = if self.eat_word("w") || self.eat_word("inf") {
            None
        } else {
            Some(self.nat()?)
        };
        let upper_open = if self.eat_sym("[") {
            true
        } else if self.eat_sym("]") {
            false
        } else {
            return Err(self.error("expected `]` or `[` closing the interval"));
        };
        if upper.is_none() && !upper_open {
            return Err(self.error("an infinite upper bound must be open"));
        }
        Ok(Interval::new(lower, lower_open, upper, upper_open))
    }

    fn transition(&mut self) -> Result<NetTransition, NetError> {
        let from = self.ident("a source location")?;
        let kind = self.ident("`on`, `elapse` or `probe`")?;
        let mut event_label = None;
        let mut t = match kind.as_str() {
            "on" => {
                let e = self.ident("an event")?;
                event_label = Some(e.clone());
                NetTransition::on(&from, &e, "")
            }
            "elapse" => {
                let i = self.interval()?;
                NetTransition::elapse(&from, i, "", "")
            }
            "probe" => {
                let e = self.ident("a probed event")?;
                let mut elapsed = Interval::at_least(0);
                if self.peek_word("when")
                    && matches!(self.toks.get(self.pos + 1), Some(Tok::Ident(s)) if s == "elapsed")
                {
                    self.pos += 2;
                    self.word("in")?;
                    elapsed = self.interval()?;
                }
                NetTransition::probe(&from, &e, elapsed, "", "")
            }
            other => {
                return Err(self.error(&format!(
                    "expected `on`, `elapse` or `probe`, found `{other}`"
                )))
            }
        };
        if self.eat_word("when") {
            t.guard = Some(self.expr()?);
        }
        if self.eat_word("do") {
            loop {
                let x = self.ident("a variable")?;
                self.sym(":=")?;
                let e = self.expr()?;
                t.assignments.push((x, e));
                if !(self.eat_sym(",") || self.eat_sym(";")) {
                    break;
                }
            }
        }
        if self.eat_word("urgent") {
            t.urgent = true;
        }
        if self.eat_word("keepclock") {
            t.keepclock = true;
        }
        if self.eat_word("label") {
            let l = self.ident("a label")?;
            if let Some(e) = &event_label {
                if *e != l {
                    return Err(self.error(&format!(
                        "an event transition is labeled by its event `{e}`, not `{l}`"
                    )));
                }
            }
            t.label = l;
        } else if let Some(e) = event_label {
            t.label = e;
        } else {
            return Err(self.error("elapse and probe transitions need a `label`"));
        }
        self.word("to")?;
        t.to = self.ident("a target location")?;
        self.end()?;
        Ok(t)
    }

    fn expr(&mut self) -> Result<Expr, NetError> {
        let mut l = self.conj()?;
        while self.eat_sym("||") {
            l = Expr::bin(BinOp::Or, l, self.conj()?);
        }
        Ok(l)
    }

    fn conj(&mut self) -> Result<Expr, NetError> {
        let mut l = self.negation()?;
        while self.eat_sym("&&") {
            l = Expr::bin(BinOp::And, l, self.negation()?);
        }
        Ok(l)
    }

    fn negation(&mut self) -> Result<Expr, NetError> {
        if self.eat_sym("!") {
            return Ok(Expr::not(self.negation()?));
        }
        self.comparison()
    }

    fn comparison(&mut self) -> Result<Expr, NetError> {
        let l = self.sum()?;
        let ops = [
            ("==", BinOp::Eq),
            ("!=", BinOp::Ne),
            ("<=", BinOp::Le),
            (">=", BinOp::Ge),
            ("<", BinOp::Lt),
            (">", BinOp::Gt),
        ];
        for (sym, op) in ops {
            if self.eat_sym(sym) {
                return Ok(Expr::bin(op, l, self.sum()?));
            }
        }
        Ok(l)
    }

    fn sum(&mut self) -> Result<Expr, NetError> {
        let mut l = self.atom()?;
        loop {
            if self.eat_sym("+") {
                l = Expr::bin(BinOp::Add, l, self.atom()?);
            } else if self.eat_sym("-") {
                l = Expr::bin(BinOp::Sub, l, self.atom()?);
            } else {
                return Ok(l);
            }
        }
    }

    fn atom(&mut self) -> Result<Expr, NetError> {
        match self.peek().cloned() {
            Some(Tok::Int(v)) => {
                self.pos += 1;
                Ok(Expr::int(v))
            }
            Some(Tok::Ident(s)) if !CLAUSE_WORDS.contains(&s.as_str()) => {
                self.pos += 1;
                Ok(Expr::var(s))
            }
            Some(Tok::Sym("-")) => {
                self.pos += 1;
                Ok(Expr::Neg(Box::new(self.atom()?)))
            }
            Some(Tok::Sym("(")) => {
                self.pos += 1;
                let e = self.expr()?;
                self.sym(")")?;
                Ok(e)
            }
            _ => Err(self.error(&format!(
                "expected an expression, found {}",
                self.describe_next()
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::builtin_present;
    use super::*;

    const GOLDEN: &str = include_str!("../../tests/data/present_4_5.net");

    #[test]
    fn golden_file_matches_builtin() {
        assert_eq!(parse_net(GOLDEN).unwrap(), builtin_present(4, 5).unwrap());
    }

    #[test]
    fn non_urgent_bounded_elapse_reports_line() {
        let text = "process P\ninit p\nfrom p elapse [2,5] label e to q\n";
        let err = parse_net(text).unwrap_err();
        assert!(
            matches!(err, NetError::Invalid { line: Some(3), .. }),
            "{err}"
        );
    }

    #[test]
    fn unknown_probe_event_reports_line() {
        let text = "process S\nfrom s on a to s\nprocess O\nfrom o probe c label r to o\n";
        let err = parse_net(text).unwrap_err();
        assert!(
            matches!(err, NetError::Invalid { line: Some(4), .. }),
            "{err}"
        );
        assert!(err.to_string().starts_with("line 4: "));
    }

    #[test]
    fn syntax_errors() {
        for (text, line) in [
            ("var x : 0..2\n", 1),
            ("process P\nfrom p elapse [1,2 label e to q\n", 2),
            ("process P\nfrom p on a label b to p\n", 2),
            ("process P\nfrom p elapse [1,w] urgent label e to q\n", 2),
            ("bogus\n", 1),
            ("from p on a to p\n", 1),
        ] {
            match parse_net(text) {
                Err(NetError::Syntax { line: l, .. }) => assert_eq!(l, line, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn guards_and_assignments() {
        let text = "var x : 0..3 = 0\nvar y : -1..1 = 0\nprocess P\n\
                    from p on a when !(x >= 2) && y == 0 || x - 1 < 0 do x := x + 1, y := -1 to p\n";
        let net = parse_net(text).unwrap();
        assert_eq!(net.processes[0].transitions[0].assignments.len(), 2);
        assert_eq!(net.variables[1].lo, -1);
    }
}
