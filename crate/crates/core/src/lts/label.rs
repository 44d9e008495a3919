//! Label expressions: boolean combinations of transition labels.

use std::fmt;

use crate::syntax::{Cursor, ParseError, Tok};

/// A boolean expression over transition labels, denoting a set of labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LabelExpr {
    Atom(String),
    /// Matches every label.
    Top,
    Not(Box<LabelExpr>),
    And(Box<LabelExpr>, Box<LabelExpr>),
    Or(Box<LabelExpr>, Box<LabelExpr>),
}

impl LabelExpr {
    pub fn atom(name: impl Into<String>) -> Self {
        LabelExpr::Atom(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(e: LabelExpr) -> Self {
        LabelExpr::Not(Box::new(e))
    }

    pub fn and(l: LabelExpr, r: LabelExpr) -> Self {
        LabelExpr::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: LabelExpr, r: LabelExpr) -> Self {
        LabelExpr::Or(Box::new(l), Box::new(r))
    }

    /// Left-nested disjunction of the given atoms; `None` when empty.
    pub fn any_of<S: AsRef<str>>(names: &[S]) -> Option<Self> {
        names
            .iter()
            .map(|n| LabelExpr::atom(n.as_ref()))
            .reduce(LabelExpr::or)
    }

    /// Structural evaluation on one label.
    pub fn eval(&self, label: &str) -> bool {
        match self {
            LabelExpr::Atom(a) => a == label,
            LabelExpr::Top => true,
            LabelExpr::Not(e) => !e.eval(label),
            LabelExpr::And(l, r) => l.eval(label) && r.eval(label),
            LabelExpr::Or(l, r) => l.eval(label) || r.eval(label),
        }
    }

    /// Atoms mentioned in the expression, in first-occurrence order.
    pub fn atoms(&self) -> Vec<&str> {
        fn walk<'a>(e: &'a LabelExpr, out: &mut Vec<&'a str>) {
            match e {
                LabelExpr::Atom(a) => {
                    if !out.contains(&a.as_str()) {
                        out.push(a);
                    }
                }
                LabelExpr::Top => {}
                LabelExpr::Not(e) => walk(e, out),
                LabelExpr::And(l, r) | LabelExpr::Or(l, r) => {
                    walk(l, out);
                    walk(r, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }

    fn level(&self) -> u8 {
        match self {
            LabelExpr::Or(..) => 0,
            LabelExpr::And(..) => 1,
            LabelExpr::Not(_) => 2,
            LabelExpr::Atom(_) | LabelExpr::Top => 3,
        }
    }

    fn fmt_at(&self, min_level: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.level() < min_level {
            f.write_str("(")?;
            self.fmt_at(0, f)?;
            return f.write_str(")");
        }
        match self {
            LabelExpr::Atom(a) => f.write_str(a),
            LabelExpr::Top => f.write_str("T"),
            LabelExpr::Not(e) => {
                f.write_str("-")?;
                e.fmt_at(2, f)
            }
            LabelExpr::And(l, r) => {
                l.fmt_at(1, f)?;
                f.write_str(" /\\ ")?;
                r.fmt_at(2, f)
            }
            LabelExpr::Or(l, r) => {
                l.fmt_at(0, f)?;
                f.write_str(" \\/ ")?;
                r.fmt_at(1, f)
            }
        }
    }

    /// Printed form usable where only a primary may appear (after `o`, `*`
    /// or before a regex star): atoms bare, anything else parenthesized.
    pub fn primary_string(&self) -> String {
        match self {
            LabelExpr::Atom(_) | LabelExpr::Top => self.to_string(),
            _ => format!("({self})"),
        }
    }
}

impl fmt::Display for LabelExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(0, f)
    }
}

impl std::str::FromStr for LabelExpr {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_label_expr(s)
    }
}

/// Parses a label expression. Precedence, tightest first: `-`, `/\`, `\/`.
pub fn parse_label_expr(text: &str) -> Result<LabelExpr, ParseError> {
    let mut cur = Cursor::new(text)?;
    let e = parse_or(&mut cur)?;
    cur.finish()?;
    Ok(e)
}

pub(crate) fn parse_or(cur: &mut Cursor) -> Result<LabelExpr, ParseError> {
    let mut e = parse_and(cur)?;
    while cur.eat(&Tok::Or) {
        e = LabelExpr::or(e, parse_and(cur)?);
    }
    Ok(e)
}

fn parse_and(cur: &mut Cursor) -> Result<LabelExpr, ParseError> {
    let mut e = parse_primary(cur)?;
    while cur.eat(&Tok::And) {
        e = LabelExpr::and(e, parse_primary(cur)?);
    }
    Ok(e)
}

/// `-` primary | `T` | identifier | `(` expr `)`.
pub(crate) fn parse_primary(cur: &mut Cursor) -> Result<LabelExpr, ParseError> {
    match cur.peek().clone() {
        Tok::Minus => {
            cur.bump();
            Ok(LabelExpr::not(parse_primary(cur)?))
        }
        Tok::LParen => {
            cur.bump();
            let e = parse_or(cur)?;
            cur.expect(&Tok::RParen)?;
            Ok(e)
        }
        Tok::Ident(name) => {
            cur.bump();
            if name == "T" {
                Ok(LabelExpr::Top)
            } else {
                Ok(LabelExpr::Atom(name))
            }
        }
        _ => Err(cur.unexpected("expected a label expression")),
    }
}
