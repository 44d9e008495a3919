use std::fmt;

use crate::lts::{LabelExpr, TICK};

use super::MuFormula;

const BINDER: u8 = 0;
const IMPLY: u8 = 1;
const OR: u8 = 2;
const AND: u8 = 3;
const PREFIX: u8 = 4;
const POSTFIX: u8 = 5;
const ATOM: u8 = 6;

impl MuFormula {
    fn level(&self) -> u8 {
        match self {
            MuFormula::Min(..) | MuFormula::Max(..) => BINDER,
            MuFormula::Implies(..) | MuFormula::Iff(..) => IMPLY,
            MuFormula::Or(..) => OR,
            MuFormula::And(..) => AND,
            MuFormula::Not(_) | MuFormula::FwdDiamond(..) => PREFIX,
            MuFormula::BwdDiamond(..) | MuFormula::SuffixO(..) | MuFormula::SuffixStar(..) => {
                POSTFIX
            }
            MuFormula::True | MuFormula::InitConst | MuFormula::Var(_) => ATOM,
        }
    }

    /// Matches `(f o t) * (-t)`, printed as `f o Tick`.
    fn as_tick(&self) -> Option<&MuFormula> {
        let tick = LabelExpr::atom(TICK);
        match self {
            MuFormula::SuffixStar(inner, LabelExpr::Not(neg)) if **neg == tick => match &**inner {
                MuFormula::SuffixO(f, a) if *a == tick => Some(f),
                _ => None,
            },
            _ => None,
        }
    }

    fn fmt_at(&self, min_level: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.level() < min_level {
            f.write_str("(")?;
            self.fmt_at(BINDER, f)?;
            return f.write_str(")");
        }
        if let Some(g) = self.as_tick() {
            g.fmt_at(POSTFIX, f)?;
            return f.write_str(" o Tick");
        }
        match self {
            MuFormula::True => f.write_str("T"),
            MuFormula::InitConst => f.write_str("`0"),
            MuFormula::Var(x) => f.write_str(x),
            MuFormula::Not(g) => {
                f.write_str("-")?;
                // `-(f o a)` reads better than `-f o a`
                g.fmt_at(if g.level() == POSTFIX { ATOM } else { PREFIX }, f)
            }
            MuFormula::And(l, r) => {
                l.fmt_at(AND, f)?;
                f.write_str(" /\\ ")?;
                r.fmt_at(PREFIX, f)
            }
            MuFormula::Or(l, r) => {
                l.fmt_at(OR, f)?;
                f.write_str(" \\/ ")?;
                r.fmt_at(AND, f)
            }
            MuFormula::Implies(l, r) => {
                l.fmt_at(OR, f)?;
                f.write_str(" => ")?;
                r.fmt_at(IMPLY, f)
            }
            MuFormula::Iff(l, r) => {
                l.fmt_at(OR, f)?;
                f.write_str(" <=> ")?;
                r.fmt_at(IMPLY, f)
            }
            MuFormula::FwdDiamond(a, g) => {
                write!(f, "<{a}>")?;
                g.fmt_at(PREFIX, f)
            }
            MuFormula::BwdDiamond(g, a) => {
                g.fmt_at(POSTFIX, f)?;
                write!(f, "<{a}>")
            }
            MuFormula::SuffixO(g, a) => {
                g.fmt_at(POSTFIX, f)?;
                write!(f, " o {}", a.primary_string())
            }
            MuFormula::SuffixStar(g, a) => {
                g.fmt_at(POSTFIX, f)?;
                write!(f, " * {}", a.primary_string())
            }
            MuFormula::Min(x, body) | MuFormula::Max(x, body) => {
                let kw = if matches!(self, MuFormula::Min(..)) {
                    "min"
                } else {
                    "max"
                };
                write!(f, "{kw} {x} | ")?;
                if (IMPLY..PREFIX).contains(&body.level()) {
                    f.write_str("(")?;
                    body.fmt_at(BINDER, f)?;
                    f.write_str(")")
                } else {
                    body.fmt_at(BINDER, f)
                }
            }
        }
    }
}

/// Concrete syntax accepted by [`parse_mu`](super::parse_mu); derived forms
/// are printed as written, never expanded.
impl fmt::Display for MuFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(BINDER, f)
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse_mu;
    use super::*;

    fn roundtrip(s: &str) -> String {
        let f = parse_mu(s).unwrap();
        let printed = f.to_string();
        assert_eq!(parse_mu(&printed).unwrap(), f, "reparse of {printed}");
        printed
    }

    #[test]
    fn true_prints_as_t() {
        assert_eq!(MuFormula::True.to_string(), "T");
    }

    #[test]
    fn reach_prints_in_conventional_layout() {
        assert_eq!(
            roundtrip("min X|(<a>T \\/ <-(a\\/b\\/t)>X)"),
            "min X | (<a>T \\/ <-(a \\/ b \\/ t)>X)"
        );
    }

    #[test]
    fn tick_blocks_are_abbreviated() {
        assert_eq!(
            roundtrip("((`0 * (-b) o b * (-t) o t) * (-t)) o a * T"),
            "`0 * (-b) o b * (-t) o Tick o a * T"
        );
    }

    #[test]
    fn parenthesizes_where_needed() {
        assert_eq!(roundtrip("(T \\/ `0) /\\ T"), "(T \\/ `0) /\\ T");
        assert_eq!(roundtrip("T \\/ (`0 \\/ T)"), "T \\/ (`0 \\/ T)");
        assert_eq!(roundtrip("(-T)<a>"), "(-T)<a>");
        assert_eq!(roundtrip("(<a>T) o b"), "(<a>T) o b");
        assert_eq!(roundtrip("(T => T) => T"), "(T => T) => T");
        assert_eq!(roundtrip("T => T => T"), "T => T => T");
        assert_eq!(roundtrip("(min X | X) \\/ T"), "(min X | X) \\/ T");
        assert_eq!(roundtrip("-(min X | X)"), "-(min X | X)");
        assert_eq!(
            roundtrip("T<a \\/ b> * (a /\\ -b)"),
            "T<a \\/ b> * (a /\\ -b)"
        );
    }

    #[test]
    fn error_condition_layout() {
        assert_eq!(
            roundtrip("<error>T \\/ ((T<error> * T) /\\ -(`0 * (-error)))"),
            "<error>T \\/ T<error> * T /\\ -(`0 * (-error))"
        );
    }
}
