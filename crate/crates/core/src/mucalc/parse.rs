use crate::lts::{parse_label_or, parse_label_primary, LabelExpr};
use crate::syntax::{Cursor, ParseError, Tok};

use super::MuFormula;

const KEYWORDS: [&str; 5] = ["T", "min", "max", "o", "Tick"];

/// Parses a closed formula. Variables must be bound by an enclosing `min`
/// or `max`; monotonicity is checked separately by
/// [`check_monotone`](super::check_monotone).
pub fn parse_mu(text: &str) -> Result<MuFormula, ParseError> {
    let mut p = Parser {
        cur: Cursor::new(text)?,
        bound: Vec::new(),
    };
    let f = p.formula()?;
    p.cur.finish()?;
    Ok(f)
}

struct Parser {
    cur: Cursor,
    bound: Vec<String>,
}

impl Parser {
    fn formula(&mut self) -> Result<MuFormula, ParseError> {
        if self.at_binder() {
            return self.binder();
        }
        let lhs = self.disjunction()?;
        if self.cur.eat(&Tok::Implies) {
            Ok(MuFormula::implies(lhs, self.formula()?))
        } else if self.cur.eat(&Tok::Iff) {
            Ok(MuFormula::iff(lhs, self.formula()?))
        } else {
            Ok(lhs)
        }
    }

    fn at_binder(&self) -> bool {
        self.cur.is_keyword("min") || self.cur.is_keyword("max")
    }

    fn binder(&mut self) -> Result<MuFormula, ParseError> {
        let is_min = self.cur.is_keyword("min");
        self.cur.bump();
        let offset = self.cur.offset();
        let name = match self.cur.bump() {
            Tok::Ident(x) if !KEYWORDS.contains(&x.as_str()) => x,
            _ => return Err(ParseError::new(offset, "expected a fixpoint variable")),
        };
        self.cur.expect(&Tok::Bar)?;
        self.bound.push(name.clone());
        let body = self.formula();
        self.bound.pop();
        let body = body?;
        Ok(if is_min {
            MuFormula::min(name, body)
        } else {
            MuFormula::max(name, body)
        })
    }

    fn disjunction(&mut self) -> Result<MuFormula, ParseError> {
        let mut f = self.conjunction()?;
        while self.cur.eat(&Tok::Or) {
            f = MuFormula::or(f, self.conjunction()?);
        }
        Ok(f)
    }

    fn conjunction(&mut self) -> Result<MuFormula, ParseError> {
        let mut f = self.unary()?;
        while self.cur.eat(&Tok::And) {
            f = MuFormula::and(f, self.unary()?);
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<MuFormula, ParseError> {
        match self.cur.peek() {
            Tok::Minus => {
                self.cur.bump();
                Ok(MuFormula::not(self.unary()?))
            }
            Tok::LAngle => {
                self.cur.bump();
                let a = self.modality_label()?;
                Ok(MuFormula::fwd(a, self.unary()?))
            }
            _ if self.at_binder() => self.binder(),
            _ => self.postfix(),
        }
    }

    fn modality_label(&mut self) -> Result<LabelExpr, ParseError> {
        let a = parse_label_or(&mut self.cur)?;
        self.cur.expect(&Tok::RAngle)?;
        Ok(a)
    }

    fn postfix(&mut self) -> Result<MuFormula, ParseError> {
        let mut f = self.atom()?;
        loop {
            if self.cur.eat(&Tok::LAngle) {
                let a = self.modality_label()?;
                f = MuFormula::bwd(f, a);
            } else if self.cur.is_keyword("o") {
                self.cur.bump();
                if self.cur.is_keyword("Tick") {
                    self.cur.bump();
                    f = MuFormula::suffix_tick(f);
                } else {
                    f = MuFormula::suffix_o(f, parse_label_primary(&mut self.cur)?);
                }
            } else if self.cur.eat(&Tok::Star) {
                f = MuFormula::suffix_star(f, parse_label_primary(&mut self.cur)?);
            } else {
                return Ok(f);
            }
        }
    }

    fn atom(&mut self) -> Result<MuFormula, ParseError> {
        let offset = self.cur.offset();
        match self.cur.peek().clone() {
            Tok::Init => {
                self.cur.bump();
                Ok(MuFormula::InitConst)
            }
            Tok::LParen => {
                self.cur.bump();
                let f = self.formula()?;
                self.cur.expect(&Tok::RParen)?;
                Ok(f)
            }
            Tok::Ident(name) if name == "T" => {
                self.cur.bump();
                Ok(MuFormula::True)
            }
            Tok::Ident(name) if !KEYWORDS.contains(&name.as_str()) => {
                self.cur.bump();
                if self.bound.contains(&name) {
                    Ok(MuFormula::Var(name))
                } else {
                    Err(ParseError::new(
                        offset,
                        format!("unbound variable `{name}`"),
                    ))
                }
            }
            _ => Err(self.cur.unexpected("expected a formula")),
        }
    }
}
