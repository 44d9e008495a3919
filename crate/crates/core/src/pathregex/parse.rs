use crate::lts::{parse_label_or, parse_label_primary, LabelExpr};
use crate::syntax::{Cursor, ParseError, Tok};

use super::{PathRegex, Step};

/// Parses a path expression.
///
/// ```text
/// regex  ::= branch ( "\/" branch )*
/// branch ::= item ( "." item )*
/// item   ::= "eps" | "Tick" | label ["*"] | "(" regex ")"
/// label  ::= "-" label | "T" | ident | "(" label-expr ")"
/// ```
///
/// A parenthesized sub-expression that is not a label expression may only
/// open a branch and may not be starred.
pub fn parse_regex(text: &str) -> Result<PathRegex, ParseError> {
    let mut cur = Cursor::new(text)?;
    let r = regex(&mut cur)?;
    cur.finish()?;
    Ok(r)
}

fn regex(cur: &mut Cursor) -> Result<PathRegex, ParseError> {
    let mut r = branch(cur)?;
    while cur.eat(&Tok::Or) {
        r = PathRegex::union(r, branch(cur)?);
    }
    Ok(r)
}

fn branch(cur: &mut Cursor) -> Result<PathRegex, ParseError> {
    let mut r = PathRegex::Eps;
    let mut first = true;
    loop {
        r = item(cur, r, first)?;
        first = false;
        if !cur.eat(&Tok::Dot) {
            return Ok(r);
        }
    }
}

fn is_reserved(e: &LabelExpr) -> bool {
    e.atoms().iter().any(|a| *a == "eps" || *a == "Tick")
}

/// Tries `( label-expr )`; restores the cursor on failure.
fn paren_label(cur: &mut Cursor) -> Option<LabelExpr> {
    let start = cur.position();
    cur.bump();
    match parse_label_or(cur) {
        Ok(e) if cur.eat(&Tok::RParen) && !is_reserved(&e) => Some(e),
        _ => {
            cur.reset(start);
            None
        }
    }
}

fn item(cur: &mut Cursor, prefix: PathRegex, first: bool) -> Result<PathRegex, ParseError> {
    let offset = cur.offset();
    if cur.is_keyword("eps") {
        cur.bump();
        return Ok(prefix);
    }
    if cur.is_keyword("Tick") {
        cur.bump();
        return Ok(prefix.tick());
    }
    let label = if *cur.peek() == Tok::LParen {
        match paren_label(cur) {
            Some(e) => e,
            None => {
                cur.bump();
                let group = regex(cur)?;
                cur.expect(&Tok::RParen)?;
                if *cur.peek() == Tok::Star {
                    return Err(ParseError::new(
                        cur.offset(),
                        "`*` applies only to a label expression, not to a sequence or union",
                    ));
                }
                if !first {
                    return Err(ParseError::new(
                        offset,
                        "a parenthesized sub-expression may only start a sequence",
                    ));
                }
                return Ok(group);
            }
        }
    } else {
        parse_label_primary_in_regex(cur)?
    };
    if cur.eat(&Tok::Star) {
        Ok(prefix.then(Step::Star(label)))
    } else {
        Ok(prefix.then(Step::One(label)))
    }
}

fn parse_label_primary_in_regex(cur: &mut Cursor) -> Result<LabelExpr, ParseError> {
    match cur.peek() {
        Tok::Minus => {
            cur.bump();
            let inner = if *cur.peek() == Tok::LParen {
                let offset = cur.offset();
                paren_label(cur)
                    .ok_or_else(|| ParseError::new(offset, "expected a label expression"))?
            } else {
                parse_label_primary_in_regex(cur)?
            };
            Ok(LabelExpr::not(inner))
        }
        Tok::Ident(name) if name == "eps" || name == "Tick" => {
            Err(cur.unexpected("expected a label expression"))
        }
        _ => parse_label_primary(cur),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lts::parse_label_expr;

    fn le(s: &str) -> LabelExpr {
        parse_label_expr(s).unwrap()
    }

    #[test]
    fn star_of_negation() {
        assert_eq!(parse_regex("(-b)*").unwrap(), PathRegex::Eps.star(le("-b")));
        assert_eq!(parse_regex("-b*").unwrap(), PathRegex::Eps.star(le("-b")));
    }

    #[test]
    fn r2_structure() {
        let r = parse_regex("(-b)* . b . (-t)* . Tick . Tick . Tick . Tick . a . T*").unwrap();
        let expected = PathRegex::Eps
            .star(le("-b"))
            .one(le("b"))
            .star(le("-t"))
            .tick()
            .tick()
            .tick()
            .tick()
            .one(le("a"))
            .star(LabelExpr::Top);
        assert_eq!(r, expected);
    }

    #[test]
    fn star_over_sequence_is_rejected() {
        let err = parse_regex("(a . b)*").unwrap_err();
        assert!(err.message.contains("only to a label expression"));
        assert!(parse_regex("(a \\/ b . c)*").is_err());
    }

    #[test]
    fn parenthesized_label_union_is_a_single_step() {
        assert_eq!(
            parse_regex("(a \\/ b)*").unwrap(),
            PathRegex::Eps.star(le("a \\/ b"))
        );
    }

    #[test]
    fn union_is_binarized_left_to_right() {
        let r = parse_regex("a \\/ b \\/ c").unwrap();
        let one = |s: &str| PathRegex::Eps.one(le(s));
        assert_eq!(
            r,
            PathRegex::union(PathRegex::union(one("a"), one("b")), one("c"))
        );
    }

    #[test]
    fn groups_and_eps() {
        assert_eq!(parse_regex("eps").unwrap(), PathRegex::Eps);
        assert_eq!(parse_regex("eps . a").unwrap(), PathRegex::Eps.one(le("a")));
        let g = parse_regex("(a . b \\/ c) . d").unwrap();
        assert!(matches!(g, PathRegex::Seq(ref r, _) if matches!(**r, PathRegex::Union(..))));
        assert!(parse_regex("a . (b . c)").is_err());
        assert!(parse_regex("").is_err());
        assert!(parse_regex("a .").is_err());
    }
}
