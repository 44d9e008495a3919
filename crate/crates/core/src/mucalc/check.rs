use thiserror::Error;

use super::MuFormula;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("free variable `{0}`")]
    Unbound(String),
    /// `path` lists the constructors from the root down to the offending
    /// occurrence.
    #[error("`{var}` occurs under an odd number of negations at {}", .path.join(" / "))]
    NonMonotone { var: String, path: Vec<String> },
}

/// Rejects formulas with free variables.
pub fn check_closed(f: &MuFormula) -> Result<(), FormulaError> {
    fn go(f: &MuFormula, bound: &mut Vec<String>) -> Result<(), FormulaError> {
        match f {
            MuFormula::Var(x) => {
                if bound.contains(x) {
                    Ok(())
                } else {
                    Err(FormulaError::Unbound(x.clone()))
                }
            }
            MuFormula::True | MuFormula::InitConst => Ok(()),
            MuFormula::Min(x, b) | MuFormula::Max(x, b) => {
                bound.push(x.clone());
                let r = go(b, bound);
                bound.pop();
                r
            }
            MuFormula::Not(g)
            | MuFormula::FwdDiamond(_, g)
            | MuFormula::BwdDiamond(g, _)
            | MuFormula::SuffixO(g, _)
            | MuFormula::SuffixStar(g, _) => go(g, bound),
            MuFormula::And(l, r)
            | MuFormula::Or(l, r)
            | MuFormula::Implies(l, r)
            | MuFormula::Iff(l, r) => {
                go(l, bound)?;
                go(r, bound)
            }
        }
    }
    go(f, &mut Vec::new())
}

struct Binding {
    name: String,
    negated: bool,
    // number of enclosing `<=>` operands at the binder; an occurrence below
    // a deeper one has both polarities
    iff_depth: usize,
}

/// Checks that every fixpoint variable occurs under an even number of
/// negations relative to its binder. `=>` counts as a negation of its left
/// operand; an `<=>` operand occurs with both polarities.
pub fn check_monotone(f: &MuFormula) -> Result<(), FormulaError> {
    check_closed(f)?;
    let mut path = Vec::new();
    walk(f, false, 0, &mut Vec::new(), &mut path)
}

fn walk(
    f: &MuFormula,
    negated: bool,
    iff_depth: usize,
    env: &mut Vec<Binding>,
    path: &mut Vec<String>,
) -> Result<(), FormulaError> {
    let sub = |step: &str,
               g: &MuFormula,
               neg: bool,
               iff: usize,
               env: &mut Vec<Binding>,
               path: &mut Vec<String>| {
        path.push(step.to_string());
        let r = walk(g, neg, iff, env, path);
        path.pop();
        r
    };
    match f {
        MuFormula::True | MuFormula::InitConst => Ok(()),
        MuFormula::Var(x) => {
            let b = env
                .iter()
                .rev()
                .find(|b| &b.name == x)
                .expect("closedness checked first");
            let mixed = iff_depth > b.iff_depth;
            if b.negated != negated || mixed {
                let mut p = path.clone();
                p.push(x.clone());
                Err(FormulaError::NonMonotone {
                    var: x.clone(),
                    path: p,
                })
            } else {
                Ok(())
            }
        }
        MuFormula::Not(g) => sub("not", g, !negated, iff_depth, env, path),
        MuFormula::And(l, r) => {
            sub("and.left", l, negated, iff_depth, env, path)?;
            sub("and.right", r, negated, iff_depth, env, path)
        }
        MuFormula::Or(l, r) => {
            sub("or.left", l, negated, iff_depth, env, path)?;
            sub("or.right", r, negated, iff_depth, env, path)
        }
        MuFormula::Implies(l, r) => {
            sub("implies.left", l, !negated, iff_depth, env, path)?;
            sub("implies.right", r, negated, iff_depth, env, path)
        }
        MuFormula::Iff(l, r) => {
            sub("iff.left", l, negated, iff_depth + 1, env, path)?;
            sub("iff.right", r, negated, iff_depth + 1, env, path)
        }
        MuFormula::FwdDiamond(a, g) => sub(&format!("<{a}>_"), g, negated, iff_depth, env, path),
        MuFormula::BwdDiamond(g, a) => sub(&format!("_<{a}>"), g, negated, iff_depth, env, path),
        MuFormula::SuffixO(g, a) => sub(&format!("_ o {a}"), g, negated, iff_depth, env, path),
        MuFormula::SuffixStar(g, a) => sub(&format!("_ * {a}"), g, negated, iff_depth, env, path),
        MuFormula::Min(x, b) | MuFormula::Max(x, b) => {
            let kw = if matches!(f, MuFormula::Min(..)) {
                "min"
            } else {
                "max"
            };
            env.push(Binding {
                name: x.clone(),
                negated,
                iff_depth,
            });
            let r = sub(&format!("{kw} {x}"), b, negated, iff_depth, env, path);
            env.pop();
            r
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse_mu;
    use super::*;

    fn check(s: &str) -> Result<(), FormulaError> {
        check_monotone(&parse_mu(s).unwrap())
    }

    #[test]
    fn positive_occurrence() {
        assert!(check("min X | <a>X").is_ok());
    }

    #[test]
    fn odd_negation_is_rejected_with_path() {
        let err = check("min X | -X").unwrap_err();
        assert_eq!(
            err,
            FormulaError::NonMonotone {
                var: "X".into(),
                path: vec!["min X".into(), "not".into(), "X".into()]
            }
        );
    }

    #[test]
    fn even_negation_is_accepted() {
        assert!(check("min X | -(-X /\\ T)").is_ok());
    }

    #[test]
    fn sugar_counts_polarity() {
        assert!(check("min X | X => T").is_err());
        assert!(check("min X | T => X").is_ok());
        assert!(check("min X | X <=> T").is_err());
        // binder entirely inside an iff operand is fine
        assert!(check("T <=> min X | <a>X").is_ok());
        // negated binder with negated occurrence: polarity is relative
        assert!(check("-(min X | <a>X)").is_ok());
        assert!(check("min X | -(max Y | -X \\/ Y)").is_ok());
        assert!(check("min X | -(max Y | X \\/ Y)").is_err());
    }

    #[test]
    fn free_variable_detected() {
        assert_eq!(
            check_monotone(&MuFormula::var("Z")),
            Err(FormulaError::Unbound("Z".into()))
        );
    }
}
