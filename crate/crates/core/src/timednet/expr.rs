use std::collections::BTreeSet;

/// Integer expression over net variables; booleans are 0 and 1, any nonzero
/// value is true in a guard.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Int(i64),
    Var(String),
    Neg(Box<Expr>),
    Not(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    And,
    Or,
}

impl Expr {
    pub fn int(v: i64) -> Self {
        Expr::Int(v)
    }

    pub fn var(name: impl Into<String>) -> Self {
        Expr::Var(name.into())
    }

    pub fn bin(op: BinOp, l: Expr, r: Expr) -> Self {
        Expr::Bin(op, Box::new(l), Box::new(r))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(e: Expr) -> Self {
        Expr::Not(Box::new(e))
    }

    pub fn vars(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            Expr::Int(_) => {}
            Expr::Var(x) => {
                out.insert(x);
            }
            Expr::Neg(e) | Expr::Not(e) => e.collect_vars(out),
            Expr::Bin(_, l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
        }
    }

    /// Evaluates with `lookup` resolving variables.
    pub fn eval(&self, lookup: &impl Fn(&str) -> i64) -> i64 {
        match self {
            Expr::Int(v) => *v,
            Expr::Var(x) => lookup(x),
            Expr::Neg(e) => -e.eval(lookup),
            Expr::Not(e) => i64::from(e.eval(lookup) == 0),
            Expr::Bin(op, l, r) => {
                let a = l.eval(lookup);
                match op {
                    BinOp::And => return i64::from(a != 0 && r.eval(lookup) != 0),
                    BinOp::Or => return i64::from(a != 0 || r.eval(lookup) != 0),
                    _ => {}
                }
                let b = r.eval(lookup);
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Eq => i64::from(a == b),
                    BinOp::Ne => i64::from(a != b),
                    BinOp::Lt => i64::from(a < b),
                    BinOp::Le => i64::from(a <= b),
                    BinOp::Gt => i64::from(a > b),
                    BinOp::Ge => i64::from(a >= b),
                    BinOp::And | BinOp::Or => unreachable!(),
                }
            }
        }
    }
}
