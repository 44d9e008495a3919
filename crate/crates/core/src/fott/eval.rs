use std::collections::{BTreeMap, HashMap, HashSet};

use crate::lts::TICK;
use crate::pathregex::Word;

use super::{Fott, FottError, FottFormula, Interval};

/// Values of the free variables.
pub type Assignment = BTreeMap<String, Word>;

/// Truth of `f` under `asg`. Existential variables range over the
/// contiguous subwords of the words bound so far; concatenation constraints
/// in the quantified body narrow the candidates, which never changes the
/// result.
pub fn eval_fott(f: &Fott, asg: &Assignment) -> Result<bool, FottError> {
    let root = asg
        .get(f.free_var())
        .ok_or_else(|| FottError::Unassigned(f.free_var().to_string()))?;
    let mut table = Interner::default();
    let mut slots = vec![f.free_var().to_string()];
    let mut scope = vec![(f.free_var().to_string(), 0usize)];
    let compiled = lower(f.formula(), &mut table, &mut slots, &mut scope);
    let tick = table.intern(TICK);
    let mut ev = Evaluator {
        env: vec![None; slots.len()],
        tick,
    };
    ev.env[0] = Some(root.symbols().iter().map(|s| table.intern(s)).collect());
    Ok(ev.eval(&compiled))
}

#[derive(Default)]
struct Interner(HashMap<String, u32>);

impl Interner {
    fn intern(&mut self, s: &str) -> u32 {
        let next = self.0.len() as u32;
        *self.0.entry(s.to_string()).or_insert(next)
    }
}

type Sym = Vec<u32>;

#[derive(Debug, Clone)]
enum Atom {
    Lit(usize, Sym),
    Cat(usize, usize, usize),
}

#[derive(Debug)]
enum Node {
    And(Box<Node>, Box<Node>),
    Not(Box<Node>),
    /// Slot, body, and the equations of the body that constrain the slot
    /// positively (reached through conjunctions and quantifiers only).
    Exists(usize, Box<Node>, Vec<Atom>),
    Atom(Atom),
    Dur(usize, Interval),
}

fn lower(
    f: &FottFormula,
    table: &mut Interner,
    slots: &mut Vec<String>,
    scope: &mut Vec<(String, usize)>,
) -> Node {
    let slot = |x: &str, scope: &[(String, usize)]| {
        scope
            .iter()
            .rev()
            .find(|(n, _)| n == x)
            .map(|(_, s)| *s)
            .expect("checked at construction")
    };
    match f {
        FottFormula::And(l, r) => Node::And(
            Box::new(lower(l, table, slots, scope)),
            Box::new(lower(r, table, slots, scope)),
        ),
        FottFormula::Not(g) => Node::Not(Box::new(lower(g, table, slots, scope))),
        FottFormula::Exists(x, g) => {
            let s = slots.len();
            slots.push(x.clone());
            scope.push((x.clone(), s));
            let body = lower(g, table, slots, scope);
            scope.pop();
            let mut atoms = Vec::new();
            positive_atoms(&body, &mut atoms);
            atoms.retain(|a| match a {
                Atom::Lit(v, _) => *v == s,
                Atom::Cat(x, y, z) => [x, y, z].contains(&&s),
            });
            Node::Exists(s, Box::new(body), atoms)
        }
        FottFormula::EqLit(x, w) => Node::Atom(Atom::Lit(
            slot(x, scope),
            w.symbols().iter().map(|s| table.intern(s)).collect(),
        )),
        FottFormula::EqCat(x, y, z) => {
            Node::Atom(Atom::Cat(slot(x, scope), slot(y, scope), slot(z, scope)))
        }
        FottFormula::DurIn(x, i) => Node::Dur(slot(x, scope), *i),
    }
}

fn positive_atoms(n: &Node, out: &mut Vec<Atom>) {
    match n {
        Node::And(l, r) => {
            positive_atoms(l, out);
            positive_atoms(r, out);
        }
        Node::Exists(_, b, _) => positive_atoms(b, out),
        Node::Atom(a) => out.push(a.clone()),
        Node::Not(_) | Node::Dur(..) => {}
    }
}

struct Evaluator {
    env: Vec<Option<Sym>>,
    tick: u32,
}

fn is_subword(needle: &[u32], hay: &[u32]) -> bool {
    needle.is_empty() || hay.windows(needle.len()).any(|w| w == needle)
}

impl Evaluator {
    fn val(&self, slot: usize) -> &Sym {
        self.env[slot].as_ref().expect("slot bound before use")
    }

    fn in_domain(&self, w: &[u32]) -> bool {
        self.env.iter().flatten().any(|v| is_subword(w, v))
    }

    fn eval(&mut self, n: &Node) -> bool {
        match n {
            Node::And(l, r) => self.eval(l) && self.eval(r),
            Node::Not(g) => !self.eval(g),
            Node::Atom(Atom::Lit(x, w)) => self.val(*x) == w,
            Node::Atom(Atom::Cat(x, y, z)) => {
                let (x, y, z) = (self.val(*x), self.val(*y), self.val(*z));
                x.len() == y.len() + z.len() && x.starts_with(y) && x.ends_with(z)
            }
            Node::Dur(x, i) => {
                let d = self.val(*x).iter().filter(|s| **s == self.tick).count();
                i.contains(d as u64)
            }
            Node::Exists(s, body, atoms) => {
                let candidates = self.candidates(*s, atoms);
                let saved = self.env[*s].take();
                let mut found = false;
                for c in candidates {
                    self.env[*s] = Some(c);
                    if self.eval(body) {
                        found = true;
                        break;
                    }
                }
                self.env[*s] = saved;
                found
            }
        }
    }

    /// Values worth trying for slot `s`: the smallest candidate list offered
    /// by any positive equation, else every subword of a bound word.
    fn candidates(&self, s: usize, atoms: &[Atom]) -> Vec<Sym> {
        let bound = |v: usize| v != s && self.env[v].is_some();
        let mut best: Option<Vec<Sym>> = None;
        let mut offer = |c: Vec<Sym>| {
            if best.as_ref().is_none_or(|b| c.len() < b.len()) {
                best = Some(c);
            }
        };
        for a in atoms {
            match a {
                Atom::Lit(_, w) => offer(if self.in_domain(w) {
                    vec![w.clone()]
                } else {
                    Vec::new()
                }),
                Atom::Cat(x, y, z) => {
                    if *x == s && bound(*y) && bound(*z) {
                        let mut w = self.val(*y).clone();
                        w.extend_from_slice(self.val(*z));
                        offer(if self.in_domain(&w) {
                            vec![w]
                        } else {
                            Vec::new()
                        });
                    } else if *y == s && bound(*x) {
                        let xv = self.val(*x);
                        if bound(*z) {
                            let zv = self.val(*z);
                            offer(match xv.strip_suffix(zv.as_slice()) {
                                Some(p) => vec![p.to_vec()],
                                None => Vec::new(),
                            });
                        } else {
                            offer((0..=xv.len()).map(|k| xv[..k].to_vec()).collect());
                        }
                    } else if *z == s && bound(*x) {
                        let xv = self.val(*x);
                        if bound(*y) {
                            let yv = self.val(*y);
                            offer(match xv.strip_prefix(yv.as_slice()) {
                                Some(p) => vec![p.to_vec()],
                                None => Vec::new(),
                            });
                        } else {
                            offer((0..=xv.len()).map(|k| xv[k..].to_vec()).collect());
                        }
                    }
                }
            }
        }
        best.unwrap_or_else(|| self.all_subwords())
    }

    fn all_subwords(&self) -> Vec<Sym> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for v in self.env.iter().flatten() {
            for i in 0..=v.len() {
                for j in i..=v.len() {
                    if seen.insert(&v[i..j]) {
                        out.push(v[i..j].to_vec());
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::super::{present_fott, Interval};
    use super::*;

    fn holds(f: &Fott, w: &str) -> bool {
        let asg = Assignment::from([(f.free_var().to_string(), w.parse().unwrap())]);
        eval_fott(f, &asg).unwrap()
    }

    #[test]
    fn present_examples() {
        let f = present_fott("a", "b", &Interval::closed_open(4, 5)).unwrap();
        assert!(holds(&f, "a"));
        assert!(holds(&f, "b t t t t a"));
        assert!(!holds(&f, "b t t t t t a"));
        assert!(!holds(&f, "b t t t"));
        assert!(holds(&f, "z z z"));
    }

    #[test]
    fn not_in_matches_scan() {
        let f = Fott::new("x", FottFormula::not_in("b", "x")).unwrap();
        for w in ["", "a", "b", "a t b", "t t", "a a z"] {
            assert_eq!(holds(&f, w), !w.split_whitespace().any(|s| s == "b"), "{w}");
        }
    }

    #[test]
    fn fallback_domain_is_subwords() {
        // exists y . D(y) in [2,2] /\ x = y y  ... via an unconstrained
        // quantifier: exists y . -(-(x = y y)) forces the subword fallback
        let f = Fott::new(
            "x",
            FottFormula::exists(
                "y",
                FottFormula::and(
                    FottFormula::not(FottFormula::not(FottFormula::eq_cat("x", "y", "y"))),
                    FottFormula::dur_in("y", Interval::closed(1, 1)),
                ),
            ),
        )
        .unwrap();
        assert!(holds(&f, "a t a t"));
        assert!(!holds(&f, "a t t"));
    }

    #[test]
    fn unassigned_free_variable() {
        let f = Fott::new("x", FottFormula::not_in("b", "x")).unwrap();
        assert_eq!(
            eval_fott(&f, &Assignment::new()).unwrap_err(),
            FottError::Unassigned("x".into())
        );
    }
}
