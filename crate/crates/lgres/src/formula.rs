//! First-order formula syntax tree used by the parser and the clausifier.

use std::collections::BTreeSet;
use std::fmt;

use crate::term::{Atom, Subst, Symbol, Term};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Formula {
    True,
    False,
    Atom(Atom),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Forall(Vec<Symbol>, Box<Formula>),
    Exists(Vec<Symbol>, Box<Formula>),
}

impl Formula {
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(fs: Vec<Formula>) -> Formula {
        match fs.len() {
            0 => Formula::True,
            1 => fs.into_iter().next().unwrap(),
            _ => Formula::And(fs),
        }
    }

    pub fn or(fs: Vec<Formula>) -> Formula {
        match fs.len() {
            0 => Formula::False,
            1 => fs.into_iter().next().unwrap(),
            _ => Formula::Or(fs),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Symbol> {
        fn go(f: &Formula, bound: &mut Vec<Symbol>, out: &mut BTreeSet<Symbol>) {
            match f {
                Formula::True | Formula::False => {}
                Formula::Atom(a) => {
                    for x in a.vars() {
                        if !bound.contains(&x) {
                            out.insert(x);
                        }
                    }
                }
                Formula::Not(g) => go(g, bound, out),
                Formula::And(gs) | Formula::Or(gs) => {
                    for g in gs {
                        go(g, bound, out);
                    }
                }
                Formula::Implies(a, b) | Formula::Iff(a, b) => {
                    go(a, bound, out);
                    go(b, bound, out);
                }
                Formula::Forall(xs, g) | Formula::Exists(xs, g) => {
                    let n = bound.len();
                    bound.extend(xs.iter().cloned());
                    go(g, bound, out);
                    bound.truncate(n);
                }
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    /// Apply a substitution to all free variable occurrences. Quantified
    /// variables shadow bindings; callers rename apart before substituting
    /// under binders that could capture.
    pub fn substitute(&self, sub: &Subst) -> Formula {
        match self {
            Formula::True | Formula::False => self.clone(),
            Formula::Atom(a) => Formula::Atom(sub.apply_atom(a)),
            Formula::Not(g) => Formula::not(g.substitute(sub)),
            Formula::And(gs) => Formula::And(gs.iter().map(|g| g.substitute(sub)).collect()),
            Formula::Or(gs) => Formula::Or(gs.iter().map(|g| g.substitute(sub)).collect()),
            Formula::Implies(a, b) => {
                Formula::Implies(Box::new(a.substitute(sub)), Box::new(b.substitute(sub)))
            }
            Formula::Iff(a, b) => {
                Formula::Iff(Box::new(a.substitute(sub)), Box::new(b.substitute(sub)))
            }
            Formula::Forall(xs, g) => {
                let inner = shadow(sub, xs);
                Formula::Forall(xs.clone(), Box::new(g.substitute(&inner)))
            }
            Formula::Exists(xs, g) => {
                let inner = shadow(sub, xs);
                Formula::Exists(xs.clone(), Box::new(g.substitute(&inner)))
            }
        }
    }

    pub fn contains_function_symbols(&self) -> bool {
        fn term_has(t: &Term) -> bool {
            matches!(t, Term::Compound(..))
        }
        match self {
            Formula::True | Formula::False => false,
            Formula::Atom(a) => a.args.iter().any(term_has),
            Formula::Not(g) => g.contains_function_symbols(),
            Formula::And(gs) | Formula::Or(gs) => {
                gs.iter().any(Formula::contains_function_symbols)
            }
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.contains_function_symbols() || b.contains_function_symbols()
            }
            Formula::Forall(_, g) | Formula::Exists(_, g) => g.contains_function_symbols(),
        }
    }
}

fn shadow(sub: &Subst, bound: &[Symbol]) -> Subst {
    Subst::from_pairs(
        sub.iter()
            .filter(|(x, _)| !bound.contains(x))
            .map(|(x, t)| (x.clone(), t.clone())),
    )
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => write!(f, "$true"),
            Formula::False => write!(f, "$false"),
            Formula::Atom(a) => write!(f, "{a}"),
            Formula::Not(g) => write!(f, "~{g}"),
            Formula::And(gs) => join(f, gs, " & "),
            Formula::Or(gs) => join(f, gs, " | "),
            Formula::Implies(a, b) => write!(f, "({a} -> {b})"),
            Formula::Iff(a, b) => write!(f, "({a} <-> {b})"),
            Formula::Forall(xs, g) => quant(f, "forall", xs, g),
            Formula::Exists(xs, g) => quant(f, "exists", xs, g),
        }
    }
}

fn join(f: &mut fmt::Formatter<'_>, gs: &[Formula], sep: &str) -> fmt::Result {
    write!(f, "(")?;
    for (i, g) in gs.iter().enumerate() {
        if i > 0 {
            write!(f, "{sep}")?;
        }
        write!(f, "{g}")?;
    }
    write!(f, ")")
}

fn quant(f: &mut fmt::Formatter<'_>, kw: &str, xs: &[Symbol], g: &Formula) -> fmt::Result {
    write!(f, "{kw} [")?;
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{}", x.name)?;
    }
    write!(f, "] {g}")
}
