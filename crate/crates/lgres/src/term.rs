//! Terms, atoms, literals and substitutions.
//!
//! Everything here is immutable after construction. The variable depth
//! measure `vdp` is the workhorse of the whole engine: flat means
//! `vdp <= 0`, simple means `vdp <= 1`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SymbolKind {
    Variable,
    Constant,
    Function,
    Predicate,
}

/// A named symbol. Two symbols are the same iff name, kind and arity agree;
/// the parser enforces that a (name, kind) pair always carries one arity.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol {
    pub name: String,
    pub kind: SymbolKind,
    pub arity: usize,
}

impl Symbol {
    pub fn var(name: impl Into<String>) -> Symbol {
        Symbol { name: name.into(), kind: SymbolKind::Variable, arity: 0 }
    }
    pub fn constant(name: impl Into<String>) -> Symbol {
        Symbol { name: name.into(), kind: SymbolKind::Constant, arity: 0 }
    }
    pub fn func(name: impl Into<String>, arity: usize) -> Symbol {
        assert!(arity >= 1, "function symbols have arity >= 1");
        Symbol { name: name.into(), kind: SymbolKind::Function, arity }
    }
    pub fn pred(name: impl Into<String>, arity: usize) -> Symbol {
        Symbol { name: name.into(), kind: SymbolKind::Predicate, arity }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(Symbol),
    Const(Symbol),
    Compound(Symbol, Vec<Term>),
}

impl Term {
    pub fn compound(f: Symbol, args: Vec<Term>) -> Term {
        assert_eq!(f.arity, args.len(), "compound arity mismatch");
        Term::Compound(f, args)
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Const(_) => true,
            Term::Compound(_, args) => args.iter().all(Term::is_ground),
        }
    }

    /// Variable depth: -1 for ground terms, 0 for variables,
    /// 1 + max argument depth for non-ground compound terms.
    pub fn vdp(&self) -> i32 {
        match self {
            Term::Var(_) => 0,
            Term::Const(_) => -1,
            Term::Compound(_, args) => {
                if self.is_ground() {
                    -1
                } else {
                    1 + args.iter().map(Term::vdp).max().unwrap()
                }
            }
        }
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<Symbol>) {
        match self {
            Term::Var(x) => {
                out.insert(x.clone());
            }
            Term::Const(_) => {}
            Term::Compound(_, args) => {
                for a in args {
                    a.collect_vars(out);
                }
            }
        }
    }

    pub fn vars(&self) -> BTreeSet<Symbol> {
        let mut s = BTreeSet::new();
        self.collect_vars(&mut s);
        s
    }

    pub fn contains_var(&self, x: &Symbol) -> bool {
        match self {
            Term::Var(y) => x == y,
            Term::Const(_) => false,
            Term::Compound(_, args) => args.iter().any(|a| a.contains_var(x)),
        }
    }

    /// Total symbol count, used as the clause weight for clause selection.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) | Term::Const(_) => 1,
            Term::Compound(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    /// A compound term t is weakly covering if every non-ground compound
    /// subterm s of t satisfies var(s) = var(t).
    pub fn is_weakly_covering(&self) -> bool {
        fn subterms_ok(t: &Term, whole: &BTreeSet<Symbol>) -> bool {
            match t {
                Term::Var(_) | Term::Const(_) => true,
                Term::Compound(_, args) => {
                    if !t.is_ground() && &t.vars() != whole {
                        return false;
                    }
                    args.iter().all(|a| subterms_ok(a, whole))
                }
            }
        }
        match self {
            Term::Compound(_, args) => {
                let whole = self.vars();
                args.iter().all(|a| subterms_ok(a, &whole))
            }
            _ => false,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(x) => write!(f, "{}", x.name),
            Term::Const(c) => write!(f, "{}", c.name),
            Term::Compound(g, args) => {
                write!(f, "{}(", g.name)?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub predicate: Symbol,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(predicate: Symbol, args: Vec<Term>) -> Atom {
        assert_eq!(predicate.arity, args.len(), "predicate arity mismatch");
        Atom { predicate, args }
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(Term::is_ground)
    }

    pub fn max_vdp(&self) -> i32 {
        self.args.iter().map(Term::vdp).max().unwrap_or(-1)
    }

    pub fn is_flat(&self) -> bool {
        self.max_vdp() <= 0
    }

    pub fn is_simple(&self) -> bool {
        self.max_vdp() <= 1
    }

    /// True if the atom contains at least one non-ground compound term.
    /// Any non-ground compound subterm sits inside a non-ground compound
    /// argument, so checking the top-level arguments suffices.
    pub fn has_nonground_compound(&self) -> bool {
        self.args
            .iter()
            .any(|t| matches!(t, Term::Compound(..)) && !t.is_ground())
    }

    pub fn has_compound(&self) -> bool {
        self.args.iter().any(|t| matches!(t, Term::Compound(..)))
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<Symbol>) {
        for a in &self.args {
            a.collect_vars(out);
        }
    }

    pub fn vars(&self) -> BTreeSet<Symbol> {
        let mut s = BTreeSet::new();
        self.collect_vars(&mut s);
        s
    }

    pub fn size(&self) -> usize {
        1 + self.args.iter().map(Term::size).sum::<usize>()
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.predicate.name)?;
        if !self.args.is_empty() {
            write!(f, "(")?;
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{a}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub positive: bool,
    pub atom: Atom,
}

impl Literal {
    pub fn pos(atom: Atom) -> Literal {
        Literal { positive: true, atom }
    }
    pub fn neg(atom: Atom) -> Literal {
        Literal { positive: false, atom }
    }
    pub fn is_ground(&self) -> bool {
        self.atom.is_ground()
    }
    pub fn is_flat(&self) -> bool {
        self.atom.is_flat()
    }
    pub fn is_simple(&self) -> bool {
        self.atom.is_simple()
    }
    /// Non-ground compound literal: contains a non-ground compound term.
    pub fn is_nonground_compound(&self) -> bool {
        self.atom.has_nonground_compound()
    }
    pub fn complement(&self) -> Literal {
        Literal { positive: !self.positive, atom: self.atom.clone() }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.positive {
            write!(f, "~")?;
        }
        write!(f, "{}", self.atom)
    }
}

/// An idempotent substitution. `bind` keeps the map idempotent by first
/// resolving the bound term against the current bindings and then folding
/// the new binding into every existing range term.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Subst {
    map: BTreeMap<Symbol, Term>,
}

impl Subst {
    pub fn new() -> Subst {
        Subst::default()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn get(&self, x: &Symbol) -> Option<&Term> {
        self.map.get(x)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Symbol, &Term)> {
        self.map.iter()
    }

    /// Insert a raw binding, composing so the result stays idempotent.
    /// The caller must have applied `self` to `t` and done the occurs check.
    pub(crate) fn insert_composed(&mut self, x: Symbol, t: Term) {
        if let Term::Var(y) = &t {
            if *y == x {
                return;
            }
        }
        let mut single = Subst::default();
        single.map.insert(x.clone(), t.clone());
        for v in self.map.values_mut() {
            *v = single.apply_term(v);
        }
        self.map.insert(x, t);
    }

    /// Insert without composing. Used by one-way matching, where range
    /// terms never mention domain variables.
    pub(crate) fn insert_raw(&mut self, x: Symbol, t: Term) {
        self.map.insert(x, t);
    }

    pub fn apply_term(&self, t: &Term) -> Term {
        match t {
            Term::Var(x) => self.map.get(x).cloned().unwrap_or_else(|| t.clone()),
            Term::Const(_) => t.clone(),
            Term::Compound(f, args) => {
                Term::Compound(f.clone(), args.iter().map(|a| self.apply_term(a)).collect())
            }
        }
    }

    pub fn apply_atom(&self, a: &Atom) -> Atom {
        Atom {
            predicate: a.predicate.clone(),
            args: a.args.iter().map(|t| self.apply_term(t)).collect(),
        }
    }

    pub fn apply_literal(&self, l: &Literal) -> Literal {
        Literal { positive: l.positive, atom: self.apply_atom(&l.atom) }
    }

    pub fn apply_literals(&self, lits: &[Literal]) -> Vec<Literal> {
        lits.iter().map(|l| self.apply_literal(l)).collect()
    }

    /// Build a plain renaming/replacement substitution without composition.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Symbol, Term)>) -> Subst {
        let mut s = Subst::default();
        for (x, t) in pairs {
            s.map.insert(x, t);
        }
        s
    }

    pub fn is_idempotent(&self) -> bool {
        self.map.values().all(|t| self.apply_term(t) == *t)
    }
}

impl fmt::Display for Subst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (x, t)) in self.map.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{} -> {}", x.name, t)?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Term {
        Term::Var(Symbol::var("X"))
    }
    fn y() -> Term {
        Term::Var(Symbol::var("Y"))
    }
    fn a() -> Term {
        Term::Const(Symbol::constant("a"))
    }

    #[test]
    fn vdp_constant_is_minus_one() {
        assert_eq!(a().vdp(), -1);
    }

    #[test]
    fn vdp_variable_is_zero() {
        assert_eq!(x().vdp(), 0);
    }

    #[test]
    fn vdp_nested() {
        // f(x, g(y)) has depth 2
        let g = Term::compound(Symbol::func("g", 1), vec![y()]);
        let t = Term::compound(Symbol::func("f", 2), vec![x(), g]);
        assert_eq!(t.vdp(), 2);
    }

    #[test]
    fn vdp_ground_compound_is_minus_one() {
        let t = Term::compound(Symbol::func("f", 1), vec![a()]);
        assert_eq!(t.vdp(), -1);
        assert!(t.is_ground());
    }

    #[test]
    fn flat_and_simple() {
        // A(x, a) is flat and simple
        let at = Atom::new(Symbol::pred("a1", 2), vec![x(), a()]);
        assert!(at.is_flat());
        assert!(at.is_simple());
        // P(f(x,y,z), y) is simple but not flat
        let f = Term::compound(
            Symbol::func("f", 3),
            vec![x(), y(), Term::Var(Symbol::var("Z"))],
        );
        let p = Atom::new(Symbol::pred("p", 2), vec![f, y()]);
        assert!(!p.is_flat());
        assert!(p.is_simple());
        // B1(g(h(x2,y2)), y1) is not simple
        let h = Term::compound(
            Symbol::func("h", 2),
            vec![Term::Var(Symbol::var("X2")), Term::Var(Symbol::var("Y2"))],
        );
        let g = Term::compound(Symbol::func("g", 1), vec![h]);
        let b = Atom::new(Symbol::pred("b1", 2), vec![g, Term::Var(Symbol::var("Y1"))]);
        assert!(!b.is_simple());
    }

    #[test]
    fn subst_apply_and_idempotence() {
        let h = Term::compound(
            Symbol::func("h", 2),
            vec![Term::Var(Symbol::var("X2")), Term::Var(Symbol::var("Y2"))],
        );
        let mut s = Subst::new();
        s.insert_composed(Symbol::var("X"), h.clone());
        let at = Atom::new(Symbol::pred("a1", 2), vec![x(), y()]);
        let applied = s.apply_atom(&at);
        assert_eq!(applied.args[0], h);
        assert_eq!(applied.args[1], y());
        assert!(s.is_idempotent());
        // identity substitution
        let id = Subst::new();
        assert_eq!(id.apply_atom(&at), at);
    }
}
