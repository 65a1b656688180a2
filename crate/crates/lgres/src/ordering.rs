//! Lexicographic path ordering over terms, atoms and literals.
//!
//! The precedence is stratified: every function symbol is larger than every
//! constant, and every constant larger than every predicate symbol. Within
//! a stratum symbols are ordered by arity (descending) and then name
//! (lexicographically smaller name wins). Atoms are compared as terms
//! headed by their predicate symbol; on equal atoms, negative beats
//! positive.

use std::cmp::Ordering as StdOrd;

use crate::clause::Clause;
use crate::term::{Atom, Literal, Symbol, SymbolKind, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cmp {
    Greater,
    Less,
    Equal,
    Incomparable,
}

impl Cmp {
    pub fn flip(self) -> Cmp {
        match self {
            Cmp::Greater => Cmp::Less,
            Cmp::Less => Cmp::Greater,
            other => other,
        }
    }
}

/// The admissible precedence f > a > p. Stateless: the order is a pure
/// function of symbol kind, arity and name.
#[derive(Clone, Copy, Debug, Default)]
pub struct Precedence;

impl Precedence {
    fn rank(kind: SymbolKind) -> u8 {
        match kind {
            SymbolKind::Function => 3,
            SymbolKind::Constant => 2,
            SymbolKind::Predicate => 1,
            SymbolKind::Variable => 0,
        }
    }

    /// Strict precedence comparison on non-variable symbols. Total: two
    /// distinct symbols always compare Greater or Less.
    pub fn cmp_symbols(&self, a: &Symbol, b: &Symbol) -> StdOrd {
        (Self::rank(a.kind), a.arity, std::cmp::Reverse(&a.name))
            .cmp(&(Self::rank(b.kind), b.arity, std::cmp::Reverse(&b.name)))
    }

    pub fn greater(&self, a: &Symbol, b: &Symbol) -> bool {
        self.cmp_symbols(a, b) == StdOrd::Greater
    }
}

/// A uniform view of terms and atoms as applications, so one LPO recursion
/// covers both.
#[derive(Clone, Copy)]
enum Expr<'a> {
    Var(&'a Symbol),
    App(&'a Symbol, &'a [Term]),
}

fn term_expr(t: &Term) -> Expr<'_> {
    match t {
        Term::Var(x) => Expr::Var(x),
        Term::Const(c) => Expr::App(c, &[]),
        Term::Compound(f, args) => Expr::App(f, args),
    }
}

fn atom_expr(a: &Atom) -> Expr<'_> {
    Expr::App(&a.predicate, &a.args)
}

fn expr_eq(a: Expr<'_>, b: Expr<'_>) -> bool {
    match (a, b) {
        (Expr::Var(x), Expr::Var(y)) => x == y,
        (Expr::App(f, fs), Expr::App(g, gs)) => f == g && fs == gs,
        _ => false,
    }
}

fn expr_contains_var(e: Expr<'_>, x: &Symbol) -> bool {
    match e {
        Expr::Var(y) => x == y,
        Expr::App(_, args) => args.iter().any(|t| t.contains_var(x)),
    }
}

fn lpo_gt(p: &Precedence, s: Expr<'_>, t: Expr<'_>) -> bool {
    if expr_eq(s, t) {
        return false;
    }
    match (s, t) {
        (_, Expr::Var(y)) => expr_contains_var(s, y),
        (Expr::Var(_), _) => false,
        (Expr::App(f, fs), Expr::App(g, gs)) => {
            // subterm case: some argument of s dominates t
            if fs
                .iter()
                .any(|si| expr_eq(term_expr(si), t) || lpo_gt(p, term_expr(si), t))
            {
                return true;
            }
            match p.cmp_symbols(f, g) {
                StdOrd::Greater => gs.iter().all(|tj| lpo_gt(p, s, term_expr(tj))),
                StdOrd::Equal => {
                    // same symbol: lexicographic on arguments
                    for (i, (si, ti)) in fs.iter().zip(gs).enumerate() {
                        if si == ti {
                            continue;
                        }
                        return lpo_gt(p, term_expr(si), term_expr(ti))
                            && gs[i + 1..].iter().all(|tj| lpo_gt(p, s, term_expr(tj)));
                    }
                    false
                }
                StdOrd::Less => false,
            }
        }
    }
}

fn compare(p: &Precedence, s: Expr<'_>, t: Expr<'_>) -> Cmp {
    if expr_eq(s, t) {
        Cmp::Equal
    } else if lpo_gt(p, s, t) {
        Cmp::Greater
    } else if lpo_gt(p, t, s) {
        Cmp::Less
    } else {
        Cmp::Incomparable
    }
}

pub fn lpo_term(p: &Precedence, t1: &Term, t2: &Term) -> Cmp {
    compare(p, term_expr(t1), term_expr(t2))
}

pub fn lpo_atom(p: &Precedence, a1: &Atom, a2: &Atom) -> Cmp {
    compare(p, atom_expr(a1), atom_expr(a2))
}

/// Admissible literal comparison: atoms first, polarity as the tiebreak
/// with negative above positive.
pub fn literal_compare(p: &Precedence, l1: &Literal, l2: &Literal) -> Cmp {
    match lpo_atom(p, &l1.atom, &l2.atom) {
        Cmp::Equal => match (l1.positive, l2.positive) {
            (true, true) | (false, false) => Cmp::Equal,
            (false, true) => Cmp::Greater,
            (true, false) => Cmp::Less,
        },
        other => other,
    }
}

/// Maximal: no other literal occurrence in the clause is strictly greater.
pub fn is_maximal_at(p: &Precedence, c: &Clause, idx: usize) -> bool {
    c.lits.iter().enumerate().all(|(j, l)| {
        j == idx || literal_compare(p, l, &c.lits[idx]) != Cmp::Greater
    })
}

/// Strictly maximal: no other occurrence is greater or equal.
pub fn is_strictly_maximal_at(p: &Precedence, c: &Clause, idx: usize) -> bool {
    c.lits.iter().enumerate().all(|(j, l)| {
        j == idx
            || !matches!(
                literal_compare(p, l, &c.lits[idx]),
                Cmp::Greater | Cmp::Equal
            )
    })
}

/// Maximality of a literal against a separate remainder sequence, used for
/// a-posteriori eligibility checks on instantiated premises.
pub fn maximal_in(p: &Precedence, lit: &Literal, rest: &[Literal]) -> bool {
    rest.iter().all(|l| literal_compare(p, l, lit) != Cmp::Greater)
}

pub fn strictly_maximal_in(p: &Precedence, lit: &Literal, rest: &[Literal]) -> bool {
    rest.iter().all(|l| {
        !matches!(literal_compare(p, l, lit), Cmp::Greater | Cmp::Equal)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::Atom;

    fn v(n: &str) -> Term {
        Term::Var(Symbol::var(n))
    }
    fn c(n: &str) -> Term {
        Term::Const(Symbol::constant(n))
    }
    fn f(n: &str, args: Vec<Term>) -> Term {
        Term::compound(Symbol::func(n, args.len()), args)
    }
    fn at(p: &str, args: Vec<Term>) -> Atom {
        Atom::new(Symbol::pred(p, args.len()), args)
    }

    const P: Precedence = Precedence;

    #[test]
    fn subterm_property() {
        assert_eq!(lpo_term(&P, &f("f", vec![c("a")]), &c("a")), Cmp::Greater);
    }

    #[test]
    fn distinct_variables_incomparable() {
        assert_eq!(lpo_term(&P, &v("X"), &v("Y")), Cmp::Incomparable);
    }

    #[test]
    fn function_term_beats_atom_when_vars_covered() {
        // f(x,y,z) vs P(x,y): greater since var(P) is covered
        let t = f("f", vec![v("X"), v("Y"), v("Z")]);
        let a = at("p", vec![v("X"), v("Y")]);
        assert!(lpo_gt(&P, term_expr(&t), atom_expr(&a)));
        // but not when the atom has a variable outside the term
        let a2 = at("p", vec![v("X"), v("U")]);
        assert!(!lpo_gt(&P, term_expr(&t), atom_expr(&a2)));
    }

    #[test]
    fn admissibility_conditions() {
        // ~A(a) > A(a)
        let l1 = Literal::neg(at("a", vec![c("a")]));
        let l2 = Literal::pos(at("a", vec![c("a")]));
        assert_eq!(literal_compare(&P, &l1, &l2), Cmp::Greater);
        assert_eq!(literal_compare(&P, &l2, &l2.clone()), Cmp::Equal);
        // B(b) > ~A(a) when B > A: b, B binary-free ground comparison
        let b = Literal::pos(at("b", vec![c("b")]));
        let na = Literal::neg(at("a", vec![c("a")]));
        // precedence between unary preds a and b: same arity, smaller name wins
        assert_eq!(literal_compare(&P, &na, &b), literal_compare(&P, &b, &na).flip());
        let cmp = literal_compare(&P, &b, &na);
        assert!(cmp == Cmp::Greater || cmp == Cmp::Less);
    }

    #[test]
    fn maximality_examples() {
        // P(f(x,y,z),y) dominates flat guards in the Example 2 clause
        let cl = Clause::input(
            0,
            vec![
                Literal::neg(at("q1", vec![v("X"), v("Y")])),
                Literal::neg(at("r", vec![v("X"), v("Z")])),
                Literal::neg(at("r", vec![v("Z"), v("Y")])),
                Literal::pos(at("p", vec![f("f", vec![v("X"), v("Y"), v("Z")]), v("Y")])),
            ],
        );
        assert!(is_maximal_at(&P, &cl, 3));
        assert!(is_strictly_maximal_at(&P, &cl, 3));
        assert!(!is_maximal_at(&P, &cl, 0));
        // duplicate occurrence: maximal but not strictly maximal
        let dup = Clause::input(
            0,
            vec![
                Literal::pos(at("a", vec![v("X")])),
                Literal::pos(at("a", vec![v("X")])),
            ],
        );
        assert!(is_maximal_at(&P, &dup, 0));
        assert!(!is_strictly_maximal_at(&P, &dup, 0));
        // A(x) not maximal next to B(f(x))
        let cl2 = Clause::input(
            0,
            vec![
                Literal::pos(at("a", vec![v("X")])),
                Literal::pos(at("b", vec![f("f", vec![v("X")])])),
            ],
        );
        assert!(!is_maximal_at(&P, &cl2, 0));
    }

    #[test]
    fn example1_a1_strictly_maximal_in_c1() {
        // C1 = A1(f(x1,y1),x1) | B1(g(x1,y1)) | ~G1(x1,y1); with f > g the
        // A1 literal must be the strictly maximal one.
        let c1 = Clause::input(
            0,
            vec![
                Literal::pos(at("a1", vec![f("f", vec![v("X1"), v("Y1")]), v("X1")])),
                Literal::pos(at("b1", vec![f("g", vec![v("X1"), v("Y1")])])),
                Literal::neg(at("g1", vec![v("X1"), v("Y1")])),
            ],
        );
        assert!(is_strictly_maximal_at(&P, &c1, 0));
        assert!(!is_maximal_at(&P, &c1, 1));
        assert!(!is_maximal_at(&P, &c1, 2));
    }

    #[test]
    fn ground_totality_small() {
        let terms = [c("a"), c("b"), f("f", vec![c("a")]), f("g", vec![c("b"), c("a")])];
        for s in &terms {
            for t in &terms {
                let cmp = lpo_term(&P, s, t);
                assert_ne!(cmp, Cmp::Incomparable, "{s} vs {t}");
                assert_eq!(lpo_term(&P, t, s), cmp.flip());
            }
        }
    }
}
