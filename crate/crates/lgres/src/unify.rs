//! Most general unification and one-way matching.
//!
//! Unifiers are built Martelli-Montanari style with an eager occurs check
//! and are always idempotent, which the top-variable computation relies on.

use crate::term::{Atom, Subst, Symbol, Term};

/// Unify two terms under an accumulated substitution. Returns false on
/// clash or occurs-check failure; on success `sub` is extended.
fn unify_terms(s: &Term, t: &Term, sub: &mut Subst) -> bool {
    let s = sub.apply_term(s);
    let t = sub.apply_term(t);
    match (&s, &t) {
        (Term::Var(x), Term::Var(y)) if x == y => true,
        (Term::Var(x), _) => bind(x.clone(), t, sub),
        (_, Term::Var(y)) => bind(y.clone(), s, sub),
        (Term::Const(c), Term::Const(d)) => c == d,
        (Term::Compound(f, fs), Term::Compound(g, gs)) => {
            f == g && fs.iter().zip(gs).all(|(u, v)| unify_terms(u, v, sub))
        }
        _ => false,
    }
}

fn bind(x: Symbol, t: Term, sub: &mut Subst) -> bool {
    if t.contains_var(&x) {
        return matches!(&t, Term::Var(y) if *y == x);
    }
    sub.insert_composed(x, t);
    true
}

/// Most general unifier of two atoms, or None on clash / occurs check /
/// predicate mismatch.
pub fn mgu(a1: &Atom, a2: &Atom) -> Option<Subst> {
    let mut sub = Subst::new();
    if extend_mgu(a1, a2, &mut sub) {
        Some(sub)
    } else {
        None
    }
}

fn extend_mgu(a1: &Atom, a2: &Atom, sub: &mut Subst) -> bool {
    a1.predicate == a2.predicate
        && a1.args.iter().zip(&a2.args).all(|(s, t)| unify_terms(s, t, sub))
}

/// Simultaneous mgu of a sequence of atom pairs: a single idempotent
/// substitution unifying every pair, processed left to right.
pub fn simultaneous_mgu<'a>(
    pairs: impl IntoIterator<Item = (&'a Atom, &'a Atom)>,
) -> Option<Subst> {
    let mut sub = Subst::new();
    for (l, r) in pairs {
        if !extend_mgu(l, r, &mut sub) {
            return None;
        }
    }
    Some(sub)
}

/// One-way matching: extend `sub` so that `pattern * sub == target`.
/// Variables in the target are treated as constants.
pub fn match_term(pattern: &Term, target: &Term, sub: &mut Subst) -> bool {
    match (pattern, target) {
        (Term::Var(x), _) => match sub.get(x) {
            Some(bound) => bound == target,
            None => {
                sub.insert_raw(x.clone(), target.clone());
                true
            }
        },
        (Term::Const(c), Term::Const(d)) => c == d,
        (Term::Compound(f, fs), Term::Compound(g, gs)) => {
            f == g && fs.iter().zip(gs).all(|(p, t)| match_term(p, t, sub))
        }
        _ => false,
    }
}

pub fn match_atom(pattern: &Atom, target: &Atom, sub: &mut Subst) -> bool {
    pattern.predicate == target.predicate
        && pattern.args.iter().zip(&target.args).all(|(p, t)| match_term(p, t, sub))
}
