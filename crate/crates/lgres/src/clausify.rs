//! Transformation of loosely guarded formulas into loosely guarded
//! clauses: existential closure, negation normal form, definitional naming
//! of universal subformulas, prenexing, outer Skolemisation and
//! conjunctive normal form. Also the membership check for the loosely
//! guarded fragment.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::formula::Formula;
use crate::term::{Atom, Literal, Subst, Symbol, Term};

#[derive(Debug, Error)]
pub enum ClausifyError {
    #[error("input contains function symbols: {0}")]
    FunctionSymbols(String),
    #[error("not in the loosely guarded fragment: {0}")]
    NotInLgf(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LgfMembership {
    InLgf,
    NotInLgf { witness: String },
}

impl LgfMembership {
    pub fn is_in(&self) -> bool {
        matches!(self, LgfMembership::InLgf)
    }
}

/// Per-problem counter for fresh definitional predicates, Skolem symbols
/// and renamed bound variables.
#[derive(Debug, Default)]
pub struct FreshSymbols {
    defs: usize,
    skolems: usize,
    renames: usize,
}

impl FreshSymbols {
    pub fn new() -> Self {
        Self::default()
    }
    fn next_def(&mut self) -> String {
        self.defs += 1;
        format!("def{}", self.defs)
    }
    fn next_skolem(&mut self) -> String {
        self.skolems += 1;
        format!("sk{}", self.skolems)
    }
    fn next_rename(&mut self, base: &str, used: &BTreeSet<String>) -> String {
        loop {
            self.renames += 1;
            let name = format!("{}_{}", base, self.renames);
            if !used.contains(&name) {
                return name;
            }
        }
    }
}

/// Membership in the loosely guarded fragment. Universally quantified
/// formulas must decompose as guards implying a loosely guarded body;
/// existentials are checked through their dual universal form. Guard
/// subsets are searched exhaustively.
pub fn check_lgf(f: &Formula) -> Result<LgfMembership, ClausifyError> {
    if f.contains_function_symbols() {
        return Err(ClausifyError::FunctionSymbols(f.to_string()));
    }
    Ok(match lgf(f) {
        Ok(()) => LgfMembership::InLgf,
        Err(witness) => LgfMembership::NotInLgf { witness },
    })
}

fn lgf(f: &Formula) -> Result<(), String> {
    match f {
        Formula::True | Formula::False | Formula::Atom(_) => Ok(()),
        Formula::Not(g) => lgf(g),
        Formula::And(gs) | Formula::Or(gs) => gs.iter().try_for_each(lgf),
        Formula::Implies(a, b) | Formula::Iff(a, b) => lgf(a).and_then(|_| lgf(b)),
        Formula::Forall(xs, body) => check_quantified(f, xs, body, false),
        Formula::Exists(xs, body) => check_quantified(f, xs, body, true),
    }
}

fn check_quantified(
    whole: &Formula,
    xs: &[Symbol],
    body: &Formula,
    existential: bool,
) -> Result<(), String> {
    // candidate guards and the residual formula parts
    let (candidates, rest): (Vec<Atom>, Vec<Formula>) = if existential {
        let mut atoms = Vec::new();
        let mut rest = Vec::new();
        for g in conjuncts(body) {
            match g {
                Formula::Atom(a) => atoms.push(a.clone()),
                other => rest.push(other.clone()),
            }
        }
        (atoms, rest)
    } else {
        match body {
            Formula::Implies(ante, succ) => {
                let mut atoms = Vec::new();
                for g in conjuncts(ante) {
                    match g {
                        Formula::Atom(a) => atoms.push(a.clone()),
                        other => {
                            return Err(format!(
                                "guard position holds a non-atom {other} in {whole}"
                            ))
                        }
                    }
                }
                (atoms, vec![succ.as_ref().clone()])
            }
            Formula::Or(gs) => {
                // NNF shape: negated atoms act as guards
                let mut atoms = Vec::new();
                let mut rest = Vec::new();
                for g in gs {
                    match g {
                        Formula::Not(inner) => match inner.as_ref() {
                            Formula::Atom(a) => atoms.push(a.clone()),
                            other => rest.push(Formula::not(other.clone())),
                        },
                        other => rest.push(other.clone()),
                    }
                }
                (atoms, rest)
            }
            Formula::Not(inner) => match inner.as_ref() {
                Formula::Atom(a) => (vec![a.clone()], vec![Formula::False]),
                _ => (Vec::new(), vec![body.clone()]),
            },
            _ => (Vec::new(), vec![body.clone()]),
        }
    };

    for g in &rest {
        lgf(g)?;
    }

    if candidates.is_empty() {
        return Err(format!("quantified formula has no guard atoms: {whole}"));
    }
    if candidates.len() > 16 {
        return Err(format!("too many guard candidates to search in {whole}"));
    }

    // In the implication form the antecedent atoms are exactly the guards;
    // otherwise search subsets (in the existential case an atom conjunct
    // may belong to the body instead of the guard set).
    let fixed = !existential && matches!(body, Formula::Implies(_, _) | Formula::Not(_));
    let subsets: Vec<Vec<usize>> = if fixed {
        vec![(0..candidates.len()).collect()]
    } else {
        all_nonempty_subsets(candidates.len())
    };

    let mut first_reason: Option<String> = None;
    for subset in subsets {
        let guards: Vec<&Atom> = subset.iter().map(|&i| &candidates[i]).collect();
        let mut residue: Vec<Formula> = rest.clone();
        for (i, a) in candidates.iter().enumerate() {
            if !subset.contains(&i) {
                residue.push(Formula::Atom(a.clone()));
            }
        }
        let residual = if existential {
            Formula::and(residue)
        } else {
            Formula::or(residue)
        };
        match guard_conditions(xs, &guards, &residual) {
            Ok(()) => return Ok(()),
            Err(reason) => {
                first_reason.get_or_insert(reason);
            }
        }
    }
    Err(format!(
        "{} (in {whole})",
        first_reason.unwrap_or_else(|| "guard conditions violated".to_string())
    ))
}

fn guard_conditions(xs: &[Symbol], guards: &[&Atom], residual: &Formula) -> Result<(), String> {
    let guard_vars: Vec<BTreeSet<Symbol>> = guards.iter().map(|g| g.vars()).collect();
    let all_guard_vars: BTreeSet<Symbol> =
        guard_vars.iter().flat_map(|s| s.iter().cloned()).collect();
    // i) all free variables of the body occur in the guards
    for x in residual.free_vars() {
        if !all_guard_vars.contains(&x) && !xs.contains(&x) {
            return Err(format!("free variable {} does not occur in a guard", x.name));
        }
        if !all_guard_vars.contains(&x) {
            return Err(format!("free variable {} does not occur in a guard", x.name));
        }
    }
    // ii) every quantified variable co-occurs with every guard variable
    for x in xs {
        for y in &all_guard_vars {
            if x == y {
                continue;
            }
            let ok = guard_vars.iter().any(|gv| gv.contains(x) && gv.contains(y));
            if !ok {
                return Err(format!(
                    "{} and {} do not co-occur in a guard",
                    x.name, y.name
                ));
            }
        }
    }
    Ok(())
}

fn conjuncts(f: &Formula) -> Vec<&Formula> {
    match f {
        Formula::And(gs) => gs.iter().flat_map(conjuncts).collect(),
        other => vec![other],
    }
}

fn all_nonempty_subsets(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        out.push((0..n).filter(|i| mask & (1 << i) != 0).collect());
    }
    // try larger guard sets first: the full set succeeds most often
    out.sort_by_key(|s: &Vec<usize>| std::cmp::Reverse(s.len()));
    out
}

/// Step i: existentially close all free variables.
pub fn close_free(f: &Formula) -> Formula {
    let free: Vec<Symbol> = f.free_vars().into_iter().collect();
    if free.is_empty() {
        f.clone()
    } else {
        Formula::Exists(free, Box::new(f.clone()))
    }
}

/// Step ii: negation normal form, eliminating -> and <->.
pub fn nnf(f: &Formula) -> Formula {
    nnf_signed(f, true)
}

fn nnf_signed(f: &Formula, positive: bool) -> Formula {
    match (f, positive) {
        (Formula::True, true) | (Formula::False, false) => Formula::True,
        (Formula::True, false) | (Formula::False, true) => Formula::False,
        (Formula::Atom(a), true) => Formula::Atom(a.clone()),
        (Formula::Atom(a), false) => Formula::not(Formula::Atom(a.clone())),
        (Formula::Not(g), _) => nnf_signed(g, !positive),
        (Formula::And(gs), true) | (Formula::Or(gs), false) => {
            Formula::and(flatten_and(gs.iter().map(|g| nnf_signed(g, positive))))
        }
        (Formula::And(gs), false) | (Formula::Or(gs), true) => {
            Formula::or(flatten_or(gs.iter().map(|g| nnf_signed(g, positive))))
        }
        (Formula::Implies(a, b), true) => {
            Formula::or(flatten_or([nnf_signed(a, false), nnf_signed(b, true)]))
        }
        (Formula::Implies(a, b), false) => {
            Formula::and(flatten_and([nnf_signed(a, true), nnf_signed(b, false)]))
        }
        (Formula::Iff(a, b), true) => Formula::and(flatten_and([
            Formula::or(flatten_or([nnf_signed(a, false), nnf_signed(b, true)])),
            Formula::or(flatten_or([nnf_signed(b, false), nnf_signed(a, true)])),
        ])),
        (Formula::Iff(a, b), false) => Formula::or(flatten_or([
            Formula::and(flatten_and([nnf_signed(a, true), nnf_signed(b, false)])),
            Formula::and(flatten_and([nnf_signed(b, true), nnf_signed(a, false)])),
        ])),
        (Formula::Forall(xs, g), true) | (Formula::Exists(xs, g), false) => {
            Formula::Forall(xs.clone(), Box::new(nnf_signed(g, positive)))
        }
        (Formula::Exists(xs, g), true) | (Formula::Forall(xs, g), false) => {
            Formula::Exists(xs.clone(), Box::new(nnf_signed(g, positive)))
        }
    }
}

fn flatten_and(fs: impl IntoIterator<Item = Formula>) -> Vec<Formula> {
    let mut out = Vec::new();
    for f in fs {
        match f {
            Formula::And(gs) => out.extend(gs),
            other => out.push(other),
        }
    }
    out
}

fn flatten_or(fs: impl IntoIterator<Item = Formula>) -> Vec<Formula> {
    let mut out = Vec::new();
    for f in fs {
        match f {
            Formula::Or(gs) => out.extend(gs),
            other => out.push(other),
        }
    }
    out
}

/// Step iii: name every universally quantified subformula that does not
/// sit at the top of the conjunctive spine. Each named subformula over
/// free variables x gets a fresh predicate Q(x) and a defining conjunct
/// forall x (~Q(x) | forall z psi). Inner universals are named first.
pub fn structural_transform(f: &Formula, fresh: &mut FreshSymbols) -> Formula {
    let mut defs = Vec::new();
    let main = st(f, true, &mut defs, fresh);
    let mut parts = vec![main];
    parts.extend(defs);
    Formula::and(flatten_and(parts))
}

fn st(f: &Formula, at_root: bool, defs: &mut Vec<Formula>, fresh: &mut FreshSymbols) -> Formula {
    match f {
        Formula::True | Formula::False | Formula::Atom(_) => f.clone(),
        Formula::Not(_) => f.clone(), // NNF: negation sits on an atom
        Formula::And(gs) => {
            Formula::and(gs.iter().map(|g| st(g, at_root, defs, fresh)).collect())
        }
        Formula::Or(gs) => Formula::or(gs.iter().map(|g| st(g, false, defs, fresh)).collect()),
        Formula::Exists(xs, g) => Formula::Exists(xs.clone(), Box::new(st(g, false, defs, fresh))),
        Formula::Forall(xs, g) => {
            let body = st(g, false, defs, fresh);
            let named = Formula::Forall(xs.clone(), Box::new(body));
            if at_root {
                return named;
            }
            let fv: Vec<Symbol> = named.free_vars().into_iter().collect();
            let q = Symbol::pred(fresh.next_def(), fv.len());
            let q_atom = Atom::new(q, fv.iter().cloned().map(Term::Var).collect());
            let def_body = Formula::Or(vec![
                Formula::not(Formula::Atom(q_atom.clone())),
                named,
            ]);
            defs.push(if fv.is_empty() {
                def_body
            } else {
                Formula::Forall(fv, Box::new(def_body))
            });
            Formula::Atom(q_atom)
        }
        Formula::Implies(..) | Formula::Iff(..) => {
            unreachable!("structural transform expects NNF input")
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quant {
    Forall,
    Exists,
}

/// Step iv part one: prenex normal form. Quantifiers are hoisted in
/// left-to-right, outside-in order; bound variables are renamed when their
/// name is already taken, so the prefix binds distinct variables.
pub fn prenex(f: &Formula, fresh: &mut FreshSymbols) -> (Vec<(Quant, Symbol)>, Formula) {
    let mut used: BTreeSet<String> = f.free_vars().into_iter().map(|x| x.name).collect();
    let mut prefix = Vec::new();
    let matrix = pull(f, &mut used, &mut prefix, fresh);
    (prefix, matrix)
}

fn pull(
    f: &Formula,
    used: &mut BTreeSet<String>,
    prefix: &mut Vec<(Quant, Symbol)>,
    fresh: &mut FreshSymbols,
) -> Formula {
    match f {
        Formula::Forall(xs, g) | Formula::Exists(xs, g) => {
            let quant = if matches!(f, Formula::Forall(..)) {
                Quant::Forall
            } else {
                Quant::Exists
            };
            let mut renaming = Vec::new();
            for x in xs {
                let name = if used.contains(&x.name) {
                    fresh.next_rename(&x.name, used)
                } else {
                    x.name.clone()
                };
                used.insert(name.clone());
                let fresh_var = Symbol::var(name);
                prefix.push((quant, fresh_var.clone()));
                if fresh_var != *x {
                    renaming.push((x.clone(), Term::Var(fresh_var)));
                }
            }
            let body = if renaming.is_empty() {
                g.as_ref().clone()
            } else {
                g.substitute(&Subst::from_pairs(renaming))
            };
            pull(&body, used, prefix, fresh)
        }
        Formula::And(gs) => {
            Formula::and(gs.iter().map(|g| pull(g, used, prefix, fresh)).collect())
        }
        Formula::Or(gs) => {
            Formula::or(gs.iter().map(|g| pull(g, used, prefix, fresh)).collect())
        }
        other => other.clone(),
    }
}

/// Step iv part two: outer Skolemisation. Each existential variable is
/// replaced by a Skolem term over exactly the universal variables that
/// precede it in the prefix.
pub fn outer_skolemize(
    prefix: &[(Quant, Symbol)],
    matrix: &Formula,
    fresh: &mut FreshSymbols,
) -> (Vec<Symbol>, Formula) {
    let mut universals: Vec<Symbol> = Vec::new();
    let mut bindings = Vec::new();
    for (quant, x) in prefix {
        match quant {
            Quant::Forall => universals.push(x.clone()),
            Quant::Exists => {
                let name = fresh.next_skolem();
                let term = if universals.is_empty() {
                    Term::Const(Symbol::constant(name))
                } else {
                    Term::compound(
                        Symbol::func(name, universals.len()),
                        universals.iter().cloned().map(Term::Var).collect(),
                    )
                };
                bindings.push((x.clone(), term));
            }
        }
    }
    let skolemized = if bindings.is_empty() {
        matrix.clone()
    } else {
        matrix.substitute(&Subst::from_pairs(bindings))
    };
    (universals, skolemized)
}

/// Step v: drop universal quantifiers and distribute to CNF.
pub fn cnf(matrix: &Formula) -> Vec<Vec<Literal>> {
    let mut clauses = cnf_rec(matrix);
    for c in &mut clauses {
        c.dedup_by(|a, b| a == b);
        let mut seen: Vec<Literal> = Vec::new();
        c.retain(|l| {
            if seen.contains(l) {
                false
            } else {
                seen.push(l.clone());
                true
            }
        });
    }
    clauses
}

fn cnf_rec(f: &Formula) -> Vec<Vec<Literal>> {
    match f {
        Formula::True => vec![],
        Formula::False => vec![vec![]],
        Formula::Atom(a) => vec![vec![Literal::pos(a.clone())]],
        Formula::Not(g) => match g.as_ref() {
            Formula::Atom(a) => vec![vec![Literal::neg(a.clone())]],
            other => unreachable!("CNF expects NNF input, found ~({other})"),
        },
        Formula::And(gs) => gs.iter().flat_map(cnf_rec).collect(),
        Formula::Or(gs) => {
            let mut acc: Vec<Vec<Literal>> = vec![vec![]];
            for g in gs {
                let sub = cnf_rec(g);
                let mut next = Vec::new();
                for base in &acc {
                    for extra in &sub {
                        let mut merged = base.clone();
                        merged.extend(extra.iter().cloned());
                        next.push(merged);
                    }
                }
                acc = next;
            }
            acc
        }
        other => unreachable!("quantifier in CNF matrix: {other}"),
    }
}

/// The full pipeline on a loosely guarded formula. Output clauses are
/// loosely guarded (simple, weakly covering, guard-covered).
pub fn lgf_trans(f: &Formula, fresh: &mut FreshSymbols) -> Result<Vec<Vec<Literal>>, ClausifyError> {
    match check_lgf(f)? {
        LgfMembership::InLgf => {}
        LgfMembership::NotInLgf { witness } => return Err(ClausifyError::NotInLgf(witness)),
    }
    Ok(clausify_unchecked(f, fresh))
}

/// The same pipeline without the membership check. Only meant for the
/// differential test harness and the oracle engines; clauses produced from
/// non-LGF input need not be loosely guarded.
pub fn clausify_unchecked(f: &Formula, fresh: &mut FreshSymbols) -> Vec<Vec<Literal>> {
    let closed = close_free(f);
    let normal = nnf(&closed);
    let structural = structural_transform(&normal, fresh);
    let (prefix, matrix) = prenex(&structural, fresh);
    let (_, skolemized) = outer_skolemize(&prefix, &matrix, fresh);
    cnf(&skolemized)
}
