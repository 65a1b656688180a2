//! Independent brute-force deciders used to cross-check the main engine.
//!
//! Each oracle is deliberately naive and one-sided where noted:
//! `forward_chain` only ever concludes unsatisfiable, `finite_model_search`
//! only ever concludes satisfiable, and `naive_resolution` concludes either
//! when its step budget suffices.

use std::collections::{BTreeMap, BTreeSet};

use crate::clause::Clause;
use crate::formula::Formula;
use crate::term::{Atom, Literal, Subst, Symbol, Term};
use crate::unify::mgu;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleVerdict {
    ConfirmedSat,
    ConfirmedUnsat,
    Inconclusive(String),
}

fn collect_symbols(clauses: &[Vec<Literal>]) -> (Vec<Symbol>, Vec<Symbol>, Vec<Symbol>) {
    let mut consts = BTreeSet::new();
    let mut funcs = BTreeSet::new();
    let mut preds = BTreeSet::new();
    fn walk(t: &Term, consts: &mut BTreeSet<Symbol>, funcs: &mut BTreeSet<Symbol>) {
        match t {
            Term::Var(_) => {}
            Term::Const(c) => {
                consts.insert(c.clone());
            }
            Term::Compound(f, args) => {
                funcs.insert(f.clone());
                for a in args {
                    walk(a, consts, funcs);
                }
            }
        }
    }
    for c in clauses {
        for l in c {
            preds.insert(l.atom.predicate.clone());
            for t in &l.atom.args {
                walk(t, &mut consts, &mut funcs);
            }
        }
    }
    (
        consts.into_iter().collect(),
        funcs.into_iter().collect(),
        preds.into_iter().collect(),
    )
}

/// Ground forward chaining for Horn clause sets over the Herbrand universe
/// truncated at the given term depth. One-sided: only an unsatisfiability
/// verdict is conclusive.
pub fn forward_chain(clauses: &[Vec<Literal>], depth: usize) -> OracleVerdict {
    if clauses
        .iter()
        .any(|c| c.iter().filter(|l| l.positive).count() > 1)
    {
        return OracleVerdict::Inconclusive("clause set is not Horn".to_string());
    }
    let (mut consts, funcs, _) = collect_symbols(clauses);
    if consts.is_empty() {
        consts.push(Symbol::constant("hc0"));
    }
    // Herbrand terms up to the depth bound
    let mut terms: Vec<Term> = consts.iter().cloned().map(Term::Const).collect();
    for _ in 0..depth {
        let snapshot = terms.clone();
        for f in &funcs {
            for tuple in tuples_of(&snapshot, f.arity) {
                let t = Term::compound(f.clone(), tuple);
                if !terms.contains(&t) {
                    terms.push(t);
                }
                if terms.len() > 4000 {
                    return OracleVerdict::Inconclusive("Herbrand universe too large".to_string());
                }
            }
        }
    }

    // ground all clauses
    let mut ground: Vec<Vec<Literal>> = Vec::new();
    for c in clauses {
        let vars: Vec<Symbol> = Clause::input(0, c.clone()).vars().into_iter().collect();
        let count = terms.len().checked_pow(vars.len() as u32);
        match count {
            Some(k) if ground.len() + k <= 500_000 => {}
            _ => return OracleVerdict::Inconclusive("too many ground instances".to_string()),
        }
        for assignment in tuples_of(&terms, vars.len()) {
            let sub = Subst::from_pairs(vars.iter().cloned().zip(assignment));
            ground.push(sub.apply_literals(c));
        }
    }

    let mut facts: BTreeSet<Atom> = BTreeSet::new();
    loop {
        let mut changed = false;
        for c in &ground {
            let body_holds = c
                .iter()
                .filter(|l| !l.positive)
                .all(|l| facts.contains(&l.atom));
            if !body_holds {
                continue;
            }
            match c.iter().find(|l| l.positive) {
                None => return OracleVerdict::ConfirmedUnsat,
                Some(head) => {
                    if facts.insert(head.atom.clone()) {
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            return OracleVerdict::Inconclusive(format!(
                "forward chaining saturated at depth {depth} without contradiction"
            ));
        }
    }
}

fn tuples_of(items: &[Term], k: usize) -> Vec<Vec<Term>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        let mut next = Vec::new();
        for base in &out {
            for it in items {
                let mut b = base.clone();
                b.push(it.clone());
                next.push(b);
            }
        }
        out = next;
    }
    out
}

fn index_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        let mut next = Vec::new();
        for base in &out {
            for v in 0..n {
                let mut b = base.clone();
                b.push(v);
                next.push(b);
            }
        }
        out = next;
    }
    out
}

/// A finite interpretation over the domain 0..n.
#[derive(Clone, Debug)]
pub struct Model {
    pub n: usize,
    pub consts: BTreeMap<Symbol, usize>,
    pub funcs: BTreeMap<(Symbol, Vec<usize>), usize>,
    pub preds: BTreeMap<(Symbol, Vec<usize>), bool>,
}

impl Model {
    fn eval_term(&self, t: &Term, env: &BTreeMap<Symbol, usize>) -> Option<usize> {
        match t {
            Term::Var(x) => env.get(x).copied(),
            Term::Const(c) => self.consts.get(c).copied(),
            Term::Compound(f, args) => {
                let vals: Option<Vec<usize>> =
                    args.iter().map(|a| self.eval_term(a, env)).collect();
                self.funcs.get(&(f.clone(), vals?)).copied()
            }
        }
    }

    fn eval_literal(&self, l: &Literal, env: &BTreeMap<Symbol, usize>) -> Option<bool> {
        let vals: Option<Vec<usize>> =
            l.atom.args.iter().map(|a| self.eval_term(a, env)).collect();
        let holds = self.preds.get(&(l.atom.predicate.clone(), vals?)).copied()?;
        Some(if l.positive { holds } else { !holds })
    }

    /// Three-valued clause status under the partial interpretation:
    /// Some(true) satisfied, Some(false) violated, None undetermined.
    fn clause_status(&self, lits: &[Literal], env: &BTreeMap<Symbol, usize>) -> Option<bool> {
        let mut all_false = true;
        for l in lits {
            match self.eval_literal(l, env) {
                Some(true) => return Some(true),
                Some(false) => {}
                None => all_false = false,
            }
        }
        if all_false {
            Some(false)
        } else {
            None
        }
    }

    pub fn satisfies_clauses(&self, clauses: &[Vec<Literal>]) -> bool {
        clauses.iter().all(|c| {
            let vars: Vec<Symbol> = Clause::input(0, c.clone()).vars().into_iter().collect();
            index_tuples(self.n, vars.len()).into_iter().all(|vals| {
                let env: BTreeMap<Symbol, usize> =
                    vars.iter().cloned().zip(vals).collect();
                self.clause_status(c, &env) == Some(true)
            })
        })
    }

    pub fn eval_formula(&self, f: &Formula, env: &mut BTreeMap<Symbol, usize>) -> bool {
        match f {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom(a) => {
                let vals: Vec<usize> = a
                    .args
                    .iter()
                    .map(|t| self.eval_term(t, env).expect("total model"))
                    .collect();
                *self
                    .preds
                    .get(&(a.predicate.clone(), vals))
                    .expect("total model")
            }
            Formula::Not(g) => !self.eval_formula(g, env),
            Formula::And(gs) => gs.iter().all(|g| self.eval_formula(g, env)),
            Formula::Or(gs) => gs.iter().any(|g| self.eval_formula(g, env)),
            Formula::Implies(a, b) => !self.eval_formula(a, env) || self.eval_formula(b, env),
            Formula::Iff(a, b) => self.eval_formula(a, env) == self.eval_formula(b, env),
            Formula::Forall(xs, g) => self.eval_quant(xs, g, env, true),
            Formula::Exists(xs, g) => self.eval_quant(xs, g, env, false),
        }
    }

    fn eval_quant(
        &self,
        xs: &[Symbol],
        g: &Formula,
        env: &mut BTreeMap<Symbol, usize>,
        forall: bool,
    ) -> bool {
        for vals in index_tuples(self.n, xs.len()) {
            let saved: Vec<Option<usize>> = xs.iter().map(|x| env.get(x).copied()).collect();
            for (x, v) in xs.iter().zip(&vals) {
                env.insert(x.clone(), *v);
            }
            let holds = self.eval_formula(g, env);
            for (x, old) in xs.iter().zip(saved) {
                match old {
                    Some(v) => env.insert(x.clone(), v),
                    None => env.remove(x),
                };
            }
            if forall && !holds {
                return false;
            }
            if !forall && holds {
                return true;
            }
        }
        forall
    }
}

/// One interpretation cell: a constant, one function table entry, or one
/// predicate table entry.
#[derive(Clone, Debug)]
enum Cell {
    Const(Symbol),
    Func(Symbol, Vec<usize>),
    Pred(Symbol, Vec<usize>),
}

const MODEL_SEARCH_NODE_BUDGET: usize = 2_000_000;

/// Backtracking search for a finite model with at most `max_domain`
/// elements. Cells are assigned one at a time; after every assignment each
/// clause instance that became fully evaluable is checked, which prunes
/// most of the space. One-sided: only a satisfiable verdict is conclusive.
pub fn finite_model_search(clauses: &[Vec<Literal>], max_domain: usize) -> OracleVerdict {
    match find_model(clauses, max_domain) {
        Ok(Some(model)) => {
            debug_assert!(model.satisfies_clauses(clauses));
            OracleVerdict::ConfirmedSat
        }
        Ok(None) => OracleVerdict::Inconclusive(format!(
            "no model with at most {max_domain} elements"
        )),
        Err(msg) => OracleVerdict::Inconclusive(msg),
    }
}

pub fn find_model(clauses: &[Vec<Literal>], max_domain: usize) -> Result<Option<Model>, String> {
    let (consts, funcs, preds) = collect_symbols(clauses);
    for c in clauses {
        if Clause::input(0, c.clone()).vars().len() > 6 {
            return Err("clause has too many variables for model search".to_string());
        }
    }
    let mut budget = MODEL_SEARCH_NODE_BUDGET;
    for n in 1..=max_domain {
        // predicates before functions: the guard literals of a clause then
        // force function values as soon as they are assigned
        let mut cells: Vec<Cell> = Vec::new();
        for c in &consts {
            cells.push(Cell::Const(c.clone()));
        }
        for p in &preds {
            for t in index_tuples(n, p.arity) {
                cells.push(Cell::Pred(p.clone(), t));
            }
        }
        for f in &funcs {
            for t in index_tuples(n, f.arity) {
                cells.push(Cell::Func(f.clone(), t));
            }
        }
        if cells.len() > 512 {
            return Err("interpretation has too many cells".to_string());
        }
        let mut model = Model {
            n,
            consts: BTreeMap::new(),
            funcs: BTreeMap::new(),
            preds: BTreeMap::new(),
        };
        if let Some(found) = dfs(&mut model, &cells, 0, clauses, &mut budget) {
            return Ok(Some(found));
        }
        if budget == 0 {
            return Err("model search budget exhausted".to_string());
        }
    }
    Ok(None)
}

fn dfs(
    model: &mut Model,
    cells: &[Cell],
    idx: usize,
    clauses: &[Vec<Literal>],
    budget: &mut usize,
) -> Option<Model> {
    if *budget == 0 {
        return None;
    }
    *budget -= 1;
    if no_clause_violated(model, clauses) != Ok(()) {
        return None;
    }
    if idx == cells.len() {
        return Some(model.clone());
    }
    match &cells[idx] {
        Cell::Const(c) => {
            for v in 0..model.n {
                model.consts.insert(c.clone(), v);
                if let Some(m) = dfs(model, cells, idx + 1, clauses, budget) {
                    return Some(m);
                }
            }
            model.consts.remove(c);
        }
        Cell::Func(f, args) => {
            for v in 0..model.n {
                model.funcs.insert((f.clone(), args.clone()), v);
                if let Some(m) = dfs(model, cells, idx + 1, clauses, budget) {
                    return Some(m);
                }
            }
            model.funcs.remove(&(f.clone(), args.clone()));
        }
        Cell::Pred(p, args) => {
            for v in [true, false] {
                model.preds.insert((p.clone(), args.clone()), v);
                if let Some(m) = dfs(model, cells, idx + 1, clauses, budget) {
                    return Some(m);
                }
            }
            model.preds.remove(&(p.clone(), args.clone()));
        }
    }
    None
}

fn no_clause_violated(model: &Model, clauses: &[Vec<Literal>]) -> Result<(), ()> {
    for c in clauses {
        let vars: Vec<Symbol> = Clause::input(0, c.clone()).vars().into_iter().collect();
        for vals in index_tuples(model.n, vars.len()) {
            let env: BTreeMap<Symbol, usize> = vars.iter().cloned().zip(vals).collect();
            if model.clause_status(c, &env) == Some(false) {
                return Err(());
            }
        }
    }
    Ok(())
}

/// Model search directly on closed formulas (no function symbols), used to
/// check the clausifier's equisatisfiability independently of it.
pub fn formula_model_search(formulas: &[Formula], max_domain: usize) -> OracleVerdict {
    let mut consts = BTreeSet::new();
    let mut preds = BTreeSet::new();
    fn walk(f: &Formula, consts: &mut BTreeSet<Symbol>, preds: &mut BTreeSet<Symbol>) {
        match f {
            Formula::True | Formula::False => {}
            Formula::Atom(a) => {
                preds.insert(a.predicate.clone());
                for t in &a.args {
                    if let Term::Const(c) = t {
                        consts.insert(c.clone());
                    }
                }
            }
            Formula::Not(g) | Formula::Forall(_, g) | Formula::Exists(_, g) => {
                walk(g, consts, preds)
            }
            Formula::And(gs) | Formula::Or(gs) => {
                for g in gs {
                    walk(g, consts, preds);
                }
            }
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                walk(a, consts, preds);
                walk(b, consts, preds);
            }
        }
    }
    for f in formulas {
        if f.contains_function_symbols() {
            return OracleVerdict::Inconclusive("formula contains function symbols".to_string());
        }
        if !f.free_vars().is_empty() {
            return OracleVerdict::Inconclusive("formula is not closed".to_string());
        }
        walk(f, &mut consts, &mut preds);
    }
    let consts: Vec<Symbol> = consts.into_iter().collect();
    let preds: Vec<Symbol> = preds.into_iter().collect();
    let mut budget = MODEL_SEARCH_NODE_BUDGET;
    for n in 1..=max_domain {
        let mut cells: Vec<Cell> = consts.iter().cloned().map(Cell::Const).collect();
        for p in &preds {
            for t in index_tuples(n, p.arity) {
                cells.push(Cell::Pred(p.clone(), t));
            }
        }
        if cells.len() > 24 {
            return OracleVerdict::Inconclusive("too many cells for formula search".to_string());
        }
        let mut model = Model {
            n,
            consts: BTreeMap::new(),
            funcs: BTreeMap::new(),
            preds: BTreeMap::new(),
        };
        if formula_dfs(&mut model, &cells, 0, formulas, &mut budget) {
            return OracleVerdict::ConfirmedSat;
        }
        if budget == 0 {
            return OracleVerdict::Inconclusive("formula model search budget exhausted".to_string());
        }
    }
    OracleVerdict::Inconclusive(format!("no model with at most {max_domain} elements"))
}

fn formula_dfs(
    model: &mut Model,
    cells: &[Cell],
    idx: usize,
    formulas: &[Formula],
    budget: &mut usize,
) -> bool {
    if *budget == 0 {
        return false;
    }
    *budget -= 1;
    if idx == cells.len() {
        return formulas
            .iter()
            .all(|f| model.eval_formula(f, &mut BTreeMap::new()));
    }
    match &cells[idx] {
        Cell::Const(c) => {
            for v in 0..model.n {
                model.consts.insert(c.clone(), v);
                if formula_dfs(model, cells, idx + 1, formulas, budget) {
                    return true;
                }
            }
            model.consts.remove(c);
        }
        Cell::Pred(p, args) => {
            for v in [true, false] {
                model.preds.insert((p.clone(), args.clone()), v);
                if formula_dfs(model, cells, idx + 1, formulas, budget) {
                    return true;
                }
            }
            model.preds.remove(&(p.clone(), args.clone()));
        }
        Cell::Func(..) => unreachable!("no function cells in formula search"),
    }
    false
}

/// Breadth-first unrestricted binary resolution with factoring. Conclusive
/// in both directions when the step budget suffices.
pub fn naive_resolution(clauses: &[Vec<Literal>], max_steps: usize) -> OracleVerdict {
    let mut kept: Vec<Clause> = Vec::new();
    let mut canon: BTreeSet<Vec<Literal>> = BTreeSet::new();
    let mut counter = 0usize;
    let rename = |lits: &[Literal], tag: &str| -> Vec<Literal> {
        let mut sub = Subst::new();
        for l in lits {
            for x in l.atom.vars() {
                sub.insert_raw(x.clone(), Term::Var(Symbol::var(format!("{tag}{}", x.name))));
            }
        }
        sub.apply_literals(lits)
    };
    let add = |lits: Vec<Literal>, kept: &mut Vec<Clause>, canon: &mut BTreeSet<Vec<Literal>>| -> bool {
        let c = Clause::input(kept.len() as u32, lits);
        if c.is_tautology() {
            return false;
        }
        let key = c.canonical();
        if canon.contains(&key) {
            return false;
        }
        canon.insert(key);
        let empty = c.is_empty();
        kept.push(c);
        empty
    };
    for c in clauses {
        if add(c.clone(), &mut kept, &mut canon) {
            return OracleVerdict::ConfirmedUnsat;
        }
    }
    let mut i = 0usize;
    while i < kept.len() {
        // factoring on clause i
        let c = kept[i].lits.clone();
        for a in 0..c.len() {
            for b in 0..c.len() {
                if a == b || c[a].positive != c[b].positive {
                    continue;
                }
                if let Some(sigma) = mgu(&c[a].atom, &c[b].atom) {
                    counter += 1;
                    if counter > max_steps {
                        return OracleVerdict::Inconclusive("step budget exhausted".to_string());
                    }
                    let lits: Vec<Literal> = c
                        .iter()
                        .enumerate()
                        .filter(|&(k, _)| k != b)
                        .map(|(_, l)| sigma.apply_literal(l))
                        .collect();
                    if add(lits, &mut kept, &mut canon) {
                        return OracleVerdict::ConfirmedUnsat;
                    }
                }
            }
        }
        // resolution of clause i against every earlier clause and itself
        for j in 0..=i {
            let left = kept[i].lits.clone();
            let right = rename(&kept[j].lits, "r_");
            for a in 0..left.len() {
                for b in 0..right.len() {
                    if left[a].positive == right[b].positive {
                        continue;
                    }
                    let Some(sigma) = mgu(&left[a].atom, &right[b].atom) else {
                        continue;
                    };
                    counter += 1;
                    if counter > max_steps {
                        return OracleVerdict::Inconclusive("step budget exhausted".to_string());
                    }
                    let mut lits: Vec<Literal> = left
                        .iter()
                        .enumerate()
                        .filter(|&(k, _)| k != a)
                        .map(|(_, l)| sigma.apply_literal(l))
                        .collect();
                    lits.extend(
                        right
                            .iter()
                            .enumerate()
                            .filter(|&(k, _)| k != b)
                            .map(|(_, l)| sigma.apply_literal(l)),
                    );
                    if add(lits, &mut kept, &mut canon) {
                        return OracleVerdict::ConfirmedUnsat;
                    }
                }
            }
        }
        i += 1;
    }
    OracleVerdict::ConfirmedSat
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse_clause_text, parse_formula};

    fn cs(texts: &[&str]) -> Vec<Vec<Literal>> {
        texts.iter().map(|t| parse_clause_text(t).unwrap()).collect()
    }

    #[test]
    fn forward_chain_finds_contradiction() {
        let clauses = cs(&["p(a)", "~p(X) | q(X)", "~q(X)"]);
        assert_eq!(forward_chain(&clauses, 2), OracleVerdict::ConfirmedUnsat);
    }

    #[test]
    fn forward_chain_needs_depth_for_skolem_terms() {
        // instantiation only ranges over terms up to the depth bound, so
        // the three-step chain needs depth two
        let clauses = cs(&["r(a)", "~r(X) | r(f(X))", "~r(f(f(f(a))))"]);
        assert!(matches!(forward_chain(&clauses, 1), OracleVerdict::Inconclusive(_)));
        assert_eq!(forward_chain(&clauses, 2), OracleVerdict::ConfirmedUnsat);
    }

    #[test]
    fn forward_chain_rejects_non_horn() {
        let clauses = cs(&["p(a) | q(a)"]);
        assert!(matches!(forward_chain(&clauses, 2), OracleVerdict::Inconclusive(_)));
    }

    #[test]
    fn forward_chain_sat_is_unknown() {
        let clauses = cs(&["p(a)", "~p(X) | q(X)"]);
        assert!(matches!(forward_chain(&clauses, 2), OracleVerdict::Inconclusive(_)));
    }

    #[test]
    fn model_search_finds_small_models() {
        let clauses = cs(&["p(a)", "~p(X) | q(X)"]);
        assert_eq!(finite_model_search(&clauses, 2), OracleVerdict::ConfirmedSat);
        // requires two elements
        let clauses = cs(&["p(a)", "~p(b)"]);
        let m = find_model(&clauses, 3).unwrap().unwrap();
        assert_eq!(m.n, 2);
    }

    #[test]
    fn model_search_example2_clauses() {
        let clauses = cs(&[
            "r(sk1,sk2)",
            "q(sk2)",
            "def1(sk1,sk2)",
            "~def1(X,Y) | ~r(X,Z) | ~r(Z,Y) | p(sk3(X,Y,Z),Y)",
        ]);
        assert_eq!(finite_model_search(&clauses, 2), OracleVerdict::ConfirmedSat);
    }

    #[test]
    fn model_search_unsat_stays_unknown() {
        let clauses = cs(&["p(a)", "~p(X)"]);
        assert!(matches!(finite_model_search(&clauses, 3), OracleVerdict::Inconclusive(_)));
    }

    #[test]
    fn formula_search_examples() {
        let sat = parse_formula("exists [X] (p(X) & ~q(X))").unwrap();
        assert_eq!(formula_model_search(&[sat], 2), OracleVerdict::ConfirmedSat);
        let unsat = parse_formula("p(a) & forall [X] (p(X) -> ~p(X))").unwrap();
        assert!(matches!(
            formula_model_search(&[unsat], 3),
            OracleVerdict::Inconclusive(_)
        ));
    }

    #[test]
    fn naive_resolution_both_directions() {
        let unsat = cs(&["~a1(X,Y) | ~a2(Y,Z)", "a1(f(U,V),U) | ~g1(U,V)", "a2(c,d)", "g1(c,e)"]);
        assert_eq!(naive_resolution(&unsat, 50_000), OracleVerdict::ConfirmedUnsat);
        let sat = cs(&["p(a)", "~p(X) | q(X)"]);
        assert_eq!(naive_resolution(&sat, 50_000), OracleVerdict::ConfirmedSat);
    }

    #[test]
    fn naive_resolution_budget() {
        // a growing chain never terminates; the budget must trip
        let clauses = cs(&["p(a)", "~p(X) | p(f(X))", "~p(X) | p(g(X))"]);
        assert!(matches!(
            naive_resolution(&clauses, 200),
            OracleVerdict::Inconclusive(_)
        ));
    }
}
