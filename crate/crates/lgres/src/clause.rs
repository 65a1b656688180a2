//! Clauses and the syntactic predicates driving the calculus: flat/simple,
//! weakly covering, chained variables, condensation, variant detection,
//! Horn/query recognition and the loosely-guarded-clause check.

use std::collections::BTreeSet;
use std::fmt;

use crate::term::{Literal, Subst, Symbol, Term};
use crate::unify::match_atom;

/// Where a clause came from; inference details live in the saturation
/// state's records, keyed by record index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    Input,
    Inference(usize),
}

/// A clause is a multiset of literals. The empty clause is falsum.
/// Variables are local to the clause; the saturation state standardizes
/// clauses apart at creation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Clause {
    pub id: u32,
    pub lits: Vec<Literal>,
    pub provenance: Provenance,
}

impl Clause {
    pub fn input(id: u32, lits: Vec<Literal>) -> Clause {
        Clause { id, lits, provenance: Provenance::Input }
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn vars(&self) -> BTreeSet<Symbol> {
        let mut s = BTreeSet::new();
        for l in &self.lits {
            l.atom.collect_vars(&mut s);
        }
        s
    }

    pub fn is_ground(&self) -> bool {
        self.lits.iter().all(Literal::is_ground)
    }

    pub fn max_vdp(&self) -> i32 {
        self.lits.iter().map(|l| l.atom.max_vdp()).max().unwrap_or(-1)
    }

    pub fn is_flat(&self) -> bool {
        self.max_vdp() <= 0
    }

    pub fn is_simple(&self) -> bool {
        self.max_vdp() <= 1
    }

    pub fn weight(&self) -> usize {
        self.lits.iter().map(|l| l.atom.size()).sum()
    }

    /// Every term is ground, a variable, or a weakly covering term t with
    /// var(t) = var(C).
    pub fn is_weakly_covering(&self) -> bool {
        let whole = self.vars();
        self.lits.iter().all(|l| {
            l.atom.args.iter().all(|t| match t {
                Term::Var(_) => true,
                _ if t.is_ground() => true,
                _ => t.is_weakly_covering() && t.vars() == whole,
            })
        })
    }

    /// At most one positive literal.
    pub fn is_horn(&self) -> bool {
        self.lits.iter().filter(|l| l.positive).count() <= 1
    }

    /// All literals negative and no compound terms at all.
    pub fn is_query_clause(&self) -> bool {
        self.lits
            .iter()
            .all(|l| !l.positive && !l.atom.has_compound())
    }

    pub fn is_tautology(&self) -> bool {
        self.lits.iter().any(|l| {
            l.positive && self.lits.iter().any(|m| !m.positive && m.atom == l.atom)
        })
    }

    /// Condensation: the minimal sub-multiset the clause maps onto under
    /// some substitution. Drops one literal at a time until fixpoint.
    pub fn condense(&self) -> Clause {
        let mut lits = self.lits.clone();
        'outer: loop {
            for drop in 0..lits.len() {
                let candidate: Vec<Literal> = lits
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != drop)
                    .map(|(_, l)| l.clone())
                    .collect();
                if maps_onto(&lits, &candidate) {
                    lits = candidate;
                    continue 'outer;
                }
            }
            break;
        }
        Clause { id: self.id, lits, provenance: self.provenance.clone() }
    }

    /// Variant check: equal up to a renaming of variables.
    pub fn is_variant(&self, other: &Clause) -> bool {
        self.canonical() == other.canonical()
    }

    /// A canonical form stable under variable renaming. Literals are
    /// sorted by a variable-blind key; within tied groups we try the
    /// possible literal permutations (capped) and keep the least renamed
    /// clause, so variants normalize to the same value.
    pub fn canonical(&self) -> Vec<Literal> {
        let n = self.lits.len();
        let mut order: Vec<usize> = (0..n).collect();
        let keys: Vec<String> = self.lits.iter().map(blind_key).collect();
        order.sort_by(|&a, &b| keys[a].cmp(&keys[b]).then(self.lits[a].cmp(&self.lits[b])));

        // group indices with equal blind keys
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for &i in &order {
            match groups.last_mut() {
                Some(g) if keys[g[0]] == keys[i] => g.push(i),
                _ => groups.push(vec![i]),
            }
        }

        let mut best: Option<Vec<Literal>> = None;
        let mut budget = 1024usize;
        permute_groups(&groups, 0, &mut Vec::new(), &mut budget, &mut |arrangement| {
            let renamed = rename_first_occurrence(&self.lits, arrangement);
            if best.as_ref().map_or(true, |b| renamed < *b) {
                best = Some(renamed);
            }
        });
        best.unwrap_or_default()
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", render_literals(&self.lits))
    }
}

/// Render a literal sequence with display variable names X, Y, Z, U, V, W,
/// X1, Y1, ... assigned in first-occurrence order. The empty clause renders
/// as "$false".
pub fn render_literals(lits: &[Literal]) -> String {
    if lits.is_empty() {
        return "$false".to_string();
    }
    let mut names: Vec<Symbol> = Vec::new();
    for l in lits {
        collect_vars_in_order(&l.atom.args, &mut names);
    }
    let mut sub = Subst::new();
    for (i, x) in names.iter().enumerate() {
        sub.insert_raw(x.clone(), Term::Var(Symbol::var(display_var_name(i))));
    }
    lits.iter()
        .map(|l| sub.apply_literal(l).to_string())
        .collect::<Vec<_>>()
        .join(" | ")
}

fn display_var_name(i: usize) -> String {
    const BASE: [&str; 6] = ["X", "Y", "Z", "U", "V", "W"];
    if i < 6 {
        BASE[i].to_string()
    } else {
        format!("{}{}", BASE[i % 6], i / 6)
    }
}

fn collect_vars_in_order(args: &[Term], out: &mut Vec<Symbol>) {
    for t in args {
        match t {
            Term::Var(x) => {
                if !out.contains(x) {
                    out.push(x.clone());
                }
            }
            Term::Const(_) => {}
            Term::Compound(_, inner) => collect_vars_in_order(inner, out),
        }
    }
}

/// Is there a substitution mapping every literal of `from` into the
/// multiset `onto`? Backtracking over target choices; `onto` is untouched
/// by the substitution (its variables act as constants, which is the
/// condensation setting where onto is a subset of from).
fn maps_onto(from: &[Literal], onto: &[Literal]) -> bool {
    fn go(from: &[Literal], onto: &[Literal], k: usize, sub: &Subst) -> bool {
        if k == from.len() {
            return true;
        }
        let l = &from[k];
        for target in onto {
            if target.positive != l.positive {
                continue;
            }
            let mut trial = sub.clone();
            if match_atom(&l.atom, &target.atom, &mut trial) && go(from, onto, k + 1, &trial) {
                return true;
            }
        }
        false
    }
    go(from, onto, 0, &Subst::new())
}

fn blind_key(l: &Literal) -> String {
    fn term_key(t: &Term, out: &mut String) {
        match t {
            Term::Var(_) => out.push('*'),
            Term::Const(c) => out.push_str(&c.name),
            Term::Compound(f, args) => {
                out.push_str(&f.name);
                out.push('(');
                for a in args {
                    term_key(a, out);
                    out.push(',');
                }
                out.push(')');
            }
        }
    }
    let mut s = String::new();
    s.push(if l.positive { 'p' } else { 'n' });
    s.push_str(&l.atom.predicate.name);
    s.push('/');
    s.push_str(&l.atom.predicate.arity.to_string());
    for a in &l.atom.args {
        s.push(' ');
        term_key(a, &mut s);
    }
    s
}

fn permute_groups(
    groups: &[Vec<usize>],
    g: usize,
    prefix: &mut Vec<usize>,
    budget: &mut usize,
    visit: &mut dyn FnMut(&[usize]),
) {
    if *budget == 0 {
        return;
    }
    if g == groups.len() {
        *budget -= 1;
        visit(prefix);
        return;
    }
    let group = &groups[g];
    if group.len() == 1 {
        prefix.push(group[0]);
        permute_groups(groups, g + 1, prefix, budget, visit);
        prefix.pop();
        return;
    }
    let mut perm = group.clone();
    permute(&mut perm, 0, &mut |p| {
        if *budget == 0 {
            return;
        }
        let len = prefix.len();
        prefix.extend_from_slice(p);
        permute_groups(groups, g + 1, prefix, budget, visit);
        prefix.truncate(len);
    });
}

fn permute(items: &mut [usize], k: usize, visit: &mut dyn FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, visit);
        items.swap(k, i);
    }
}

fn rename_first_occurrence(lits: &[Literal], arrangement: &[usize]) -> Vec<Literal> {
    let mut names: Vec<Symbol> = Vec::new();
    for &i in arrangement {
        collect_vars_in_order(&lits[i].atom.args, &mut names);
    }
    let mut sub = Subst::new();
    for (i, x) in names.iter().enumerate() {
        sub.insert_raw(x.clone(), Term::Var(Symbol::var(format!("_v{i}"))));
    }
    arrangement
        .iter()
        .map(|&i| sub.apply_literal(&lits[i]))
        .collect()
}

/// Chained variables of a sequence of flat negative literals: variables x
/// occurring in two literals Ai, Aj with var(Ai) and var(Aj) mutually
/// non-inclusive. Everything else is isolated.
pub fn chained_variables(lits: &[Literal]) -> Result<BTreeSet<Symbol>, String> {
    for l in lits {
        if !l.is_flat() {
            return Err(format!("literal {l} is not flat"));
        }
    }
    let varsets: Vec<BTreeSet<Symbol>> = lits.iter().map(|l| l.atom.vars()).collect();
    let mut chained = BTreeSet::new();
    for i in 0..lits.len() {
        for j in i + 1..lits.len() {
            let (vi, vj) = (&varsets[i], &varsets[j]);
            if !vi.is_subset(vj) && !vj.is_subset(vi) {
                for x in vi.intersection(vj) {
                    chained.insert(x.clone());
                }
            }
        }
    }
    Ok(chained)
}

/// Result of the loosely-guarded-clause check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LgcCheck {
    /// Every ground clause is an LGC.
    Ground,
    /// Guard set witnessing the co-occurrence condition.
    Guarded(Vec<Literal>),
    NotLgc(String),
}

impl LgcCheck {
    pub fn is_lgc(&self) -> bool {
        !matches!(self, LgcCheck::NotLgc(_))
    }
}

/// Loosely guarded clause check. The candidate guard set is the set of all
/// flat negative literals: if any guard set covers all variable pairs, the
/// maximal one does.
pub fn check_lgc(c: &Clause) -> LgcCheck {
    if c.is_ground() {
        return LgcCheck::Ground;
    }
    if !c.is_simple() {
        return LgcCheck::NotLgc("not simple".to_string());
    }
    if !c.is_weakly_covering() {
        return LgcCheck::NotLgc("not weakly covering".to_string());
    }
    let guards: Vec<Literal> = c
        .lits
        .iter()
        .filter(|l| !l.positive && l.is_flat())
        .cloned()
        .collect();
    let guard_vars: Vec<BTreeSet<Symbol>> = guards.iter().map(|g| g.atom.vars()).collect();
    let vars: Vec<Symbol> = c.vars().into_iter().collect();
    for i in 0..vars.len() {
        for j in i + 1..vars.len() {
            let covered = guard_vars
                .iter()
                .any(|gv| gv.contains(&vars[i]) && gv.contains(&vars[j]));
            if !covered {
                return LgcCheck::NotLgc(format!(
                    "variables {} and {} do not co-occur in any guard",
                    vars[i].name, vars[j].name
                ));
            }
        }
    }
    LgcCheck::Guarded(guards)
}
