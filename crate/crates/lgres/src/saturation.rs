//! Given-clause saturation with ordered resolution, ordered factoring and
//! top-variable resolution.
//!
//! Clauses move from a usable (passive) queue into the worked-off (active)
//! set; inferences always involve the clause being activated. New clauses
//! are condensed, checked against tautology and variant deletion, and
//! standardized apart before they are kept.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::time::Instant;

use crate::clause::{check_lgc, Clause, Provenance};
use crate::ordering::{
    is_maximal_at, is_strictly_maximal_at, maximal_in, strictly_maximal_in, Precedence,
};
use crate::refine::{build_query_pair, select_literals, variable_ordering, Selection};
use crate::term::{Literal, Subst, Symbol, Term};
use crate::unify::{mgu, simultaneous_mgu};

#[derive(Clone, Copy, Debug)]
pub struct Limits {
    pub max_clauses: usize,
    pub max_seconds: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_clauses: 100_000, max_seconds: 60 }
    }
}

/// What the engine is entitled to assume about clauses descending from a
/// query clause, for invariant checking and for the dynamic support check
/// in the restricted mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LineageExpectation {
    /// No structural expectation on derived clauses.
    None,
    /// Horn input: conclusions with query lineage must again be query
    /// clauses with a bounded number of variables.
    HornQuery,
    /// Non-Horn input: conclusions with query lineage must be loosely
    /// guarded clauses or query clauses; anything else is unsupported.
    Restricted,
}

#[derive(Clone, Debug)]
pub struct Options {
    pub limits: Limits,
    pub assert_invariants: bool,
    pub lineage: LineageExpectation,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            limits: Limits::default(),
            assert_invariants: false,
            lineage: LineageExpectation::None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rule {
    OrderedFactoring,
    OrderedResolution,
    TopResolution,
}

impl Rule {
    fn name(self) -> &'static str {
        match self {
            Rule::OrderedFactoring => "factoring",
            Rule::OrderedResolution => "resolution",
            Rule::TopResolution => "top-resolution",
        }
    }
}

/// One kept inference: premise clause ids with the literal positions used,
/// the unifier applied, and the id of the conclusion.
#[derive(Clone, Debug)]
pub struct InferenceRecord {
    pub rule: Rule,
    pub premises: Vec<(u32, Vec<usize>)>,
    pub unifier: Subst,
    pub conclusion: u32,
}

#[derive(Clone, Debug)]
pub struct ProofStep {
    pub id: u32,
    pub clause: String,
    pub justification: String,
}

#[derive(Clone, Debug)]
pub struct ProofTrace {
    pub steps: Vec<ProofStep>,
}

impl fmt::Display for ProofTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            writeln!(f, "{}. {} [{}]", s.id, s.clause, s.justification)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub enum Verdict {
    Unsatisfiable(ProofTrace),
    Satisfiable { kept: Vec<Clause> },
    /// A limit was hit before saturation; the set may still be either.
    ResourceOut(String),
    /// The dynamic support check failed: a query-descendant left the
    /// supported clause classes.
    Unsupported(String),
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Stats {
    pub generated: usize,
    pub kept: usize,
    pub deleted_tautologies: usize,
    pub deleted_variants: usize,
    pub condensed: usize,
    pub factoring_count: usize,
    pub resolution_count: usize,
    pub top_resolution_count: usize,
    pub max_vdp: i32,
}

pub struct Engine {
    opts: Options,
    prec: Precedence,
    usable: Vec<Clause>,
    worked: Vec<Clause>,
    clauses: BTreeMap<u32, Clause>,
    records: BTreeMap<u32, InferenceRecord>,
    canon: BTreeSet<Vec<Literal>>,
    query_lineage: BTreeSet<u32>,
    next_id: u32,
    var_counter: usize,
    pick_counter: usize,
    stats: Stats,
    /// Largest input clause variable count, the bound for the Horn-mode
    /// lineage invariant.
    input_var_bound: usize,
    /// All non-query inputs were loosely guarded clauses, so the closure
    /// invariants are in force.
    all_inputs_lgc: bool,
    unsupported: Option<String>,
    overflow: Option<String>,
}

const RES_TOP_TUPLE_BUDGET: usize = 200_000;

impl Engine {
    pub fn new(opts: Options) -> Engine {
        Engine {
            opts,
            prec: Precedence,
            usable: Vec::new(),
            worked: Vec::new(),
            clauses: BTreeMap::new(),
            records: BTreeMap::new(),
            canon: BTreeSet::new(),
            query_lineage: BTreeSet::new(),
            next_id: 1,
            var_counter: 0,
            pick_counter: 0,
            stats: Stats::default(),
            input_var_bound: 0,
            all_inputs_lgc: true,
            unsupported: None,
            overflow: None,
        }
    }

    pub fn stats(&self) -> Stats {
        self.stats
    }

    pub fn clause(&self, id: u32) -> Option<&Clause> {
        self.clauses.get(&id)
    }

    pub fn records(&self) -> impl Iterator<Item = &InferenceRecord> {
        self.records.values()
    }

    pub fn add_input(&mut self, lits: Vec<Literal>, query_lineage: bool) {
        let probe = Clause::input(0, lits.clone());
        self.input_var_bound = self.input_var_bound.max(probe.vars().len());
        if !query_lineage && !check_lgc(&probe).is_lgc() {
            self.all_inputs_lgc = false;
        }
        self.keep(lits, None, query_lineage);
    }

    fn fresh_renaming(&mut self, lits: &[Literal]) -> Subst {
        let mut vars: Vec<Symbol> = Vec::new();
        for l in lits {
            for x in l.atom.vars() {
                if !vars.contains(&x) {
                    vars.push(x);
                }
            }
        }
        let mut sub = Subst::new();
        for x in vars {
            self.var_counter += 1;
            sub.insert_raw(x, Term::Var(Symbol::var(format!("V{}", self.var_counter))));
        }
        sub
    }

    fn rename_apart(&mut self, lits: &[Literal]) -> Vec<Literal> {
        let sub = self.fresh_renaming(lits);
        sub.apply_literals(lits)
    }

    /// Condense, filter, standardize apart and store a clause. Returns the
    /// id if kept.
    fn keep(
        &mut self,
        lits: Vec<Literal>,
        record: Option<InferenceRecord>,
        query_lineage: bool,
    ) -> Option<u32> {
        self.stats.generated += 1;
        let raw = Clause { id: 0, lits, provenance: Provenance::Input };
        let condensed = raw.condense();
        if condensed.lits.len() < raw.lits.len() {
            self.stats.condensed += 1;
        }
        if condensed.is_tautology() {
            self.stats.deleted_tautologies += 1;
            return None;
        }
        let canonical = condensed.canonical();
        if self.canon.contains(&canonical) {
            self.stats.deleted_variants += 1;
            return None;
        }
        let lits = self.rename_apart(&condensed.lits);
        let id = self.next_id;
        self.next_id += 1;
        let provenance = if record.is_some() {
            Provenance::Inference(id as usize)
        } else {
            Provenance::Input
        };
        let clause = Clause { id, lits, provenance };
        self.stats.kept += 1;
        self.stats.max_vdp = self.stats.max_vdp.max(clause.max_vdp());
        self.canon.insert(canonical);
        if query_lineage {
            self.query_lineage.insert(id);
        }
        if let Some(mut r) = record {
            r.conclusion = id;
            self.records.insert(id, r);
        }
        self.check_kept_invariants(&clause, query_lineage);
        self.clauses.insert(id, clause.clone());
        self.usable.push(clause);
        Some(id)
    }

    fn check_kept_invariants(&mut self, c: &Clause, query_lineage: bool) {
        if query_lineage {
            match self.opts.lineage {
                LineageExpectation::HornQuery => {
                    let ok = c.is_query_clause() && c.vars().len() <= self.input_var_bound;
                    if self.opts.assert_invariants {
                        assert!(
                            ok,
                            "query-descendant clause {} is not a bounded query clause",
                            c
                        );
                    }
                    if !ok && self.unsupported.is_none() {
                        self.unsupported =
                            Some(format!("query descendant left the query clause class: {c}"));
                    }
                }
                LineageExpectation::Restricted => {
                    let ok = c.is_query_clause() || check_lgc(c).is_lgc();
                    if !ok && self.unsupported.is_none() {
                        self.unsupported = Some(format!(
                            "query descendant is neither loosely guarded nor a query clause: {c}"
                        ));
                    }
                }
                LineageExpectation::None => {}
            }
        } else if self.opts.assert_invariants && self.all_inputs_lgc {
            // theory-side closure: conclusions stay loosely guarded with a
            // bounded number of variables
            assert!(
                check_lgc(c).is_lgc(),
                "theory-side clause {} is not loosely guarded",
                c
            );
            assert!(
                c.vars().len() <= self.input_var_bound,
                "clause {} exceeds the input variable bound {}",
                c,
                self.input_var_bound
            );
        }
        if self.opts.assert_invariants {
            assert!(c.is_simple(), "kept clause {} is not simple", c);
        }
    }

    fn is_lineage(&self, id: u32) -> bool {
        self.query_lineage.contains(&id)
    }

    /// 1-in-5 picks take the oldest usable clause, the rest the lightest.
    fn pick_given(&mut self) -> Clause {
        self.pick_counter += 1;
        let idx = if self.pick_counter % 5 == 1 {
            self.usable
                .iter()
                .enumerate()
                .min_by_key(|(_, c)| c.id)
                .map(|(i, _)| i)
                .unwrap()
        } else {
            self.usable
                .iter()
                .enumerate()
                .min_by_key(|(_, c)| (c.weight(), c.id))
                .map(|(i, _)| i)
                .unwrap()
        };
        self.usable.remove(idx)
    }

    pub fn saturate(&mut self) -> Verdict {
        let start = Instant::now();
        // an input empty clause is already a refutation
        if let Some(c) = self.clauses.values().find(|c| c.is_empty()) {
            let id = c.id;
            return Verdict::Unsatisfiable(self.trace(id));
        }
        loop {
            if self.usable.is_empty() {
                return Verdict::Satisfiable { kept: self.worked.clone() };
            }
            if self.stats.kept > self.opts.limits.max_clauses {
                return Verdict::ResourceOut(format!(
                    "clause limit {} exceeded",
                    self.opts.limits.max_clauses
                ));
            }
            if start.elapsed().as_secs() >= self.opts.limits.max_seconds {
                return Verdict::ResourceOut(format!(
                    "time limit {}s exceeded",
                    self.opts.limits.max_seconds
                ));
            }
            let given = self.pick_given();
            self.worked.push(given.clone());
            if let Some(empty) = self.infer_with(&given) {
                return Verdict::Unsatisfiable(self.trace(empty));
            }
            if let Some(msg) = self.unsupported.take() {
                return Verdict::Unsupported(msg);
            }
            if let Some(msg) = self.overflow.take() {
                return Verdict::ResourceOut(msg);
            }
        }
    }

    /// All inferences involving the given clause. Returns the id of an
    /// empty clause if one is derived.
    fn infer_with(&mut self, given: &Clause) -> Option<u32> {
        let mut empty = None;
        let mut note = |id: Option<u32>, engine: &Engine| {
            if let Some(id) = id {
                if engine.clauses[&id].is_empty() && empty.is_none() {
                    empty = Some(id);
                }
            }
        };

        for (lits, record, lineage) in self.factoring_inferences(given) {
            let id = self.keep(lits, Some(record), lineage);
            note(id, self);
        }
        for (lits, record, lineage) in self.binary_inferences(given) {
            let id = self.keep(lits, Some(record), lineage);
            note(id, self);
        }
        for (lits, record, lineage) in self.res_top_inferences(given) {
            let id = self.keep(lits, Some(record), lineage);
            note(id, self);
        }
        empty
    }

    fn factoring_inferences(
        &mut self,
        c: &Clause,
    ) -> Vec<(Vec<Literal>, InferenceRecord, bool)> {
        let mut out = Vec::new();
        // factoring requires nothing selected
        match select_literals(c, &self.prec) {
            Selection::NegativeCompound(_) | Selection::TopVariable(_) => return out,
            Selection::Maximality(_) => {}
        }
        for i in 0..c.lits.len() {
            if !c.lits[i].positive || !is_maximal_at(&self.prec, c, i) {
                continue;
            }
            for j in 0..c.lits.len() {
                if i == j || !c.lits[j].positive {
                    continue;
                }
                let Some(sigma) = mgu(&c.lits[i].atom, &c.lits[j].atom) else {
                    continue;
                };
                let remainder: Vec<Literal> = c
                    .lits
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != i && k != j)
                    .map(|(_, l)| sigma.apply_literal(l))
                    .collect();
                let factor = sigma.apply_literal(&c.lits[i]);
                if !maximal_in(&self.prec, &factor, &remainder) {
                    continue;
                }
                let mut lits = vec![factor];
                lits.extend(remainder);
                self.stats.factoring_count += 1;
                out.push((
                    lits,
                    InferenceRecord {
                        rule: Rule::OrderedFactoring,
                        premises: vec![(c.id, vec![i, j])],
                        unifier: sigma,
                        conclusion: 0,
                    },
                    self.is_lineage(c.id),
                ));
            }
        }
        out
    }

    fn binary_inferences(
        &mut self,
        given: &Clause,
    ) -> Vec<(Vec<Literal>, InferenceRecord, bool)> {
        let mut out = Vec::new();
        let worked = self.worked.clone();
        for w in &worked {
            self.binary_between(given, w, &mut out);
            if w.id != given.id {
                self.binary_between(w, given, &mut out);
            }
        }
        out
    }

    /// Ordered resolution with `main` contributing the negative literal.
    fn binary_between(
        &mut self,
        main: &Clause,
        side: &Clause,
        out: &mut Vec<(Vec<Literal>, InferenceRecord, bool)>,
    ) {
        let main_candidates: Vec<(usize, bool)> = match select_literals(main, &self.prec) {
            // the selected literal resolves without a maximality obligation
            Selection::NegativeCompound(i) => vec![(i, false)],
            Selection::Maximality(_) => (0..main.lits.len())
                .filter(|&i| !main.lits[i].positive && is_maximal_at(&self.prec, main, i))
                .map(|i| (i, true))
                .collect(),
            // flat negative literals only resolve through top-variable
            // resolution
            Selection::TopVariable(_) => return,
        };
        if main_candidates.is_empty() {
            return;
        }
        // a side premise must have nothing selected
        if !matches!(select_literals(side, &self.prec), Selection::Maximality(_)) {
            return;
        }
        for (i, check_main) in main_candidates {
            for j in 0..side.lits.len() {
                if !side.lits[j].positive
                    || side.lits[j].atom.predicate != main.lits[i].atom.predicate
                    || !is_strictly_maximal_at(&self.prec, side, j)
                {
                    continue;
                }
                let renamed = self.rename_apart(&side.lits);
                let Some(sigma) = mgu(&main.lits[i].atom, &renamed[j].atom) else {
                    continue;
                };
                let main_rest: Vec<Literal> = main
                    .lits
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != i)
                    .map(|(_, l)| sigma.apply_literal(l))
                    .collect();
                let side_rest: Vec<Literal> = renamed
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != j)
                    .map(|(_, l)| sigma.apply_literal(l))
                    .collect();
                if check_main {
                    let lit = sigma.apply_literal(&main.lits[i]);
                    if !maximal_in(&self.prec, &lit, &main_rest) {
                        continue;
                    }
                }
                let side_lit = sigma.apply_literal(&renamed[j]);
                if !strictly_maximal_in(&self.prec, &side_lit, &side_rest) {
                    continue;
                }
                let mut lits = main_rest;
                lits.extend(side_rest);
                self.stats.resolution_count += 1;
                out.push((
                    lits,
                    InferenceRecord {
                        rule: Rule::OrderedResolution,
                        premises: vec![(main.id, vec![i]), (side.id, vec![j])],
                        unifier: sigma,
                        conclusion: 0,
                    },
                    self.is_lineage(main.id) || self.is_lineage(side.id),
                ));
            }
        }
    }

    fn res_top_inferences(
        &mut self,
        given: &Clause,
    ) -> Vec<(Vec<Literal>, InferenceRecord, bool)> {
        let mut out = Vec::new();
        let worked = self.worked.clone();
        for main in &worked {
            let Selection::TopVariable(positions) = select_literals(main, &self.prec) else {
                continue;
            };
            self.res_top_for_main(main, &positions, given.id, &worked, &mut out);
        }
        out
    }

    fn res_top_for_main(
        &mut self,
        main: &Clause,
        positions: &[usize],
        given_id: u32,
        worked: &[Clause],
        out: &mut Vec<(Vec<Literal>, InferenceRecord, bool)>,
    ) {
        // per-slot candidate partners: eligible strictly maximal positive
        // literals with the right predicate
        let mut candidates: Vec<Vec<(u32, usize)>> = Vec::with_capacity(positions.len());
        for &p in positions {
            let pred = &main.lits[p].atom.predicate;
            let mut slot = Vec::new();
            for w in worked {
                // a side premise must have nothing selected
                if !matches!(select_literals(w, &self.prec), Selection::Maximality(_)) {
                    continue;
                }
                for j in 0..w.lits.len() {
                    if w.lits[j].positive
                        && w.lits[j].atom.predicate == *pred
                        && is_strictly_maximal_at(&self.prec, w, j)
                    {
                        slot.push((w.id, j));
                    }
                }
            }
            if slot.is_empty() {
                return;
            }
            candidates.push(slot);
        }

        let mut budget = RES_TOP_TUPLE_BUDGET;
        let mut tuple: Vec<(u32, usize, Vec<Literal>)> = Vec::new();
        self.res_top_dfs(main, positions, given_id, &candidates, &mut tuple, &mut budget, out);
        if budget == 0 && self.overflow.is_none() {
            self.overflow = Some(format!(
                "top-variable partner enumeration exceeded {RES_TOP_TUPLE_BUDGET} tuples for {main}"
            ));
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn res_top_dfs(
        &mut self,
        main: &Clause,
        positions: &[usize],
        given_id: u32,
        candidates: &[Vec<(u32, usize)>],
        tuple: &mut Vec<(u32, usize, Vec<Literal>)>,
        budget: &mut usize,
        out: &mut Vec<(Vec<Literal>, InferenceRecord, bool)>,
    ) {
        if *budget == 0 {
            return;
        }
        let slot = tuple.len();
        if slot == positions.len() {
            *budget -= 1;
            self.res_top_conclude(main, positions, given_id, tuple, out);
            return;
        }
        for &(id, j) in &candidates[slot] {
            let lits = self.clauses[&id].lits.clone();
            let renamed = self.rename_apart(&lits);
            tuple.push((id, j, renamed));
            // prune: the partial pair set must stay unifiable
            let pairs: Vec<_> = tuple
                .iter()
                .enumerate()
                .map(|(k, (_, jj, rl))| (&main.lits[positions[k]].atom, &rl[*jj].atom))
                .collect();
            if simultaneous_mgu(pairs).is_some() {
                self.res_top_dfs(main, positions, given_id, candidates, tuple, budget, out);
            }
            tuple.pop();
        }
    }

    fn res_top_conclude(
        &mut self,
        main: &Clause,
        positions: &[usize],
        given_id: u32,
        tuple: &[(u32, usize, Vec<Literal>)],
        out: &mut Vec<(Vec<Literal>, InferenceRecord, bool)>,
    ) {
        // the activated clause must take part
        if main.id != given_id && tuple.iter().all(|(id, _, _)| *id != given_id) {
            return;
        }
        let left: Vec<_> = positions.iter().map(|&p| main.lits[p].atom.clone()).collect();
        let right: Vec<_> = tuple
            .iter()
            .map(|(_, j, rl)| rl[*j].atom.clone())
            .collect();
        let Ok(pair) = build_query_pair(left, right) else {
            return;
        };
        let report = variable_ordering(&pair);
        let top_slots: Vec<usize> = report.top_indices.clone();
        let top_pairs: Vec<_> = top_slots
            .iter()
            .map(|&k| (&pair.left[k], &pair.right[k]))
            .collect();
        let Some(sigma) = simultaneous_mgu(top_pairs) else {
            return;
        };
        // partner literals must stay strictly maximal after instantiation
        for &k in &top_slots {
            let (_, j, renamed) = &tuple[k];
            let rest: Vec<Literal> = renamed
                .iter()
                .enumerate()
                .filter(|&(m, _)| m != *j)
                .map(|(_, l)| sigma.apply_literal(l))
                .collect();
            let lit = sigma.apply_literal(&renamed[*j]);
            if !strictly_maximal_in(&self.prec, &lit, &rest) {
                return;
            }
        }
        let top_positions: BTreeSet<usize> =
            top_slots.iter().map(|&k| positions[k]).collect();
        let mut lits: Vec<Literal> = Vec::new();
        for &k in &top_slots {
            let (_, j, renamed) = &tuple[k];
            for (m, l) in renamed.iter().enumerate() {
                if m != *j {
                    lits.push(sigma.apply_literal(l));
                }
            }
        }
        for (p, l) in main.lits.iter().enumerate() {
            if !top_positions.contains(&p) {
                lits.push(sigma.apply_literal(l));
            }
        }
        let mut premises = vec![(main.id, top_positions.iter().copied().collect::<Vec<_>>())];
        let mut lineage = self.is_lineage(main.id);
        for &k in &top_slots {
            let (id, j, _) = &tuple[k];
            premises.push((*id, vec![*j]));
            lineage = lineage || self.is_lineage(*id);
        }
        self.stats.top_resolution_count += 1;
        out.push((
            lits,
            InferenceRecord {
                rule: Rule::TopResolution,
                premises,
                unifier: sigma,
                conclusion: 0,
            },
            lineage,
        ));
    }

    /// Proof trace for a derived clause: the sub-derivation reaching it,
    /// in clause id order.
    pub fn trace(&self, id: u32) -> ProofTrace {
        let mut needed = BTreeSet::new();
        let mut stack = vec![id];
        while let Some(c) = stack.pop() {
            if !needed.insert(c) {
                continue;
            }
            if let Some(r) = self.records.get(&c) {
                for (p, _) in &r.premises {
                    stack.push(*p);
                }
            }
        }
        let steps = needed
            .iter()
            .map(|&c| {
                let clause = &self.clauses[&c];
                let justification = match self.records.get(&c) {
                    None => "input".to_string(),
                    Some(r) => {
                        let ids: Vec<String> =
                            r.premises.iter().map(|(p, _)| p.to_string()).collect();
                        format!("{}, {}, {}", r.rule.name(), ids.join(" "), r.unifier)
                    }
                };
                ProofStep { id: c, clause: clause.to_string(), justification }
            })
            .collect();
        ProofTrace { steps }
    }

    /// Replay every recorded inference from its stored premises and check
    /// the conclusion is reproduced up to condensation and renaming.
    pub fn verify_records(&self) -> Result<(), String> {
        for r in self.records.values() {
            let conclusion = &self.clauses[&r.conclusion];
            let computed = self.replay(r)?;
            let computed = Clause::input(0, computed).condense();
            if !computed.is_variant(conclusion) {
                return Err(format!(
                    "replay of clause {} produced {} instead of {}",
                    r.conclusion, computed, conclusion
                ));
            }
        }
        Ok(())
    }

    fn replay(&self, r: &InferenceRecord) -> Result<Vec<Literal>, String> {
        let get = |id: u32| {
            self.clauses
                .get(&id)
                .ok_or_else(|| format!("missing premise clause {id}"))
        };
        let rename = |lits: &[Literal], tag: usize| -> Vec<Literal> {
            let mut sub = Subst::new();
            for l in lits {
                for x in l.atom.vars() {
                    sub.insert_raw(
                        x.clone(),
                        Term::Var(Symbol::var(format!("R{tag}_{}", x.name))),
                    );
                }
            }
            sub.apply_literals(lits)
        };
        match r.rule {
            Rule::OrderedFactoring => {
                let (id, pos) = &r.premises[0];
                let c = get(*id)?;
                let (i, j) = (pos[0], pos[1]);
                let sigma = mgu(&c.lits[i].atom, &c.lits[j].atom)
                    .ok_or("factoring premises no longer unify")?;
                Ok(c.lits
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != j)
                    .map(|(_, l)| sigma.apply_literal(l))
                    .collect())
            }
            Rule::OrderedResolution => {
                let (mid, mpos) = &r.premises[0];
                let (sid, spos) = &r.premises[1];
                let main = get(*mid)?;
                let side = rename(&get(*sid)?.lits, 0);
                let (i, j) = (mpos[0], spos[0]);
                let sigma = mgu(&main.lits[i].atom, &side[j].atom)
                    .ok_or("resolution premises no longer unify")?;
                let mut lits: Vec<Literal> = main
                    .lits
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != i)
                    .map(|(_, l)| sigma.apply_literal(l))
                    .collect();
                lits.extend(
                    side.iter()
                        .enumerate()
                        .filter(|&(k, _)| k != j)
                        .map(|(_, l)| sigma.apply_literal(l)),
                );
                Ok(lits)
            }
            Rule::TopResolution => {
                let (mid, mpos) = &r.premises[0];
                let main = get(*mid)?;
                let sides: Vec<(Vec<Literal>, usize)> = r.premises[1..]
                    .iter()
                    .enumerate()
                    .map(|(k, (sid, spos))| Ok((rename(&get(*sid)?.lits, k + 1), spos[0])))
                    .collect::<Result<_, String>>()?;
                let pairs: Vec<_> = mpos
                    .iter()
                    .zip(&sides)
                    .map(|(&p, (lits, j))| (&main.lits[p].atom, &lits[*j].atom))
                    .collect();
                let sigma =
                    simultaneous_mgu(pairs).ok_or("top-resolution premises no longer unify")?;
                let mut lits: Vec<Literal> = Vec::new();
                for (slits, j) in &sides {
                    for (m, l) in slits.iter().enumerate() {
                        if m != *j {
                            lits.push(sigma.apply_literal(l));
                        }
                    }
                }
                for (p, l) in main.lits.iter().enumerate() {
                    if !mpos.contains(&p) {
                        lits.push(sigma.apply_literal(l));
                    }
                }
                Ok(lits)
            }
        }
    }
}
