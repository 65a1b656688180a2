//! Deciding satisfiability of parsed problems and answering Boolean
//! conjunctive queries against them.

use std::collections::BTreeSet;

use crate::clause::{check_lgc, Clause};
use crate::clausify::{lgf_trans, ClausifyError, FreshSymbols};
use crate::parser::{Bcq, Problem};
use crate::saturation::{Engine, LineageExpectation, Options, ProofTrace, Stats, Verdict};
use crate::term::{Literal, Symbol};

/// Negating a query turns it into an all-negative flat clause.
pub fn negate_query(q: &Bcq) -> Vec<Literal> {
    q.atoms.iter().map(|a| Literal::neg(a.clone())).collect()
}

/// Variables outside `set` co-occurring in some query atom with a member
/// of `set`.
pub fn par_of_set(set: &BTreeSet<Symbol>, q: &Bcq) -> BTreeSet<Symbol> {
    let mut out = BTreeSet::new();
    for a in &q.atoms {
        let vars = a.vars();
        if vars.iter().any(|x| set.contains(x)) {
            for y in vars {
                if !set.contains(&y) {
                    out.insert(y);
                }
            }
        }
    }
    out
}

pub fn par_of(x: &Symbol, q: &Bcq) -> BTreeSet<Symbol> {
    par_of_set(&BTreeSet::from([x.clone()]), q)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QueryClass {
    LooselyGuarded,
    Star { witness: Symbol },
    Cloud { basis: BTreeSet<Symbol> },
    Unsupported(String),
}

/// Static query classification. The classes overlap; the check runs in the
/// order loosely guarded, star, cloud and reports the first match.
pub fn classify_query(q: &Bcq) -> QueryClass {
    let clause = Clause::input(0, negate_query(q));
    if check_lgc(&clause).is_lgc() {
        return QueryClass::LooselyGuarded;
    }
    let all_vars: BTreeSet<Symbol> = clause.vars();
    for x in &all_vars {
        let mut reach = par_of(x, q);
        reach.insert(x.clone());
        if reach == all_vars {
            return QueryClass::Star { witness: x.clone() };
        }
    }
    // cloud: a nonempty, pairwise co-occurring set of chained variables
    // touching every other variable
    let chained: Vec<Symbol> = crate::clause::chained_variables(&clause.lits)
        .expect("query literals are flat")
        .into_iter()
        .collect();
    if chained.len() <= 16 {
        for mask in 1u32..(1u32 << chained.len()) {
            let basis: BTreeSet<Symbol> = chained
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, x)| x.clone())
                .collect();
            if !pairwise_cooccur(&basis, q) {
                continue;
            }
            let mut reach = par_of_set(&basis, q);
            reach.extend(basis.iter().cloned());
            if reach == all_vars {
                return QueryClass::Cloud { basis };
            }
        }
    }
    QueryClass::Unsupported(
        "query is not loosely guarded and has no star or cloud witness".to_string(),
    )
}

fn pairwise_cooccur(set: &BTreeSet<Symbol>, q: &Bcq) -> bool {
    let items: Vec<&Symbol> = set.iter().collect();
    for i in 0..items.len() {
        for j in i + 1..items.len() {
            let ok = q.atoms.iter().any(|a| {
                let vars = a.vars();
                vars.contains(items[i]) && vars.contains(items[j])
            });
            if !ok {
                return false;
            }
        }
    }
    true
}

/// The clausified theory of a problem: formula clauses plus fact units.
pub struct Theory {
    pub clauses: Vec<Vec<Literal>>,
    pub horn: bool,
}

pub fn build_theory(problem: &Problem) -> Result<Theory, ClausifyError> {
    let mut fresh = FreshSymbols::new();
    let mut clauses = Vec::new();
    for (_, f) in &problem.formulas {
        clauses.extend(lgf_trans(f, &mut fresh)?);
    }
    for (_, a) in &problem.facts {
        clauses.push(vec![Literal::pos(a.clone())]);
    }
    let horn = clauses
        .iter()
        .all(|c| c.iter().filter(|l| l.positive).count() <= 1);
    Ok(Theory { clauses, horn })
}

#[derive(Clone, Debug)]
pub enum SatResult {
    Satisfiable,
    Unsatisfiable(ProofTrace),
    ResourceOut(String),
}

pub fn decide_sat(theory: &Theory, opts: Options) -> (SatResult, Stats) {
    let mut engine = Engine::new(opts);
    for c in &theory.clauses {
        engine.add_input(c.clone(), false);
    }
    let result = match engine.saturate() {
        Verdict::Unsatisfiable(t) => SatResult::Unsatisfiable(t),
        Verdict::Satisfiable { .. } => SatResult::Satisfiable,
        Verdict::ResourceOut(msg) => SatResult::ResourceOut(msg),
        Verdict::Unsupported(msg) => unreachable!("support check without a query: {msg}"),
    };
    (result, engine.stats())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Horn,
    Restricted,
}

#[derive(Clone, Debug)]
pub enum QueryAnswer {
    Entailed(ProofTrace),
    NotEntailed,
    Unsupported(String),
    ResourceOut(String),
}

pub fn answer_bcq(
    theory: &Theory,
    q: &Bcq,
    mode: Mode,
    mut opts: Options,
) -> (QueryAnswer, Stats) {
    match mode {
        Mode::Horn => {
            if !theory.horn {
                return (
                    QueryAnswer::Unsupported(format!(
                        "query '{}' asked in horn mode but the theory is not Horn",
                        q.name
                    )),
                    Stats::default(),
                );
            }
            opts.lineage = LineageExpectation::HornQuery;
        }
        Mode::Restricted => {
            if let QueryClass::Unsupported(reason) = classify_query(q) {
                return (QueryAnswer::Unsupported(reason), Stats::default());
            }
            opts.lineage = LineageExpectation::Restricted;
        }
    }
    let mut engine = Engine::new(opts);
    for c in &theory.clauses {
        engine.add_input(c.clone(), false);
    }
    engine.add_input(negate_query(q), true);
    let answer = match engine.saturate() {
        Verdict::Unsatisfiable(t) => QueryAnswer::Entailed(t),
        Verdict::Satisfiable { .. } => QueryAnswer::NotEntailed,
        Verdict::ResourceOut(msg) => QueryAnswer::ResourceOut(msg),
        Verdict::Unsupported(msg) => QueryAnswer::Unsupported(msg),
    };
    (answer, engine.stats())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_problem;

    fn query(text: &str) -> Bcq {
        parse_problem(text).unwrap().queries.remove(0)
    }

    #[test]
    fn classify_guarded_triangle() {
        let q = query(
            "query q1: exists [X,Y,Z] (postgrad(X) & citedby(X,Y) & citedby(Y,Z) & citedby(Z,X)).",
        );
        assert_eq!(classify_query(&q), QueryClass::LooselyGuarded);
    }

    #[test]
    fn classify_star_chain() {
        let q = query("query q1: exists [X,Y,Z] (a1(X,Y) & a2(Y,Z)).");
        assert_eq!(classify_query(&q), QueryClass::Star { witness: Symbol::var("Y") });
    }

    #[test]
    fn classify_cloud() {
        let q = query(
            "query q1: exists [X,Y,Z,U,V] (a1(X,Y) & a2(Y,Z) & a3(Z,U,V) & a4(V)).",
        );
        match classify_query(&q) {
            QueryClass::Cloud { basis } => {
                assert_eq!(basis, BTreeSet::from([Symbol::var("Y"), Symbol::var("Z")]));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn classify_unsupported_disconnected() {
        let q = query("query q1: exists [X,Y] (a(X) & b(Y)).");
        assert!(matches!(classify_query(&q), QueryClass::Unsupported(_)));
    }

    #[test]
    fn classify_ground_query_guarded() {
        let q = query("query q1: p(a,b).");
        assert_eq!(classify_query(&q), QueryClass::LooselyGuarded);
    }

    #[test]
    fn par_examples() {
        let q = query("query q1: exists [X,Y,Z] (a1(X,Y) & a2(Y,Z)).");
        assert_eq!(
            par_of(&Symbol::var("Y"), &q),
            BTreeSet::from([Symbol::var("X"), Symbol::var("Z")])
        );
        assert_eq!(par_of(&Symbol::var("X"), &q), BTreeSet::from([Symbol::var("Y")]));
    }

    #[test]
    fn sat_and_unsat_problems() {
        let p = parse_problem(
            "fact f1: p(a). formula g1: forall [X] (p(X) -> ~p(X)).",
        )
        .unwrap();
        let theory = build_theory(&p).unwrap();
        match decide_sat(&theory, Options::default()).0 {
            SatResult::Unsatisfiable(_) => {}
            other => panic!("{other:?}"),
        }
        let p = parse_problem(
            "formula g1: exists [X,Y] (r(X,Y) & q(Y) & forall [Z] ((r(X,Z) & r(Z,Y)) -> exists [X1] p(X1,Y))).",
        )
        .unwrap();
        let theory = build_theory(&p).unwrap();
        match decide_sat(&theory, Options::default()).0 {
            SatResult::Satisfiable => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn horn_query_answers() {
        let p = parse_problem(
            "fact f1: r(a,b). formula g1: forall [X,Y] (r(X,Y) -> p(X,Y)). \
             query q1: exists [U,V] p(U,V). query q2: exists [U] p(U,U).",
        )
        .unwrap();
        let theory = build_theory(&p).unwrap();
        assert!(theory.horn);
        let (a1, _) = answer_bcq(&theory, &p.queries[0], Mode::Horn, Options::default());
        assert!(matches!(a1, QueryAnswer::Entailed(_)), "{a1:?}");
        let (a2, _) = answer_bcq(&theory, &p.queries[1], Mode::Horn, Options::default());
        assert!(matches!(a2, QueryAnswer::NotEntailed), "{a2:?}");
    }

    #[test]
    fn horn_mode_rejects_non_horn_theory() {
        let p = parse_problem(
            "formula g1: forall [X] (g(X) -> (a(X) | b(X))). query q1: exists [X] a(X).",
        )
        .unwrap();
        let theory = build_theory(&p).unwrap();
        assert!(!theory.horn);
        let (a, _) = answer_bcq(&theory, &p.queries[0], Mode::Horn, Options::default());
        assert!(matches!(a, QueryAnswer::Unsupported(_)));
    }

    #[test]
    fn restricted_mode_rejects_unsupported_query_shape() {
        let p = parse_problem(
            "fact f1: a(c). fact f2: b(d). query q1: exists [X,Y] (a(X) & b(Y)).",
        )
        .unwrap();
        let theory = build_theory(&p).unwrap();
        let (a, _) = answer_bcq(&theory, &p.queries[0], Mode::Restricted, Options::default());
        assert!(matches!(a, QueryAnswer::Unsupported(_)));
    }

    #[test]
    fn restricted_mode_star_query_entailed() {
        let p = parse_problem(
            "fact f1: a1(c,d). fact f2: a2(d,e). \
             formula g1: forall [X] (g(X) -> (h(X) | h(X))). \
             query q1: exists [X,Y,Z] (a1(X,Y) & a2(Y,Z)).",
        )
        .unwrap();
        let theory = build_theory(&p).unwrap();
        let (a, _) = answer_bcq(&theory, &p.queries[0], Mode::Restricted, Options::default());
        assert!(matches!(a, QueryAnswer::Entailed(_)), "{a:?}");
    }

    #[test]
    fn example2_query_not_entailed() {
        let p = parse_problem(
            "formula g1: exists [X,Y] (r(X,Y) & q(Y) & forall [Z] ((r(X,Z) & r(Z,Y)) -> exists [X1] p(X1,Y))). \
             query q1: exists [U,V] p(U,V).",
        )
        .unwrap();
        let theory = build_theory(&p).unwrap();
        assert!(theory.horn);
        let (a, _) = answer_bcq(&theory, &p.queries[0], Mode::Horn, Options::default());
        assert!(matches!(a, QueryAnswer::NotEntailed), "{a:?}");
    }
}
