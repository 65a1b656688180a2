//! Dynamic refinement: query pairs, the top-variable ordering they induce,
//! and literal selection.
//!
//! Selection on a clause falls into one of three cases: a negative literal
//! with a non-ground compound term is selected outright; otherwise a
//! positive compound literal makes maximality the eligibility test;
//! otherwise eligibility is dynamic and depends on candidate side premises
//! through a query pair.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::clause::Clause;
use crate::ordering::{literal_compare, Cmp, Precedence};
use crate::term::{Atom, Subst, Symbol};
use crate::unify::simultaneous_mgu;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QueryPairError {
    #[error("query pair has no literals")]
    Empty,
    #[error("left and right sequences differ in length")]
    LengthMismatch,
    #[error("left atom {0} is not flat")]
    LeftNotFlat(String),
    #[error("left atom {0} is ground")]
    LeftGround(String),
    #[error("left and right share variable {0}")]
    SharedVariable(String),
    #[error("left atom {0} does not unify with its partner")]
    PredicateMismatch(String),
    #[error("no simultaneous unifier exists")]
    NotUnifiable,
}

/// A pair of atom sequences (B1..Bn; A1..An): the Bi are flat non-ground
/// atoms of one clause, the Ai candidate partner atoms from side premises,
/// variable-disjoint from the Bi and simultaneously unifiable with them.
/// `degenerate` records that some partner carries no non-ground compound
/// term; the top-variable computation still goes through, but depth-based
/// termination arguments only apply to non-degenerate pairs.
#[derive(Clone, Debug)]
pub struct QueryPair {
    pub left: Vec<Atom>,
    pub right: Vec<Atom>,
    pub sigma: Subst,
    pub degenerate: bool,
}

pub fn build_query_pair(left: Vec<Atom>, right: Vec<Atom>) -> Result<QueryPair, QueryPairError> {
    if left.is_empty() {
        return Err(QueryPairError::Empty);
    }
    if left.len() != right.len() {
        return Err(QueryPairError::LengthMismatch);
    }
    let mut left_vars: BTreeSet<Symbol> = BTreeSet::new();
    for b in &left {
        if !b.is_flat() {
            return Err(QueryPairError::LeftNotFlat(b.to_string()));
        }
        if b.is_ground() {
            return Err(QueryPairError::LeftGround(b.to_string()));
        }
        b.collect_vars(&mut left_vars);
    }
    for a in &right {
        for x in a.vars() {
            if left_vars.contains(&x) {
                return Err(QueryPairError::SharedVariable(x.name));
            }
        }
    }
    for (b, a) in left.iter().zip(&right) {
        if b.predicate != a.predicate {
            return Err(QueryPairError::PredicateMismatch(b.to_string()));
        }
    }
    let sigma =
        simultaneous_mgu(left.iter().zip(&right)).ok_or(QueryPairError::NotUnifiable)?;
    let degenerate = right.iter().any(|a| !a.has_nonground_compound());
    Ok(QueryPair { left, right, sigma, degenerate })
}

/// The variable ordering a query pair induces: each left variable x is
/// measured by vdp(x sigma); the deepest ones are the top variables, and a
/// left atom is eligible when it contains one.
#[derive(Clone, Debug)]
pub struct TopVariableReport {
    pub depths: BTreeMap<Symbol, i32>,
    pub tops: BTreeSet<Symbol>,
    /// Indices into `left` of atoms containing a top variable.
    pub top_indices: Vec<usize>,
}

pub fn variable_ordering(pair: &QueryPair) -> TopVariableReport {
    let mut depths = BTreeMap::new();
    for b in &pair.left {
        for x in b.vars() {
            let d = pair
                .sigma
                .get(&x)
                .map(|t| t.vdp())
                .unwrap_or(0);
            depths.insert(x, d);
        }
    }
    let max = depths.values().copied().max().unwrap_or(0);
    let tops: BTreeSet<Symbol> = depths
        .iter()
        .filter(|(_, &d)| d == max)
        .map(|(x, _)| x.clone())
        .collect();
    let top_indices = pair
        .left
        .iter()
        .enumerate()
        .filter(|(_, b)| b.vars().iter().any(|x| tops.contains(x)))
        .map(|(i, _)| i)
        .collect();
    TopVariableReport { depths, tops, top_indices }
}

/// Static part of literal selection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Selection {
    /// A negative non-ground compound literal is selected (exactly one,
    /// the greatest under the literal ordering). Only this literal may
    /// resolve.
    NegativeCompound(usize),
    /// Nothing selected; the given literal positions are the maximal ones
    /// and eligibility is (strict) maximality after instantiation.
    Maximality(Vec<usize>),
    /// All literals are flat or ground and negative non-ground literals
    /// exist at these positions; eligibility is decided per partner set
    /// through a query pair.
    TopVariable(Vec<usize>),
}

pub fn select_literals(c: &Clause, prec: &Precedence) -> Selection {
    let neg_compound: Vec<usize> = c
        .lits
        .iter()
        .enumerate()
        .filter(|(_, l)| !l.positive && l.is_nonground_compound())
        .map(|(i, _)| i)
        .collect();
    if let Some(&first) = neg_compound.first() {
        // select the greatest one
        let best = neg_compound.iter().skip(1).fold(first, |best, &i| {
            if literal_compare(prec, &c.lits[i], &c.lits[best]) == Cmp::Greater {
                i
            } else {
                best
            }
        });
        return Selection::NegativeCompound(best);
    }
    let has_pos_compound = c
        .lits
        .iter()
        .any(|l| l.positive && l.is_nonground_compound());
    if !has_pos_compound {
        let neg_nonground: Vec<usize> = c
            .lits
            .iter()
            .enumerate()
            .filter(|(_, l)| !l.positive && !l.is_ground())
            .map(|(i, _)| i)
            .collect();
        if !neg_nonground.is_empty() {
            return Selection::TopVariable(neg_nonground);
        }
    }
    let maximal: Vec<usize> = (0..c.lits.len())
        .filter(|&i| crate::ordering::is_maximal_at(prec, c, i))
        .collect();
    Selection::Maximality(maximal)
}

/// Resolve a top-variable selection against concrete partners: the clause
/// positions (from Selection::TopVariable) whose atoms hold a top variable
/// of the pair.
pub fn top_selected_positions(left_positions: &[usize], report: &TopVariableReport) -> Vec<usize> {
    report
        .top_indices
        .iter()
        .map(|&i| left_positions[i])
        .collect()
}
