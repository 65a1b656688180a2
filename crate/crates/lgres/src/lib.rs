//! A resolution-based reasoner for the loosely guarded fragment of
//! first-order logic: satisfiability checking and Boolean conjunctive
//! query answering over loosely guarded theories.

pub mod clause;
pub mod clausify;
pub mod formula;
pub mod oracle;
pub mod ordering;
pub mod parser;
pub mod query;
pub mod refine;
pub mod saturation;
pub mod term;
pub mod unify;

pub use clause::{check_lgc, render_literals, Clause, LgcCheck};
pub use clausify::{check_lgf, lgf_trans, FreshSymbols, LgfMembership};
pub use parser::{parse_clause_text, parse_formula, parse_problem, Bcq, Problem};
pub use query::{answer_bcq, build_theory, classify_query, decide_sat, Mode, QueryAnswer, QueryClass, SatResult};
pub use saturation::{Engine, Limits, LineageExpectation, Options, Verdict};
