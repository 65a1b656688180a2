//! Problem file parsing and proof rendering.
//!
//! Grammar: variables start uppercase, constants/functions/predicates
//! lowercase; connectives `~ & | -> <->`; quantifiers `forall [X,..]` and
//! `exists [X,..]`; statements `formula NAME: F.`, `fact NAME: A.`,
//! `query NAME: Q.`; `%` starts a line comment.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::formula::Formula;
use crate::term::{Atom, Symbol, Term};

#[derive(Debug, Error)]
#[error("{line}:{col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

/// A Boolean conjunctive query: an existentially closed conjunction of
/// atoms over constants and variables only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bcq {
    pub name: String,
    pub vars: Vec<Symbol>,
    pub atoms: Vec<Atom>,
}

impl fmt::Display for Bcq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let conj: Vec<String> = self.atoms.iter().map(|a| a.to_string()).collect();
        if self.vars.is_empty() {
            write!(f, "{}", conj.join(" & "))
        } else {
            let vs: Vec<&str> = self.vars.iter().map(|v| v.name.as_str()).collect();
            write!(f, "exists [{}] ({})", vs.join(","), conj.join(" & "))
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Problem {
    pub formulas: Vec<(String, Formula)>,
    pub facts: Vec<(String, Atom)>,
    pub queries: Vec<Bcq>,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),    // lowercase-initial
    VarIdent(String), // uppercase-initial
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Dot,
    Colon,
    Tilde,
    Amp,
    Pipe,
    Arrow,
    Iff,
    TrueTok,
    FalseTok,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

type Spanned = (Tok, usize, usize);

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src: src.as_bytes(), pos: 0, line: 1, col: 1 }
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError { line: self.line, col: self.col, msg: msg.into() }
    }

    fn bump(&mut self) -> u8 {
        let c = self.src[self.pos];
        self.pos += 1;
        if c == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        c
    }

    fn tokens(mut self) -> Result<Vec<Spanned>, ParseError> {
        let mut out = Vec::new();
        while self.pos < self.src.len() {
            let c = self.src[self.pos];
            let (line, col) = (self.line, self.col);
            match c {
                b' ' | b'\t' | b'\r' | b'\n' => {
                    self.bump();
                }
                b'%' => {
                    while self.pos < self.src.len() && self.src[self.pos] != b'\n' {
                        self.bump();
                    }
                }
                b'(' => {
                    self.bump();
                    out.push((Tok::LParen, line, col));
                }
                b')' => {
                    self.bump();
                    out.push((Tok::RParen, line, col));
                }
                b'[' => {
                    self.bump();
                    out.push((Tok::LBracket, line, col));
                }
                b']' => {
                    self.bump();
                    out.push((Tok::RBracket, line, col));
                }
                b',' => {
                    self.bump();
                    out.push((Tok::Comma, line, col));
                }
                b'.' => {
                    self.bump();
                    out.push((Tok::Dot, line, col));
                }
                b':' => {
                    self.bump();
                    out.push((Tok::Colon, line, col));
                }
                b'~' => {
                    self.bump();
                    out.push((Tok::Tilde, line, col));
                }
                b'&' => {
                    self.bump();
                    out.push((Tok::Amp, line, col));
                }
                b'|' => {
                    self.bump();
                    out.push((Tok::Pipe, line, col));
                }
                b'-' => {
                    self.bump();
                    if self.pos < self.src.len() && self.src[self.pos] == b'>' {
                        self.bump();
                        out.push((Tok::Arrow, line, col));
                    } else {
                        return Err(self.err("expected '>' after '-'"));
                    }
                }
                b'<' => {
                    self.bump();
                    if self.src.get(self.pos) == Some(&b'-')
                        && self.src.get(self.pos + 1) == Some(&b'>')
                    {
                        self.bump();
                        self.bump();
                        out.push((Tok::Iff, line, col));
                    } else {
                        return Err(self.err("expected '->' after '<'"));
                    }
                }
                b'$' => {
                    self.bump();
                    let word = self.ident_body();
                    match word.as_str() {
                        "true" => out.push((Tok::TrueTok, line, col)),
                        "false" => out.push((Tok::FalseTok, line, col)),
                        other => return Err(self.err(format!("unknown token ${other}"))),
                    }
                }
                c if c.is_ascii_alphabetic() => {
                    let word = self.ident_body();
                    let tok = if c.is_ascii_uppercase() {
                        Tok::VarIdent(word)
                    } else {
                        Tok::Ident(word)
                    };
                    out.push((tok, line, col));
                }
                c => return Err(self.err(format!("unexpected character '{}'", c as char))),
            }
        }
        Ok(out)
    }

    fn ident_body(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.bump();
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }
}

/// Signature bookkeeping: the same name and kind must always carry the
/// same arity.
#[derive(Default)]
struct Signature {
    arities: HashMap<(String, &'static str), usize>,
}

impl Signature {
    fn check(
        &mut self,
        name: &str,
        kind: &'static str,
        arity: usize,
        line: usize,
        col: usize,
    ) -> Result<(), ParseError> {
        match self.arities.get(&(name.to_string(), kind)) {
            Some(&known) if known != arity => Err(ParseError {
                line,
                col,
                msg: format!("{kind} '{name}' used with arity {arity}, previously {known}"),
            }),
            Some(_) => Ok(()),
            None => {
                self.arities.insert((name.to_string(), kind), arity);
                Ok(())
            }
        }
    }
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    sig: Signature,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _, _)| t)
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .or_else(|| self.toks.last())
            .map(|(_, l, c)| (*l, *c))
            .unwrap_or((1, 1))
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        let (line, col) = self.here();
        ParseError { line, col, msg: msg.into() }
    }

    fn next(&mut self) -> Result<Tok, ParseError> {
        let t = self
            .toks
            .get(self.pos)
            .map(|(t, _, _)| t.clone())
            .ok_or_else(|| self.err("unexpected end of input"))?;
        self.pos += 1;
        Ok(t)
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        let got = self.next()?;
        if got == want {
            Ok(())
        } else {
            self.pos -= 1;
            Err(self.err(format!("expected {what}")))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, ParseError> {
        match self.next()? {
            Tok::Ident(s) => Ok(s),
            _ => {
                self.pos -= 1;
                Err(self.err(format!("expected {what}")))
            }
        }
    }

    fn problem(&mut self) -> Result<Problem, ParseError> {
        let mut p = Problem::default();
        while self.peek().is_some() {
            let kw = self.ident("'formula', 'fact' or 'query'")?;
            let name = match self.next()? {
                Tok::Ident(s) => s,
                Tok::VarIdent(s) => s,
                _ => {
                    self.pos -= 1;
                    return Err(self.err("expected statement name"));
                }
            };
            self.expect(Tok::Colon, "':'")?;
            match kw.as_str() {
                "formula" => {
                    let f = self.formula()?;
                    p.formulas.push((name, f));
                }
                "fact" => {
                    let (line, col) = self.here();
                    let a = self.atom()?;
                    if !a.is_ground() {
                        return Err(ParseError {
                            line,
                            col,
                            msg: format!("fact '{name}' is not ground"),
                        });
                    }
                    p.facts.push((name, a));
                }
                "query" => {
                    let (line, col) = self.here();
                    let f = self.formula()?;
                    let q = formula_to_bcq(name.clone(), &f).map_err(|msg| ParseError {
                        line,
                        col,
                        msg,
                    })?;
                    p.queries.push(q);
                }
                other => return Err(self.err(format!("unknown statement kind '{other}'"))),
            }
            self.expect(Tok::Dot, "'.' after statement")?;
        }
        Ok(p)
    }

    // precedence (loosest first): <->, ->, |, &, unary
    fn formula(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.implication()?;
        if self.peek() == Some(&Tok::Iff) {
            self.next()?;
            let rhs = self.formula()?;
            Ok(Formula::Iff(Box::new(lhs), Box::new(rhs)))
        } else {
            Ok(lhs)
        }
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.next()?;
            let rhs = self.implication()?;
            Ok(Formula::Implies(Box::new(lhs), Box::new(rhs)))
        } else {
            Ok(lhs)
        }
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut parts = vec![self.conjunction()?];
        while self.peek() == Some(&Tok::Pipe) {
            self.next()?;
            parts.push(self.conjunction()?);
        }
        Ok(Formula::or(parts))
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut parts = vec![self.unary()?];
        while self.peek() == Some(&Tok::Amp) {
            self.next()?;
            parts.push(self.unary()?);
        }
        Ok(Formula::and(parts))
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Tok::Tilde) => {
                self.next()?;
                Ok(Formula::not(self.unary()?))
            }
            Some(Tok::TrueTok) => {
                self.next()?;
                Ok(Formula::True)
            }
            Some(Tok::FalseTok) => {
                self.next()?;
                Ok(Formula::False)
            }
            Some(Tok::LParen) => {
                self.next()?;
                let f = self.formula()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(f)
            }
            Some(Tok::Ident(word)) if word == "forall" || word == "exists" => {
                let kw = self.ident("quantifier")?;
                self.expect(Tok::LBracket, "'['")?;
                let mut vars = Vec::new();
                loop {
                    match self.next()? {
                        Tok::VarIdent(v) => vars.push(Symbol::var(v)),
                        _ => {
                            self.pos -= 1;
                            return Err(self.err("expected variable in quantifier list"));
                        }
                    }
                    match self.next()? {
                        Tok::Comma => continue,
                        Tok::RBracket => break,
                        _ => {
                            self.pos -= 1;
                            return Err(self.err("expected ',' or ']'"));
                        }
                    }
                }
                if vars.is_empty() {
                    return Err(self.err("empty quantifier variable list"));
                }
                let body = self.unary()?;
                Ok(if kw == "forall" {
                    Formula::Forall(vars, Box::new(body))
                } else {
                    Formula::Exists(vars, Box::new(body))
                })
            }
            Some(Tok::Ident(_)) => Ok(Formula::Atom(self.atom()?)),
            _ => Err(self.err("expected formula")),
        }
    }

    fn atom(&mut self) -> Result<Atom, ParseError> {
        let (line, col) = self.here();
        let name = self.ident("predicate name")?;
        let args = if self.peek() == Some(&Tok::LParen) {
            self.next()?;
            let mut args = vec![self.term()?];
            loop {
                match self.next()? {
                    Tok::Comma => args.push(self.term()?),
                    Tok::RParen => break,
                    _ => {
                        self.pos -= 1;
                        return Err(self.err("expected ',' or ')'"));
                    }
                }
            }
            args
        } else {
            Vec::new()
        };
        self.sig.check(&name, "predicate", args.len(), line, col)?;
        Ok(Atom::new(Symbol::pred(name, args.len()), args))
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let (line, col) = self.here();
        match self.next()? {
            Tok::VarIdent(v) => Ok(Term::Var(Symbol::var(v))),
            Tok::Ident(name) => {
                if self.peek() == Some(&Tok::LParen) {
                    self.next()?;
                    let mut args = vec![self.term()?];
                    loop {
                        match self.next()? {
                            Tok::Comma => args.push(self.term()?),
                            Tok::RParen => break,
                            _ => {
                                self.pos -= 1;
                                return Err(self.err("expected ',' or ')'"));
                            }
                        }
                    }
                    self.sig.check(&name, "function", args.len(), line, col)?;
                    Ok(Term::compound(Symbol::func(name, args.len()), args))
                } else {
                    self.sig.check(&name, "constant", 0, line, col)?;
                    Ok(Term::Const(Symbol::constant(name)))
                }
            }
            _ => {
                self.pos -= 1;
                Err(self.err("expected term"))
            }
        }
    }
}

fn formula_to_bcq(name: String, f: &Formula) -> Result<Bcq, String> {
    // strip nested existential closures, then flatten the conjunction
    let mut vars: Vec<Symbol> = Vec::new();
    let mut body = f;
    while let Formula::Exists(xs, inner) = body {
        vars.extend(xs.iter().cloned());
        body = inner;
    }
    let mut atoms = Vec::new();
    flatten_conj(body, &mut atoms)?;
    for a in &atoms {
        if a.has_compound() {
            return Err(format!("query contains compound term in atom {a}"));
        }
    }
    // free variables are implicitly existential
    for x in body.free_vars() {
        if !vars.contains(&x) {
            vars.push(x);
        }
    }
    Ok(Bcq { name, vars, atoms })
}

fn flatten_conj(f: &Formula, out: &mut Vec<Atom>) -> Result<(), String> {
    match f {
        Formula::Atom(a) => {
            out.push(a.clone());
            Ok(())
        }
        Formula::And(gs) => {
            for g in gs {
                flatten_conj(g, out)?;
            }
            Ok(())
        }
        other => Err(format!(
            "query must be an existentially closed conjunction of atoms, found {other}"
        )),
    }
}

pub fn parse_problem(text: &str) -> Result<Problem, ParseError> {
    let toks = Lexer::new(text).tokens()?;
    Parser { toks, pos: 0, sig: Signature::default() }.problem()
}

/// Parse a single formula, mainly for tests and the render round trip.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let toks = Lexer::new(text).tokens()?;
    let mut p = Parser { toks, pos: 0, sig: Signature::default() };
    let f = p.formula()?;
    if p.peek().is_some() {
        return Err(p.err("trailing input after formula"));
    }
    Ok(f)
}

/// Parse clause text of the shape rendered by `render_literals`:
/// literals separated by `|`, `~` for negation, `$false` for the empty
/// clause.
pub fn parse_clause_text(text: &str) -> Result<Vec<crate::term::Literal>, ParseError> {
    use crate::term::Literal;
    if text.trim() == "$false" {
        return Ok(Vec::new());
    }
    let f = parse_formula(text)?;
    fn lits(f: &Formula, out: &mut Vec<Literal>) -> Result<(), String> {
        match f {
            Formula::Or(gs) => {
                for g in gs {
                    lits(g, out)?;
                }
                Ok(())
            }
            Formula::Atom(a) => {
                out.push(Literal::pos(a.clone()));
                Ok(())
            }
            Formula::Not(g) => match g.as_ref() {
                Formula::Atom(a) => {
                    out.push(Literal::neg(a.clone()));
                    Ok(())
                }
                other => Err(format!("negation of non-atom in clause: {other}")),
            },
            other => Err(format!("not a clause: {other}")),
        }
    }
    let mut out = Vec::new();
    lits(&f, &mut out).map_err(|msg| ParseError { line: 1, col: 1, msg })?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clause::{render_literals, Clause};

    #[test]
    fn parse_fact() {
        let p = parse_problem("fact f1: r(a,b).").unwrap();
        assert_eq!(p.facts.len(), 1);
        assert_eq!(p.facts[0].0, "f1");
        assert_eq!(p.facts[0].1.to_string(), "r(a,b)");
    }

    #[test]
    fn parse_example2_formula() {
        let text = "formula g1: exists [Y] (r(X,Y) & q(Y) & forall [Z] ((r(X,Z) & r(Z,Y)) -> exists [X1] p(X1,Y))).";
        let p = parse_problem(text).unwrap();
        assert_eq!(p.formulas.len(), 1);
        match &p.formulas[0].1 {
            Formula::Exists(vars, body) => {
                assert_eq!(vars, &vec![Symbol::var("Y")]);
                assert!(matches!(body.as_ref(), Formula::And(_)));
            }
            other => panic!("unexpected shape: {other}"),
        }
        // X is free
        assert_eq!(
            p.formulas[0].1.free_vars(),
            std::collections::BTreeSet::from([Symbol::var("X")])
        );
    }

    #[test]
    fn parse_query() {
        let p = parse_problem("query q1: exists [X,Y,Z] (a1(X,Y) & a2(Y,Z)).").unwrap();
        assert_eq!(p.queries.len(), 1);
        let q = &p.queries[0];
        assert_eq!(q.vars.len(), 3);
        assert_eq!(q.atoms.len(), 2);
    }

    #[test]
    fn query_with_compound_term_rejected() {
        assert!(parse_problem("query q1: exists [X] a(f(X)).").is_err());
    }

    #[test]
    fn non_ground_fact_rejected() {
        assert!(parse_problem("fact f1: r(X,b).").is_err());
    }

    #[test]
    fn arity_mismatch_rejected() {
        let err = parse_problem("fact f1: r(a,b). fact f2: r(a).").unwrap_err();
        assert!(err.msg.contains("arity"));
    }

    #[test]
    fn syntax_error_has_position() {
        let err = parse_problem("fact f1 r(a,b).").unwrap_err();
        assert_eq!(err.line, 1);
        assert!(err.col > 1);
    }

    #[test]
    fn clause_render_parse_round_trip() {
        let lits = parse_clause_text("~q1(X,Y) | ~r(X,Z) | ~r(Z,Y) | p(sk1(X,Y,Z),Y)").unwrap();
        let c = Clause::input(0, lits.clone());
        let rendered = render_literals(&lits);
        let reparsed = Clause::input(1, parse_clause_text(&rendered).unwrap());
        assert!(c.is_variant(&reparsed));
        assert!(parse_clause_text("$false").unwrap().is_empty());
    }
}
