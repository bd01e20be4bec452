//! First-order formulas over one binary relation `R`, unary predicates,
//! equality and constants, with a parser, a printer and a finite-structure
//! evaluator.
//!
//! Concrete syntax: `E x. f`, `A x. f`, `R(s, t)`, `R+(s, t)`, `Q(t)`,
//! `s = t`, `s < t` (read as `R(s, t)`), `~ & | -> <->`, `true`, `false`.
//! Variables are bare identifiers, constants carry a leading `'`. A
//! quantifier extends as far right as possible.

use crate::formula::RESERVED_PREFIX;
use crate::model::{bits, closure_masks, full_mask, HybridModel, MAX_STATES};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use thiserror::Error;

/// A variable or a constant.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Const(String),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn constant(name: &str) -> Term {
        Term::Const(name.to_string())
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::Const(c) => write!(f, "'{c}"),
        }
    }
}

/// First-order formula.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FOFormula {
    True,
    False,
    /// `R(s, t)`.
    Rel(Term, Term),
    /// `R+(s, t)`: the transitive closure of `R`.
    RelPlus(Term, Term),
    /// `s = t`.
    Eq(Term, Term),
    /// Unary predicate application.
    Pred(String, Term),
    Not(Box<FOFormula>),
    And(Box<FOFormula>, Box<FOFormula>),
    Or(Box<FOFormula>, Box<FOFormula>),
    Implies(Box<FOFormula>, Box<FOFormula>),
    Iff(Box<FOFormula>, Box<FOFormula>),
    Exists(String, Box<FOFormula>),
    Forall(String, Box<FOFormula>),
}

impl FOFormula {
    pub fn rel(a: Term, b: Term) -> Self {
        FOFormula::Rel(a, b)
    }

    pub fn rel_plus(a: Term, b: Term) -> Self {
        FOFormula::RelPlus(a, b)
    }

    pub fn eq(a: Term, b: Term) -> Self {
        FOFormula::Eq(a, b)
    }

    pub fn pred(name: &str, t: Term) -> Self {
        FOFormula::Pred(name.to_string(), t)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: FOFormula) -> Self {
        FOFormula::Not(Box::new(f))
    }

    pub fn and(a: FOFormula, b: FOFormula) -> Self {
        FOFormula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: FOFormula, b: FOFormula) -> Self {
        FOFormula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: FOFormula, b: FOFormula) -> Self {
        FOFormula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: FOFormula, b: FOFormula) -> Self {
        FOFormula::Iff(Box::new(a), Box::new(b))
    }

    pub fn exists(v: &str, f: FOFormula) -> Self {
        FOFormula::Exists(v.to_string(), Box::new(f))
    }

    pub fn forall(v: &str, f: FOFormula) -> Self {
        FOFormula::Forall(v.to_string(), Box::new(f))
    }

    /// Left-nested conjunction; `true` when empty.
    pub fn conj(items: impl IntoIterator<Item = FOFormula>) -> Self {
        items.into_iter().reduce(FOFormula::and).unwrap_or(FOFormula::True)
    }

    /// Left-nested disjunction; `false` when empty.
    pub fn disj(items: impl IntoIterator<Item = FOFormula>) -> Self {
        items.into_iter().reduce(FOFormula::or).unwrap_or(FOFormula::False)
    }

    pub fn children(&self) -> Vec<&FOFormula> {
        use FOFormula::*;
        match self {
            True | False | Rel(..) | RelPlus(..) | Eq(..) | Pred(..) => vec![],
            Not(a) | Exists(_, a) | Forall(_, a) => vec![a],
            And(a, b) | Or(a, b) | Implies(a, b) | Iff(a, b) => vec![a, b],
        }
    }

    /// Pre-order traversal.
    pub fn visit(&self, f: &mut impl FnMut(&FOFormula)) {
        f(self);
        for c in self.children() {
            c.visit(f);
        }
    }

    fn terms(&self) -> Vec<&Term> {
        match self {
            FOFormula::Rel(a, b) | FOFormula::RelPlus(a, b) | FOFormula::Eq(a, b) => vec![a, b],
            FOFormula::Pred(_, t) => vec![t],
            _ => vec![],
        }
    }

    /// Variables with an occurrence outside a quantifier binding them.
    pub fn free_vars(&self) -> BTreeSet<String> {
        fn go(f: &FOFormula, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
            match f {
                FOFormula::Exists(v, b) | FOFormula::Forall(v, b) => {
                    bound.push(v.clone());
                    go(b, bound, out);
                    bound.pop();
                }
                _ => {
                    for t in f.terms() {
                        if let Term::Var(v) = t {
                            if !bound.contains(v) {
                                out.insert(v.clone());
                            }
                        }
                    }
                    for c in f.children() {
                        go(c, bound, out);
                    }
                }
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    /// Constant names in first-occurrence order.
    pub fn constants(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        self.visit(&mut |g| {
            for t in g.terms() {
                if let Term::Const(c) = t {
                    if !out.contains(c) {
                        out.push(c.clone());
                    }
                }
            }
        });
        out
    }

    /// Unary predicate names in first-occurrence order.
    pub fn predicates(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        self.visit(&mut |g| {
            if let FOFormula::Pred(p, _) = g {
                if !out.contains(p) {
                    out.push(p.clone());
                }
            }
        });
        out
    }

    /// Every variable name, bound or free.
    pub fn var_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |g| {
            if let FOFormula::Exists(v, _) | FOFormula::Forall(v, _) = g {
                out.insert(v.clone());
            }
            for t in g.terms() {
                if let Term::Var(v) = t {
                    out.insert(v.clone());
                }
            }
        });
        out
    }

    fn any(&self, pred: impl Fn(&FOFormula) -> bool) -> bool {
        let mut hit = false;
        self.visit(&mut |g| hit |= pred(g));
        hit
    }

    pub fn uses_equality(&self) -> bool {
        self.any(|g| matches!(g, FOFormula::Eq(..)))
    }

    pub fn uses_relation(&self) -> bool {
        self.any(|g| matches!(g, FOFormula::Rel(..) | FOFormula::RelPlus(..)))
    }

    pub fn uses_closure(&self) -> bool {
        self.any(|g| matches!(g, FOFormula::RelPlus(..)))
    }

    pub fn size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }
}

impl fmt::Display for FOFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_fo(self, false))
    }
}

/// Errors from FO operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FoError {
    #[error("variable {0} is not bound")]
    UnboundVariable(String),
    #[error("constant '{0} is not interpreted")]
    UnboundConstant(String),
    #[error("unknown element '{0}'")]
    UnknownElement(String),
    #[error("formula is outside {fragment}: {reason}")]
    Fragment { fragment: String, reason: String },
    #[error("structure has {0} elements; at most 64 are supported")]
    TooLarge(usize),
    #[error("structure file: {0}")]
    Format(String),
}

/// Check membership in `[all,(u,1)]`: one binary relation, at most `u`
/// unary predicates, no equality, no constants, no closure atoms.
pub fn check_all_u1(f: &FOFormula, u: usize) -> Result<(), FoError> {
    let frag = format!("[all,({u},1)]");
    let fail = |reason: &str| Err(FoError::Fragment { fragment: frag.clone(), reason: reason.into() });
    if f.uses_equality() {
        return fail("uses equality");
    }
    if !f.constants().is_empty() {
        return fail("uses constants");
    }
    if f.uses_closure() {
        return fail("uses R+");
    }
    if f.predicates().len() > u {
        return fail("too many unary predicates");
    }
    Ok(())
}

/// Check membership in the monadic class with equality: no binary relation.
pub fn check_mc_eq(f: &FOFormula) -> Result<(), FoError> {
    if f.uses_relation() {
        return Err(FoError::Fragment { fragment: "MC=".into(), reason: "uses the binary relation".into() });
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Printing

const PREC_IFF: u8 = 1;
const PREC_IMPLIES: u8 = 2;
const PREC_OR: u8 = 3;
const PREC_AND: u8 = 4;
const PREC_UNARY: u8 = 5;

fn binary(f: &FOFormula) -> Option<(u8, &'static str, &FOFormula, &FOFormula)> {
    match f {
        FOFormula::Iff(a, b) => Some((PREC_IFF, "<->", a, b)),
        FOFormula::Implies(a, b) => Some((PREC_IMPLIES, "->", a, b)),
        FOFormula::Or(a, b) => Some((PREC_OR, "|", a, b)),
        FOFormula::And(a, b) => Some((PREC_AND, "&", a, b)),
        _ => None,
    }
}

fn prec(f: &FOFormula) -> u8 {
    binary(f).map(|(p, ..)| p).unwrap_or(PREC_UNARY)
}

/// Print `f`. With `lfp`, every `R+(s, t)` is written as the least
/// fixpoint `[LFP W(x,y).(R(x,y) | E z.(R(z,y) & W(x,z)))](s,t)`, a form
/// meant for external fixpoint-logic tools; the parser does not read it.
pub fn print_fo(f: &FOFormula, lfp: bool) -> String {
    let mut out = String::new();
    write_fo(f, true, lfp, &mut out);
    out
}

fn write_fo(f: &FOFormula, tail: bool, lfp: bool, out: &mut String) {
    if let Some((p, op, a, b)) = binary(f) {
        let right_assoc = p == PREC_IMPLIES;
        let lp = prec(a) < p || (right_assoc && prec(a) == p);
        let rp = prec(b) < p || (!right_assoc && prec(b) == p);
        operand(a, lp, false, lfp, out);
        out.push(' ');
        out.push_str(op);
        out.push(' ');
        operand(b, rp, tail, lfp, out);
        return;
    }
    match f {
        FOFormula::True => out.push_str("true"),
        FOFormula::False => out.push_str("false"),
        FOFormula::Rel(a, b) => out.push_str(&format!("R({a}, {b})")),
        FOFormula::RelPlus(a, b) if lfp => {
            out.push_str(&format!("[LFP W(x,y).(R(x,y) | E z.(R(z,y) & W(x,z)))]({a},{b})"))
        }
        FOFormula::RelPlus(a, b) => out.push_str(&format!("R+({a}, {b})")),
        FOFormula::Eq(a, b) => out.push_str(&format!("{a} = {b}")),
        FOFormula::Pred(p, t) => out.push_str(&format!("{p}({t})")),
        FOFormula::Not(a) => {
            out.push('~');
            operand(a, prec(a) < PREC_UNARY, tail, lfp, out);
        }
        FOFormula::Exists(v, a) | FOFormula::Forall(v, a) => {
            let q = if matches!(f, FOFormula::Exists(..)) { "E" } else { "A" };
            if tail {
                out.push_str(&format!("{q} {v}. "));
                write_fo(a, true, lfp, out);
            } else {
                out.push('(');
                write_fo(f, true, lfp, out);
                out.push(')');
            }
        }
        _ => unreachable!("binary connectives handled above"),
    }
}

fn operand(f: &FOFormula, paren: bool, tail: bool, lfp: bool, out: &mut String) {
    if paren {
        out.push('(');
        write_fo(f, true, lfp, out);
        out.push(')');
    } else {
        write_fo(f, tail, lfp, out);
    }
}

// ---------------------------------------------------------------------------
// Parsing

/// A syntax error in FO input, with a 1-based column.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("column {col}: {message}")]
pub struct FoParseError {
    pub col: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Const(String),
    Tilde,
    Amp,
    Bar,
    Arrow,
    DArrow,
    LParen,
    RParen,
    Comma,
    Dot,
    Equals,
    Less,
    Plus,
    Eof,
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, FoParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |col: usize, m: &str| FoParseError { col, message: m.to_string() };
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let ident_at = |mut j: usize| {
            let start = j;
            while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                j += 1;
            }
            (chars[start..j].iter().collect::<String>(), j)
        };
        let tok = if c.is_ascii_alphabetic() || c == '_' {
            let (name, j) = ident_at(i);
            i = j;
            Tok::Ident(name)
        } else if c == '\'' {
            let (name, j) = ident_at(i + 1);
            if name.is_empty() || name.starts_with(|d: char| d.is_ascii_digit()) {
                return Err(err(col, "expected a constant name after '''"));
            }
            i = j;
            Tok::Const(name)
        } else {
            let two: String = chars[i..chars.len().min(i + 3)].iter().collect();
            let (t, w) = if two.starts_with("<->") {
                (Tok::DArrow, 3)
            } else if two.starts_with("->") {
                (Tok::Arrow, 2)
            } else {
                let t = match c {
                    '~' => Tok::Tilde,
                    '&' => Tok::Amp,
                    '|' => Tok::Bar,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    ',' => Tok::Comma,
                    '.' => Tok::Dot,
                    '=' => Tok::Equals,
                    '<' => Tok::Less,
                    '+' => Tok::Plus,
                    _ => return Err(err(col, &format!("unexpected character '{c}'"))),
                };
                (t, 1)
            };
            i += w;
            t
        };
        out.push((tok, col));
    }
    out.push((Tok::Eof, chars.len() + 1));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    strict: bool,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn col(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, m: impl Into<String>) -> Result<T, FoParseError> {
        Err(FoParseError { col: self.col(), message: m.into() })
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), FoParseError> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            self.fail(format!("expected {what}"))
        }
    }

    fn check_name(&self, name: &str) -> Result<(), FoParseError> {
        if self.strict && name.starts_with(RESERVED_PREFIX) {
            return self.fail(format!("names starting with '{RESERVED_PREFIX}' are reserved"));
        }
        Ok(())
    }

    fn iff(&mut self) -> Result<FOFormula, FoParseError> {
        let mut left = self.implies()?;
        while *self.peek() == Tok::DArrow {
            self.bump();
            left = FOFormula::iff(left, self.implies()?);
        }
        Ok(left)
    }

    fn implies(&mut self) -> Result<FOFormula, FoParseError> {
        let left = self.or()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            return Ok(FOFormula::implies(left, self.implies()?));
        }
        Ok(left)
    }

    fn or(&mut self) -> Result<FOFormula, FoParseError> {
        let mut left = self.and()?;
        while *self.peek() == Tok::Bar {
            self.bump();
            left = FOFormula::or(left, self.and()?);
        }
        Ok(left)
    }

    fn and(&mut self) -> Result<FOFormula, FoParseError> {
        let mut left = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            left = FOFormula::and(left, self.unary()?);
        }
        Ok(left)
    }

    fn term(&mut self) -> Result<Term, FoParseError> {
        match self.peek().clone() {
            Tok::Ident(v) if v != "true" && v != "false" => {
                self.check_name(&v)?;
                self.bump();
                Ok(Term::Var(v))
            }
            Tok::Const(c) => {
                self.check_name(&c)?;
                self.bump();
                Ok(Term::Const(c))
            }
            _ => self.fail("expected a variable or constant"),
        }
    }

    fn unary(&mut self) -> Result<FOFormula, FoParseError> {
        match self.peek().clone() {
            Tok::Tilde => {
                self.bump();
                Ok(FOFormula::not(self.unary()?))
            }
            Tok::LParen => {
                self.bump();
                let f = self.iff()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(f)
            }
            Tok::Ident(w) if (w == "E" || w == "A") && self.quantifier_ahead() => {
                self.bump();
                let Tok::Ident(v) = self.peek().clone() else { unreachable!("checked by quantifier_ahead") };
                self.check_name(&v)?;
                self.bump();
                self.expect(Tok::Dot, "'.' after the quantified variable")?;
                let body = self.iff()?;
                Ok(if w == "E" { FOFormula::Exists(v, Box::new(body)) } else { FOFormula::Forall(v, Box::new(body)) })
            }
            Tok::Ident(w) if w == "true" => {
                self.bump();
                Ok(FOFormula::True)
            }
            Tok::Ident(w) if w == "false" => {
                self.bump();
                Ok(FOFormula::False)
            }
            Tok::Ident(name)
                if self.toks.get(self.pos + 1).map(|t| &t.0) == Some(&Tok::LParen)
                    || (name == "R" && self.toks.get(self.pos + 1).map(|t| &t.0) == Some(&Tok::Plus)) =>
            {
                self.bump();
                let plus = *self.peek() == Tok::Plus;
                if plus {
                    self.bump();
                }
                self.expect(Tok::LParen, "'('")?;
                let a = self.term()?;
                if *self.peek() == Tok::Comma {
                    if name != "R" {
                        return self.fail(format!("only R is binary; '{name}' is a unary predicate"));
                    }
                    self.bump();
                    let b = self.term()?;
                    self.expect(Tok::RParen, "')'")?;
                    return Ok(if plus { FOFormula::RelPlus(a, b) } else { FOFormula::Rel(a, b) });
                }
                if plus {
                    return self.fail("R+ takes two arguments");
                }
                self.expect(Tok::RParen, "')'")?;
                self.check_name(&name)?;
                Ok(FOFormula::Pred(name, a))
            }
            Tok::Ident(_) | Tok::Const(_) => {
                let a = self.term()?;
                match self.bump() {
                    Tok::Equals => Ok(FOFormula::Eq(a, self.term()?)),
                    Tok::Less => Ok(FOFormula::Rel(a, self.term()?)),
                    _ => {
                        self.pos -= 1;
                        self.fail("expected '=' or '<' after a term")
                    }
                }
            }
            Tok::Eof => self.fail("unexpected end of input"),
            _ => self.fail("expected a formula"),
        }
    }

    fn quantifier_ahead(&self) -> bool {
        matches!(self.toks.get(self.pos + 1), Some((Tok::Ident(_), _)))
            && matches!(self.toks.get(self.pos + 2), Some((Tok::Dot, _)))
    }
}

fn parse_with(src: &str, strict: bool) -> Result<FOFormula, FoParseError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0, strict };
    let f = p.iff()?;
    if *p.peek() != Tok::Eof {
        return p.fail("unexpected trailing input");
    }
    Ok(f)
}

/// Parse FO text; names starting with `_` are rejected.
pub fn parse_fo(src: &str) -> Result<FOFormula, FoParseError> {
    parse_with(src, true)
}

/// Parse FO text, allowing reserved `_` names (for machine-generated input).
pub fn parse_fo_trusted(src: &str) -> Result<FOFormula, FoParseError> {
    parse_with(src, false)
}

// ---------------------------------------------------------------------------
// Structures

/// A finite relational structure: elements `0..n`, one binary relation,
/// unary predicates and constants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FOStructure {
    names: Vec<String>,
    rel: Vec<u64>,
    unary: BTreeMap<String, u64>,
    constants: BTreeMap<String, usize>,
}

impl FOStructure {
    /// Elements named `0`, `1`, ...
    pub fn new(n: usize) -> Result<Self, FoError> {
        Self::with_names((0..n).map(|i| i.to_string()).collect())
    }

    pub fn with_names(names: Vec<String>) -> Result<Self, FoError> {
        if names.len() > MAX_STATES {
            return Err(FoError::TooLarge(names.len()));
        }
        let n = names.len();
        Ok(FOStructure { names, rel: vec![0; n], unary: BTreeMap::new(), constants: BTreeMap::new() })
    }

    /// Build from relation masks, predicate masks and constants.
    pub fn from_parts(rel: Vec<u64>, unary: BTreeMap<String, u64>, constants: BTreeMap<String, usize>) -> Self {
        let names = (0..rel.len()).map(|i| i.to_string()).collect();
        FOStructure { names, rel, unary, constants }
    }

    /// The structure underlying a hybrid model: propositions become
    /// predicates of the same name and nominals become constants.
    pub fn from_model(m: &HybridModel) -> Self {
        FOStructure {
            names: m.names().to_vec(),
            rel: m.succ_masks().to_vec(),
            unary: m.valuation().clone(),
            constants: m.nominals().clone(),
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn add_pair(&mut self, a: usize, b: usize) {
        self.rel[a] |= 1 << b;
    }

    pub fn has_pair(&self, a: usize, b: usize) -> bool {
        self.rel[a] >> b & 1 == 1
    }

    pub fn rel_masks(&self) -> &[u64] {
        &self.rel
    }

    pub fn set_pred(&mut self, p: &str, a: usize, on: bool) {
        let m = self.unary.entry(p.to_string()).or_insert(0);
        if on {
            *m |= 1 << a;
        } else {
            *m &= !(1 << a);
        }
    }

    pub fn pred_mask(&self, p: &str) -> u64 {
        self.unary.get(p).copied().unwrap_or(0)
    }

    pub fn unary(&self) -> &BTreeMap<String, u64> {
        &self.unary
    }

    pub fn set_constant(&mut self, c: &str, a: usize) {
        self.constants.insert(c.to_string(), a);
    }

    pub fn constant(&self, c: &str) -> Option<usize> {
        self.constants.get(c).copied()
    }

    pub fn constants(&self) -> &BTreeMap<String, usize> {
        &self.constants
    }

    /// The hybrid model with the same relation, predicates read as
    /// propositions (names that are not proposition names are skipped)
    /// and constants as nominals.
    pub fn to_model(&self) -> HybridModel {
        let mut m = HybridModel::with_names(self.names.clone()).expect("sizes agree");
        for (a, &mask) in self.rel.iter().enumerate() {
            for b in bits(mask) {
                m.add_edge(a, b);
            }
        }
        for (p, &mask) in &self.unary {
            if crate::formula::is_prop_name(p) {
                m.set_prop_mask(p, mask);
            }
        }
        for (c, &a) in &self.constants {
            m.set_nominal(c, a);
        }
        m
    }

    pub fn from_json(text: &str) -> Result<Self, FoError> {
        let file: StructureFile = serde_json::from_str(text).map_err(|e| FoError::Format(e.to_string()))?;
        let mut s = FOStructure::with_names(file.domain)?;
        let idx = |s: &FOStructure, n: &str| s.index_of(n).ok_or_else(|| FoError::UnknownElement(n.to_string()));
        for (a, b) in &file.rel {
            let (a, b) = (idx(&s, a)?, idx(&s, b)?);
            s.add_pair(a, b);
        }
        for (p, elems) in &file.unary {
            s.unary.entry(p.clone()).or_insert(0);
            for e in elems {
                let e = idx(&s, e)?;
                s.set_pred(p, e, true);
            }
        }
        for (c, e) in &file.constants {
            let e = idx(&s, e)?;
            s.set_constant(c.strip_prefix('\'').unwrap_or(c), e);
        }
        Ok(s)
    }

    pub fn to_json(&self) -> String {
        let name = |i: usize| self.names[i].clone();
        let file = StructureFile {
            domain: self.names.clone(),
            rel: (0..self.len())
                .flat_map(|a| bits(self.rel[a]).map(move |b| (a, b)))
                .map(|(a, b)| (name(a), name(b)))
                .collect(),
            unary: self.unary.iter().map(|(p, &m)| (p.clone(), bits(m).map(name).collect())).collect(),
            constants: self.constants.iter().map(|(c, &e)| (c.clone(), name(e))).collect(),
        };
        serde_json::to_string_pretty(&file).expect("structure serializes")
    }
}

/// On-disk form of a structure, mirroring the model format.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureFile {
    pub domain: Vec<String>,
    #[serde(default)]
    pub rel: Vec<(String, String)>,
    #[serde(default)]
    pub unary: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub constants: BTreeMap<String, String>,
}

/// The word structure `({1..n}, <, (P_a))` of a nonempty string: elements
/// are positions named `1..n`, `<` is the strict order, and `P_a` holds the
/// positions carrying symbol `a`.
pub fn string_structure<S: AsRef<str>>(word: &[S]) -> Result<FOStructure, FoError> {
    let n = word.len();
    let mut s = FOStructure::with_names((1..=n).map(|i| i.to_string()).collect())?;
    for (a, letter) in word.iter().enumerate() {
        s.rel[a] = full_mask(n) & !full_mask(a + 1);
        s.set_pred(&format!("P_{}", letter.as_ref()), a, true);
    }
    Ok(s)
}

// ---------------------------------------------------------------------------
// Evaluation

/// Three-valued truth for evaluation over partially decided structures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tri {
    False,
    Unknown,
    True,
}

impl Tri {
    fn not(self) -> Tri {
        match self {
            Tri::False => Tri::True,
            Tri::True => Tri::False,
            Tri::Unknown => Tri::Unknown,
        }
    }

    fn and(self, o: Tri) -> Tri {
        match (self, o) {
            (Tri::False, _) | (_, Tri::False) => Tri::False,
            (Tri::True, Tri::True) => Tri::True,
            _ => Tri::Unknown,
        }
    }

    fn or(self, o: Tri) -> Tri {
        self.not().and(o.not()).not()
    }

    fn of(known_true: bool, known_false: bool) -> Tri {
        if known_true {
            Tri::True
        } else if known_false {
            Tri::False
        } else {
            Tri::Unknown
        }
    }
}

/// A structure whose relation and predicates may be partly undecided:
/// `*_yes` bits are known true, `*_no` bits known false.
#[derive(Debug, Clone)]
pub struct PartialStructure {
    pub n: usize,
    pub rel_yes: Vec<u64>,
    pub rel_no: Vec<u64>,
    pub pred_yes: Vec<u64>,
    pub pred_no: Vec<u64>,
    pub consts: Vec<usize>,
}

#[derive(Debug, Clone, Copy)]
enum Slot {
    Var(usize),
    Const(usize),
}

#[derive(Debug, Clone)]
enum Op {
    True,
    False,
    Rel(Slot, Slot),
    RelPlus(Slot, Slot),
    Eq(Slot, Slot),
    Pred(usize, Slot),
    Not(Box<Op>),
    And(Box<Op>, Box<Op>),
    Or(Box<Op>, Box<Op>),
    Implies(Box<Op>, Box<Op>),
    Iff(Box<Op>, Box<Op>),
    Exists(usize, Box<Op>),
    Forall(usize, Box<Op>),
}

/// An FO formula with names resolved to slots, for repeated evaluation.
#[derive(Debug, Clone)]
pub struct FoProgram {
    op: Op,
    vars: Vec<String>,
    preds: Vec<String>,
    consts: Vec<String>,
}

impl FoProgram {
    pub fn new(f: &FOFormula) -> Self {
        let mut p = FoProgram { op: Op::True, vars: Vec::new(), preds: f.predicates(), consts: f.constants() };
        // Every distinct quantified occurrence gets its own slot so that
        // shadowing behaves like ordinary scoping.
        let free: Vec<String> = f.free_vars().into_iter().collect();
        p.vars = free.clone();
        let mut scope: Vec<(String, usize)> = free.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
        p.op = p.compile(f, &mut scope);
        p
    }

    fn slot(&self, t: &Term, scope: &[(String, usize)]) -> Slot {
        match t {
            Term::Var(v) => Slot::Var(scope.iter().rev().find(|(n, _)| n == v).expect("variable in scope").1),
            Term::Const(c) => Slot::Const(self.consts.iter().position(|k| k == c).expect("constant collected")),
        }
    }

    fn compile(&mut self, f: &FOFormula, scope: &mut Vec<(String, usize)>) -> Op {
        let b = |x: Op| Box::new(x);
        match f {
            FOFormula::True => Op::True,
            FOFormula::False => Op::False,
            FOFormula::Rel(a, c) => Op::Rel(self.slot(a, scope), self.slot(c, scope)),
            FOFormula::RelPlus(a, c) => Op::RelPlus(self.slot(a, scope), self.slot(c, scope)),
            FOFormula::Eq(a, c) => Op::Eq(self.slot(a, scope), self.slot(c, scope)),
            FOFormula::Pred(p, t) => {
                Op::Pred(self.preds.iter().position(|q| q == p).expect("predicate collected"), self.slot(t, scope))
            }
            FOFormula::Not(a) => Op::Not(b(self.compile(a, scope))),
            FOFormula::And(x, y) => Op::And(b(self.compile(x, scope)), b(self.compile(y, scope))),
            FOFormula::Or(x, y) => Op::Or(b(self.compile(x, scope)), b(self.compile(y, scope))),
            FOFormula::Implies(x, y) => Op::Implies(b(self.compile(x, scope)), b(self.compile(y, scope))),
            FOFormula::Iff(x, y) => Op::Iff(b(self.compile(x, scope)), b(self.compile(y, scope))),
            FOFormula::Exists(v, body) | FOFormula::Forall(v, body) => {
                let slot = self.vars.len();
                self.vars.push(v.clone());
                scope.push((v.clone(), slot));
                let inner = self.compile(body, scope);
                scope.pop();
                if matches!(f, FOFormula::Exists(..)) {
                    Op::Exists(slot, b(inner))
                } else {
                    Op::Forall(slot, b(inner))
                }
            }
        }
    }

    /// Predicate names in slot order.
    pub fn predicates(&self) -> &[String] {
        &self.preds
    }

    /// Constant names in slot order.
    pub fn constants(&self) -> &[String] {
        &self.consts
    }

    /// Number of variable slots; free variables occupy the first ones.
    pub fn var_slots(&self) -> usize {
        self.vars.len()
    }

    /// Evaluate a sentence over a partial structure.
    pub fn eval_partial(&self, s: &PartialStructure, plus: Option<(&[u64], &[u64])>) -> Tri {
        let mut env = vec![0usize; self.vars.len()];
        eval_op(&self.op, s, plus, &mut env)
    }

    /// Evaluate with the free variables (in sorted order) set by `env`.
    pub fn eval_with(&self, s: &PartialStructure, plus: Option<(&[u64], &[u64])>, free: &[usize]) -> Tri {
        let mut env = vec![0usize; self.vars.len()];
        env[..free.len()].copy_from_slice(free);
        eval_op(&self.op, s, plus, &mut env)
    }
}

fn resolve(slot: Slot, s: &PartialStructure, env: &[usize]) -> usize {
    match slot {
        Slot::Var(v) => env[v],
        Slot::Const(c) => s.consts[c],
    }
}

fn eval_op(op: &Op, s: &PartialStructure, plus: Option<(&[u64], &[u64])>, env: &mut Vec<usize>) -> Tri {
    match op {
        Op::True => Tri::True,
        Op::False => Tri::False,
        Op::Rel(a, b) => {
            let (a, b) = (resolve(*a, s, env), resolve(*b, s, env));
            Tri::of(s.rel_yes[a] >> b & 1 == 1, s.rel_no[a] >> b & 1 == 1)
        }
        Op::RelPlus(a, b) => {
            let (a, b) = (resolve(*a, s, env), resolve(*b, s, env));
            let (yes, maybe) = plus.expect("closure supplied for R+");
            Tri::of(yes[a] >> b & 1 == 1, maybe[a] >> b & 1 == 0)
        }
        Op::Eq(a, b) => {
            if resolve(*a, s, env) == resolve(*b, s, env) {
                Tri::True
            } else {
                Tri::False
            }
        }
        Op::Pred(p, t) => {
            let e = resolve(*t, s, env);
            Tri::of(s.pred_yes[*p] >> e & 1 == 1, s.pred_no[*p] >> e & 1 == 1)
        }
        Op::Not(a) => eval_op(a, s, plus, env).not(),
        Op::And(a, b) => {
            let x = eval_op(a, s, plus, env);
            if x == Tri::False {
                return x;
            }
            x.and(eval_op(b, s, plus, env))
        }
        Op::Or(a, b) => {
            let x = eval_op(a, s, plus, env);
            if x == Tri::True {
                return x;
            }
            x.or(eval_op(b, s, plus, env))
        }
        Op::Implies(a, b) => {
            let x = eval_op(a, s, plus, env).not();
            if x == Tri::True {
                return x;
            }
            x.or(eval_op(b, s, plus, env))
        }
        Op::Iff(a, b) => {
            let x = eval_op(a, s, plus, env);
            let y = eval_op(b, s, plus, env);
            x.and(y).or(x.not().and(y.not()))
        }
        Op::Exists(v, body) => {
            let mut acc = Tri::False;
            for e in 0..s.n {
                env[*v] = e;
                acc = acc.or(eval_op(body, s, plus, env));
                if acc == Tri::True {
                    break;
                }
            }
            acc
        }
        Op::Forall(v, body) => {
            let mut acc = Tri::True;
            for e in 0..s.n {
                env[*v] = e;
                acc = acc.and(eval_op(body, s, plus, env));
                if acc == Tri::False {
                    break;
                }
            }
            acc
        }
    }
}

impl PartialStructure {
    /// The fully decided view of `s` for the predicates and constants of `p`.
    pub fn total(s: &FOStructure, p: &FoProgram) -> Result<Self, FoError> {
        let n = s.len();
        let all = full_mask(n);
        let mut consts = Vec::new();
        for c in &p.consts {
            consts.push(s.constant(c).ok_or_else(|| FoError::UnboundConstant(c.clone()))?);
        }
        let pred_yes: Vec<u64> = p.preds.iter().map(|q| s.pred_mask(q)).collect();
        Ok(PartialStructure {
            n,
            rel_yes: s.rel.clone(),
            rel_no: s.rel.iter().map(|m| !m & all).collect(),
            pred_no: pred_yes.iter().map(|m| !m & all).collect(),
            pred_yes,
            consts,
        })
    }
}

/// Truth of `alpha` in `s` with free variables interpreted by `env`
/// (variable name to element index). `R+` uses the transitive closure.
pub fn fo_eval(s: &FOStructure, env: &BTreeMap<String, usize>, alpha: &FOFormula) -> Result<bool, FoError> {
    let p = FoProgram::new(alpha);
    let total = PartialStructure::total(s, &p)?;
    let mut free = Vec::new();
    for v in alpha.free_vars() {
        let e = *env.get(&v).ok_or_else(|| FoError::UnboundVariable(v.clone()))?;
        if e >= s.len() {
            return Err(FoError::UnknownElement(e.to_string()));
        }
        free.push(e);
    }
    let closure = alpha.uses_closure().then(|| closure_masks(&s.rel));
    let plus = closure.as_ref().map(|c| (c.as_slice(), c.as_slice()));
    Ok(p.eval_with(&total, plus, &free) == Tri::True)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(s: &str) -> FOFormula {
        parse_fo(s).unwrap()
    }

    fn two_chain() -> FOStructure {
        let mut s = FOStructure::new(2).unwrap();
        s.add_pair(0, 1);
        s
    }

    #[test]
    fn parse_and_print_round_trip() {
        for src in [
            "E x. E y. R(x, y)",
            "A x. ~R(x, x) & (E x. R(x, x))",
            "E x. E y. ~x = y",
            "P(x) -> Q('c) | R+(x, 'c)",
            "(E x. P(x)) & Q(y)",
            "P(a) <-> b = c",
        ] {
            let g = f(src);
            assert_eq!(f(&g.to_string()), g, "{src}");
        }
        assert_eq!(f("x < y"), FOFormula::rel(Term::var("x"), Term::var("y")));
        assert_eq!(f("R(x)"), FOFormula::pred("R", Term::var("x")));
    }

    #[test]
    fn parse_errors() {
        assert!(parse_fo("E x R(x,x)").is_err());
        assert!(parse_fo("Q(x, y)").is_err());
        assert!(parse_fo("_q(x)").is_err());
        assert!(parse_fo_trusted("_q(x)").is_ok());
        assert_eq!(parse_fo("x &").unwrap_err().col, 3);
    }

    #[test]
    fn lfp_form() {
        let g = FOFormula::rel_plus(Term::var("a"), Term::var("b"));
        assert_eq!(print_fo(&g, true), "[LFP W(x,y).(R(x,y) | E z.(R(z,y) & W(x,z)))](a,b)");
        assert_eq!(print_fo(&g, false), "R+(a, b)");
    }

    #[test]
    fn eval_examples() {
        let s = two_chain();
        let env = BTreeMap::new();
        assert!(fo_eval(&s, &env, &f("E x. E y. R(x,y)")).unwrap());
        let mut env2 = BTreeMap::new();
        env2.insert("x".to_string(), 0);
        env2.insert("y".to_string(), 1);
        assert!(fo_eval(&s, &env2, &f("R+(x,y)")).unwrap());
        assert!(!fo_eval(&s, &env2, &f("R+(y,x)")).unwrap());
        let single = FOStructure::new(1).unwrap();
        assert!(!fo_eval(&single, &env, &f("E x. E y. ~x = y")).unwrap());
        assert_eq!(fo_eval(&s, &env, &f("R(x,x)")), Err(FoError::UnboundVariable("x".into())));
        assert_eq!(fo_eval(&s, &env, &f("Q('c)")), Err(FoError::UnboundConstant("c".into())));
    }

    #[test]
    fn closure_through_chain() {
        let mut s = FOStructure::new(3).unwrap();
        s.add_pair(0, 1);
        s.add_pair(1, 2);
        assert!(fo_eval(&s, &BTreeMap::new(), &f("E x. E y. R+(x,y) & ~R(x,y)")).unwrap());
    }

    #[test]
    fn shadowed_quantifiers() {
        let s = two_chain();
        // The inner x is the successor, the outer x must still see it.
        assert!(fo_eval(&s, &BTreeMap::new(), &f("E x. (E x. P(x) | R(x,x)) | E y. R(x,y)")).unwrap());
    }

    #[test]
    fn word_structure() {
        let s = string_structure(&["a", "b"]).unwrap();
        assert_eq!(s.names(), &["1".to_string(), "2".to_string()]);
        assert!(s.has_pair(0, 1) && !s.has_pair(1, 0) && !s.has_pair(0, 0));
        assert_eq!(s.pred_mask("P_a"), 0b01);
        assert_eq!(s.pred_mask("P_b"), 0b10);
        assert_eq!(string_structure(&["a"]).unwrap().len(), 1);
    }

    #[test]
    fn fragments() {
        assert!(check_all_u1(&f("A x. E y. R(x,y) & P(y)"), 1).is_ok());
        assert!(check_all_u1(&f("E x. E y. x = y"), 4).is_err());
        assert!(check_all_u1(&f("P(x) & Q(x)"), 1).is_err());
        assert!(check_mc_eq(&f("E x. P(x) & x = 'c")).is_ok());
        assert!(check_mc_eq(&f("R(x,y)")).is_err());
    }

    #[test]
    fn json_round_trip() {
        let mut s = two_chain();
        s.set_pred("P", 1, true);
        s.set_constant("c", 0);
        assert_eq!(FOStructure::from_json(&s.to_json()).unwrap(), s);
    }
}
