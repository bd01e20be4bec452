//! Propositional dynamic logic over finite sibling-ordered trees.
//!
//! Programs move along the four tree axes (`left`, `right`, `up`, `down`,
//! each a single step) and combine by composition, union, Kleene star and
//! tests. Concrete syntax: `<pi>f`, `[pi]f`, programs `a;b`, `a + b`,
//! `a*`, `?f`.

use crate::model::{bits, full_mask};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// PDL formula. Disjunction, implication, falsity and boxes are derived.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PdlFormula {
    True,
    Atom(String),
    Not(Box<PdlFormula>),
    And(Box<PdlFormula>, Box<PdlFormula>),
    /// `<pi>f`.
    Dia(Box<PdlProgram>, Box<PdlFormula>),
}

/// PDL program.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PdlProgram {
    /// To the immediate left sibling.
    Left,
    /// To the immediate right sibling.
    Right,
    /// To the parent.
    Up,
    /// To any child.
    Down,
    Seq(Box<PdlProgram>, Box<PdlProgram>),
    Union(Box<PdlProgram>, Box<PdlProgram>),
    Star(Box<PdlProgram>),
    Test(Box<PdlFormula>),
}

impl PdlFormula {
    pub fn atom(name: &str) -> Self {
        PdlFormula::Atom(name.to_string())
    }

    pub fn falsum() -> Self {
        Self::not(PdlFormula::True)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: PdlFormula) -> Self {
        PdlFormula::Not(Box::new(f))
    }

    pub fn and(a: PdlFormula, b: PdlFormula) -> Self {
        PdlFormula::And(Box::new(a), Box::new(b))
    }

    /// `~(~a & ~b)`.
    pub fn or(a: PdlFormula, b: PdlFormula) -> Self {
        Self::not(Self::and(Self::not(a), Self::not(b)))
    }

    /// `~(a & ~b)`.
    pub fn implies(a: PdlFormula, b: PdlFormula) -> Self {
        Self::not(Self::and(a, Self::not(b)))
    }

    pub fn dia(p: PdlProgram, f: PdlFormula) -> Self {
        PdlFormula::Dia(Box::new(p), Box::new(f))
    }

    /// `[pi]f`, i.e. `~<pi>~f`.
    pub fn boxed(p: PdlProgram, f: PdlFormula) -> Self {
        Self::not(Self::dia(p, Self::not(f)))
    }

    /// Left-nested conjunction; `true` when empty.
    pub fn conj(items: impl IntoIterator<Item = PdlFormula>) -> Self {
        items.into_iter().reduce(Self::and).unwrap_or(PdlFormula::True)
    }

    /// Atom names in first-occurrence order.
    pub fn atoms(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut Vec<String>) {
        match self {
            PdlFormula::True => {}
            PdlFormula::Atom(a) => {
                if !out.contains(a) {
                    out.push(a.clone());
                }
            }
            PdlFormula::Not(a) => a.collect_atoms(out),
            PdlFormula::And(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
            PdlFormula::Dia(p, f) => {
                p.collect_atoms(out);
                f.collect_atoms(out);
            }
        }
    }
}

impl PdlProgram {
    pub fn seq(a: PdlProgram, b: PdlProgram) -> Self {
        PdlProgram::Seq(Box::new(a), Box::new(b))
    }

    pub fn union(a: PdlProgram, b: PdlProgram) -> Self {
        PdlProgram::Union(Box::new(a), Box::new(b))
    }

    pub fn star(a: PdlProgram) -> Self {
        PdlProgram::Star(Box::new(a))
    }

    /// `a;a*`.
    pub fn plus(a: PdlProgram) -> Self {
        Self::seq(a.clone(), Self::star(a))
    }

    pub fn test(f: PdlFormula) -> Self {
        PdlProgram::Test(Box::new(f))
    }

    fn collect_atoms(&self, out: &mut Vec<String>) {
        match self {
            PdlProgram::Seq(a, b) | PdlProgram::Union(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
            PdlProgram::Star(a) => a.collect_atoms(out),
            PdlProgram::Test(f) => f.collect_atoms(out),
            _ => {}
        }
    }
}

// ---------------------------------------------------------------------------
// Printing

fn write_formula(f: &PdlFormula, out: &mut String) {
    match f {
        PdlFormula::True => out.push_str("true"),
        PdlFormula::Atom(a) => out.push_str(a),
        PdlFormula::Not(a) => {
            out.push('~');
            write_unary(a, out);
        }
        PdlFormula::And(a, b) => {
            // Conjunction nests to the left, so only a right conjunct that
            // is itself a conjunction needs brackets.
            write_formula(a, out);
            out.push_str(" & ");
            write_unary(b, out);
        }
        PdlFormula::Dia(p, a) => {
            out.push('<');
            write_program(p, 0, out);
            out.push('>');
            write_unary(a, out);
        }
    }
}

fn write_unary(f: &PdlFormula, out: &mut String) {
    if matches!(f, PdlFormula::And(..)) {
        out.push('(');
        write_formula(f, out);
        out.push(')');
    } else {
        write_formula(f, out);
    }
}

/// Program precedence levels: 0 union, 1 sequence, 2 star, 3 atomic.
fn write_program(p: &PdlProgram, ctx: u8, out: &mut String) {
    let level = match p {
        PdlProgram::Union(..) => 0,
        PdlProgram::Seq(..) => 1,
        PdlProgram::Star(..) => 2,
        _ => 3,
    };
    let paren = level < ctx;
    if paren {
        out.push('(');
    }
    match p {
        PdlProgram::Left => out.push_str("left"),
        PdlProgram::Right => out.push_str("right"),
        PdlProgram::Up => out.push_str("up"),
        PdlProgram::Down => out.push_str("down"),
        PdlProgram::Seq(a, b) => {
            write_program(a, 1, out);
            out.push(';');
            write_program(b, 2, out);
        }
        PdlProgram::Union(a, b) => {
            write_program(a, 0, out);
            out.push_str(" + ");
            write_program(b, 1, out);
        }
        PdlProgram::Star(a) => {
            write_program(a, 3, out);
            out.push('*');
        }
        PdlProgram::Test(f) => {
            out.push('?');
            write_unary(f, out);
        }
    }
    if paren {
        out.push(')');
    }
}

impl fmt::Display for PdlFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_formula(self, &mut s);
        f.write_str(&s)
    }
}

impl fmt::Display for PdlProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_program(self, 0, &mut s);
        f.write_str(&s)
    }
}

// ---------------------------------------------------------------------------
// Parsing

/// A syntax error in PDL input, with a 1-based column.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("column {col}: {message}")]
pub struct PdlParseError {
    pub col: usize,
    pub message: String,
}

const AXES: [&str; 4] = ["left", "right", "up", "down"];

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn fail<T>(&self, m: &str) -> Result<T, PdlParseError> {
        Err(PdlParseError { col: self.pos + 1, message: m.to_string() })
    }

    fn ident(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        // A leading quote marks the atom of a translated nominal.
        let quoted = self.chars.get(self.pos) == Some(&'\'');
        let first = self.pos + usize::from(quoted);
        if !matches!(self.chars.get(first), Some(c) if c.is_ascii_alphabetic() || *c == '_') {
            return None;
        }
        self.pos = first;
        while matches!(self.chars.get(self.pos), Some(c) if c.is_ascii_alphanumeric() || *c == '_') {
            self.pos += 1;
        }
        Some(self.chars[start..self.pos].iter().collect())
    }

    fn formula(&mut self) -> Result<PdlFormula, PdlParseError> {
        let mut left = self.unary()?;
        while self.eat('&') {
            left = PdlFormula::and(left, self.unary()?);
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<PdlFormula, PdlParseError> {
        match self.peek() {
            Some('~') => {
                self.pos += 1;
                Ok(PdlFormula::not(self.unary()?))
            }
            Some('(') => {
                self.pos += 1;
                let f = self.formula()?;
                if !self.eat(')') {
                    return self.fail("expected ')'");
                }
                Ok(f)
            }
            Some('<') => {
                self.pos += 1;
                let p = self.program()?;
                if !self.eat('>') {
                    return self.fail("expected '>'");
                }
                Ok(PdlFormula::dia(p, self.unary()?))
            }
            Some('[') => {
                self.pos += 1;
                let p = self.program()?;
                if !self.eat(']') {
                    return self.fail("expected ']'");
                }
                Ok(PdlFormula::boxed(p, self.unary()?))
            }
            Some(_) => match self.ident() {
                Some(w) if w == "true" => Ok(PdlFormula::True),
                Some(w) if AXES.contains(&w.as_str()) => self.fail("axis name used as an atom"),
                Some(w) => Ok(PdlFormula::Atom(w)),
                None => self.fail("expected a formula"),
            },
            None => self.fail("unexpected end of input"),
        }
    }

    fn program(&mut self) -> Result<PdlProgram, PdlParseError> {
        let mut left = self.seq()?;
        while self.eat('+') {
            left = PdlProgram::union(left, self.seq()?);
        }
        Ok(left)
    }

    fn seq(&mut self) -> Result<PdlProgram, PdlParseError> {
        let mut left = self.starred()?;
        while self.eat(';') {
            left = PdlProgram::seq(left, self.starred()?);
        }
        Ok(left)
    }

    fn starred(&mut self) -> Result<PdlProgram, PdlParseError> {
        let mut p = match self.peek() {
            Some('(') => {
                self.pos += 1;
                let p = self.program()?;
                if !self.eat(')') {
                    return self.fail("expected ')'");
                }
                p
            }
            Some('?') => {
                self.pos += 1;
                PdlProgram::test(self.unary()?)
            }
            _ => match self.ident().as_deref() {
                Some("left") => PdlProgram::Left,
                Some("right") => PdlProgram::Right,
                Some("up") => PdlProgram::Up,
                Some("down") => PdlProgram::Down,
                _ => return self.fail("expected a program"),
            },
        };
        while self.eat('*') {
            p = PdlProgram::star(p);
        }
        Ok(p)
    }
}

/// Parse PDL text as printed by [`PdlFormula`]'s `Display`.
pub fn parse_pdl(src: &str) -> Result<PdlFormula, PdlParseError> {
    let mut p = Parser { chars: src.chars().collect(), pos: 0 };
    let f = p.formula()?;
    if p.peek().is_some() {
        return p.fail("unexpected trailing input");
    }
    Ok(f)
}

// ---------------------------------------------------------------------------
// Trees

/// Errors from tree evaluation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PdlError {
    #[error("node {0} is not in the tree")]
    UnknownNode(usize),
}

/// A finite tree whose children are totally ordered, with labels.
/// Node 0 is the root; nodes are numbered in pre-order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SiblingTree {
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    labels: BTreeMap<String, u64>,
}

impl SiblingTree {
    /// A single root.
    pub fn root() -> Self {
        SiblingTree { parent: vec![None], children: vec![Vec::new()], labels: BTreeMap::new() }
    }

    /// Append a new last child of `p` and return its index.
    pub fn add_child(&mut self, p: usize) -> usize {
        assert!(self.parent.len() < 64, "trees are limited to 64 nodes");
        let id = self.parent.len();
        self.parent.push(Some(p));
        self.children.push(Vec::new());
        self.children[p].push(id);
        id
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn parent(&self, n: usize) -> Option<usize> {
        self.parent[n]
    }

    pub fn children(&self, n: usize) -> &[usize] {
        &self.children[n]
    }

    pub fn set_label(&mut self, atom: &str, n: usize, on: bool) {
        let m = self.labels.entry(atom.to_string()).or_insert(0);
        if on {
            *m |= 1 << n;
        } else {
            *m &= !(1 << n);
        }
    }

    pub fn label_mask(&self, atom: &str) -> u64 {
        self.labels.get(atom).copied().unwrap_or(0)
    }

    pub fn labels(&self) -> &BTreeMap<String, u64> {
        &self.labels
    }

    /// Successor masks of one axis.
    pub fn axis(&self, p: &PdlProgram) -> Vec<u64> {
        let n = self.len();
        let mut out = vec![0u64; n];
        for (v, kids) in self.children.iter().enumerate() {
            for (k, &c) in kids.iter().enumerate() {
                match p {
                    PdlProgram::Down => out[v] |= 1 << c,
                    PdlProgram::Up => out[c] |= 1 << v,
                    PdlProgram::Right if k + 1 < kids.len() => out[c] |= 1 << kids[k + 1],
                    PdlProgram::Left if k > 0 => out[c] |= 1 << kids[k - 1],
                    _ => {}
                }
            }
        }
        out
    }

    /// Relation of a program as successor masks.
    pub fn relation(&self, p: &PdlProgram) -> Vec<u64> {
        let n = self.len();
        match p {
            PdlProgram::Left | PdlProgram::Right | PdlProgram::Up | PdlProgram::Down => self.axis(p),
            PdlProgram::Seq(a, b) => {
                let (ra, rb) = (self.relation(a), self.relation(b));
                ra.iter().map(|&m| bits(m).fold(0, |acc, s| acc | rb[s])).collect()
            }
            PdlProgram::Union(a, b) => {
                let (ra, rb) = (self.relation(a), self.relation(b));
                ra.iter().zip(&rb).map(|(x, y)| x | y).collect()
            }
            PdlProgram::Star(a) => {
                let r = self.relation(a);
                let mut out: Vec<u64> = (0..n).map(|i| 1u64 << i).collect();
                loop {
                    let next: Vec<u64> = out.iter().map(|&m| m | bits(m).fold(0, |acc, s| acc | r[s])).collect();
                    if next == out {
                        return out;
                    }
                    out = next;
                }
            }
            PdlProgram::Test(f) => {
                let ext = self.extension(f);
                (0..n).map(|i| ext & 1 << i).collect()
            }
        }
    }

    /// The nodes where `f` holds.
    pub fn extension(&self, f: &PdlFormula) -> u64 {
        let all = full_mask(self.len());
        match f {
            PdlFormula::True => all,
            PdlFormula::Atom(a) => self.label_mask(a) & all,
            PdlFormula::Not(a) => !self.extension(a) & all,
            PdlFormula::And(a, b) => self.extension(a) & self.extension(b),
            PdlFormula::Dia(p, a) => {
                let r = self.relation(p);
                let target = self.extension(a);
                (0..self.len()).filter(|&i| r[i] & target != 0).fold(0, |acc, i| acc | 1 << i)
            }
        }
    }
}

/// Truth of `f` at `node`.
pub fn pdl_eval(t: &SiblingTree, node: usize, f: &PdlFormula) -> Result<bool, PdlError> {
    if node >= t.len() {
        return Err(PdlError::UnknownNode(node));
    }
    Ok(t.extension(f) >> node & 1 == 1)
}

/// Every unlabeled ordered tree with exactly `n` nodes, numbered in
/// pre-order: each new node hangs below some node of the current
/// rightmost branch.
pub fn tree_shapes(n: usize) -> Vec<SiblingTree> {
    if n == 0 {
        return Vec::new();
    }
    let mut level = vec![SiblingTree::root()];
    for _ in 1..n {
        let mut next = Vec::new();
        for t in &level {
            let last = t.len() - 1;
            let mut path = vec![last];
            while let Some(p) = t.parent(*path.last().expect("nonempty")) {
                path.push(p);
            }
            for &p in path.iter().rev() {
                let mut u = t.clone();
                u.add_child(p);
                next.push(u);
            }
        }
        level = next;
    }
    level
}

/// All ordered trees with at most `n` nodes and every labeling over
/// `atoms`, in a fixed order: by size, then shape, then labeling.
pub fn enumerate_trees(n: usize, atoms: &[String]) -> impl Iterator<Item = SiblingTree> + '_ {
    (1..=n).flat_map(move |k| {
        tree_shapes(k).into_iter().flat_map(move |shape| {
            let width = k * atoms.len();
            assert!(width < 64, "labeling space too large");
            (0..1u64 << width).map(move |code| {
                let mut t = shape.clone();
                for (j, a) in atoms.iter().enumerate() {
                    let mask = code >> (j * k) & full_mask(k);
                    t.labels.insert(a.clone(), mask);
                }
                t
            })
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use PdlProgram::*;

    fn p(s: &str) -> PdlFormula {
        PdlFormula::atom(s)
    }

    #[test]
    fn axes_on_small_tree() {
        let mut t = SiblingTree::root();
        let c = t.add_child(0);
        t.set_label("p", c, true);
        assert!(pdl_eval(&t, 0, &PdlFormula::dia(Down, p("p"))).unwrap());
        assert!(!pdl_eval(&t, 0, &PdlFormula::dia(Up, PdlFormula::True)).unwrap());
        assert_eq!(pdl_eval(&t, 5, &PdlFormula::True), Err(PdlError::UnknownNode(5)));
    }

    #[test]
    fn until_program_on_chain() {
        let mut t = SiblingTree::root();
        let a = t.add_child(0);
        let b = t.add_child(a);
        t.set_label("q", a, true);
        t.set_label("p", b, true);
        let prog = PdlProgram::seq(PdlProgram::star(PdlProgram::seq(Down, PdlProgram::test(p("q")))), Down);
        let f = PdlFormula::dia(prog, p("p"));
        assert!(pdl_eval(&t, 0, &f).unwrap());
        t.set_label("q", a, false);
        assert!(!pdl_eval(&t, 0, &f).unwrap());
    }

    #[test]
    fn siblings() {
        let mut t = SiblingTree::root();
        let a = t.add_child(0);
        let b = t.add_child(0);
        t.set_label("p", b, true);
        assert!(pdl_eval(&t, a, &PdlFormula::dia(Right, p("p"))).unwrap());
        assert!(!pdl_eval(&t, b, &PdlFormula::dia(Right, PdlFormula::True)).unwrap());
        assert!(pdl_eval(&t, b, &PdlFormula::dia(Left, PdlFormula::True)).unwrap());
    }

    #[test]
    fn shape_counts() {
        let counts: Vec<usize> = (1..=5).map(|n| tree_shapes(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 14]);
        let atoms = vec!["p".to_string()];
        assert_eq!(enumerate_trees(2, &atoms).count(), 2 + 4);
    }

    #[test]
    fn print_parse_round_trip() {
        let prog = PdlProgram::seq(PdlProgram::star(PdlProgram::seq(Down, PdlProgram::test(p("q")))), Down);
        let f = PdlFormula::and(
            PdlFormula::dia(prog, p("p")),
            PdlFormula::boxed(PdlProgram::union(Up, PdlProgram::plus(Left)), PdlFormula::and(p("a"), p("b"))),
        );
        assert_eq!(PdlFormula::dia(PdlProgram::star(Down), p("p")).to_string(), "<down*>p");
        assert_eq!(parse_pdl(&f.to_string()).unwrap(), f);
        let g = PdlFormula::and(p("a"), PdlFormula::and(p("b"), p("c")));
        assert_eq!(parse_pdl(&g.to_string()).unwrap(), g);
        assert_eq!(parse_pdl("[up]p").unwrap(), PdlFormula::boxed(Up, p("p")));
    }
}
