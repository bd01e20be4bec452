//! Recursive-descent parser for the ASCII formula syntax.
//!
//! Precedence, tightest first: prefix operators (`~ <> [] F G P H E A @`),
//! then `&`, `|`, `->` (right-associative) and `<->` (left-associative).
//! `down $x . f` takes everything to its right.

use super::{Atom, Formula, RESERVED_PREFIX};
use thiserror::Error;

/// A syntax error with a 1-based source position.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Nominal(String),
    Var(String),
    Tilde,
    Dia,
    Box,
    At,
    Dot,
    LParen,
    RParen,
    Comma,
    Amp,
    Bar,
    Arrow,
    DArrow,
    /// `U`, `U+`, `U++`, `S`, `S+`, `S++`: the letter and the number of pluses.
    Binary(char, u8),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Nominal(s) => format!("nominal '{s}"),
            Tok::Var(s) => format!("variable ${s}"),
            Tok::Tilde => "'~'".into(),
            Tok::Dia => "'<>'".into(),
            Tok::Box => "'[]'".into(),
            Tok::At => "'@'".into(),
            Tok::Dot => "'.'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Comma => "','".into(),
            Tok::Amp => "'&'".into(),
            Tok::Bar => "'|'".into(),
            Tok::Arrow => "'->'".into(),
            Tok::DArrow => "'<->'".into(),
            Tok::Binary(c, n) => format!("'{}{}'", c, "+".repeat(*n as usize)),
            Tok::Eof => "end of input".into(),
        }
    }
}

/// Words that cannot be used as proposition names.
const KEYWORDS: &[&str] = &["true", "false", "down", "F", "G", "P", "H", "E", "A", "U", "S"];

/// True when `name` is usable as a proposition: an identifier that is not a keyword.
pub fn is_prop_name(name: &str) -> bool {
    is_identifier(name) && !KEYWORDS.contains(&name)
}

pub(crate) fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn err(&self, line: usize, col: usize, message: impl Into<String>) -> ParseError {
        ParseError { line, col, message: message.into() }
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

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn ident(&mut self) -> String {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == b'_' {
                self.bump();
            } else {
                break;
            }
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn tokens(mut self) -> Result<Vec<(Tok, usize, usize)>, ParseError> {
        let mut out = Vec::new();
        loop {
            while matches!(self.peek(), Some(c) if c.is_ascii_whitespace()) {
                self.bump();
            }
            let (line, col) = (self.line, self.col);
            let Some(c) = self.peek() else {
                out.push((Tok::Eof, line, col));
                return Ok(out);
            };
            let tok = match c {
                b'~' => {
                    self.bump();
                    Tok::Tilde
                }
                b'@' => {
                    self.bump();
                    Tok::At
                }
                b'.' => {
                    self.bump();
                    Tok::Dot
                }
                b'(' => {
                    self.bump();
                    Tok::LParen
                }
                b')' => {
                    self.bump();
                    Tok::RParen
                }
                b',' => {
                    self.bump();
                    Tok::Comma
                }
                b'&' => {
                    self.bump();
                    Tok::Amp
                }
                b'|' => {
                    self.bump();
                    Tok::Bar
                }
                b'[' => {
                    self.bump();
                    if self.peek() != Some(b']') {
                        return Err(self.err(line, col, "expected ']' after '['"));
                    }
                    self.bump();
                    Tok::Box
                }
                b'-' => {
                    self.bump();
                    if self.peek() != Some(b'>') {
                        return Err(self.err(line, col, "expected '>' after '-'"));
                    }
                    self.bump();
                    Tok::Arrow
                }
                b'<' => {
                    self.bump();
                    match self.peek() {
                        Some(b'>') => {
                            self.bump();
                            Tok::Dia
                        }
                        Some(b'-') => {
                            self.bump();
                            if self.peek() != Some(b'>') {
                                return Err(self.err(line, col, "expected '<->'"));
                            }
                            self.bump();
                            Tok::DArrow
                        }
                        _ => return Err(self.err(line, col, "expected '<>' or '<->'")),
                    }
                }
                b'\'' | b'$' => {
                    self.bump();
                    let name = self.ident();
                    if !is_identifier(&name) {
                        let what = if c == b'\'' { "nominal" } else { "state variable" };
                        return Err(self.err(line, col, format!("expected {what} name")));
                    }
                    if c == b'\'' {
                        Tok::Nominal(name)
                    } else {
                        Tok::Var(name)
                    }
                }
                c if c.is_ascii_alphabetic() || c == b'_' => {
                    let name = self.ident();
                    if name == "U" || name == "S" {
                        let mut plus = 0u8;
                        while self.peek() == Some(b'+') && plus < 2 {
                            self.bump();
                            plus += 1;
                        }
                        Tok::Binary(name.chars().next().unwrap(), plus)
                    } else {
                        Tok::Ident(name)
                    }
                }
                other => return Err(self.err(line, col, format!("unexpected character '{}'", other as char))),
            };
            out.push((tok, line, col));
        }
    }
}

struct Parser {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
    strict: bool,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn next(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err_here(&self, message: impl Into<String>) -> ParseError {
        let (_, line, col) = &self.toks[self.pos];
        ParseError { line: *line, col: *col, message: message.into() }
    }

    fn expect(&mut self, want: Tok, context: &str) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.next();
            Ok(())
        } else {
            Err(self.err_here(format!("expected {} {context}, found {}", want.describe(), self.peek().describe())))
        }
    }

    fn check_reserved(&self, name: &str) -> Result<(), ParseError> {
        if self.strict && name.starts_with(RESERVED_PREFIX) {
            Err(self.err_here(format!("names starting with '{RESERVED_PREFIX}' are reserved")))
        } else {
            Ok(())
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.implication()?;
        while *self.peek() == Tok::DArrow {
            self.next();
            let right = self.implication()?;
            left = Formula::iff(left, right);
        }
        Ok(left)
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let left = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.next();
            let right = self.implication()?;
            return Ok(Formula::implies(left, right));
        }
        Ok(left)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.conjunction()?;
        while *self.peek() == Tok::Bar {
            self.next();
            let right = self.conjunction()?;
            left = Formula::or(left, right);
        }
        Ok(left)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.next();
            let right = self.unary()?;
            left = Formula::and(left, right);
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let tok = self.peek().clone();
        match tok {
            Tok::Tilde => {
                self.next();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Dia => {
                self.next();
                Ok(Formula::diamond(self.unary()?))
            }
            Tok::Box => {
                self.next();
                Ok(Formula::boxed(self.unary()?))
            }
            Tok::At => {
                self.next();
                let term = match self.next() {
                    Tok::Nominal(n) => {
                        self.check_reserved(&n)?;
                        Atom::nominal(n)
                    }
                    Tok::Var(v) => {
                        self.check_reserved(&v)?;
                        Atom::var(v)
                    }
                    other => {
                        self.pos -= 1;
                        return Err(self.err_here(format!(
                            "expected nominal or state variable after '@', found {}",
                            other.describe()
                        )));
                    }
                };
                Ok(Formula::at(term, self.unary()?))
            }
            Tok::Binary(c, plus) => {
                self.next();
                let name = format!("{}{}", c, "+".repeat(plus as usize));
                self.expect(Tok::LParen, &format!("after '{name}'"))?;
                let a = self.formula()?;
                self.expect(Tok::Comma, &format!("between the arguments of '{name}'"))?;
                let b = self.formula()?;
                self.expect(Tok::RParen, &format!("to close '{name}'"))?;
                Ok(match (c, plus) {
                    ('U', 0) => Formula::until(a, b),
                    ('U', 1) => Formula::until_plus(a, b),
                    ('U', _) => Formula::until_pp(a, b),
                    ('S', 0) => Formula::since(a, b),
                    ('S', 1) => Formula::since_plus(a, b),
                    _ => Formula::since_pp(a, b),
                })
            }
            Tok::LParen => {
                self.next();
                let f = self.formula()?;
                self.expect(Tok::RParen, "to close '('")?;
                Ok(f)
            }
            Tok::Nominal(n) => {
                self.check_reserved(&n)?;
                self.next();
                Ok(Formula::Atom(Atom::nominal(n)))
            }
            Tok::Var(v) => {
                self.check_reserved(&v)?;
                self.next();
                Ok(Formula::Atom(Atom::var(v)))
            }
            Tok::Ident(word) => {
                self.next();
                match word.as_str() {
                    "true" => Ok(Formula::True),
                    "false" => Ok(Formula::False),
                    "F" => Ok(Formula::future(self.unary()?)),
                    "G" => Ok(Formula::globally(self.unary()?)),
                    "P" => Ok(Formula::past(self.unary()?)),
                    "H" => Ok(Formula::historically(self.unary()?)),
                    "E" => Ok(Formula::exists(self.unary()?)),
                    "A" => Ok(Formula::forall(self.unary()?)),
                    "down" => {
                        let var = match self.next() {
                            Tok::Var(v) => v,
                            other => {
                                self.pos -= 1;
                                return Err(self.err_here(format!(
                                    "expected state variable after 'down', found {}",
                                    other.describe()
                                )));
                            }
                        };
                        if self.strict && var.starts_with(RESERVED_PREFIX) {
                            self.pos -= 1;
                            return Err(self.err_here(format!("names starting with '{RESERVED_PREFIX}' are reserved")));
                        }
                        self.expect(Tok::Dot, "after the variable bound by 'down'")?;
                        Ok(Formula::down(&var, self.formula()?))
                    }
                    _ => Ok(Formula::prop(&word)),
                }
            }
            other => Err(self.err_here(format!("expected a formula, found {}", other.describe()))),
        }
    }
}

fn parse_with(text: &str, strict: bool) -> Result<Formula, ParseError> {
    let toks = Lexer { src: text.as_bytes(), pos: 0, line: 1, col: 1 }.tokens()?;
    let mut p = Parser { toks, pos: 0, strict };
    let f = p.formula()?;
    if *p.peek() != Tok::Eof {
        return Err(p.err_here(format!("unexpected {} after formula", p.peek().describe())));
    }
    Ok(f)
}

/// Parse user-supplied text. Nominals and variables whose names start with
/// the reserved prefix are rejected.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    parse_with(text, true)
}

/// Parse text produced by this crate, which may contain generated names.
pub fn parse_trusted(text: &str) -> Result<Formula, ParseError> {
    parse_with(text, false)
}
