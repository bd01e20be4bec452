//! Formulas of the hybrid language and structural operations on them.
//!
//! Atoms carry their kind explicitly: a bare identifier is a proposition,
//! `'i` is a nominal and `$x` is a state variable. Derived connectives
//! (`|`, `->`, `<->`, `[]`, `G`, `H`, `A`) are stored as their own nodes so
//! that printing is faithful; the checker gives them their dual readings.

mod ops;
mod parse;
mod print;

pub use ops::{diamond_closure, fragment_of, free_vars, strip_free, Fragment, FragmentError};
pub use parse::{is_prop_name, parse, parse_trusted, ParseError};

use std::fmt;

/// The three kinds of atomic symbols.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AtomKind {
    /// A propositional letter, written as a bare identifier.
    Prop,
    /// A nominal, true at exactly one state, written `'name`.
    Nominal,
    /// A state variable bound by `down`, written `$name`.
    Var,
}

/// An atomic symbol: kind plus identifier.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub kind: AtomKind,
    pub name: String,
}

impl Atom {
    pub fn prop(name: impl Into<String>) -> Self {
        Atom { kind: AtomKind::Prop, name: name.into() }
    }

    pub fn nominal(name: impl Into<String>) -> Self {
        Atom { kind: AtomKind::Nominal, name: name.into() }
    }

    pub fn var(name: impl Into<String>) -> Self {
        Atom { kind: AtomKind::Var, name: name.into() }
    }

    /// True for nominals and state variables, the atoms that may follow `@`.
    pub fn is_term(&self) -> bool {
        self.kind != AtomKind::Prop
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            AtomKind::Prop => write!(f, "{}", self.name),
            AtomKind::Nominal => write!(f, "'{}", self.name),
            AtomKind::Var => write!(f, "${}", self.name),
        }
    }
}

/// A formula of the full hybrid/temporal language.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(Atom),
    True,
    False,
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    /// `<>f`
    Diamond(Box<Formula>),
    /// `[]f`, read as `~<>~f`.
    Box(Box<Formula>),
    /// `F f`, same relation as `<>`.
    Future(Box<Formula>),
    /// `G f`, read as `~F~f`.
    Globally(Box<Formula>),
    /// `P f`, the converse relation.
    Past(Box<Formula>),
    /// `H f`, read as `~P~f`.
    Historically(Box<Formula>),
    /// `E f`: true somewhere in the model.
    Exists(Box<Formula>),
    /// `A f`, read as `~E~f`.
    Forall(Box<Formula>),
    /// `@t f` where `t` is a nominal or a state variable.
    At(Atom, Box<Formula>),
    /// `down $x . f`; the string is the variable name without sigil.
    Down(String, Box<Formula>),
    Until(Box<Formula>, Box<Formula>),
    Since(Box<Formula>, Box<Formula>),
    UntilPlus(Box<Formula>, Box<Formula>),
    SincePlus(Box<Formula>, Box<Formula>),
    UntilPlusPlus(Box<Formula>, Box<Formula>),
    SincePlusPlus(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn prop(name: &str) -> Self {
        Formula::Atom(Atom::prop(name))
    }

    pub fn nominal(name: &str) -> Self {
        Formula::Atom(Atom::nominal(name))
    }

    pub fn var(name: &str) -> Self {
        Formula::Atom(Atom::var(name))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn diamond(f: Formula) -> Self {
        Formula::Diamond(Box::new(f))
    }

    pub fn boxed(f: Formula) -> Self {
        Formula::Box(Box::new(f))
    }

    pub fn future(f: Formula) -> Self {
        Formula::Future(Box::new(f))
    }

    pub fn globally(f: Formula) -> Self {
        Formula::Globally(Box::new(f))
    }

    pub fn past(f: Formula) -> Self {
        Formula::Past(Box::new(f))
    }

    pub fn historically(f: Formula) -> Self {
        Formula::Historically(Box::new(f))
    }

    pub fn exists(f: Formula) -> Self {
        Formula::Exists(Box::new(f))
    }

    pub fn forall(f: Formula) -> Self {
        Formula::Forall(Box::new(f))
    }

    pub fn at(term: Atom, f: Formula) -> Self {
        debug_assert!(term.is_term(), "@ needs a nominal or state variable");
        Formula::At(term, Box::new(f))
    }

    pub fn down(var: &str, f: Formula) -> Self {
        Formula::Down(var.to_string(), Box::new(f))
    }

    pub fn until(a: Formula, b: Formula) -> Self {
        Formula::Until(Box::new(a), Box::new(b))
    }

    pub fn since(a: Formula, b: Formula) -> Self {
        Formula::Since(Box::new(a), Box::new(b))
    }

    pub fn until_plus(a: Formula, b: Formula) -> Self {
        Formula::UntilPlus(Box::new(a), Box::new(b))
    }

    pub fn since_plus(a: Formula, b: Formula) -> Self {
        Formula::SincePlus(Box::new(a), Box::new(b))
    }

    pub fn until_pp(a: Formula, b: Formula) -> Self {
        Formula::UntilPlusPlus(Box::new(a), Box::new(b))
    }

    pub fn since_pp(a: Formula, b: Formula) -> Self {
        Formula::SincePlusPlus(Box::new(a), Box::new(b))
    }

    /// Left-nested conjunction; `true` for an empty list.
    pub fn conj(items: impl IntoIterator<Item = Formula>) -> Self {
        items.into_iter().reduce(Formula::and).unwrap_or(Formula::True)
    }

    /// Left-nested disjunction; `false` for an empty list.
    pub fn disj(items: impl IntoIterator<Item = Formula>) -> Self {
        items.into_iter().reduce(Formula::or).unwrap_or(Formula::False)
    }

    /// The immediate subformulas, left to right.
    pub fn children(&self) -> Vec<&Formula> {
        use Formula::*;
        match self {
            Atom(_) | True | False => vec![],
            Not(a)
            | Diamond(a)
            | Box(a)
            | Future(a)
            | Globally(a)
            | Past(a)
            | Historically(a)
            | Exists(a)
            | Forall(a)
            | At(_, a)
            | Down(_, a) => vec![a],
            And(a, b)
            | Or(a, b)
            | Implies(a, b)
            | Iff(a, b)
            | Until(a, b)
            | Since(a, b)
            | UntilPlus(a, b)
            | SincePlus(a, b)
            | UntilPlusPlus(a, b)
            | SincePlusPlus(a, b) => {
                vec![a, b]
            }
        }
    }

    /// Rebuild this node with every immediate subformula mapped through `f`.
    pub fn map_children(&self, mut f: impl FnMut(&Formula) -> Formula) -> Formula {
        use Formula::*;
        let mut un = |a: &Formula| std::boxed::Box::new(f(a));
        match self {
            Atom(_) | True | False => self.clone(),
            Not(a) => Not(un(a)),
            Diamond(a) => Diamond(un(a)),
            Box(a) => Box(un(a)),
            Future(a) => Future(un(a)),
            Globally(a) => Globally(un(a)),
            Past(a) => Past(un(a)),
            Historically(a) => Historically(un(a)),
            Exists(a) => Exists(un(a)),
            Forall(a) => Forall(un(a)),
            At(t, a) => At(t.clone(), un(a)),
            Down(x, a) => Down(x.clone(), un(a)),
            And(a, b) => And(un(a), un(b)),
            Or(a, b) => Or(un(a), un(b)),
            Implies(a, b) => Implies(un(a), un(b)),
            Iff(a, b) => Iff(un(a), un(b)),
            Until(a, b) => Until(un(a), un(b)),
            Since(a, b) => Since(un(a), un(b)),
            UntilPlus(a, b) => UntilPlus(un(a), un(b)),
            SincePlus(a, b) => SincePlus(un(a), un(b)),
            UntilPlusPlus(a, b) => UntilPlusPlus(un(a), un(b)),
            SincePlusPlus(a, b) => SincePlusPlus(un(a), un(b)),
        }
    }

    /// Number of AST nodes, used as the formula length `|phi|`.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    /// All atoms occurring in the formula (including `@` terms but not the
    /// variable slot of `down`), sorted and deduplicated.
    pub fn atoms(&self) -> Vec<Atom> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out.sort();
        out.dedup();
        out
    }

    fn collect_atoms(&self, out: &mut Vec<Atom>) {
        match self {
            Formula::Atom(a) => out.push(a.clone()),
            Formula::At(t, body) => {
                out.push(t.clone());
                body.collect_atoms(out);
            }
            _ => {
                for c in self.children() {
                    c.collect_atoms(out);
                }
            }
        }
    }

    /// Proposition names occurring in the formula.
    pub fn props(&self) -> Vec<String> {
        self.atoms_of_kind(AtomKind::Prop)
    }

    /// Nominal names occurring in the formula.
    pub fn nominals(&self) -> Vec<String> {
        self.atoms_of_kind(AtomKind::Nominal)
    }

    fn atoms_of_kind(&self, kind: AtomKind) -> Vec<String> {
        self.atoms().into_iter().filter(|a| a.kind == kind).map(|a| a.name).collect()
    }

    /// Every variable name used by the formula, bound or free.
    pub fn var_names(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_var_names(&mut out);
        out.sort();
        out.dedup();
        out
    }

    fn collect_var_names(&self, out: &mut Vec<String>) {
        match self {
            Formula::Atom(a) if a.kind == AtomKind::Var => out.push(a.name.clone()),
            Formula::At(t, _) if t.kind == AtomKind::Var => out.push(t.name.clone()),
            Formula::Down(x, _) => out.push(x.clone()),
            _ => {}
        }
        for c in self.children() {
            c.collect_var_names(out);
        }
    }

    /// Calls `f` on every subformula occurrence in pre-order.
    pub fn visit(&self, f: &mut impl FnMut(&Formula)) {
        f(self);
        for c in self.children() {
            c.visit(f);
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print::print(self))
    }
}

/// Names with this prefix are reserved for generated variables and
/// nominals; the strict parser rejects them in `'` and `$` atoms.
pub const RESERVED_PREFIX: &str = "_";

/// Canonical text for a formula. Same as its `Display` output.
pub fn print(f: &Formula) -> String {
    print::print(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conj_of_empty_list_is_true() {
        assert_eq!(Formula::conj(vec![]), Formula::True);
        assert_eq!(Formula::disj(vec![]), Formula::False);
    }

    #[test]
    fn atoms_include_at_terms() {
        let f = Formula::at(Atom::nominal("i"), Formula::prop("p"));
        assert_eq!(f.atoms(), vec![Atom::prop("p"), Atom::nominal("i")]);
    }

    #[test]
    fn size_counts_nodes() {
        let f = Formula::and(Formula::prop("p"), Formula::diamond(Formula::prop("q")));
        assert_eq!(f.size(), 4);
    }
}
