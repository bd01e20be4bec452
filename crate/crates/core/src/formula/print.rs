//! Canonical printer. The output reparses to the same AST.
//!
//! Parentheses are inserted only where precedence or associativity demands
//! them. A `down` binder swallows everything to its right, so it is
//! printed bare only when nothing follows it at the same nesting level.

use super::Formula;

const PREC_IFF: u8 = 1;
const PREC_IMPLIES: u8 = 2;
const PREC_OR: u8 = 3;
const PREC_AND: u8 = 4;
const PREC_UNARY: u8 = 5;

fn binary(f: &Formula) -> Option<(u8, &'static str, &Formula, &Formula)> {
    match f {
        Formula::Iff(a, b) => Some((PREC_IFF, "<->", a, b)),
        Formula::Implies(a, b) => Some((PREC_IMPLIES, "->", a, b)),
        Formula::Or(a, b) => Some((PREC_OR, "|", a, b)),
        Formula::And(a, b) => Some((PREC_AND, "&", a, b)),
        _ => None,
    }
}

fn prec(f: &Formula) -> u8 {
    binary(f).map(|(p, ..)| p).unwrap_or(PREC_UNARY)
}

pub(super) fn print(f: &Formula) -> String {
    let mut out = String::new();
    write(f, true, &mut out);
    out
}

/// `tail` is true when nothing follows `f` before the enclosing bracket.
fn write(f: &Formula, tail: bool, out: &mut String) {
    if let Some((p, op, a, b)) = binary(f) {
        let right_assoc = p == PREC_IMPLIES;
        let left_paren = prec(a) < p || (right_assoc && prec(a) == p);
        let right_paren = prec(b) < p || (!right_assoc && prec(b) == p);
        operand(a, left_paren, false, out);
        out.push(' ');
        out.push_str(op);
        out.push(' ');
        operand(b, right_paren, tail, out);
        return;
    }
    match f {
        Formula::Atom(a) => out.push_str(&a.to_string()),
        Formula::True => out.push_str("true"),
        Formula::False => out.push_str("false"),
        Formula::Not(a) => prefix("~", a, tail, out),
        Formula::Diamond(a) => prefix("<>", a, tail, out),
        Formula::Box(a) => prefix("[]", a, tail, out),
        Formula::Future(a) => prefix("F ", a, tail, out),
        Formula::Globally(a) => prefix("G ", a, tail, out),
        Formula::Past(a) => prefix("P ", a, tail, out),
        Formula::Historically(a) => prefix("H ", a, tail, out),
        Formula::Exists(a) => prefix("E ", a, tail, out),
        Formula::Forall(a) => prefix("A ", a, tail, out),
        Formula::At(t, a) => prefix(&format!("@{t} "), a, tail, out),
        Formula::Down(x, a) => {
            if tail {
                out.push_str(&format!("down ${x} . "));
                write(a, true, out);
            } else {
                out.push('(');
                write(f, true, out);
                out.push(')');
            }
        }
        Formula::Until(a, b) => call("U", a, b, out),
        Formula::Since(a, b) => call("S", a, b, out),
        Formula::UntilPlus(a, b) => call("U+", a, b, out),
        Formula::SincePlus(a, b) => call("S+", a, b, out),
        Formula::UntilPlusPlus(a, b) => call("U++", a, b, out),
        Formula::SincePlusPlus(a, b) => call("S++", a, b, out),
        Formula::And(..) | Formula::Or(..) | Formula::Implies(..) | Formula::Iff(..) => {
            unreachable!("binary connectives handled above")
        }
    }
}

fn operand(f: &Formula, paren: bool, tail: bool, out: &mut String) {
    if paren {
        out.push('(');
        write(f, true, out);
        out.push(')');
    } else {
        write(f, tail, out);
    }
}

fn prefix(op: &str, a: &Formula, tail: bool, out: &mut String) {
    out.push_str(op);
    operand(a, prec(a) < PREC_UNARY, tail, out);
}

fn call(name: &str, a: &Formula, b: &Formula, out: &mut String) {
    out.push_str(name);
    out.push('(');
    write(a, true, out);
    out.push_str(", ");
    write(b, true, out);
    out.push(')');
}

#[cfg(test)]
mod tests {
    use super::super::{parse, Atom, Formula};

    #[test]
    fn canonical_examples() {
        assert_eq!(Formula::diamond(Formula::prop("p")).to_string(), "<>p");
        let f = Formula::down("x", Formula::not(Formula::diamond(Formula::var("x"))));
        assert_eq!(f.to_string(), "down $x . ~<>$x");
        assert_eq!(Formula::until(Formula::prop("p"), Formula::prop("q")).to_string(), "U(p, q)");
        let f = Formula::at(Atom::nominal("i"), Formula::prop("p"));
        assert_eq!(f.to_string(), "@'i p");
        assert_eq!(Formula::future(Formula::prop("p")).to_string(), "F p");
    }

    #[test]
    fn down_in_non_tail_position_is_bracketed() {
        let f = Formula::and(Formula::down("x", Formula::var("x")), Formula::prop("q"));
        assert_eq!(f.to_string(), "(down $x . $x) & q");
        assert_eq!(parse(&f.to_string()).unwrap(), f);
        let g =
            Formula::or(Formula::and(Formula::prop("p"), Formula::down("x", Formula::var("x"))), Formula::prop("r"));
        assert_eq!(parse(&g.to_string()).unwrap(), g);
        let h = Formula::and(Formula::not(Formula::down("x", Formula::var("x"))), Formula::True);
        assert_eq!(parse(&h.to_string()).unwrap(), h);
    }

    #[test]
    fn associativity_brackets() {
        let a = || Formula::prop("a");
        let f = Formula::implies(Formula::implies(a(), a()), a());
        assert_eq!(f.to_string(), "(a -> a) -> a");
        let g = Formula::and(a(), Formula::and(a(), a()));
        assert_eq!(g.to_string(), "a & (a & a)");
        let h = Formula::iff(a(), Formula::iff(a(), a()));
        assert_eq!(parse(&h.to_string()).unwrap(), h);
    }
}
