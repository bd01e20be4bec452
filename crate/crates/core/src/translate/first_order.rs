//! Translations between hybrid formulas and first-order formulas.

use super::{unused_name, Fresh, TranslateError};
use crate::formula::{is_prop_name, Atom, AtomKind, Formula};
use crate::satellites::{check_all_u1, check_mc_eq, FOFormula, FoError, Term};
use std::collections::{BTreeMap, BTreeSet};

const FO_GEN: &str = "_y";
const SPY: &str = "_spy";

// ---------------------------------------------------------------------------
// Standard translation

/// The standard translation `ST_x(phi)` with `x = anchor`.
///
/// Propositions become unary predicates of the same name, nominals become
/// constants, state variables become first-order variables of the same
/// name. `U+`, `U++` and their past mirrors use `R+` atoms, which
/// [`print_fo`](crate::satellites::print_fo) renders either as a closure
/// symbol or in least-fixpoint form.
pub fn standard_translation(phi: &Formula, anchor: &str) -> Result<FOFormula, TranslateError> {
    let vars = phi.var_names();
    if vars.iter().any(|v| v == anchor) {
        return Err(TranslateError::Naming(format!("anchor {anchor} is also a state variable of the formula")));
    }
    let mut fresh = Fresh::after(FO_GEN, vars.iter().map(String::as_str).chain([anchor]));
    Ok(st(phi, anchor, &mut fresh))
}

fn term_of(a: &Atom) -> Term {
    match a.kind {
        AtomKind::Nominal => Term::constant(&a.name),
        _ => Term::var(&a.name),
    }
}

fn st(f: &Formula, x: &str, fresh: &mut Fresh) -> FOFormula {
    let here = Term::var(x);
    match f {
        Formula::True => FOFormula::True,
        Formula::False => FOFormula::False,
        Formula::Atom(a) if a.kind == AtomKind::Prop => FOFormula::pred(&a.name, here),
        Formula::Atom(a) => FOFormula::eq(term_of(a), here),
        Formula::Not(a) => FOFormula::not(st(a, x, fresh)),
        Formula::And(a, b) => FOFormula::and(st(a, x, fresh), st(b, x, fresh)),
        Formula::Or(a, b) => FOFormula::or(st(a, x, fresh), st(b, x, fresh)),
        Formula::Implies(a, b) => FOFormula::implies(st(a, x, fresh), st(b, x, fresh)),
        Formula::Iff(a, b) => FOFormula::iff(st(a, x, fresh), st(b, x, fresh)),
        Formula::Diamond(a) | Formula::Future(a) => {
            let y = fresh.name();
            let body = FOFormula::and(FOFormula::rel(here, Term::var(&y)), st(a, &y, fresh));
            FOFormula::exists(&y, body)
        }
        Formula::Box(a) | Formula::Globally(a) => {
            let y = fresh.name();
            let body = FOFormula::implies(FOFormula::rel(here, Term::var(&y)), st(a, &y, fresh));
            FOFormula::forall(&y, body)
        }
        Formula::Past(a) => {
            let y = fresh.name();
            let body = FOFormula::and(FOFormula::rel(Term::var(&y), here), st(a, &y, fresh));
            FOFormula::exists(&y, body)
        }
        Formula::Historically(a) => {
            let y = fresh.name();
            let body = FOFormula::implies(FOFormula::rel(Term::var(&y), here), st(a, &y, fresh));
            FOFormula::forall(&y, body)
        }
        Formula::Exists(a) => {
            let y = fresh.name();
            let body = st(a, &y, fresh);
            FOFormula::exists(&y, body)
        }
        Formula::Forall(a) => {
            let y = fresh.name();
            let body = st(a, &y, fresh);
            FOFormula::forall(&y, body)
        }
        Formula::At(t, a) => {
            let y = fresh.name();
            let body = FOFormula::and(FOFormula::eq(Term::var(&y), term_of(t)), st(a, &y, fresh));
            FOFormula::exists(&y, body)
        }
        Formula::Down(v, a) => FOFormula::exists(v, FOFormula::and(FOFormula::eq(here, Term::var(v)), st(a, x, fresh))),
        Formula::Until(a, b) => st_until(a, b, x, false, false, false, fresh),
        Formula::Since(a, b) => st_until(a, b, x, true, false, false, fresh),
        Formula::UntilPlus(a, b) => st_until(a, b, x, false, false, true, fresh),
        Formula::SincePlus(a, b) => st_until(a, b, x, true, false, true, fresh),
        Formula::UntilPlusPlus(a, b) => st_until(a, b, x, false, true, true, fresh),
        Formula::SincePlusPlus(a, b) => st_until(a, b, x, true, true, true, fresh),
    }
}

/// `E y[x R y & ST_y(a) & A z((x R z & z R y) -> ST_z(b))]`, with `R`
/// replaced by `R+` in the outer or inner guards as requested and the
/// direction reversed for the past operators.
#[allow(clippy::too_many_arguments)]
fn st_until(
    a: &Formula,
    b: &Formula,
    x: &str,
    since: bool,
    outer_plus: bool,
    inner_plus: bool,
    fresh: &mut Fresh,
) -> FOFormula {
    let edge = |plus: bool, from: &str, to: &str| {
        let (s, t) = if since { (Term::var(to), Term::var(from)) } else { (Term::var(from), Term::var(to)) };
        if plus {
            FOFormula::rel_plus(s, t)
        } else {
            FOFormula::rel(s, t)
        }
    };
    let y = fresh.name();
    let z = fresh.name();
    let target = st(a, &y, fresh);
    let between = FOFormula::and(edge(inner_plus, x, &z), edge(inner_plus, &z, &y));
    let guard = FOFormula::forall(&z, FOFormula::implies(between, st(b, &z, fresh)));
    FOFormula::exists(&y, FOFormula::conj([edge(outer_plus, x, &y), target, guard]))
}

// ---------------------------------------------------------------------------
// Naming and normalization helpers

/// Proposition names for the predicates of `alpha`: a predicate keeps its
/// name when that is a valid proposition, otherwise it is lowercased.
fn prop_names(alpha: &FOFormula) -> Result<BTreeMap<String, String>, TranslateError> {
    let mut out = BTreeMap::new();
    let mut taken: BTreeMap<String, String> = BTreeMap::new();
    for p in alpha.predicates() {
        let name = if is_prop_name(&p) { p.clone() } else { p.to_lowercase() };
        if !is_prop_name(&name) {
            return Err(TranslateError::Naming(format!("predicate {p} has no proposition name")));
        }
        if let Some(other) = taken.insert(name.clone(), p.clone()) {
            return Err(TranslateError::Naming(format!("predicates {other} and {p} both map to {name}")));
        }
        out.insert(p, name);
    }
    Ok(out)
}

fn var_atom(t: &Term) -> Atom {
    match t {
        Term::Var(v) => Atom::var(v.as_str()),
        Term::Const(c) => Atom::nominal(c.as_str()),
    }
}

fn term_formula(t: &Term) -> Formula {
    Formula::Atom(var_atom(t))
}

/// Existentially close `alpha` and rename bound variables apart so that
/// each variable is quantified exactly once.
fn normalize(alpha: &FOFormula) -> FOFormula {
    let closed = alpha.free_vars().into_iter().rev().fold(alpha.clone(), |acc, v| FOFormula::exists(&v, acc));
    let mut fresh = Fresh::after(FO_GEN, closed.var_names());
    rename_apart(&closed, &BTreeMap::new(), &mut BTreeSet::new(), &mut fresh)
}

fn rename_apart(
    f: &FOFormula,
    env: &BTreeMap<String, String>,
    seen: &mut BTreeSet<String>,
    fresh: &mut Fresh,
) -> FOFormula {
    let term = |t: &Term| match t {
        Term::Var(v) => Term::Var(env.get(v).cloned().unwrap_or_else(|| v.clone())),
        c => c.clone(),
    };
    match f {
        FOFormula::True | FOFormula::False => f.clone(),
        FOFormula::Rel(a, b) => FOFormula::rel(term(a), term(b)),
        FOFormula::RelPlus(a, b) => FOFormula::rel_plus(term(a), term(b)),
        FOFormula::Eq(a, b) => FOFormula::eq(term(a), term(b)),
        FOFormula::Pred(p, a) => FOFormula::pred(p, term(a)),
        FOFormula::Not(a) => FOFormula::not(rename_apart(a, env, seen, fresh)),
        FOFormula::And(a, b) => FOFormula::and(rename_apart(a, env, seen, fresh), rename_apart(b, env, seen, fresh)),
        FOFormula::Or(a, b) => FOFormula::or(rename_apart(a, env, seen, fresh), rename_apart(b, env, seen, fresh)),
        FOFormula::Implies(a, b) => {
            FOFormula::implies(rename_apart(a, env, seen, fresh), rename_apart(b, env, seen, fresh))
        }
        FOFormula::Iff(a, b) => FOFormula::iff(rename_apart(a, env, seen, fresh), rename_apart(b, env, seen, fresh)),
        FOFormula::Exists(v, a) | FOFormula::Forall(v, a) => {
            let new = if seen.contains(v) { fresh.name() } else { v.clone() };
            seen.insert(new.clone());
            let mut inner = env.clone();
            inner.insert(v.clone(), new.clone());
            let body = rename_apart(a, &inner, seen, fresh);
            if matches!(f, FOFormula::Exists(..)) {
                FOFormula::exists(&new, body)
            } else {
                FOFormula::forall(&new, body)
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Monadic class with equality to the binder language

/// The reduction HT from the monadic class with equality to `HL↓` over
/// complete frames: `P(x)` to `<>($x & p)`, `x = y` to `<>($x & $y)`,
/// `E x.a` to `<>(down $x.HT(a))`. Constants become nominals and `A x.a`
/// becomes `[](down $x.HT(a))`.
pub fn ht(alpha: &FOFormula) -> Result<Formula, TranslateError> {
    check_mc_eq(alpha)?;
    let names = prop_names(alpha)?;
    ht_rec(alpha, &names)
}

fn ht_rec(f: &FOFormula, names: &BTreeMap<String, String>) -> Result<Formula, TranslateError> {
    let rec = |g: &FOFormula| ht_rec(g, names);
    Ok(match f {
        FOFormula::True => Formula::True,
        FOFormula::False => Formula::False,
        FOFormula::Pred(p, t) => Formula::diamond(Formula::and(term_formula(t), Formula::prop(&names[p]))),
        FOFormula::Eq(a, b) => Formula::diamond(Formula::and(term_formula(a), term_formula(b))),
        FOFormula::Rel(..) | FOFormula::RelPlus(..) => return Err(TranslateError::unsupported("ht", f)),
        FOFormula::Not(a) => Formula::not(rec(a)?),
        FOFormula::And(a, b) => Formula::and(rec(a)?, rec(b)?),
        FOFormula::Or(a, b) => Formula::or(rec(a)?, rec(b)?),
        FOFormula::Implies(a, b) => Formula::implies(rec(a)?, rec(b)?),
        FOFormula::Iff(a, b) => Formula::iff(rec(a)?, rec(b)?),
        FOFormula::Exists(v, a) => Formula::diamond(Formula::down(v, rec(a)?)),
        FOFormula::Forall(v, a) => Formula::boxed(Formula::down(v, rec(a)?)),
    })
}

/// `(down $x.[]<>$x) & HT(alpha)`: the binder conjunct makes the generated
/// subframe complete, so satisfiability over transitive frames coincides
/// with satisfiability of `alpha`.
pub fn complete_reduction(alpha: &FOFormula) -> Result<Formula, TranslateError> {
    let body = ht(alpha)?;
    // The conjunct is closed, so reusing a variable of `alpha` is harmless.
    let force = Formula::down("x", Formula::boxed(Formula::diamond(Formula::var("x"))));
    Ok(Formula::and(force, body))
}

// ---------------------------------------------------------------------------
// Zig-zag

/// Names of the four marker predicates introduced by [`zigzag`].
pub const ZIGZAG_PREDICATES: [&str; 4] = ["Z0", "Z1", "Z2", "Z3"];

/// Reduction from `[all,(0,1)]` to `[all,(4,1)]` over transitive relations.
/// Each `x R y` becomes a zig-zag `x R a <- b R c <- y` through elements
/// marked `Z1`, `Z2`, `Z3`, and quantifiers are relativized to `Z0`. Free
/// variables are existentially closed and bound variables renamed apart
/// first. The image is `(E v.Z0(v)) & alpha^t`: without the first conjunct
/// a universal sentence would hold vacuously when no element is marked
/// `Z0`.
pub fn zigzag(alpha: &FOFormula) -> Result<FOFormula, TranslateError> {
    check_all_u1(alpha, 0)?;
    let alpha = normalize(alpha);
    let mut fresh = Fresh::after(FO_GEN, alpha.var_names());
    let body = zz(&alpha, &mut fresh);
    let v = fresh.name();
    let nonempty = FOFormula::exists(&v, FOFormula::pred(ZIGZAG_PREDICATES[0], Term::var(&v)));
    Ok(FOFormula::and(nonempty, body))
}

fn zz(f: &FOFormula, fresh: &mut Fresh) -> FOFormula {
    let [z0, z1, z2, z3] = ZIGZAG_PREDICATES;
    match f {
        FOFormula::Rel(x, y) => {
            let (a, b, c) = (fresh.name(), fresh.name(), fresh.name());
            let (ta, tb, tc) = (Term::var(&a), Term::var(&b), Term::var(&c));
            let body = FOFormula::conj([
                FOFormula::rel(x.clone(), ta.clone()),
                FOFormula::rel(tb.clone(), ta.clone()),
                FOFormula::rel(tb.clone(), tc.clone()),
                FOFormula::rel(y.clone(), tc.clone()),
                FOFormula::pred(z0, x.clone()),
                FOFormula::pred(z1, ta),
                FOFormula::pred(z2, tb),
                FOFormula::pred(z3, tc),
                FOFormula::pred(z0, y.clone()),
            ]);
            FOFormula::exists(&a, FOFormula::exists(&b, FOFormula::exists(&c, body)))
        }
        FOFormula::Exists(v, a) => {
            FOFormula::exists(v, FOFormula::and(FOFormula::pred(z0, Term::var(v)), zz(a, fresh)))
        }
        FOFormula::Forall(v, a) => {
            FOFormula::forall(v, FOFormula::implies(FOFormula::pred(z0, Term::var(v)), zz(a, fresh)))
        }
        FOFormula::True | FOFormula::False => f.clone(),
        FOFormula::Not(a) => FOFormula::not(zz(a, fresh)),
        FOFormula::And(a, b) => FOFormula::and(zz(a, fresh), zz(b, fresh)),
        FOFormula::Or(a, b) => FOFormula::or(zz(a, fresh), zz(b, fresh)),
        FOFormula::Implies(a, b) => FOFormula::implies(zz(a, fresh), zz(b, fresh)),
        FOFormula::Iff(a, b) => FOFormula::iff(zz(a, fresh), zz(b, fresh)),
        // Excluded by the fragment check.
        FOFormula::RelPlus(..) | FOFormula::Eq(..) | FOFormula::Pred(..) => f.clone(),
    }
}

// ---------------------------------------------------------------------------
// Spy-point reductions

/// Reduction from `[all,(u,1)]` over transitive relations to nominal-free
/// `HL^{↓,@}` over transitive frames: `down $i.(~<>$i & <>alpha^t)` with
/// `x R y` mapped to `@$x<>$y`, `P(x)` to `@$x p` and `E x.a` to
/// `@$i<>down $x.a^t`.
pub fn spy_at(alpha: &FOFormula) -> Result<Formula, TranslateError> {
    spy(alpha, false)
}

/// The tense variant of [`spy_at`] for `HL↓_{F,P}`: `x R y` becomes
/// `P($i & F($x & F $y))`, `P(x)` becomes `P($i & F($x & p))` and `E x.a`
/// becomes `P($i & F down $x.a^t)`; the outer formula is
/// `down $i.(~F $i & F alpha^t)`.
pub fn spy_fp(alpha: &FOFormula) -> Result<Formula, TranslateError> {
    spy(alpha, true)
}

fn spy(alpha: &FOFormula, tense: bool) -> Result<Formula, TranslateError> {
    check_all_u1(alpha, alpha.predicates().len())?;
    let alpha = normalize(alpha);
    let names = prop_names(&alpha)?;
    let used: Vec<String> = alpha.var_names().into_iter().collect();
    let i = unused_name(SPY, &used);
    let body = spy_rec(&alpha, &i, tense, &names)?;
    let iv = Formula::var(&i);
    Ok(Formula::down(
        &i,
        if tense {
            Formula::and(Formula::not(Formula::future(iv)), Formula::future(body))
        } else {
            Formula::and(Formula::not(Formula::diamond(iv)), Formula::diamond(body))
        },
    ))
}

fn spy_rec(f: &FOFormula, i: &str, tense: bool, names: &BTreeMap<String, String>) -> Result<Formula, TranslateError> {
    let rule = if tense { "spy-fp" } else { "spy-at" };
    let rec = |g: &FOFormula| spy_rec(g, i, tense, names);
    // `P($i & F a)` in the tense variant, `@t <>`-style jumps otherwise.
    let from_spy = |a: Formula| Formula::past(Formula::and(Formula::var(i), Formula::future(a)));
    Ok(match f {
        FOFormula::True => Formula::True,
        FOFormula::False => Formula::False,
        FOFormula::Rel(x, y) => {
            let (x, y) = (var_atom(x), var_atom(y));
            if tense {
                from_spy(Formula::and(Formula::Atom(x), Formula::future(Formula::Atom(y))))
            } else {
                Formula::at(x, Formula::diamond(Formula::Atom(y)))
            }
        }
        FOFormula::Pred(p, x) => {
            let prop = Formula::prop(&names[p]);
            if tense {
                from_spy(Formula::and(term_formula(x), prop))
            } else {
                Formula::at(var_atom(x), prop)
            }
        }
        FOFormula::Exists(v, a) => {
            let bound = Formula::down(v, rec(a)?);
            if tense {
                from_spy(bound)
            } else {
                Formula::at(Atom::var(i), Formula::diamond(bound))
            }
        }
        FOFormula::Forall(v, a) => Formula::not(rec(&FOFormula::exists(v, FOFormula::not((**a).clone())))?),
        FOFormula::Not(a) => Formula::not(rec(a)?),
        FOFormula::And(a, b) => Formula::and(rec(a)?, rec(b)?),
        FOFormula::Or(a, b) => Formula::or(rec(a)?, rec(b)?),
        FOFormula::Implies(a, b) => Formula::implies(rec(a)?, rec(b)?),
        FOFormula::Iff(a, b) => Formula::iff(rec(a)?, rec(b)?),
        FOFormula::Eq(..) | FOFormula::RelPlus(..) => return Err(TranslateError::unsupported(rule, f)),
    })
}

// ---------------------------------------------------------------------------
// Strings

/// Reduction from first-order logic over strings to `HL^{↓,@}` over linear
/// frames: `down $s.(HT(alpha) & FL & DISCRETE & UNIQUE)`. A predicate
/// `P_a` is read as the letter `a`, which becomes the proposition `a`.
pub fn string_reduction<S: AsRef<str>>(alpha: &FOFormula, sigma: &[S]) -> Result<Formula, TranslateError> {
    let letters: Vec<String> = sigma.iter().map(|s| s.as_ref().to_string()).collect();
    for a in &letters {
        if !is_prop_name(a) {
            return Err(TranslateError::Naming(format!("letter {a} is not a proposition name")));
        }
    }
    if !alpha.constants().is_empty() {
        return Err(FoError::Fragment { fragment: "FO[<]".into(), reason: "uses constants".into() }.into());
    }
    let alpha = normalize(alpha);
    let mut used: Vec<String> = alpha.var_names().into_iter().collect();
    let s = unused_name(SPY, &used);
    used.push(s.clone());
    let mut fresh = Fresh::after("_g", &used);
    let body = string_ht(&alpha, &s, &letters)?;
    let at_s = |f: Formula| Formula::at(Atom::var(s.as_str()), f);

    let (x, x2, y) = (fresh.name(), fresh.name(), fresh.name());
    let fl = Formula::and(
        Formula::diamond(Formula::down(&x, at_s(Formula::boxed(Formula::not(Formula::diamond(Formula::var(&x))))))),
        Formula::diamond(Formula::boxed(Formula::False)),
    );
    let never_y = Formula::boxed(Formula::boxed(Formula::not(Formula::var(&y))));
    let discrete = Formula::boxed(Formula::implies(
        Formula::diamond(Formula::True),
        Formula::down(&x2, Formula::diamond(Formula::down(&y, Formula::at(Atom::var(x2.as_str()), never_y)))),
    ));
    let unique = Formula::boxed(Formula::disj(letters.iter().map(|a| {
        Formula::conj(
            std::iter::once(Formula::prop(a))
                .chain(letters.iter().filter(|b| *b != a).map(|b| Formula::not(Formula::prop(b)))),
        )
    })));
    Ok(Formula::down(&s, Formula::conj([body, fl, discrete, unique])))
}

fn string_ht(f: &FOFormula, s: &str, letters: &[String]) -> Result<Formula, TranslateError> {
    let rec = |g: &FOFormula| string_ht(g, s, letters);
    let at_s_dia = |g: Formula| Formula::at(Atom::var(s), Formula::diamond(g));
    Ok(match f {
        FOFormula::True => Formula::True,
        FOFormula::False => Formula::False,
        FOFormula::Pred(p, x) => {
            let letter = p
                .strip_prefix("P_")
                .filter(|a| letters.iter().any(|l| l == a))
                .ok_or_else(|| TranslateError::unsupported("string", format!("predicate {p}")))?;
            at_s_dia(Formula::and(term_formula(x), Formula::prop(letter)))
        }
        FOFormula::Eq(x, y) => at_s_dia(Formula::and(term_formula(x), term_formula(y))),
        FOFormula::Rel(x, y) => at_s_dia(Formula::and(term_formula(x), Formula::diamond(term_formula(y)))),
        FOFormula::Exists(v, a) => at_s_dia(Formula::down(v, rec(a)?)),
        FOFormula::Forall(v, a) => Formula::at(Atom::var(s), Formula::boxed(Formula::down(v, rec(a)?))),
        FOFormula::Not(a) => Formula::not(rec(a)?),
        FOFormula::And(a, b) => Formula::and(rec(a)?, rec(b)?),
        FOFormula::Or(a, b) => Formula::or(rec(a)?, rec(b)?),
        FOFormula::Implies(a, b) => Formula::implies(rec(a)?, rec(b)?),
        FOFormula::Iff(a, b) => Formula::iff(rec(a)?, rec(b)?),
        FOFormula::RelPlus(..) => return Err(TranslateError::unsupported("string", f)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{free_vars, parse, parse_trusted};
    use crate::model::Frame;
    use crate::satellites::{parse_fo, parse_fo_trusted};

    fn fo(s: &str) -> FOFormula {
        parse_fo(s).unwrap()
    }

    fn h(s: &str) -> Formula {
        parse_trusted(s).unwrap()
    }

    #[test]
    fn st_of_diamond_nominal_and_upp() {
        let f = standard_translation(&parse("<>p").unwrap(), "x").unwrap();
        assert_eq!(f, parse_fo_trusted("E _y0.(R(x,_y0) & p(_y0))").unwrap());
        let g = standard_translation(&parse("'i").unwrap(), "x").unwrap();
        assert_eq!(g, parse_fo("'i = x").unwrap());
        let u = standard_translation(&parse("U++(p,q)").unwrap(), "x").unwrap();
        let want = "E _y0.(R+(x,_y0) & p(_y0) & A _y1.(R+(x,_y1) & R+(_y1,_y0) -> q(_y1)))";
        assert_eq!(u, parse_fo_trusted(want).unwrap());
    }

    #[test]
    fn st_of_binder_and_jump() {
        let f = standard_translation(&parse("down $v.@$v p").unwrap(), "x").unwrap();
        assert_eq!(f, parse_fo_trusted("E v.(x = v & E _y0.(_y0 = v & p(_y0)))").unwrap());
        assert!(standard_translation(&parse("down $x.$x").unwrap(), "x").is_err());
    }

    #[test]
    fn ht_table() {
        assert_eq!(ht(&fo("P(x)")).unwrap(), parse("<>($x & p)").unwrap());
        assert_eq!(ht(&fo("E x.P(x)")).unwrap(), parse("<>(down $x.<>($x & p))").unwrap());
        assert_eq!(ht(&fo("x = 'c")).unwrap(), parse("<>($x & 'c)").unwrap());
        assert!(ht(&fo("R(x,y)")).is_err());
        assert!(matches!(ht(&fo("P(x) & p(x)")), Err(TranslateError::Naming(_))));
    }

    #[test]
    fn complete_reduction_forces_a_clique() {
        let got = complete_reduction(&fo("E x.P(x)")).unwrap();
        let want = parse("(down $x.[]<> $x) & <>(down $x.<>($x & p))").unwrap();
        assert_eq!(got, want);
    }

    #[test]
    fn zigzag_step() {
        let got = zigzag(&fo("R(x,y)")).unwrap();
        let want = "(E _y3.Z0(_y3)) & E x.(Z0(x) & E y.(Z0(y) & E _y0.E _y1.E _y2.(R(x,_y0) & R(_y1,_y0) \
                    & R(_y1,_y2) & R(y,_y2) & Z0(x) & Z1(_y0) & Z2(_y1) & Z3(_y2) & Z0(y))))";
        assert_eq!(got, parse_fo_trusted(want).unwrap());
        assert!(zigzag(&fo("P(x)")).is_err());
    }

    #[test]
    fn zigzag_commutes_with_negation() {
        let a = fo("E x.E y.R(x,y)");
        let b = fo("~E x.E y.R(x,y)");
        let (FOFormula::And(na, pos), FOFormula::And(nb, neg)) = (zigzag(&a).unwrap(), zigzag(&b).unwrap()) else {
            panic!("expected conjunctions")
        };
        assert_eq!(na, nb);
        assert_eq!(*neg, FOFormula::not(*pos));
    }

    #[test]
    fn zigzag_image_needs_a_marked_element() {
        // Unsatisfiable, and universal apart from the inner existential.
        let alpha = fo("(A x.E y.R(x,y)) & A x.A y.~R(x,y)");
        let z = zigzag(&alpha).unwrap();
        assert!(crate::oracle::brute_fo_sat(&z, Frame::Transitive, 3).unwrap().is_none());
    }

    #[test]
    fn renaming_apart_keeps_the_first_binder() {
        let got = normalize(&fo("(E x.P(x)) & (E x.Q(x)) & R(z,z)"));
        let want = parse_fo_trusted("E z.((E x.P(x)) & (E _y0.Q(_y0)) & R(z,z))").unwrap();
        assert_eq!(got, want);
    }

    #[test]
    fn spy_at_table() {
        let got = spy_at(&fo("E x.E y.R(x,y)")).unwrap();
        assert_eq!(got, h("down $_spy.(~<>$_spy & <>@$_spy<>down $x.@$_spy<>down $y.@$x<>$y)"));
        let f = spy_at(&fo("E x.P(x)")).unwrap();
        assert_eq!(f, h("down $_spy.(~<>$_spy & <>@$_spy<>down $x.@$x p)"));
        assert!(free_vars(&f).is_empty());
        assert!(f.nominals().is_empty());
    }

    #[test]
    fn spy_fp_table() {
        let got = spy_fp(&fo("E x.E y.R(x,y)")).unwrap();
        let want = "down $_spy.(~F $_spy & F P($_spy & F down $x.P($_spy & F down $y.P($_spy & F($x & F $y)))))";
        assert_eq!(got, h(want));
        assert!(spy_fp(&fo("x = y")).is_err());
    }

    #[test]
    fn string_reduction_tables() {
        let got = string_reduction(&fo("x < y"), &["a", "b"]).unwrap();
        let Formula::Down(s, body) = &got else { panic!("expected a binder") };
        assert_eq!(s, "_spy");
        let mut conjuncts = Vec::new();
        let mut cur: &Formula = body;
        while let Formula::And(a, b) = cur {
            conjuncts.push((**b).clone());
            cur = a;
        }
        conjuncts.push(cur.clone());
        conjuncts.reverse();
        // Free variables are existentially closed before translating.
        let ht_part = h("@$_spy<>down $x.@$_spy<>down $y.@$_spy<>($x & <>$y)");
        assert_eq!(conjuncts[0], ht_part);
        assert_eq!(conjuncts[1], h("(<>down $_g0.@$_spy[]~<>$_g0) & <>[]false"));
        assert_eq!(conjuncts[2], h("[](<>true -> down $_g1.<>down $_g2.@$_g1[][]~$_g2)"));
        assert_eq!(conjuncts[3], parse("[](a & ~b | b & ~a)").unwrap());
        assert!(string_reduction(&fo("E x.P_c(x)"), &["a", "b"]).is_err());
    }
}
