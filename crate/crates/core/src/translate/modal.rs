//! Translations whose source and target are both hybrid formulas.

use super::{unused_name, Fresh, TranslateError};
use crate::formula::{Atom, Formula, Fragment, FragmentError};

const GEN: &str = "_g";
const SPY: &str = "_spy";

fn fresh_for(fs: &[&Formula]) -> Fresh {
    Fresh::after(GEN, fs.iter().flat_map(|f| f.var_names()))
}

/// `U(phi, psi)` rewritten with the binder:
/// `down $x.<>down $y.(phi & @$x[](<>$y -> psi))` for fresh `x`, `y`.
pub fn until_via_down(phi: &Formula, psi: &Formula) -> Formula {
    until_down_with(phi.clone(), psi.clone(), &mut fresh_for(&[phi, psi]))
}

fn until_down_with(phi: Formula, psi: Formula, fresh: &mut Fresh) -> Formula {
    let (x, y) = (fresh.name(), fresh.name());
    let guard =
        Formula::at(Atom::var(x.as_str()), Formula::boxed(Formula::implies(Formula::diamond(Formula::var(&y)), psi)));
    Formula::down(&x, Formula::diamond(Formula::down(&y, Formula::and(phi, guard))))
}

/// `U(phi, psi)` rewritten with the binder and tense operators:
/// `down $x.F(phi & H(P $x -> psi))` for a fresh `x`.
pub fn until_via_down_tense(phi: &Formula, psi: &Formula) -> Formula {
    until_tense_with(phi.clone(), psi.clone(), &mut fresh_for(&[phi, psi]))
}

/// `S(phi, psi)` rewritten with the binder and tense operators:
/// `down $x.P(phi & G(F $x -> psi))` for a fresh `x`.
pub fn since_via_down_tense(phi: &Formula, psi: &Formula) -> Formula {
    since_tense_with(phi.clone(), psi.clone(), &mut fresh_for(&[phi, psi]))
}

fn until_tense_with(phi: Formula, psi: Formula, fresh: &mut Fresh) -> Formula {
    let x = fresh.name();
    let guard = Formula::historically(Formula::implies(Formula::past(Formula::var(&x)), psi));
    Formula::down(&x, Formula::future(Formula::and(phi, guard)))
}

fn since_tense_with(phi: Formula, psi: Formula, fresh: &mut Fresh) -> Formula {
    let x = fresh.name();
    let guard = Formula::globally(Formula::implies(Formula::future(Formula::var(&x)), psi));
    Formula::down(&x, Formula::past(Formula::and(phi, guard)))
}

/// The homomorphic image of a basic modal formula with `<>a` mapped to
/// `U(a, false)` and `[]a` to `~U(~a, false)`.
pub fn ml_to_until(phi: &Formula) -> Result<Formula, TranslateError> {
    FragmentError::check(Fragment::Ml, phi)?;
    Ok(ml_until(phi))
}

fn ml_until(f: &Formula) -> Formula {
    match f {
        Formula::Diamond(a) => Formula::until(ml_until(a), Formula::False),
        Formula::Box(a) => Formula::not(Formula::until(Formula::not(ml_until(a)), Formula::False)),
        _ => f.map_children(ml_until),
    }
}

/// Global satisfiability over all frames reduced to satisfiability over
/// transitive frames: `phi^t & []phi^t` with `phi^t = ml_to_until(phi)`.
pub fn globsat_reduction(phi: &Formula) -> Result<Formula, TranslateError> {
    let t = ml_to_until(phi)?;
    Ok(Formula::and(t.clone(), Formula::boxed(t)))
}

/// Replace every `U` by `U++` and every `S` by `S++`.
pub fn u_to_upp(phi: &Formula) -> Formula {
    match phi {
        Formula::Until(a, b) => Formula::until_pp(u_to_upp(a), u_to_upp(b)),
        Formula::Since(a, b) => Formula::since_pp(u_to_upp(a), u_to_upp(b)),
        _ => phi.map_children(u_to_upp),
    }
}

/// Replace every `U++` by `U` and every `S++` by `S`; inverse of [`u_to_upp`].
pub fn upp_to_u(phi: &Formula) -> Formula {
    match phi {
        Formula::UntilPlusPlus(a, b) => Formula::until(upp_to_u(a), upp_to_u(b)),
        Formula::SincePlusPlus(a, b) => Formula::since(upp_to_u(a), upp_to_u(b)),
        _ => phi.map_children(upp_to_u),
    }
}

/// Reduction from satisfiability over the natural numbers to satisfiability
/// over transitive trees: `phi & l & H l & H G l & P H false` where `l`
/// says that every state with a successor has exactly one direct
/// successor. The direct-successor operators are expanded through `U`/`S`
/// and then through the binder simulations, so the result has no `U`/`S`.
pub fn tt_to_nat_tense(phi: &Formula) -> Result<Formula, TranslateError> {
    FragmentError::check(Fragment::HlDownFp, phi)?;
    let mut fresh = fresh_for(&[phi]);
    let lambda = tense_lambda(&mut fresh);
    Ok(Formula::conj([
        phi.clone(),
        lambda.clone(),
        Formula::historically(lambda.clone()),
        Formula::historically(Formula::globally(lambda)),
        Formula::past(Formula::historically(Formula::False)),
    ]))
}

/// `F true -> F1 down $y.P1 G1 $y`.
fn tense_lambda(fresh: &mut Fresh) -> Formula {
    let y = fresh.name();
    // G1 a = ~F1 ~a, with F1 a = U(a, false).
    let g1 = Formula::not(until_tense_with(Formula::not(Formula::var(&y)), Formula::False, fresh));
    let p1 = since_tense_with(g1, Formula::False, fresh);
    let f1 = until_tense_with(Formula::down(&y, p1), Formula::False, fresh);
    Formula::implies(Formula::future(Formula::True), f1)
}

/// The nominal-free variant of the transitive-tree reduction:
/// `down $i.(<>phi^t & mu & l' & []l')`, where `phi^t` simulates the past
/// through the root `$i`, `mu` places every nominal below the root and
/// `l'` forces at most one direct successor.
pub fn tt_to_nat_at(phi: &Formula) -> Result<Formula, TranslateError> {
    FragmentError::check(Fragment::HlDownFp, phi)?;
    let i = unused_name(SPY, &phi.var_names());
    let mut fresh = Fresh::after(GEN, phi.var_names().into_iter().chain([i.clone()]));
    let body = past_via_root(phi, &i, &mut fresh)?;
    let mu = Formula::conj(
        phi.nominals().into_iter().map(|j| Formula::at(Atom::var(i.as_str()), Formula::diamond(Formula::nominal(&j)))),
    );
    let lambda = at_lambda(&mut fresh);
    Ok(Formula::down(&i, Formula::conj([Formula::diamond(body), mu, lambda.clone(), Formula::boxed(lambda)])))
}

/// `<>true -> down $x.<>1 down $y.@$x []1 $y`.
fn at_lambda(fresh: &mut Fresh) -> Formula {
    let x = fresh.name();
    let y = fresh.name();
    // []1 a = ~<>1 ~a, with <>1 a = U(a, false).
    let box1 = Formula::not(until_down_with(Formula::not(Formula::var(&y)), Formula::False, fresh));
    let inner = Formula::down(&y, Formula::at(Atom::var(x.as_str()), box1));
    let dia1 = until_down_with(inner, Formula::False, fresh);
    Formula::implies(Formula::diamond(Formula::True), Formula::down(&x, dia1))
}

fn past_via_root(f: &Formula, i: &str, fresh: &mut Fresh) -> Result<Formula, TranslateError> {
    const RULE: &str = "tt-nat-at";
    Ok(match f {
        Formula::Atom(_) | Formula::True | Formula::False => f.clone(),
        Formula::Future(a) | Formula::Diamond(a) => Formula::diamond(past_via_root(a, i, fresh)?),
        Formula::Globally(a) | Formula::Box(a) => Formula::boxed(past_via_root(a, i, fresh)?),
        Formula::Past(a) => {
            let body = past_via_root(a, i, fresh)?;
            let v = fresh.name();
            let target = Formula::and(body, Formula::diamond(Formula::var(&v)));
            Formula::down(&v, Formula::at(Atom::var(i), Formula::diamond(target)))
        }
        Formula::Historically(a) => {
            let neg = Formula::past(Formula::not((**a).clone()));
            Formula::not(past_via_root(&neg, i, fresh)?)
        }
        Formula::Down(x, a) => Formula::down(x, past_via_root(a, i, fresh)?),
        Formula::Not(a) => Formula::not(past_via_root(a, i, fresh)?),
        Formula::And(a, b) => Formula::and(past_via_root(a, i, fresh)?, past_via_root(b, i, fresh)?),
        Formula::Or(a, b) => Formula::or(past_via_root(a, i, fresh)?, past_via_root(b, i, fresh)?),
        Formula::Implies(a, b) => Formula::implies(past_via_root(a, i, fresh)?, past_via_root(b, i, fresh)?),
        Formula::Iff(a, b) => Formula::iff(past_via_root(a, i, fresh)?, past_via_root(b, i, fresh)?),
        other => return Err(TranslateError::unsupported(RULE, other)),
    })
}

/// Replace every `@t a` by `P(t & a) | (t & a) | F(t & a)`, which agrees
/// with `@t a` on linear frames.
pub fn at_elim_linear(phi: &Formula) -> Formula {
    match phi {
        Formula::At(t, a) => {
            let here = Formula::and(Formula::Atom(t.clone()), at_elim_linear(a));
            Formula::disj([Formula::past(here.clone()), here.clone(), Formula::future(here)])
        }
        _ => phi.map_children(at_elim_linear),
    }
}

/// Replace the global modality by a spy point named by a fresh nominal:
/// `'i & ~<>'i & <>phi^t` with `E a` mapped to `@'i<>a` and `A a` to
/// `@'i[]a`.
pub fn exists_to_at(phi: &Formula) -> Formula {
    let i = unused_name(SPY, &phi.nominals());
    let nom = Formula::nominal(&i);
    Formula::conj([nom.clone(), Formula::not(Formula::diamond(nom)), Formula::diamond(spy_global(phi, &i))])
}

fn spy_global(f: &Formula, i: &str) -> Formula {
    match f {
        Formula::Exists(a) => Formula::at(Atom::nominal(i), Formula::diamond(spy_global(a, i))),
        Formula::Forall(a) => Formula::at(Atom::nominal(i), Formula::boxed(spy_global(a, i))),
        _ => f.map_children(|c| spy_global(c, i)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{free_vars, parse, parse_trusted};

    fn p(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn t(s: &str) -> Formula {
        parse_trusted(s).unwrap()
    }

    #[test]
    fn until_via_down_matches_the_display() {
        let got = until_via_down(&p("p"), &p("q"));
        assert_eq!(got, t("down $_g0.<>down $_g1.(p & @$_g0[](<> $_g1 -> q))"));
    }

    #[test]
    fn until_via_down_skips_used_reserved_names() {
        let got = until_via_down(&t("$_g4"), &p("q"));
        assert_eq!(got, t("down $_g5.<>down $_g6.($_g4 & @$_g5[](<> $_g6 -> q))"));
        assert_eq!(free_vars(&got), free_vars(&t("$_g4")));
    }

    #[test]
    fn tense_simulations_match_the_display() {
        assert_eq!(until_via_down_tense(&p("p"), &p("q")), t("down $_g0.F(p & H(P $_g0 -> q))"));
        assert_eq!(since_via_down_tense(&p("p"), &p("q")), t("down $_g0.P(p & G(F $_g0 -> q))"));
    }

    #[test]
    fn ml_to_until_maps_diamonds() {
        assert_eq!(ml_to_until(&p("<>p")).unwrap(), p("U(p, false)"));
        assert_eq!(ml_to_until(&p("p")).unwrap(), p("p"));
        assert_eq!(ml_to_until(&p("[]p")).unwrap(), p("~U(~p, false)"));
        assert!(ml_to_until(&p("down $x.$x")).is_err());
    }

    #[test]
    fn globsat_conjoins_a_box() {
        assert_eq!(globsat_reduction(&p("<>p")).unwrap(), p("U(p,false) & []U(p,false)"));
    }

    #[test]
    fn u_and_upp_swap() {
        assert_eq!(u_to_upp(&p("U(p,q)")), p("U++(p,q)"));
        assert_eq!(u_to_upp(&p("p")), p("p"));
        let f = p("S(U(p, <>q), ~r) & U+(p,q)");
        assert_eq!(upp_to_u(&u_to_upp(&f)), f);
    }

    #[test]
    fn tense_reduction_has_no_until_or_since() {
        let f = tt_to_nat_tense(&p("p")).unwrap();
        let mut bad = false;
        f.visit(&mut |g| bad |= matches!(g, Formula::Until(..) | Formula::Since(..)));
        assert!(!bad);
        assert!(free_vars(&f).is_empty());
        assert!(Fragment::HlDownFp.admits(&f));
        assert!(tt_to_nat_tense(&p("@'i p")).is_err());
    }

    #[test]
    fn past_through_the_root() {
        let mut fresh = Fresh::after(GEN, Vec::<String>::new());
        let got = past_via_root(&p("P p"), "_spy", &mut fresh).unwrap();
        assert_eq!(got, t("down $_g0. @$_spy <> (p & <> $_g0)"));
    }

    #[test]
    fn at_reduction_is_a_nominal_free_sentence_for_nominal_free_input() {
        let f = tt_to_nat_at(&p("P p & F q")).unwrap();
        assert!(free_vars(&f).is_empty());
        assert!(Fragment::HlDownAt.admits(&f));
        assert!(f.nominals().is_empty());
        let g = tt_to_nat_at(&p("'j & P 'k")).unwrap();
        let mu = t("@$_spy<>'j & @$_spy<>'k");
        let mut found = false;
        g.visit(&mut |h| found |= *h == mu);
        assert!(found);
    }

    #[test]
    fn at_elimination_matches_the_display() {
        assert_eq!(at_elim_linear(&p("@'i p")), p("P('i & p) | ('i & p) | F('i & p)"));
        assert_eq!(at_elim_linear(&p("<>p & q")), p("<>p & q"));
    }

    #[test]
    fn exists_to_at_matches_the_display() {
        assert_eq!(exists_to_at(&p("p")), t("'_spy & ~<>'_spy & <>p"));
        assert_eq!(exists_to_at(&p("E p")), t("'_spy & ~<>'_spy & <>@'_spy<>p"));
        assert_eq!(exists_to_at(&t("'_spy & A q")), t("'_spy1 & ~<>'_spy1 & <>('_spy & @'_spy1[]q)"));
    }
}
