//! Embedding of `HL^E_{U,S}` over transitive trees into PDL over finite
//! sibling-ordered trees.
//!
//! A nominal `'i` becomes the PDL atom `'i`, so it cannot collide with a
//! proposition. `U+`, `U++` and their past mirrors coincide with `U`/`S` on
//! transitive frames and are translated the same way.

use super::{unused_name, TranslateError};
use crate::formula::{AtomKind, Formula};
use crate::satellites::{PdlFormula, PdlProgram};

const RULE: &str = "pdl";

fn down_plus() -> PdlProgram {
    PdlProgram::plus(PdlProgram::Down)
}

fn up_plus() -> PdlProgram {
    PdlProgram::plus(PdlProgram::Up)
}

/// `up*;down*`, which reaches every node of a tree.
fn everywhere() -> PdlProgram {
    PdlProgram::seq(PdlProgram::star(PdlProgram::Up), PdlProgram::star(PdlProgram::Down))
}

/// The programs used for one step into the future and into the past.
struct Steps {
    dn: PdlProgram,
    up: PdlProgram,
}

impl Steps {
    fn plain() -> Self {
        Steps { dn: PdlProgram::Down, up: PdlProgram::Up }
    }

    /// `dn' = (down;~b?) + (b?;up)` and `up' = (~b?;up) + (b?;down;b?)`.
    fn flat(flat: &str) -> Self {
        let b = || PdlFormula::atom(flat);
        let dn = PdlProgram::union(
            PdlProgram::seq(PdlProgram::Down, PdlProgram::test(PdlFormula::not(b()))),
            PdlProgram::seq(PdlProgram::test(b()), PdlProgram::Up),
        );
        let up = PdlProgram::union(
            PdlProgram::seq(PdlProgram::test(PdlFormula::not(b())), PdlProgram::Up),
            PdlProgram::seq(PdlProgram::seq(PdlProgram::test(b()), PdlProgram::Down), PdlProgram::test(b())),
        );
        Steps { dn, up }
    }

    /// `<(step;psi?)*;step>phi`.
    fn until(&self, since: bool, phi: PdlFormula, psi: PdlFormula) -> PdlFormula {
        let step = if since { &self.up } else { &self.dn };
        let path =
            PdlProgram::seq(PdlProgram::star(PdlProgram::seq(step.clone(), PdlProgram::test(psi))), step.clone());
        PdlFormula::dia(path, phi)
    }

    fn future(&self) -> PdlProgram {
        PdlProgram::plus(self.dn.clone())
    }

    fn past(&self) -> PdlProgram {
        PdlProgram::plus(self.up.clone())
    }
}

/// The translation `phi^t` into PDL: `U(a,b)` becomes
/// `<(down;b?)*;down>a`, `S(a,b)` becomes `<(up;b?)*;up>a`, `E a` becomes
/// `<up*;down*>a` and nominals become atoms. `<>`/`F` use `down+`, `P`
/// uses `up+` and `@'i a` becomes `<up*;down*>('i & a)`.
pub fn pdl_translate(phi: &Formula) -> Result<PdlFormula, TranslateError> {
    tr(phi, &Steps::plain())
}

fn tr(f: &Formula, steps: &Steps) -> Result<PdlFormula, TranslateError> {
    let rec = |g: &Formula| tr(g, steps);
    Ok(match f {
        Formula::True => PdlFormula::True,
        Formula::False => PdlFormula::falsum(),
        Formula::Atom(a) => match a.kind {
            AtomKind::Prop => PdlFormula::atom(&a.name),
            AtomKind::Nominal => PdlFormula::atom(&a.to_string()),
            AtomKind::Var => return Err(TranslateError::unsupported(RULE, f)),
        },
        Formula::Not(a) => PdlFormula::not(rec(a)?),
        Formula::And(a, b) => PdlFormula::and(rec(a)?, rec(b)?),
        Formula::Or(a, b) => PdlFormula::or(rec(a)?, rec(b)?),
        Formula::Implies(a, b) => PdlFormula::implies(rec(a)?, rec(b)?),
        Formula::Iff(a, b) => {
            let (x, y) = (rec(a)?, rec(b)?);
            PdlFormula::and(PdlFormula::implies(x.clone(), y.clone()), PdlFormula::implies(y, x))
        }
        Formula::Diamond(a) | Formula::Future(a) => PdlFormula::dia(steps.future(), rec(a)?),
        Formula::Box(a) | Formula::Globally(a) => PdlFormula::boxed(steps.future(), rec(a)?),
        Formula::Past(a) => PdlFormula::dia(steps.past(), rec(a)?),
        Formula::Historically(a) => PdlFormula::boxed(steps.past(), rec(a)?),
        Formula::Exists(a) => PdlFormula::dia(everywhere(), rec(a)?),
        Formula::Forall(a) => PdlFormula::boxed(everywhere(), rec(a)?),
        Formula::At(t, a) if t.kind == AtomKind::Nominal => {
            PdlFormula::dia(everywhere(), PdlFormula::and(PdlFormula::atom(&t.to_string()), rec(a)?))
        }
        Formula::Until(a, b) | Formula::UntilPlus(a, b) | Formula::UntilPlusPlus(a, b) => {
            steps.until(false, rec(a)?, rec(b)?)
        }
        Formula::Since(a, b) | Formula::SincePlus(a, b) | Formula::SincePlusPlus(a, b) => {
            steps.until(true, rec(a)?, rec(b)?)
        }
        Formula::At(..) | Formula::Down(..) => return Err(TranslateError::unsupported(RULE, f)),
    })
}

/// `nu(i)`: the atom of nominal `i` holds at exactly one node.
fn nu(atom: &str) -> PdlFormula {
    let i = || PdlFormula::atom(atom);
    let not_i = || PdlFormula::not(i());
    let sideways = |side: PdlProgram| {
        PdlProgram::seq(
            PdlProgram::seq(PdlProgram::star(PdlProgram::Up), PdlProgram::plus(side)),
            PdlProgram::star(PdlProgram::Down),
        )
    };
    let unique = PdlFormula::conj([
        PdlFormula::boxed(down_plus(), not_i()),
        PdlFormula::boxed(up_plus(), not_i()),
        PdlFormula::boxed(sideways(PdlProgram::Left), not_i()),
        PdlFormula::boxed(sideways(PdlProgram::Right), not_i()),
    ]);
    PdlFormula::and(
        PdlFormula::dia(PdlProgram::star(PdlProgram::Down), i()),
        PdlFormula::boxed(PdlProgram::star(PdlProgram::Down), PdlFormula::implies(i(), unique)),
    )
}

fn nominal_constraints(phi: &Formula) -> Vec<PdlFormula> {
    phi.nominals().iter().map(|n| nu(&format!("'{n}"))).collect()
}

/// `f(phi) = <down*>phi^t & nu(i1) & ... & nu(ik)` over the nominals of
/// `phi`; satisfiable at the root of a finite tree iff `phi` is satisfiable
/// on a finite transitive tree.
pub fn pdl_reduction(phi: &Formula) -> Result<PdlFormula, TranslateError> {
    let body = PdlFormula::dia(PdlProgram::star(PdlProgram::Down), pdl_translate(phi)?);
    Ok(PdlFormula::conj(std::iter::once(body).chain(nominal_constraints(phi))))
}

/// The variant for trees without a root: predecessors of the evaluation
/// point are folded onto a path marked by a fresh atom `b`, the `U`/`S`
/// clauses use `dn'`/`up'` instead of `down`/`up`, and
/// `f(phi) = phi^t & beta & nu(i1) & ... & nu(ik)` where
/// `beta = b & [down*](b -> [left+]~b & [right+]~b & <down>b) & [down*](~b -> [down]~b)`.
///
/// `beta` asks for an infinite marked path, so the result has no finite
/// model.
pub fn pdl_reduction_flat(phi: &Formula) -> Result<PdlFormula, TranslateError> {
    let flat = unused_name("_flat", &phi.props());
    let body = tr(phi, &Steps::flat(&flat))?;
    Ok(PdlFormula::conj([body, beta(&flat)].into_iter().chain(nominal_constraints(phi))))
}

fn beta(flat: &str) -> PdlFormula {
    let b = || PdlFormula::atom(flat);
    let not_b = || PdlFormula::not(b());
    let all = || PdlProgram::star(PdlProgram::Down);
    let on_path = PdlFormula::conj([
        PdlFormula::boxed(PdlProgram::plus(PdlProgram::Left), not_b()),
        PdlFormula::boxed(PdlProgram::plus(PdlProgram::Right), not_b()),
        PdlFormula::dia(PdlProgram::Down, b()),
    ]);
    PdlFormula::conj([
        b(),
        PdlFormula::boxed(all(), PdlFormula::implies(b(), on_path)),
        PdlFormula::boxed(all(), PdlFormula::implies(not_b(), PdlFormula::boxed(PdlProgram::Down, not_b()))),
    ])
}
