//! Structural operations: free variables, free-variable stripping, the
//! diamond closure and fragment classification.

use super::{AtomKind, Formula};
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

/// The state variables of `f` with an occurrence outside every `down`
/// binding the same name (an `@` term counts as an occurrence).
pub fn free_vars(f: &Formula) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    collect_free(f, &mut Vec::new(), &mut out);
    out
}

fn collect_free(f: &Formula, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
    match f {
        Formula::Atom(a) if a.kind == AtomKind::Var => {
            if !bound.contains(&a.name) {
                out.insert(a.name.clone());
            }
        }
        Formula::At(t, body) => {
            if t.kind == AtomKind::Var && !bound.contains(&t.name) {
                out.insert(t.name.clone());
            }
            collect_free(body, bound, out);
        }
        Formula::Down(x, body) => {
            bound.push(x.clone());
            collect_free(body, bound, out);
            bound.pop();
        }
        _ => {
            for c in f.children() {
                collect_free(c, bound, out);
            }
        }
    }
}

/// Replace every free state-variable occurrence by `false`. A jump `@$x f`
/// to a free variable names no state and becomes `false` as well.
pub fn strip_free(f: &Formula) -> Formula {
    strip(f, &mut Vec::new())
}

fn strip(f: &Formula, bound: &mut Vec<String>) -> Formula {
    match f {
        Formula::Atom(a) if a.kind == AtomKind::Var && !bound.contains(&a.name) => Formula::False,
        Formula::At(t, _) if t.kind == AtomKind::Var && !bound.contains(&t.name) => Formula::False,
        Formula::Down(x, body) => {
            bound.push(x.clone());
            let b = strip(body, bound);
            bound.pop();
            Formula::Down(x.clone(), Box::new(b))
        }
        _ => f.map_children(|c| strip(c, bound)),
    }
}

/// Operator features used to place a formula in the language lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(u16)]
enum Feature {
    Nominal = 1,
    Down = 2,
    At = 4,
    Exists = 8,
    Future = 16,
    Past = 32,
    Until = 64,
    Since = 128,
    Plus = 256,
}

fn features(f: &Formula) -> u16 {
    use Feature::*;
    let mut bits = 0u16;
    f.visit(&mut |g| {
        let feat: &[Feature] = match g {
            Formula::Atom(a) if a.kind == AtomKind::Nominal => &[Nominal],
            Formula::Atom(a) if a.kind == AtomKind::Var => &[Nominal, Down],
            Formula::Down(..) => &[Nominal, Down],
            Formula::At(t, _) if t.kind == AtomKind::Var => &[Nominal, At, Down],
            Formula::At(..) => &[Nominal, At],
            Formula::Exists(_) | Formula::Forall(_) => &[Nominal, Exists],
            Formula::Future(_) | Formula::Globally(_) => &[Future],
            Formula::Past(_) | Formula::Historically(_) => &[Past],
            Formula::Until(..) => &[Until],
            Formula::Since(..) => &[Since],
            Formula::UntilPlus(..)
            | Formula::SincePlus(..)
            | Formula::UntilPlusPlus(..)
            | Formula::SincePlusPlus(..) => &[Plus, Until, Since],
            _ => &[],
        };
        for x in feat {
            bits |= *x as u16;
        }
    });
    bits
}

/// Languages of the hybrid/temporal lattice, from small to large.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Fragment {
    Ml,
    MlFp,
    MlU,
    MlUs,
    Hl,
    HlAt,
    HlDown,
    HlDownAt,
    HlDownFp,
    HlDownAtFp,
    HlAtUs,
    HlEUs,
    HlDownAtEUs,
    Full,
}

impl Fragment {
    /// Every language, in the order used by [`fragment_of`].
    pub const ALL: [Fragment; 14] = [
        Fragment::Ml,
        Fragment::MlFp,
        Fragment::MlU,
        Fragment::MlUs,
        Fragment::Hl,
        Fragment::HlAt,
        Fragment::HlDown,
        Fragment::HlDownAt,
        Fragment::HlDownFp,
        Fragment::HlDownAtFp,
        Fragment::HlAtUs,
        Fragment::HlEUs,
        Fragment::HlDownAtEUs,
        Fragment::Full,
    ];

    fn features(self) -> u16 {
        use Feature::*;
        let list: &[Feature] = match self {
            Fragment::Ml => &[],
            Fragment::MlFp => &[Future, Past],
            Fragment::MlU => &[Future, Until],
            Fragment::MlUs => &[Future, Past, Until, Since],
            Fragment::Hl => &[Nominal],
            Fragment::HlAt => &[Nominal, At],
            Fragment::HlDown => &[Nominal, Down],
            Fragment::HlDownAt => &[Nominal, Down, At],
            Fragment::HlDownFp => &[Nominal, Down, Future, Past],
            Fragment::HlDownAtFp => &[Nominal, Down, At, Future, Past],
            Fragment::HlAtUs => &[Nominal, At, Future, Past, Until, Since],
            Fragment::HlEUs => &[Nominal, At, Exists, Future, Past, Until, Since],
            Fragment::HlDownAtEUs => &[Nominal, Down, At, Exists, Future, Past, Until, Since],
            Fragment::Full => &[Nominal, Down, At, Exists, Future, Past, Until, Since, Plus],
        };
        list.iter().fold(0, |acc, x| acc | *x as u16)
    }

    /// The printed name of the language.
    pub fn label(self) -> &'static str {
        match self {
            Fragment::Ml => "ML",
            Fragment::MlFp => "ML_{F,P}",
            Fragment::MlU => "ML_U",
            Fragment::MlUs => "ML_{U,S}",
            Fragment::Hl => "HL",
            Fragment::HlAt => "HL^@",
            Fragment::HlDown => "HL↓",
            Fragment::HlDownAt => "HL^{↓,@}",
            Fragment::HlDownFp => "HL↓_{F,P}",
            Fragment::HlDownAtFp => "HL^{↓,@}_{F,P}",
            Fragment::HlAtUs => "HL^@_{U,S}",
            Fragment::HlEUs => "HL^E_{U,S}",
            Fragment::HlDownAtEUs => "HL^{↓,@,E}_{U,S}",
            Fragment::Full => "HL^{↓,@,E}_{U++,S++}",
        }
    }

    /// True when every formula of `other` is a formula of `self`.
    pub fn includes(self, other: Fragment) -> bool {
        other.features() & !self.features() == 0
    }

    /// True when `f` uses only operators of this language.
    pub fn admits(self, f: &Formula) -> bool {
        features(f) & !self.features() == 0
    }
}

impl fmt::Display for Fragment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// The first language of [`Fragment::ALL`] containing every operator of `f`.
pub fn fragment_of(f: &Formula) -> Fragment {
    let bits = features(f);
    Fragment::ALL.into_iter().find(|l| bits & !l.features() == 0).unwrap_or(Fragment::Full)
}

/// A formula uses operators outside the language an operation accepts.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("formula is in {found}, outside {expected}")]
pub struct FragmentError {
    pub expected: Fragment,
    pub found: Fragment,
}

impl FragmentError {
    pub fn check(expected: Fragment, f: &Formula) -> Result<(), FragmentError> {
        if expected.admits(f) {
            Ok(())
        } else {
            Err(FragmentError { expected, found: fragment_of(f) })
        }
    }
}

/// `{ strip_free(psi) | <>psi in sub(phi) }`, where `[]psi` contributes the
/// body of its dual `<>~psi`. Returned in first-occurrence pre-order with
/// structural duplicates removed.
pub fn diamond_closure(phi: &Formula) -> Result<Vec<Formula>, FragmentError> {
    FragmentError::check(Fragment::HlDown, phi)?;
    let mut out: Vec<Formula> = Vec::new();
    phi.visit(&mut |g| {
        let body = match g {
            Formula::Diamond(psi) => strip_free(psi),
            Formula::Box(psi) => Formula::not(strip_free(psi)),
            _ => return,
        };
        if !out.contains(&body) {
            out.push(body);
        }
    });
    Ok(out)
}
