//! Translations and reductions between the hybrid languages, first-order
//! logic and PDL over sibling-ordered trees.
//!
//! Every function here is total on its input fragment and returns an error
//! for inputs outside it. Generated names come from the reserved `_`
//! namespace (`$_g0`, `$_spy`, `'_spy`, `_y0`, `_flat`), chosen above any
//! reserved name already present in the input so that no translation
//! captures a free variable.

mod first_order;
mod modal;
mod pdl;

pub use first_order::{complete_reduction, ht, spy_at, spy_fp, standard_translation, string_reduction, zigzag};
pub use modal::{
    at_elim_linear, exists_to_at, globsat_reduction, ml_to_until, since_via_down_tense, tt_to_nat_at, tt_to_nat_tense,
    u_to_upp, until_via_down, until_via_down_tense, upp_to_u,
};
pub use pdl::{pdl_reduction, pdl_reduction_flat, pdl_translate};

use crate::formula::FragmentError;
use crate::satellites::FoError;
use thiserror::Error;

/// Errors from the translation functions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslateError {
    /// The hybrid input uses operators outside the rule's source language.
    #[error(transparent)]
    Fragment(#[from] FragmentError),
    /// The first-order input is outside the rule's source fragment.
    #[error(transparent)]
    Fo(#[from] FoError),
    /// A construct the rule has no clause for.
    #[error("{rule}: cannot translate {construct}")]
    Unsupported { rule: &'static str, construct: String },
    /// Two source symbols map to the same target symbol, or a symbol has
    /// no valid target name.
    #[error("{0}")]
    Naming(String),
}

impl TranslateError {
    fn unsupported(rule: &'static str, construct: impl std::fmt::Display) -> Self {
        TranslateError::Unsupported { rule, construct: construct.to_string() }
    }
}

/// Generator of names `<prefix>N`, starting above every `<prefix>N`
/// already in use.
#[derive(Debug, Clone)]
pub(crate) struct Fresh {
    prefix: &'static str,
    next: usize,
}

impl Fresh {
    pub(crate) fn after<I, S>(prefix: &'static str, used: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let next = used
            .into_iter()
            .filter_map(|n| n.as_ref().strip_prefix(prefix).and_then(|d| d.parse::<usize>().ok()))
            .map(|k| k + 1)
            .max()
            .unwrap_or(0);
        Fresh { prefix, next }
    }

    pub(crate) fn name(&mut self) -> String {
        let s = format!("{}{}", self.prefix, self.next);
        self.next += 1;
        s
    }
}

/// `base` if unused, otherwise `base1`, `base2`, ...
pub(crate) fn unused_name(base: &str, used: &[String]) -> String {
    if !used.iter().any(|u| u == base) {
        return base.to_string();
    }
    (1..).map(|k| format!("{base}{k}")).find(|c| !used.contains(c)).expect("unbounded search")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fresh_names_start_above_used_ones() {
        let mut f = Fresh::after("_g", ["x", "_g3", "_g1", "_gx"]);
        assert_eq!(f.name(), "_g4");
        assert_eq!(f.name(), "_g5");
        let mut g = Fresh::after("_g", Vec::<String>::new());
        assert_eq!(g.name(), "_g0");
    }

    #[test]
    fn unused_name_appends_a_counter() {
        assert_eq!(unused_name("_spy", &[]), "_spy");
        assert_eq!(unused_name("_spy", &["_spy".to_string()]), "_spy1");
    }
}
