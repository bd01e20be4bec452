//! Hybrid logic toolkit.
//!
//! The crate covers the hybrid language with the binder `down`, the jump
//! operator `@`, tense and until/since modalities and the existential
//! modality `E`. It provides:
//!
//! - [`formula`]: the AST, a parser and canonical printer, and structural
//!   operations such as free variables and the diamond closure.
//! - [`model`]: finite Kripke models and frame-class predicates.
//! - [`checker`]: a set-based model checker for every connective.
//! - [`blocktree`]: finite block-tree representations of possibly infinite
//!   transitive models, with type computation, verification and unravelling.
//! - [`solver`]: satisfiability of HL-down sentences over transitive and
//!   complete frames by searching finite representations.
//! - [`oracle`]: brute-force model enumeration used as ground truth.
//! - [`translate`]: translations and reductions between the hybrid
//!   languages, first-order logic and PDL over sibling-ordered trees.
//! - [`satellites`]: first-order and PDL syntax with finite evaluators.

pub mod blocktree;
pub mod checker;
pub mod formula;
pub mod model;
pub mod oracle;
pub mod satellites;
pub mod solver;
pub mod translate;
