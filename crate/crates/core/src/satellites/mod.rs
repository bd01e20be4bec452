//! Satellite logics used as sources and targets of translations: first-order
//! logic over one binary relation and PDL over sibling-ordered trees.

pub mod fo;
pub mod pdl;

pub use fo::{
    check_all_u1, check_mc_eq, fo_eval, parse_fo, parse_fo_trusted, print_fo, string_structure, FOFormula, FOStructure,
    FoError, FoParseError, FoProgram, PartialStructure, Term, Tri,
};
pub use pdl::{
    enumerate_trees, parse_pdl, pdl_eval, tree_shapes, PdlError, PdlFormula, PdlParseError, PdlProgram, SiblingTree,
};
