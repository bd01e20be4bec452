//! Property tests across the parser, checker, solver and translations.

use std::collections::BTreeMap;

use hylo::blocktree::{realize, verify};
use hylo::checker::eval;
use hylo::formula::{parse, Atom, Formula};
use hylo::model::{Assignment, Frame, HybridModel};
use hylo::oracle::brute_sat;
use hylo::satellites::{fo_eval, FOStructure};
use hylo::solver::{complete_frame_recode, sat_complete, sat_transitive, Budget, SatResult};
use hylo::translate::standard_translation;
use proptest::prelude::*;

const VARS: [&str; 2] = ["x", "y"];

/// Formulas over every connective, with atoms `p`, `q`, `'i`, `$x`, `$y`.
fn any_formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::prop("p")),
        Just(Formula::prop("q")),
        Just(Formula::nominal("i")),
        Just(Formula::var("x")),
        Just(Formula::var("y")),
        Just(Formula::True),
        Just(Formula::False),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        let unary = (0..9usize, inner.clone()).prop_map(|(k, a)| match k {
            0 => Formula::not(a),
            1 => Formula::diamond(a),
            2 => Formula::boxed(a),
            3 => Formula::future(a),
            4 => Formula::globally(a),
            5 => Formula::past(a),
            6 => Formula::historically(a),
            7 => Formula::exists(a),
            _ => Formula::forall(a),
        });
        let binder = (0..4usize, inner.clone()).prop_map(|(k, a)| match k {
            0 => Formula::down("x", a),
            1 => Formula::down("y", a),
            2 => Formula::at(Atom::nominal("i"), a),
            _ => Formula::at(Atom::var("x"), a),
        });
        let binary = (0..10usize, inner.clone(), inner).prop_map(|(k, a, b)| match k {
            0 => Formula::and(a, b),
            1 => Formula::or(a, b),
            2 => Formula::implies(a, b),
            3 => Formula::iff(a, b),
            4 => Formula::until(a, b),
            5 => Formula::since(a, b),
            6 => Formula::until_plus(a, b),
            7 => Formula::since_plus(a, b),
            8 => Formula::until_pp(a, b),
            _ => Formula::since_pp(a, b),
        });
        prop_oneof![unary, binder, binary]
    })
}

/// `HL↓` bodies over `p`, `q`, `$x`, `$y`; closed by binding both
/// variables at the top.
fn hl_down_sentence() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::prop("p")),
        Just(Formula::prop("q")),
        Just(Formula::var("x")),
        Just(Formula::var("y")),
    ];
    let body = leaf.prop_recursive(4, 16, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            inner.clone().prop_map(Formula::diamond),
            inner.clone().prop_map(Formula::boxed),
            (0..2usize, inner.clone()).prop_map(|(v, a)| Formula::down(VARS[v], a)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::or(a, b)),
        ]
    });
    body.prop_map(|f| Formula::down("x", Formula::down("y", f)))
}

/// Models with 1 to 4 states over `p`, `q` and the nominal `'i`.
fn small_model() -> impl Strategy<Value = HybridModel> {
    (1..=4usize).prop_flat_map(|n| {
        let masks = proptest::collection::vec(0u64..(1 << n), n);
        (masks, 0u64..(1 << n), 0u64..(1 << n), 0..n).prop_map(|(succ, p, q, i)| {
            let mut m = HybridModel::from_masks(succ);
            m.set_prop_mask("p", p);
            m.set_prop_mask("q", q);
            m.set_nominal("i", i);
            m
        })
    })
}

fn small_budget() -> Budget {
    Budget { max_clique: 3, max_nodes: 8, max_c: 4, exhaustive: false }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn printing_then_parsing_is_the_identity(f in any_formula()) {
        prop_assert_eq!(parse(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn checker_agrees_with_the_standard_translation(f in any_formula(), m in small_model()) {
        let st = standard_translation(&f, "x0").unwrap();
        let s = FOStructure::from_model(&m);
        // Free state variables are read the same way on both sides.
        let g: Assignment = VARS.iter().map(|v| (v.to_string(), 0)).collect();
        for state in 0..m.len() {
            let mut env: BTreeMap<String, usize> = g.clone();
            env.insert("x0".into(), state);
            prop_assert_eq!(eval(&m, &g, state, &f).unwrap(), fo_eval(&s, &env, &st).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn solver_agrees_with_the_oracle(phi in hl_down_sentence()) {
        let answer = sat_transitive(&phi, &small_budget()).unwrap();
        match &answer {
            SatResult::Sat(w) => {
                prop_assert!(verify(&w.rep, &phi, &w.guess).unwrap().accepted());
                prop_assert!(realize(&w.rep, 2).unwrap().is_transitive());
            }
            SatResult::Unsat { .. } => {
                prop_assert!(brute_sat(&phi, Frame::Transitive, 4).unwrap().is_none());
            }
            SatResult::Unknown(_) => {}
        }
        if brute_sat(&phi, Frame::Transitive, 3).unwrap().is_some() {
            let refuted = matches!(answer, SatResult::Unsat { .. });
            prop_assert!(!refuted, "refuted a sentence with a small model");
        }
    }

    #[test]
    fn solver_answers_are_deterministic(phi in hl_down_sentence()) {
        let a = sat_transitive(&phi, &small_budget()).unwrap();
        let b = sat_transitive(&phi, &small_budget()).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn complete_frames_agree_with_the_recoding(phi in hl_down_sentence()) {
        let direct = sat_complete(&phi, &small_budget()).unwrap();
        let recoded = sat_transitive(&complete_frame_recode(&phi), &small_budget()).unwrap();
        let kind = |r: &SatResult| match r {
            SatResult::Sat(_) => Some(true),
            SatResult::Unsat { .. } => Some(false),
            SatResult::Unknown(_) => None,
        };
        if let (Some(a), Some(b)) = (kind(&direct), kind(&recoded)) {
            prop_assert_eq!(a, b);
        }
        if brute_sat(&phi, Frame::Complete, 3).unwrap().is_some() {
            prop_assert_ne!(kind(&direct), Some(false));
        }
    }

    #[test]
    fn realizations_grow_with_depth(phi in hl_down_sentence()) {
        if let SatResult::Sat(w) = sat_transitive(&phi, &small_budget()).unwrap() {
            let mut last = 0;
            for depth in 0..=3 {
                let m = realize(&w.rep, depth).unwrap();
                prop_assert!(m.is_transitive());
                prop_assert!(m.len() >= last);
                last = m.len();
            }
        }
    }
}
