//! Acceptance suite: one pass/fail line per criterion.
//!
//! Every bound and corpus is pinned in this file. Criteria that cannot be
//! met at the required scale print `FAIL (expected)` and do not change the
//! exit status; any other failure makes the binary exit with status 1.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use hylo::blocktree::{realize, verify};
use hylo::checker::eval;
use hylo::formula::{is_prop_name, parse, Formula};
use hylo::model::{Assignment, Frame, HybridModel};
use hylo::oracle::{brute_fo_sat, brute_global_sat, brute_sat, enumerate_models, find_disagreement, frames};
use hylo::satellites::{enumerate_trees, fo_eval, parse_fo, pdl_eval, FOFormula, FOStructure};
use hylo::solver::{sat_transitive, Budget, SatResult};
use hylo::translate::{
    at_elim_linear, complete_reduction, globsat_reduction, ht, pdl_reduction, spy_at, spy_fp, standard_translation,
    until_via_down, until_via_down_tense, zigzag,
};
use rayon::prelude::*;

/// The result of one criterion.
struct Outcome {
    pass: bool,
    /// The criterion cannot be met at the required scale; a failure is
    /// reported but does not fail the run.
    unattainable: bool,
    detail: String,
}

impl Outcome {
    fn check(pass: bool, detail: impl Into<String>) -> Self {
        Outcome { pass, unattainable: false, detail: detail.into() }
    }

    fn unattainable(detail: impl Into<String>) -> Self {
        Outcome { pass: false, unattainable: true, detail: detail.into() }
    }
}

type Check = fn() -> Result<Outcome, String>;

fn h(src: &str) -> Formula {
    parse(src).unwrap_or_else(|e| panic!("corpus formula {src}: {e}"))
}

fn fo(src: &str) -> FOFormula {
    parse_fo(src).unwrap_or_else(|e| panic!("corpus sentence {src}: {e}"))
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn within(t: Instant, limit: Duration) -> Result<(), String> {
    if t.elapsed() > limit {
        Err(format!("took {:.1?}, limit {:?}", t.elapsed(), limit))
    } else {
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// 1. Infinite chain

/// Length of the longest chain of distinct `p` states, each strictly below
/// the previous one.
fn longest_p_chain(m: &HybridModel) -> usize {
    let p = m.prop_mask("p");
    let n = m.len();
    let strict = |a: usize, b: usize| a != b && m.has_edge(a, b) && !m.has_edge(b, a);
    let mut memo = vec![0usize; n];
    // Strict edges form a DAG, so visiting states by decreasing number of
    // strict successors processes every successor first.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&s| (0..n).filter(|&t| strict(s, t)).count());
    for &s in &order {
        if p >> s & 1 == 1 {
            memo[s] = 1 + (0..n).filter(|&t| strict(s, t) && p >> t & 1 == 1).map(|t| memo[t]).max().unwrap_or(0);
        }
    }
    memo.into_iter().max().unwrap_or(0)
}

fn criterion_1() -> Result<Outcome, String> {
    let t = Instant::now();
    let chi = h("p & <>p & []<>p & []down $x.~<>$x");
    let oracle = brute_sat(&chi, Frame::Transitive, 6).map_err(err)?;
    if oracle.is_some() {
        return Ok(Outcome::check(false, "oracle found a model with at most 6 states"));
    }
    let SatResult::Sat(w) = sat_transitive(&chi, &Budget::default()).map_err(err)? else {
        return Ok(Outcome::check(false, "solver did not answer SAT"));
    };
    if !verify(&w.rep, &chi, &w.guess).map_err(err)?.accepted() {
        return Ok(Outcome::check(false, "witness rejected by verify"));
    }
    let m = realize(&w.rep, 4).map_err(err)?;
    let chain = longest_p_chain(&m);
    within(t, Duration::from_secs(60))?;
    Ok(Outcome::check(
        m.is_transitive() && chain >= 5,
        format!(
            "oracle n=6 not found; witness verified; depth-4 realization has {} states, transitive={}, p-chain {chain}",
            m.len(),
            m.is_transitive()
        ),
    ))
}

// ---------------------------------------------------------------------------
// 2 and 3. Until simulations

fn until_agreement(sim: fn(&Formula, &Formula) -> Formula, frame: Frame) -> Result<Outcome, String> {
    let (p, q) = (h("p"), h("q"));
    let pair = [h("U(p, q)"), sim(&p, &q)];
    let found = find_disagreement(&pair, frame, 3).map_err(err)?;
    Ok(match found {
        None => Outcome::check(true, format!("no disagreement on {frame} models with at most 3 states")),
        Some(f) => Outcome::check(false, format!("disagreement at state {} of {}", f.state, f.model.to_json())),
    })
}

fn criterion_2() -> Result<Outcome, String> {
    let t = Instant::now();
    let out = until_agreement(until_via_down, Frame::Any)?;
    within(t, Duration::from_secs(120))?;
    Ok(out)
}

fn criterion_3() -> Result<Outcome, String> {
    until_agreement(until_via_down_tense, Frame::Transitive)
}

// ---------------------------------------------------------------------------
// 4. Forcing complete generated subframes

fn criterion_4() -> Result<Outcome, String> {
    let force = h("down $x.[]<>$x");
    let (mut states, mut terminals, mut complete) = (0usize, 0usize, 0usize);
    for n in 1..=4 {
        for succ in frames(Frame::Transitive, n) {
            let m = HybridModel::from_masks(succ);
            for s in 0..n {
                let holds = eval(&m, &Assignment::new(), s, &force).map_err(err)?;
                let sub_complete = m.generated_submodel(s).map_err(err)?.is_complete();
                let terminal = m.succ(s) == 0;
                if terminal {
                    // The disjunct is needed: a terminal state does not
                    // generate a complete subframe, yet the formula holds.
                    if sub_complete || !holds {
                        return Ok(Outcome::check(false, format!("terminal state {s} of {}", m.to_json())));
                    }
                    terminals += 1;
                }
                if sub_complete {
                    complete += 1;
                }
                if holds != (sub_complete || terminal) {
                    return Ok(Outcome::check(false, format!("state {s} of {}", m.to_json())));
                }
                states += 1;
            }
        }
    }
    Ok(Outcome::check(true, format!("{states} states checked; {complete} complete, {terminals} vacuous terminals")))
}

// ---------------------------------------------------------------------------
// 5. Global satisfiability

/// Basic modal formulas. Formulas whose global models all contain an
/// infinite path (such as `<>true`) are left out, because a finite
/// transitive tree cannot host them.
const GLOBSAT_CORPUS: [&str; 20] = [
    "p",
    "~p",
    "p | q",
    "<>p -> p",
    "[]p",
    "[]false",
    "p -> <>~p",
    "p & ~p",
    "(p -> <>q) & (q -> []~q)",
    "p -> <>(q & []~p)",
    "<>p & []~p",
    "<>(p & q) -> <>p",
    "~p -> <>p",
    "p <-> <>p",
    "[]<>p",
    "p & [][]~p",
    "<>[]false",
    "q & <>~q",
    "[]p & <>~p",
    "(<>p -> []p) & ~p",
];

fn criterion_5() -> Result<Outcome, String> {
    let t = Instant::now();
    let (mut sat, mut reduced) = (0, 0);
    for src in GLOBSAT_CORPUS {
        let phi = h(src);
        let f = globsat_reduction(&phi).map_err(err)?;
        if brute_global_sat(&phi, Frame::Any, 3).map_err(err)?.is_some() {
            sat += 1;
            if brute_sat(&f, Frame::TransitiveTree, 5).map_err(err)?.is_none() {
                return Ok(Outcome::check(
                    false,
                    format!("{src}: globally satisfiable, f(phi) not found on transitive trees"),
                ));
            }
        }
        if brute_sat(&f, Frame::Transitive, 4).map_err(err)?.is_some() {
            reduced += 1;
            if brute_global_sat(&phi, Frame::Any, 4).map_err(err)?.is_none() {
                return Ok(Outcome::check(false, format!("{src}: f(phi) satisfiable, no global model")));
            }
        }
    }
    within(t, Duration::from_secs(300))?;
    Ok(Outcome::check(
        true,
        format!(
            "{} formulas; {sat} globally satisfiable, {reduced} with f(phi) satisfiable; both implications hold",
            GLOBSAT_CORPUS.len()
        ),
    ))
}

// ---------------------------------------------------------------------------
// 6. Zig-zag

/// `[all,(0,1)]` sentences satisfiable with at most 2 elements.
const ZIGZAG_SAT: [&str; 10] = [
    "E x.R(x,x)",
    "E x.~R(x,x)",
    "A x.E y.R(x,y)",
    "E x.A y.R(x,y)",
    "A x.A y.R(x,y)",
    "A x.~R(x,x)",
    "A x.A y.(R(x,y) -> R(y,x))",
    "E x.E y.(R(x,y) & ~R(y,x))",
    "(E x.R(x,x)) & E y.~R(y,y)",
    "(E x.E y.R(x,y)) & A x.R(x,x)",
];

/// `[all,(0,1)]` sentences without any model.
const ZIGZAG_UNSAT: [&str; 5] = [
    "E x.R(x,x) & ~E x.R(x,x)",
    "(A x.R(x,x)) & E x.~R(x,x)",
    "(A x.A y.R(x,y)) & E x.~R(x,x)",
    "(A x.E y.R(x,y)) & A x.A y.~R(x,y)",
    "(E x.E y.R(x,y)) & A x.A y.~R(y,x)",
];

/// Largest domain the oracle can exhaust for the zig-zag image of an
/// unsatisfiable sentence: size 3 takes about a second, size 4 does not
/// finish within ten minutes.
const ZIGZAG_EXHAUST_BOUND: usize = 3;

fn criterion_6() -> Result<Outcome, String> {
    let mut largest = 0;
    for src in ZIGZAG_SAT {
        let alpha = fo(src);
        if brute_fo_sat(&alpha, Frame::Any, 2).map_err(err)?.is_none() {
            return Ok(Outcome::check(false, format!("{src}: no model with at most 2 elements")));
        }
        match brute_fo_sat(&zigzag(&alpha).map_err(err)?, Frame::Transitive, 8).map_err(err)? {
            Some(s) => largest = largest.max(s.len()),
            None => return Ok(Outcome::check(false, format!("{src}: zig-zag image not found"))),
        }
    }
    for src in ZIGZAG_UNSAT {
        let alpha = fo(src);
        if brute_fo_sat(&alpha, Frame::Any, 2).map_err(err)?.is_some() {
            return Ok(Outcome::check(false, format!("{src}: unexpectedly satisfiable")));
        }
        let z = zigzag(&alpha).map_err(err)?;
        if brute_fo_sat(&z, Frame::Transitive, ZIGZAG_EXHAUST_BOUND).map_err(err)?.is_some() {
            return Ok(Outcome::check(false, format!("{src}: zig-zag image satisfiable")));
        }
    }
    Ok(Outcome::unattainable(format!(
        "{} satisfiable sentences: every image found (largest {largest} elements); {} unsatisfiable sentences: images exhausted only up to {ZIGZAG_EXHAUST_BOUND} of the required 8 elements",
        ZIGZAG_SAT.len(),
        ZIGZAG_UNSAT.len()
    )))
}

// ---------------------------------------------------------------------------
// 7. Spy points

const SPY_CORPUS: [&str; 10] = [
    "E x.P(x)",
    "E x.(P(x) & ~P(x))",
    "E x.E y.(R(x,y) & P(x) & ~P(y))",
    "(A x.~R(x,x)) & E x.E y.R(x,y)",
    "(E x.E y.(R(x,y) & R(y,x))) & A x.~R(x,x)",
    "(A x.E y.R(x,y)) & A x.~R(x,x)",
    "(E x.(P(x) & Q(x))) & A y.(P(y) -> ~Q(y))",
    "E x.E y.E z.(R(x,y) & R(y,z) & ~R(x,z))",
    "E x.(P(x) & E y.(R(x,y) & Q(y) & E z.(R(y,z) & S(z))))",
    "(E x.(P(x) & Q(x) & S(x) & T(x))) & A x.R(x,x)",
];

fn criterion_7() -> Result<Outcome, String> {
    let results: Vec<Result<Option<String>, String>> = SPY_CORPUS
        .par_iter()
        .map(|src| {
            let alpha = fo(src);
            let fo_sat = brute_fo_sat(&alpha, Frame::Transitive, 3).map_err(err)?.is_some();
            let at = brute_sat(&spy_at(&alpha).map_err(err)?, Frame::Transitive, 4).map_err(err)?.is_some();
            let fp = brute_sat(&spy_fp(&alpha).map_err(err)?, Frame::Transitive, 4).map_err(err)?.is_some();
            Ok((fo_sat != at || fo_sat != fp)
                .then(|| format!("{src}: alpha {fo_sat}, @ variant {at}, F/P variant {fp}")))
        })
        .collect();
    let mut sat = 0;
    for (src, r) in SPY_CORPUS.iter().zip(results) {
        if let Some(msg) = r? {
            return Ok(Outcome::check(false, msg));
        }
        if brute_fo_sat(&fo(src), Frame::Transitive, 3).map_err(err)?.is_some() {
            sat += 1;
        }
    }
    Ok(Outcome::check(true, format!("{} sentences ({sat} satisfiable); both variants agree", SPY_CORPUS.len())))
}

// ---------------------------------------------------------------------------
// 8. @ over linear frames

const AT_CORPUS: [&str; 10] = [
    "@'i p",
    "@'i ~p",
    "@'i F p",
    "@'i P q",
    "@'i (p & G q)",
    "@'i H p",
    "@'i 'j",
    "@'i (p & @'j q)",
    "@'i <>p",
    "@'i (F 'j & ~p)",
];

fn criterion_8() -> Result<Outcome, String> {
    for src in AT_CORPUS {
        let phi = h(src);
        let pair = [phi.clone(), at_elim_linear(&phi)];
        if let Some(f) = find_disagreement(&pair, Frame::Linear, 5).map_err(err)? {
            return Ok(Outcome::check(
                false,
                format!("{src}: disagreement at state {} of {}", f.state, f.model.to_json()),
            ));
        }
    }
    Ok(Outcome::check(true, format!("{} formulas agree on linear models with at most 5 states", AT_CORPUS.len())))
}

// ---------------------------------------------------------------------------
// 9. PDL over trees

const PDL_CORPUS: [&str; 10] = [
    "p",
    "p & ~p",
    "U(p, q)",
    "S(p, q) & ~p",
    "E (p & q) & A ~q",
    "'i & F 'i",
    "@'i p & E ~p",
    "U(p, false) & U(q, false) & A ~(p & q)",
    "H false & F (p & F q)",
    "S(p, false) & S(~p, false)",
];

fn criterion_9() -> Result<Outcome, String> {
    let mut sat = 0;
    for src in PDL_CORPUS {
        let phi = h(src);
        let oracle = brute_sat(&phi, Frame::TransitiveTree, 4).map_err(err)?.is_some();
        let f = pdl_reduction(&phi).map_err(err)?;
        let mut atoms = phi.props();
        atoms.extend(phi.nominals().into_iter().map(|i| format!("'{i}")));
        let mut tree = false;
        for t in enumerate_trees(4, &atoms) {
            if pdl_eval(&t, 0, &f).map_err(err)? {
                tree = true;
                break;
            }
        }
        if oracle != tree {
            return Ok(Outcome::check(false, format!("{src}: oracle {oracle}, sibling trees {tree}")));
        }
        sat += usize::from(oracle);
    }
    Ok(Outcome::check(
        true,
        format!("{} formulas ({sat} satisfiable) agree on trees with at most 4 nodes", PDL_CORPUS.len()),
    ))
}

// ---------------------------------------------------------------------------
// 10. Standard translation

const ST_CORPUS: [&str; 25] = [
    "true",
    "false",
    "p",
    "'i",
    "~p",
    "p & q",
    "p | ~q",
    "p -> q",
    "p <-> <>q",
    "<>p",
    "[]p",
    "F p & G q",
    "P p | H q",
    "U(p, q)",
    "S(p, q)",
    "U+(p, q)",
    "S+(p, q)",
    "U++(p, q)",
    "S++(p, q)",
    "E p",
    "A (p -> <>'i)",
    "@'i p",
    "down $x.<>$x",
    "down $x.[](p -> <>$x)",
    "down $x.<>down $y.@$x <>($y & ~$x)",
];

fn criterion_10() -> Result<Outcome, String> {
    let results: Vec<Result<usize, String>> = ST_CORPUS
        .par_iter()
        .map(|src| {
            let phi = h(src);
            let st = standard_translation(&phi, "x0").map_err(err)?;
            let mut checked = 0;
            for m in enumerate_models(Frame::Any, 3, &phi.props(), &phi.nominals()) {
                let s = FOStructure::from_model(&m);
                for state in 0..m.len() {
                    let env = BTreeMap::from([("x0".to_string(), state)]);
                    let lhs = eval(&m, &Assignment::new(), state, &phi).map_err(err)?;
                    let rhs = fo_eval(&s, &env, &st).map_err(err)?;
                    if lhs != rhs {
                        return Err(format!("{src}: state {state} of {}", m.to_json()));
                    }
                    checked += 1;
                }
            }
            Ok(checked)
        })
        .collect();
    let mut total = 0;
    for r in results {
        match r {
            Ok(n) => total += n,
            Err(msg) => return Ok(Outcome::check(false, msg)),
        }
    }
    Ok(Outcome::check(true, format!("{} formulas agree at {total} model states", ST_CORPUS.len())))
}

// ---------------------------------------------------------------------------
// 11. Monadic class and complete frames

const MC_CORPUS: [&str; 10] = [
    "E x.P(x)",
    "A x.P(x)",
    "E x.E y.~(x = y)",
    "A x.A y.(x = y)",
    "E x.(P(x) & ~Q(x)) & A y.(Q(y) -> P(y))",
    "E x.E y.(P(x) & ~P(y))",
    "P('c) & A x.(P(x) -> x = 'c)",
    "E x.E y.E z.(~(x = y) & ~(y = z) & ~(x = z))",
    "E x.(P(x) & ~P(x))",
    "A x.(P(x) & ~P(x))",
];

/// The proposition standing for a predicate: its own name when that is a
/// proposition name, otherwise the lowercased name (`P` is a keyword).
fn prop_of(pred: &str) -> String {
    if is_prop_name(pred) {
        pred.to_string()
    } else {
        pred.to_lowercase()
    }
}

/// The monadic structure of a complete model: predicates are read from
/// their propositions, constants from nominals.
fn monadic(m: &HybridModel, alpha: &FOFormula) -> FOStructure {
    let unary = alpha.predicates().into_iter().map(|p| {
        let mask = m.prop_mask(&prop_of(&p));
        (p, mask)
    });
    FOStructure::from_parts(m.succ_masks().to_vec(), unary.collect(), m.nominals().clone())
}

fn criterion_11() -> Result<Outcome, String> {
    let (mut points, mut empty_domain) = (0, 0);
    for src in MC_CORPUS {
        let alpha = fo(src);
        let phi = ht(&alpha).map_err(err)?;
        // Pointwise: every complete model of at most 3 states is exactly
        // one monadic structure, so this covers both directions.
        let props: Vec<String> = alpha.predicates().iter().map(|p| prop_of(p)).collect();
        for m in enumerate_models(Frame::Complete, 3, &props, &alpha.constants()) {
            let truth = fo_eval(&monadic(&m, &alpha), &BTreeMap::new(), &alpha).map_err(err)?;
            for s in 0..m.len() {
                if eval(&m, &Assignment::new(), s, &phi).map_err(err)? != truth {
                    return Ok(Outcome::check(false, format!("{src}: HT differs at state {s} of {}", m.to_json())));
                }
                points += 1;
            }
        }
        // Satisfiability transfer through the complete-frame reduction at
        // states with a successor.
        let fo_sat = brute_fo_sat(&alpha, Frame::Any, 3).map_err(err)?.is_some();
        let reduced = complete_reduction(&alpha).map_err(err)?;
        let with_succ = Formula::and(reduced.clone(), h("<>true"));
        let hl_sat = brute_sat(&with_succ, Frame::Transitive, 3).map_err(err)?.is_some();
        if fo_sat != hl_sat {
            return Ok(Outcome::check(false, format!("{src}: alpha {fo_sat}, complete reduction {hl_sat}")));
        }
        // A terminal state reads alpha over the empty domain.
        if !fo_sat && brute_sat(&reduced, Frame::Transitive, 1).map_err(err)?.is_some() {
            empty_domain += 1;
        }
    }
    Ok(Outcome::check(
        true,
        format!(
            "{} sentences; HT agrees at {points} complete-model states; sat transfer agrees at states with a successor (unsatisfiable sentences holding vacuously at a terminal state: {empty_domain})",
            MC_CORPUS.len()
        ),
    ))
}

// ---------------------------------------------------------------------------
// 12. Solver against the oracle

const HL_DOWN_CORPUS: [&str; 24] = [
    "p",
    "p & ~p",
    "<>p & []~p",
    "<>p & <>~p",
    "[]false & p",
    "down $x.<>$x",
    "down $x.~<>$x",
    "down $x.<>(p & <>$x)",
    "down $x.[]<>$x",
    "(down $x.[]<>$x) & <>p & <>~p",
    "down $x.<>down $y.(~<>$x & <>$y)",
    "down $x.<>down $y.(<>$x & ~<>$y)",
    "([]down $x.~<>$x) & <>p",
    "p & <>p & []<>p & []down $x.~<>$x",
    "down $x.<>(p & down $y.<>(q & <>$x))",
    "<>p & <>q & [](p -> ~q)",
    "down $x.[](<>$x -> p) & <>(~p & <>$x)",
    "down $x.<>(~p & []~<>$x)",
    "<><><>p & [][]~<>p",
    "down $x.(p & []down $y.(~p & ~<>$y & <>p))",
    "<>(p & down $x.~<>$x) & [](p -> <>p)",
    "down $x.<>(q & down $y.<>($x & ~q)) & []~<>q",
    "[]<>p & []<>~p & <>true",
    "down $x.<>down $y.<>down $z.(~<>$x & ~<>$y & ~<>$z & p)",
];

fn criterion_12() -> Result<Outcome, String> {
    let t = Instant::now();
    let budget = Budget { max_clique: 4, max_nodes: 8, max_c: 4, exhaustive: false };
    let results: Vec<Result<(bool, bool), String>> = HL_DOWN_CORPUS
        .par_iter()
        .map(|src| {
            let phi = h(src);
            let small = brute_sat(&phi, Frame::Transitive, 4).map_err(err)?.is_some();
            let answer = sat_transitive(&phi, &budget).map_err(err)?;
            match &answer {
                SatResult::Sat(w) => {
                    if !verify(&w.rep, &phi, &w.guess).map_err(err)?.accepted() {
                        return Err(format!("{src}: witness rejected"));
                    }
                }
                _ if small => {
                    return Err(format!("{src}: oracle model with at most 4 states, solver answered {answer}"))
                }
                _ => {}
            }
            Ok((small, matches!(answer, SatResult::Sat(_))))
        })
        .collect();
    let (mut small, mut sat) = (0, 0);
    for r in results {
        match r {
            Ok((s, w)) => {
                small += usize::from(s);
                sat += usize::from(w);
            }
            Err(msg) => return Ok(Outcome::check(false, msg)),
        }
    }
    within(t, Duration::from_secs(600))?;
    Ok(Outcome::check(
        true,
        format!(
            "{} formulas; {small} with a model of at most 4 states, all SAT; {sat} SAT answers, every witness verified",
            HL_DOWN_CORPUS.len()
        ),
    ))
}

// ---------------------------------------------------------------------------
// 13. Complexity claims

fn criterion_13() -> Result<Outcome, String> {
    Ok(Outcome::unattainable(
        "complexity bounds and undecidability are not experimentally reproducible; covered only through criteria 1 to 12",
    ))
}

fn main() {
    let checks: [(&str, Check); 13] = [
        ("infinite-chain separation", criterion_1),
        ("until equivalence", criterion_2),
        ("tense until simulation", criterion_3),
        ("complete-frame force", criterion_4),
        ("globsat reduction", criterion_5),
        ("zig-zag transfer", criterion_6),
        ("spy-point reductions", criterion_7),
        ("@-elimination over linear frames", criterion_8),
        ("PDL tree embedding", criterion_9),
        ("standard translation agreement", criterion_10),
        ("HT and complete-frame equivalence", criterion_11),
        ("solver against oracle", criterion_12),
        ("complexity claims", criterion_13),
    ];
    let mut unexpected = 0;
    for (i, (name, check)) in checks.into_iter().enumerate() {
        let t = Instant::now();
        let outcome = check().unwrap_or_else(|e| Outcome::check(false, format!("error: {e}")));
        let verdict = match (outcome.pass, outcome.unattainable) {
            (true, _) => "PASS",
            (false, true) => "FAIL (expected)",
            (false, false) => {
                unexpected += 1;
                "FAIL"
            }
        };
        println!("criterion {}: {verdict} [{name}] {} ({:.2?})", i + 1, outcome.detail, t.elapsed());
    }
    if unexpected > 0 {
        eprintln!("{unexpected} criteria failed");
        std::process::exit(1);
    }
}
