//! Satisfiability of HL-down sentences over transitive and complete frames.
//!
//! The transitive search works on node summaries. A node of a block tree is
//! a clique `Q` (or an irreflexive singleton) with children below it. What
//! the rest of the tree needs to know about a node is a pair `(t, w)`: `w`
//! is the set of closure sentences true at some state of `Q`, and `t` is
//! the type of the node, the sentences true somewhere in its subtree. Given
//! the union `U` of the children's types, `w` is computed by evaluating the
//! closure over `Q` with `U` as frontier, and `t = w u U`. A pair is kept
//! when some clique and some set of kept child pairs produce it, with every
//! sentence of `U` already in `w` or in a child's `w`. The kept pairs are
//! the greatest set closed under this rule.
//!
//! Cliques are enumerated with iterative deepening on their size. A
//! sentence with `m` labels and `q` state variables never needs more than
//! `q + 1` states with the same labelling in one clique, so cliques of at
//! most `2^m * (q + 1)` states suffice, and failure at that size is an
//! exhaustive UNSAT. A SAT answer is turned into a [`FiniteRep`] with type
//! guesses: each pair gets one node and repeated pairs become c-states.
//! Every witness is checked with [`TypeEngine::verify`] before it is
//! returned.
//!
//! Nominals are read as propositions, so SAT answers for sentences with
//! nominals carry a warning.

use crate::blocktree::{BlockTreeError, CGuess, FiniteRep, TypeEngine, Verdict};
use crate::checker::Evaluator;
use crate::formula::Formula;
use crate::model::{full_mask, StateId, MAX_STATES};
use rayon::prelude::*;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use thiserror::Error;

/// Largest closure the transitive search handles; it tabulates all
/// `2^d` frontier sets.
pub const MAX_SEARCH_CLOSURE: usize = 14;

/// Clique-evaluation count above which a search level is skipped, unless
/// the budget asks for an exhaustive run.
const WORK_LIMIT: u64 = 1 << 22;

/// Limit on clique-evaluation count in exhaustive runs.
const EXHAUSTIVE_WORK_LIMIT: u64 = 1 << 28;

/// Resource bounds for one solver call.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Largest clique in a witness; the deepening schedule is `1..=max_clique`.
    pub max_clique: usize,
    /// Largest number of nodes (cliques of m-states) in a witness.
    pub max_nodes: usize,
    /// Largest number of c-states in a witness.
    pub max_c: usize,
    /// Run the refutation at the full clique bound even when it is
    /// expensive.
    pub exhaustive: bool,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_clique: 4, max_nodes: 8, max_c: 4, exhaustive: false }
    }
}

/// A satisfying representation with its type guesses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub rep: FiniteRep,
    pub guess: CGuess,
    /// The sentence has nominals, which were read as propositions.
    pub nominal_warning: bool,
}

/// Solver verdicts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SatResult {
    Sat(Witness),
    /// No model exists. The search covered every clique of up to
    /// `clique_bound` states.
    Unsat {
        clique_bound: usize,
    },
    /// The budget ran out before a verdict.
    Unknown(String),
}

impl fmt::Display for SatResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SatResult::Sat(w) if w.nominal_warning => f.write_str("SAT (WARN: nominals read as propositions)"),
            SatResult::Sat(_) => f.write_str("SAT"),
            SatResult::Unsat { clique_bound } => {
                write!(f, "UNSAT (exhaustive: every clique of up to {clique_bound} states)")
            }
            SatResult::Unknown(why) => write!(f, "UNKNOWN ({why})"),
        }
    }
}

/// Solver errors.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error(transparent)]
    BlockTree(#[from] BlockTreeError),
    /// A constructed witness failed verification. This is a solver bug.
    #[error("internal error: witness rejected by verify: {0}")]
    WitnessRejected(String),
}

/// `(down $x.[]<>$x) & <>true & phi`. On transitive frames the first two
/// conjuncts force the generated subframe to be a clique, so this is
/// satisfiable over transitive frames iff `phi` is satisfiable over
/// complete frames.
pub fn complete_frame_recode(phi: &Formula) -> Formula {
    let force = Formula::down("x", Formula::boxed(Formula::diamond(Formula::var("x"))));
    Formula::conj([force, Formula::diamond(Formula::True), phi.clone()])
}

/// A clique candidate: one label set per state, nondecreasing.
#[derive(Debug, Clone)]
struct Cand {
    labels: Vec<u32>,
    reflexive: bool,
}

impl Cand {
    fn succ(&self) -> Vec<u64> {
        let n = self.labels.len();
        if self.reflexive {
            vec![full_mask(n); n]
        } else {
            vec![0; n]
        }
    }

    fn label_masks(&self, atoms: usize) -> Vec<u64> {
        (0..atoms)
            .map(|a| {
                self.labels.iter().enumerate().filter(|(_, &l)| l >> a & 1 == 1).fold(0u64, |acc, (s, _)| acc | 1 << s)
            })
            .collect()
    }
}

/// All cliques of exactly `k` states with each label set used at most
/// `per_label` times, in lexicographic order. Singletons come irreflexive
/// first unless `reflexive_only`.
fn cliques_of_size(k: usize, label_count: u32, per_label: usize, reflexive_only: bool) -> Vec<Cand> {
    fn go(k: usize, from: u32, label_count: u32, per_label: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for l in from..label_count {
            let used = cur.iter().rev().take_while(|&&x| x == l).count();
            if used >= per_label {
                continue;
            }
            cur.push(l);
            go(k, l, label_count, per_label, cur, out);
            cur.pop();
        }
    }
    let mut seqs = Vec::new();
    go(k, 0, label_count, per_label, &mut Vec::new(), &mut seqs);
    let mut out = Vec::new();
    if k == 1 && !reflexive_only {
        out.extend(seqs.iter().map(|s| Cand { labels: s.clone(), reflexive: false }));
    }
    out.extend(seqs.into_iter().map(|labels| Cand { labels, reflexive: true }));
    out
}

/// Number of cliques `cliques_of_size` would return, saturating.
fn count_cliques(k: usize, label_count: u64, per_label: usize) -> u64 {
    if label_count > 1 << 20 {
        return if k == 0 { 1 } else { u64::MAX };
    }
    // ways[j] = number of multisets of size j over the labels seen so far.
    let mut ways = vec![0u64; k + 1];
    ways[0] = 1;
    for _ in 0..label_count {
        let mut next = vec![0u64; k + 1];
        for (j, &w) in ways.iter().enumerate() {
            for r in 0..=per_label.min(k - j) {
                next[j + r] = next[j + r].saturating_add(w);
            }
        }
        ways = next;
    }
    ways[k]
}

/// Shared state of one solver call.
struct Search<'e> {
    engine: &'e TypeEngine,
    d: usize,
    atoms: usize,
    label_count: u32,
    per_label: usize,
    /// The clique size that makes the search complete.
    bound: usize,
    cands: Vec<Cand>,
    /// `table[c][u]`: the `w` of clique `c` under frontier `u`, and whether
    /// the sentence holds somewhere in it.
    table: Vec<Vec<(u64, bool)>>,
    /// Frontier sets considered: all of them, or just the empty one.
    frontiers: u64,
}

impl<'e> Search<'e> {
    fn new(engine: &'e TypeEngine, with_frontier: bool) -> Self {
        let d = engine.closure().len();
        let atoms = engine.labels().len();
        let q = engine.compiled().vars().len();
        let per_label = q + 1;
        let bound = if atoms >= 20 { usize::MAX } else { (1usize << atoms).saturating_mul(per_label) };
        Search {
            engine,
            d,
            atoms,
            label_count: if atoms >= 32 { u32::MAX } else { 1u32 << atoms },
            per_label,
            bound,
            cands: Vec::new(),
            table: Vec::new(),
            frontiers: if with_frontier { 1u64 << d } else { 1 },
        }
    }

    /// Evaluation work needed to add all cliques of size `k`.
    fn level_cost(&self, k: usize, reflexive_only: bool) -> u64 {
        let n = count_cliques(k, u64::from(self.label_count), self.per_label);
        let n = if k == 1 && !reflexive_only { n.saturating_mul(2) } else { n };
        n.saturating_mul(self.frontiers)
    }

    fn add_level(&mut self, k: usize, reflexive_only: bool) {
        let new = cliques_of_size(k, self.label_count, self.per_label, reflexive_only);
        let (engine, atoms, d, frontiers) = (self.engine, self.atoms, self.d, self.frontiers);
        let rows: Vec<Vec<(u64, bool)>> = new
            .par_iter()
            .map(|cand| {
                let succ = cand.succ();
                let all = full_mask(cand.labels.len());
                let mut ev = Evaluator::new(engine.compiled(), &succ);
                ev.set_props(&cand.label_masks(atoms));
                (0..frontiers)
                    .map(|u| {
                        ev.set_frontier((0..d).map(|k| if u >> k & 1 == 1 { all } else { 0 }).collect());
                        let w = (0..d).filter(|&k| ev.root(k) != 0).fold(0u64, |acc, k| acc | 1 << k);
                        (w, ev.root(d) != 0)
                    })
                    .collect()
            })
            .collect();
        self.cands.extend(new);
        self.table.extend(rows);
    }

    /// For each frontier `u`: the union of the `w`s of kept pairs whose
    /// type lies inside `u`, when those pairs' types cover `u` exactly.
    fn achievable(&self, kept: &BTreeSet<(u64, u64)>) -> Vec<Option<u64>> {
        (0..self.frontiers)
            .map(|u| {
                let (cover, uw) =
                    kept.iter().filter(|(t, _)| t & !u == 0).fold((0u64, 0u64), |(a, b), (t, w)| (a | t, b | w));
                (cover == u).then_some(uw)
            })
            .collect()
    }

    /// The greatest set of realizable pairs over the current cliques.
    fn greatest_fixpoint(&self) -> BTreeSet<(u64, u64)> {
        let mut kept: BTreeSet<(u64, u64)> = BTreeSet::new();
        for row in &self.table {
            for (u, &(w, _)) in row.iter().enumerate() {
                kept.insert((w | u as u64, w));
            }
        }
        loop {
            let ach = self.achievable(&kept);
            let mut next = BTreeSet::new();
            for (u, uw) in ach.iter().enumerate() {
                let Some(uw) = *uw else { continue };
                let u = u as u64;
                for row in &self.table {
                    let (w, _) = row[u as usize];
                    let pair = (w | u, w);
                    if u & !(w | uw) == 0 && kept.contains(&pair) {
                        next.insert(pair);
                    }
                }
            }
            if next == kept {
                return kept;
            }
            kept = next;
        }
    }

    /// Frontier sets in the order supports are tried: fewest sentences first.
    fn frontier_order(&self) -> Vec<u64> {
        let mut us: Vec<u64> = (0..self.frontiers).collect();
        us.sort_by_key(|&u| (u.count_ones(), u));
        us
    }
}

/// Builds a representation from the kept pairs.
struct WitnessBuilder<'s> {
    search: &'s Search<'s>,
    kept: Vec<(u64, u64)>,
    ach: Vec<Option<u64>>,
    order: Vec<u64>,
    /// Created states: clique candidate and position, or the referenced state.
    states: Vec<Slot>,
    edges: Vec<(usize, usize)>,
    first: BTreeMap<(u64, u64), usize>,
    nodes: usize,
}

enum Slot {
    M { label: u32 },
    C { target: usize, t: u64 },
}

impl<'s> WitnessBuilder<'s> {
    /// A clique and frontier producing `pair`, preferring few children.
    fn support(&self, pair: (u64, u64)) -> (usize, u64) {
        let (t, w) = pair;
        for &u in &self.order {
            if u & !t != 0 {
                continue;
            }
            let Some(uw) = self.ach[u as usize] else { continue };
            for (c, row) in self.search.table.iter().enumerate() {
                let (cw, _) = row[u as usize];
                if cw == w && (w | u) == t && u & !(w | uw) == 0 {
                    return (c, u);
                }
            }
        }
        unreachable!("every kept pair has a support")
    }

    /// Kept pairs whose types cover `u` and whose `w`s cover `u \ w`,
    /// chosen greedily: most newly covered sentences, then pairs that
    /// already have a node, then larger `w`, then canonical order.
    fn children(&self, u: u64, w: u64) -> Vec<(u64, u64)> {
        let (mut need_t, mut need_w) = (u, u & !w);
        let pool: Vec<(u64, u64)> = self.kept.iter().copied().filter(|(t, _)| t & !u == 0).collect();
        let mut out = Vec::new();
        while need_t | need_w != 0 {
            let gain = |p: &(u64, u64)| (p.0 & need_t).count_ones() + (p.1 & need_w).count_ones();
            let score = |p: &(u64, u64)| (gain(p), self.first.contains_key(p), p.1.count_ones());
            let best = pool.iter().copied().fold(None, |best: Option<(u64, u64)>, p| match best {
                Some(b) if score(&b) >= score(&p) => Some(b),
                _ => Some(p),
            });
            let best = best.filter(|b| gain(b) > 0).expect("achievable frontier is covered");
            need_t &= !best.0;
            need_w &= !best.1;
            out.push(best);
        }
        out
    }

    fn instantiate(&mut self, pair: (u64, u64), support: (usize, u64), above: &[usize]) {
        let (c, u) = support;
        self.nodes += 1;
        let cand = &self.search.cands[c];
        let base = self.states.len();
        let ids: Vec<usize> = (base..base + cand.labels.len()).collect();
        self.states.extend(cand.labels.iter().map(|&label| Slot::M { label }));
        self.first.insert(pair, base);
        if cand.reflexive {
            for &a in &ids {
                self.edges.extend(ids.iter().map(|&b| (a, b)));
            }
        }
        for &a in above {
            self.edges.extend(ids.iter().map(|&b| (a, b)));
        }
        let below: Vec<usize> = above.iter().copied().chain(ids).collect();
        for child in self.children(u, pair.1) {
            if let Some(&target) = self.first.get(&child) {
                let id = self.states.len();
                self.states.push(Slot::C { target, t: child.0 });
                self.edges.extend(below.iter().map(|&a| (a, id)));
            } else {
                let sup = self.support(child);
                self.instantiate(child, sup, &below);
            }
        }
    }

    fn finish(self) -> Result<(FiniteRep, CGuess, usize), SolverError> {
        let m_ids: Vec<usize> = (0..self.states.len()).filter(|&i| matches!(self.states[i], Slot::M { .. })).collect();
        let c_ids: Vec<usize> = (0..self.states.len()).filter(|&i| matches!(self.states[i], Slot::C { .. })).collect();
        let mut pos = vec![0usize; self.states.len()];
        for (k, &i) in m_ids.iter().chain(&c_ids).enumerate() {
            pos[i] = k;
        }
        let m_names = (0..m_ids.len()).map(|k| format!("m{k}")).collect();
        let c_names = (0..c_ids.len()).map(|k| format!("c{k}")).collect();
        let mut rep = FiniteRep::new(m_names, c_names)?;
        for &(a, b) in &self.edges {
            rep.add_edge(pos[a], pos[b]);
        }
        let labels = self.search.engine.labels();
        let mut guess = CGuess::new();
        for (i, slot) in self.states.iter().enumerate() {
            match *slot {
                Slot::M { label } => {
                    for (a, name) in labels.iter().enumerate() {
                        if label >> a & 1 == 1 {
                            rep.set_label(name, pos[i], true);
                        }
                    }
                }
                Slot::C { target, t } => {
                    rep.set_ref(pos[i], pos[target]);
                    guess.insert(pos[i], self.search.engine.to_type(t));
                }
            }
        }
        Ok((rep, guess, self.nodes))
    }
}

fn nominal_warning(engine: &TypeEngine) -> bool {
    engine.labels().iter().any(|l| l.starts_with('\''))
}

fn check_witness(engine: &TypeEngine, w: Witness) -> Result<SatResult, SolverError> {
    match engine.verify(&w.rep, &w.guess)? {
        Verdict::Accept { .. } => Ok(SatResult::Sat(w)),
        Verdict::Reject(r) => Err(SolverError::WitnessRejected(r.to_string())),
    }
}

/// Look for a satisfiable root over the current cliques and build a
/// witness for it. `Err(reason)` when a model exists but the witness
/// exceeds the budget.
fn try_transitive(search: &Search<'_>, budget: &Budget) -> Result<Option<Result<Witness, String>>, SolverError> {
    let kept = search.greatest_fixpoint();
    let ach = search.achievable(&kept);
    let order = search.frontier_order();
    let root = order.iter().find_map(|&u| {
        let uw = ach[u as usize]?;
        search.table.iter().enumerate().find_map(|(c, row)| {
            let (w, phi) = row[u as usize];
            (phi && u & !(w | uw) == 0).then_some((c, u, (w | u, w)))
        })
    });
    let Some((c, u, pair)) = root else { return Ok(None) };
    let mut b = WitnessBuilder {
        search,
        kept: kept.into_iter().collect(),
        ach,
        order,
        states: Vec::new(),
        edges: Vec::new(),
        first: BTreeMap::new(),
        nodes: 0,
    };
    b.instantiate(pair, (c, u), &[]);
    if b.states.len() > MAX_STATES {
        return Ok(Some(Err(format!("the witness found needs {} states", b.states.len()))));
    }
    let (rep, guess, nodes) = b.finish()?;
    if nodes > budget.max_nodes || rep.c_len() > budget.max_c {
        return Ok(Some(Err(format!(
            "the witness found has {nodes} nodes and {} c-states, over the budget",
            rep.c_len()
        ))));
    }
    let nominal_warning = nominal_warning(search.engine);
    Ok(Some(Ok(Witness { rep, guess, nominal_warning })))
}

/// Decide satisfiability of an HL-down sentence over transitive frames.
pub fn sat_transitive(phi: &Formula, budget: &Budget) -> Result<SatResult, SolverError> {
    let engine = TypeEngine::new(phi)?;
    if engine.closure().len() > MAX_SEARCH_CLOSURE {
        return Ok(SatResult::Unknown(format!(
            "the closure has {} sentences, the search handles at most {MAX_SEARCH_CLOSURE}",
            engine.closure().len()
        )));
    }
    let mut search = Search::new(&engine, true);
    let mut over_budget: Option<String> = None;
    let mut k = 0;
    while k < search.bound.min(budget.max_clique) {
        k += 1;
        if search.level_cost(k, false) > WORK_LIMIT {
            return Ok(SatResult::Unknown(format!("cliques of {k} states are too many to enumerate")));
        }
        search.add_level(k, false);
        match try_transitive(&search, budget)? {
            Some(Ok(w)) => return check_witness(&engine, w),
            Some(Err(why)) => over_budget = Some(why),
            None => {}
        }
    }
    if let Some(why) = over_budget {
        return Ok(SatResult::Unknown(why));
    }
    refute(&mut search, k, budget, false, |s| Ok(try_transitive(s, budget)?.is_some()))
}

/// Continue the deepening from `k` to the full clique bound without a
/// witness, to tell UNSAT from a model needing larger cliques.
fn refute(
    search: &mut Search<'_>,
    mut k: usize,
    budget: &Budget,
    reflexive_only: bool,
    found: impl Fn(&Search<'_>) -> Result<bool, SolverError>,
) -> Result<SatResult, SolverError> {
    let limit = if budget.exhaustive { EXHAUSTIVE_WORK_LIMIT } else { WORK_LIMIT };
    let mut work: u64 = 0;
    while k < search.bound {
        k += 1;
        work = work.saturating_add(search.level_cost(k, reflexive_only));
        if work > limit {
            return Ok(SatResult::Unknown(format!(
                "no model with cliques of at most {} states; the full bound is {} states",
                k - 1,
                search.bound
            )));
        }
        search.add_level(k, reflexive_only);
        if found(search)? {
            return Ok(SatResult::Unknown(format!("a model exists but needs cliques of {k} states, over the budget")));
        }
    }
    Ok(SatResult::Unsat { clique_bound: search.bound })
}

fn complete_root(search: &Search<'_>) -> Option<usize> {
    search.table.iter().position(|row| row[0].1)
}

/// Decide satisfiability of an HL-down sentence over complete frames, by
/// searching single cliques.
pub fn sat_complete(phi: &Formula, budget: &Budget) -> Result<SatResult, SolverError> {
    let engine = TypeEngine::new(phi)?;
    let mut search = Search::new(&engine, false);
    let mut k = 0;
    while k < search.bound.min(budget.max_clique) {
        k += 1;
        if search.level_cost(k, true) > WORK_LIMIT {
            return Ok(SatResult::Unknown(format!("cliques of {k} states are too many to enumerate")));
        }
        search.add_level(k, true);
        if let Some(c) = complete_root(&search) {
            let cand = &search.cands[c];
            let n = cand.labels.len();
            let mut rep = FiniteRep::new((0..n).map(|s| format!("m{s}")).collect(), Vec::new())?;
            for a in 0..n {
                for b in 0..n {
                    rep.add_edge(a, b);
                }
            }
            for (s, &label) in cand.labels.iter().enumerate() {
                for (a, name) in engine.labels().iter().enumerate() {
                    if label >> a & 1 == 1 {
                        rep.set_label(name, s as StateId, true);
                    }
                }
            }
            let w = Witness { rep, guess: CGuess::new(), nominal_warning: nominal_warning(&engine) };
            return check_witness(&engine, w);
        }
    }
    refute(&mut search, k, budget, true, |s| Ok(complete_root(s).is_some()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocktree::{realize, verify};
    use crate::formula::parse;

    fn trans(s: &str) -> SatResult {
        sat_transitive(&parse(s).unwrap(), &Budget::default()).unwrap()
    }

    fn complete(s: &str) -> SatResult {
        sat_complete(&parse(s).unwrap(), &Budget::default()).unwrap()
    }

    #[test]
    fn clique_counts_match_enumeration() {
        for (k, labels, per) in [(1, 2, 1), (2, 2, 2), (3, 4, 2), (4, 2, 3)] {
            let listed = cliques_of_size(k, labels, per, true).len() as u64;
            assert_eq!(count_cliques(k, u64::from(labels), per), listed);
        }
    }

    #[test]
    fn infinite_chain_has_a_witness() {
        let phi = parse("p & <>p & []<>p & [] down $x.~<>$x").unwrap();
        let SatResult::Sat(w) = sat_transitive(&phi, &Budget::default()).unwrap() else { panic!("expected SAT") };
        assert!(verify(&w.rep, &phi, &w.guess).unwrap().accepted());
        assert!(w.rep.c_len() >= 1);
        let m = realize(&w.rep, 4).unwrap();
        assert!(m.is_transitive());
        assert!(!w.nominal_warning);
    }

    #[test]
    fn contradictions_are_exhaustive_unsat() {
        let tiny = Budget { max_clique: 1, max_nodes: 1, max_c: 0, exhaustive: false };
        let r = sat_transitive(&parse("p & ~p").unwrap(), &tiny).unwrap();
        assert!(matches!(r, SatResult::Unsat { .. }));
        assert!(matches!(trans("down $x.<>($x & ~<>$x)"), SatResult::Unsat { .. }));
    }

    #[test]
    fn complete_frame_examples() {
        let SatResult::Sat(w) = complete("down $x.<>$x") else { panic!("expected SAT") };
        assert_eq!(w.rep.m_len(), 1);
        assert!(w.rep.has_edge(0, 0));
        assert!(matches!(complete("down $x.~<>$x & <>true"), SatResult::Unsat { .. }));
        let SatResult::Sat(w) = complete("p") else { panic!("expected SAT") };
        assert_eq!(w.rep.label_mask("p"), 1);
    }

    #[test]
    fn two_complete_paths_agree() {
        for s in
            ["p", "down $x.~<>$x & <>true", "[]false", "down $x.<>down $y.(~$x & <>$x & p) & ~p", "<>p & <>~p & []q"]
        {
            let phi = parse(s).unwrap();
            let a = sat_complete(&phi, &Budget::default()).unwrap();
            let b = sat_transitive(&complete_frame_recode(&phi), &Budget::default()).unwrap();
            assert_eq!(matches!(a, SatResult::Sat(_)), matches!(b, SatResult::Sat(_)), "{s}");
            assert_eq!(matches!(a, SatResult::Unsat { .. }), matches!(b, SatResult::Unsat { .. }), "{s}");
        }
    }

    #[test]
    fn answers_are_deterministic() {
        let s = "<>p & <>q & [](p -> ~q)";
        assert_eq!(trans(s), trans(s));
    }

    #[test]
    fn nominals_raise_the_warning() {
        let SatResult::Sat(w) = trans("'i & <>'i") else { panic!("expected SAT") };
        assert!(w.nominal_warning);
    }

    #[test]
    fn non_hl_down_input_is_an_error() {
        assert!(sat_transitive(&parse("E p").unwrap(), &Budget::default()).is_err());
    }
}
