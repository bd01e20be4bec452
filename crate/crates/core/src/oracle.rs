//! Brute-force finite-model search, the ground truth for every other module.
//!
//! Frames are enumerated per class without isomorphism reduction, except
//! that linear orders and transitive trees are generated in one canonical
//! numbering (states `0..n` ordered along the chain, parents numbered
//! before children). Valuations range over the atoms of the formula only.
//! Within one size, frames are searched in parallel and the first hit in
//! canonical order is reported, so results do not depend on thread count.

use crate::checker::{Compiled, Evaluator};
use crate::formula::{free_vars, Formula};
use crate::model::{bits, closure_masks, full_mask, Frame, HybridModel, StateId};
use crate::satellites::fo::{FOFormula, FOStructure, FoError, FoProgram, PartialStructure, Tri};
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::ops::ControlFlow;
use thiserror::Error;

/// Errors reported by oracle searches.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("formula has free variables: {0}")]
    NotASentence(String),
    #[error("bound of {0} states is outside 1..=64")]
    BadBound(usize),
    #[error("search space too large: {0}")]
    TooLarge(String),
    #[error(transparent)]
    Fo(#[from] FoError),
}

/// Every relation on exactly `n` states (`n >= 1`) in the class, as
/// successor masks, in canonical order.
pub fn frames(frame: Frame, n: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let _ = for_each_frame(frame, n, &mut |succ| {
        out.push(succ.to_vec());
        ControlFlow::Continue(())
    });
    out
}

/// Visit every relation of the class on exactly `n` states.
pub fn for_each_frame(frame: Frame, n: usize, f: &mut dyn FnMut(&[u64]) -> ControlFlow<()>) -> ControlFlow<()> {
    assert!((1..=64).contains(&n), "frame size must be in 1..=64");
    match frame {
        Frame::Any => {
            assert!(n * n < 64, "too many relations to enumerate");
            for code in 0..1u64 << (n * n) {
                let succ = decode_any(code, n);
                f(&succ)?;
            }
            ControlFlow::Continue(())
        }
        Frame::Transitive => transitive_from(&[], n, f),
        Frame::Complete => f(&vec![full_mask(n); n]),
        Frame::Linear => {
            let succ: Vec<u64> = (0..n).map(|i| full_mask(n) & !full_mask(i + 1)).collect();
            f(&succ)
        }
        Frame::TransitiveTree => {
            let mut parent = vec![0usize; n];
            tree_frames(&mut parent, 1, n, f)
        }
    }
}

fn decode_any(code: u64, n: usize) -> Vec<u64> {
    (0..n).map(|i| code >> (i * n) & full_mask(n)).collect()
}

/// Transitive relations by adding one element at a time. The new element
/// `k` gets a down-closed set `D` of predecessors and an up-closed set `U`
/// of successors with every `d` in `D` related to every `u` in `U`; if `D`
/// and `U` meet, `k` must be reflexive.
fn transitive_from(base: &[u64], n: usize, f: &mut dyn FnMut(&[u64]) -> ControlFlow<()>) -> ControlFlow<()> {
    let k = base.len();
    if k == n {
        return f(base);
    }
    for ext in transitive_extensions(base) {
        let mut next = base.to_vec();
        apply_extension(&mut next, ext);
        transitive_from(&next, n, f)?;
    }
    ControlFlow::Continue(())
}

#[derive(Debug, Clone, Copy)]
struct Extension {
    down: u64,
    up: u64,
    reflexive: bool,
}

fn transitive_extensions(base: &[u64]) -> Vec<Extension> {
    let k = base.len();
    let pred = crate::model::converse(base);
    let mut out = Vec::new();
    for down in 0..1u64 << k {
        // Down-closed: every predecessor of a member is a member.
        if bits(down).any(|d| pred[d] & !down != 0) {
            continue;
        }
        let common = bits(down).fold(full_mask(k), |acc, d| acc & base[d]);
        // Walk the subsets of `common` from largest to empty, then reverse
        // so the order is ascending as in a plain counter.
        let mut ups = Vec::new();
        let mut up = common;
        loop {
            if bits(up).all(|u| base[u] & !up == 0) {
                ups.push(up);
            }
            if up == 0 {
                break;
            }
            up = (up - 1) & common;
        }
        for &up in ups.iter().rev() {
            let forced = down & up != 0;
            for reflexive in [false, true] {
                if forced && !reflexive {
                    continue;
                }
                out.push(Extension { down, up, reflexive });
            }
        }
    }
    out
}

fn apply_extension(base: &mut Vec<u64>, e: Extension) {
    let k = base.len();
    for d in bits(e.down) {
        base[d] |= 1 << k;
    }
    base.push(e.up | if e.reflexive { 1 << k } else { 0 });
}

fn tree_frames(
    parent: &mut Vec<usize>,
    i: usize,
    n: usize,
    f: &mut dyn FnMut(&[u64]) -> ControlFlow<()>,
) -> ControlFlow<()> {
    if i == n {
        let mut succ = vec![0u64; n];
        for c in 1..n {
            succ[parent[c]] |= 1 << c;
        }
        return f(&closure_masks(&succ));
    }
    for p in 0..i {
        parent[i] = p;
        tree_frames(parent, i + 1, n, f)?;
    }
    ControlFlow::Continue(())
}

/// Find the first frame of size `n` (canonical order) for which `f`
/// returns a value, searching in parallel.
pub fn par_find_frame<T: Send>(frame: Frame, n: usize, f: &(dyn Fn(&[u64]) -> Option<T> + Sync)) -> Option<T> {
    match frame {
        Frame::Transitive if n >= 2 => {
            let bases = frames(Frame::Transitive, n - 1);
            bases.par_iter().find_map_first(|b| {
                let mut hit = None;
                for ext in transitive_extensions(b) {
                    let mut succ = b.clone();
                    apply_extension(&mut succ, ext);
                    if let Some(t) = f(&succ) {
                        hit = Some(t);
                        break;
                    }
                }
                hit
            })
        }
        Frame::Any if n >= 3 => {
            let total = 1u64 << (n * n);
            (0..total).into_par_iter().find_map_first(|code| f(&decode_any(code, n)))
        }
        _ => frames(frame, n).par_iter().find_map_first(|s| f(s)),
    }
}

/// A satisfying model together with the state where the formula holds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Found {
    pub model: HybridModel,
    pub state: StateId,
}

/// Valuation space of a compiled formula over a frame of `n` states.
struct Valuations {
    n: usize,
    props: usize,
    noms: usize,
}

impl Valuations {
    fn count(&self) -> Option<u64> {
        let pv = 1u64.checked_shl((self.n * self.props) as u32)?;
        let nv = (self.n as u64).checked_pow(self.noms as u32)?;
        pv.checked_mul(nv)
    }

    fn decode(&self, code: u64, props: &mut [u64], noms: &mut [usize]) {
        let mut c = code;
        for slot in noms.iter_mut() {
            *slot = (c % self.n as u64) as usize;
            c /= self.n as u64;
        }
        for (j, m) in props.iter_mut().enumerate() {
            *m = c >> (j * self.n) & full_mask(self.n);
        }
    }
}

fn to_model(c: &Compiled, succ: &[u64], props: &[u64], noms: &[usize]) -> HybridModel {
    let mut m = HybridModel::from_masks(succ.to_vec());
    for (p, &mask) in c.props().iter().zip(props) {
        m.set_prop_mask(p, mask);
    }
    for (i, &s) in c.nominals().iter().zip(noms) {
        m.set_nominal(i, s);
    }
    m
}

/// Visit every model of a frame class with `1..=n` states over the given
/// propositions and nominals.
pub fn enumerate_models(
    frame: Frame,
    n: usize,
    props: &[String],
    noms: &[String],
) -> impl Iterator<Item = HybridModel> {
    let props = props.to_vec();
    let noms = noms.to_vec();
    (1..=n).flat_map(move |k| {
        let props = props.clone();
        let noms = noms.clone();
        frames(frame, k).into_iter().flat_map(move |succ| {
            let space = Valuations { n: k, props: props.len(), noms: noms.len() };
            let count = space.count().expect("valuation space fits in u64");
            let props = props.clone();
            let noms = noms.clone();
            (0..count).map(move |code| {
                let mut pm = vec![0u64; props.len()];
                let mut nm = vec![0usize; noms.len()];
                space.decode(code, &mut pm, &mut nm);
                let mut m = HybridModel::from_masks(succ.clone());
                for (p, &mask) in props.iter().zip(&pm) {
                    m.set_prop_mask(p, mask);
                }
                for (i, &s) in noms.iter().zip(&nm) {
                    m.set_nominal(i, s);
                }
                m
            })
        })
    })
}

fn check_sentence(phi: &Formula) -> Result<(), OracleError> {
    let fv = free_vars(phi);
    if !fv.is_empty() {
        let names: Vec<String> = fv.into_iter().map(|x| format!("${x}")).collect();
        return Err(OracleError::NotASentence(names.join(", ")));
    }
    Ok(())
}

fn check_bound(n: usize) -> Result<(), OracleError> {
    if (1..=64).contains(&n) {
        Ok(())
    } else {
        Err(OracleError::BadBound(n))
    }
}

/// Search one frame for a valuation making `accept(extension)` pick a state.
fn search_frame(
    c: &Compiled,
    succ: &[u64],
    accept: &(dyn Fn(u64, u64) -> Option<StateId> + Sync),
    prune: &(dyn Fn(u64, u64, u64) -> bool + Sync),
) -> Option<Found> {
    let n = succ.len();
    let mut ev = Evaluator::new(c, succ);
    let (lo, hi) = ev.root_bounds(0);
    if prune(lo, hi, full_mask(n)) {
        return None;
    }
    let space = Valuations { n, props: c.props().len(), noms: c.nominals().len() };
    let count = space.count()?;
    let mut props = vec![0u64; space.props];
    let mut noms = vec![0usize; space.noms];
    for code in 0..count {
        space.decode(code, &mut props, &mut noms);
        ev.set_props(&props);
        ev.set_nominals(&noms);
        let ext = ev.root(0);
        if let Some(state) = accept(ext, full_mask(n)) {
            return Some(Found { model: to_model(c, succ, &props, &noms), state });
        }
    }
    None
}

fn sized_search(
    phi: &Formula,
    frame: Frame,
    n: usize,
    accept: &(dyn Fn(u64, u64) -> Option<StateId> + Sync),
    prune: &(dyn Fn(u64, u64, u64) -> bool + Sync),
) -> Result<Option<Found>, OracleError> {
    check_sentence(phi)?;
    check_bound(n)?;
    let c = Compiled::new(phi);
    for k in 1..=n {
        let space = Valuations { n: k, props: c.props().len(), noms: c.nominals().len() };
        if space.count().is_none() {
            return Err(OracleError::TooLarge(format!("valuations over {k} states")));
        }
        if let Some(found) = par_find_frame(frame, k, &|succ| search_frame(&c, succ, accept, prune)) {
            return Ok(Some(found));
        }
    }
    Ok(None)
}

/// The first model of the class with at most `n` states (by size, then
/// canonical frame order, then valuation order) with a state satisfying
/// the sentence `phi`, and the first such state.
pub fn brute_sat(phi: &Formula, frame: Frame, n: usize) -> Result<Option<Found>, OracleError> {
    sized_search(phi, frame, n, &|ext, _| bits(ext).next(), &|_, hi, _| hi == 0)
}

/// The first model of the class with at most `n` states where `phi` holds
/// at every state. The reported state is 0.
pub fn brute_global_sat(phi: &Formula, frame: Frame, n: usize) -> Result<Option<Found>, OracleError> {
    sized_search(phi, frame, n, &|ext, all| (ext == all).then_some(0), &|_, hi, all| hi != all)
}

/// The first model and state (enumeration order) where the formulas of
/// `fs` do not all have the same truth value, over every model of the
/// class with at most `n` states and the atoms of all formulas.
pub fn find_disagreement(fs: &[Formula], frame: Frame, n: usize) -> Result<Option<Found>, OracleError> {
    for f in fs {
        check_sentence(f)?;
    }
    check_bound(n)?;
    let c = Compiled::with_options(fs, None, false);
    for k in 1..=n {
        let hit = par_find_frame(frame, k, &|succ| {
            let mut ev = Evaluator::new(&c, succ);
            let space = Valuations { n: k, props: c.props().len(), noms: c.nominals().len() };
            let mut props = vec![0u64; space.props];
            let mut noms = vec![0usize; space.noms];
            for code in 0..space.count().expect("valuation space fits") {
                space.decode(code, &mut props, &mut noms);
                ev.set_props(&props);
                ev.set_nominals(&noms);
                let first = ev.root(0);
                for r in 1..c.roots() {
                    let diff = first ^ ev.root(r);
                    if diff != 0 {
                        let state = bits(diff).next().expect("nonzero");
                        return Some(Found { model: to_model(&c, succ, &props, &noms), state });
                    }
                }
            }
            None
        });
        if hit.is_some() {
            return Ok(hit);
        }
    }
    Ok(None)
}

// ---------------------------------------------------------------------------
// First-order search

/// Search state for FO model finding: a partial structure whose decided
/// relation bits are kept closed under transitivity when required.
struct FoSearch<'a> {
    prog: &'a FoProgram,
    frame: Frame,
    closure: bool,
    order: Vec<Decision>,
    fixed_rel: Option<Vec<u64>>,
}

#[derive(Debug, Clone, Copy)]
enum Decision {
    Rel(usize, usize),
    Pred(usize, usize),
}

impl FoSearch<'_> {
    fn eval(&self, s: &PartialStructure) -> Tri {
        if self.closure {
            let all = full_mask(s.n);
            let yes = closure_masks(&s.rel_yes);
            let maybe_rel: Vec<u64> = s.rel_no.iter().map(|m| !m & all).collect();
            let maybe = closure_masks(&maybe_rel);
            self.prog.eval_partial(s, Some((&yes, &maybe)))
        } else {
            self.prog.eval_partial(s, None)
        }
    }

    fn run(&self, s: &mut PartialStructure, i: usize) -> bool {
        match self.eval(s) {
            Tri::False => return false,
            Tri::True => {
                // Any completion works; undecided bits become false, which
                // keeps a transitively closed relation closed.
                return true;
            }
            Tri::Unknown => {}
        }
        let Some(&d) = self.order.get(i) else {
            return false;
        };
        match d {
            Decision::Pred(p, e) => {
                for val in [false, true] {
                    let saved = (s.pred_yes[p], s.pred_no[p]);
                    if val {
                        s.pred_yes[p] |= 1 << e;
                    } else {
                        s.pred_no[p] |= 1 << e;
                    }
                    if self.run(s, i + 1) {
                        return true;
                    }
                    s.pred_yes[p] = saved.0;
                    s.pred_no[p] = saved.1;
                }
                false
            }
            Decision::Rel(a, b) => {
                if (s.rel_yes[a] | s.rel_no[a]) >> b & 1 == 1 {
                    return self.run(s, i + 1);
                }
                for val in [false, true] {
                    let saved = (s.rel_yes.clone(), s.rel_no[a]);
                    if val {
                        s.rel_yes[a] |= 1 << b;
                        if self.frame == Frame::Transitive {
                            s.rel_yes = closure_masks(&s.rel_yes);
                            if s.rel_yes.iter().zip(&s.rel_no).any(|(y, n)| y & n != 0) {
                                s.rel_yes = saved.0;
                                continue;
                            }
                        }
                    } else {
                        s.rel_no[a] |= 1 << b;
                    }
                    if self.run(s, i + 1) {
                        return true;
                    }
                    s.rel_yes = saved.0;
                    s.rel_no[a] = saved.1;
                }
                false
            }
        }
    }

    fn structure(&self, s: &PartialStructure) -> FOStructure {
        let unary: BTreeMap<String, u64> =
            self.prog.predicates().iter().cloned().zip(s.pred_yes.iter().copied()).collect();
        let consts: BTreeMap<String, usize> =
            self.prog.constants().iter().cloned().zip(s.consts.iter().copied()).collect();
        FOStructure::from_parts(s.rel_yes.clone(), unary, consts)
    }
}

/// The first structure with at most `n` elements whose relation belongs to
/// the frame class and which satisfies the sentence `alpha`. Search is by
/// size, then depth-first over relation and predicate bits with
/// three-valued pruning; relation bits are skipped when `alpha` does not
/// mention the relation.
pub fn brute_fo_sat(alpha: &FOFormula, frame: Frame, n: usize) -> Result<Option<FOStructure>, OracleError> {
    if let Some(v) = alpha.free_vars().into_iter().next() {
        return Err(FoError::UnboundVariable(v).into());
    }
    check_bound(n)?;
    let prog = FoProgram::new(alpha);
    let uses_rel = alpha.uses_relation();
    for k in 1..=n {
        let fixed: Vec<Option<Vec<u64>>> = match frame {
            _ if !uses_rel => vec![Some(vec![0; k])],
            Frame::Any | Frame::Transitive => vec![None],
            other => frames(other, k).into_iter().map(Some).collect(),
        };
        let all = full_mask(k);
        let nconst = prog.constants().len();
        let const_choices =
            (k as u64).checked_pow(nconst as u32).ok_or_else(|| OracleError::TooLarge("constants".into()))?;
        for fixed_rel in fixed {
            let mut order = Vec::new();
            for e in 0..k {
                if fixed_rel.is_none() {
                    for a in 0..=e {
                        order.push(Decision::Rel(a, e));
                        if a != e {
                            order.push(Decision::Rel(e, a));
                        }
                    }
                }
                for p in 0..prog.predicates().len() {
                    order.push(Decision::Pred(p, e));
                }
            }
            let search =
                FoSearch { prog: &prog, frame, closure: alpha.uses_closure(), order, fixed_rel: fixed_rel.clone() };
            for code in 0..const_choices {
                let mut c = code;
                let consts: Vec<usize> = (0..nconst)
                    .map(|_| {
                        let e = (c % k as u64) as usize;
                        c /= k as u64;
                        e
                    })
                    .collect();
                let (rel_yes, rel_no) = match &search.fixed_rel {
                    Some(r) => (r.clone(), r.iter().map(|m| !m & all).collect()),
                    None => (vec![0; k], vec![0; k]),
                };
                let np = prog.predicates().len();
                let mut s =
                    PartialStructure { n: k, rel_yes, rel_no, pred_yes: vec![0; np], pred_no: vec![0; np], consts };
                if search.run(&mut s, 0) {
                    return Ok(Some(search.structure(&s)));
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::satellites::fo::parse_fo;

    #[test]
    fn transitive_counts() {
        let counts: Vec<usize> = (1..=4).map(|n| frames(Frame::Transitive, n).len()).collect();
        assert_eq!(counts, vec![2, 13, 171, 3994]);
        for succ in frames(Frame::Transitive, 3) {
            assert!(crate::model::is_transitive_masks(&succ));
        }
    }

    #[test]
    fn class_shapes() {
        let linear: usize = (1..=2).map(|n| frames(Frame::Linear, n).len()).sum();
        assert_eq!(linear, 2);
        assert_eq!(frames(Frame::Complete, 1), vec![vec![1]]);
        let trees: Vec<Vec<u64>> = (1..=2).flat_map(|n| frames(Frame::TransitiveTree, n)).collect();
        assert_eq!(trees, vec![vec![0], vec![0b10, 0]]);
        assert_eq!(frames(Frame::Any, 2).len(), 16);
    }

    #[test]
    fn enumerated_models_respect_the_class() {
        let props = vec!["p".to_string()];
        for frame in [Frame::Any, Frame::Transitive, Frame::Complete, Frame::TransitiveTree, Frame::Linear] {
            for m in enumerate_models(frame, 3, &props, &[]) {
                assert!(frame.holds(&m), "{frame}");
            }
        }
        assert_eq!(enumerate_models(Frame::Complete, 2, &props, &[]).count(), 2 + 4);
    }

    #[test]
    fn brute_sat_examples() {
        let f = parse("down $x.<>$x").unwrap();
        let hit = brute_sat(&f, Frame::Transitive, 1).unwrap().unwrap();
        assert!(hit.model.has_edge(0, 0));
        assert!(brute_sat(&parse("p & ~p").unwrap(), Frame::Any, 3).unwrap().is_none());
        assert!(brute_sat(&parse("<>$x").unwrap(), Frame::Any, 1).is_err());
    }

    #[test]
    fn nominal_choices_are_enumerated() {
        let f = parse("'i & <>'j & ~<>'i").unwrap();
        let hit = brute_sat(&f, Frame::Any, 2).unwrap().unwrap();
        assert_ne!(hit.model.nominal("i"), hit.model.nominal("j"));
    }

    #[test]
    fn global_sat() {
        assert!(brute_global_sat(&parse("<>true").unwrap(), Frame::Any, 1).unwrap().is_some());
        assert!(brute_global_sat(&parse("p & <>~p").unwrap(), Frame::Any, 3).unwrap().is_none());
        let hit = brute_global_sat(&parse("<>p & <>~p").unwrap(), Frame::Any, 2).unwrap().unwrap();
        assert_eq!(hit.model.len(), 2);
    }

    #[test]
    fn disagreement_search() {
        let same = [parse("[]p").unwrap(), parse("~<>~p").unwrap()];
        assert!(find_disagreement(&same, Frame::Any, 3).unwrap().is_none());
        let diff = [parse("<>p").unwrap(), parse("<><>p").unwrap()];
        assert!(find_disagreement(&diff, Frame::Any, 2).unwrap().is_some());
        assert!(find_disagreement(&diff, Frame::Complete, 3).unwrap().is_none());
    }

    #[test]
    fn fo_examples() {
        let f = |s: &str| parse_fo(s).unwrap();
        assert!(brute_fo_sat(&f("E x. E y. R(x,y)"), Frame::Any, 2).unwrap().is_some());
        assert!(brute_fo_sat(&f("(A x. ~R(x,x)) & E x. R(x,x)"), Frame::Any, 3).unwrap().is_none());
        let two = f("E x. E y. ~x = y");
        assert!(brute_fo_sat(&two, Frame::Any, 1).unwrap().is_none());
        assert_eq!(brute_fo_sat(&two, Frame::Any, 2).unwrap().unwrap().len(), 2);
    }

    #[test]
    fn fo_search_agrees_with_plain_enumeration() {
        // Every relation and predicate choice on up to 3 elements.
        let sentences = [
            "A x. E y. R(x,y) & P(y)",
            "E x. A y. R(x,y) -> ~P(y)",
            "A x. A y. A z. R(x,y) & R(y,z) -> R(x,z)",
            "E x. E y. R(x,y) & R(y,x) & ~R(x,x)",
            "E x. R+(x,x) & ~R(x,x)",
            "(A x. ~R(x,x)) & A x. E y. R(x,y)",
        ];
        for src in sentences {
            let alpha = parse_fo(src).unwrap();
            for frame in [Frame::Any, Frame::Transitive] {
                let fast = brute_fo_sat(&alpha, frame, 3).unwrap();
                let mut plain = false;
                'outer: for k in 1..=3 {
                    for succ in frames(frame, k) {
                        for pm in 0..1u64 << k {
                            let mut s = FOStructure::from_parts(succ.clone(), BTreeMap::new(), BTreeMap::new());
                            for e in bits(pm) {
                                s.set_pred("P", e, true);
                            }
                            if crate::satellites::fo::fo_eval(&s, &BTreeMap::new(), &alpha).unwrap() {
                                plain = true;
                                break 'outer;
                            }
                        }
                    }
                }
                assert_eq!(fast.is_some(), plain, "{src} over {frame}");
                if let Some(s) = fast {
                    assert!(crate::satellites::fo::fo_eval(&s, &BTreeMap::new(), &alpha).unwrap());
                    if frame == Frame::Transitive {
                        assert!(crate::model::is_transitive_masks(s.rel_masks()));
                    }
                }
            }
        }
    }
}
