//! Model checking for the full hybrid/temporal language on finite models.
//!
//! Formulas are compiled into a hash-consed DAG and evaluated bottom-up to
//! state masks. Nodes without free variables are memoized; nodes that also
//! mention no propositions or nominals keep their memo across valuation
//! changes, which the oracle exploits when it sweeps valuations over one
//! frame. `U+`/`S+`/`U++`/`S++` use the transitive closure, computed once
//! per frame on first use.

use crate::blocktree::PhiType;
use crate::formula::{diamond_closure, free_vars, AtomKind, Formula, FragmentError};
use crate::model::{bits, closure_masks, converse, full_mask, Assignment, HybridModel, StateId};
use std::collections::HashMap;
use thiserror::Error;

/// Errors reported by evaluation entry points.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("unknown state '{0}'")]
    UnknownState(String),
    #[error("nominal '{0} is not interpreted by the model")]
    UnboundNominal(String),
    #[error("free variable ${0} has no assignment")]
    UnboundVariable(String),
    #[error(transparent)]
    Fragment(#[from] FragmentError),
}

type Id = u32;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Node {
    True,
    False,
    Prop(u16),
    Nom(u16),
    Var(u16),
    Not(Id),
    And(Id, Id),
    Or(Id, Id),
    Implies(Id, Id),
    Iff(Id, Id),
    /// Forward existential step; the key, when present, indexes the
    /// closure sentence looked up at frontier successors.
    Dia(Id, Option<u16>),
    /// Forward universal step, with the key of the dual diamond body.
    Box(Id, Option<u16>),
    Past(Id),
    Hist(Id),
    Exists(Id),
    Forall(Id),
    AtNom(u16, Id),
    AtVar(u16, Id),
    Down(u16, Id),
    Until(Id, Id),
    Since(Id, Id),
    UntilP(Id, Id),
    SinceP(Id, Id),
    UntilPP(Id, Id),
    SincePP(Id, Id),
}

/// A formula (or several) compiled for repeated evaluation.
#[derive(Debug, Clone)]
pub struct Compiled {
    nodes: Vec<Node>,
    roots: Vec<Id>,
    /// Free variables of each node, as a bit set over variable ids.
    free: Vec<u64>,
    /// Whether a node mentions a proposition or nominal.
    atomic: Vec<bool>,
    needs_closure: bool,
    props: Vec<String>,
    noms: Vec<String>,
    vars: Vec<String>,
}

struct Builder<'a> {
    c: Compiled,
    index: HashMap<Node, Id>,
    closure: Option<&'a [Formula]>,
    nominals_as_props: bool,
}

impl<'a> Builder<'a> {
    fn intern(&mut self, node: Node) -> Id {
        if let Some(&id) = self.index.get(&node) {
            return id;
        }
        let id = self.c.nodes.len() as Id;
        let kids = children(&node);
        let mut free = 0u64;
        let mut atomic = matches!(node, Node::Prop(_) | Node::Nom(_) | Node::AtNom(..));
        for &k in &kids {
            free |= self.c.free[k as usize];
            atomic |= self.c.atomic[k as usize];
        }
        match node {
            Node::Var(v) | Node::AtVar(v, _) => free |= 1 << v,
            _ => {}
        }
        if let Node::Down(v, _) = node {
            free &= !(1 << v);
        }
        if matches!(node, Node::UntilP(..) | Node::SinceP(..) | Node::UntilPP(..) | Node::SincePP(..)) {
            self.c.needs_closure = true;
        }
        self.c.nodes.push(node.clone());
        self.c.free.push(free);
        self.c.atomic.push(atomic);
        self.index.insert(node, id);
        id
    }

    fn slot(list: &mut Vec<String>, name: &str) -> u16 {
        match list.iter().position(|n| n == name) {
            Some(i) => i as u16,
            None => {
                list.push(name.to_string());
                (list.len() - 1) as u16
            }
        }
    }

    fn key(&self, body: &Formula) -> Option<u16> {
        let cl = self.closure?;
        cl.iter().position(|c| c == body).map(|i| i as u16)
    }

    fn build(&mut self, f: &Formula) -> Id {
        let node = match f {
            Formula::True => Node::True,
            Formula::False => Node::False,
            Formula::Atom(a) => match a.kind {
                AtomKind::Prop => Node::Prop(Self::slot(&mut self.c.props, &a.name)),
                AtomKind::Nominal if self.nominals_as_props => {
                    Node::Prop(Self::slot(&mut self.c.props, &format!("'{}", a.name)))
                }
                AtomKind::Nominal => Node::Nom(Self::slot(&mut self.c.noms, &a.name)),
                AtomKind::Var => Node::Var(Self::slot(&mut self.c.vars, &a.name)),
            },
            Formula::Not(a) => Node::Not(self.build(a)),
            Formula::And(a, b) => Node::And(self.build(a), self.build(b)),
            Formula::Or(a, b) => Node::Or(self.build(a), self.build(b)),
            Formula::Implies(a, b) => Node::Implies(self.build(a), self.build(b)),
            Formula::Iff(a, b) => Node::Iff(self.build(a), self.build(b)),
            Formula::Diamond(a) => {
                let key = self.key(&crate::formula::strip_free(a));
                Node::Dia(self.build(a), key)
            }
            Formula::Box(a) => {
                let key = self.key(&Formula::not(crate::formula::strip_free(a)));
                Node::Box(self.build(a), key)
            }
            Formula::Future(a) => Node::Dia(self.build(a), None),
            Formula::Globally(a) => Node::Box(self.build(a), None),
            Formula::Past(a) => Node::Past(self.build(a)),
            Formula::Historically(a) => Node::Hist(self.build(a)),
            Formula::Exists(a) => Node::Exists(self.build(a)),
            Formula::Forall(a) => Node::Forall(self.build(a)),
            Formula::At(t, a) => {
                let body = self.build(a);
                match t.kind {
                    AtomKind::Var => Node::AtVar(Self::slot(&mut self.c.vars, &t.name), body),
                    _ if self.nominals_as_props => {
                        let p = Self::slot(&mut self.c.props, &format!("'{}", t.name));
                        // Jumping to a nominal read as a proposition: true
                        // everywhere iff some state carries the nominal and
                        // satisfies the body.
                        let target = self.intern(Node::Prop(p));
                        let both = self.intern(Node::And(target, body));
                        Node::Exists(both)
                    }
                    _ => Node::AtNom(Self::slot(&mut self.c.noms, &t.name), body),
                }
            }
            Formula::Down(x, a) => {
                let v = Self::slot(&mut self.c.vars, x);
                Node::Down(v, self.build(a))
            }
            Formula::Until(a, b) => Node::Until(self.build(a), self.build(b)),
            Formula::Since(a, b) => Node::Since(self.build(a), self.build(b)),
            Formula::UntilPlus(a, b) => Node::UntilP(self.build(a), self.build(b)),
            Formula::SincePlus(a, b) => Node::SinceP(self.build(a), self.build(b)),
            Formula::UntilPlusPlus(a, b) => Node::UntilPP(self.build(a), self.build(b)),
            Formula::SincePlusPlus(a, b) => Node::SincePP(self.build(a), self.build(b)),
        };
        self.intern(node)
    }
}

fn children(n: &Node) -> Vec<Id> {
    use Node::*;
    match *n {
        True | False | Prop(_) | Nom(_) | Var(_) => vec![],
        Not(a)
        | Dia(a, _)
        | Box(a, _)
        | Past(a)
        | Hist(a)
        | Exists(a)
        | Forall(a)
        | AtNom(_, a)
        | AtVar(_, a)
        | Down(_, a) => vec![a],
        And(a, b)
        | Or(a, b)
        | Implies(a, b)
        | Iff(a, b)
        | Until(a, b)
        | Since(a, b)
        | UntilP(a, b)
        | SinceP(a, b)
        | UntilPP(a, b)
        | SincePP(a, b) => vec![a, b],
    }
}

impl Compiled {
    /// Compile one formula.
    pub fn new(f: &Formula) -> Compiled {
        Self::with_options(std::slice::from_ref(f), None, false)
    }

    /// Compile several formulas sharing one DAG. With a closure, every
    /// `<>psi` and `[]psi` records the index of `strip_free(psi)` (resp.
    /// `~strip_free(psi)`) so frontier successors can answer it. With
    /// `nominals_as_props`, nominal `'i` becomes the proposition named `'i`.
    pub fn with_options(formulas: &[Formula], closure: Option<&[Formula]>, nominals_as_props: bool) -> Compiled {
        let mut b = Builder {
            c: Compiled {
                nodes: Vec::new(),
                roots: Vec::new(),
                free: Vec::new(),
                atomic: Vec::new(),
                needs_closure: false,
                props: Vec::new(),
                noms: Vec::new(),
                vars: Vec::new(),
            },
            index: HashMap::new(),
            closure,
            nominals_as_props,
        };
        for f in formulas {
            let r = b.build(f);
            b.c.roots.push(r);
        }
        assert!(b.c.vars.len() <= 64, "at most 64 distinct state variables");
        b.c
    }

    /// Proposition names in slot order (nominals read as propositions keep their `'`).
    pub fn props(&self) -> &[String] {
        &self.props
    }

    /// Nominal names in slot order.
    pub fn nominals(&self) -> &[String] {
        &self.noms
    }

    /// State-variable names in slot order.
    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn roots(&self) -> usize {
        self.roots.len()
    }
}

/// Evaluates a [`Compiled`] formula over one frame.
pub struct Evaluator<'c> {
    c: &'c Compiled,
    n: usize,
    all: u64,
    succ: Vec<u64>,
    pred: Vec<u64>,
    plus: Option<(Vec<u64>, Vec<u64>)>,
    props: Vec<u64>,
    noms: Vec<usize>,
    ext: Vec<u64>,
    assign: Vec<Option<StateId>>,
    memo: Vec<Option<u64>>,
}

impl<'c> Evaluator<'c> {
    /// Prepare evaluation over the frame given by successor masks.
    /// Propositions start empty and nominals at state 0.
    pub fn new(c: &'c Compiled, succ: &[u64]) -> Self {
        let n = succ.len();
        assert!(n <= 64, "frames are limited to 64 states");
        let plus = c.needs_closure.then(|| {
            let sp = closure_masks(succ);
            let pp = converse(&sp);
            (sp, pp)
        });
        Evaluator {
            c,
            n,
            all: full_mask(n),
            succ: succ.to_vec(),
            pred: converse(succ),
            plus,
            props: vec![0; c.props.len()],
            noms: vec![0; c.noms.len()],
            ext: Vec::new(),
            assign: vec![None; c.vars.len()],
            memo: vec![None; c.nodes.len()],
        }
    }

    fn clear_atomic_memo(&mut self) {
        for (m, &a) in self.memo.iter_mut().zip(&self.c.atomic) {
            if a {
                *m = None;
            }
        }
    }

    /// Set proposition extensions by slot.
    pub fn set_props(&mut self, masks: &[u64]) {
        self.props.copy_from_slice(masks);
        self.clear_atomic_memo();
    }

    /// Set the state of every nominal by slot.
    pub fn set_nominals(&mut self, states: &[usize]) {
        self.noms.copy_from_slice(states);
        self.clear_atomic_memo();
    }

    /// Frontier information: `ext[k]` holds the states having a frontier
    /// successor whose type contains closure sentence `k`.
    pub fn set_frontier(&mut self, ext: Vec<u64>) {
        self.ext = ext;
        self.memo.iter_mut().for_each(|m| *m = None);
    }

    /// Bind or unbind a variable by slot.
    pub fn set_var(&mut self, v: usize, s: Option<StateId>) {
        self.assign[v] = s;
        for (m, &fv) in self.memo.iter_mut().zip(&self.c.free) {
            if fv >> v & 1 == 1 {
                *m = None;
            }
        }
    }

    /// Extension of root `r`.
    pub fn root(&mut self, r: usize) -> u64 {
        self.node(self.c.roots[r])
    }

    fn frontier(&self, key: Option<u16>) -> u64 {
        key.and_then(|k| self.ext.get(k as usize).copied()).unwrap_or(0)
    }

    fn node(&mut self, id: Id) -> u64 {
        let i = id as usize;
        let closed = self.c.free[i] == 0;
        if closed {
            if let Some(m) = self.memo[i] {
                return m;
            }
        }
        let r = self.compute(id);
        if closed {
            self.memo[i] = Some(r);
        }
        r
    }

    fn compute(&mut self, id: Id) -> u64 {
        let all = self.all;
        match self.c.nodes[id as usize].clone() {
            Node::True => all,
            Node::False => 0,
            Node::Prop(p) => self.props[p as usize] & all,
            Node::Nom(i) => 1 << self.noms[i as usize],
            Node::Var(v) => 1 << self.assign[v as usize].expect("variables bound before evaluation"),
            Node::Not(a) => !self.node(a) & all,
            Node::And(a, b) => self.node(a) & self.node(b),
            Node::Or(a, b) => self.node(a) | self.node(b),
            Node::Implies(a, b) => (!self.node(a) | self.node(b)) & all,
            Node::Iff(a, b) => !(self.node(a) ^ self.node(b)) & all,
            Node::Dia(a, key) => {
                let am = self.node(a);
                self.pre_exists(&self.succ, am) | self.frontier(key)
            }
            Node::Box(a, key) => {
                let am = self.node(a);
                self.pre_forall(&self.succ, am) & !self.frontier(key)
            }
            Node::Past(a) => {
                let am = self.node(a);
                self.pre_exists(&self.pred, am)
            }
            Node::Hist(a) => {
                let am = self.node(a);
                self.pre_forall(&self.pred, am)
            }
            Node::Exists(a) => {
                if self.node(a) != 0 {
                    all
                } else {
                    0
                }
            }
            Node::Forall(a) => {
                if self.node(a) == all {
                    all
                } else {
                    0
                }
            }
            Node::AtNom(i, a) => {
                let s = self.noms[i as usize];
                if self.node(a) >> s & 1 == 1 {
                    all
                } else {
                    0
                }
            }
            Node::AtVar(v, a) => {
                let s = self.assign[v as usize].expect("variables bound before evaluation");
                if self.node(a) >> s & 1 == 1 {
                    all
                } else {
                    0
                }
            }
            Node::Down(v, a) => {
                let saved = self.assign[v as usize];
                let mut out = 0u64;
                for s in 0..self.n {
                    self.set_var(v as usize, Some(s));
                    if self.node(a) >> s & 1 == 1 {
                        out |= 1 << s;
                    }
                }
                self.set_var(v as usize, saved);
                out
            }
            Node::Until(a, b) => self.until(a, b, false, false, false),
            Node::Since(a, b) => self.until(a, b, true, false, false),
            Node::UntilP(a, b) => self.until(a, b, false, false, true),
            Node::SinceP(a, b) => self.until(a, b, true, false, true),
            Node::UntilPP(a, b) => self.until(a, b, false, true, true),
            Node::SincePP(a, b) => self.until(a, b, true, true, true),
        }
    }

    fn pre_exists(&self, rel: &[u64], target: u64) -> u64 {
        (0..self.n).filter(|&s| rel[s] & target != 0).fold(0, |acc, s| acc | 1 << s)
    }

    fn pre_forall(&self, rel: &[u64], target: u64) -> u64 {
        (0..self.n).filter(|&s| rel[s] & !target == 0).fold(0, |acc, s| acc | 1 << s)
    }

    /// Shared clause for the until/since family. `since` mirrors the
    /// relation; `outer_plus` quantifies the witness over the closure;
    /// `inner_plus` quantifies the in-between states over the closure.
    fn until(&mut self, a: Id, b: Id, since: bool, outer_plus: bool, inner_plus: bool) -> u64 {
        let phi = self.node(a);
        let psi = self.node(b);
        self.until_masks(phi, psi, since, outer_plus, inner_plus)
    }

    fn until_masks(&self, phi: u64, psi: u64, since: bool, outer_plus: bool, inner_plus: bool) -> u64 {
        let (succ, pred) = (&self.succ, &self.pred);
        let (fwd, bwd) = match &self.plus {
            Some((sp, pp)) => (sp, pp),
            None => (succ, pred),
        };
        let (inner_f, inner_b) = if inner_plus { (fwd, bwd) } else { (succ, pred) };
        let outer = match (since, outer_plus) {
            (false, false) => succ,
            (true, false) => pred,
            (false, true) => fwd,
            (true, true) => bwd,
        };
        let mut out = 0u64;
        for m in 0..self.n {
            let ok = bits(outer[m] & phi).any(|w| {
                let between = if since { inner_f[w] & inner_b[m] } else { inner_f[m] & inner_b[w] };
                between & !psi == 0
            });
            if ok {
                out |= 1 << m;
            }
        }
        out
    }

    /// Bounds `(lo, hi)` on the extension of root `r` that hold for every
    /// valuation of propositions and nominals over this frame: `lo` is
    /// contained in the extension and the extension in `hi`. Variables
    /// use their current binding.
    pub fn root_bounds(&mut self, r: usize) -> (u64, u64) {
        let mut memo = vec![None; self.c.nodes.len()];
        self.bounds(self.c.roots[r], &mut memo)
    }

    fn bounds(&mut self, id: Id, memo: &mut Vec<Option<(u64, u64)>>) -> (u64, u64) {
        let i = id as usize;
        if !self.c.atomic[i] {
            let v = self.node(id);
            return (v, v);
        }
        let closed = self.c.free[i] == 0;
        if closed {
            if let Some(b) = memo[i] {
                return b;
            }
        }
        let all = self.all;
        let r = match self.c.nodes[i].clone() {
            Node::True | Node::False | Node::Var(_) => unreachable!("not atomic"),
            Node::Prop(_) | Node::Nom(_) => (0, all),
            Node::Not(a) => {
                let (lo, hi) = self.bounds(a, memo);
                (!hi & all, !lo & all)
            }
            Node::And(a, b) => {
                let (x, y) = (self.bounds(a, memo), self.bounds(b, memo));
                (x.0 & y.0, x.1 & y.1)
            }
            Node::Or(a, b) => {
                let (x, y) = (self.bounds(a, memo), self.bounds(b, memo));
                (x.0 | y.0, x.1 | y.1)
            }
            Node::Implies(a, b) => {
                let (x, y) = (self.bounds(a, memo), self.bounds(b, memo));
                ((!x.1 | y.0) & all, (!x.0 | y.1) & all)
            }
            Node::Iff(a, b) => {
                let (x, y) = (self.bounds(a, memo), self.bounds(b, memo));
                let lo = (x.0 & y.0) | (!x.1 & !y.1);
                let hi = (x.1 & y.1) | (!x.0 & !y.0);
                (lo & all, hi & all)
            }
            Node::Dia(a, key) => {
                let (lo, hi) = self.bounds(a, memo);
                let f = self.frontier(key);
                (self.pre_exists(&self.succ, lo) | f, self.pre_exists(&self.succ, hi) | f)
            }
            Node::Box(a, key) => {
                let (lo, hi) = self.bounds(a, memo);
                let f = !self.frontier(key);
                (self.pre_forall(&self.succ, lo) & f, self.pre_forall(&self.succ, hi) & f)
            }
            Node::Past(a) => {
                let (lo, hi) = self.bounds(a, memo);
                (self.pre_exists(&self.pred, lo), self.pre_exists(&self.pred, hi))
            }
            Node::Hist(a) => {
                let (lo, hi) = self.bounds(a, memo);
                (self.pre_forall(&self.pred, lo), self.pre_forall(&self.pred, hi))
            }
            Node::Exists(a) => {
                let (lo, hi) = self.bounds(a, memo);
                (if lo != 0 { all } else { 0 }, if hi != 0 { all } else { 0 })
            }
            Node::Forall(a) => {
                let (lo, hi) = self.bounds(a, memo);
                (if lo == all { all } else { 0 }, if hi == all { all } else { 0 })
            }
            Node::AtNom(_, a) => {
                let (lo, hi) = self.bounds(a, memo);
                (if lo == all { all } else { 0 }, if hi != 0 { all } else { 0 })
            }
            Node::AtVar(v, a) => {
                let s = self.assign[v as usize].expect("variables bound before evaluation");
                let (lo, hi) = self.bounds(a, memo);
                (if lo >> s & 1 == 1 { all } else { 0 }, if hi >> s & 1 == 1 { all } else { 0 })
            }
            Node::Down(v, a) => {
                let saved = self.assign[v as usize];
                let (mut lo, mut hi) = (0u64, 0u64);
                for s in 0..self.n {
                    self.set_var(v as usize, Some(s));
                    let (l, h) = self.bounds(a, memo);
                    lo |= (l >> s & 1) << s;
                    hi |= (h >> s & 1) << s;
                }
                self.set_var(v as usize, saved);
                (lo, hi)
            }
            Node::Until(a, b) => self.until_bounds(a, b, memo, false, false, false),
            Node::Since(a, b) => self.until_bounds(a, b, memo, true, false, false),
            Node::UntilP(a, b) => self.until_bounds(a, b, memo, false, false, true),
            Node::SinceP(a, b) => self.until_bounds(a, b, memo, true, false, true),
            Node::UntilPP(a, b) => self.until_bounds(a, b, memo, false, true, true),
            Node::SincePP(a, b) => self.until_bounds(a, b, memo, true, true, true),
        };
        if closed {
            memo[i] = Some(r);
        }
        r
    }

    fn until_bounds(
        &mut self,
        a: Id,
        b: Id,
        memo: &mut Vec<Option<(u64, u64)>>,
        since: bool,
        outer_plus: bool,
        inner_plus: bool,
    ) -> (u64, u64) {
        // Until and since are monotone in both arguments.
        let (x, y) = (self.bounds(a, memo), self.bounds(b, memo));
        (
            self.until_masks(x.0, y.0, since, outer_plus, inner_plus),
            self.until_masks(x.1, y.1, since, outer_plus, inner_plus),
        )
    }
}

fn bind(c: &Compiled, ev: &mut Evaluator<'_>, m: &HybridModel, g: &Assignment, f: &Formula) -> Result<(), EvalError> {
    let props: Vec<u64> = c.props.iter().map(|p| m.prop_mask(p)).collect();
    ev.set_props(&props);
    let mut noms = Vec::with_capacity(c.noms.len());
    for i in &c.noms {
        noms.push(m.nominal(i).ok_or_else(|| EvalError::UnboundNominal(i.clone()))?);
    }
    ev.set_nominals(&noms);
    for x in free_vars(f) {
        let s = *g.get(&x).ok_or_else(|| EvalError::UnboundVariable(x.clone()))?;
        if s >= m.len() {
            return Err(EvalError::UnknownState(format!("#{s}")));
        }
        let slot = c.vars.iter().position(|v| *v == x).expect("free variable compiled");
        ev.set_var(slot, Some(s));
    }
    Ok(())
}

/// The states of `m` where `f` holds under assignment `g`.
pub fn extension(m: &HybridModel, g: &Assignment, f: &Formula) -> Result<u64, EvalError> {
    let c = Compiled::new(f);
    let mut ev = Evaluator::new(&c, m.succ_masks());
    bind(&c, &mut ev, m, g, f)?;
    Ok(ev.root(0))
}

/// Truth of `f` at state `s` under assignment `g`.
pub fn eval(m: &HybridModel, g: &Assignment, s: StateId, f: &Formula) -> Result<bool, EvalError> {
    if s >= m.len() {
        return Err(EvalError::UnknownState(format!("#{s}")));
    }
    Ok(extension(m, g, f)? >> s & 1 == 1)
}

/// Truth of `f` at the state with id `state`; the assignment maps
/// variable names to state ids.
pub fn eval_named(m: &HybridModel, g: &[(String, String)], state: &str, f: &Formula) -> Result<bool, EvalError> {
    let s = m.index_of(state).ok_or_else(|| EvalError::UnknownState(state.to_string()))?;
    let mut asg = Assignment::new();
    for (x, t) in g {
        let t = m.index_of(t).ok_or_else(|| EvalError::UnknownState(t.clone()))?;
        asg.insert(x.clone(), t);
    }
    eval(m, &asg, s, f)
}

/// `f` holds at every state of `m` under the empty assignment.
pub fn global_eval(m: &HybridModel, f: &Formula) -> Result<bool, EvalError> {
    Ok(extension(m, &Assignment::new(), f)? == m.all())
}

/// The closure sentences of `phi` true at `s` or at some successor of `s`.
/// Meaningful on transitive models, where the successors of `s` are its
/// whole subtree.
pub fn phi_type(m: &HybridModel, phi: &Formula, s: StateId) -> Result<PhiType, EvalError> {
    if s >= m.len() {
        return Err(EvalError::UnknownState(format!("#{s}")));
    }
    let closure = diamond_closure(phi)?;
    let c = Compiled::with_options(&closure, None, false);
    let mut ev = Evaluator::new(&c, m.succ_masks());
    bind(&c, &mut ev, m, &Assignment::new(), &Formula::True)?;
    let scope = m.succ(s) | 1 << s;
    Ok(closure.iter().enumerate().filter(|(k, _)| ev.root(*k) & scope != 0).map(|(_, chi)| chi.clone()).collect())
}
