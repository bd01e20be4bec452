//! Finite representations of block-tree models.
//!
//! A [`FiniteRep`] is a finite transitive tree of cliques (the m-states)
//! whose leaves may include c-states. A c-state has no successors and a
//! reference to an m-state; it stands for a fresh copy of the subtree
//! rooted at that m-state. Together with a type guess for every c-state, a
//! representation describes a possibly infinite transitive model, and
//! [`verify`] decides whether that model satisfies a sentence.
//!
//! Nominals are read as propositions named `'i`, so a nominal label may hold
//! at several states. Answers about sentences with nominals are therefore
//! relaxations.

use crate::checker::{Compiled, Evaluator};
use crate::formula::{diamond_closure, free_vars, parse_trusted, Formula, Fragment, FragmentError};
use crate::model::{bits, full_mask, HybridModel, ModelError, StateId, MAX_STATES};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use thiserror::Error;

/// The closure sentences true somewhere in a subtree.
pub type PhiType = BTreeSet<Formula>;

/// A type guess for every c-state, keyed by state index.
pub type CGuess = BTreeMap<StateId, PhiType>;

/// Largest closure handled by the type computation.
pub const MAX_CLOSURE: usize = 64;

/// Errors from building, checking or unravelling representations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BlockTreeError {
    /// A state-level problem shared with plain models.
    #[error(transparent)]
    Model(#[from] ModelError),
    /// The sentence is outside HL-down.
    #[error(transparent)]
    Fragment(#[from] FragmentError),
    /// The formula has free state variables.
    #[error("formula has free variables: {0}")]
    NotASentence(String),
    /// The representation has no m-states.
    #[error("representation has no m-states")]
    NoMStates,
    /// A c-state has an outgoing edge.
    #[error("c-state '{0}' has successors")]
    CStateHasSuccessors(String),
    /// A c-state has no reference, or refers to a c-state.
    #[error("c-state '{0}' must refer to an m-state")]
    BadReference(String),
    /// The clique condensation of the m-part is not a rooted tree.
    #[error("m-part is not a tree of cliques: {0}")]
    NotATree(String),
    /// The predecessors of a c-state are not a node plus all its ancestors.
    #[error("predecessors of c-state '{0}' are not a node and its ancestors")]
    BadLeaf(String),
    /// A label is neither a proposition nor a nominal name.
    #[error("'{0}' is neither a proposition nor a nominal")]
    BadLabel(String),
    /// A c-state has no type guess.
    #[error("no type guess for c-state '{0}'")]
    MissingGuess(String),
    /// A guessed formula is not a closure sentence.
    #[error("guess for '{state}' contains {formula}, which is not in the closure")]
    GuessOutsideClosure { state: String, formula: String },
    /// The closure exceeds [`MAX_CLOSURE`].
    #[error("closure has {0} sentences, the limit is {MAX_CLOSURE}")]
    ClosureTooLarge(usize),
    /// The unravelling exceeds [`MAX_STATES`].
    #[error("realization needs more than {MAX_STATES} states")]
    TooLarge,
    /// After unravelling a nominal label does not hold at exactly one state.
    #[error("nominal {0} labels {1} states of the realization")]
    NominalNotUnique(String, usize),
    /// The JSON text is malformed.
    #[error("invalid representation file: {0}")]
    Format(String),
}

/// A finite representation `(M u C, R, V, ref)`.
///
/// States `0..m_len()` are m-states and the rest are c-states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteRep {
    names: Vec<String>,
    m: usize,
    succ: Vec<u64>,
    val: BTreeMap<String, u64>,
    refs: Vec<StateId>,
}

fn is_label(name: &str) -> bool {
    match name.strip_prefix('\'') {
        Some(n) => crate::formula::is_prop_name(n),
        None => crate::formula::is_prop_name(name),
    }
}

impl FiniteRep {
    /// A representation with the given m-states and c-states, no edges, an
    /// empty valuation and every c-state referring to the first m-state.
    pub fn new(m_states: Vec<String>, c_states: Vec<String>) -> Result<Self, BlockTreeError> {
        if m_states.is_empty() {
            return Err(BlockTreeError::NoMStates);
        }
        let m = m_states.len();
        let names: Vec<String> = m_states.into_iter().chain(c_states).collect();
        // Reuse the model checks for size and duplicates.
        HybridModel::with_names(names.clone())?;
        let n = names.len();
        Ok(FiniteRep { names, m, succ: vec![0; n], val: BTreeMap::new(), refs: vec![0; n - m] })
    }

    /// The representation of a finite model: every state is an m-state and
    /// nominal `i` becomes the label `'i`.
    pub fn from_model(model: &HybridModel) -> Self {
        let mut val = model.valuation().clone();
        for (i, &s) in model.nominals() {
            val.insert(format!("'{i}"), 1 << s);
        }
        FiniteRep {
            names: model.names().to_vec(),
            m: model.len(),
            succ: model.succ_masks().to_vec(),
            val,
            refs: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Number of m-states.
    pub fn m_len(&self) -> usize {
        self.m
    }

    /// Number of c-states.
    pub fn c_len(&self) -> usize {
        self.names.len() - self.m
    }

    pub fn is_c(&self, s: StateId) -> bool {
        s >= self.m
    }

    /// Indices of the c-states.
    pub fn c_states(&self) -> std::ops::Range<StateId> {
        self.m..self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, s: StateId) -> &str {
        &self.names[s]
    }

    pub fn index_of(&self, name: &str) -> Option<StateId> {
        self.names.iter().position(|n| n == name)
    }

    fn state(&self, name: &str) -> Result<StateId, BlockTreeError> {
        self.index_of(name).ok_or_else(|| ModelError::UnknownState(name.to_string()).into())
    }

    pub fn add_edge(&mut self, a: StateId, b: StateId) {
        self.succ[a] |= 1 << b;
    }

    pub fn has_edge(&self, a: StateId, b: StateId) -> bool {
        self.succ[a] >> b & 1 == 1
    }

    pub fn succ(&self, s: StateId) -> u64 {
        self.succ[s]
    }

    /// Set or clear a proposition `p` or nominal label `'i` at `s`.
    pub fn set_label(&mut self, label: &str, s: StateId, on: bool) {
        let mask = self.val.entry(label.to_string()).or_insert(0);
        if on {
            *mask |= 1 << s;
        } else {
            *mask &= !(1 << s);
        }
    }

    pub fn label_mask(&self, label: &str) -> u64 {
        self.val.get(label).copied().unwrap_or(0)
    }

    pub fn valuation(&self) -> &BTreeMap<String, u64> {
        &self.val
    }

    /// Point c-state `c` at m-state `target`.
    pub fn set_ref(&mut self, c: StateId, target: StateId) {
        assert!(self.is_c(c), "only c-states carry references");
        self.refs[c - self.m] = target;
    }

    /// The m-state a c-state refers to.
    pub fn reference(&self, c: StateId) -> StateId {
        self.refs[c - self.m]
    }

    fn m_mask(&self) -> u64 {
        full_mask(self.m)
    }

    /// Check the structural conditions: c-states are leaves referring to
    /// m-states, the relation is transitive, the cliques of the m-part form
    /// a rooted tree, and the predecessors of each c-state are exactly one
    /// node and all of its ancestors.
    pub fn validate(&self) -> Result<(), BlockTreeError> {
        for label in self.val.keys() {
            if !is_label(label) {
                return Err(BlockTreeError::BadLabel(label.clone()));
            }
        }
        for c in self.c_states() {
            if self.succ[c] != 0 {
                return Err(BlockTreeError::CStateHasSuccessors(self.names[c].clone()));
            }
            if self.reference(c) >= self.m {
                return Err(BlockTreeError::BadReference(self.names[c].clone()));
            }
        }
        if !crate::model::is_transitive_masks(&self.succ) {
            return Err(ModelError::NotTransitive.into());
        }
        let mm = self.m_mask();
        let m_part = HybridModel::from_masks(self.succ[..self.m].iter().map(|s| s & mm).collect());
        let cl = m_part.cliques()?;
        let nodes = cl.blocks.len();
        // ancestors[v]: nodes strictly above v.
        let mut ancestors = vec![BTreeSet::new(); nodes];
        for &(u, v) in &cl.order {
            ancestors[v].insert(u);
        }
        let roots = (0..nodes).filter(|&v| ancestors[v].is_empty()).count();
        if roots != 1 {
            return Err(BlockTreeError::NotATree(format!("{roots} root nodes")));
        }
        for v in 0..nodes {
            let above: Vec<usize> = ancestors[v].iter().copied().collect();
            for (i, &a) in above.iter().enumerate() {
                for &b in &above[i + 1..] {
                    if !ancestors[a].contains(&b) && !ancestors[b].contains(&a) {
                        let name = &self.names[cl.blocks[v][0]];
                        return Err(BlockTreeError::NotATree(format!(
                            "the node of '{name}' has two incomparable ancestors"
                        )));
                    }
                }
            }
        }
        let block_mask = |v: usize| cl.blocks[v].iter().fold(0u64, |acc, &s| acc | 1 << s);
        let preds = crate::model::converse(&self.succ);
        for c in self.c_states() {
            let p = preds[c];
            let fits = (0..nodes).any(|v| {
                let expected = ancestors[v].iter().fold(block_mask(v), |acc, &a| acc | block_mask(a));
                expected == p
            });
            if !fits {
                return Err(BlockTreeError::BadLeaf(self.names[c].clone()));
            }
        }
        Ok(())
    }

    /// Load a representation and the type guesses stored with it.
    pub fn from_json(text: &str) -> Result<(FiniteRep, CGuess), BlockTreeError> {
        let file: RepFile = serde_json::from_str(text).map_err(|e| BlockTreeError::Format(e.to_string()))?;
        file.into_rep()
    }

    /// Serialize with the given type guesses.
    pub fn to_json(&self, guess: &CGuess) -> String {
        serde_json::to_string_pretty(&RepFile::from_rep(self, guess)).expect("representation serializes")
    }
}

/// On-disk form of a representation: the model file format plus
/// `c_states`, `ref` and optional type guesses.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepFile {
    /// The m-states.
    pub states: Vec<String>,
    #[serde(default)]
    pub c_states: Vec<String>,
    #[serde(default)]
    pub rel: Vec<(String, String)>,
    /// Proposition labels `p` and nominal labels `'i`.
    #[serde(default)]
    pub val: BTreeMap<String, Vec<String>>,
    #[serde(default, rename = "ref")]
    pub refs: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub guess: BTreeMap<String, Vec<String>>,
}

impl RepFile {
    pub fn into_rep(self) -> Result<(FiniteRep, CGuess), BlockTreeError> {
        let mut rep = FiniteRep::new(self.states, self.c_states)?;
        for (a, b) in &self.rel {
            let (a, b) = (rep.state(a)?, rep.state(b)?);
            rep.add_edge(a, b);
        }
        for (label, states) in &self.val {
            if !is_label(label) {
                return Err(BlockTreeError::BadLabel(label.clone()));
            }
            rep.val.entry(label.clone()).or_insert(0);
            for s in states {
                let s = rep.state(s)?;
                rep.set_label(label, s, true);
            }
        }
        for c in rep.c_states() {
            let name = rep.names[c].clone();
            let target = self.refs.get(&name).ok_or_else(|| BlockTreeError::BadReference(name.clone()))?;
            let t = rep.state(target)?;
            if rep.is_c(t) {
                return Err(BlockTreeError::BadReference(name));
            }
            rep.set_ref(c, t);
        }
        if let Some(extra) = self.refs.keys().find(|k| rep.index_of(k).is_none_or(|s| !rep.is_c(s))) {
            return Err(BlockTreeError::Format(format!("'{extra}' in ref is not a c-state")));
        }
        let mut guess = CGuess::new();
        for (name, formulas) in &self.guess {
            let c = rep.state(name)?;
            let set = formulas
                .iter()
                .map(|f| parse_trusted(f).map_err(|e| BlockTreeError::Format(e.to_string())))
                .collect::<Result<PhiType, _>>()?;
            guess.insert(c, set);
        }
        Ok((rep, guess))
    }

    pub fn from_rep(rep: &FiniteRep, guess: &CGuess) -> RepFile {
        let name = |s: StateId| rep.names[s].clone();
        let mut rel = Vec::new();
        for a in 0..rep.len() {
            rel.extend(bits(rep.succ[a]).map(|b| (name(a), name(b))));
        }
        RepFile {
            states: rep.names[..rep.m].to_vec(),
            c_states: rep.names[rep.m..].to_vec(),
            rel,
            val: rep.val.iter().map(|(l, &mask)| (l.clone(), bits(mask).map(name).collect())).collect(),
            refs: rep.c_states().map(|c| (name(c), name(rep.reference(c)))).collect(),
            guess: guess.iter().map(|(&c, t)| (name(c), t.iter().map(|f| f.to_string()).collect())).collect(),
        }
    }
}

/// Why [`verify`] rejected a representation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rejection {
    /// The type computed for the referenced m-state differs from the guess.
    TypeMismatch { c_state: String, guessed: PhiType, computed: PhiType },
    /// The sentence holds at no m-state.
    PhiFalse,
}

fn show_type(t: &PhiType) -> String {
    let items: Vec<String> = t.iter().map(|f| f.to_string()).collect();
    format!("{{{}}}", items.join(", "))
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rejection::TypeMismatch { c_state, guessed, computed } => write!(
                f,
                "c-state '{c_state}': guessed {} but its reference has type {}",
                show_type(guessed),
                show_type(computed)
            ),
            Rejection::PhiFalse => f.write_str("the sentence holds at no m-state"),
        }
    }
}

/// Outcome of [`verify`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// The described model satisfies the sentence at these m-states.
    Accept {
        states: Vec<StateId>,
    },
    Reject(Rejection),
}

impl Verdict {
    pub fn accepted(&self) -> bool {
        matches!(self, Verdict::Accept { .. })
    }
}

/// A sentence compiled against its diamond closure, ready to compute types
/// over many representations or cliques.
pub struct TypeEngine {
    closure: Vec<Formula>,
    compiled: Compiled,
}

impl TypeEngine {
    /// Compile `phi`, which must be an HL-down sentence.
    pub fn new(phi: &Formula) -> Result<Self, BlockTreeError> {
        FragmentError::check(Fragment::HlDown, phi)?;
        let free = free_vars(phi);
        if !free.is_empty() {
            let names: Vec<String> = free.into_iter().map(|v| format!("${v}")).collect();
            return Err(BlockTreeError::NotASentence(names.join(", ")));
        }
        let closure = diamond_closure(phi)?;
        if closure.len() > MAX_CLOSURE {
            return Err(BlockTreeError::ClosureTooLarge(closure.len()));
        }
        let mut roots = closure.clone();
        roots.push(phi.clone());
        let compiled = Compiled::with_options(&roots, Some(&closure), true);
        Ok(TypeEngine { closure, compiled })
    }

    /// The closure sentences, indexed as in the bit sets used here.
    pub fn closure(&self) -> &[Formula] {
        &self.closure
    }

    pub(crate) fn compiled(&self) -> &Compiled {
        &self.compiled
    }

    /// Labels read by the sentence, in slot order.
    pub fn labels(&self) -> &[String] {
        self.compiled.props()
    }

    /// Convert a set of closure sentences to a bit set.
    pub fn to_bits(&self, state: &str, t: &PhiType) -> Result<u64, BlockTreeError> {
        t.iter().try_fold(0u64, |acc, f| match self.closure.iter().position(|c| c == f) {
            Some(k) => Ok(acc | 1 << k),
            None => Err(BlockTreeError::GuessOutsideClosure { state: state.to_string(), formula: f.to_string() }),
        })
    }

    /// Convert a bit set back to closure sentences.
    pub fn to_type(&self, t: u64) -> PhiType {
        bits(t).map(|k| self.closure[k].clone()).collect()
    }

    /// Evaluate over a frame of `succ.len()` states with label masks in
    /// slot order, where `frontier[k]` marks the states with a frontier
    /// successor whose type contains closure sentence `k`. Returns the
    /// extension of every closure sentence and of the sentence itself.
    pub fn evaluate(&self, succ: &[u64], labels: &[u64], frontier: Vec<u64>) -> (Vec<u64>, u64) {
        let mut ev = Evaluator::new(&self.compiled, succ);
        ev.set_props(labels);
        ev.set_frontier(frontier);
        let ext = (0..self.closure.len()).map(|k| ev.root(k)).collect();
        let phi = ev.root(self.closure.len());
        (ext, phi)
    }

    /// Least-fixpoint types of the m-states, given guesses as bit sets
    /// indexed by c-state offset. Also returns the m-states where the
    /// sentence holds.
    fn types(&self, rep: &FiniteRep, guess: &[u64]) -> (Vec<u64>, u64) {
        let (m, d) = (rep.m, self.closure.len());
        let mm = rep.m_mask();
        let succ: Vec<u64> = rep.succ[..m].iter().map(|s| s & mm).collect();
        let labels: Vec<u64> = self.labels().iter().map(|l| rep.label_mask(l) & mm).collect();
        let mut frontier = vec![0u64; d];
        for s in 0..m {
            for c in bits(rep.succ[s] & !mm) {
                for k in bits(guess[c - m]) {
                    frontier[k] |= 1 << s;
                }
            }
        }
        let (ext, phi) = self.evaluate(&succ, &labels, frontier);
        // W(s): closure sentences true at s or an m-successor of s.
        let mut t: Vec<u64> = (0..m)
            .map(|s| {
                let scope = succ[s] | 1 << s;
                (0..d).filter(|&k| ext[k] & scope != 0).fold(0u64, |acc, k| acc | 1 << k)
            })
            .collect();
        // T(s) = W(s) u the types of the references of s's c-successors.
        loop {
            let mut changed = false;
            for s in 0..m {
                let extra = bits(rep.succ[s] & !mm).fold(0u64, |acc, c| acc | t[rep.reference(c)]);
                if extra & !t[s] != 0 {
                    t[s] |= extra;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        (t, phi)
    }

    fn guess_bits(&self, rep: &FiniteRep, guess: &CGuess) -> Result<Vec<u64>, BlockTreeError> {
        rep.c_states()
            .map(|c| {
                let t = guess.get(&c).ok_or_else(|| BlockTreeError::MissingGuess(rep.names[c].clone()))?;
                self.to_bits(&rep.names[c], t)
            })
            .collect()
    }

    /// [`verify`] with a precompiled sentence.
    pub fn verify(&self, rep: &FiniteRep, guess: &CGuess) -> Result<Verdict, BlockTreeError> {
        rep.validate()?;
        let g = self.guess_bits(rep, guess)?;
        let (t, phi) = self.types(rep, &g);
        for c in rep.c_states() {
            let computed = t[rep.reference(c)];
            if computed != g[c - rep.m] {
                return Ok(Verdict::Reject(Rejection::TypeMismatch {
                    c_state: rep.names[c].clone(),
                    guessed: self.to_type(g[c - rep.m]),
                    computed: self.to_type(computed),
                }));
            }
        }
        if phi == 0 {
            return Ok(Verdict::Reject(Rejection::PhiFalse));
        }
        Ok(Verdict::Accept { states: bits(phi).collect() })
    }
}

/// Types of every state of `rep` for `phi`.
///
/// An m-state `s` gets the least set `T(s)` containing the closure
/// sentences true at `s` or at an m-successor of `s`, together with
/// `T(ref(c))` for every c-successor `c`. Here `<>psi` holds at an m-state
/// when an m-successor satisfies `psi` or a c-successor's guess contains
/// `strip_free(psi)`. A c-state gets its guess.
pub fn compute_types(
    rep: &FiniteRep,
    phi: &Formula,
    guess: &CGuess,
) -> Result<BTreeMap<StateId, PhiType>, BlockTreeError> {
    rep.validate()?;
    let engine = TypeEngine::new(phi)?;
    let g = engine.guess_bits(rep, guess)?;
    let (t, _) = engine.types(rep, &g);
    let mut out: BTreeMap<StateId, PhiType> =
        t.iter().enumerate().map(|(s, &bits)| (s, engine.to_type(bits))).collect();
    for c in rep.c_states() {
        out.insert(c, engine.to_type(g[c - rep.m]));
    }
    Ok(out)
}

/// Accept iff every c-state's guess equals the computed type of its
/// reference and `phi` holds at some m-state.
pub fn verify(rep: &FiniteRep, phi: &Formula, guess: &CGuess) -> Result<Verdict, BlockTreeError> {
    TypeEngine::new(phi)?.verify(rep, guess)
}

/// Largest number of intermediate states [`realize`] will create.
const REALIZE_WORK_LIMIT: usize = 4096;

/// Unravel `rep` into a finite transitive model: each c-state is replaced
/// by a fresh copy of the subtree rooted at its reference, `depth` times
/// over, and the c-states left after that are dropped. Copies are named
/// `<state>.<k>`. A nominal label becomes a nominal and must end up at
/// exactly one state.
pub fn realize(rep: &FiniteRep, depth: usize) -> Result<HybridModel, BlockTreeError> {
    rep.validate()?;
    struct Inst {
        orig: StateId,
        level: usize,
        name: String,
        live: bool,
    }
    let mut inst: Vec<Inst> =
        (0..rep.len()).map(|s| Inst { orig: s, level: 0, name: rep.names[s].clone(), live: true }).collect();
    let mut succ: Vec<BTreeSet<usize>> = (0..rep.len()).map(|s| bits(rep.succ[s]).collect()).collect();
    let mut queue: std::collections::VecDeque<usize> = rep.c_states().collect();
    let mut serial = 0usize;
    while let Some(x) = queue.pop_front() {
        if inst[x].level >= depth {
            continue;
        }
        serial += 1;
        let r = rep.reference(inst[x].orig);
        let subtree: Vec<StateId> = std::iter::once(r).chain(bits(rep.succ[r] & !(1 << r))).collect();
        if inst.len() + subtree.len() > REALIZE_WORK_LIMIT {
            return Err(BlockTreeError::TooLarge);
        }
        let base = inst.len();
        let level = inst[x].level + 1;
        for &s in &subtree {
            inst.push(Inst { orig: s, level, name: format!("{}.{serial}", rep.names[s]), live: true });
            succ.push(BTreeSet::new());
        }
        for (i, &a) in subtree.iter().enumerate() {
            for (j, &b) in subtree.iter().enumerate() {
                if rep.has_edge(a, b) {
                    succ[base + i].insert(base + j);
                }
            }
        }
        for row in succ.iter_mut().take(base) {
            if row.remove(&x) {
                row.extend(base..base + subtree.len());
            }
        }
        inst[x].live = false;
        queue.extend((base..base + subtree.len()).filter(|&i| rep.is_c(inst[i].orig)));
    }
    let keep: Vec<usize> = (0..inst.len()).filter(|&i| inst[i].live && !rep.is_c(inst[i].orig)).collect();
    if keep.len() > MAX_STATES {
        return Err(BlockTreeError::TooLarge);
    }
    let pos: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let mut model = HybridModel::with_names(keep.iter().map(|&i| inst[i].name.clone()).collect())?;
    for (k, &i) in keep.iter().enumerate() {
        for j in &succ[i] {
            if let Some(&b) = pos.get(j) {
                model.add_edge(k, b);
            }
        }
    }
    let mut model = model.transitive_closure();
    for (label, &mask) in &rep.val {
        let here: u64 =
            keep.iter().enumerate().filter(|(_, &i)| mask >> inst[i].orig & 1 == 1).fold(0, |acc, (k, _)| acc | 1 << k);
        match label.strip_prefix('\'') {
            Some(nom) => {
                if here.count_ones() != 1 {
                    return Err(BlockTreeError::NominalNotUnique(label.clone(), here.count_ones() as usize));
                }
                model.set_nominal(nom, here.trailing_zeros() as usize);
            }
            None => model.set_prop_mask(label, here),
        }
    }
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checker::eval;
    use crate::formula::parse;
    use crate::model::Assignment;

    const CHAIN: &str = "p & <>p & []<>p & [] down $x.~<>$x";

    /// m0 -> m1 -> c0 with ref(c0) = m1, everything labelled p.
    fn chain_rep() -> FiniteRep {
        let mut rep = FiniteRep::new(vec!["m0".into(), "m1".into()], vec!["c0".into()]).unwrap();
        for (a, b) in [(0, 1), (0, 2), (1, 2)] {
            rep.add_edge(a, b);
        }
        for s in 0..3 {
            rep.set_label("p", s, true);
        }
        rep.set_ref(2, 1);
        rep
    }

    fn guess_of(c: StateId, items: &[&str]) -> CGuess {
        CGuess::from([(c, items.iter().map(|s| parse(s).unwrap()).collect())])
    }

    #[test]
    fn chain_types_and_verdict() {
        let rep = chain_rep();
        let phi = parse(CHAIN).unwrap();
        let guess = guess_of(2, &["p"]);
        let types = compute_types(&rep, &phi, &guess).unwrap();
        assert_eq!(types[&0], types[&1]);
        assert!(types[&0].contains(&parse("p").unwrap()));
        assert!(!types[&0].contains(&Formula::False));
        assert_eq!(verify(&rep, &phi, &guess).unwrap(), Verdict::Accept { states: vec![0, 1] });
    }

    #[test]
    fn wrong_guess_is_rejected() {
        let rep = chain_rep();
        let phi = parse(CHAIN).unwrap();
        let v = verify(&rep, &phi, &guess_of(2, &["p", "~<>p"])).unwrap();
        assert!(matches!(v, Verdict::Reject(Rejection::TypeMismatch { .. })));
        let v = verify(&rep, &phi, &guess_of(2, &[])).unwrap();
        assert!(!v.accepted());
    }

    #[test]
    fn circular_guesses_do_not_justify_themselves() {
        // m0 -> c0 with ref(c0) = m0 and no q anywhere.
        let mut rep = FiniteRep::new(vec!["m0".into()], vec!["c0".into()]).unwrap();
        rep.add_edge(0, 1);
        rep.set_ref(1, 0);
        let phi = parse("<><>q").unwrap();
        let v = verify(&rep, &phi, &guess_of(1, &["q", "<>q"])).unwrap();
        assert!(!v.accepted());
    }

    #[test]
    fn realize_unrolls_the_chain() {
        let rep = chain_rep();
        let m0 = realize(&rep, 0).unwrap();
        assert_eq!(m0.len(), 2);
        let m2 = realize(&rep, 2).unwrap();
        assert_eq!(m2.len(), 4);
        assert!(m2.is_transitive());
        assert_eq!(m2.prop_mask("p"), m2.all());
        let m4 = realize(&rep, 4).unwrap();
        assert_eq!(m4.len(), 6);
        assert!(m4.is_transitive_tree());
        let p = parse("p & <>p").unwrap();
        assert!(eval(&m4, &Assignment::new(), 0, &p).unwrap());
    }

    #[test]
    fn validation_catches_bad_shapes() {
        let mut rep = chain_rep();
        rep.add_edge(2, 2);
        assert!(matches!(rep.validate(), Err(BlockTreeError::CStateHasSuccessors(_))));
        let mut rep = chain_rep();
        rep.succ[0] &= !(1 << 2);
        assert!(rep.validate().is_err());
        let mut rep = FiniteRep::new(vec!["a".into(), "b".into()], vec![]).unwrap();
        rep.add_edge(0, 0);
        rep.add_edge(1, 1);
        assert!(matches!(rep.validate(), Err(BlockTreeError::NotATree(_))));
    }

    #[test]
    fn json_round_trip() {
        let rep = chain_rep();
        let guess = guess_of(2, &["p", "~down $x.~<>$x"]);
        let text = rep.to_json(&guess);
        let (back, g) = FiniteRep::from_json(&text).unwrap();
        assert_eq!(back, rep);
        assert_eq!(g, guess);
    }

    #[test]
    fn nominal_labels_become_nominals() {
        let mut rep = FiniteRep::new(vec!["a".into(), "b".into()], vec![]).unwrap();
        rep.add_edge(0, 1);
        rep.set_label("'i", 1, true);
        let m = realize(&rep, 0).unwrap();
        assert_eq!(m.nominal("i"), Some(1));
    }
}
