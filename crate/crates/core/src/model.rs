//! Finite hybrid Kripke models, frame classes and structural decompositions.
//!
//! States are indexed `0..len()` in declaration order and carry string ids.
//! Relations and valuations are stored as 64-bit state masks, which caps a
//! model at [`MAX_STATES`] states.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// Index of a state within its model.
pub type StateId = usize;

/// Largest number of states a model may have.
pub const MAX_STATES: usize = 64;

/// Errors raised while building, loading or decomposing models.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("model has {0} states, the limit is {MAX_STATES}")]
    TooManyStates(usize),
    #[error("model has no states")]
    Empty,
    #[error("unknown state '{0}'")]
    UnknownState(String),
    #[error("state '{0}' declared twice")]
    DuplicateState(String),
    #[error("relation is not transitive")]
    NotTransitive,
    #[error("invalid model file: {0}")]
    Format(String),
}

/// Bit mask with the lowest `n` bits set.
pub fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Iterate the set bits of a mask, lowest first.
pub fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(i)
        }
    })
}

/// A finite Kripke model with propositions and nominals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HybridModel {
    names: Vec<String>,
    succ: Vec<u64>,
    val: BTreeMap<String, u64>,
    nom: BTreeMap<String, StateId>,
}

/// A partial map from state-variable names to states.
pub type Assignment = BTreeMap<String, StateId>;

impl HybridModel {
    /// A model with `n` states named `s0 .. s{n-1}`, no edges and an empty valuation.
    pub fn new(n: usize) -> Result<Self, ModelError> {
        Self::with_names((0..n).map(|i| format!("s{i}")).collect())
    }

    /// A model with the given state ids, no edges and an empty valuation.
    pub fn with_names(names: Vec<String>) -> Result<Self, ModelError> {
        if names.is_empty() {
            return Err(ModelError::Empty);
        }
        if names.len() > MAX_STATES {
            return Err(ModelError::TooManyStates(names.len()));
        }
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(ModelError::DuplicateState(n.clone()));
            }
        }
        let n = names.len();
        Ok(HybridModel { names, succ: vec![0; n], val: BTreeMap::new(), nom: BTreeMap::new() })
    }

    /// Build directly from successor masks (states named `s0`, `s1`, ...).
    pub fn from_masks(succ: Vec<u64>) -> Self {
        let names = (0..succ.len()).map(|i| format!("s{i}")).collect();
        HybridModel { names, succ, val: BTreeMap::new(), nom: BTreeMap::new() }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
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

    /// Resolve a state id, reporting unknown names.
    pub fn state(&self, name: &str) -> Result<StateId, ModelError> {
        self.index_of(name).ok_or_else(|| ModelError::UnknownState(name.to_string()))
    }

    /// Mask with one bit per state.
    pub fn all(&self) -> u64 {
        full_mask(self.len())
    }

    pub fn add_edge(&mut self, a: StateId, b: StateId) {
        self.succ[a] |= 1 << b;
    }

    pub fn has_edge(&self, a: StateId, b: StateId) -> bool {
        self.succ[a] >> b & 1 == 1
    }

    /// Successors of `s` as a mask.
    pub fn succ(&self, s: StateId) -> u64 {
        self.succ[s]
    }

    /// All successor masks, indexed by state.
    pub fn succ_masks(&self) -> &[u64] {
        &self.succ
    }

    /// Predecessor masks, indexed by state.
    pub fn pred_masks(&self) -> Vec<u64> {
        converse(&self.succ)
    }

    /// All edges in row-major order.
    pub fn edges(&self) -> Vec<(StateId, StateId)> {
        (0..self.len()).flat_map(|a| bits(self.succ[a]).map(move |b| (a, b))).collect()
    }

    /// Set or clear proposition `p` at state `s`.
    pub fn set_prop(&mut self, p: &str, s: StateId, on: bool) {
        let m = self.val.entry(p.to_string()).or_insert(0);
        if on {
            *m |= 1 << s;
        } else {
            *m &= !(1 << s);
        }
    }

    /// Replace the extension of `p`.
    pub fn set_prop_mask(&mut self, p: &str, mask: u64) {
        self.val.insert(p.to_string(), mask & self.all());
    }

    /// The states where `p` holds; empty for unknown propositions.
    pub fn prop_mask(&self, p: &str) -> u64 {
        self.val.get(p).copied().unwrap_or(0)
    }

    pub fn valuation(&self) -> &BTreeMap<String, u64> {
        &self.val
    }

    /// Point nominal `i` at state `s`.
    pub fn set_nominal(&mut self, i: &str, s: StateId) {
        self.nom.insert(i.to_string(), s);
    }

    pub fn nominal(&self, i: &str) -> Option<StateId> {
        self.nom.get(i).copied()
    }

    pub fn nominals(&self) -> &BTreeMap<String, StateId> {
        &self.nom
    }

    /// Frame-class membership.
    pub fn is_transitive(&self) -> bool {
        is_transitive_masks(&self.succ)
    }

    /// Every pair of states is related, including each state to itself.
    pub fn is_complete(&self) -> bool {
        self.succ.iter().all(|&m| m == self.all())
    }

    /// Irreflexive, transitive and trichotomous.
    pub fn is_linear(&self) -> bool {
        let n = self.len();
        self.is_transitive()
            && (0..n).all(|a| !self.has_edge(a, a))
            && (0..n).all(|a| (0..n).all(|b| a == b || self.has_edge(a, b) || self.has_edge(b, a)))
    }

    /// The relation is the transitive closure of a finite tree: irreflexive,
    /// transitive, with a root seeing every other state and with the
    /// predecessors of each state forming a chain.
    pub fn is_transitive_tree(&self) -> bool {
        let n = self.len();
        if !self.is_transitive() || (0..n).any(|a| self.has_edge(a, a)) {
            return false;
        }
        let pred = self.pred_masks();
        let roots: Vec<_> = (0..n).filter(|&s| pred[s] == 0).collect();
        if roots.len() != 1 || self.succ[roots[0]] != self.all() & !(1 << roots[0]) {
            return false;
        }
        (0..n)
            .all(|s| bits(pred[s]).all(|a| bits(pred[s]).all(|b| a == b || self.has_edge(a, b) || self.has_edge(b, a))))
    }

    /// The same model with the relation replaced by its transitive closure.
    pub fn transitive_closure(&self) -> HybridModel {
        let mut m = self.clone();
        m.succ = closure_masks(&self.succ);
        m
    }

    /// Restriction to `s` and every state reachable from it. Nominals whose
    /// state is cut away are dropped.
    pub fn generated_submodel(&self, s: StateId) -> Result<HybridModel, ModelError> {
        if s >= self.len() {
            return Err(ModelError::UnknownState(format!("#{s}")));
        }
        let reach = closure_masks(&self.succ)[s] | 1 << s;
        Ok(self.restrict(reach))
    }

    /// Restriction to the states in `keep`, preserving declaration order.
    pub fn restrict(&self, keep: u64) -> HybridModel {
        let kept: Vec<StateId> = bits(keep & self.all()).collect();
        let new_index = |old: StateId| kept.iter().position(|&k| k == old);
        let mut succ = vec![0u64; kept.len()];
        for (i, &old) in kept.iter().enumerate() {
            for t in bits(self.succ[old] & keep) {
                succ[i] |= 1 << new_index(t).unwrap();
            }
        }
        let remap = |mask: u64| bits(mask & keep).fold(0u64, |acc, t| acc | 1 << new_index(t).unwrap());
        HybridModel {
            names: kept.iter().map(|&i| self.names[i].clone()).collect(),
            succ,
            val: self.val.iter().map(|(p, &m)| (p.clone(), remap(m))).collect(),
            nom: self.nom.iter().filter_map(|(i, &s)| new_index(s).map(|t| (i.clone(), t))).collect(),
        }
    }

    /// Decompose a transitive model into cliques (maximal sets of mutually
    /// related states, plus irreflexive singletons) and the strict order
    /// between them.
    pub fn cliques(&self) -> Result<Cliques, ModelError> {
        if !self.is_transitive() {
            return Err(ModelError::NotTransitive);
        }
        let n = self.len();
        let mut node_of = vec![usize::MAX; n];
        let mut blocks: Vec<Vec<StateId>> = Vec::new();
        for s in 0..n {
            if node_of[s] != usize::MAX {
                continue;
            }
            let members: Vec<StateId> =
                (0..n).filter(|&t| t == s || (self.has_edge(s, t) && self.has_edge(t, s))).collect();
            for &t in &members {
                node_of[t] = blocks.len();
            }
            blocks.push(members);
        }
        let mut order = Vec::new();
        for (u, bu) in blocks.iter().enumerate() {
            for (v, bv) in blocks.iter().enumerate() {
                if u != v && self.has_edge(bu[0], bv[0]) && !self.has_edge(bv[0], bu[0]) {
                    order.push((u, v));
                }
            }
        }
        Ok(Cliques { blocks, node_of, order })
    }

    /// Load a model from its JSON file format.
    pub fn from_json(text: &str) -> Result<HybridModel, ModelError> {
        let file: ModelFile = serde_json::from_str(text).map_err(|e| ModelError::Format(e.to_string()))?;
        file.into_model()
    }

    /// Serialize to the JSON file format.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&ModelFile::from_model(self)).expect("model serializes")
    }
}

/// Clique decomposition of a transitive model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cliques {
    /// States of each node, in declaration order.
    pub blocks: Vec<Vec<StateId>>,
    /// Node index of every state.
    pub node_of: Vec<usize>,
    /// Pairs `(u, v)` with `u` strictly above `v`.
    pub order: Vec<(usize, usize)>,
}

pub(crate) fn converse(succ: &[u64]) -> Vec<u64> {
    let mut pred = vec![0u64; succ.len()];
    for (a, &m) in succ.iter().enumerate() {
        for b in bits(m) {
            pred[b] |= 1 << a;
        }
    }
    pred
}

pub(crate) fn is_transitive_masks(succ: &[u64]) -> bool {
    succ.iter().all(|&m| bits(m).all(|b| succ[b] & !m == 0))
}

/// Transitive closure of a relation given as successor masks.
pub fn closure_masks(succ: &[u64]) -> Vec<u64> {
    let mut out = succ.to_vec();
    let n = out.len();
    for k in 0..n {
        for i in 0..n {
            if out[i] >> k & 1 == 1 {
                out[i] |= out[k];
            }
        }
    }
    out
}

/// The frame classes the oracle and checker know about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Frame {
    Any,
    Transitive,
    Complete,
    TransitiveTree,
    Linear,
}

impl Frame {
    /// Whether `m`'s relation belongs to this class.
    pub fn holds(self, m: &HybridModel) -> bool {
        match self {
            Frame::Any => true,
            Frame::Transitive => m.is_transitive(),
            Frame::Complete => m.is_complete(),
            Frame::TransitiveTree => m.is_transitive_tree(),
            Frame::Linear => m.is_linear(),
        }
    }
}

impl FromStr for Frame {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "any" => Ok(Frame::Any),
            "trans" | "transitive" => Ok(Frame::Transitive),
            "complete" => Ok(Frame::Complete),
            "tt" | "transitive-tree" => Ok(Frame::TransitiveTree),
            "linear" => Ok(Frame::Linear),
            other => {
                Err(format!("unknown frame class '{other}' (expected any, trans, complete, transitive-tree or linear)"))
            }
        }
    }
}

impl fmt::Display for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Frame::Any => "any",
            Frame::Transitive => "trans",
            Frame::Complete => "complete",
            Frame::TransitiveTree => "transitive-tree",
            Frame::Linear => "linear",
        })
    }
}

/// On-disk form of a model.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub states: Vec<String>,
    #[serde(default)]
    pub rel: Vec<(String, String)>,
    #[serde(default)]
    pub val: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub nom: BTreeMap<String, String>,
}

impl ModelFile {
    pub fn into_model(self) -> Result<HybridModel, ModelError> {
        let mut m = HybridModel::with_names(self.states)?;
        for (a, b) in &self.rel {
            let (a, b) = (m.state(a)?, m.state(b)?);
            m.add_edge(a, b);
        }
        for (p, states) in &self.val {
            if !crate::formula::is_prop_name(p) {
                return Err(ModelError::Format(format!("'{p}' is not a proposition name")));
            }
            m.val.entry(p.clone()).or_insert(0);
            for s in states {
                let s = m.state(s)?;
                m.set_prop(p, s, true);
            }
        }
        for (i, s) in &self.nom {
            let name = i.strip_prefix('\'').unwrap_or(i);
            let s = m.state(s)?;
            m.set_nominal(name, s);
        }
        Ok(m)
    }

    pub fn from_model(m: &HybridModel) -> ModelFile {
        ModelFile {
            states: m.names.clone(),
            rel: m.edges().into_iter().map(|(a, b)| (m.names[a].clone(), m.names[b].clone())).collect(),
            val: m.val.iter().map(|(p, &mask)| (p.clone(), bits(mask).map(|s| m.names[s].clone()).collect())).collect(),
            nom: m.nom.iter().map(|(i, &s)| (i.clone(), m.names[s].clone())).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(n: usize, edges: &[(usize, usize)]) -> HybridModel {
        let mut m = HybridModel::new(n).unwrap();
        for &(a, b) in edges {
            m.add_edge(a, b);
        }
        m
    }

    #[test]
    fn singleton_frame_classes() {
        let m = model(1, &[]);
        assert!(m.is_transitive());
        assert!(!m.is_complete());
        assert!(m.is_linear());
        assert!(m.is_transitive_tree());
    }

    #[test]
    fn complete_two_clique() {
        let m = model(2, &[(0, 0), (0, 1), (1, 0), (1, 1)]);
        assert!(m.is_complete());
        assert!(!m.is_linear());
    }

    #[test]
    fn chain_missing_shortcut_is_not_transitive() {
        assert!(!model(3, &[(0, 1), (1, 2)]).is_transitive());
    }

    #[test]
    fn closure_examples() {
        let m = model(3, &[(0, 1), (1, 2)]).transitive_closure();
        assert!(m.has_edge(0, 2));
        assert!(m.is_transitive());
        assert_eq!(m.transitive_closure(), m);
        let cyc = model(2, &[(0, 1), (1, 0)]).transitive_closure();
        assert!(cyc.has_edge(0, 0) && cyc.has_edge(1, 1));
    }

    #[test]
    fn generated_submodels() {
        let chain = model(3, &[(0, 1), (1, 2), (0, 2)]);
        let sub = chain.generated_submodel(1).unwrap();
        assert_eq!(sub.names(), &["s1".to_string(), "s2".to_string()]);
        assert!(sub.has_edge(0, 1));
        assert_eq!(model(2, &[]).generated_submodel(1).unwrap().len(), 1);
        let full = model(2, &[(0, 0), (0, 1), (1, 0), (1, 1)]);
        assert_eq!(full.generated_submodel(1).unwrap().len(), 2);
        assert!(chain.generated_submodel(7).is_err());
    }

    #[test]
    fn nominals_cut_from_submodel() {
        let mut m = model(2, &[(0, 1)]);
        m.set_nominal("i", 0);
        m.set_nominal("j", 1);
        let sub = m.generated_submodel(1).unwrap();
        assert_eq!(sub.nominal("i"), None);
        assert_eq!(sub.nominal("j"), Some(0));
    }

    #[test]
    fn clique_examples() {
        let m = model(3, &[(0, 1), (1, 0), (0, 0), (1, 1), (0, 2), (1, 2)]);
        let c = m.cliques().unwrap();
        assert_eq!(c.blocks, vec![vec![0, 1], vec![2]]);
        assert_eq!(c.order, vec![(0, 1)]);
        let chain = model(3, &[(0, 1), (1, 2), (0, 2)]).cliques().unwrap();
        assert_eq!(chain.blocks.len(), 3);
        assert_eq!(chain.order, vec![(0, 1), (0, 2), (1, 2)]);
        let full = model(3, &[(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (1, 2), (2, 0), (2, 1), (2, 2)]);
        let c = full.cliques().unwrap();
        assert_eq!(c.blocks.len(), 1);
        assert!(c.order.is_empty());
        assert!(model(3, &[(0, 1), (1, 2)]).cliques().is_err());
    }

    #[test]
    fn transitive_tree_shapes() {
        assert!(model(3, &[(0, 1), (0, 2)]).is_transitive_tree());
        assert!(model(3, &[(0, 1), (0, 2), (1, 2)]).is_transitive_tree());
        assert!(!model(3, &[(0, 2), (1, 2)]).is_transitive_tree());
        assert!(!model(2, &[(0, 0), (0, 1)]).is_transitive_tree());
    }

    #[test]
    fn json_round_trip_and_unknown_keys() {
        let text = r#"{"states":["a","b"],"rel":[["a","b"]],"val":{"p":["b"]},"nom":{"i":"a"}}"#;
        let m = HybridModel::from_json(text).unwrap();
        assert!(m.has_edge(0, 1));
        assert_eq!(m.prop_mask("p"), 0b10);
        assert_eq!(m.nominal("i"), Some(0));
        assert_eq!(HybridModel::from_json(&m.to_json()).unwrap(), m);
        let bad = r#"{"states":["a"],"colour":{}}"#;
        assert!(matches!(HybridModel::from_json(bad), Err(ModelError::Format(_))));
        let unknown = r#"{"states":["a"],"rel":[["a","z"]]}"#;
        assert_eq!(HybridModel::from_json(unknown), Err(ModelError::UnknownState("z".into())));
    }
}
