//! Typed similarity by truncated lazy random walk.
//!
//! From node `x` the walker picks an outgoing label uniformly from `L(x)`,
//! then a target uniformly from `Y(x, label)`. At every step it stops with
//! probability `gamma`; the score of `z` is the probability of stopping at `z`
//! within `d_max` steps:
//!
//! ```text
//! Q(z) = gamma * sum_{d=1..d_max} (1 - gamma)^d * P_d(z)
//! ```
//!
//! where `P_d` is the seed distribution pushed `d` times through the
//! transition matrix. Nodes without outgoing edges keep their mass.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;
use thiserror::Error;

use crate::graph::{ContainerKind, EdgeLabel, KnowledgeGraph, NodeRef};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WalkError {
    #[error("node {0} is not in the chain")]
    UnknownNode(NodeRef),
    #[error("distribution has {found} entries, chain has {expected} nodes")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid walk parameters: {0}")]
    InvalidParams(String),
    #[error("seed list is empty")]
    EmptySeed,
    #[error("invalid seed distribution: {0}")]
    InvalidSeed(String),
    #[error("result size k must be at least 1")]
    InvalidK,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WalkParams {
    /// Stopping probability per step, in `(0, 1]`.
    pub gamma: f64,
    /// Number of steps the infinite sum is truncated to.
    pub d_max: usize,
}

impl WalkParams {
    pub const DEFAULT_GAMMA: f64 = 0.5;
    pub const DEFAULT_D_MAX: usize = 10;

    pub fn new(gamma: f64, d_max: usize) -> Result<WalkParams, WalkError> {
        let p = WalkParams { gamma, d_max };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), WalkError> {
        if !(self.gamma > 0.0 && self.gamma <= 1.0) {
            return Err(WalkError::InvalidParams(format!(
                "gamma must be in (0, 1], got {}",
                self.gamma
            )));
        }
        if self.d_max < 1 {
            return Err(WalkError::InvalidParams("d_max must be at least 1".into()));
        }
        Ok(())
    }

    /// Weight `gamma * (1 - gamma)^d` of the `d`-step distribution.
    pub fn step_weight(&self, d: usize) -> f64 {
        self.gamma * (1.0 - self.gamma).powi(d as i32)
    }

    /// Total stop mass `sum_{d=1..d_max} gamma (1 - gamma)^d`, independent of
    /// seed and chain.
    pub fn stop_mass(&self) -> f64 {
        (1..=self.d_max).map(|d| self.step_weight(d)).sum()
    }
}

impl Default for WalkParams {
    fn default() -> Self {
        WalkParams {
            gamma: Self::DEFAULT_GAMMA,
            d_max: Self::DEFAULT_D_MAX,
        }
    }
}

const SEED_SUM_TOLERANCE: f64 = 1e-12;

/// Initial probability mass over nodes. Weights are positive and sum to one.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeedDistribution {
    weights: BTreeMap<NodeRef, f64>,
}

impl SeedDistribution {
    pub fn from_weights(weights: BTreeMap<NodeRef, f64>) -> Result<SeedDistribution, WalkError> {
        if weights.is_empty() {
            return Err(WalkError::EmptySeed);
        }
        if let Some((node, w)) = weights.iter().find(|(_, w)| !(w.is_finite() && **w > 0.0)) {
            return Err(WalkError::InvalidSeed(format!("weight of {node} is {w}")));
        }
        let sum: f64 = weights.values().sum();
        if (sum - 1.0).abs() > SEED_SUM_TOLERANCE {
            return Err(WalkError::InvalidSeed(format!("weights sum to {sum}")));
        }
        Ok(SeedDistribution { weights })
    }

    /// Uniform weight per occurrence; repeated nodes accumulate.
    pub fn from_nodes(nodes: &[NodeRef]) -> Result<SeedDistribution, WalkError> {
        if nodes.is_empty() {
            return Err(WalkError::EmptySeed);
        }
        let mut counts: BTreeMap<NodeRef, usize> = BTreeMap::new();
        for node in nodes {
            *counts.entry(node.clone()).or_default() += 1;
        }
        let total = nodes.len() as f64;
        let weights = counts.into_iter().map(|(node, c)| (node, c as f64 / total)).collect();
        Ok(SeedDistribution { weights })
    }

    pub fn weights(&self) -> &BTreeMap<NodeRef, f64> {
        &self.weights
    }

    pub fn get(&self, node: &NodeRef) -> f64 {
        self.weights.get(node).copied().unwrap_or(0.0)
    }

    /// Drops nodes missing from `chain` and renormalizes the rest. Returns the
    /// restricted seed (if any mass remains) and the dropped nodes.
    pub fn restrict_to(&self, chain: &WalkChain) -> (Option<SeedDistribution>, Vec<NodeRef>) {
        let (kept, dropped): (Vec<_>, Vec<_>) = self.weights.iter().partition(|(node, _)| chain.contains(node));
        let dropped: Vec<NodeRef> = dropped.into_iter().map(|(n, _)| n.clone()).collect();
        if kept.is_empty() {
            return (None, dropped);
        }
        if dropped.is_empty() {
            return (Some(self.clone()), dropped);
        }
        let mass: f64 = kept.iter().map(|(_, w)| **w).sum();
        let weights = kept.into_iter().map(|(n, w)| (n.clone(), w / mass)).collect();
        (Some(SeedDistribution { weights }), dropped)
    }
}

pub fn seed_from_nodes(nodes: &[NodeRef]) -> Result<SeedDistribution, WalkError> {
    SeedDistribution::from_nodes(nodes)
}

/// Markov chain view of a knowledge graph.
///
/// Immutable once built; queries borrow it shared.
#[derive(Debug, Clone)]
pub struct WalkChain {
    nodes: Vec<NodeRef>,
    index: HashMap<NodeRef, usize>,
    /// Per node: `(label, Y(x, label))` for every label in `L(x)`.
    adjacency: Vec<Vec<(EdgeLabel, Vec<usize>)>>,
    /// Per node: `(target, T(target | x))`, sorted by target index.
    rows: Vec<Vec<(usize, f64)>>,
    dangling: Vec<bool>,
}

/// Builds the chain over every node and edge of `g`. Pass a saturated graph
/// so inverse edges are walkable.
pub fn build_chain(g: &KnowledgeGraph) -> WalkChain {
    let nodes: Vec<NodeRef> = g.nodes().cloned().collect();
    let index: HashMap<NodeRef, usize> = nodes.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
    let mut adjacency = Vec::with_capacity(nodes.len());
    let mut rows = Vec::with_capacity(nodes.len());
    let mut dangling = Vec::with_capacity(nodes.len());
    for (i, node) in nodes.iter().enumerate() {
        let adj: Vec<(EdgeLabel, Vec<usize>)> = g
            .out_edges(node)
            .map(|(label, targets)| (label, targets.iter().map(|t| index[t]).collect()))
            .collect();
        let row = if adj.is_empty() {
            vec![(i, 1.0)]
        } else {
            let p_label = 1.0 / adj.len() as f64;
            let mut acc: BTreeMap<usize, f64> = BTreeMap::new();
            for (_, targets) in &adj {
                let p = p_label / targets.len() as f64;
                for &t in targets {
                    *acc.entry(t).or_insert(0.0) += p;
                }
            }
            acc.into_iter().collect()
        };
        dangling.push(adj.is_empty());
        adjacency.push(adj);
        rows.push(row);
    }
    WalkChain {
        nodes,
        index,
        adjacency,
        rows,
        dangling,
    }
}

impl WalkChain {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[NodeRef] {
        &self.nodes
    }

    pub fn contains(&self, node: &NodeRef) -> bool {
        self.index.contains_key(node)
    }

    pub fn index_of(&self, node: &NodeRef) -> Option<usize> {
        self.index.get(node).copied()
    }

    pub fn node(&self, index: usize) -> &NodeRef {
        &self.nodes[index]
    }

    pub fn is_dangling(&self, node: &NodeRef) -> Option<bool> {
        self.index_of(node).map(|i| self.dangling[i])
    }

    /// `L(x)` with `Y(x, label)` for each label, as node references.
    pub fn labels_of(&self, node: &NodeRef) -> Result<Vec<(EdgeLabel, Vec<NodeRef>)>, WalkError> {
        let i = self.require(node)?;
        Ok(self.adjacency[i]
            .iter()
            .map(|(l, ys)| (*l, ys.iter().map(|&y| self.nodes[y].clone()).collect()))
            .collect())
    }

    fn require(&self, node: &NodeRef) -> Result<usize, WalkError> {
        self.index_of(node).ok_or_else(|| WalkError::UnknownNode(node.clone()))
    }

    /// One-step transition distribution `T(· | x)`.
    pub fn transition(&self, x: &NodeRef) -> Result<BTreeMap<NodeRef, f64>, WalkError> {
        let i = self.require(x)?;
        Ok(self.rows[i].iter().map(|&(j, p)| (self.nodes[j].clone(), p)).collect())
    }

    /// Pushes `dist` one step: `out(z) = sum_x dist(x) T(z | x)`.
    pub fn step_distribution(&self, dist: &[f64]) -> Result<Vec<f64>, WalkError> {
        if dist.len() != self.nodes.len() {
            return Err(WalkError::DimensionMismatch {
                expected: self.nodes.len(),
                found: dist.len(),
            });
        }
        Ok(self.step_unchecked(dist))
    }

    fn step_unchecked(&self, dist: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; dist.len()];
        for (x, &mass) in dist.iter().enumerate() {
            if mass == 0.0 {
                continue;
            }
            for &(y, p) in &self.rows[x] {
                out[y] += mass * p;
            }
        }
        out
    }

    /// Dense vector of the seed weights.
    pub fn seed_vector(&self, seed: &SeedDistribution) -> Result<Vec<f64>, WalkError> {
        let mut v = vec![0.0; self.nodes.len()];
        for (node, w) in seed.weights() {
            v[self.require(node)?] = *w;
        }
        Ok(v)
    }

    /// `P_1 .. P_{d_max}`: the seed pushed through the chain once per step.
    pub fn step_distributions(&self, seed: &SeedDistribution, d_max: usize) -> Result<Vec<Vec<f64>>, WalkError> {
        let mut current = self.seed_vector(seed)?;
        let mut out = Vec::with_capacity(d_max);
        for _ in 0..d_max {
            current = self.step_unchecked(&current);
            out.push(current.clone());
        }
        Ok(out)
    }

    /// Truncated stop distribution of the lazy walk started from `seed`.
    pub fn lazy_walk(&self, seed: &SeedDistribution, params: &WalkParams) -> Result<StopDistribution, WalkError> {
        params.validate()?;
        let mut current = self.seed_vector(seed)?;
        let mut scores = vec![0.0; self.nodes.len()];
        for d in 1..=params.d_max {
            current = self.step_unchecked(&current);
            let w = params.step_weight(d);
            for (s, p) in scores.iter_mut().zip(&current) {
                *s += w * p;
            }
        }
        Ok(StopDistribution { scores })
    }

    /// Nodes of kind `target` ranked by stop probability, at most `k` of them.
    pub fn typed_query(
        &self,
        seed: &SeedDistribution,
        target: ContainerKind,
        k: usize,
        params: &WalkParams,
    ) -> Result<RankedResult, WalkError> {
        if k == 0 {
            return Err(WalkError::InvalidK);
        }
        let stop = self.lazy_walk(seed, params)?;
        Ok(self.rank(&stop, target, k))
    }

    /// Filters and ranks an existing stop distribution.
    pub fn rank(&self, stop: &StopDistribution, target: ContainerKind, k: usize) -> RankedResult {
        let mut entries: Vec<RankedEntry> = self
            .nodes
            .iter()
            .zip(&stop.scores)
            .filter(|(node, score)| node.kind() == target && **score > 0.0)
            .map(|(node, score)| RankedEntry {
                node: node.clone(),
                score: *score,
            })
            .collect();
        entries.sort_by(|a, b| b.score.total_cmp(&a.score).then_with(|| a.node.cmp(&b.node)));
        entries.truncate(k);
        RankedResult {
            entries,
            target_kind: target,
        }
    }
}

/// Stop probabilities indexed like [`WalkChain::nodes`].
#[derive(Debug, Clone, PartialEq)]
pub struct StopDistribution {
    pub scores: Vec<f64>,
}

impl StopDistribution {
    pub fn total(&self) -> f64 {
        self.scores.iter().sum()
    }

    pub fn get(&self, chain: &WalkChain, node: &NodeRef) -> Option<f64> {
        chain.index_of(node).map(|i| self.scores[i])
    }

    pub fn by_node<'c>(&self, chain: &'c WalkChain) -> BTreeMap<&'c NodeRef, f64> {
        chain.nodes().iter().zip(self.scores.iter().copied()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedEntry {
    pub node: NodeRef,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedResult {
    pub entries: Vec<RankedEntry>,
    pub target_kind: ContainerKind,
}

impl RankedResult {
    pub fn nodes(&self) -> impl Iterator<Item = &NodeRef> + '_ {
        self.entries.iter().map(|e| &e.node)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}
