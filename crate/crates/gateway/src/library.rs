//! Loaded artifacts and the read-only operations the CLI and HTTP API share.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use textgraph_core::graph::ParseNodeRefError;
use textgraph_core::walk::WalkError;
use textgraph_core::{
    build_chain, html, snapshot, ContainerKind, ContentBundle, EdgeLabel, KnowledgeGraph, Namespace, NodeRef,
    SeedDistribution, WalkChain, WalkParams,
};
use thiserror::Error;

pub const DEFAULT_K: usize = 10;
pub const PREVIEW_CHARS: usize = 80;

/// A graph snapshot, its content bundle and the chain built from the graph.
#[derive(Debug, Clone)]
pub struct Library {
    pub graph: KnowledgeGraph,
    pub bundle: ContentBundle,
    pub chain: WalkChain,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryRequest {
    pub seeds: Vec<String>,
    pub target_kind: String,
    #[serde(default)]
    pub k: Option<usize>,
    #[serde(default)]
    pub gamma: Option<f64>,
    #[serde(default)]
    pub d_max: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryHit {
    pub rank: usize,
    pub id: String,
    pub score: f64,
    pub anchor: Option<String>,
    pub preview: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryResponse {
    pub target_kind: ContainerKind,
    pub k: usize,
    pub gamma: f64,
    pub d_max: usize,
    pub unknown_seeds: Vec<String>,
    pub entries: Vec<QueryHit>,
}

#[derive(Debug, Error)]
pub enum QueryError {
    #[error("no seeds given")]
    NoSeeds,
    #[error(transparent)]
    Seed(#[from] ParseNodeRefError),
    #[error("unknown target kind {0:?}")]
    Target(String),
    #[error("k must be at least 1")]
    ZeroK,
    #[error("none of the seeds is in the graph: {}", .0.join(", "))]
    AllSeedsUnknown(Vec<String>),
    #[error(transparent)]
    Walk(#[from] WalkError),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TocEntry {
    pub id: String,
    pub title: String,
    pub anchor: Option<String>,
    pub children: Vec<TocEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BookItem {
    pub id: String,
    pub kind: ContainerKind,
    pub anchor: String,
    pub html: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NodeView {
    pub id: String,
    pub kind: ContainerKind,
    pub anchor: Option<String>,
    pub html: Option<String>,
    pub edges: BTreeMap<String, Vec<String>>,
}

impl Library {
    pub fn new(graph: KnowledgeGraph, bundle: ContentBundle) -> Library {
        let chain = build_chain(&graph);
        Library { graph, bundle, chain }
    }

    pub fn load(snapshot_path: &Path, bundle_path: &Path) -> Result<Library> {
        let text = std::fs::read_to_string(snapshot_path)
            .with_context(|| format!("reading snapshot {}", snapshot_path.display()))?;
        let graph = snapshot::parse_snapshot(&text).with_context(|| format!("in {}", snapshot_path.display()))?;
        let text = std::fs::read_to_string(bundle_path)
            .with_context(|| format!("reading content bundle {}", bundle_path.display()))?;
        let bundle = ContentBundle::parse(&text).with_context(|| format!("in {}", bundle_path.display()))?;
        Ok(Library::new(graph, bundle))
    }

    pub fn query(&self, req: &QueryRequest) -> Result<QueryResponse, QueryError> {
        if req.seeds.is_empty() {
            return Err(QueryError::NoSeeds);
        }
        let target: ContainerKind = req
            .target_kind
            .parse()
            .map_err(|_| QueryError::Target(req.target_kind.clone()))?;
        let k = req.k.unwrap_or(DEFAULT_K);
        if k == 0 {
            return Err(QueryError::ZeroK);
        }
        let defaults = WalkParams::default();
        let params = WalkParams::new(req.gamma.unwrap_or(defaults.gamma), req.d_max.unwrap_or(defaults.d_max))?;
        let seeds = req
            .seeds
            .iter()
            .map(|s| NodeRef::parse(s.trim()))
            .collect::<Result<Vec<_>, _>>()?;
        let (seed, missing) = SeedDistribution::from_nodes(&seeds)?.restrict_to(&self.chain);
        let unknown_seeds: Vec<String> = missing.iter().map(NodeRef::to_string).collect();
        let seed = seed.ok_or_else(|| QueryError::AllSeedsUnknown(unknown_seeds.clone()))?;
        let result = self.chain.typed_query(&seed, target, k, &params)?;
        let entries = result
            .entries
            .iter()
            .enumerate()
            .map(|(i, e)| QueryHit {
                rank: i + 1,
                id: e.node.to_string(),
                score: e.score,
                anchor: self.bundle.get(&e.node).map(|r| r.anchor.clone()),
                preview: self.bundle.preview(&e.node, PREVIEW_CHARS),
            })
            .collect();
        Ok(QueryResponse {
            target_kind: target,
            k,
            gamma: params.gamma,
            d_max: params.d_max,
            unknown_seeds,
            entries,
        })
    }

    /// Topic tree from `subClassOf`. A topic's parent is its most specific
    /// superclass, so saturated and unsaturated snapshots give the same tree.
    /// Siblings follow book order.
    pub fn toc(&self) -> Vec<TocEntry> {
        let topics: Vec<&NodeRef> = self.graph.nodes_in_namespace(Namespace::Topic).collect();
        let mut children: BTreeMap<Option<&NodeRef>, Vec<&NodeRef>> = BTreeMap::new();
        for &t in &topics {
            let parent = self.graph.neighbor_set(t, EdgeLabel::SubClassOf).and_then(|supers| {
                supers.iter().find(|p| {
                    !supers
                        .iter()
                        .any(|q| q != *p && self.graph.contains(q, EdgeLabel::SubClassOf, p))
                })
            });
            children.entry(parent).or_default().push(t);
        }
        for list in children.values_mut() {
            list.sort_by_key(|n| (self.bundle.position(n).unwrap_or(usize::MAX), (*n).clone()));
        }
        self.toc_level(None, &children)
    }

    fn toc_level(
        &self,
        parent: Option<&NodeRef>,
        children: &BTreeMap<Option<&NodeRef>, Vec<&NodeRef>>,
    ) -> Vec<TocEntry> {
        children
            .get(&parent)
            .map(|list| {
                list.iter()
                    .map(|t| {
                        let record = self.bundle.get(t);
                        TocEntry {
                            id: t.to_string(),
                            title: record
                                .map(|r| html::strip_tags(&r.html))
                                .unwrap_or_else(|| t.local_id().replace('_', " ")),
                            anchor: record.map(|r| r.anchor.clone()),
                            children: self.toc_level(Some(*t), children),
                        }
                    })
                    .collect()
            })
            .unwrap_or_default()
    }

    pub fn book(&self) -> Vec<BookItem> {
        self.bundle
            .records()
            .iter()
            .map(|r| BookItem {
                id: r.node.to_string(),
                kind: r.node.kind(),
                anchor: r.anchor.clone(),
                html: r.html.clone(),
            })
            .collect()
    }

    pub fn node(&self, node: &NodeRef) -> Option<NodeView> {
        if !self.graph.contains_node(node) && self.bundle.get(node).is_none() {
            return None;
        }
        let record = self.bundle.get(node);
        Some(NodeView {
            id: node.to_string(),
            kind: node.kind(),
            anchor: record.map(|r| r.anchor.clone()),
            html: record.map(|r| r.html.clone()),
            edges: self
                .graph
                .out_edges(node)
                .map(|(label, objects)| (label.to_string(), objects.iter().map(NodeRef::to_string).collect()))
                .collect(),
        })
    }
}

/// The listing printed by `query`: rank, id, score, preview.
pub fn format_listing(response: &QueryResponse) -> String {
    let mut out = String::new();
    for hit in &response.entries {
        out.push_str(&format!(
            "{}\t{}\t{:.9}\t{}\n",
            hit.rank,
            hit.id,
            hit.score,
            hit.preview.as_deref().unwrap_or("")
        ));
    }
    out
}
