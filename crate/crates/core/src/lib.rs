//! Knowledge graphs compiled from annotated HTML teaching material.
//!
//! The pipeline is: [`ingest`] parses chapters into authored triples,
//! [`reasoner`] saturates them, [`lexicon`] adds word linkages, and [`walk`]
//! answers typed similarity queries over the resulting Markov chain.
//! [`eval`] scores rankings against relevance judgments.

pub mod bundle;
pub mod eval;
pub mod graph;
pub mod html;
pub mod ingest;
pub mod lexicon;
pub mod pipeline;
pub mod reasoner;
pub mod snapshot;
pub mod walk;

pub use bundle::ContentBundle;
pub use graph::{ContainerKind, EdgeLabel, KnowledgeGraph, Namespace, NodeRef, Provenance, Triple};
pub use walk::{build_chain, RankedResult, SeedDistribution, WalkChain, WalkParams};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Graph(#[from] graph::GraphError),
    #[error(transparent)]
    Ingest(#[from] ingest::IngestError),
    #[error(transparent)]
    Reasoner(#[from] reasoner::ReasonerError),
    #[error(transparent)]
    Walk(#[from] walk::WalkError),
    #[error(transparent)]
    Eval(#[from] eval::EvalError),
    #[error(transparent)]
    Snapshot(#[from] snapshot::SnapshotError),
    #[error(transparent)]
    Bundle(#[from] bundle::BundleError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
