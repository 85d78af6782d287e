//! WebAssembly bindings for the static demo page in `www/`.
//!
//! A [`Demo`] compiles one annotated chapter with every stage enabled and
//! answers three kinds of request, each returning JSON: graph statistics,
//! a typed query, and the per-step profile of the lazy walk.

use std::collections::BTreeMap;

use serde::Serialize;
use textgraph_core::pipeline::{build, BuildOptions, BuildOutput};
use textgraph_core::{build_chain, ContainerKind, NodeRef, SeedDistribution, WalkChain, WalkParams};
use wasm_bindgen::prelude::*;

/// The number-systems chapter of the test corpus.
pub const SAMPLE_CHAPTER: &str = include_str!("../../core/fixtures/corpus/ch2_number_systems.html");

#[wasm_bindgen(js_name = sampleChapter)]
pub fn sample_chapter() -> String {
    SAMPLE_CHAPTER.to_string()
}

#[derive(Serialize)]
struct Stats {
    nodes: usize,
    triples: usize,
    by_provenance: BTreeMap<String, usize>,
    descriptions: Vec<Description>,
}

#[derive(Serialize)]
struct Description {
    id: String,
    text: String,
}

#[derive(Serialize)]
struct Hit {
    id: String,
    score: f64,
    text: Option<String>,
}

#[derive(Serialize)]
struct Step {
    d: usize,
    weight: f64,
    /// Target-kind mass of the d-step distribution.
    target_mass: f64,
    /// Running total of stop probability through step d.
    cumulative: f64,
}

#[wasm_bindgen]
pub struct Demo {
    built: BuildOutput,
    chain: WalkChain,
}

#[wasm_bindgen]
impl Demo {
    #[wasm_bindgen(constructor)]
    pub fn new(html: &str) -> Result<Demo, JsError> {
        Demo::compile(html).map_err(|e| JsError::new(&e))
    }

    /// Node and triple counts plus the description list.
    pub fn stats(&self) -> String {
        let g = &self.built.graph;
        let stats = Stats {
            nodes: g.node_count(),
            triples: g.triple_count(),
            by_provenance: g
                .count_by_provenance()
                .into_iter()
                .map(|(p, n)| (p.to_string(), n))
                .collect(),
            descriptions: self
                .built
                .corpus
                .documents
                .iter()
                .flat_map(|(_, doc)| doc.descriptions())
                .map(|b| Description {
                    id: b.block_id.to_string(),
                    text: b.text(),
                })
                .collect(),
        };
        serde_json::to_string(&stats).unwrap_or_default()
    }

    /// Ranked nodes of `target` for comma-separated `seeds`.
    pub fn query(&self, seeds: &str, target: &str, k: usize, gamma: f64, d_max: usize) -> Result<String, JsError> {
        self.ranked(seeds, target, k, gamma, d_max)
            .map_err(|e| JsError::new(&e))
    }

    /// How much of the stop mass each walk length contributes.
    pub fn profile(&self, seeds: &str, target: &str, gamma: f64, d_max: usize) -> Result<String, JsError> {
        self.steps(seeds, target, gamma, d_max).map_err(|e| JsError::new(&e))
    }
}

impl Demo {
    pub fn compile(html: &str) -> Result<Demo, String> {
        let built = build(&[("chapter.html", html)], &BuildOptions::default()).map_err(|e| e.to_string())?;
        let chain = build_chain(&built.graph);
        Ok(Demo { built, chain })
    }

    fn seed(&self, seeds: &str) -> Result<SeedDistribution, String> {
        let nodes = seeds
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(NodeRef::parse)
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| e.to_string())?;
        let seed = SeedDistribution::from_nodes(&nodes).map_err(|e| e.to_string())?;
        seed.restrict_to(&self.chain)
            .0
            .ok_or_else(|| "no seed is in the graph".to_string())
    }

    pub fn ranked(&self, seeds: &str, target: &str, k: usize, gamma: f64, d_max: usize) -> Result<String, String> {
        let target: ContainerKind = target.parse().map_err(|_| format!("unknown target kind {target:?}"))?;
        let params = WalkParams::new(gamma, d_max).map_err(|e| e.to_string())?;
        let result = self
            .chain
            .typed_query(&self.seed(seeds)?, target, k, &params)
            .map_err(|e| e.to_string())?;
        let hits: Vec<Hit> = result
            .entries
            .iter()
            .map(|e| Hit {
                id: e.node.to_string(),
                score: e.score,
                text: self.built.bundle.preview(&e.node, 120),
            })
            .collect();
        serde_json::to_string(&hits).map_err(|e| e.to_string())
    }

    pub fn steps(&self, seeds: &str, target: &str, gamma: f64, d_max: usize) -> Result<String, String> {
        let target: ContainerKind = target.parse().map_err(|_| format!("unknown target kind {target:?}"))?;
        let params = WalkParams::new(gamma, d_max).map_err(|e| e.to_string())?;
        let dists = self
            .chain
            .step_distributions(&self.seed(seeds)?, d_max)
            .map_err(|e| e.to_string())?;
        let mut cumulative = 0.0;
        let steps: Vec<Step> = (1..=d_max)
            .map(|d| {
                let weight = params.step_weight(d);
                cumulative += weight;
                let target_mass = dists[d - 1]
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| self.chain.node(*i).kind() == target)
                    .map(|(_, p)| p)
                    .sum();
                Step {
                    d,
                    weight,
                    target_mass,
                    cumulative,
                }
            })
            .collect();
        serde_json::to_string(&steps).map_err(|e| e.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    fn demo() -> Demo {
        Demo::compile(SAMPLE_CHAPTER).unwrap()
    }

    #[test]
    fn stats_list_descriptions() {
        let v: Value = serde_json::from_str(&demo().stats()).unwrap();
        assert!(v["triples"].as_u64().unwrap() > 0);
        assert_eq!(v["descriptions"].as_array().unwrap().len(), 7);
    }

    #[test]
    fn query_ranks_conversion_questions_first() {
        let v: Value = serde_json::from_str(
            &demo()
                .ranked("dsc:hexadecimal, dsc:binary", "question", 3, 0.5, 10)
                .unwrap(),
        )
        .unwrap();
        let top: Vec<&str> = v
            .as_array()
            .unwrap()
            .iter()
            .map(|h| h["id"].as_str().unwrap())
            .collect();
        assert_eq!(top[..2], ["q:c2_bin_to_hex", "q:c2_hex_to_bin"]);
        assert!(demo().ranked("dsc:none", "question", 3, 0.5, 10).is_err());
        assert!(demo().ranked("dsc:octal", "question", 3, 1.5, 10).is_err());
    }

    #[test]
    fn profile_accumulates_to_stop_mass() {
        let v: Value = serde_json::from_str(&demo().steps("dsc:octal", "question", 0.5, 10).unwrap()).unwrap();
        let steps = v.as_array().unwrap();
        assert_eq!(steps.len(), 10);
        assert_eq!(steps[9]["cumulative"].as_f64().unwrap(), 0.49951171875);
        assert!(steps[0]["target_mass"].as_f64().unwrap() > 0.0);
    }
}
