//! MAP@10 evaluation and the graph-construction ablation.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{ContainerKind, KnowledgeGraph, NodeRef, Provenance};
use crate::reasoner::{self, ReasonerError, RuleSet};
use crate::walk::{self, RankedResult, SeedDistribution, WalkError, WalkParams};

/// Rank cutoff used for average precision.
pub const EVAL_CUTOFF: usize = 10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("judgment line {line}: {message}")]
    Judgment { line: usize, message: String },
    #[error("cannot average an empty list of queries")]
    NoQueries,
    #[error("baseline MAP must be positive, got {0}")]
    ZeroBaseline(f64),
    #[error("cutoff must be at least 1")]
    ZeroCutoff,
    #[error(transparent)]
    Reasoner(#[from] ReasonerError),
    #[error(transparent)]
    Walk(#[from] WalkError),
}

/// Rounds to two decimal places.
pub fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

/// Average precision over the top `cutoff` entries of `ranked`, normalized by
/// `min(|relevant|, cutoff)`. Zero when `relevant` is empty.
pub fn average_precision<'a, I>(ranked: I, relevant: &BTreeSet<NodeRef>, cutoff: usize) -> Result<f64, EvalError>
where
    I: IntoIterator<Item = &'a NodeRef>,
{
    if cutoff == 0 {
        return Err(EvalError::ZeroCutoff);
    }
    if relevant.is_empty() {
        return Ok(0.0);
    }
    let mut hits = 0usize;
    let mut sum = 0.0;
    for (i, node) in ranked.into_iter().take(cutoff).enumerate() {
        if relevant.contains(node) {
            hits += 1;
            sum += hits as f64 / (i + 1) as f64;
        }
    }
    Ok(sum / relevant.len().min(cutoff) as f64)
}

/// Mean of the given average precisions, as a percentage rounded to two
/// decimals.
pub fn map_percentage(aps: &[f64]) -> Result<f64, EvalError> {
    if aps.is_empty() {
        return Err(EvalError::NoQueries);
    }
    Ok(round2(100.0 * aps.iter().sum::<f64>() / aps.len() as f64))
}

/// MAP@[`EVAL_CUTOFF`] over `(result, relevant set)` pairs, as a percentage.
pub fn mean_average_precision(results: &[(RankedResult, BTreeSet<NodeRef>)]) -> Result<f64, EvalError> {
    let aps = results
        .iter()
        .map(|(r, rel)| average_precision(r.nodes(), rel, EVAL_CUTOFF))
        .collect::<Result<Vec<_>, _>>()?;
    map_percentage(&aps)
}

/// Relative MAP change against `base`, in percent, rounded to two decimals.
pub fn delta_map(base: f64, variant: f64) -> Result<f64, EvalError> {
    if base <= 0.0 || base.is_nan() {
        return Err(EvalError::ZeroBaseline(base));
    }
    Ok(round2(100.0 * (variant - base) / base))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Judgment {
    pub query_id: String,
    pub seeds: Vec<NodeRef>,
    pub target: ContainerKind,
    pub relevant: BTreeSet<NodeRef>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct JudgmentSet {
    pub entries: BTreeMap<String, Judgment>,
}

impl JudgmentSet {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn insert(&mut self, j: Judgment) {
        self.entries.insert(j.query_id.clone(), j);
    }

    /// Parses `query_id<TAB>seed,seed<TAB>target_kind<TAB>rel,rel` lines.
    /// Blank lines and `#` comments are skipped; the relevant list may be
    /// empty.
    pub fn parse(text: &str) -> Result<JudgmentSet, EvalError> {
        let mut set = JudgmentSet::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let raw = raw.trim_end_matches('\r');
            if raw.trim().is_empty() || raw.starts_with('#') {
                continue;
            }
            let err = |message: String| EvalError::Judgment { line, message };
            let fields: Vec<&str> = raw.split('\t').collect();
            if !(fields.len() == 4 || fields.len() == 3) {
                return Err(err(format!("expected 4 tab-separated fields, found {}", fields.len())));
            }
            let query_id = fields[0].trim();
            if query_id.is_empty() {
                return Err(err("empty query id".into()));
            }
            if set.entries.contains_key(query_id) {
                return Err(err(format!("duplicate query id {query_id:?}")));
            }
            let parse_list = |field: &str| -> Result<Vec<NodeRef>, EvalError> {
                field
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(|s| NodeRef::parse(s).map_err(|e| err(e.to_string())))
                    .collect()
            };
            let seeds = parse_list(fields[1])?;
            if seeds.is_empty() {
                return Err(err("no seed nodes".into()));
            }
            let target: ContainerKind = fields[2]
                .parse()
                .map_err(|e: crate::graph::ParseKindError| err(e.to_string()))?;
            let relevant: BTreeSet<NodeRef> = parse_list(fields.get(3).copied().unwrap_or(""))?.into_iter().collect();
            if let Some(bad) = relevant.iter().find(|n| n.kind() != target) {
                return Err(err(format!("relevant node {bad} is not of kind {target}")));
            }
            set.insert(Judgment {
                query_id: query_id.to_string(),
                seeds,
                target,
                relevant,
            });
        }
        Ok(set)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for j in self.entries.values() {
            let join = |nodes: &mut dyn Iterator<Item = &NodeRef>| {
                nodes.map(ToString::to_string).collect::<Vec<_>>().join(",")
            };
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}",
                j.query_id,
                join(&mut j.seeds.iter()),
                j.target,
                join(&mut j.relevant.iter())
            );
        }
        out
    }
}

/// Which triple classes a graph variant is built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum AblationVariant {
    Authored,
    AuthoredPlusLexical,
    AuthoredPlusInferred,
    AuthoredPlusInferredPlusLexical,
}

impl AblationVariant {
    pub const ALL: [AblationVariant; 4] = [
        AblationVariant::Authored,
        AblationVariant::AuthoredPlusLexical,
        AblationVariant::AuthoredPlusInferred,
        AblationVariant::AuthoredPlusInferredPlusLexical,
    ];

    pub fn inference(self) -> bool {
        matches!(
            self,
            AblationVariant::AuthoredPlusInferred | AblationVariant::AuthoredPlusInferredPlusLexical
        )
    }

    pub fn lexical(self) -> bool {
        matches!(
            self,
            AblationVariant::AuthoredPlusLexical | AblationVariant::AuthoredPlusInferredPlusLexical
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            AblationVariant::Authored => "authored",
            AblationVariant::AuthoredPlusLexical => "authored+lexical",
            AblationVariant::AuthoredPlusInferred => "authored+inferred",
            AblationVariant::AuthoredPlusInferredPlusLexical => "authored+inferred+lexical",
        }
    }

    /// Assembles the variant from a corpus graph.
    ///
    /// Authored triples (plus lexical ones when enabled) are re-saturated:
    /// with every rule when inference is on, otherwise with inverse
    /// materialization only, since the walk always traverses edges in both
    /// directions. Stored inferred triples are not reused.
    pub fn build(self, corpus: &KnowledgeGraph) -> Result<KnowledgeGraph, ReasonerError> {
        let lexical = self.lexical();
        let base = corpus.filter_provenance(|p| match p {
            Provenance::Authored => true,
            Provenance::Lexical => lexical,
            Provenance::Inferred => false,
        });
        let rules = if self.inference() {
            RuleSet::all()
        } else {
            RuleSet::inverses_only()
        };
        reasoner::saturate_with(&base, &rules)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QueryOutcome {
    pub query_id: String,
    pub average_precision: f64,
    pub retrieved: Vec<NodeRef>,
    /// Seed nodes missing from the variant graph.
    pub missing_seeds: Vec<NodeRef>,
    /// True when no seed node exists in the variant graph; AP is then 0.
    pub flagged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VariantRow {
    pub variant: AblationVariant,
    pub name: &'static str,
    pub nodes: usize,
    pub triples: usize,
    pub map: f64,
    /// Relative change against the authored baseline; `None` on the baseline
    /// row or when the baseline MAP is zero.
    pub delta_map: Option<f64>,
    pub queries: Vec<QueryOutcome>,
}

impl VariantRow {
    pub fn flagged(&self) -> usize {
        self.queries.iter().filter(|q| q.flagged).count()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AblationReport {
    pub gamma: f64,
    pub d_max: usize,
    pub cutoff: usize,
    pub rows: Vec<VariantRow>,
}

/// Evaluates every judgment query on each of the four graph variants.
pub fn run_ablation(
    corpus: &KnowledgeGraph,
    judgments: &JudgmentSet,
    params: &WalkParams,
) -> Result<AblationReport, EvalError> {
    params.validate()?;
    if judgments.is_empty() {
        return Err(EvalError::NoQueries);
    }
    let mut rows = Vec::with_capacity(4);
    for variant in AblationVariant::ALL {
        let g = variant.build(corpus)?;
        let chain = walk::build_chain(&g);
        let mut queries = Vec::with_capacity(judgments.len());
        for j in judgments.entries.values() {
            let seed = SeedDistribution::from_nodes(&j.seeds)?;
            let (seed, missing_seeds) = seed.restrict_to(&chain);
            let outcome = match seed {
                Some(seed) => {
                    let result = chain.typed_query(&seed, j.target, EVAL_CUTOFF, params)?;
                    QueryOutcome {
                        query_id: j.query_id.clone(),
                        average_precision: average_precision(result.nodes(), &j.relevant, EVAL_CUTOFF)?,
                        retrieved: result.nodes().cloned().collect(),
                        missing_seeds,
                        flagged: false,
                    }
                }
                None => QueryOutcome {
                    query_id: j.query_id.clone(),
                    average_precision: 0.0,
                    retrieved: Vec::new(),
                    missing_seeds,
                    flagged: true,
                },
            };
            queries.push(outcome);
        }
        let aps: Vec<f64> = queries.iter().map(|q| q.average_precision).collect();
        rows.push(VariantRow {
            variant,
            name: variant.name(),
            nodes: g.node_count(),
            triples: g.triple_count(),
            map: map_percentage(&aps)?,
            delta_map: None,
            queries,
        });
    }
    let base = rows[0].map;
    for row in rows.iter_mut().skip(1) {
        row.delta_map = delta_map(base, row.map).ok();
    }
    Ok(AblationReport {
        gamma: params.gamma,
        d_max: params.d_max,
        cutoff: EVAL_CUTOFF,
        rows,
    })
}

impl AblationReport {
    pub fn row(&self, variant: AblationVariant) -> Option<&VariantRow> {
        self.rows.iter().find(|r| r.variant == variant)
    }

    /// Aligned plain-text table.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "MAP@{} (gamma={}, d_max={})", self.cutoff, self.gamma, self.d_max);
        let _ = writeln!(
            out,
            "{:<27} {:>7} {:>8} {:>7} {:>8} {:>7}",
            "variant", "nodes", "triples", "MAP", "dMAP%", "flagged"
        );
        for r in &self.rows {
            let delta = r.delta_map.map_or_else(|| "-".to_string(), |d| format!("{d:.2}"));
            let _ = writeln!(
                out,
                "{:<27} {:>7} {:>8} {:>7.2} {:>8} {:>7}",
                r.name,
                r.nodes,
                r.triples,
                r.map,
                delta,
                r.flagged()
            );
        }
        out
    }

    /// One header line then one tab-separated row per variant:
    /// `variant nodes triples map delta_map flagged`.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("variant\tnodes\ttriples\tmap\tdelta_map\tflagged\n");
        for r in &self.rows {
            let delta = r.delta_map.map_or_else(|| "-".to_string(), |d| format!("{d:.2}"));
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{:.2}\t{}\t{}",
                r.name,
                r.nodes,
                r.triples,
                r.map,
                delta,
                r.flagged()
            );
        }
        out
    }
}
