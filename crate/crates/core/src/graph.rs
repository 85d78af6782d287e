//! Node and edge vocabulary plus the indexed triple store.
//!
//! Every node is a [`NodeRef`] of the form `<namespace>:<local_id>`. The
//! derived ordering on [`NodeRef`] is identical to the byte order of the
//! canonical strings, so every ordered collection in this module iterates in
//! canonical order.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Namespace prefix of a node identifier.
///
/// Variants are declared in alphabetical order of their prefixes. No prefix is
/// a prefix of another, which makes the derived `Ord` on `(Namespace, &str)`
/// agree with the string order of `"<prefix>:<local>"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Namespace {
    Concept,
    Dsc,
    Name,
    Q,
    Term,
    Topic,
}

impl Namespace {
    pub const ALL: [Namespace; 6] = [
        Namespace::Concept,
        Namespace::Dsc,
        Namespace::Name,
        Namespace::Q,
        Namespace::Term,
        Namespace::Topic,
    ];

    pub fn prefix(self) -> &'static str {
        match self {
            Namespace::Concept => "concept",
            Namespace::Dsc => "dsc",
            Namespace::Name => "name",
            Namespace::Q => "q",
            Namespace::Term => "term",
            Namespace::Topic => "topic",
        }
    }

    pub fn from_prefix(prefix: &str) -> Option<Namespace> {
        Namespace::ALL.into_iter().find(|ns| ns.prefix() == prefix)
    }

    pub fn kind(self) -> ContainerKind {
        match self {
            Namespace::Topic | Namespace::Dsc => ContainerKind::BookContainer,
            Namespace::Q => ContainerKind::QuestionContainer,
            Namespace::Name => ContainerKind::NameContainer,
            Namespace::Concept => ContainerKind::ConceptContainer,
            Namespace::Term => ContainerKind::TermContainer,
        }
    }
}

impl fmt::Display for Namespace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.prefix())
    }
}

/// Error produced when a string is not a valid canonical node identifier.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid node id {input:?} at byte {position}: {reason}")]
pub struct ParseNodeRefError {
    pub input: String,
    /// Byte offset of the offending character within `input`.
    pub position: usize,
    pub reason: &'static str,
}

/// Namespaced identifier of a graph node.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeRef {
    namespace: Namespace,
    local_id: Arc<str>,
}

impl NodeRef {
    /// Builds a node reference after validating `local_id`.
    pub fn new(namespace: Namespace, local_id: &str) -> Result<NodeRef, ParseNodeRefError> {
        let prefix_len = namespace.prefix().len() + 1;
        validate_local_id(local_id).map_err(|(offset, reason)| ParseNodeRefError {
            input: format!("{}:{}", namespace.prefix(), local_id),
            position: prefix_len + offset,
            reason,
        })?;
        Ok(NodeRef {
            namespace,
            local_id: Arc::from(local_id),
        })
    }

    pub fn parse(s: &str) -> Result<NodeRef, ParseNodeRefError> {
        let err = |position, reason| ParseNodeRefError {
            input: s.to_string(),
            position,
            reason,
        };
        let Some(colon) = s.find(':') else {
            return Err(err(s.len(), "missing ':' separator"));
        };
        let namespace = Namespace::from_prefix(&s[..colon]).ok_or_else(|| err(0, "unknown namespace"))?;
        let local = &s[colon + 1..];
        validate_local_id(local).map_err(|(offset, reason)| err(colon + 1 + offset, reason))?;
        Ok(NodeRef {
            namespace,
            local_id: Arc::from(local),
        })
    }

    pub fn namespace(&self) -> Namespace {
        self.namespace
    }

    pub fn local_id(&self) -> &str {
        &self.local_id
    }

    pub fn kind(&self) -> ContainerKind {
        self.namespace.kind()
    }
}

fn validate_local_id(local: &str) -> Result<(), (usize, &'static str)> {
    if local.is_empty() {
        return Err((0, "empty local id"));
    }
    for (i, c) in local.char_indices() {
        if c == ':' {
            return Err((i, "':' is not allowed in a local id"));
        }
        if c.is_whitespace() {
            return Err((i, "whitespace is not allowed in a local id"));
        }
        if c.is_control() {
            return Err((i, "control characters are not allowed in a local id"));
        }
    }
    Ok(())
}

impl fmt::Display for NodeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.namespace.prefix(), self.local_id)
    }
}

impl fmt::Debug for NodeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NodeRef({self})")
    }
}

impl FromStr for NodeRef {
    type Err = ParseNodeRefError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        NodeRef::parse(s)
    }
}

impl Serialize for NodeRef {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for NodeRef {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        NodeRef::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Node-type tag used to filter typed query output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ContainerKind {
    BookContainer,
    QuestionContainer,
    NameContainer,
    ConceptContainer,
    TermContainer,
}

impl ContainerKind {
    pub const ALL: [ContainerKind; 5] = [
        ContainerKind::BookContainer,
        ContainerKind::QuestionContainer,
        ContainerKind::NameContainer,
        ContainerKind::ConceptContainer,
        ContainerKind::TermContainer,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ContainerKind::BookContainer => "BookContainer",
            ContainerKind::QuestionContainer => "QuestionContainer",
            ContainerKind::NameContainer => "NameContainer",
            ContainerKind::ConceptContainer => "ConceptContainer",
            ContainerKind::TermContainer => "TermContainer",
        }
    }
}

impl fmt::Display for ContainerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown container kind {0:?}")]
pub struct ParseKindError(pub String);

impl FromStr for ContainerKind {
    type Err = ParseKindError;

    /// Accepts the full name (`QuestionContainer`) or a short alias
    /// (`question`, `questions`, `q`), case-insensitively.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.trim().to_ascii_lowercase();
        let kind = match lower.trim_end_matches("container").trim_end_matches('s') {
            "book" | "dsc" | "description" | "topic" => ContainerKind::BookContainer,
            "question" | "q" => ContainerKind::QuestionContainer,
            "name" => ContainerKind::NameContainer,
            "concept" => ContainerKind::ConceptContainer,
            "term" => ContainerKind::TermContainer,
            _ => return Err(ParseKindError(s.to_string())),
        };
        Ok(kind)
    }
}

/// Maps a node to the container kind used for typed filtering.
pub fn kind_of(node: &NodeRef) -> ContainerKind {
    node.kind()
}

/// Edge vocabulary. Every label has exactly one inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EdgeLabel {
    #[serde(rename = "subClassOf")]
    SubClassOf,
    #[serde(rename = "superClassOf")]
    SuperClassOf,
    #[serde(rename = "typeOf")]
    TypeOf,
    #[serde(rename = "hasInstance")]
    HasInstance,
    #[serde(rename = "nextPage")]
    NextPage,
    #[serde(rename = "prevPage")]
    PrevPage,
    #[serde(rename = "isQuestionOf")]
    IsQuestionOf,
    #[serde(rename = "hasQuestion")]
    HasQuestion,
    #[serde(rename = "fromDescription")]
    FromDescription,
    #[serde(rename = "hasName")]
    HasName,
    #[serde(rename = "isRelatedTo")]
    IsRelatedTo,
    #[serde(rename = "relatedFrom")]
    RelatedFrom,
    #[serde(rename = "dicTermFor")]
    DicTermFor,
    #[serde(rename = "hasDicTerm")]
    HasDicTerm,
}

impl EdgeLabel {
    pub const ALL: [EdgeLabel; 14] = [
        EdgeLabel::SubClassOf,
        EdgeLabel::SuperClassOf,
        EdgeLabel::TypeOf,
        EdgeLabel::HasInstance,
        EdgeLabel::NextPage,
        EdgeLabel::PrevPage,
        EdgeLabel::IsQuestionOf,
        EdgeLabel::HasQuestion,
        EdgeLabel::FromDescription,
        EdgeLabel::HasName,
        EdgeLabel::IsRelatedTo,
        EdgeLabel::RelatedFrom,
        EdgeLabel::DicTermFor,
        EdgeLabel::HasDicTerm,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EdgeLabel::SubClassOf => "subClassOf",
            EdgeLabel::SuperClassOf => "superClassOf",
            EdgeLabel::TypeOf => "typeOf",
            EdgeLabel::HasInstance => "hasInstance",
            EdgeLabel::NextPage => "nextPage",
            EdgeLabel::PrevPage => "prevPage",
            EdgeLabel::IsQuestionOf => "isQuestionOf",
            EdgeLabel::HasQuestion => "hasQuestion",
            EdgeLabel::FromDescription => "fromDescription",
            EdgeLabel::HasName => "hasName",
            EdgeLabel::IsRelatedTo => "isRelatedTo",
            EdgeLabel::RelatedFrom => "relatedFrom",
            EdgeLabel::DicTermFor => "dicTermFor",
            EdgeLabel::HasDicTerm => "hasDicTerm",
        }
    }

    pub fn inverse(self) -> EdgeLabel {
        use EdgeLabel::*;
        match self {
            SubClassOf => SuperClassOf,
            SuperClassOf => SubClassOf,
            TypeOf => HasInstance,
            HasInstance => TypeOf,
            NextPage => PrevPage,
            PrevPage => NextPage,
            IsQuestionOf => HasQuestion,
            HasQuestion => IsQuestionOf,
            FromDescription => HasName,
            HasName => FromDescription,
            IsRelatedTo => RelatedFrom,
            RelatedFrom => IsRelatedTo,
            DicTermFor => HasDicTerm,
            HasDicTerm => DicTermFor,
        }
    }
}

impl fmt::Display for EdgeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown edge label {0:?}")]
pub struct ParseLabelError(pub String);

impl FromStr for EdgeLabel {
    type Err = ParseLabelError;

    /// Accepts the bare label (`nextPage`) as well as the prefixed spellings
    /// used in ontology listings (`:nextPage`, `rdfs:subClassOf`, `rdf:type`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bare = match s {
            "rdf:type" => return Ok(EdgeLabel::TypeOf),
            "rdfs:subClassOf" => return Ok(EdgeLabel::SubClassOf),
            _ => s.strip_prefix(':').unwrap_or(s),
        };
        EdgeLabel::ALL
            .into_iter()
            .find(|l| l.as_str() == bare)
            .ok_or_else(|| ParseLabelError(s.to_string()))
    }
}

/// Origin of a triple: written by the author, derived by the reasoner, or
/// generated by term extraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Authored,
    Inferred,
    Lexical,
}

impl Provenance {
    pub const ALL: [Provenance; 3] = [Provenance::Authored, Provenance::Inferred, Provenance::Lexical];

    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Authored => "authored",
            Provenance::Inferred => "inferred",
            Provenance::Lexical => "lexical",
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown provenance {0:?}")]
pub struct ParseProvenanceError(pub String);

impl FromStr for Provenance {
    type Err = ParseProvenanceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Provenance::ALL
            .into_iter()
            .find(|p| p.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| ParseProvenanceError(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Triple {
    pub subject: NodeRef,
    pub predicate: EdgeLabel,
    pub object: NodeRef,
    pub provenance: Provenance,
}

impl Triple {
    pub fn new(subject: NodeRef, predicate: EdgeLabel, object: NodeRef, provenance: Provenance) -> Triple {
        Triple {
            subject,
            predicate,
            object,
            provenance,
        }
    }

    pub fn authored(subject: NodeRef, predicate: EdgeLabel, object: NodeRef) -> Triple {
        Triple::new(subject, predicate, object, Provenance::Authored)
    }

    /// Parses the three identifier parts, reporting the first malformed one.
    pub fn parse(subject: &str, predicate: &str, object: &str, provenance: Provenance) -> Result<Triple, GraphError> {
        Ok(Triple {
            subject: subject.parse()?,
            predicate: predicate.parse()?,
            object: object.parse()?,
            provenance,
        })
    }

    pub fn key(&self) -> TripleKey {
        (self.subject.clone(), self.predicate, self.object.clone())
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.subject, self.predicate, self.object)
    }
}

/// Set identity of a triple; provenance is not part of it.
pub type TripleKey = (NodeRef, EdgeLabel, NodeRef);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error(transparent)]
    NodeRef(#[from] ParseNodeRefError),
    #[error(transparent)]
    Label(#[from] ParseLabelError),
    #[error(transparent)]
    Provenance(#[from] ParseProvenanceError),
}

type Adjacency = BTreeMap<NodeRef, BTreeMap<EdgeLabel, BTreeSet<NodeRef>>>;

/// Labeled directed multigraph with per-triple provenance.
///
/// Built by a single writer, then shared read-only; the type is `Send + Sync`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KnowledgeGraph {
    nodes: BTreeSet<NodeRef>,
    triples: BTreeMap<TripleKey, Provenance>,
    out_index: Adjacency,
    in_index: Adjacency,
}

impl KnowledgeGraph {
    pub fn new() -> KnowledgeGraph {
        KnowledgeGraph::default()
    }

    pub fn from_triples<I: IntoIterator<Item = Triple>>(triples: I) -> KnowledgeGraph {
        let mut g = KnowledgeGraph::new();
        g.extend(triples);
        g
    }

    /// Inserts a triple. Returns `false` when `(s, p, o)` was already present,
    /// in which case the stored provenance is left untouched.
    pub fn add_triple(&mut self, t: Triple) -> bool {
        let key = t.key();
        if self.triples.contains_key(&key) {
            return false;
        }
        let Triple {
            subject,
            predicate,
            object,
            provenance,
        } = t;
        self.nodes.insert(subject.clone());
        self.nodes.insert(object.clone());
        self.out_index
            .entry(subject.clone())
            .or_default()
            .entry(predicate)
            .or_default()
            .insert(object.clone());
        self.in_index
            .entry(object)
            .or_default()
            .entry(predicate)
            .or_default()
            .insert(subject);
        self.triples.insert(key, provenance);
        true
    }

    /// Parses and inserts a triple given in canonical string form.
    pub fn add_parsed(
        &mut self,
        subject: &str,
        predicate: &str,
        object: &str,
        provenance: Provenance,
    ) -> Result<bool, GraphError> {
        Ok(self.add_triple(Triple::parse(subject, predicate, object, provenance)?))
    }

    /// Adds a node without edges.
    pub fn add_node(&mut self, node: NodeRef) -> bool {
        self.nodes.insert(node)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn triple_count(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> impl Iterator<Item = &NodeRef> + '_ {
        self.nodes.iter()
    }

    pub fn contains_node(&self, node: &NodeRef) -> bool {
        self.nodes.contains(node)
    }

    pub fn contains(&self, subject: &NodeRef, predicate: EdgeLabel, object: &NodeRef) -> bool {
        self.out_index
            .get(subject)
            .and_then(|by_label| by_label.get(&predicate))
            .is_some_and(|objs| objs.contains(object))
    }

    pub fn provenance(&self, subject: &NodeRef, predicate: EdgeLabel, object: &NodeRef) -> Option<Provenance> {
        self.triples.get(&(subject.clone(), predicate, object.clone())).copied()
    }

    /// All triples in `(subject, predicate, object)` order.
    pub fn triples(&self) -> impl Iterator<Item = Triple> + '_ {
        self.triples.iter().map(|((s, p, o), prov)| Triple {
            subject: s.clone(),
            predicate: *p,
            object: o.clone(),
            provenance: *prov,
        })
    }

    pub fn triples_with_label(&self, label: EdgeLabel) -> impl Iterator<Item = (&NodeRef, &NodeRef)> + '_ {
        self.out_index.iter().flat_map(move |(s, by_label)| {
            by_label
                .get(&label)
                .into_iter()
                .flat_map(move |objs| objs.iter().map(move |o| (s, o)))
        })
    }

    /// `L(x)`: labels with at least one outgoing edge from `x`. Unknown nodes
    /// yield the empty set.
    pub fn out_labels(&self, x: &NodeRef) -> BTreeSet<EdgeLabel> {
        self.out_index
            .get(x)
            .map(|by_label| by_label.keys().copied().collect())
            .unwrap_or_default()
    }

    /// `Y(x, label)` in canonical order.
    pub fn neighbors(&self, x: &NodeRef, label: EdgeLabel) -> Vec<NodeRef> {
        self.neighbor_set(x, label)
            .map(|set| set.iter().cloned().collect())
            .unwrap_or_default()
    }

    pub fn neighbor_set(&self, x: &NodeRef, label: EdgeLabel) -> Option<&BTreeSet<NodeRef>> {
        self.out_index.get(x).and_then(|by_label| by_label.get(&label))
    }

    /// Subjects `s` with `(s, label, x)` in canonical order.
    pub fn in_neighbors(&self, x: &NodeRef, label: EdgeLabel) -> Vec<NodeRef> {
        self.in_index
            .get(x)
            .and_then(|by_label| by_label.get(&label))
            .map(|set| set.iter().cloned().collect())
            .unwrap_or_default()
    }

    /// Outgoing edges of `x`, grouped by label in label order.
    pub fn out_edges(&self, x: &NodeRef) -> impl Iterator<Item = (EdgeLabel, &BTreeSet<NodeRef>)> + '_ {
        self.out_index
            .get(x)
            .into_iter()
            .flat_map(|by_label| by_label.iter().map(|(l, objs)| (*l, objs)))
    }

    pub fn incoming_edges(&self, x: &NodeRef) -> impl Iterator<Item = (EdgeLabel, &BTreeSet<NodeRef>)> + '_ {
        self.in_index
            .get(x)
            .into_iter()
            .flat_map(|by_label| by_label.iter().map(|(l, subs)| (*l, subs)))
    }

    pub fn nodes_of_kind(&self, kind: ContainerKind) -> impl Iterator<Item = &NodeRef> + '_ {
        self.nodes.iter().filter(move |n| n.kind() == kind)
    }

    pub fn nodes_in_namespace(&self, ns: Namespace) -> impl Iterator<Item = &NodeRef> + '_ {
        self.nodes.iter().filter(move |n| n.namespace() == ns)
    }

    pub fn count_by_provenance(&self) -> BTreeMap<Provenance, usize> {
        let mut counts: BTreeMap<Provenance, usize> = Provenance::ALL.iter().map(|p| (*p, 0)).collect();
        for prov in self.triples.values() {
            *counts.entry(*prov).or_default() += 1;
        }
        counts
    }

    /// Sub-graph holding only triples whose provenance passes `keep`.
    /// Nodes are those touched by a kept triple.
    pub fn filter_provenance(&self, keep: impl Fn(Provenance) -> bool) -> KnowledgeGraph {
        KnowledgeGraph::from_triples(self.triples().filter(|t| keep(t.provenance)))
    }

    /// Rebuilds both indexes from the triple set and reports whether they
    /// match the maintained ones.
    pub fn indexes_consistent(&self) -> bool {
        let rebuilt = KnowledgeGraph::from_triples(self.triples());
        let endpoints_known = self
            .triples
            .keys()
            .all(|(s, _, o)| self.nodes.contains(s) && self.nodes.contains(o));
        endpoints_known && rebuilt.out_index == self.out_index && rebuilt.in_index == self.in_index
    }
}

impl Extend<Triple> for KnowledgeGraph {
    fn extend<I: IntoIterator<Item = Triple>>(&mut self, iter: I) {
        for t in iter {
            self.add_triple(t);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(s: &str) -> NodeRef {
        NodeRef::parse(s).unwrap()
    }

    #[test]
    fn node_ref_round_trip() {
        let node = n("dsc:Turing_model");
        assert_eq!(node.namespace(), Namespace::Dsc);
        assert_eq!(node.local_id(), "Turing_model");
        assert_eq!(node.to_string(), "dsc:Turing_model");
    }

    #[test]
    fn node_ref_errors_report_position() {
        let e = NodeRef::parse("dsc:bad id").unwrap_err();
        assert_eq!(e.position, 7);
        let e = NodeRef::parse("nope:x").unwrap_err();
        assert_eq!(e.position, 0);
        let e = NodeRef::parse("topic").unwrap_err();
        assert_eq!(e.position, 5);
        let e = NodeRef::parse("q:").unwrap_err();
        assert_eq!(e.position, 2);
        let e = NodeRef::parse("term:a:b").unwrap_err();
        assert_eq!(e.position, 6);
        let e = NodeRef::new(Namespace::Topic, "a b").unwrap_err();
        assert_eq!(e.position, 7);
    }

    #[test]
    fn kind_mapping() {
        assert_eq!(kind_of(&n("dsc:Turing_model")), ContainerKind::BookContainer);
        assert_eq!(kind_of(&n("topic:Chapter_1")), ContainerKind::BookContainer);
        assert_eq!(kind_of(&n("q:Q1")), ContainerKind::QuestionContainer);
        assert_eq!(kind_of(&n("name:turing")), ContainerKind::NameContainer);
        assert_eq!(kind_of(&n("concept:computation")), ContainerKind::ConceptContainer);
        assert_eq!(kind_of(&n("term:binary")), ContainerKind::TermContainer);
    }

    #[test]
    fn kind_parsing_aliases() {
        assert_eq!(
            "QuestionContainer".parse::<ContainerKind>(),
            Ok(ContainerKind::QuestionContainer)
        );
        assert_eq!(
            "questions".parse::<ContainerKind>(),
            Ok(ContainerKind::QuestionContainer)
        );
        assert_eq!("book".parse::<ContainerKind>(), Ok(ContainerKind::BookContainer));
        assert_eq!("TERM".parse::<ContainerKind>(), Ok(ContainerKind::TermContainer));
        assert!("widget".parse::<ContainerKind>().is_err());
    }

    #[test]
    fn inverse_is_an_involution_without_fixed_points() {
        for l in EdgeLabel::ALL {
            assert_eq!(l.inverse().inverse(), l);
            assert_ne!(l.inverse(), l);
        }
    }

    #[test]
    fn label_parsing_accepts_ontology_spellings() {
        assert_eq!("rdf:type".parse::<EdgeLabel>(), Ok(EdgeLabel::TypeOf));
        assert_eq!("rdfs:subClassOf".parse::<EdgeLabel>(), Ok(EdgeLabel::SubClassOf));
        assert_eq!(":nextPage".parse::<EdgeLabel>(), Ok(EdgeLabel::NextPage));
        assert_eq!("hasDicTerm".parse::<EdgeLabel>(), Ok(EdgeLabel::HasDicTerm));
        assert!("likes".parse::<EdgeLabel>().is_err());
    }

    #[test]
    fn single_insertion() {
        let mut g = KnowledgeGraph::new();
        assert!(g
            .add_parsed("dsc:A", "nextPage", "dsc:B", Provenance::Authored)
            .unwrap());
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.triple_count(), 1);
        assert_eq!(g.neighbors(&n("dsc:A"), EdgeLabel::NextPage), vec![n("dsc:B")]);
        assert_eq!(g.in_neighbors(&n("dsc:B"), EdgeLabel::NextPage), vec![n("dsc:A")]);
    }

    #[test]
    fn duplicate_insertion_keeps_first_provenance() {
        let mut g = KnowledgeGraph::new();
        g.add_parsed("dsc:A", "nextPage", "dsc:B", Provenance::Authored)
            .unwrap();
        assert!(!g
            .add_parsed("dsc:A", "nextPage", "dsc:B", Provenance::Inferred)
            .unwrap());
        assert_eq!(g.triple_count(), 1);
        assert_eq!(
            g.provenance(&n("dsc:A"), EdgeLabel::NextPage, &n("dsc:B")),
            Some(Provenance::Authored)
        );
    }

    #[test]
    fn malformed_ids_are_rejected() {
        let mut g = KnowledgeGraph::new();
        let err = g
            .add_parsed("dsc:A", "nextPage", "dsc:B C", Provenance::Authored)
            .unwrap_err();
        match err {
            GraphError::NodeRef(e) => assert_eq!(e.position, 5),
            other => panic!("unexpected {other:?}"),
        }
        assert!(g.is_empty());
    }

    #[test]
    fn out_labels_and_unknown_nodes() {
        let mut g = KnowledgeGraph::new();
        g.add_parsed("dsc:x", "nextPage", "dsc:y", Provenance::Authored)
            .unwrap();
        g.add_parsed("dsc:x", "typeOf", "topic:T", Provenance::Authored)
            .unwrap();
        g.add_node(n("concept:lonely"));
        assert_eq!(
            g.out_labels(&n("dsc:x")),
            [EdgeLabel::TypeOf, EdgeLabel::NextPage].into_iter().collect()
        );
        assert!(g.out_labels(&n("concept:lonely")).is_empty());
        assert!(g.out_labels(&n("dsc:missing")).is_empty());
        assert!(g.neighbors(&n("dsc:missing"), EdgeLabel::NextPage).is_empty());
    }

    #[test]
    fn neighbors_are_canonically_ordered() {
        let mut g = KnowledgeGraph::new();
        for o in ["dsc:c", "dsc:a", "dsc:b"] {
            g.add_parsed("topic:T", "hasInstance", o, Provenance::Authored).unwrap();
        }
        let got: Vec<String> = g
            .neighbors(&n("topic:T"), EdgeLabel::HasInstance)
            .iter()
            .map(ToString::to_string)
            .collect();
        assert_eq!(got, ["dsc:a", "dsc:b", "dsc:c"]);
    }

    #[test]
    fn provenance_filter_and_counts() {
        let mut g = KnowledgeGraph::new();
        g.add_parsed("dsc:a", "nextPage", "dsc:b", Provenance::Authored)
            .unwrap();
        g.add_parsed("dsc:b", "prevPage", "dsc:a", Provenance::Inferred)
            .unwrap();
        g.add_parsed("term:abc", "dicTermFor", "dsc:a", Provenance::Lexical)
            .unwrap();
        let counts = g.count_by_provenance();
        assert_eq!(counts[&Provenance::Authored], 1);
        assert_eq!(counts[&Provenance::Inferred], 1);
        assert_eq!(counts[&Provenance::Lexical], 1);
        let authored = g.filter_provenance(|p| p == Provenance::Authored);
        assert_eq!(authored.triple_count(), 1);
        assert_eq!(authored.node_count(), 2);
        assert!(g.indexes_consistent());
    }
}
