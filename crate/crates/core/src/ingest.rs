//! Compiles annotated HTML teaching material into authored triples.
//!
//! Annotation syntax:
//!
//! | markup | meaning |
//! |---|---|
//! | `<h1>`..`<h6>` | topic heading; the topic id is the slugged heading text unless `data-topic-id` is set |
//! | `id="o:descp:X"` | description block `dsc:X` |
//! | `id="o:q:X"` + `data-question-of="o:descp:A,o:descp:B"` | question block `q:X` |
//! | `data-topics="a,b"` on a block | extra topics for a description |
//! | `data-name-id="n"` on an element inside a description | name span `name:n` |
//! | `data-concept="c1,c2"` on a description or name span | concept links `concept:c1`, ... |
//!
//! Each file is one chapter: description chains never cross files, topics with
//! the same id in different files are the same node.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use crate::graph::{EdgeLabel, KnowledgeGraph, Namespace, NodeRef, ParseNodeRefError, Triple};
use crate::html::{self, Element, Node};

pub const DESCRIPTION_PREFIX: &str = "o:descp:";
pub const QUESTION_PREFIX: &str = "o:q:";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IngestError {
    #[error("input is not valid UTF-8 (first bad byte at {offset})")]
    InvalidUtf8 { offset: usize },
    #[error("invalid identifier at byte {offset}: {source}")]
    InvalidId {
        offset: usize,
        #[source]
        source: ParseNodeRefError,
    },
    #[error("duplicate block id {id:?} at bytes {first} and {second}")]
    DuplicateBlock { id: String, first: usize, second: usize },
    #[error("block {id:?} at byte {offset} appears before any heading (orphan block)")]
    OrphanBlock { id: String, offset: usize },
    #[error("block {inner:?} at byte {offset} is nested inside block {outer:?}")]
    NestedBlock {
        outer: String,
        inner: String,
        offset: usize,
    },
    #[error("description {id:?} at byte {offset} carries a question annotation")]
    DescriptionWithQuestionTargets { id: String, offset: usize },
    #[error("question {id:?} at byte {offset} has no data-question-of targets")]
    QuestionWithoutTargets { id: String, offset: usize },
    #[error("heading at byte {offset} has no text to derive a topic id from")]
    EmptyHeading { offset: usize },
    #[error("name span {name:?} at byte {offset} is not inside a description")]
    NameOutsideDescription { name: String, offset: usize },
    #[error("concept annotation at byte {offset} is on {subject}, which is neither a description nor a name span")]
    ConceptSubject { subject: String, offset: usize },
    #[error("topic hierarchy contains a cycle: {}", format_cycle(.members))]
    TopicCycle { members: Vec<NodeRef> },
    #[error("description {block} references topic {topic}, which has no heading in this document")]
    UnknownTopic { block: NodeRef, topic: NodeRef },
    #[error("question {question} targets missing description {missing}")]
    DanglingQuestionTarget { question: NodeRef, missing: NodeRef },
    #[error("block {id} is defined in both {first_file} and {second_file}")]
    DuplicateAcrossFiles {
        id: NodeRef,
        first_file: String,
        second_file: String,
    },
    #[error("corpus has no input files")]
    EmptyCorpus,
    #[error("{file}: {source}")]
    InFile {
        file: String,
        #[source]
        source: Box<IngestError>,
    },
}

pub(crate) fn format_cycle(members: &[NodeRef]) -> String {
    let mut parts: Vec<String> = members.iter().map(ToString::to_string).collect();
    if let Some(first) = members.first() {
        parts.push(first.to_string());
    }
    parts.join(" -> ")
}

/// One heading occurrence in document order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopicEntry {
    pub topic: NodeRef,
    pub heading: String,
    /// Heading level, 1..=6.
    pub depth: u8,
    /// Index of the enclosing heading in [`CorpusDocument::topic_tree`].
    pub parent: Option<usize>,
    pub offset: usize,
    pub html: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContentBlock {
    pub block_id: NodeRef,
    /// The element id as written, used as the page anchor.
    pub anchor: String,
    pub offset: usize,
    pub enclosing_topics: Vec<NodeRef>,
    pub html_value: String,
    pub question_targets: Vec<NodeRef>,
    pub name_spans: Vec<(NodeRef, String)>,
    pub concept_refs: Vec<(NodeRef, NodeRef)>,
}

impl ContentBlock {
    pub fn is_description(&self) -> bool {
        self.block_id.namespace() == Namespace::Dsc
    }

    pub fn is_question(&self) -> bool {
        self.block_id.namespace() == Namespace::Q
    }

    pub fn text(&self) -> String {
        html::strip_tags(&self.html_value)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CorpusDocument {
    pub title: String,
    pub topic_tree: Vec<TopicEntry>,
    pub blocks: Vec<ContentBlock>,
}

impl CorpusDocument {
    pub fn descriptions(&self) -> impl Iterator<Item = &ContentBlock> + '_ {
        self.blocks.iter().filter(|b| b.is_description())
    }

    pub fn questions(&self) -> impl Iterator<Item = &ContentBlock> + '_ {
        self.blocks.iter().filter(|b| b.is_question())
    }

    pub fn topics(&self) -> BTreeSet<&NodeRef> {
        self.topic_tree.iter().map(|e| &e.topic).collect()
    }
}

/// Lowercases heading text and joins words with `_`. `:` is replaced too so
/// the result is always a valid local id (or empty).
pub fn slug(text: &str) -> String {
    text.split_whitespace()
        .map(|w| w.to_lowercase().replace(':', "_"))
        .collect::<Vec<_>>()
        .join("_")
}

fn parse_description_ref(raw: &str, offset: usize) -> Result<NodeRef, IngestError> {
    let raw = raw.trim();
    let local = raw
        .strip_prefix(DESCRIPTION_PREFIX)
        .or_else(|| raw.strip_prefix("dsc:"))
        .unwrap_or(raw);
    NodeRef::new(Namespace::Dsc, local).map_err(|source| IngestError::InvalidId { offset, source })
}

fn parse_ns_ref(ns: Namespace, raw: &str, offset: usize) -> Result<NodeRef, IngestError> {
    let raw = raw.trim();
    let local = raw
        .strip_prefix(ns.prefix())
        .and_then(|r| r.strip_prefix(':'))
        .unwrap_or(raw);
    NodeRef::new(ns, local).map_err(|source| IngestError::InvalidId { offset, source })
}

fn split_list(value: &str) -> impl Iterator<Item = &str> {
    value.split(',').map(str::trim).filter(|s| !s.is_empty())
}

struct Walker<'a> {
    src: &'a str,
    doc: CorpusDocument,
    /// Indexes into `doc.topic_tree` of the headings currently in scope.
    scope: Vec<usize>,
    seen_ids: HashMap<String, usize>,
}

impl Walker<'_> {
    fn visit(&mut self, nodes: &[Node], block: Option<usize>) -> Result<(), IngestError> {
        for node in nodes {
            if let Node::Element(el) = node {
                self.visit_element(el, block)?;
            }
        }
        Ok(())
    }

    fn visit_element(&mut self, el: &Element, block: Option<usize>) -> Result<(), IngestError> {
        if el.name == "title" && self.doc.title.is_empty() {
            self.doc.title = el.text();
            return Ok(());
        }
        if let Some(level) = el.heading_level() {
            if block.is_none() {
                return self.heading(el, level);
            }
        }
        let id = el.attr("id").unwrap_or("");
        let block_ns = if id.starts_with(DESCRIPTION_PREFIX) {
            Some(Namespace::Dsc)
        } else if id.starts_with(QUESTION_PREFIX) {
            Some(Namespace::Q)
        } else {
            None
        };
        if let Some(ns) = block_ns {
            if let Some(outer) = block {
                return Err(IngestError::NestedBlock {
                    outer: self.doc.blocks[outer].anchor.clone(),
                    inner: id.to_string(),
                    offset: el.start,
                });
            }
            let idx = self.block(el, ns, id)?;
            return self.visit(&el.children, Some(idx));
        }
        if let Some(name_id) = el.attr("data-name-id") {
            let owner = block.filter(|&b| self.doc.blocks[b].is_description());
            let Some(owner) = owner else {
                return Err(IngestError::NameOutsideDescription {
                    name: name_id.to_string(),
                    offset: el.start,
                });
            };
            let name = parse_ns_ref(Namespace::Name, name_id, el.start)?;
            let concepts = self.concepts(el)?;
            let b = &mut self.doc.blocks[owner];
            b.name_spans.push((name.clone(), el.text()));
            b.concept_refs.extend(concepts.into_iter().map(|c| (name.clone(), c)));
            return self.visit(&el.children, block);
        }
        if el.attr("data-concept").is_some() {
            return Err(IngestError::ConceptSubject {
                subject: format!("<{}>", el.name),
                offset: el.start,
            });
        }
        self.visit(&el.children, block)
    }

    fn concepts(&self, el: &Element) -> Result<Vec<NodeRef>, IngestError> {
        el.attr("data-concept")
            .map(|v| {
                split_list(v)
                    .map(|c| parse_ns_ref(Namespace::Concept, c, el.start))
                    .collect()
            })
            .unwrap_or_else(|| Ok(Vec::new()))
    }

    fn heading(&mut self, el: &Element, level: u8) -> Result<(), IngestError> {
        let text = el.text();
        let local = match el.attr("data-topic-id") {
            Some(explicit) => explicit.trim().to_string(),
            None => slug(&text),
        };
        if local.is_empty() {
            return Err(IngestError::EmptyHeading { offset: el.start });
        }
        let topic = NodeRef::new(Namespace::Topic, &local).map_err(|source| IngestError::InvalidId {
            offset: el.start,
            source,
        })?;
        while let Some(&top) = self.scope.last() {
            if self.doc.topic_tree[top].depth >= level {
                self.scope.pop();
            } else {
                break;
            }
        }
        let parent = self.scope.last().copied();
        self.doc.topic_tree.push(TopicEntry {
            topic,
            heading: text,
            depth: level,
            parent,
            offset: el.start,
            html: self.src[el.start..el.end].to_string(),
        });
        self.scope.push(self.doc.topic_tree.len() - 1);
        Ok(())
    }

    fn block(&mut self, el: &Element, ns: Namespace, id: &str) -> Result<usize, IngestError> {
        let prefix = match ns {
            Namespace::Dsc => DESCRIPTION_PREFIX,
            _ => QUESTION_PREFIX,
        };
        let block_id = NodeRef::new(ns, &id[prefix.len()..]).map_err(|source| IngestError::InvalidId {
            offset: el.start,
            source,
        })?;
        if let Some(&first) = self.seen_ids.get(id) {
            return Err(IngestError::DuplicateBlock {
                id: id.to_string(),
                first,
                second: el.start,
            });
        }
        self.seen_ids.insert(id.to_string(), el.start);

        let Some(&innermost) = self.scope.last() else {
            return Err(IngestError::OrphanBlock {
                id: id.to_string(),
                offset: el.start,
            });
        };
        let mut enclosing_topics = vec![self.doc.topic_tree[innermost].topic.clone()];
        if let Some(extra) = el.attr("data-topics") {
            for t in split_list(extra) {
                let topic = parse_ns_ref(Namespace::Topic, t, el.start)?;
                if !enclosing_topics.contains(&topic) {
                    enclosing_topics.push(topic);
                }
            }
        }

        let mut question_targets = Vec::new();
        if let Some(targets) = el.attr("data-question-of") {
            if ns == Namespace::Dsc {
                return Err(IngestError::DescriptionWithQuestionTargets {
                    id: id.to_string(),
                    offset: el.start,
                });
            }
            for t in split_list(targets) {
                let target = parse_description_ref(t, el.start)?;
                if !question_targets.contains(&target) {
                    question_targets.push(target);
                }
            }
        }
        if ns == Namespace::Q && question_targets.is_empty() {
            return Err(IngestError::QuestionWithoutTargets {
                id: id.to_string(),
                offset: el.start,
            });
        }

        let concepts = self.concepts(el)?;
        if ns != Namespace::Dsc && !concepts.is_empty() {
            return Err(IngestError::ConceptSubject {
                subject: block_id.to_string(),
                offset: el.start,
            });
        }
        let concept_refs = concepts.into_iter().map(|c| (block_id.clone(), c)).collect();

        self.doc.blocks.push(ContentBlock {
            block_id,
            anchor: id.to_string(),
            offset: el.start,
            enclosing_topics,
            html_value: self.src[el.start..el.end].to_string(),
            question_targets,
            name_spans: Vec::new(),
            concept_refs,
        });
        Ok(self.doc.blocks.len() - 1)
    }
}

/// Parses one annotated HTML file.
pub fn parse_document(input: &[u8]) -> Result<CorpusDocument, IngestError> {
    let src = std::str::from_utf8(input).map_err(|e| IngestError::InvalidUtf8 {
        offset: e.valid_up_to(),
    })?;
    let tree = html::parse(src);
    let mut walker = Walker {
        src,
        doc: CorpusDocument::default(),
        scope: Vec::new(),
        seen_ids: HashMap::new(),
    };
    walker.visit(&tree.children, None)?;
    let mut doc = walker.doc;
    if doc.title.is_empty() {
        if let Some(first) = doc.topic_tree.first() {
            doc.title = first.heading.clone();
        }
    }
    Ok(doc)
}

/// `(child, subClassOf, parent)` for each distinct heading nesting.
pub fn extract_topic_hierarchy(doc: &CorpusDocument) -> Result<Vec<Triple>, IngestError> {
    let mut seen = BTreeSet::new();
    let mut edges = Vec::new();
    for entry in &doc.topic_tree {
        let Some(p) = entry.parent else { continue };
        let parent = &doc.topic_tree[p].topic;
        if seen.insert((entry.topic.clone(), parent.clone())) {
            edges.push((entry.topic.clone(), parent.clone()));
        }
    }
    if let Some(members) = find_cycle(&edges) {
        return Err(IngestError::TopicCycle { members });
    }
    Ok(edges
        .into_iter()
        .map(|(child, parent)| Triple::authored(child, EdgeLabel::SubClassOf, parent))
        .collect())
}

/// Returns the members of some cycle in the directed edge list, in edge order.
pub(crate) fn find_cycle(edges: &[(NodeRef, NodeRef)]) -> Option<Vec<NodeRef>> {
    let mut succ: BTreeMap<&NodeRef, Vec<&NodeRef>> = BTreeMap::new();
    for (a, b) in edges {
        succ.entry(a).or_default().push(b);
    }
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Active,
        Done,
    }
    let mut marks: BTreeMap<&NodeRef, Mark> = BTreeMap::new();
    for &start in succ.keys() {
        if marks.contains_key(start) {
            continue;
        }
        // iterative DFS: (node, next child index)
        let mut path: Vec<(&NodeRef, usize)> = vec![(start, 0)];
        marks.insert(start, Mark::Active);
        while let Some(&mut (node, ref mut next)) = path.last_mut() {
            let children = succ.get(node).map(Vec::as_slice).unwrap_or(&[]);
            if let Some(&child) = children.get(*next) {
                *next += 1;
                match marks.get(child) {
                    Some(Mark::Active) => {
                        let pos = path.iter().position(|(n, _)| *n == child).unwrap_or(0);
                        return Some(path[pos..].iter().map(|(n, _)| (*n).clone()).collect());
                    }
                    Some(Mark::Done) => {}
                    None => {
                        marks.insert(child, Mark::Active);
                        path.push((child, 0));
                    }
                }
            } else {
                marks.insert(node, Mark::Done);
                path.pop();
            }
        }
    }
    None
}

/// Links consecutive descriptions with `nextPage`; questions are skipped.
pub fn extract_descriptions(doc: &CorpusDocument) -> Vec<Triple> {
    let descriptions: Vec<&ContentBlock> = doc.descriptions().collect();
    descriptions
        .windows(2)
        .map(|w| Triple::authored(w[0].block_id.clone(), EdgeLabel::NextPage, w[1].block_id.clone()))
        .collect()
}

/// `(description, typeOf, topic)` for every enclosing topic.
pub fn link_topics(doc: &CorpusDocument) -> Result<Vec<Triple>, IngestError> {
    let known = doc.topics();
    let mut out = Vec::new();
    for block in doc.descriptions() {
        for topic in &block.enclosing_topics {
            if !known.contains(topic) {
                return Err(IngestError::UnknownTopic {
                    block: block.block_id.clone(),
                    topic: topic.clone(),
                });
            }
            out.push(Triple::authored(
                block.block_id.clone(),
                EdgeLabel::TypeOf,
                topic.clone(),
            ));
        }
    }
    Ok(out)
}

/// `(question, isQuestionOf, description)` per target. Targets are resolved
/// at corpus level by [`compile_corpus`].
pub fn extract_questions(doc: &CorpusDocument) -> Vec<Triple> {
    doc.questions()
        .flat_map(|q| {
            q.question_targets
                .iter()
                .map(move |d| Triple::authored(q.block_id.clone(), EdgeLabel::IsQuestionOf, d.clone()))
        })
        .collect()
}

/// Name spans and concept links.
pub fn extract_annotations(doc: &CorpusDocument) -> Result<Vec<Triple>, IngestError> {
    let mut out = Vec::new();
    for block in &doc.blocks {
        for (name, _) in &block.name_spans {
            out.push(Triple::authored(
                name.clone(),
                EdgeLabel::FromDescription,
                block.block_id.clone(),
            ));
        }
        for (subject, concept) in &block.concept_refs {
            if !matches!(subject.namespace(), Namespace::Dsc | Namespace::Name) {
                return Err(IngestError::ConceptSubject {
                    subject: subject.to_string(),
                    offset: block.offset,
                });
            }
            out.push(Triple::authored(
                subject.clone(),
                EdgeLabel::IsRelatedTo,
                concept.clone(),
            ));
        }
    }
    Ok(out)
}

/// All authored triples of one document, in procedure order.
pub fn document_triples(doc: &CorpusDocument) -> Result<Vec<Triple>, IngestError> {
    let mut out = extract_topic_hierarchy(doc)?;
    out.extend(extract_descriptions(doc));
    out.extend(link_topics(doc)?);
    out.extend(extract_questions(doc));
    out.extend(extract_annotations(doc)?);
    Ok(out)
}

/// A compiled corpus: the authored graph plus the parsed documents it came
/// from, in input order.
#[derive(Debug, Clone)]
pub struct Corpus {
    pub graph: KnowledgeGraph,
    pub documents: Vec<(String, CorpusDocument)>,
}

impl Corpus {
    /// Markup-free text of every description, for term extraction.
    pub fn description_texts(&self) -> BTreeMap<NodeRef, String> {
        self.blocks()
            .filter(|(_, b)| b.is_description())
            .map(|(_, b)| (b.block_id.clone(), b.text()))
            .collect()
    }

    /// Blocks in book order with the file they came from.
    pub fn blocks(&self) -> impl Iterator<Item = (&str, &ContentBlock)> + '_ {
        self.documents
            .iter()
            .flat_map(|(name, doc)| doc.blocks.iter().map(move |b| (name.as_str(), b)))
    }
}

/// Parses and links every file. Any per-file error aborts with the file name.
pub fn compile_corpus<N, B>(files: &[(N, B)]) -> Result<Corpus, IngestError>
where
    N: AsRef<str>,
    B: AsRef<[u8]>,
{
    if files.is_empty() {
        return Err(IngestError::EmptyCorpus);
    }
    let in_file = |name: &str, e: IngestError| IngestError::InFile {
        file: name.to_string(),
        source: Box::new(e),
    };

    let mut documents = Vec::with_capacity(files.len());
    let mut graph = KnowledgeGraph::new();
    let mut owner: BTreeMap<NodeRef, String> = BTreeMap::new();
    for (name, bytes) in files {
        let name = name.as_ref();
        let doc = parse_document(bytes.as_ref()).map_err(|e| in_file(name, e))?;
        for block in &doc.blocks {
            if let Some(first) = owner.get(&block.block_id) {
                return Err(IngestError::DuplicateAcrossFiles {
                    id: block.block_id.clone(),
                    first_file: first.clone(),
                    second_file: name.to_string(),
                });
            }
            owner.insert(block.block_id.clone(), name.to_string());
        }
        graph.extend(document_triples(&doc).map_err(|e| in_file(name, e))?);
        documents.push((name.to_string(), doc));
    }

    for (name, doc) in &documents {
        for q in doc.questions() {
            for target in &q.question_targets {
                let known = owner.contains_key(target);
                if !known {
                    return Err(in_file(
                        name,
                        IngestError::DanglingQuestionTarget {
                            question: q.block_id.clone(),
                            missing: target.clone(),
                        },
                    ));
                }
            }
        }
    }

    // topic merges across files can close a cycle that no single file has
    let topic_edges: Vec<(NodeRef, NodeRef)> = graph
        .triples_with_label(EdgeLabel::SubClassOf)
        .map(|(a, b)| (a.clone(), b.clone()))
        .collect();
    if let Some(members) = find_cycle(&topic_edges) {
        return Err(IngestError::TopicCycle { members });
    }

    Ok(Corpus { graph, documents })
}
