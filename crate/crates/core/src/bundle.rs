//! Content bundle: the HTML value and page anchor of each topic, description
//! and question, in book order.
//!
//! File format: one record per line, `node<TAB>anchor<TAB>html`, with anchor
//! and html percent-encoded so neither can contain a tab or line break.

use std::collections::HashMap;

use percent_encoding::{percent_decode_str, utf8_percent_encode, AsciiSet, CONTROLS};
use serde::Serialize;
use thiserror::Error;

use crate::graph::{NodeRef, ParseNodeRefError};
use crate::html;
use crate::ingest::Corpus;

const FIELD: &AsciiSet = &CONTROLS.add(b'%');

#[derive(Debug, Error)]
pub enum BundleError {
    #[error("bundle line {line}: expected 3 tab-separated fields, found {found}")]
    FieldCount { line: usize, found: usize },
    #[error("bundle line {line}: {source}")]
    Node {
        line: usize,
        #[source]
        source: ParseNodeRefError,
    },
    #[error("bundle line {line}: field is not valid percent-encoded UTF-8")]
    Encoding { line: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BundleRecord {
    pub node: NodeRef,
    /// `<file>#<element id>`.
    pub anchor: String,
    pub html: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ContentBundle {
    records: Vec<BundleRecord>,
    index: HashMap<NodeRef, usize>,
}

impl ContentBundle {
    /// Keeps the first record for each node.
    pub fn push(&mut self, record: BundleRecord) -> bool {
        if self.index.contains_key(&record.node) {
            return false;
        }
        self.index.insert(record.node.clone(), self.records.len());
        self.records.push(record);
        true
    }

    /// Topics and blocks of every document, each document in source order.
    pub fn from_corpus(corpus: &Corpus) -> ContentBundle {
        let mut bundle = ContentBundle::default();
        for (file, doc) in &corpus.documents {
            let mut items: Vec<(usize, BundleRecord)> = Vec::new();
            for topic in &doc.topic_tree {
                let element_id = html::parse(&topic.html)
                    .children
                    .iter()
                    .find_map(|n| match n {
                        html::Node::Element(e) => e.attr("id").map(str::to_string),
                        html::Node::Text(_) => None,
                    })
                    .unwrap_or_else(|| topic.topic.to_string());
                items.push((
                    topic.offset,
                    BundleRecord {
                        node: topic.topic.clone(),
                        anchor: format!("{file}#{element_id}"),
                        html: topic.html.clone(),
                    },
                ));
            }
            for block in &doc.blocks {
                items.push((
                    block.offset,
                    BundleRecord {
                        node: block.block_id.clone(),
                        anchor: format!("{file}#{}", block.anchor),
                        html: block.html_value.clone(),
                    },
                ));
            }
            items.sort_by_key(|(offset, _)| *offset);
            for (_, record) in items {
                bundle.push(record);
            }
        }
        bundle
    }

    pub fn records(&self) -> &[BundleRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn get(&self, node: &NodeRef) -> Option<&BundleRecord> {
        self.index.get(node).map(|&i| &self.records[i])
    }

    /// Position of `node` in book order.
    pub fn position(&self, node: &NodeRef) -> Option<usize> {
        self.index.get(node).copied()
    }

    /// First `max_chars` characters of the node's text, markup removed.
    pub fn preview(&self, node: &NodeRef, max_chars: usize) -> Option<String> {
        self.get(node)
            .map(|r| html::strip_tags(&r.html).chars().take(max_chars).collect())
    }

    pub fn to_bundle_string(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&r.node.to_string());
            out.push('\t');
            out.extend(utf8_percent_encode(&r.anchor, FIELD));
            out.push('\t');
            out.extend(utf8_percent_encode(&r.html, FIELD));
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<ContentBundle, BundleError> {
        let mut bundle = ContentBundle::default();
        for (idx, line) in text.lines().enumerate() {
            let line_no = idx + 1;
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 3 {
                return Err(BundleError::FieldCount {
                    line: line_no,
                    found: fields.len(),
                });
            }
            let node = NodeRef::parse(fields[0]).map_err(|source| BundleError::Node { line: line_no, source })?;
            let decode = |s: &str| {
                percent_decode_str(s)
                    .decode_utf8()
                    .map(|c| c.into_owned())
                    .map_err(|_| BundleError::Encoding { line: line_no })
            };
            bundle.push(BundleRecord {
                node,
                anchor: decode(fields[1])?,
                html: decode(fields[2])?,
            });
        }
        Ok(bundle)
    }
}
