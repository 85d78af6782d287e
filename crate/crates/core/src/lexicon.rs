//! Automatic term extraction and word linkages.
//!
//! Every distinct token of a description's text becomes a `term:` node linked
//! to that description with `dicTermFor`.

use std::collections::{BTreeMap, HashSet};

use crate::graph::{EdgeLabel, KnowledgeGraph, Namespace, NodeRef, Provenance, Triple};

/// The built-in English stopword list, one word per line.
pub const DEFAULT_STOPWORDS: &str = include_str!("../data/stopwords.txt");

pub const MIN_TOKEN_LEN: usize = 3;

#[derive(Debug, Clone)]
pub struct Lexicon {
    stopwords: HashSet<String>,
}

impl Default for Lexicon {
    fn default() -> Self {
        Lexicon::from_stopwords(DEFAULT_STOPWORDS)
    }
}

impl Lexicon {
    /// Builds a lexicon from a stopword file: one word per line, blank lines
    /// ignored, compared case-insensitively.
    pub fn from_stopwords(list: &str) -> Lexicon {
        Lexicon {
            stopwords: list
                .lines()
                .map(|l| l.trim().to_lowercase())
                .filter(|l| !l.is_empty())
                .collect(),
        }
    }

    pub fn is_stopword(&self, word: &str) -> bool {
        self.stopwords.contains(word)
    }

    /// Distinct lowercase tokens in order of first occurrence.
    pub fn tokenize(&self, text: &str) -> Vec<String> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        let words = text
            .split(|c: char| !(c.is_ascii_alphanumeric() || c == '-'))
            .map(|w| w.trim_matches('-').to_ascii_lowercase());
        for word in words {
            if word.len() < MIN_TOKEN_LEN || self.is_stopword(&word) {
                continue;
            }
            if seen.insert(word.clone()) {
                out.push(word);
            }
        }
        out
    }

    /// Adds `(term:t, dicTermFor, d)` for every token `t` of each
    /// description's text. Non-description keys are ignored. Returns the
    /// number of triples added.
    pub fn link_terms(&self, g: &mut KnowledgeGraph, values: &BTreeMap<NodeRef, String>) -> usize {
        let mut added = 0;
        for (description, text) in values {
            if description.namespace() != Namespace::Dsc {
                continue;
            }
            for token in self.tokenize(text) {
                let term =
                    NodeRef::new(Namespace::Term, &token).expect("tokens are non-empty and free of ':' and whitespace");
                let t = Triple::new(term, EdgeLabel::DicTermFor, description.clone(), Provenance::Lexical);
                if g.add_triple(t) {
                    added += 1;
                }
            }
        }
        added
    }
}

/// [`Lexicon::tokenize`] with the built-in stopwords.
pub fn tokenize(text: &str) -> Vec<String> {
    Lexicon::default().tokenize(text)
}

/// [`Lexicon::link_terms`] with the built-in stopwords.
pub fn link_terms(g: &KnowledgeGraph, values: &BTreeMap<NodeRef, String>) -> KnowledgeGraph {
    let mut out = g.clone();
    Lexicon::default().link_terms(&mut out, values);
    out
}
