//! Corpus build: ingest, optional saturation, optional word linkages.

use crate::bundle::ContentBundle;
use crate::graph::KnowledgeGraph;
use crate::ingest::{self, Corpus};
use crate::lexicon::Lexicon;
use crate::reasoner::{self, RuleSet};
use crate::Error;

#[derive(Debug, Clone)]
pub struct BuildOptions {
    pub inference: bool,
    pub lexical: bool,
    pub lexicon: Lexicon,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            inference: true,
            lexical: true,
            lexicon: Lexicon::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BuildOutput {
    pub corpus: Corpus,
    pub graph: KnowledgeGraph,
    pub bundle: ContentBundle,
}

/// Compiles `files` (name, bytes) into a graph and content bundle.
///
/// Word linkages are added after saturation; when inference is on, inverse
/// materialization is re-run so every `dicTermFor` edge gets its
/// `hasDicTerm` inverse.
pub fn build<N, B>(files: &[(N, B)], options: &BuildOptions) -> Result<BuildOutput, Error>
where
    N: AsRef<str>,
    B: AsRef<[u8]>,
{
    let corpus = ingest::compile_corpus(files)?;
    let mut graph = corpus.graph.clone();
    if options.inference {
        reasoner::saturate_in_place(&mut graph, &RuleSet::all())?;
    }
    if options.lexical {
        options.lexicon.link_terms(&mut graph, &corpus.description_texts());
        if options.inference {
            reasoner::saturate_in_place(&mut graph, &RuleSet::all())?;
        }
    }
    let bundle = ContentBundle::from_corpus(&corpus);
    Ok(BuildOutput { corpus, graph, bundle })
}
