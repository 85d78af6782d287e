//! Triple snapshot files.
//!
//! One triple per line, `subject<TAB>predicate<TAB>object<TAB>provenance`,
//! lines sorted by byte order. Lines starting with `#` and blank lines are
//! ignored on read. Nodes without edges are not representable.

use std::io::{self, BufRead, Write};

use thiserror::Error;

use crate::graph::{GraphError, KnowledgeGraph, Provenance, Triple};

#[derive(Debug, Error)]
pub enum SnapshotError {
    #[error("snapshot line {line}: expected 4 tab-separated fields, found {found}")]
    FieldCount { line: usize, found: usize },
    #[error("snapshot line {line}: {source}")]
    Parse {
        line: usize,
        #[source]
        source: GraphError,
    },
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Renders the graph as sorted snapshot lines, each terminated by `\n`.
pub fn to_snapshot_string(g: &KnowledgeGraph) -> String {
    let mut lines: Vec<String> = g
        .triples()
        .map(|t| format!("{}\t{}\t{}\t{}", t.subject, t.predicate, t.object, t.provenance))
        .collect();
    lines.sort_unstable();
    let mut out = String::with_capacity(lines.iter().map(|l| l.len() + 1).sum());
    for line in lines {
        out.push_str(&line);
        out.push('\n');
    }
    out
}

pub fn write_snapshot<W: Write>(g: &KnowledgeGraph, mut w: W) -> io::Result<()> {
    w.write_all(to_snapshot_string(g).as_bytes())?;
    w.flush()
}

pub fn read_snapshot<R: BufRead>(r: R) -> Result<KnowledgeGraph, SnapshotError> {
    let mut g = KnowledgeGraph::new();
    for (idx, line) in r.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 4 {
            return Err(SnapshotError::FieldCount {
                line: lineno,
                found: fields.len(),
            });
        }
        let parse = || -> Result<Triple, GraphError> {
            let prov: Provenance = fields[3].parse()?;
            Triple::parse(fields[0], fields[1], fields[2], prov)
        };
        let t = parse().map_err(|source| SnapshotError::Parse { line: lineno, source })?;
        g.add_triple(t);
    }
    Ok(g)
}

pub fn parse_snapshot(text: &str) -> Result<KnowledgeGraph, SnapshotError> {
    read_snapshot(text.as_bytes())
}
