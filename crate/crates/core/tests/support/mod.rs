//! Test-only oracles and generators. Nothing here calls into the reasoner or
//! the walk engine: the oracles work on plain string triples.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use textgraph_core::{KnowledgeGraph, Provenance, Triple};

pub type StrTriple = (String, String, String);

pub const FIXTURE_DIR: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/fixtures");

pub fn fixture(name: &str) -> String {
    std::fs::read_to_string(format!("{FIXTURE_DIR}/{name}")).unwrap()
}

pub fn fixture_corpus() -> Vec<(String, String)> {
    ["ch1_introduction.html", "ch2_number_systems.html"]
        .iter()
        .map(|f| (f.to_string(), fixture(&format!("corpus/{f}"))))
        .collect()
}

/// The fourteen triples of the worked chapter-one example.
pub const WORKED_EXAMPLE: [(&str, &str, &str); 14] = [
    ("topic:Turing_model", "subClassOf", "topic:Chapter_1"),
    ("topic:Von_Neumann_model", "subClassOf", "topic:Chapter_1"),
    ("topic:Data_processors", "subClassOf", "topic:Turing_model"),
    ("topic:Universal_machine", "subClassOf", "topic:Turing_model"),
    ("topic:Subsystems", "subClassOf", "topic:Von_Neumann_model"),
    ("dsc:Turing_model", "nextPage", "dsc:Data_processors"),
    ("dsc:Data_processors", "nextPage", "dsc:Universalturingmachine"),
    ("dsc:Universalturingmachine", "nextPage", "dsc:VonNeumannmodel"),
    ("dsc:VonNeumannmodel", "nextPage", "dsc:FourSubsystems"),
    ("dsc:Turing_model", "typeOf", "topic:Turing_model"),
    ("dsc:Data_processors", "typeOf", "topic:Data_processors"),
    ("dsc:Universalturingmachine", "typeOf", "topic:Universal_machine"),
    ("dsc:VonNeumannmodel", "typeOf", "topic:Von_Neumann_model"),
    ("dsc:FourSubsystems", "typeOf", "topic:Subsystems"),
];

pub fn str_triples(g: &KnowledgeGraph) -> BTreeSet<StrTriple> {
    g.triples()
        .map(|t| (t.subject.to_string(), t.predicate.to_string(), t.object.to_string()))
        .collect()
}

pub fn graph_from(triples: &[StrTriple]) -> KnowledgeGraph {
    let mut g = KnowledgeGraph::new();
    for (s, p, o) in triples {
        g.add_triple(Triple::parse(s, p, o, Provenance::Authored).unwrap());
    }
    g
}

const INVERSE_PAIRS: [(&str, &str); 7] = [
    ("subClassOf", "superClassOf"),
    ("typeOf", "hasInstance"),
    ("nextPage", "prevPage"),
    ("isQuestionOf", "hasQuestion"),
    ("fromDescription", "hasName"),
    ("isRelatedTo", "relatedFrom"),
    ("dicTermFor", "hasDicTerm"),
];

fn inverse_of(label: &str) -> String {
    for (a, b) in INVERSE_PAIRS {
        if label == a {
            return b.to_string();
        }
        if label == b {
            return a.to_string();
        }
    }
    panic!("unknown label {label}")
}

/// Applies any rule to any matching pair of triples until nothing changes.
/// `Err` when a reflexive `subClassOf` triple becomes derivable.
pub fn naive_saturate(input: &[StrTriple]) -> Result<BTreeSet<StrTriple>, ()> {
    let mut facts: BTreeSet<StrTriple> = input.iter().cloned().collect();
    loop {
        let snapshot: Vec<StrTriple> = facts.iter().cloned().collect();
        let mut new = Vec::new();
        for (s, p, o) in &snapshot {
            new.push((o.clone(), inverse_of(p), s.clone()));
            for (s2, p2, o2) in &snapshot {
                if p2 != "subClassOf" || s2 != o {
                    continue;
                }
                if p == "subClassOf" {
                    new.push((s.clone(), "subClassOf".into(), o2.clone()));
                }
                if p == "typeOf" && s != o2 {
                    new.push((s.clone(), "typeOf".into(), o2.clone()));
                }
            }
        }
        let before = facts.len();
        facts.extend(new);
        if facts.iter().any(|(s, p, o)| p == "subClassOf" && s == o) {
            return Err(());
        }
        if facts.len() == before {
            return Ok(facts);
        }
    }
}

/// Stop probabilities by summing over every labeled path of length `d`
/// (1 ≤ d ≤ d_max), each weighted `gamma (1-gamma)^d` times its probability.
/// Nodes without outgoing edges keep the walker in place.
pub fn path_enumeration_scores(
    edges: &[StrTriple],
    seed: &BTreeMap<String, f64>,
    gamma: f64,
    d_max: usize,
) -> BTreeMap<String, f64> {
    let mut out_edges: BTreeMap<&str, BTreeMap<&str, BTreeSet<&str>>> = BTreeMap::new();
    for (s, p, o) in edges {
        out_edges.entry(s).or_default().entry(p).or_default().insert(o);
    }
    fn walk<'a>(
        out_edges: &BTreeMap<&'a str, BTreeMap<&'a str, BTreeSet<&'a str>>>,
        at: &'a str,
        steps_left: usize,
        prob: f64,
        sink: &mut BTreeMap<String, f64>,
    ) {
        if steps_left == 0 {
            *sink.entry(at.to_string()).or_insert(0.0) += prob;
            return;
        }
        match out_edges.get(at) {
            Some(labels) if !labels.is_empty() => {
                let pl = 1.0 / labels.len() as f64;
                for targets in labels.values() {
                    let py = 1.0 / targets.len() as f64;
                    for y in targets {
                        walk(out_edges, y, steps_left - 1, prob * pl * py, sink);
                    }
                }
            }
            _ => walk(out_edges, at, steps_left - 1, prob, sink),
        }
    }
    let mut scores = BTreeMap::new();
    for d in 1..=d_max {
        let weight = gamma * (1.0 - gamma).powi(d as i32);
        let mut at_d = BTreeMap::new();
        for (x, v) in seed {
            walk(&out_edges, x, d, *v, &mut at_d);
        }
        for (z, p) in at_d {
            *scores.entry(z).or_insert(0.0) += weight * p;
        }
    }
    scores
}

const NODE_POOL: [&str; 12] = [
    "dsc:a",
    "dsc:b",
    "dsc:c",
    "q:x",
    "q:y",
    "topic:t",
    "topic:u",
    "name:n",
    "concept:k",
    "term:w",
    "topic:v",
    "dsc:d",
];

const LABEL_POOL: [&str; 14] = [
    "subClassOf",
    "superClassOf",
    "typeOf",
    "hasInstance",
    "nextPage",
    "prevPage",
    "isQuestionOf",
    "hasQuestion",
    "fromDescription",
    "hasName",
    "isRelatedTo",
    "relatedFrom",
    "dicTermFor",
    "hasDicTerm",
];

/// Random labeled graph with at most `max_nodes` nodes and `max_labels`
/// distinct labels.
pub fn random_labeled_graph(rng: &mut ChaCha8Rng, max_nodes: usize, max_labels: usize) -> Vec<StrTriple> {
    let n_nodes = rng.gen_range(2..=max_nodes.min(NODE_POOL.len()));
    let n_labels = rng.gen_range(1..=max_labels);
    let mut nodes = NODE_POOL.to_vec();
    nodes.shuffle(rng);
    nodes.truncate(n_nodes);
    let mut labels = LABEL_POOL.to_vec();
    labels.shuffle(rng);
    labels.truncate(n_labels);
    let n_edges = rng.gen_range(1..=n_nodes * 3);
    let mut out = BTreeSet::new();
    for _ in 0..n_edges {
        let s = nodes.choose(rng).unwrap();
        let o = nodes.choose(rng).unwrap();
        let p = labels.choose(rng).unwrap();
        out.insert((s.to_string(), p.to_string(), o.to_string()));
    }
    out.into_iter().collect()
}

/// Random graph of at most `max_triples` triples biased toward the labels the
/// reasoner acts on, with subclass edges mostly pointing "down" the pool so
/// most samples are acyclic.
pub fn random_reasoner_graph(rng: &mut ChaCha8Rng, max_triples: usize) -> Vec<StrTriple> {
    let topics = ["topic:t0", "topic:t1", "topic:t2", "topic:t3", "topic:t4", "topic:t5"];
    let descs = ["dsc:d0", "dsc:d1", "dsc:d2", "dsc:d3"];
    let others = ["q:q0", "q:q1", "name:n0", "concept:c0", "term:w0"];
    let n = rng.gen_range(1..=max_triples);
    let mut out = BTreeSet::new();
    for _ in 0..n {
        let t = match rng.gen_range(0..10) {
            0..=3 => {
                let i = rng.gen_range(0..topics.len());
                let j = rng.gen_range(0..topics.len());
                // occasional upward edge to produce cycles
                let (a, b) = if rng.gen_bool(0.93) {
                    (i.max(j), i.min(j))
                } else {
                    (i.min(j), i.max(j))
                };
                if a == b && rng.gen_bool(0.8) {
                    continue;
                }
                (topics[a].to_string(), "subClassOf".to_string(), topics[b].to_string())
            }
            4..=6 => (
                descs.choose(rng).unwrap().to_string(),
                "typeOf".to_string(),
                topics.choose(rng).unwrap().to_string(),
            ),
            _ => {
                let pool: Vec<&str> = topics.iter().chain(&descs).chain(&others).copied().collect();
                (
                    pool.choose(rng).unwrap().to_string(),
                    LABEL_POOL.choose(rng).unwrap().to_string(),
                    pool.choose(rng).unwrap().to_string(),
                )
            }
        };
        out.insert(t);
    }
    out.into_iter().collect()
}

const WORDS: [&str; 60] = [
    "memory",
    "processor",
    "binary",
    "decimal",
    "register",
    "cache",
    "network",
    "protocol",
    "packet",
    "router",
    "kernel",
    "process",
    "thread",
    "scheduler",
    "compiler",
    "parser",
    "grammar",
    "token",
    "algorithm",
    "sorting",
    "search",
    "queue",
    "stack",
    "tree",
    "graph",
    "database",
    "relation",
    "query",
    "index",
    "transaction",
    "security",
    "cipher",
    "key",
    "hash",
    "signature",
    "software",
    "design",
    "testing",
    "module",
    "interface",
    "logic",
    "gate",
    "circuit",
    "adder",
    "storage",
    "disk",
    "file",
    "directory",
    "language",
    "program",
    "variable",
    "loop",
    "function",
    "object",
    "class",
    "inheritance",
    "neuron",
    "learning",
    "agent",
    "reasoning",
];

/// A synthetic multi-chapter corpus in the annotation syntax. `chapters` files,
/// each with `sections` h2 topics holding `subsections` h3 topics; every leaf
/// topic gets two descriptions and one question.
pub fn synthetic_corpus(seed: u64, chapters: usize, sections: usize, subsections: usize) -> Vec<(String, String)> {
    use rand::SeedableRng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut files = Vec::new();
    for c in 0..chapters {
        let mut html = String::new();
        let _ = writeln!(html, "<html><body><h1 data-topic-id=\"ch{c}\">Chapter {c}</h1>");
        let mut chapter_descs: Vec<String> = Vec::new();
        for s in 0..sections {
            let _ = writeln!(html, "<h2 data-topic-id=\"ch{c}_s{s}\">Section {c}.{s}</h2>");
            for u in 0..subsections {
                let _ = writeln!(html, "<h3 data-topic-id=\"ch{c}_s{s}_u{u}\">Topic {c}.{s}.{u}</h3>");
                let mut local = Vec::new();
                for k in 0..2 {
                    let id = format!("c{c}s{s}u{u}d{k}");
                    let words: Vec<String> = (0..12)
                        .map(|i| {
                            let w = WORDS.choose(&mut rng).unwrap();
                            if i % 4 == 0 {
                                format!("{w}{}", rng.gen_range(0..40))
                            } else {
                                w.to_string()
                            }
                        })
                        .collect();
                    let _ = writeln!(html, "<div id=\"o:descp:{id}\"><p>The {}.</p></div>", words.join(" "));
                    local.push(id);
                }
                chapter_descs.extend(local.iter().cloned());
                let mut targets = vec![format!("o:descp:{}", local[0])];
                if let Some(other) = chapter_descs.choose(&mut rng) {
                    if other != &local[0] {
                        targets.push(format!("o:descp:{other}"));
                    }
                }
                let _ = writeln!(
                    html,
                    "<p id=\"o:q:c{c}s{s}u{u}\" data-question-of=\"{}\">Explain the {}?</p>",
                    targets.join(","),
                    WORDS.choose(&mut rng).unwrap()
                );
            }
        }
        html.push_str("</body></html>\n");
        files.push((format!("chapter{c:02}.html"), html));
    }
    files
}
