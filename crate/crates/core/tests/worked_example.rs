mod support;

use std::collections::BTreeSet;

use support::{fixture, naive_saturate, str_triples, StrTriple, WORKED_EXAMPLE};
use textgraph_core::graph::{EdgeLabel, NodeRef, Provenance};
use textgraph_core::ingest::{self, compile_corpus, parse_document};
use textgraph_core::reasoner::{self, materialize_inverses, subclass_closure, type_propagation};
use textgraph_core::walk::build_chain;
use textgraph_core::KnowledgeGraph;

fn n(s: &str) -> NodeRef {
    NodeRef::parse(s).unwrap()
}

fn worked_example() -> BTreeSet<StrTriple> {
    WORKED_EXAMPLE
        .iter()
        .map(|(s, p, o)| (s.to_string(), p.to_string(), o.to_string()))
        .collect()
}

fn authored() -> KnowledgeGraph {
    compile_corpus(&[("turing.html", fixture("turing.html"))])
        .unwrap()
        .graph
}

#[test]
fn html_fixture_emits_exactly_the_listed_triples() {
    let g = authored();
    assert_eq!(str_triples(&g), worked_example());
    assert_eq!(g.triple_count(), 14);
    assert_eq!(g.node_count(), 11);
    assert!(g.triples().all(|t| t.provenance == Provenance::Authored));
}

#[test]
fn per_procedure_counts() {
    let doc = parse_document(fixture("turing.html").as_bytes()).unwrap();
    assert_eq!(doc.title, "Chapter 1: Introduction");
    assert_eq!(ingest::extract_topic_hierarchy(&doc).unwrap().len(), 5);
    let chain = ingest::extract_descriptions(&doc);
    assert_eq!(chain.len(), 4);
    assert_eq!(chain[3].subject, n("dsc:VonNeumannmodel"));
    assert_eq!(chain[3].object, n("dsc:FourSubsystems"));
    let typed = ingest::link_topics(&doc).unwrap();
    assert_eq!(typed.len(), 5);
    assert!(typed
        .iter()
        .any(|t| t.subject == n("dsc:FourSubsystems") && t.object == n("topic:Subsystems")));
}

#[test]
fn adding_listing_by_hand_gives_same_graph() {
    let mut g = KnowledgeGraph::new();
    for (s, p, o) in WORKED_EXAMPLE {
        g.add_parsed(s, p, o, Provenance::Authored).unwrap();
    }
    assert_eq!(g.triple_count(), 14);
    assert_eq!(g.node_count(), 11);
    assert_eq!(g, authored());
}

#[test]
fn readbacks_before_inference() {
    let g = authored();
    assert_eq!(
        g.out_labels(&n("dsc:Turing_model")),
        [EdgeLabel::NextPage, EdgeLabel::TypeOf].into_iter().collect()
    );
    assert!(g
        .neighbors(&n("topic:Turing_model"), EdgeLabel::SuperClassOf)
        .is_empty());
}

#[test]
fn closure_adds_three_subclass_edges() {
    let g = authored();
    let closed = subclass_closure(&g).unwrap();
    let added: BTreeSet<StrTriple> = str_triples(&closed).difference(&str_triples(&g)).cloned().collect();
    let expected: BTreeSet<StrTriple> = [
        ("topic:Data_processors", "subClassOf", "topic:Chapter_1"),
        ("topic:Universal_machine", "subClassOf", "topic:Chapter_1"),
        ("topic:Subsystems", "subClassOf", "topic:Chapter_1"),
    ]
    .iter()
    .map(|(s, p, o)| (s.to_string(), p.to_string(), o.to_string()))
    .collect();
    assert_eq!(added, expected);
}

#[test]
fn type_propagation_lifts_descriptions() {
    let closed = subclass_closure(&authored()).unwrap();
    let lifted = type_propagation(&closed).unwrap();
    for (d, t) in [
        ("dsc:Data_processors", "topic:Turing_model"),
        ("dsc:Data_processors", "topic:Chapter_1"),
        ("dsc:Turing_model", "topic:Chapter_1"),
        ("dsc:FourSubsystems", "topic:Von_Neumann_model"),
    ] {
        assert_eq!(
            lifted.provenance(&n(d), EdgeLabel::TypeOf, &n(t)),
            Some(Provenance::Inferred),
            "{d} typeOf {t}"
        );
    }
    // 5 authored + 8 lifted
    assert_eq!(lifted.triples_with_label(EdgeLabel::TypeOf).count(), 13);
}

#[test]
fn saturation_matches_naive_oracle() {
    let g = authored();
    let saturated = reasoner::saturate(&g).unwrap();
    let input: Vec<StrTriple> = worked_example().into_iter().collect();
    let oracle = naive_saturate(&input).unwrap();
    assert_eq!(str_triples(&saturated), oracle);
    // 8 subClassOf + 13 typeOf + 4 nextPage, doubled by inverses
    assert_eq!(saturated.triple_count(), 50);
    assert_eq!(saturated.node_count(), 11);

    let chapter_members = saturated.neighbors(&n("topic:Chapter_1"), EdgeLabel::HasInstance);
    let expected: Vec<NodeRef> = [
        "dsc:Data_processors",
        "dsc:FourSubsystems",
        "dsc:Turing_model",
        "dsc:Universalturingmachine",
        "dsc:VonNeumannmodel",
    ]
    .iter()
    .map(|s| n(s))
    .collect();
    assert_eq!(chapter_members, expected);
    assert_eq!(
        saturated.neighbors(&n("dsc:Data_processors"), EdgeLabel::PrevPage),
        vec![n("dsc:Turing_model")]
    );
    assert!(saturated.triples().all(|t| (t.provenance == Provenance::Authored)
        == worked_example().contains(&(t.subject.to_string(), t.predicate.to_string(), t.object.to_string()))));
}

#[test]
fn chain_covers_saturated_fixture() {
    let saturated = reasoner::saturate(&authored()).unwrap();
    let chain = build_chain(&saturated);
    assert_eq!(chain.len(), saturated.node_count());
    assert!(chain.nodes().iter().all(|x| chain.is_dangling(x) == Some(false)));
}

#[test]
fn inverse_materialization_alone() {
    let inv = materialize_inverses(&authored());
    assert_eq!(inv.triple_count(), 28);
    assert_eq!(
        inv.neighbors(&n("topic:Turing_model"), EdgeLabel::SuperClassOf),
        vec![n("topic:Data_processors"), n("topic:Universal_machine")]
    );
}
