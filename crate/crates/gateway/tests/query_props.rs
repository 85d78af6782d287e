mod common;

use std::sync::OnceLock;

use proptest::prelude::*;
use textgraph_core::{ContainerKind, Namespace, NodeRef, SeedDistribution, WalkParams};
use textgraph_gateway::{Library, QueryRequest};

fn library() -> &'static Library {
    static LIB: OnceLock<Library> = OnceLock::new();
    LIB.get_or_init(|| {
        let dir = tempfile::tempdir().unwrap();
        let (snap, bundle) = common::built(dir.path());
        Library::load(snap.as_ref(), bundle.as_ref()).unwrap()
    })
}

fn descriptions() -> Vec<NodeRef> {
    library().graph.nodes_in_namespace(Namespace::Dsc).cloned().collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn service_agrees_with_the_chain(
        picks in prop::collection::vec(any::<prop::sample::Index>(), 1..4),
        kind in 0usize..5,
        k in 1usize..15,
        gamma in 0.05f64..=1.0,
        d_max in 1usize..12,
    ) {
        let lib = library();
        let pool = descriptions();
        let seeds: Vec<NodeRef> = picks.iter().map(|i| i.get(&pool).clone()).collect();
        let target = ContainerKind::ALL[kind];
        let req = QueryRequest {
            seeds: seeds.iter().map(NodeRef::to_string).collect(),
            target_kind: target.as_str().to_string(),
            k: Some(k),
            gamma: Some(gamma),
            d_max: Some(d_max),
        };
        let first = lib.query(&req).unwrap();
        prop_assert_eq!(&first, &lib.query(&req).unwrap());
        prop_assert!(first.entries.len() <= k);

        let params = WalkParams::new(gamma, d_max).unwrap();
        let direct = lib
            .chain
            .typed_query(&SeedDistribution::from_nodes(&seeds).unwrap(), target, k, &params)
            .unwrap();
        prop_assert_eq!(first.entries.len(), direct.len());
        for (i, (hit, e)) in first.entries.iter().zip(&direct.entries).enumerate() {
            prop_assert_eq!(hit.rank, i + 1);
            prop_assert_eq!(&hit.id, &e.node.to_string());
            prop_assert_eq!(hit.score, e.score);
        }
    }
}
