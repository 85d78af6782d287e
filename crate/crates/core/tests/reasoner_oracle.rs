mod support;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use support::{graph_from, naive_saturate, random_reasoner_graph, str_triples, StrTriple};
use textgraph_core::graph::{EdgeLabel, Provenance};
use textgraph_core::reasoner::saturate;

#[test]
fn random_graphs_match_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut cyclic = 0;
    for _ in 0..200 {
        let triples = random_reasoner_graph(&mut rng, 30);
        let oracle = naive_saturate(&triples);
        let got = saturate(&graph_from(&triples));
        match (oracle, got) {
            (Ok(expected), Ok(g)) => assert_eq!(str_triples(&g), expected, "input {triples:?}"),
            (Err(()), Err(_)) => cyclic += 1,
            (o, g) => panic!("oracle {:?} vs reasoner {:?} on {triples:?}", o.is_ok(), g.is_ok()),
        }
    }
    assert!(cyclic > 0 && cyclic < 100, "cyclic samples: {cyclic}");
}

fn arb_graph() -> impl Strategy<Value = Vec<StrTriple>> {
    any::<u64>().prop_map(|seed| random_reasoner_graph(&mut ChaCha8Rng::seed_from_u64(seed), 30))
}

proptest! {
    #[test]
    fn fixpoint_invariants(triples in arb_graph()) {
        let g = graph_from(&triples);
        let Ok(sat) = saturate(&g) else { return Ok(()); };

        // monotone, with authored provenance preserved
        for t in g.triples() {
            prop_assert_eq!(sat.provenance(&t.subject, t.predicate, &t.object), Some(Provenance::Authored));
        }
        prop_assert!(sat.triples().filter(|t| t.provenance == Provenance::Inferred).count() == sat.triple_count() - g.triple_count());

        for t in sat.triples() {
            prop_assert!(sat.contains(&t.object, t.predicate.inverse(), &t.subject));
            if t.predicate == EdgeLabel::TypeOf {
                for up in sat.neighbors(&t.object, EdgeLabel::SubClassOf) {
                    prop_assert!(up == t.subject || sat.contains(&t.subject, EdgeLabel::TypeOf, &up));
                }
            }
            if t.predicate == EdgeLabel::SubClassOf {
                prop_assert_ne!(&t.subject, &t.object);
            }
        }

        prop_assert_eq!(saturate(&sat).unwrap(), sat.clone());
        prop_assert!(sat.indexes_consistent());
    }

    #[test]
    fn insertion_order_does_not_matter(triples in arb_graph(), rot in 0usize..30) {
        let mut rotated = triples.clone();
        let k = rot % rotated.len().max(1);
        rotated.rotate_left(k);
        rotated.reverse();
        let a = saturate(&graph_from(&triples));
        let b = saturate(&graph_from(&rotated));
        prop_assert_eq!(a.is_ok(), b.is_ok());
        if let (Ok(a), Ok(b)) = (a, b) {
            prop_assert_eq!(a, b);
        }
    }
}
