use grb_core::graphcore::oracle;
use grb_core::roadnet::{ingest_elements, ingest_roadnet, read_elements, synthesize, write_elements, CostWeights, RoadElement};
use grb_core::{NodeId, ReferenceStore};
use proptest::prelude::*;

#[test]
fn city_sized_file() {
    let elements = synthesize(21_000, 30_000, 5);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("roads.csv");
    write_elements(&elements, std::fs::File::create(&path).unwrap()).unwrap();
    assert_eq!(read_elements(std::fs::File::open(&path).unwrap()).unwrap(), elements);

    let net = ingest_roadnet(std::fs::File::open(&path).unwrap(), CostWeights::default()).unwrap();
    assert_eq!(net.dataset.node_count(), 21_000);
    assert_eq!(net.dataset.edge_count(), 30_000);
    assert!(net.dataset.edges.iter().all(|e| e.weight <= 255));

    let store = ReferenceStore::new();
    store.bulk_import(&net.dataset).unwrap();
    for (a, b) in [(0, 10_500), (20_999, 3)] {
        let got = store.shortest_path(NodeId(a), NodeId(b)).unwrap();
        let want = oracle::shortest_path_cost(&net.dataset, NodeId(a), NodeId(b)).unwrap();
        assert_eq!(got.map(|p| p.total_cost), want);
        assert!(want.is_some(), "ring keeps the network connected");
    }
}

fn elements() -> impl Strategy<Value = Vec<RoadElement>> {
    (2usize..30).prop_flat_map(|n| {
        prop::collection::vec((0.0f64..500.0, 0.0f64..5000.0, 0.0f64..1.0, prop::collection::btree_set(0..n, 0..4)), n)
            .prop_map(|rows| {
                rows.into_iter()
                    .enumerate()
                    .map(|(i, (t, d, f, s))| RoadElement {
                        id: format!("e{i}"),
                        successors: s.into_iter().map(|j| format!("e{j}")).collect(),
                        travel_time: t,
                        distance: d,
                        fuel: f,
                    })
                    .collect()
            })
    })
}

proptest! {
    #[test]
    fn counts_and_range(els in elements()) {
        let net = ingest_elements(&els, CostWeights::default()).unwrap();
        prop_assert_eq!(net.dataset.node_count(), els.len());
        prop_assert_eq!(net.dataset.edge_count(), els.iter().map(|e| e.successors.len()).sum::<usize>());
        prop_assert!(net.dataset.edges.iter().all(|e| e.weight <= 255));
    }

    #[test]
    fn time_only_weights_follow_travel_time(els in elements()) {
        let net = ingest_elements(&els, CostWeights::time_only()).unwrap();
        for a in &net.dataset.edges {
            for b in &net.dataset.edges {
                let (ta, tb) = (els[a.from.0 as usize].travel_time, els[b.from.0 as usize].travel_time);
                if ta <= tb {
                    prop_assert!(a.weight <= b.weight);
                }
            }
        }
    }
}
