use algdist::hpart::scale_to_integers;
use algdist::io::hgr::{parse_hgr, write_hgr};
use algdist::relax::jor_sweep;
use algdist::{
    brute_force_matching, edge_distances, greedy_matching, pair_distance, path_growing_matching, relax, DistanceMeta, Graph,
    Hyperedge, Hypergraph, PNorm, RelaxationConfig,
};
use proptest::prelude::*;

fn graph_strategy(max_n: usize, max_m: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n).prop_flat_map(move |n| {
        prop::collection::vec((0..n, 0..n, 0.1f64..10.0), 1..=max_m).prop_filter_map("no proper edge", move |raw| {
            let edges: Vec<_> = raw.into_iter().filter(|(u, v, _)| u != v).collect();
            if edges.is_empty() {
                return None;
            }
            Graph::from_edges(n, edges).ok()
        })
    })
}

fn connected_strategy() -> impl Strategy<Value = Graph> {
    (3usize..30, any::<u64>(), 0usize..40).prop_map(|(n, seed, extra)| algdist::synth::random_connected(n, extra, seed))
}

fn hypergraph_strategy() -> impl Strategy<Value = Hypergraph> {
    (2usize..15).prop_flat_map(|nv| {
        prop::collection::vec((prop::collection::btree_set(0..nv, 1..=nv.min(5)), 1u32..100), 1..20).prop_map(move |edges| {
            let edges = edges
                .into_iter()
                .map(|(pins, w)| Hyperedge {
                    pins: pins.into_iter().collect(),
                    weight: w as f64,
                })
                .collect();
            Hypergraph::new(nv, edges).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn heuristic_matchings_are_maximal_half_approximations(g in graph_strategy(10, 20)) {
        let w = g.edge_weights();
        let best = brute_force_matching(&g, &w).unwrap();
        for m in [greedy_matching(&g, &w).unwrap(), path_growing_matching(&g, &w).unwrap()] {
            prop_assert!(m.is_valid_for(&g));
            prop_assert!(m.weight_original >= 0.5 * best.weight_original - 1e-9);
            prop_assert!(m.weight_original <= best.weight_original + 1e-9);
        }
        prop_assert!(greedy_matching(&g, &w).unwrap().is_maximal_for(&g));
    }

    #[test]
    fn degrees_sum_to_twice_total_weight(g in graph_strategy(30, 60)) {
        let sum: f64 = g.weighted_degrees().iter().sum();
        prop_assert!((sum - 2.0 * g.total_weight()).abs() <= 1e-9 * sum.max(1.0));
        let slots: usize = (0..g.n()).map(|i| g.degree(i)).sum();
        prop_assert_eq!(slots, 2 * g.num_edges());
    }

    #[test]
    fn sweep_fixes_constants_and_commutes_with_shifts(g in connected_strategy(), c in -5.0f64..5.0, omega in 0.05f64..1.95) {
        let ones = vec![c; g.n()];
        for v in jor_sweep(&g, &ones, omega).unwrap() {
            prop_assert!((v - c).abs() <= 1e-12 * c.abs().max(1.0));
        }
        let x: Vec<f64> = (0..g.n()).map(|i| ((i * 37) % 11) as f64 / 11.0 - 0.5).collect();
        let shifted: Vec<f64> = x.iter().map(|v| v + c).collect();
        let a = jor_sweep(&g, &x, omega).unwrap();
        let b = jor_sweep(&g, &shifted, omega).unwrap();
        for i in 1..g.n() {
            prop_assert!(((a[i] - a[0]) - (b[i] - b[0])).abs() <= 1e-10);
        }
    }

    #[test]
    fn max_norm_distance_is_a_pseudometric(g in connected_strategy(), seed in any::<u64>()) {
        let it = relax(&g, &RelaxationConfig { iterations: 5, runs: 4, seed, ..Default::default() }).unwrap();
        let n = g.n();
        let (i, j, l) = (0, n / 2, n - 1);
        let d = |a, b| pair_distance(&it, a, b, PNorm::Infinity).unwrap();
        prop_assert!(d(i, j) <= d(i, l) + d(l, j) + 1e-15);
        prop_assert_eq!(d(i, j), d(j, i));
        prop_assert_eq!(d(i, i), 0.0);
        let p1 = pair_distance(&it, i, j, PNorm::Finite(1.0)).unwrap();
        let p2 = pair_distance(&it, i, j, PNorm::Finite(2.0)).unwrap();
        prop_assert!(d(i, j) <= p2 + 1e-15 && p2 <= p1 + 1e-15);
    }

    #[test]
    fn integer_scaling_keeps_weight_order(ws in prop::collection::vec(0.0f64..1e3, 1..50)) {
        let scaled = scale_to_integers(&ws).unwrap();
        prop_assert!(scaled.iter().all(|&s| (1..=1_000_000).contains(&s)));
        for a in 0..ws.len() {
            for b in 0..ws.len() {
                if ws[a] < ws[b] {
                    prop_assert!(scaled[a] <= scaled[b]);
                }
            }
        }
    }

    #[test]
    fn hgr_round_trip(h in hypergraph_strategy()) {
        let mut bytes = Vec::new();
        write_hgr(&h, &mut bytes).unwrap();
        let text = String::from_utf8(bytes).unwrap();
        let back = parse_hgr(&text, "prop").unwrap();
        prop_assert_eq!(&back, &h);
        let mut again = Vec::new();
        write_hgr(&back, &mut again).unwrap();
        prop_assert_eq!(text.as_bytes(), &again[..]);
    }
}

#[test]
fn distances_do_not_depend_on_worker_count() {
    let g = algdist::synth::banded(12_000, 3, 30, 5);
    let cfg = RelaxationConfig {
        seed: 99,
        ..Default::default()
    };
    let meta = DistanceMeta {
        iterations: cfg.iterations,
        runs: cfg.runs,
        p: PNorm::Infinity,
        omega: cfg.omega,
        seed: cfg.seed,
    };
    let run = |threads| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| edge_distances(&g, &relax(&g, &cfg).unwrap(), PNorm::Infinity, meta.clone()).unwrap())
    };
    let one = run(1);
    for threads in [2, 3, 8] {
        let other = run(threads);
        assert!(one.values.iter().zip(&other.values).all(|(a, b)| a.to_bits() == b.to_bits()));
    }
}
