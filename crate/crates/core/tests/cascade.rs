use hatenet_core::cascade::{
    compute_exposures, infection_risk, shuffled_risk, ActivationEvent, Cascade, Population, RiskConfig, RiskPair,
};
use hatenet_core::graph::SocialGraph;
use hatenet_core::{seeds, synth, ActivationKind, Direction};
use proptest::prelude::*;

fn events(raw: &[(u32, i64, bool)], n: u32) -> Vec<ActivationEvent> {
    raw.iter()
        .map(|&(u, t, hate)| ActivationEvent {
            user: u % n,
            time: t,
            kind: if hate {
                ActivationKind::Hate
            } else {
                ActivationKind::Counterspeech
            },
            tweet_id: String::new(),
        })
        .collect()
}

fn all_nodes() -> RiskConfig {
    RiskConfig {
        population: Population::AllNodes,
        ..RiskConfig::default()
    }
}

proptest! {
    #[test]
    fn exposed_sets_shrink_with_n(
        n in 2u32..30,
        edges in prop::collection::vec((0u32..30, 0u32..30), 0..150),
        raw in prop::collection::vec((0u32..30, 0i64..20, any::<bool>()), 1..40),
    ) {
        let edges: Vec<(u32, u32)> = edges.into_iter().map(|(u, v)| (u % n, v % n)).filter(|(u, v)| u != v).collect();
        let g = SocialGraph::from_index_edges(n as usize, &edges);
        let cascade = Cascade::new(events(&raw, n), 20);
        if let Ok(curve) = infection_risk(&g, &cascade, RiskPair::HATE_HATE, 6, &all_nodes()) {
            for w in curve.levels.windows(2) {
                prop_assert!(w[1].exposed <= w[0].exposed);
                prop_assert!(w[1].infected <= w[0].infected);
            }
            for l in &curve.levels {
                prop_assert!(l.infected <= l.exposed);
                if let Some(r) = l.risk {
                    prop_assert!((0.0..=1.0).contains(&r));
                }
            }
        }
    }

    #[test]
    fn extra_edge_never_lowers_exposure(
        n in 2u32..20,
        edges in prop::collection::vec((0u32..20, 0u32..20), 0..80),
        extra in (0u32..20, 0u32..20),
        raw in prop::collection::vec((0u32..20, 0i64..10, any::<bool>()), 1..30),
    ) {
        let clean = |e: Vec<(u32, u32)>| -> Vec<(u32, u32)> { e.into_iter().map(|(u, v)| (u % n, v % n)).filter(|(u, v)| u != v).collect() };
        let base = clean(edges.clone());
        let mut more = edges;
        more.push(extra);
        let more = clean(more);
        let cascade = Cascade::new(events(&raw, n), 10);
        for d in [Direction::Out, Direction::In, Direction::Union] {
            let a = compute_exposures(&SocialGraph::from_index_edges(n as usize, &base), &cascade, ActivationKind::Hate, d);
            let b = compute_exposures(&SocialGraph::from_index_edges(n as usize, &more), &cascade, ActivationKind::Hate, d);
            prop_assert!(a.iter().zip(&b).all(|(x, y)| x <= y));
        }
    }

    #[test]
    fn time_shuffle_permutes_times(raw in prop::collection::vec((0u32..50, 0i64..100, any::<bool>()), 0..60), seed: u64) {
        let cascade = Cascade::new(events(&raw, 50), 100);
        let shuffled = cascade.shuffle_times(&mut seeds::rng(seed));
        let sorted = |c: &Cascade| {
            let mut t: Vec<i64> = c.events.iter().map(|e| e.time).collect();
            t.sort();
            let mut k: Vec<(u32, usize)> = c.events.iter().map(|e| (e.user, e.kind.index())).collect();
            k.sort();
            (t, k)
        };
        prop_assert_eq!(sorted(&cascade), sorted(&shuffled));
        prop_assert!(shuffled.events.windows(2).all(|w| w[0].time <= w[1].time));
    }
}

#[test]
fn baseline_is_reproducible_across_thread_counts() {
    let mut g = synth::random_graph(300, 2500, 1.0, 2);
    let cascade = synth::hazard_cascade(&g, &synth::HazardParams::default(), 3);
    synth::categorize_from_cascade(&mut g, &cascade);
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| shuffled_risk(&g, &cascade, RiskPair::HATE_HATE, 3, 12, 77, &RiskConfig::default()).unwrap())
    };
    assert_eq!(run(1), run(4));
}

#[test]
fn single_seed_cascade_exposes_only_followers() {
    // 1 and 2 follow 0; 3 follows 1.
    let g = SocialGraph::from_index_edges(4, &[(1, 0), (2, 0), (3, 1)]);
    let cascade = Cascade::new(events(&[(0, 0, true), (1, 5, true)], 4), 10);
    let e = compute_exposures(&g, &cascade, ActivationKind::Hate, Direction::Out);
    assert_eq!(e, vec![0, 1, 1, 1]);
    let e = compute_exposures(&g, &cascade, ActivationKind::Hate, Direction::In);
    assert_eq!(e, vec![0, 0, 0, 0]);
}
