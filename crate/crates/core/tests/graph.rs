use hatenet_core::graph::{
    connectivity_probabilities, homophily_report, ConnectivityMode, HomophilyConfig, ShuffleConfig, SocialGraph,
};
use hatenet_core::synth::{self, Block};
use hatenet_core::{Direction, UserCategory};
use proptest::prelude::*;

const DIRECTIONS: [Direction; 3] = [Direction::Out, Direction::In, Direction::Union];

proptest! {
    #[test]
    fn defined_rows_sum_to_one(n in 2usize..40, m in 0usize..300, seed: u64, d in 0usize..3, ego: bool) {
        let g = synth::random_graph(n, m, 0.7, seed);
        let mode = if ego { ConnectivityMode::PerEgo } else { ConnectivityMode::EdgeWise };
        let c = connectivity_probabilities(&g, DIRECTIONS[d], mode);
        for a in 0..4 {
            let row: f64 = c.p[a].iter().sum();
            if c.defined[a] {
                prop_assert!((row - 1.0).abs() < 1e-9, "row {} sums to {}", a, row);
            } else {
                prop_assert_eq!(row, 0.0);
            }
        }
    }

    #[test]
    fn ratios_are_positive_where_defined(seed: u64) {
        let g = synth::random_graph(60, 400, 0.8, seed);
        let cfg = HomophilyConfig { replicates: 4, seed, ..HomophilyConfig::default() };
        let Ok(r) = homophily_report(&g, &cfg) else { return Ok(()) };
        for a in 0..4 {
            for b in 0..4 {
                if let (Some(ratio), Some(mean)) = (r.ratio[a][b], r.baseline_mean[a][b]) {
                    prop_assert!(ratio >= 0.0 && mean > 0.0);
                }
            }
        }
    }
}

#[test]
fn report_is_reproducible_and_seed_sensitive() {
    let g = synth::random_graph(300, 3000, 0.6, 4);
    let cfg = HomophilyConfig {
        replicates: 6,
        seed: 11,
        ..HomophilyConfig::default()
    };
    let a = homophily_report(&g, &cfg).unwrap();
    let b = homophily_report(&g, &cfg).unwrap();
    assert_eq!(a, b);
    let c = homophily_report(&g, &HomophilyConfig { seed: 12, ..cfg }).unwrap();
    assert_ne!(a.baseline_mean, c.baseline_mean);
}

#[test]
fn thread_count_does_not_change_the_baseline() {
    let g = synth::random_graph(300, 3000, 0.6, 5);
    let cfg = HomophilyConfig {
        replicates: 8,
        seed: 3,
        ..HomophilyConfig::default()
    };
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| homophily_report(&g, &cfg).unwrap())
    };
    assert_eq!(run(1), run(3));
}

// Small hate and counterspeech blocks inside a large neutral population. The
// expected ratio is the observed connectivity over the configuration-model
// share of in-stubs, both read off the generated graph.
#[test]
fn planted_blocks_in_neutral_background() {
    let blocks = [
        Block {
            category: UserCategory::Hate,
            size: 90,
            assortative: true,
        },
        Block {
            category: UserCategory::Counterspeech,
            size: 90,
            assortative: true,
        },
        Block {
            category: UserCategory::Neutral,
            size: 420,
            assortative: false,
        },
    ];
    let g = synth::planted_blocks(&blocks, 0.05, 0.01, 8);
    let cfg = HomophilyConfig {
        replicates: 40,
        seed: 9,
        ..HomophilyConfig::default()
    };
    let report = homophily_report(&g, &cfg).unwrap();
    let oracle = synth::configuration_baseline(&g);
    for c in [UserCategory::Hate, UserCategory::Counterspeech, UserCategory::Neutral] {
        let i = c.matrix_index().unwrap();
        let expected = report.observed.p[i][i] / oracle[i][i].unwrap();
        let got = report.ratio[i][i].unwrap();
        assert!((got / expected - 1.0).abs() < 0.1, "{c}: {got} vs {expected}");
        if c != UserCategory::Neutral {
            assert!(got > 2.0, "{c} ratio {got}");
        }
    }
}

#[test]
fn partition_preserving_shuffle_keeps_flagged_targets() {
    let mut g = SocialGraph::from_index_edges(6, &[(0, 1), (2, 3), (4, 5), (1, 0), (3, 2), (5, 4)]);
    for u in [1, 3, 5] {
        g.set_attributes(u, true, UserCategory::Hate).unwrap();
    }
    for seed in 0..20 {
        let cfg = ShuffleConfig {
            seed,
            swap_attempts_factor: 20.0,
            ..ShuffleConfig::default()
        };
        let out = hatenet_core::graph::degree_preserving_shuffle(&g, &cfg).unwrap();
        for u in 0..6 {
            assert_eq!(out.graph.covid_out_neighbors(u), g.covid_out_neighbors(u));
        }
    }
}
