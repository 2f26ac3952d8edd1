//! Directed double-edge swaps restricted to edges whose targets share a
//! covid-flag class.

use rand::Rng;
use rustc_hash::FxHashSet;

use super::{Csr, GraphError, SocialGraph};
use crate::seeds;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShuffleConfig {
    /// Swap attempts per edge.
    pub swap_attempts_factor: f64,
    pub seed: u64,
    pub preserve_covid_partition: bool,
}

impl Default for ShuffleConfig {
    fn default() -> Self {
        Self {
            swap_attempts_factor: 10.0,
            seed: 0,
            preserve_covid_partition: true,
        }
    }
}

impl ShuffleConfig {
    pub fn validate(&self) -> Result<(), GraphError> {
        if !(self.swap_attempts_factor.is_finite() && self.swap_attempts_factor >= 0.0) {
            return Err(GraphError::InvalidConfig(format!(
                "swap_attempts_factor must be a finite non-negative number, got {}",
                self.swap_attempts_factor
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShuffleOutcome {
    pub graph: SocialGraph,
    pub attempts: u64,
    pub accepted: u64,
    /// No class had two edges to swap; the input was returned unchanged.
    pub degenerate: bool,
}

pub(crate) struct RawShuffle {
    pub out: Csr,
    pub attempts: u64,
    pub accepted: u64,
    pub degenerate: bool,
}

#[inline]
fn key(u: u32, v: u32) -> u64 {
    ((u as u64) << 32) | v as u64
}

pub(crate) fn shuffle_topology(graph: &SocialGraph, cfg: &ShuffleConfig) -> RawShuffle {
    let mut classes: [Vec<(u32, u32)>; 2] = [Vec::new(), Vec::new()];
    for (u, v) in graph.edges() {
        let class = cfg.preserve_covid_partition && graph.covid_flag(v);
        classes[class as usize].push((u, v));
    }
    let total = graph.num_edges();
    let attempts = (cfg.swap_attempts_factor * total as f64).round() as u64;
    if classes.iter().all(|c| c.len() < 2) {
        return RawShuffle {
            out: graph.out_csr().clone(),
            attempts: 0,
            accepted: 0,
            degenerate: true,
        };
    }
    if attempts == 0 {
        return RawShuffle {
            out: graph.out_csr().clone(),
            attempts: 0,
            accepted: 0,
            degenerate: false,
        };
    }

    let mut present: FxHashSet<u64> = FxHashSet::default();
    present.reserve(total);
    present.extend(graph.edges().map(|(u, v)| key(u, v)));

    let mut rng = seeds::rng(cfg.seed);
    let split = classes[0].len();
    let mut accepted = 0;
    for _ in 0..attempts {
        let r = rng.random_range(0..total);
        let class = &mut classes[(r >= split) as usize];
        let i = if r >= split { r - split } else { r };
        let j = rng.random_range(0..class.len());
        if i == j {
            continue;
        }
        let (a, b) = class[i];
        let (c, d) = class[j];
        if a == d || c == b || present.contains(&key(a, d)) || present.contains(&key(c, b)) {
            continue;
        }
        present.remove(&key(a, b));
        present.remove(&key(c, d));
        present.insert(key(a, d));
        present.insert(key(c, b));
        class[i] = (a, d);
        class[j] = (c, b);
        accepted += 1;
    }
    let [mut e0, e1] = classes;
    e0.extend(e1);
    RawShuffle {
        out: Csr::from_pairs(graph.num_nodes(), &e0),
        attempts,
        accepted,
        degenerate: false,
    }
}

/// Rewires `graph` keeping every node's in-degree, out-degree and (with
/// `preserve_covid_partition`) count of covid-flagged out-neighbors.
pub fn degree_preserving_shuffle(graph: &SocialGraph, cfg: &ShuffleConfig) -> Result<ShuffleOutcome, GraphError> {
    cfg.validate()?;
    let raw = shuffle_topology(graph, cfg);
    Ok(ShuffleOutcome {
        graph: if raw.accepted == 0 {
            graph.clone()
        } else {
            graph.with_topology(raw.out)
        },
        attempts: raw.attempts,
        accepted: raw.accepted,
        degenerate: raw.degenerate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::labels::UserCategory;
    use proptest::prelude::*;
    use rand::Rng;

    fn random_graph(n: usize, m: usize, seed: u64) -> SocialGraph {
        let mut rng = seeds::rng(seed);
        let edges: Vec<(u32, u32)> = (0..m)
            .map(|_| (rng.random_range(0..n as u32), rng.random_range(0..n as u32)))
            .collect();
        let mut g = SocialGraph::from_index_edges(n, &edges);
        for u in 0..n as u32 {
            let flag = rng.random_bool(0.4);
            g.set_attributes(
                u,
                flag,
                if flag {
                    UserCategory::Neutral
                } else {
                    UserCategory::Uncategorized
                },
            )
            .unwrap();
        }
        g
    }

    fn signature(g: &SocialGraph) -> Vec<(usize, usize, usize)> {
        (0..g.num_nodes() as u32)
            .map(|u| (g.out_degree(u), g.in_degree(u), g.covid_out_neighbors(u)))
            .collect()
    }

    #[test]
    fn zero_factor_is_identity() {
        let g = random_graph(50, 300, 1);
        let cfg = ShuffleConfig {
            swap_attempts_factor: 0.0,
            ..Default::default()
        };
        let out = degree_preserving_shuffle(&g, &cfg).unwrap();
        assert_eq!(out.graph, g);
        assert_eq!(out.accepted, 0);
    }

    #[test]
    fn shuffle_mixes() {
        let g = random_graph(200, 1600, 2);
        let cfg = ShuffleConfig {
            seed: 5,
            ..Default::default()
        };
        let out = degree_preserving_shuffle(&g, &cfg).unwrap();
        let a: FxHashSet<(u32, u32)> = g.edges().collect();
        let b: FxHashSet<(u32, u32)> = out.graph.edges().collect();
        let inter = a.intersection(&b).count() as f64;
        let jaccard = inter / (a.len() as f64 + b.len() as f64 - inter);
        assert!(jaccard < 0.5, "jaccard {jaccard}");
        assert_eq!(signature(&g), signature(&out.graph));
    }

    #[test]
    fn degenerate_graph_flagged() {
        let g = SocialGraph::from_index_edges(3, &[(0, 1)]);
        let out = degree_preserving_shuffle(&g, &ShuffleConfig::default()).unwrap();
        assert!(out.degenerate);
        assert_eq!(out.graph, g);
    }

    #[test]
    fn invalid_factor() {
        let g = random_graph(5, 5, 0);
        for f in [-1.0, f64::NAN, f64::INFINITY] {
            let cfg = ShuffleConfig {
                swap_attempts_factor: f,
                ..Default::default()
            };
            assert!(degree_preserving_shuffle(&g, &cfg).is_err());
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let g = random_graph(80, 500, 3);
        let cfg = ShuffleConfig {
            seed: 9,
            ..Default::default()
        };
        let a = degree_preserving_shuffle(&g, &cfg).unwrap();
        let b = degree_preserving_shuffle(&g, &cfg).unwrap();
        assert_eq!(a, b);
        let c = degree_preserving_shuffle(&g, &ShuffleConfig { seed: 10, ..cfg }).unwrap();
        assert_ne!(a.graph, c.graph);
    }

    proptest! {
        #[test]
        fn shuffle_preserves_invariants(n in 2usize..60, m in 0usize..400, gseed: u64, sseed: u64, keep in any::<bool>()) {
            let g = random_graph(n, m, gseed);
            let cfg = ShuffleConfig { swap_attempts_factor: 5.0, seed: sseed, preserve_covid_partition: keep };
            let out = degree_preserving_shuffle(&g, &cfg).unwrap().graph;
            prop_assert_eq!(out.num_edges(), g.num_edges());
            for u in 0..n as u32 {
                prop_assert_eq!(out.out_degree(u), g.out_degree(u));
                prop_assert_eq!(out.in_degree(u), g.in_degree(u));
                if keep {
                    prop_assert_eq!(out.covid_out_neighbors(u), g.covid_out_neighbors(u));
                }
                let row = out.out_neighbors(u);
                prop_assert!(!row.contains(&u));
                prop_assert!(row.windows(2).all(|w| w[0] < w[1]));
            }
        }
    }
}
