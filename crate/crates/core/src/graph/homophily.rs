//! Category-to-category connectivity and its ratio to shuffled baselines.

use std::io::Write;

use rayon::prelude::*;

use super::shuffle::{shuffle_topology, ShuffleConfig};
use super::{Csr, GraphError, SocialGraph};
use crate::labels::{Direction, UserCategory};
use crate::seeds;
use crate::stats::{fmt_f64, RunningMoments};

pub type Matrix = [[Option<f64>; 4]; 4];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ConnectivityMode {
    /// Pool all edges leaving a category.
    #[default]
    EdgeWise,
    /// Average each ego's neighbor-category fractions.
    PerEgo,
}

impl std::str::FromStr for ConnectivityMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "edge" | "edgewise" | "edge-wise" => Ok(Self::EdgeWise),
            "ego" | "perego" | "per-ego" => Ok(Self::PerEgo),
            other => Err(format!("unknown connectivity mode `{other}`")),
        }
    }
}

/// Rows and columns indexed by [`UserCategory::matrix_index`]
/// (Hate, Counterspeech, Dual, Neutral).
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectivityMatrix {
    pub p: [[f64; 4]; 4],
    /// Rows whose source category has at least one categorized neighbor.
    pub defined: [bool; 4],
    /// Source-to-target neighbor pair counts.
    pub counts: [[u64; 4]; 4],
}

impl ConnectivityMatrix {
    pub fn get(&self, src: UserCategory, dst: UserCategory) -> Option<f64> {
        let (a, b) = (src.matrix_index()?, dst.matrix_index()?);
        self.defined[a].then_some(self.p[a][b])
    }

    pub fn as_matrix(&self) -> Matrix {
        let mut m = [[None; 4]; 4];
        for a in 0..4 {
            if self.defined[a] {
                for b in 0..4 {
                    m[a][b] = Some(self.p[a][b]);
                }
            }
        }
        m
    }
}

pub(super) fn for_each_neighbor(out: &Csr, inn: Option<&Csr>, direction: Direction, u: u32, mut f: impl FnMut(u32)) {
    match direction {
        Direction::Out => out.row(u).iter().for_each(|&v| f(v)),
        Direction::In => inn.expect("in-adjacency").row(u).iter().for_each(|&v| f(v)),
        Direction::Union => {
            let (a, b) = (out.row(u), inn.expect("in-adjacency").row(u));
            let (mut i, mut j) = (0, 0);
            while i < a.len() || j < b.len() {
                let next = match (a.get(i), b.get(j)) {
                    (Some(&x), Some(&y)) if x == y => {
                        i += 1;
                        j += 1;
                        x
                    }
                    (Some(&x), Some(&y)) if x < y => {
                        i += 1;
                        x
                    }
                    (Some(&x), None) => {
                        i += 1;
                        x
                    }
                    (_, Some(&y)) => {
                        j += 1;
                        y
                    }
                    (None, None) => unreachable!(),
                };
                f(next);
            }
        }
    }
}

fn connectivity_from(
    out: &Csr,
    inn: Option<&Csr>,
    category: &[UserCategory],
    direction: Direction,
    mode: ConnectivityMode,
) -> ConnectivityMatrix {
    let mut counts = [[0u64; 4]; 4];
    let mut ego_sum = [[0.0f64; 4]; 4];
    let mut egos = [0u64; 4];
    for u in 0..out.num_rows() as u32 {
        let Some(a) = category[u as usize].matrix_index() else {
            continue;
        };
        let mut local = [0u64; 4];
        for_each_neighbor(out, inn, direction, u, |v| {
            if let Some(b) = category[v as usize].matrix_index() {
                local[b] += 1;
            }
        });
        let k: u64 = local.iter().sum();
        for b in 0..4 {
            counts[a][b] += local[b];
        }
        if mode == ConnectivityMode::PerEgo && k > 0 {
            egos[a] += 1;
            for b in 0..4 {
                ego_sum[a][b] += local[b] as f64 / k as f64;
            }
        }
    }
    let mut p = [[0.0; 4]; 4];
    let mut defined = [false; 4];
    for a in 0..4 {
        match mode {
            ConnectivityMode::EdgeWise => {
                let row: u64 = counts[a].iter().sum();
                if row > 0 {
                    defined[a] = true;
                    for b in 0..4 {
                        p[a][b] = counts[a][b] as f64 / row as f64;
                    }
                }
            }
            ConnectivityMode::PerEgo => {
                if egos[a] > 0 {
                    defined[a] = true;
                    for b in 0..4 {
                        p[a][b] = ego_sum[a][b] / egos[a] as f64;
                    }
                }
            }
        }
    }
    ConnectivityMatrix { p, defined, counts }
}

/// `P[A][B]`: share of category-A nodes' categorized neighbors that are in
/// category B. Neighbors follow `direction` (`Out` = accounts followed).
pub fn connectivity_probabilities(
    graph: &SocialGraph,
    direction: Direction,
    mode: ConnectivityMode,
) -> ConnectivityMatrix {
    connectivity_from(
        graph.out_csr(),
        Some(graph.in_csr()),
        graph.categories(),
        direction,
        mode,
    )
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomophilyConfig {
    pub replicates: usize,
    pub seed: u64,
    /// Per-replicate seeds are derived from `seed`; `shuffle.seed` is ignored.
    pub shuffle: ShuffleConfig,
    pub direction: Direction,
    pub mode: ConnectivityMode,
}

impl Default for HomophilyConfig {
    fn default() -> Self {
        Self {
            replicates: 100,
            seed: 0,
            shuffle: ShuffleConfig::default(),
            direction: Direction::Out,
            mode: ConnectivityMode::EdgeWise,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConnectivityReport {
    pub observed: ConnectivityMatrix,
    pub baseline_mean: Matrix,
    pub baseline_std: Matrix,
    /// `observed / baseline_mean` where the observed row is defined and the
    /// baseline mean is positive.
    pub ratio: Matrix,
    pub replicates: usize,
    /// Replicates whose shuffle had nothing to swap.
    pub degenerate_replicates: usize,
}

pub fn homophily_report(graph: &SocialGraph, cfg: &HomophilyConfig) -> Result<ConnectivityReport, GraphError> {
    if cfg.replicates < 2 {
        return Err(GraphError::InvalidConfig(format!(
            "replicates must be at least 2, got {}",
            cfg.replicates
        )));
    }
    cfg.shuffle.validate()?;
    if graph.categories().iter().all(|c| !c.is_categorized()) {
        return Err(GraphError::NoCategorized);
    }
    let observed = connectivity_probabilities(graph, cfg.direction, cfg.mode);
    let needs_in = cfg.direction != Direction::Out;
    let runs: Vec<(ConnectivityMatrix, bool)> = (0..cfg.replicates)
        .into_par_iter()
        .map(|r| {
            let shuffle = ShuffleConfig {
                seed: seeds::derive_seed(cfg.seed, r as u64),
                ..cfg.shuffle
            };
            let raw = shuffle_topology(graph, &shuffle);
            let inn = needs_in.then(|| raw.out.transpose());
            let m = connectivity_from(&raw.out, inn.as_ref(), graph.categories(), cfg.direction, cfg.mode);
            (m, raw.degenerate)
        })
        .collect();

    let mut moments = [[RunningMoments::default(); 4]; 4];
    for (m, _) in &runs {
        for a in 0..4 {
            if m.defined[a] {
                for b in 0..4 {
                    moments[a][b].push(m.p[a][b]);
                }
            }
        }
    }
    let mut baseline_mean = [[None; 4]; 4];
    let mut baseline_std = [[None; 4]; 4];
    let mut ratio = [[None; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            baseline_mean[a][b] = moments[a][b].mean();
            baseline_std[a][b] = moments[a][b].std();
            if let (true, Some(mean)) = (observed.defined[a], baseline_mean[a][b]) {
                if mean > 0.0 {
                    ratio[a][b] = Some(observed.p[a][b] / mean);
                }
            }
        }
    }
    Ok(ConnectivityReport {
        observed,
        baseline_mean,
        baseline_std,
        ratio,
        replicates: cfg.replicates,
        degenerate_replicates: runs.iter().filter(|(_, d)| *d).count(),
    })
}

/// One row per source category, one column per target category; undefined
/// cells are empty.
pub fn write_matrix_csv<W: Write>(w: W, matrix: &Matrix) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let mut header = vec!["src"];
    header.extend(UserCategory::CATEGORIZED.iter().map(|c| c.as_str()));
    out.write_record(&header)?;
    for (a, cat) in UserCategory::CATEGORIZED.iter().enumerate() {
        let mut row = vec![cat.as_str().to_string()];
        row.extend(matrix[a].iter().map(|v| v.map(fmt_f64).unwrap_or_default()));
        out.write_record(&row)?;
    }
    out.flush()?;
    Ok(())
}
