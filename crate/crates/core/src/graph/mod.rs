//! Directed follower graph: storage, loading, ego statistics, the
//! degree-preserving shuffle and homophily reporting.
//!
//! An edge `u -> v` means `u` follows `v`. Adjacency is stored in compressed
//! sparse rows in both directions with sorted neighbor lists.

mod homophily;
mod shuffle;

use std::collections::HashMap;
use std::io::{BufRead, Read};

use thiserror::Error;

use crate::labels::{Direction, UserCategory};

pub use homophily::{
    connectivity_probabilities, homophily_report, write_matrix_csv, ConnectivityMatrix, ConnectivityMode,
    ConnectivityReport, HomophilyConfig,
};
pub use shuffle::{degree_preserving_shuffle, ShuffleConfig, ShuffleOutcome};

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("node attributes line {line}: {message}")]
    Attribute { line: usize, message: String },
    #[error("graph has no categorized nodes")]
    NoCategorized,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("node {0} is categorized but has no covid flag")]
    CategoryWithoutCovid(String),
}

/// Dense index for external user ids, in first-seen order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct IdMap {
    ids: Vec<String>,
    index: HashMap<String, u32>,
}

impl IdMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, id: &str) -> u32 {
        if let Some(&i) = self.index.get(id) {
            return i;
        }
        let i = self.ids.len() as u32;
        self.ids.push(id.to_string());
        self.index.insert(id.to_string(), i);
        i
    }

    pub fn get(&self, id: &str) -> Option<u32> {
        self.index.get(id).copied()
    }

    pub fn id(&self, node: u32) -> &str {
        &self.ids[node as usize]
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }
}

/// Compressed sparse rows; neighbors of `u` are `targets[offsets[u]..offsets[u+1]]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Csr {
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl Csr {
    /// Builds rows from `(row, col)` pairs. Pairs must be unique.
    pub fn from_pairs(n: usize, pairs: &[(u32, u32)]) -> Self {
        let mut offsets = vec![0usize; n + 1];
        for &(r, _) in pairs {
            offsets[r as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut targets = vec![0u32; pairs.len()];
        for &(r, c) in pairs {
            targets[fill[r as usize]] = c;
            fill[r as usize] += 1;
        }
        for i in 0..n {
            targets[offsets[i]..offsets[i + 1]].sort_unstable();
        }
        Self { offsets, targets }
    }

    pub fn row(&self, u: u32) -> &[u32] {
        &self.targets[self.offsets[u as usize]..self.offsets[u as usize + 1]]
    }

    pub fn degree(&self, u: u32) -> usize {
        self.offsets[u as usize + 1] - self.offsets[u as usize]
    }

    pub fn contains(&self, u: u32, v: u32) -> bool {
        self.row(u).binary_search(&v).is_ok()
    }

    pub fn nnz(&self) -> usize {
        self.targets.len()
    }

    pub fn num_rows(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn pairs(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.num_rows() as u32).flat_map(move |u| self.row(u).iter().map(move |&v| (u, v)))
    }

    pub fn transpose(&self) -> Self {
        let flipped: Vec<(u32, u32)> = self.pairs().map(|(u, v)| (v, u)).collect();
        Self::from_pairs(self.num_rows(), &flipped)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SocialGraph {
    nodes: IdMap,
    out: Csr,
    inn: Csr,
    covid_flag: Vec<bool>,
    category: Vec<UserCategory>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EdgeLoadReport {
    pub lines: usize,
    pub retained: usize,
    pub duplicates: usize,
    pub self_loops: usize,
    /// `(line number, content)` of each malformed line.
    pub malformed: Vec<(usize, String)>,
}

impl SocialGraph {
    /// Builds a graph over all ids in `nodes`; self-loops and repeated edges
    /// are dropped and counted in the returned `(duplicates, self_loops)`.
    pub fn from_edges(nodes: IdMap, edges: &[(u32, u32)]) -> (Self, usize, usize) {
        let n = nodes.len();
        let mut self_loops = 0;
        let mut kept: Vec<(u32, u32)> = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            assert!((u as usize) < n && (v as usize) < n, "edge endpoint outside node table");
            if u == v {
                self_loops += 1;
            } else {
                kept.push((u, v));
            }
        }
        kept.sort_unstable();
        let before = kept.len();
        kept.dedup();
        let duplicates = before - kept.len();
        let out = Csr::from_pairs(n, &kept);
        let inn = out.transpose();
        let g = Self {
            nodes,
            out,
            inn,
            covid_flag: vec![false; n],
            category: vec![UserCategory::Uncategorized; n],
        };
        (g, duplicates, self_loops)
    }

    /// Anonymous nodes `0..n`, named by their index.
    pub fn from_index_edges(n: usize, edges: &[(u32, u32)]) -> Self {
        let mut ids = IdMap::new();
        for i in 0..n {
            ids.intern(&i.to_string());
        }
        Self::from_edges(ids, edges).0
    }

    pub(crate) fn with_topology(&self, out: Csr) -> Self {
        let inn = out.transpose();
        Self {
            nodes: self.nodes.clone(),
            out,
            inn,
            covid_flag: self.covid_flag.clone(),
            category: self.category.clone(),
        }
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn num_edges(&self) -> usize {
        self.out.nnz()
    }

    pub fn nodes(&self) -> &IdMap {
        &self.nodes
    }

    pub fn node(&self, id: &str) -> Option<u32> {
        self.nodes.get(id)
    }

    pub fn id(&self, node: u32) -> &str {
        self.nodes.id(node)
    }

    /// Accounts `u` follows.
    pub fn out_neighbors(&self, u: u32) -> &[u32] {
        self.out.row(u)
    }

    /// Accounts following `u`.
    pub fn in_neighbors(&self, u: u32) -> &[u32] {
        self.inn.row(u)
    }

    pub fn out_degree(&self, u: u32) -> usize {
        self.out.degree(u)
    }

    pub fn in_degree(&self, u: u32) -> usize {
        self.inn.degree(u)
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.out.contains(u, v)
    }

    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.out.pairs()
    }

    pub fn out_csr(&self) -> &Csr {
        &self.out
    }

    pub fn in_csr(&self) -> &Csr {
        &self.inn
    }

    pub fn covid_flag(&self, u: u32) -> bool {
        self.covid_flag[u as usize]
    }

    pub fn covid_flags(&self) -> &[bool] {
        &self.covid_flag
    }

    pub fn category(&self, u: u32) -> UserCategory {
        self.category[u as usize]
    }

    pub fn categories(&self) -> &[UserCategory] {
        &self.category
    }

    /// Sets node attributes. A categorized node is always covid-flagged.
    pub fn set_attributes(&mut self, u: u32, covid_flag: bool, category: UserCategory) -> Result<(), GraphError> {
        if category.is_categorized() && !covid_flag {
            return Err(GraphError::CategoryWithoutCovid(self.id(u).to_string()));
        }
        self.covid_flag[u as usize] = covid_flag;
        self.category[u as usize] = category;
        Ok(())
    }

    /// Calls `f` once per distinct neighbor of `u` in `direction`, ascending.
    pub fn for_each_neighbor(&self, u: u32, direction: Direction, f: impl FnMut(u32)) {
        homophily::for_each_neighbor(&self.out, Some(&self.inn), direction, u, f)
    }

    /// Count of covid-flagged accounts `u` follows.
    pub fn covid_out_neighbors(&self, u: u32) -> usize {
        self.out_neighbors(u)
            .iter()
            .filter(|&&v| self.covid_flag[v as usize])
            .count()
    }

    /// Applies `user_id,covid_flag,category` rows; unknown users are counted
    /// and skipped.
    pub fn apply_attributes(&mut self, attrs: &[NodeAttributes]) -> Result<usize, GraphError> {
        let mut unknown = 0;
        for a in attrs {
            match self.node(&a.user_id) {
                Some(u) => self.set_attributes(u, a.covid_flag, a.category)?,
                None => unknown += 1,
            }
        }
        Ok(unknown)
    }
}

/// Reads `src<TAB>dst` lines (whitespace-separated also accepted) into a
/// graph over `id_map` plus every id seen in the file. Blank lines and `#`
/// comments are ignored.
pub fn load_edges<R: BufRead>(reader: R, mut id_map: IdMap) -> Result<(SocialGraph, EdgeLoadReport), GraphError> {
    let mut report = EdgeLoadReport::default();
    let mut edges = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        report.lines += 1;
        let fields: Vec<&str> = if trimmed.contains('\t') {
            trimmed.split('\t').map(str::trim).collect()
        } else {
            trimmed.split_whitespace().collect()
        };
        match fields.as_slice() {
            [src, dst] if !src.is_empty() && !dst.is_empty() => {
                edges.push((id_map.intern(src), id_map.intern(dst)));
            }
            _ => report.malformed.push((i + 1, line.clone())),
        }
    }
    let (graph, duplicates, self_loops) = SocialGraph::from_edges(id_map, &edges);
    report.duplicates = duplicates;
    report.self_loops = self_loops;
    report.retained = graph.num_edges();
    Ok((graph, report))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeAttributes {
    pub user_id: String,
    pub covid_flag: bool,
    pub category: UserCategory,
}

fn parse_flag(raw: &str) -> Option<bool> {
    match raw.trim().to_ascii_lowercase().as_str() {
        "1" | "true" | "yes" => Some(true),
        "0" | "false" | "no" | "" => Some(false),
        _ => None,
    }
}

/// Reads `user_id,covid_flag,category` CSV (header optional).
pub fn read_node_attributes<R: Read>(reader: R) -> Result<Vec<NodeAttributes>, GraphError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut out = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let line = i + 1;
        let rec = rec.map_err(|e| GraphError::Attribute {
            line,
            message: e.to_string(),
        })?;
        if rec.iter().all(str::is_empty) {
            continue;
        }
        if i == 0 && rec.get(0) == Some("user_id") {
            continue;
        }
        let err = |message: String| GraphError::Attribute { line, message };
        if rec.len() < 2 || rec.len() > 3 {
            return Err(err(format!("expected 2 or 3 fields, got {}", rec.len())));
        }
        let covid_flag = parse_flag(&rec[1]).ok_or_else(|| err(format!("bad covid_flag `{}`", &rec[1])))?;
        let category = match rec.get(2) {
            None | Some("") => UserCategory::Uncategorized,
            Some(c) => c.parse().map_err(|e| err(format!("{e}")))?,
        };
        out.push(NodeAttributes {
            user_id: rec[0].to_string(),
            covid_flag,
            category,
        });
    }
    Ok(out)
}

pub fn write_node_attributes<W: std::io::Write>(w: W, graph: &SocialGraph) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["user_id", "covid_flag", "category"])?;
    for u in 0..graph.num_nodes() as u32 {
        out.write_record([
            graph.id(u),
            if graph.covid_flag(u) { "true" } else { "false" },
            graph.category(u).as_str(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DegreeSummary {
    pub nodes: usize,
    pub mean_followers: f64,
    pub median_followers: f64,
    pub mean_followees: f64,
    pub median_followees: f64,
}

/// Indexed by [`UserCategory::matrix_index`]; categories with no nodes are `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct EgoStats {
    pub per_category: [Option<DegreeSummary>; 4],
}

fn median(xs: &mut [usize]) -> f64 {
    xs.sort_unstable();
    let m = xs.len();
    if m % 2 == 1 {
        xs[m / 2] as f64
    } else {
        (xs[m / 2 - 1] + xs[m / 2]) as f64 / 2.0
    }
}

pub fn ego_stats(graph: &SocialGraph) -> Result<EgoStats, GraphError> {
    let mut ins: [Vec<usize>; 4] = Default::default();
    let mut outs: [Vec<usize>; 4] = Default::default();
    for u in 0..graph.num_nodes() as u32 {
        if let Some(c) = graph.category(u).matrix_index() {
            ins[c].push(graph.in_degree(u));
            outs[c].push(graph.out_degree(u));
        }
    }
    if ins.iter().all(Vec::is_empty) {
        return Err(GraphError::NoCategorized);
    }
    let mut per_category = [None; 4];
    for c in 0..4 {
        let n = ins[c].len();
        if n == 0 {
            continue;
        }
        let mean = |xs: &[usize]| xs.iter().sum::<usize>() as f64 / n as f64;
        per_category[c] = Some(DegreeSummary {
            nodes: n,
            mean_followers: mean(&ins[c]),
            median_followers: median(&mut ins[c]),
            mean_followees: mean(&outs[c]),
            median_followees: median(&mut outs[c]),
        });
    }
    Ok(EgoStats { per_category })
}

pub fn write_ego_csv<W: std::io::Write>(w: W, stats: &EgoStats) -> csv::Result<()> {
    use crate::stats::fmt_f64;
    let mut out = csv::Writer::from_writer(w);
    out.write_record([
        "category",
        "nodes",
        "mean_followers",
        "median_followers",
        "mean_followees",
        "median_followees",
    ])?;
    for cat in UserCategory::CATEGORIZED {
        let idx = cat.matrix_index().expect("categorized");
        let s = stats.per_category[idx].unwrap_or_default();
        out.write_record([
            cat.as_str().to_string(),
            s.nodes.to_string(),
            fmt_f64(s.mean_followers),
            fmt_f64(s.median_followers),
            fmt_f64(s.mean_followees),
            fmt_f64(s.median_followees),
        ])?;
    }
    out.flush()?;
    Ok(())
}
