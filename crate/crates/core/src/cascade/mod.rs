//! Activation cascades, exposure counting and the infection-risk curve with
//! its time-shuffled null model.
//!
//! A user activates into a kind (hate or counterspeech) at their first tweet
//! of that label. The risk at exposure level `n` for a pair `(s, s')` is
//! `|Infected(s') ∩ Exposed(s, n)| / |Exposed(s, n)|`, where `Exposed(s, n)`
//! holds population users with at least `n` neighbors activated into `s`
//! strictly before the user's own first activation (or by the window end
//! for users who never activate).

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use rand::seq::SliceRandom;
use rayon::prelude::*;
use thiserror::Error;

use crate::graph::SocialGraph;
use crate::ingest::TweetRecord;
use crate::labels::{ActivationKind, Direction, Label, UserCategory};
use crate::seeds;
use crate::stats::{fmt_f64, RunningMoments};
use crate::time::{format_timestamp, parse_timestamp, Timestamp, Window};

#[derive(Debug, Error)]
pub enum CascadeError {
    #[error("no records")]
    EmptyRecords,
    #[error("n_max must be at least 1")]
    InvalidNMax,
    #[error("replicates must be at least 2, got {0}")]
    TooFewReplicates(usize),
    #[error("no users exposed at n = 1 for {0}")]
    NoExposure(RiskPair),
    #[error("cascade line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActivationEvent {
    pub user: u32,
    pub time: Timestamp,
    pub kind: ActivationKind,
    /// Source tweet, empty for imported cascades.
    pub tweet_id: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cascade {
    /// Ascending by time, ties by tweet id then input order.
    pub events: Vec<ActivationEvent>,
    pub window_end: Timestamp,
}

/// Numeric ids compare numerically, anything else lexically.
pub fn cmp_tweet_id(a: &str, b: &str) -> Ordering {
    let digits = |s: &str| !s.is_empty() && s.bytes().all(|c| c.is_ascii_digit());
    if digits(a) && digits(b) {
        let (a, b) = (a.trim_start_matches('0'), b.trim_start_matches('0'));
        a.len().cmp(&b.len()).then_with(|| a.cmp(b))
    } else {
        a.cmp(b)
    }
}

impl Cascade {
    pub fn new(mut events: Vec<ActivationEvent>, window_end: Timestamp) -> Self {
        events.sort_by(|x, y| x.time.cmp(&y.time).then_with(|| cmp_tweet_id(&x.tweet_id, &y.tweet_id)));
        Self { events, window_end }
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn count(&self, kind: ActivationKind) -> usize {
        self.events.iter().filter(|e| e.kind == kind).count()
    }

    /// Reassigns the multiset of event times to the `(user, kind)` pairs by
    /// a uniform random permutation.
    pub fn shuffle_times(&self, rng: &mut seeds::Rng) -> Cascade {
        let mut times: Vec<Timestamp> = self.events.iter().map(|e| e.time).collect();
        times.shuffle(rng);
        let events = self
            .events
            .iter()
            .zip(times)
            .map(|(e, time)| ActivationEvent { time, ..e.clone() })
            .collect();
        Cascade::new(events, self.window_end)
    }
}

/// Per-user label tally and activation times.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct UserSummary {
    pub hate: u64,
    pub counterspeech: u64,
    pub neutral: u64,
    pub unlabeled: u64,
    /// `(time, tweet_id)` of the first tweet of each kind.
    pub first: [Option<(Timestamp, String)>; 2],
}

impl UserSummary {
    /// Users whose records are all unlabeled stay uncategorized.
    pub fn category(&self) -> UserCategory {
        if self.hate + self.counterspeech + self.neutral == 0 {
            return UserCategory::Uncategorized;
        }
        UserCategory::from_counts(self.hate as usize, self.counterspeech as usize)
    }
}

/// Tallies labels per user; unlabeled records count toward no category.
pub fn categorize_users(records: &[TweetRecord]) -> BTreeMap<String, UserSummary> {
    let mut users: BTreeMap<String, UserSummary> = BTreeMap::new();
    for r in records {
        let s = users.entry(r.user_id.clone()).or_default();
        match r.label {
            Some(Label::Hate) => s.hate += 1,
            Some(Label::Counterspeech) => s.counterspeech += 1,
            Some(Label::Neutral) => s.neutral += 1,
            None => s.unlabeled += 1,
        }
        if let Some(kind) = r.label.and_then(ActivationKind::from_label) {
            let slot = &mut s.first[kind.index()];
            let earlier = match slot {
                None => true,
                Some((t, id)) => {
                    r.timestamp < *t || (r.timestamp == *t && cmp_tweet_id(&r.tweet_id, id) == Ordering::Less)
                }
            };
            if earlier {
                *slot = Some((r.timestamp, r.tweet_id.clone()));
            }
        }
    }
    users
}

#[derive(Debug, Clone, PartialEq)]
pub struct CascadeBuild {
    pub cascade: Cascade,
    /// Per graph node; nodes without records stay `Uncategorized`.
    pub categories: Vec<UserCategory>,
    /// Per graph node: has at least one record.
    pub active: Vec<bool>,
    pub users: BTreeMap<String, UserSummary>,
    pub unresolved_users: usize,
    pub unresolved_records: usize,
    pub unlabeled_records: usize,
}

impl CascadeBuild {
    /// Copies categories and covid flags (any record) onto the graph.
    pub fn apply_to(&self, graph: &mut SocialGraph) {
        for u in 0..graph.num_nodes() {
            graph
                .set_attributes(u as u32, self.active[u], self.categories[u])
                .expect("categorized users always have records");
        }
    }

    pub fn category_counts(&self) -> [usize; 4] {
        let mut out = [0; 4];
        for s in self.users.values() {
            if let Some(i) = s.category().matrix_index() {
                out[i] += 1;
            }
        }
        out
    }
}

/// Builds the activation cascade of users present in `graph`. Dual users
/// emit their first event of each kind.
pub fn build_cascade(
    records: &[TweetRecord],
    graph: &SocialGraph,
    window: &Window,
) -> Result<CascadeBuild, CascadeError> {
    if records.is_empty() {
        return Err(CascadeError::EmptyRecords);
    }
    let users = categorize_users(records);
    let n = graph.num_nodes();
    let mut categories = vec![UserCategory::Uncategorized; n];
    let mut active = vec![false; n];
    let mut events = Vec::new();
    let mut unresolved_users = 0;
    let mut unresolved_records = 0;
    for (id, s) in &users {
        let Some(u) = graph.node(id) else {
            unresolved_users += 1;
            unresolved_records += (s.hate + s.counterspeech + s.neutral + s.unlabeled) as usize;
            continue;
        };
        categories[u as usize] = s.category();
        active[u as usize] = true;
        for kind in ActivationKind::ALL {
            if let Some((time, tweet_id)) = &s.first[kind.index()] {
                events.push(ActivationEvent {
                    user: u,
                    time: *time,
                    kind,
                    tweet_id: tweet_id.clone(),
                });
            }
        }
    }
    Ok(CascadeBuild {
        cascade: Cascade::new(events, window.end_ts()),
        categories,
        active,
        unlabeled_records: records.iter().filter(|r| r.label.is_none()).count(),
        users,
        unresolved_users,
        unresolved_records,
    })
}

/// Activation times per kind and the earliest activation of any kind.
struct ActivationTable {
    time: [Vec<Option<Timestamp>>; 2],
    first: Vec<Option<Timestamp>>,
}

impl ActivationTable {
    fn new(n: usize, cascade: &Cascade) -> Self {
        let mut time = [vec![None; n], vec![None; n]];
        let mut first: Vec<Option<Timestamp>> = vec![None; n];
        for e in &cascade.events {
            let slot = &mut time[e.kind.index()][e.user as usize];
            *slot = Some(slot.map_or(e.time, |t: Timestamp| t.min(e.time)));
            let f = &mut first[e.user as usize];
            *f = Some(f.map_or(e.time, |t: Timestamp| t.min(e.time)));
        }
        Self { time, first }
    }
}

fn exposures_from(
    graph: &SocialGraph,
    table: &ActivationTable,
    window_end: Timestamp,
    s: ActivationKind,
    direction: Direction,
) -> Vec<u32> {
    let src = &table.time[s.index()];
    (0..graph.num_nodes() as u32)
        .map(|u| {
            let mut count = 0;
            match table.first[u as usize] {
                Some(tu) => graph.for_each_neighbor(u, direction, |v| {
                    if src[v as usize].is_some_and(|t| t < tu) {
                        count += 1;
                    }
                }),
                None => graph.for_each_neighbor(u, direction, |v| {
                    if src[v as usize].is_some_and(|t| t <= window_end) {
                        count += 1;
                    }
                }),
            }
            count
        })
        .collect()
}

/// Per node, the number of distinct neighbors activated into `s` strictly
/// before the node's first activation, or by `window_end` if it never
/// activates.
pub fn compute_exposures(graph: &SocialGraph, cascade: &Cascade, s: ActivationKind, direction: Direction) -> Vec<u32> {
    let table = ActivationTable::new(graph.num_nodes(), cascade);
    exposures_from(graph, &table, cascade.window_end, s, direction)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RiskPair {
    pub source: ActivationKind,
    pub target: ActivationKind,
}

impl RiskPair {
    pub const HATE_HATE: RiskPair = RiskPair {
        source: ActivationKind::Hate,
        target: ActivationKind::Hate,
    };
    pub const COUNTER_HATE: RiskPair = RiskPair {
        source: ActivationKind::Counterspeech,
        target: ActivationKind::Hate,
    };
}

impl fmt::Display for RiskPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{}", self.source, self.target)
    }
}

impl FromStr for RiskPair {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (a, b) = s
            .split_once("->")
            .or_else(|| s.split_once(':'))
            .ok_or_else(|| format!("expected `source->target`, got `{s}`"))?;
        Ok(RiskPair {
            source: a.parse().map_err(|e| format!("{e}"))?,
            target: b.parse().map_err(|e| format!("{e}"))?,
        })
    }
}

/// Who may appear in the exposed sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Population {
    /// Nodes with at least one covid-related record.
    #[default]
    CovidFlagged,
    AllNodes,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RiskConfig {
    pub direction: Direction,
    pub population: Population,
    /// Count users activating into both kinds as infected.
    pub include_dual: bool,
}

impl Default for RiskConfig {
    fn default() -> Self {
        Self {
            direction: Direction::Out,
            population: Population::CovidFlagged,
            include_dual: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiskLevel {
    pub n: u32,
    pub exposed: u64,
    pub infected: u64,
    /// `None` when nobody is exposed at this level.
    pub risk: Option<f64>,
    pub baseline_mean: Option<f64>,
    pub baseline_std: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RiskCurve {
    pub pair: RiskPair,
    pub levels: Vec<RiskLevel>,
    pub replicates: usize,
    /// The cascade had fewer than two events, so the shuffle changes nothing.
    pub vacuous_shuffle: bool,
}

fn infected_mask(n: usize, cascade: &Cascade, target: ActivationKind, include_dual: bool) -> Vec<bool> {
    let mut kinds = vec![[false; 2]; n];
    for e in &cascade.events {
        kinds[e.user as usize][e.kind.index()] = true;
    }
    kinds
        .into_iter()
        .map(|k| k[target.index()] && (include_dual || !(k[0] && k[1])))
        .collect()
}

fn in_population(graph: &SocialGraph, cfg: &RiskConfig) -> Vec<bool> {
    match cfg.population {
        Population::CovidFlagged => graph.covid_flags().to_vec(),
        Population::AllNodes => vec![true; graph.num_nodes()],
    }
}

/// `(exposed, infected)` for `n = 1..=n_max`.
fn risk_counts(exposure: &[u32], population: &[bool], infected: &[bool], n_max: u32) -> Vec<(u64, u64)> {
    let m = n_max as usize;
    let mut exp_hist = vec![0u64; m + 1];
    let mut inf_hist = vec![0u64; m + 1];
    for u in 0..exposure.len() {
        if !population[u] || exposure[u] == 0 {
            continue;
        }
        let level = (exposure[u] as usize).min(m);
        exp_hist[level] += 1;
        if infected[u] {
            inf_hist[level] += 1;
        }
    }
    let mut out = vec![(0, 0); m];
    let (mut e, mut i) = (0, 0);
    for level in (1..=m).rev() {
        e += exp_hist[level];
        i += inf_hist[level];
        out[level - 1] = (e, i);
    }
    out
}

fn ratio(infected: u64, exposed: u64) -> Option<f64> {
    (exposed > 0).then(|| infected as f64 / exposed as f64)
}

/// Empirical risk curve for `pair` over `n = 1..=n_max`.
pub fn infection_risk(
    graph: &SocialGraph,
    cascade: &Cascade,
    pair: RiskPair,
    n_max: u32,
    cfg: &RiskConfig,
) -> Result<RiskCurve, CascadeError> {
    if n_max == 0 {
        return Err(CascadeError::InvalidNMax);
    }
    let exposure = compute_exposures(graph, cascade, pair.source, cfg.direction);
    let infected = infected_mask(graph.num_nodes(), cascade, pair.target, cfg.include_dual);
    let counts = risk_counts(&exposure, &in_population(graph, cfg), &infected, n_max);
    if counts[0].0 == 0 {
        return Err(CascadeError::NoExposure(pair));
    }
    Ok(RiskCurve {
        pair,
        levels: counts
            .into_iter()
            .enumerate()
            .map(|(i, (exposed, inf))| RiskLevel {
                n: i as u32 + 1,
                exposed,
                infected: inf,
                risk: ratio(inf, exposed),
                baseline_mean: None,
                baseline_std: None,
            })
            .collect(),
        replicates: 0,
        vacuous_shuffle: false,
    })
}

/// Largest `n` with at least `min_exposed` exposed users, or 1 if none.
pub fn default_n_max(
    graph: &SocialGraph,
    cascade: &Cascade,
    source: ActivationKind,
    cfg: &RiskConfig,
    min_exposed: u64,
) -> u32 {
    let exposure = compute_exposures(graph, cascade, source, cfg.direction);
    let pop = in_population(graph, cfg);
    let mut hist: BTreeMap<u32, u64> = BTreeMap::new();
    for (u, &e) in exposure.iter().enumerate() {
        if pop[u] && e > 0 {
            *hist.entry(e).or_default() += 1;
        }
    }
    let mut at_least = 0;
    for (&level, &count) in hist.iter().rev() {
        at_least += count;
        if at_least >= min_exposed {
            return level.max(1);
        }
    }
    1
}

/// `(mean, std)`, either missing when too few replicates contribute.
pub type MeanStd = (Option<f64>, Option<f64>);

/// Per-level baseline `(mean, std)` of the risk under time-shuffled cascades.
/// Replicates with no exposed user at a level are left out of that level.
pub fn shuffled_risk(
    graph: &SocialGraph,
    cascade: &Cascade,
    pair: RiskPair,
    n_max: u32,
    replicates: usize,
    seed: u64,
    cfg: &RiskConfig,
) -> Result<Vec<MeanStd>, CascadeError> {
    if n_max == 0 {
        return Err(CascadeError::InvalidNMax);
    }
    if replicates < 2 {
        return Err(CascadeError::TooFewReplicates(replicates));
    }
    let n = graph.num_nodes();
    // Categories are attached to (user, kind) pairs, so the infected set is
    // unchanged by the shuffle.
    let infected = infected_mask(n, cascade, pair.target, cfg.include_dual);
    let pop = in_population(graph, cfg);
    let runs: Vec<Vec<(u64, u64)>> = (0..replicates)
        .into_par_iter()
        .map(|r| {
            let mut rng = seeds::replicate_rng(seed, r as u64);
            let shuffled = cascade.shuffle_times(&mut rng);
            let table = ActivationTable::new(n, &shuffled);
            let exposure = exposures_from(graph, &table, shuffled.window_end, pair.source, cfg.direction);
            risk_counts(&exposure, &pop, &infected, n_max)
        })
        .collect();
    let mut moments = vec![RunningMoments::default(); n_max as usize];
    for run in &runs {
        for (m, &(e, i)) in moments.iter_mut().zip(run) {
            if let Some(r) = ratio(i, e) {
                m.push(r);
            }
        }
    }
    Ok(moments.iter().map(|m| (m.mean(), m.std())).collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContagionConfig {
    pub n_max: u32,
    pub replicates: usize,
    pub seed: u64,
    pub risk: RiskConfig,
}

/// Empirical curves with shuffled baselines, one per pair. Each pair's
/// baseline uses a seed derived from the master seed and the pair index.
pub fn contagion_report(
    graph: &SocialGraph,
    cascade: &Cascade,
    pairs: &[RiskPair],
    cfg: &ContagionConfig,
) -> Result<Vec<RiskCurve>, CascadeError> {
    let mut out = Vec::with_capacity(pairs.len());
    for (i, &pair) in pairs.iter().enumerate() {
        let mut curve = infection_risk(graph, cascade, pair, cfg.n_max, &cfg.risk)?;
        let seed = seeds::derive_seed(cfg.seed, i as u64);
        let baseline = shuffled_risk(graph, cascade, pair, cfg.n_max, cfg.replicates, seed, &cfg.risk)?;
        for (level, (mean, std)) in curve.levels.iter_mut().zip(baseline) {
            level.baseline_mean = mean;
            level.baseline_std = std;
        }
        curve.replicates = cfg.replicates;
        curve.vacuous_shuffle = cascade.len() < 2;
        out.push(curve);
    }
    Ok(out)
}

pub fn write_risk_csv<W: Write>(w: W, curves: &[RiskCurve]) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record([
        "pair",
        "n",
        "exposed",
        "infected",
        "risk",
        "baseline_mean",
        "baseline_std",
    ])?;
    let opt = |x: Option<f64>| x.map(fmt_f64).unwrap_or_default();
    for c in curves {
        for l in &c.levels {
            out.write_record([
                c.pair.to_string(),
                l.n.to_string(),
                l.exposed.to_string(),
                l.infected.to_string(),
                opt(l.risk),
                opt(l.baseline_mean),
                opt(l.baseline_std),
            ])?;
        }
    }
    out.flush()?;
    Ok(())
}

pub fn write_cascade_csv<W: Write>(w: W, cascade: &Cascade, graph: &SocialGraph) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["user_id", "timestamp", "category"])?;
    for e in &cascade.events {
        out.write_record([graph.id(e.user), &format_timestamp(e.time), e.kind.as_str()])?;
    }
    out.flush()?;
    Ok(())
}

/// Reads `user_id,timestamp,category` rows. Rows for users missing from the
/// graph are skipped and counted.
pub fn read_cascade_csv<R: Read>(
    reader: R,
    graph: &SocialGraph,
    window_end: Timestamp,
) -> Result<(Cascade, usize), CascadeError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut events = Vec::new();
    let mut skipped = 0;
    for (i, rec) in rdr.records().enumerate() {
        let line = i + 2;
        let err = |message: String| CascadeError::Format { line, message };
        let rec = rec.map_err(|e| err(e.to_string()))?;
        if rec.len() != 3 {
            return Err(err(format!("expected 3 fields, got {}", rec.len())));
        }
        let time = parse_timestamp(&rec[1]).map_err(|e| err(e.to_string()))?;
        let kind: ActivationKind = rec[2].parse().map_err(|e| err(format!("{e}")))?;
        match graph.node(&rec[0]) {
            Some(user) => events.push(ActivationEvent {
                user,
                time,
                kind,
                tweet_id: String::new(),
            }),
            None => skipped += 1,
        }
    }
    Ok((Cascade::new(events, window_end), skipped))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ActivationKind::{Counterspeech as C, Hate as H};

    fn rec(id: &str, user: &str, t: i64, label: Option<Label>) -> TweetRecord {
        TweetRecord {
            tweet_id: id.into(),
            user_id: user.into(),
            timestamp: t,
            text: String::new(),
            label,
            matched_keywords: vec![],
            hashtags: vec![],
            urls: 0,
            mentions: 0,
        }
    }

    fn ev(user: u32, time: i64, kind: ActivationKind) -> ActivationEvent {
        ActivationEvent {
            user,
            time,
            kind,
            tweet_id: String::new(),
        }
    }

    fn all_pop() -> RiskConfig {
        RiskConfig {
            population: Population::AllNodes,
            ..Default::default()
        }
    }

    #[test]
    fn user_categories() {
        use Label::*;
        let records = vec![
            rec("1", "u", 1, Some(Neutral)),
            rec("2", "u", 2, Some(Hate)),
            rec("3", "u", 5, Some(Hate)),
            rec("4", "d", 1, Some(Counterspeech)),
            rec("5", "d", 3, Some(Hate)),
        ];
        let users = categorize_users(&records);
        assert_eq!(users["u"].category(), UserCategory::Hate);
        assert_eq!(users["u"].first[0].as_ref().unwrap().0, 2);
        assert_eq!(users["d"].category(), UserCategory::Dual);
    }

    #[test]
    fn six_user_fixture() {
        use Label::*;
        let records = vec![
            rec("1", "a", 10, Some(Hate)),
            rec("2", "b", 11, Some(Counterspeech)),
            rec("3", "c", 12, Some(Neutral)),
            rec("4", "d", 13, Some(Hate)),
            rec("5", "d", 14, Some(Counterspeech)),
            rec("6", "e", 15, Some(Neutral)),
            rec("7", "e", 16, Some(Neutral)),
            rec("8", "f", 17, Some(Counterspeech)),
            rec("9", "f", 18, Some(Counterspeech)),
            rec("10", "zz", 19, Some(Hate)),
        ];
        let g = SocialGraph::from_edges(
            {
                let mut ids = crate::graph::IdMap::new();
                for u in ["a", "b", "c", "d", "e", "f"] {
                    ids.intern(u);
                }
                ids
            },
            &[],
        )
        .0;
        let b = build_cascade(&records, &g, &Window::default()).unwrap();
        // hate: a, zz(unresolved but still tallied); counter: b, f; dual: d; neutral: c, e
        assert_eq!(b.category_counts(), [2, 2, 1, 2]);
        assert_eq!(b.unresolved_users, 1);
        assert_eq!(b.unresolved_records, 1);
        assert_eq!(b.cascade.len(), 5);
        assert_eq!(b.cascade.count(H), 2);
        assert_eq!(b.categories[3], UserCategory::Dual);
        assert!(build_cascade(&[], &g, &Window::default()).is_err());
    }

    #[test]
    fn tie_break_by_tweet_id() {
        let c = Cascade::new(
            vec![
                ActivationEvent {
                    user: 0,
                    time: 5,
                    kind: H,
                    tweet_id: "100".into(),
                },
                ActivationEvent {
                    user: 1,
                    time: 5,
                    kind: H,
                    tweet_id: "99".into(),
                },
                ActivationEvent {
                    user: 2,
                    time: 4,
                    kind: C,
                    tweet_id: "500".into(),
                },
            ],
            10,
        );
        assert_eq!(c.events.iter().map(|e| e.user).collect::<Vec<_>>(), vec![2, 1, 0]);
        let records = vec![
            rec("20", "u", 7, Some(Label::Hate)),
            rec("3", "u", 7, Some(Label::Hate)),
        ];
        assert_eq!(categorize_users(&records)["u"].first[0].as_ref().unwrap().1, "3");
    }

    #[test]
    fn exposure_before_activation() {
        // u=0 follows a=1, b=2
        let g = SocialGraph::from_index_edges(3, &[(0, 1), (0, 2)]);
        let c = Cascade::new(vec![ev(1, 1, H), ev(0, 5, H), ev(2, 8, H)], 100);
        assert_eq!(compute_exposures(&g, &c, H, Direction::Out), vec![1, 0, 0]);
        // never-activated user counts by window end
        let c2 = Cascade::new(vec![ev(1, 1, H), ev(2, 8, H)], 100);
        assert_eq!(compute_exposures(&g, &c2, H, Direction::Out)[0], 2);
        // followers direction
        assert_eq!(compute_exposures(&g, &c2, H, Direction::In), vec![0, 0, 0]);
        let iso = SocialGraph::from_index_edges(1, &[]);
        assert_eq!(
            compute_exposures(&iso, &Cascade::new(vec![], 0), H, Direction::Out),
            vec![0]
        );
    }

    #[test]
    fn simultaneous_activation_does_not_expose() {
        let g = SocialGraph::from_index_edges(2, &[(0, 1)]);
        let c = Cascade::new(vec![ev(1, 3, H), ev(0, 3, H)], 10);
        assert_eq!(compute_exposures(&g, &c, H, Direction::Out), vec![0, 0]);
    }

    #[test]
    fn risk_bounds() {
        // star: 0..4 follow hub 4 who is hate
        let edges: Vec<(u32, u32)> = (0..4).map(|u| (u, 4)).collect();
        let g = SocialGraph::from_index_edges(5, &edges);
        let none = Cascade::new(vec![ev(4, 1, H)], 10);
        let r = infection_risk(&g, &none, RiskPair::HATE_HATE, 2, &all_pop()).unwrap();
        assert_eq!(r.levels[0].risk, Some(0.0));
        assert_eq!(r.levels[0].exposed, 4);
        assert_eq!(r.levels[1].risk, None);
        let all = Cascade::new((0..5).map(|u| ev(u, if u == 4 { 1 } else { 2 }, H)).collect(), 10);
        let r = infection_risk(&g, &all, RiskPair::HATE_HATE, 1, &all_pop()).unwrap();
        assert_eq!(
            (r.levels[0].exposed, r.levels[0].infected, r.levels[0].risk),
            (4, 4, Some(1.0))
        );
        assert!(matches!(
            infection_risk(&g, &Cascade::new(vec![], 10), RiskPair::HATE_HATE, 1, &all_pop()),
            Err(CascadeError::NoExposure(_))
        ));
        assert!(infection_risk(&g, &none, RiskPair::HATE_HATE, 0, &all_pop()).is_err());
    }

    #[test]
    fn dual_users_not_infected_by_default() {
        let g = SocialGraph::from_index_edges(2, &[(0, 1)]);
        let c = Cascade::new(vec![ev(1, 1, H), ev(0, 2, H), ev(0, 3, C)], 10);
        let r = infection_risk(&g, &c, RiskPair::HATE_HATE, 1, &all_pop()).unwrap();
        assert_eq!(r.levels[0].infected, 0);
        let cfg = RiskConfig {
            include_dual: true,
            ..all_pop()
        };
        let r = infection_risk(&g, &c, RiskPair::HATE_HATE, 1, &cfg).unwrap();
        assert_eq!(r.levels[0].infected, 1);
    }

    #[test]
    fn covid_population() {
        let mut g = SocialGraph::from_index_edges(3, &[(0, 2), (1, 2)]);
        g.set_attributes(0, true, UserCategory::Neutral).unwrap();
        g.set_attributes(2, true, UserCategory::Hate).unwrap();
        let c = Cascade::new(vec![ev(2, 1, H)], 10);
        let r = infection_risk(&g, &c, RiskPair::HATE_HATE, 1, &RiskConfig::default()).unwrap();
        assert_eq!(r.levels[0].exposed, 1);
    }

    #[test]
    fn single_event_baseline_equals_empirical() {
        let g = SocialGraph::from_index_edges(3, &[(0, 2), (1, 2)]);
        let c = Cascade::new(vec![ev(2, 1, H)], 10);
        let cfg = ContagionConfig {
            n_max: 1,
            replicates: 5,
            seed: 3,
            risk: all_pop(),
        };
        let rep = contagion_report(&g, &c, &[RiskPair::HATE_HATE], &cfg).unwrap();
        let l = rep[0].levels[0];
        assert_eq!(l.baseline_mean, l.risk);
        assert_eq!(l.baseline_std, Some(0.0));
        assert!(rep[0].vacuous_shuffle);
        assert!(contagion_report(&g, &c, &[], &cfg).unwrap().is_empty());
        assert!(shuffled_risk(&g, &c, RiskPair::HATE_HATE, 1, 1, 0, &all_pop()).is_err());
    }

    #[test]
    fn shuffle_preserves_multisets() {
        let c = Cascade::new(vec![ev(0, 1, H), ev(1, 4, C), ev(2, 4, H), ev(3, 9, C)], 10);
        let mut rng = seeds::rng(1);
        let s = c.shuffle_times(&mut rng);
        let mut t1: Vec<_> = c.events.iter().map(|e| e.time).collect();
        let mut t2: Vec<_> = s.events.iter().map(|e| e.time).collect();
        t1.sort();
        t2.sort();
        assert_eq!(t1, t2);
        let mut p1: Vec<_> = c.events.iter().map(|e| (e.user, e.kind)).collect();
        let mut p2: Vec<_> = s.events.iter().map(|e| (e.user, e.kind)).collect();
        p1.sort();
        p2.sort();
        assert_eq!(p1, p2);
    }

    #[test]
    fn default_n_max_threshold() {
        // 60 users follow one hate user; 10 of them also follow a second.
        let mut edges: Vec<(u32, u32)> = (2..62).map(|u| (u, 0)).collect();
        edges.extend((2..12).map(|u| (u, 1)));
        let g = SocialGraph::from_index_edges(62, &edges);
        let c = Cascade::new(vec![ev(0, 1, H), ev(1, 1, H)], 10);
        assert_eq!(default_n_max(&g, &c, H, &all_pop(), 50), 1);
        assert_eq!(default_n_max(&g, &c, H, &all_pop(), 10), 2);
        assert_eq!(default_n_max(&g, &c, H, &all_pop(), 1000), 1);
    }

    #[test]
    fn csv_round_trip() {
        let g = SocialGraph::from_index_edges(3, &[]);
        let c = Cascade::new(vec![ev(0, 1_600_000_000, H), ev(2, 1_600_000_100, C)], 1_700_000_000);
        let mut buf = Vec::new();
        write_cascade_csv(&mut buf, &c, &g).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "user_id,timestamp,category\n0,2020-09-13T12:26:40Z,hate\n2,2020-09-13T12:28:20Z,counterspeech\n"
        );
        let (back, skipped) = read_cascade_csv(text.as_bytes(), &g, c.window_end).unwrap();
        assert_eq!((back, skipped), (c, 0));
        assert!(read_cascade_csv("user_id,timestamp,category\n0,yesterday,hate\n".as_bytes(), &g, 0).is_err());
    }

    #[test]
    fn risk_csv_layout() {
        let curve = RiskCurve {
            pair: RiskPair::COUNTER_HATE,
            levels: vec![RiskLevel {
                n: 1,
                exposed: 4,
                infected: 1,
                risk: Some(0.25),
                baseline_mean: Some(0.5),
                baseline_std: None,
            }],
            replicates: 2,
            vacuous_shuffle: false,
        };
        let mut buf = Vec::new();
        write_risk_csv(&mut buf, &[curve]).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "pair,n,exposed,infected,risk,baseline_mean,baseline_std\ncounterspeech->hate,1,4,1,0.25,0.5,\n"
        );
        assert_eq!("hate->hate".parse::<RiskPair>().unwrap(), RiskPair::HATE_HATE);
    }
}
