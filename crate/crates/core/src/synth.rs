//! Seeded generators for graphs, cascades and a small labeled corpus. Used by
//! tests, benchmarks, the web demo and the bundled dataset.

use rand::seq::SliceRandom;
use rand::Rng;
use rustc_hash::FxHashSet;

use crate::cascade::{ActivationEvent, Cascade};
use crate::graph::{IdMap, SocialGraph};
use crate::labels::{ActivationKind, Label, UserCategory};
use crate::seeds;
use crate::time::{format_timestamp, Timestamp, Window};

/// `m` distinct directed edges between uniformly chosen endpoints, no
/// self-loops. `m` is capped at `n(n-1)`.
pub fn random_edges(n: usize, m: usize, rng: &mut seeds::Rng) -> Vec<(u32, u32)> {
    if n < 2 {
        return Vec::new();
    }
    let m = m.min(n * (n - 1));
    let mut seen: FxHashSet<u64> = FxHashSet::default();
    seen.reserve(m);
    let mut out = Vec::with_capacity(m);
    while out.len() < m {
        let u = rng.random_range(0..n as u32);
        let v = rng.random_range(0..n as u32);
        if u != v && seen.insert(((u as u64) << 32) | v as u64) {
            out.push((u, v));
        }
    }
    out
}

/// Each ordered pair is an edge independently with probability `p`.
pub fn bernoulli_edges(n: usize, p: impl Fn(usize, usize) -> f64, rng: &mut seeds::Rng) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.random_bool(p(u, v).clamp(0.0, 1.0)) {
                out.push((u as u32, v as u32));
            }
        }
    }
    out
}

/// Random graph with `m` edges; each node covid-flagged with probability
/// `covid_share` and flagged nodes categorized uniformly.
pub fn random_graph(n: usize, m: usize, covid_share: f64, seed: u64) -> SocialGraph {
    let mut rng = seeds::rng(seed);
    let edges = random_edges(n, m, &mut rng);
    let mut g = SocialGraph::from_index_edges(n, &edges);
    for u in 0..n as u32 {
        if rng.random_bool(covid_share) {
            let cat = UserCategory::CATEGORIZED[rng.random_range(0..4)];
            g.set_attributes(u, true, cat).expect("flagged");
        }
    }
    g
}

/// Directed Erdős–Rényi graph with the given mean out-degree; every node is
/// covid-flagged and takes a category drawn uniformly from `categories`.
pub fn label_randomized_graph(n: usize, mean_out_degree: f64, categories: &[UserCategory], seed: u64) -> SocialGraph {
    let mut rng = seeds::rng(seed);
    let p = mean_out_degree / (n.max(2) - 1) as f64;
    let edges = bernoulli_edges(n, |_, _| p, &mut rng);
    let mut g = SocialGraph::from_index_edges(n, &edges);
    for u in 0..n as u32 {
        let cat = categories[rng.random_range(0..categories.len())];
        g.set_attributes(u, true, cat).expect("flagged");
    }
    g
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Block {
    pub category: UserCategory,
    pub size: usize,
    /// Members link to each other with the within-block probability.
    pub assortative: bool,
}

/// Stochastic block graph: pairs inside the same assortative block link with
/// `p_in`, all other pairs with `p_out`. Nodes are covid-flagged when their
/// category is set.
pub fn planted_blocks(blocks: &[Block], p_in: f64, p_out: f64, seed: u64) -> SocialGraph {
    let mut rng = seeds::rng(seed);
    let mut member = Vec::new();
    for (b, blk) in blocks.iter().enumerate() {
        member.extend(std::iter::repeat_n(b, blk.size));
    }
    let n = member.len();
    let edges = bernoulli_edges(
        n,
        |u, v| {
            let (bu, bv) = (member[u], member[v]);
            if bu == bv && blocks[bu].assortative {
                p_in
            } else {
                p_out
            }
        },
        &mut rng,
    );
    let mut g = SocialGraph::from_index_edges(n, &edges);
    for (u, &b) in member.iter().enumerate() {
        let cat = blocks[b].category;
        g.set_attributes(u as u32, cat.is_categorized(), cat).expect("flagged");
    }
    g
}

/// Expected shuffled-baseline connectivity under the configuration model:
/// each categorized out-stub lands on a category in proportion to that
/// category's share of in-stubs from the same covid class. Rows follow
/// out-edges; `None` where a category receives no in-stubs.
pub fn configuration_baseline(graph: &SocialGraph) -> [[Option<f64>; 4]; 4] {
    let mut in_stubs = [0u64; 4];
    for u in 0..graph.num_nodes() as u32 {
        if let Some(c) = graph.category(u).matrix_index() {
            in_stubs[c] += graph.in_csr().degree(u) as u64;
        }
    }
    let total: u64 = in_stubs.iter().sum();
    let mut out = [[None; 4]; 4];
    if total == 0 {
        return out;
    }
    for row in out.iter_mut() {
        for (b, cell) in row.iter_mut().enumerate() {
            *cell = Some(in_stubs[b] as f64 / total as f64);
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HazardParams {
    pub steps: u32,
    pub seed_hate: usize,
    pub seed_counter: usize,
    /// Per-step activation probability without exposure.
    pub base_hate: f64,
    /// Added per activated hate neighbor followed.
    pub per_exposure_hate: f64,
    pub base_counter: f64,
    pub per_exposure_counter: f64,
    /// Hate hazard is scaled by `(1 - counter_inhibition)^k` for `k`
    /// activated counterspeech neighbors.
    pub counter_inhibition: f64,
    pub start: Timestamp,
    pub step_seconds: i64,
}

impl Default for HazardParams {
    fn default() -> Self {
        Self {
            steps: 30,
            seed_hate: 10,
            seed_counter: 10,
            base_hate: 0.002,
            per_exposure_hate: 0.01,
            base_counter: 0.002,
            per_exposure_counter: 0.0,
            counter_inhibition: 0.0,
            start: Window::default().start_ts(),
            step_seconds: 86_400,
        }
    }
}

/// Discrete-time contagion over out-edges. Seeds activate at step 0; at each
/// later step every inactive node activates with its hazard given neighbors
/// activated at earlier steps. Event times are `start + step * step_seconds`.
pub fn hazard_cascade(graph: &SocialGraph, params: &HazardParams, seed: u64) -> Cascade {
    let n = graph.num_nodes();
    let mut rng = seeds::rng(seed);
    let mut step_of: [Vec<Option<u32>>; 2] = [vec![None; n], vec![None; n]];
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.shuffle(&mut rng);
    for &u in order.iter().take(params.seed_hate.min(n)) {
        step_of[0][u as usize] = Some(0);
    }
    order.shuffle(&mut rng);
    for &u in order.iter().take(params.seed_counter.min(n)) {
        step_of[1][u as usize] = Some(0);
    }
    let mut newly = Vec::new();
    for t in 1..=params.steps {
        newly.clear();
        for u in 0..n as u32 {
            let mut exposure = [0i32; 2];
            for &v in graph.out_neighbors(u) {
                for k in 0..2 {
                    if step_of[k][v as usize].is_some_and(|s| s < t) {
                        exposure[k] += 1;
                    }
                }
            }
            if step_of[0][u as usize].is_none() {
                let p = (params.base_hate + params.per_exposure_hate * exposure[0] as f64)
                    * (1.0 - params.counter_inhibition).powi(exposure[1]);
                if rng.random_bool(p.clamp(0.0, 1.0)) {
                    newly.push((0, u));
                }
            }
            if step_of[1][u as usize].is_none() {
                let p = params.base_counter + params.per_exposure_counter * exposure[1] as f64;
                if rng.random_bool(p.clamp(0.0, 1.0)) {
                    newly.push((1, u));
                }
            }
        }
        for &(k, u) in &newly {
            step_of[k][u as usize] = Some(t);
        }
    }
    let mut events = Vec::new();
    for (k, kind) in ActivationKind::ALL.into_iter().enumerate() {
        for (u, s) in step_of[k].iter().enumerate() {
            if let Some(s) = s {
                events.push(ActivationEvent {
                    user: u as u32,
                    time: params.start + *s as i64 * params.step_seconds,
                    kind,
                    tweet_id: String::new(),
                });
            }
        }
    }
    Cascade::new(events, params.start + params.steps as i64 * params.step_seconds)
}

/// Activations placed without regard to the graph: `count` distinct users
/// per kind chosen uniformly, each at a uniformly random step.
pub fn independent_cascade(
    n: usize,
    counts: [usize; 2],
    steps: u32,
    start: Timestamp,
    step_seconds: i64,
    seed: u64,
) -> Cascade {
    let mut rng = seeds::rng(seed);
    let mut users: Vec<u32> = (0..n as u32).collect();
    let mut events = Vec::new();
    for (k, kind) in ActivationKind::ALL.into_iter().enumerate() {
        users.shuffle(&mut rng);
        for &u in users.iter().take(counts[k].min(n)) {
            let s = rng.random_range(0..=steps) as i64;
            events.push(ActivationEvent {
                user: u,
                time: start + s * step_seconds,
                kind,
                tweet_id: String::new(),
            });
        }
    }
    Cascade::new(events, start + steps as i64 * step_seconds)
}

/// Sets covid flags on every node and categories from the cascade's
/// activation kinds (users with none become Neutral).
pub fn categorize_from_cascade(graph: &mut SocialGraph, cascade: &Cascade) {
    let n = graph.num_nodes();
    let mut kinds = vec![[0usize; 2]; n];
    for e in &cascade.events {
        kinds[e.user as usize][e.kind.index()] = 1;
    }
    for (u, k) in kinds.iter().enumerate() {
        graph
            .set_attributes(u as u32, true, UserCategory::from_counts(k[0], k[1]))
            .expect("flagged");
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusConfig {
    pub users: usize,
    /// Records that survive filtering.
    pub records: usize,
    pub mean_out_degree: f64,
    pub window: Window,
    pub seed: u64,
    pub hazard: HazardParams,
    /// Extra raw lines that the filter must drop.
    pub duplicates: usize,
    pub out_of_window: usize,
    pub off_topic: usize,
    pub malformed: usize,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        let window = Window::default();
        Self {
            users: 200,
            records: 1000,
            mean_out_degree: 8.0,
            seed: 2020,
            hazard: HazardParams {
                steps: window.num_days() as u32 - 1,
                seed_hate: 4,
                seed_counter: 4,
                base_hate: 0.0001,
                per_exposure_hate: 0.0006,
                base_counter: 0.00008,
                per_exposure_counter: 0.0003,
                counter_inhibition: 0.2,
                start: window.start_ts(),
                step_seconds: 86_400,
            },
            window,
            duplicates: 25,
            out_of_window: 15,
            off_topic: 30,
            malformed: 5,
        }
    }
}

/// Generated inputs: raw JSONL lines, `tweet_id,label` rows and
/// `src<TAB>dst` edges, each already formatted.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticCorpus {
    pub record_lines: Vec<String>,
    pub labels: Vec<(String, Label)>,
    pub edges: Vec<(String, String)>,
    pub user_ids: Vec<String>,
}

const COVID_TERMS: &[&str] = &["covid19", "coronavirus", "covid-19", "corona virus", "covid 19"];
const HATE_TAGS: &[&str] = &[
    "#ChinaVirus",
    "#KungFlu",
    "#wuhanvirus",
    "#ChineseVirus",
    "#MakeChinaPay",
    "#CCPVirus",
];
const COUNTER_TAGS: &[&str] = &[
    "#IAmNotAVirus",
    "#WashTheHate",
    "#RacismIsAVirus",
    "#HateIsAVirus",
    "#StopAAPIHate",
];
const NEUTRAL_LINES: &[&str] = &[
    "cases are rising again in our county, please stay home",
    "new testing site opened downtown today",
    "the vaccine trial results look promising",
    "schools will stay remote until further notice",
    "wear a mask and keep your distance",
    "hospital capacity update from the health department",
    "working from home again this week",
    "grocery delivery slots are hard to find",
];
const HATE_LINES: &[&str] = &[
    "they did this to us and they should pay",
    "stop buying their cheap junk, it is all their fault",
    "disgusting lies from them, never trust them",
    "this is a bad, evil cover up",
    "angry that nobody blames them for this",
];
const COUNTER_LINES: &[&str] = &[
    "stand together with our asian neighbors, hate is not the answer",
    "racism is wrong, support your friends and neighbors",
    "love and kindness will get us through this",
    "please report harassment and protect each other",
    "we are all in this together, be kind",
];

fn pick<'a>(rng: &mut seeds::Rng, xs: &[&'a str]) -> &'a str {
    xs[rng.random_range(0..xs.len())]
}

fn compose(rng: &mut seeds::Rng, label: Label) -> String {
    let covid = pick(rng, COVID_TERMS);
    let mut text = match label {
        Label::Neutral => {
            let mut t = format!("{} {}", pick(rng, NEUTRAL_LINES), covid);
            // Some neutral posts quote the tags they report on.
            if rng.random_bool(0.08) {
                t.push(' ');
                let tags = if rng.random_bool(0.5) { HATE_TAGS } else { COUNTER_TAGS };
                t.push_str(pick(rng, tags));
            }
            t
        }
        Label::Hate => format!("{} {} {}", pick(rng, HATE_TAGS), pick(rng, HATE_LINES), covid),
        Label::Counterspeech => format!("{} {} {}", pick(rng, COUNTER_TAGS), pick(rng, COUNTER_LINES), covid),
    };
    if rng.random_bool(0.3) {
        text.push_str(&format!(" https://news.example/{}", rng.random_range(1000..9999)));
    }
    if rng.random_bool(0.2) {
        text = format!("@user{} {}", rng.random_range(1..500), text);
    }
    if label == Label::Hate && rng.random_bool(0.3) {
        text = text.to_uppercase();
    }
    if rng.random_bool(0.25) {
        text.push_str(if label == Label::Neutral { "." } else { "!!" });
    }
    text
}

fn record_json(id: &str, user: &str, ts: Timestamp, text: &str) -> String {
    serde_json::json!({ "id": id, "user_id": user, "created_at": format_timestamp(ts), "text": text }).to_string()
}

/// A follower graph, a contagion cascade on it and a labeled corpus whose
/// first hate/counterspeech posts match the cascade.
pub fn synthetic_corpus(cfg: &CorpusConfig) -> SyntheticCorpus {
    let mut rng = seeds::rng(cfg.seed);
    let n = cfg.users;
    let user_ids: Vec<String> = (0..n).map(|i| format!("u{:04}", i + 1)).collect();
    let m = (cfg.mean_out_degree * n as f64).round() as usize;
    let edges_idx = random_edges(n, m, &mut rng);
    let mut ids = IdMap::new();
    for id in &user_ids {
        ids.intern(id);
    }
    let (graph, _, _) = SocialGraph::from_edges(ids, &edges_idx);
    let cascade = hazard_cascade(&graph, &cfg.hazard, rng.random());

    let start = cfg.window.start_ts();
    let end = cfg.window.end_ts();
    // (time, user, label)
    let mut posts: Vec<(Timestamp, usize, Label)> = Vec::new();
    let mut act: Vec<[Option<Timestamp>; 2]> = vec![[None; 2]; n];
    for e in &cascade.events {
        let t = (e.time + rng.random_range(0..e_step(cfg))).min(end);
        act[e.user as usize][e.kind.index()] = Some(t);
        let label = match e.kind {
            ActivationKind::Hate => Label::Hate,
            ActivationKind::Counterspeech => Label::Counterspeech,
        };
        posts.push((t, e.user as usize, label));
    }
    // Heavy-tailed activity: weight ~ rank^-1.
    let mut weights: Vec<f64> = (0..n).map(|i| 1.0 / (i as f64 + 1.0)).collect();
    weights.shuffle(&mut rng);
    let total_w: f64 = weights.iter().sum();
    while posts.len() < cfg.records {
        let mut x = rng.random_range(0.0..total_w);
        let mut u = 0;
        while u + 1 < n && x >= weights[u] {
            x -= weights[u];
            u += 1;
        }
        let t = rng.random_range(start..=end);
        let label = ActivationKind::ALL
            .iter()
            .filter_map(|k| act[u][k.index()].filter(|&a| t > a).map(|_| *k))
            .find(|_| rng.random_bool(0.6))
            .map_or(Label::Neutral, |k| match k {
                ActivationKind::Hate => Label::Hate,
                ActivationKind::Counterspeech => Label::Counterspeech,
            });
        posts.push((t, u, label));
    }
    posts.sort_by_key(|&(t, u, _)| (t, u));

    let mut record_lines = Vec::new();
    let mut labels = Vec::new();
    for (i, &(t, u, label)) in posts.iter().enumerate() {
        let id = format!("{}", 1_000_000 + i);
        let text = compose(&mut rng, label);
        record_lines.push(record_json(&id, &user_ids[u], t, &text));
        labels.push((id, label));
    }
    let mut extra = Vec::new();
    for _ in 0..cfg.duplicates {
        let i = rng.random_range(0..record_lines.len());
        extra.push(record_lines[i].clone());
    }
    let mut next_id = 2_000_000;
    for k in 0..cfg.out_of_window {
        let u = rng.random_range(0..n);
        let t = if k % 2 == 0 {
            start - rng.random_range(86_400..86_400 * 30)
        } else {
            end + rng.random_range(86_400..86_400 * 30)
        };
        let id = format!("{next_id}");
        next_id += 1;
        extra.push(record_json(&id, &user_ids[u], t, &compose(&mut rng, Label::Neutral)));
        labels.push((id, Label::Neutral));
    }
    for _ in 0..cfg.off_topic {
        let u = rng.random_range(0..n);
        let id = format!("{next_id}");
        next_id += 1;
        extra.push(record_json(
            &id,
            &user_ids[u],
            rng.random_range(start..=end),
            "lovely weather for a walk today",
        ));
    }
    for k in 0..cfg.malformed {
        extra.push(match k % 3 {
            0 => "{\"id\": \"broken\", \"user_id\": ".to_string(),
            1 => "{\"id\":\"3000000\",\"user_id\":\"u0001\",\"created_at\":\"not a date\",\"text\":\"covid19\"}"
                .to_string(),
            _ => "plain text line".to_string(),
        });
    }
    // Interleave extras deterministically.
    for line in extra {
        let at = rng.random_range(0..=record_lines.len());
        record_lines.insert(at, line);
    }
    let edges = graph
        .edges()
        .map(|(u, v)| (user_ids[u as usize].clone(), user_ids[v as usize].clone()))
        .collect();
    SyntheticCorpus {
        record_lines,
        labels,
        edges,
        user_ids,
    }
}

fn e_step(cfg: &CorpusConfig) -> i64 {
    cfg.hazard.step_seconds.max(1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{filter_lines, KeywordSet, LabelMap};

    #[test]
    fn random_edges_are_simple() {
        let mut rng = seeds::rng(1);
        let e = random_edges(30, 200, &mut rng);
        assert_eq!(e.len(), 200);
        let g = SocialGraph::from_index_edges(30, &e);
        assert_eq!(g.num_edges(), 200);
        assert_eq!(random_edges(2, 10, &mut rng).len(), 2);
    }

    #[test]
    fn blocks_and_oracle() {
        let blocks = [
            Block {
                category: UserCategory::Hate,
                size: 100,
                assortative: true,
            },
            Block {
                category: UserCategory::Counterspeech,
                size: 100,
                assortative: true,
            },
        ];
        let g = planted_blocks(&blocks, 0.05, 0.01, 4);
        assert_eq!(g.num_nodes(), 200);
        let base = configuration_baseline(&g);
        let row: f64 = base[0].iter().flatten().sum();
        assert!((row - 1.0).abs() < 1e-12);
        assert!((base[0][0].unwrap() - 0.5).abs() < 0.05);
    }

    #[test]
    fn hazard_seeds_and_times() {
        let g = random_graph(100, 600, 1.0, 3);
        let p = HazardParams {
            steps: 5,
            seed_hate: 7,
            seed_counter: 0,
            base_hate: 0.0,
            per_exposure_hate: 0.0,
            base_counter: 0.0,
            ..Default::default()
        };
        let c = hazard_cascade(&g, &p, 1);
        assert_eq!(c.count(ActivationKind::Hate), 7);
        assert!(c.events.iter().all(|e| e.time == p.start));
        let c2 = hazard_cascade(
            &g,
            &HazardParams {
                per_exposure_hate: 1.0,
                ..p
            },
            1,
        );
        assert!(c2.count(ActivationKind::Hate) > 7);
        assert_eq!(hazard_cascade(&g, &p, 1), c);
    }

    #[test]
    fn independent_counts() {
        let c = independent_cascade(50, [10, 5], 20, 0, 60, 9);
        assert_eq!(
            (c.count(ActivationKind::Hate), c.count(ActivationKind::Counterspeech)),
            (10, 5)
        );
        assert!(c.events.iter().all(|e| (0..=20 * 60).contains(&e.time)));
    }

    #[test]
    fn corpus_filters_to_target_size() {
        let cfg = CorpusConfig::default();
        let corpus = synthetic_corpus(&cfg);
        let labels: LabelMap = corpus.labels.iter().cloned().collect();
        let out = filter_lines(
            &corpus.record_lines,
            &KeywordSet::builtin(),
            Some(&labels),
            Some(&cfg.window),
        );
        assert_eq!(out.records.len(), cfg.records);
        assert_eq!(out.report.dropped_duplicate as usize, cfg.duplicates);
        assert_eq!(out.report.dropped_window as usize, cfg.out_of_window);
        assert_eq!(out.report.dropped_nomatch as usize, cfg.off_topic);
        assert_eq!(out.report.malformed as usize, cfg.malformed);
        assert_eq!(out.report.unlabeled, 0);
        let hate = out.records.iter().filter(|r| r.label == Some(Label::Hate)).count();
        assert!(hate > 10, "hate records {hate}");
        assert_eq!(synthetic_corpus(&cfg), corpus);
    }
}
