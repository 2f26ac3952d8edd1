//! WebAssembly entry points for the demo page in `www/`.
//!
//! Every export takes plain numbers or a string and returns a JSON document.
//! Failures come back as `{"error": "..."}` so the page can show them inline.

use std::sync::OnceLock;

use hatenet_core::cascade::{contagion_report, ContagionConfig, RiskConfig, RiskPair};
use hatenet_core::classify::{
    extract_combined_features, extract_linguistic_features, train, ClassifierModel, Hyper, LINGUISTIC_FEATURES,
};
use hatenet_core::graph::{homophily_report, HomophilyConfig, SocialGraph};
use hatenet_core::ingest::{filter_lines, KeywordSet, LabelMap};
use hatenet_core::stats::sentiment_score;
use hatenet_core::synth::{self, Block, CorpusConfig, HazardParams};
use hatenet_core::text::hashtags_lower;
use hatenet_core::{seeds, svg, Label, UserCategory};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn error(msg: impl ToString) -> String {
    json!({ "error": msg.to_string() }).to_string()
}

fn initial(c: UserCategory) -> char {
    c.as_str().chars().next().unwrap_or('?').to_ascii_uppercase()
}

fn matrix_json(m: &[[Option<f64>; 4]; 4]) -> Value {
    m.iter()
        .map(|row| row.iter().map(|c| json!(c)).collect::<Vec<_>>())
        .collect()
}

/// Planted hate and counterspeech blocks of `block_size` nodes inside a
/// neutral population of `neutral_size`. Blocks link internally `boost`
/// times more often than the base probability `p`.
#[wasm_bindgen]
pub fn homophily_demo(block_size: u32, neutral_size: u32, p: f64, boost: f64, replicates: u32, seed: u64) -> String {
    let (b, n) = (block_size.clamp(2, 400) as usize, neutral_size.min(1200) as usize);
    if !(p > 0.0 && p * boost <= 1.0 && boost >= 1.0) {
        return error("need 0 < p, boost >= 1 and p * boost <= 1");
    }
    let blocks = [
        Block {
            category: UserCategory::Hate,
            size: b,
            assortative: true,
        },
        Block {
            category: UserCategory::Counterspeech,
            size: b,
            assortative: true,
        },
        Block {
            category: UserCategory::Neutral,
            size: n,
            assortative: false,
        },
    ];
    let g = synth::planted_blocks(&blocks, p * boost, p, seed);
    let cfg = HomophilyConfig {
        replicates: replicates.clamp(2, 200) as usize,
        seed,
        ..HomophilyConfig::default()
    };
    let report = match homophily_report(&g, &cfg) {
        Ok(r) => r,
        Err(e) => return error(e),
    };
    let cats = [UserCategory::Hate, UserCategory::Counterspeech, UserCategory::Neutral];
    let mut bars = Vec::new();
    for a in cats {
        for c in cats {
            if let Some(r) = report.ratio[a.matrix_index().unwrap()][c.matrix_index().unwrap()] {
                bars.push((format!("{}-{}", initial(a), initial(c)), r));
            }
        }
    }
    json!({
        "nodes": g.num_nodes(),
        "edges": g.num_edges(),
        "ratio": matrix_json(&report.ratio),
        "observed": matrix_json(&report.observed.as_matrix()),
        "svg": svg::ratio_bars("Connectivity relative to shuffled baseline", &bars),
    })
    .to_string()
}

/// Hazard cascade on a random follower graph, with the hate->hate and
/// counterspeech->hate risk curves against time-shuffled baselines.
#[wasm_bindgen]
pub fn contagion_demo(
    nodes: u32,
    out_degree: f64,
    per_exposure: f64,
    inhibition: f64,
    replicates: u32,
    seed: u64,
) -> String {
    let n = nodes.clamp(20, 3000) as usize;
    if !(out_degree > 0.0 && (0.0..=1.0).contains(&per_exposure) && (0.0..=1.0).contains(&inhibition)) {
        return error("need out_degree > 0 and per_exposure, inhibition in [0, 1]");
    }
    let mut rng = seeds::rng(seed);
    let edges = synth::random_edges(n, (n as f64 * out_degree) as usize, &mut rng);
    let mut g = SocialGraph::from_index_edges(n, &edges);
    let params = HazardParams {
        per_exposure_hate: per_exposure,
        counter_inhibition: inhibition,
        ..HazardParams::default()
    };
    let cascade = synth::hazard_cascade(&g, &params, seeds::derive_seed(seed, 1));
    synth::categorize_from_cascade(&mut g, &cascade);
    let cfg = ContagionConfig {
        n_max: 5,
        replicates: replicates.clamp(2, 200) as usize,
        seed: seeds::derive_seed(seed, 2),
        risk: RiskConfig::default(),
    };
    let curves = match contagion_report(&g, &cascade, &[RiskPair::HATE_HATE, RiskPair::COUNTER_HATE], &cfg) {
        Ok(c) => c,
        Err(e) => return error(e),
    };
    let series: Vec<svg::RiskSeries> = curves.iter().map(svg::RiskSeries::from_curve).collect();
    let table: Vec<Value> = curves
        .iter()
        .flat_map(|c| {
            c.levels.iter().map(move |l| {
                json!({
                    "pair": c.pair.to_string(),
                    "n": l.n,
                    "exposed": l.exposed,
                    "risk": l.risk,
                    "baseline_mean": l.baseline_mean,
                    "baseline_std": l.baseline_std,
                })
            })
        })
        .collect();
    json!({
        "activations": { "hate": cascade.count(hatenet_core::ActivationKind::Hate), "counterspeech": cascade.count(hatenet_core::ActivationKind::Counterspeech) },
        "levels": table,
        "svg": svg::risk_chart(&series),
    })
    .to_string()
}

fn model() -> &'static Result<ClassifierModel, String> {
    static MODEL: OnceLock<Result<ClassifierModel, String>> = OnceLock::new();
    MODEL.get_or_init(|| {
        let cfg = CorpusConfig::default();
        let corpus = synth::synthetic_corpus(&cfg);
        let labels: LabelMap = corpus.labels.iter().cloned().collect();
        let kw = KeywordSet::builtin();
        let out = filter_lines(&corpus.record_lines, &kw, Some(&labels), Some(&cfg.window));
        let examples = out
            .records
            .iter()
            .filter_map(|r| Some((extract_combined_features(&r.text, &kw).ok()?, r.label?)))
            .collect::<Vec<_>>();
        let hyper = Hyper {
            batch_size: 8,
            epochs: 20,
            learning_rate: 0.05,
            standardize: true,
        };
        train(&examples, hyper, cfg.seed).map_err(|e| e.to_string())
    })
}

/// Keyword matches, hashtags, sentiment, the most active linguistic
/// features and a label from a classifier trained on the synthetic corpus.
#[wasm_bindgen]
pub fn analyze_text(text: &str) -> String {
    let kw = KeywordSet::builtin();
    let matched: Vec<Value> = kw
        .entries()
        .iter()
        .filter(|k| kw.match_text(text).contains(&k.text.as_str()))
        .map(|k| json!({ "keyword": k.text, "class": k.class.to_string() }))
        .collect();
    let ling = extract_linguistic_features(text);
    let mut top: Vec<(usize, f64)> = ling
        .values
        .iter()
        .copied()
        .enumerate()
        .filter(|&(_, v)| v != 0.0)
        .collect();
    top.sort_by(|a, b| b.1.abs().total_cmp(&a.1.abs()).then(a.0.cmp(&b.0)));
    top.truncate(12);
    let prediction = match (model(), extract_combined_features(text, &kw)) {
        (Ok(m), Ok(fv)) => match m.predict(&fv) {
            Ok(p) => json!({
                "label": p.label.as_str(),
                "probabilities": Label::ALL.iter().map(|l| (l.as_str().to_string(), json!(p.probabilities[l.index()]))).collect::<serde_json::Map<_, _>>(),
            }),
            Err(e) => json!({ "error": e.to_string() }),
        },
        (Err(e), _) => json!({ "error": e }),
        (_, Err(e)) => json!({ "error": e.to_string() }),
    };
    json!({
        "keywords": matched,
        "hashtags": hashtags_lower(text),
        "sentiment": sentiment_score(text),
        "features": top.iter().map(|&(i, v)| json!({ "name": LINGUISTIC_FEATURES[i], "value": v })).collect::<Vec<_>>(),
        "prediction": prediction,
    })
    .to_string()
}
