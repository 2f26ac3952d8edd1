use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::{Path, PathBuf};

use chrono::NaiveDate;

use super::{Command, Manifest, Outcome, PipelineError, RunConfig};
use crate::cascade::{self, build_cascade, contagion_report, default_n_max, ContagionConfig, RiskConfig};
use crate::classify::{self, cross_validate, extract, train, ClassifyError, EvalReport, FeatureVector, SchemaId};
use crate::graph::{self, homophily_report, HomophilyConfig, IdMap, ShuffleConfig, SocialGraph};
use crate::ingest::{self, read_labels, read_records, KeywordSet, TweetRecord};
use crate::labels::{Label, UserCategory};
use crate::stats::{self, fmt_f64, Phase};
use crate::svg;
use crate::synth::{synthetic_corpus, CorpusConfig};
use crate::time::{format_timestamp, Timestamp};

fn validation(msg: impl Into<String>) -> PipelineError {
    PipelineError::Validation(msg.into())
}

fn data(msg: impl std::fmt::Display) -> PipelineError {
    PipelineError::Data(msg.to_string())
}

fn internal(msg: impl std::fmt::Display) -> PipelineError {
    PipelineError::Internal(msg.to_string())
}

const RECORDS: &str = "records.jsonl";
const PREDICTED_LABELS: &str = "labels_predicted.csv";

/// Output directory bookkeeping for one command.
struct Ctx<'a> {
    cfg: &'a RunConfig,
    out: &'a Path,
    manifest: Manifest,
    artifacts: Vec<String>,
}

impl<'a> Ctx<'a> {
    fn new(cfg: &'a RunConfig, command: Command) -> Self {
        let mut manifest = Manifest::new(command.name());
        manifest.param("window", format!("{}..{}", cfg.window.start, cfg.window.end));
        manifest.param("keywords", &cfg.input.keywords);
        Self {
            cfg,
            out: &cfg.run.output,
            manifest,
            artifacts: Vec::new(),
        }
    }

    fn read_input(&mut self, role: &str, path: &Path) -> Result<Vec<u8>, PipelineError> {
        let bytes =
            std::fs::read(path).map_err(|e| validation(format!("cannot read {role} file {}: {e}", path.display())))?;
        self.manifest.input_bytes(role, path, &bytes);
        Ok(bytes)
    }

    fn upstream_opt(&mut self, name: &str) -> Result<Option<Vec<u8>>, PipelineError> {
        let path = self.out.join(name);
        if !path.is_file() {
            return Ok(None);
        }
        let bytes = std::fs::read(&path).map_err(|e| internal(format!("cannot read {}: {e}", path.display())))?;
        self.manifest.input_bytes("artifact", Path::new(name), &bytes);
        Ok(Some(bytes))
    }

    fn upstream(&mut self, name: &str, producer: Command) -> Result<Vec<u8>, PipelineError> {
        self.upstream_opt(name)?.ok_or_else(|| {
            validation(format!(
                "{} not found in {}; run `{producer}` first",
                name,
                self.out.display()
            ))
        })
    }

    fn emit(&mut self, name: &str, bytes: &[u8]) -> Result<(), PipelineError> {
        let path = self.out.join(name);
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir).map_err(|e| internal(format!("cannot create {}: {e}", dir.display())))?;
        }
        std::fs::write(&path, bytes).map_err(|e| internal(format!("cannot write {}: {e}", path.display())))?;
        self.manifest.artifacts.push(super::ArtifactEntry {
            path: name.to_string(),
            sha256: super::sha256_hex(bytes),
        });
        self.artifacts.push(name.to_string());
        Ok(())
    }

    fn emit_csv(&mut self, name: &str, f: impl FnOnce(&mut Vec<u8>) -> csv::Result<()>) -> Result<(), PipelineError> {
        let mut buf = Vec::new();
        f(&mut buf).map_err(|e| internal(format!("{name}: {e}")))?;
        self.emit(name, &buf)
    }

    fn warn(&mut self, msg: String) {
        self.manifest.warnings.push(msg);
    }

    fn finish(mut self, command: Command) -> Result<Outcome, PipelineError> {
        let name = format!("manifest_{}.json", command.name());
        let json = self.manifest.to_json()?;
        let path = self.out.join(&name);
        std::fs::write(&path, json).map_err(|e| internal(format!("cannot write {}: {e}", path.display())))?;
        self.artifacts.push(name);
        Ok(Outcome {
            command,
            artifacts: self.artifacts,
            warnings: self.manifest.warnings,
        })
    }

    fn keywords(&mut self) -> Result<KeywordSet, PipelineError> {
        let source = self.cfg.input.keywords.clone();
        if source == KeywordSet::BUILTIN_TOKEN {
            return Ok(KeywordSet::builtin());
        }
        let bytes = self.read_input("keywords", Path::new(&source))?;
        let doc = String::from_utf8(bytes).map_err(|_| data(format!("keyword file {source} is not UTF-8")))?;
        KeywordSet::parse(&doc).map_err(data)
    }

    /// Filtered records from `ingest`, with classifier labels filled in for
    /// records that have none.
    fn records(&mut self) -> Result<Vec<TweetRecord>, PipelineError> {
        let kw = self.keywords()?;
        let bytes = self.upstream(RECORDS, Command::Ingest)?;
        let mut records = read_records(&bytes[..], &kw).map_err(|e| data(format!("{RECORDS}: {e}")))?;
        if let Some(pred) = self.upstream_opt(PREDICTED_LABELS)? {
            let map = read_labels(&pred[..]).map_err(|e| data(format!("{PREDICTED_LABELS}: {e}")))?;
            for r in records.iter_mut().filter(|r| r.label.is_none()) {
                r.label = map.get(&r.tweet_id).copied();
            }
        }
        let unlabeled = records.iter().filter(|r| r.label.is_none()).count();
        if unlabeled > 0 {
            self.warn(format!("{unlabeled} records have no label"));
        }
        Ok(records)
    }

    /// Follower graph over record authors plus every edge endpoint.
    fn graph(&mut self, records: &[TweetRecord]) -> Result<SocialGraph, PipelineError> {
        let path = self
            .cfg
            .input
            .edges
            .clone()
            .ok_or_else(|| validation("input.edges is required"))?;
        let bytes = self.read_input("edges", &path)?;
        let mut ids = IdMap::new();
        let authors: BTreeSet<&str> = records.iter().map(|r| r.user_id.as_str()).collect();
        for a in authors {
            ids.intern(a);
        }
        let (graph, report) = graph::load_edges(&bytes[..], ids).map_err(|e| data(format!("edges: {e}")))?;
        self.manifest.param("edge_lines", report.lines);
        self.manifest.param("edges_retained", report.retained);
        self.manifest.param("edges_duplicate", report.duplicates);
        self.manifest.param("edges_self_loop", report.self_loops);
        self.manifest.param("edges_malformed", report.malformed.len());
        if let Some((line, _)) = report.malformed.first() {
            self.warn(format!(
                "{} malformed edge lines, first at line {line}",
                report.malformed.len()
            ));
        }
        Ok(graph)
    }
}

pub(super) fn run(command: Command, cfg: &RunConfig) -> Result<Outcome, PipelineError> {
    let mut ctx = Ctx::new(cfg, command);
    match command {
        Command::Ingest => cmd_ingest(&mut ctx)?,
        Command::Classify => cmd_classify(&mut ctx)?,
        Command::Users => cmd_users(&mut ctx)?,
        Command::Timeline => cmd_timeline(&mut ctx)?,
        Command::Homophily => cmd_homophily(&mut ctx)?,
        Command::Contagion => cmd_contagion(&mut ctx)?,
        Command::Report => cmd_report(&mut ctx)?,
    }
    ctx.finish(command)
}

fn cmd_ingest(ctx: &mut Ctx) -> Result<(), PipelineError> {
    let cfg = ctx.cfg;
    let window = cfg.window()?;
    let kw = ctx.keywords()?;
    let records_path = cfg
        .input
        .records
        .clone()
        .ok_or_else(|| validation("input.records is required"))?;
    let bytes = ctx.read_input("records", &records_path)?;
    let labels = match cfg.input.labels.clone() {
        Some(p) => {
            let b = ctx.read_input("labels", &p)?;
            Some(read_labels(&b[..]).map_err(|e| data(format!("labels: {e}")))?)
        }
        None => None,
    };
    let text = String::from_utf8_lossy(&bytes);
    let lines: Vec<String> = text.lines().map(str::to_string).collect();
    let out = ingest::filter_lines(&lines, &kw, labels.as_ref(), Some(&window));
    if out.report.malformed > 0 {
        ctx.warn(format!("{} malformed records skipped", out.report.malformed));
    }

    let mut buf = Vec::new();
    ingest::write_records(&mut buf, &out.records).map_err(internal)?;
    ctx.emit(RECORDS, &buf)?;
    ctx.emit_csv("ingest_report.csv", |w| {
        ingest::write_stats_csv(w, &out.report, &out.stats)
    })?;
    ctx.emit_csv("daily_volume.csv", |w| ingest::write_daily_csv(w, &out.stats))?;
    ctx.emit_csv("ingest_errors.csv", |w| ingest::write_errors_csv(w, &out.report))
}

fn classify_error(e: ClassifyError) -> PipelineError {
    match e {
        ClassifyError::KeywordCount(_) | ClassifyError::InvalidHyper | ClassifyError::InvalidFolds(_) => {
            validation(e.to_string())
        }
        _ => data(e),
    }
}

fn features(records: &[&TweetRecord], schema: SchemaId, kw: &KeywordSet) -> Result<Vec<FeatureVector>, PipelineError> {
    records
        .iter()
        .map(|r| extract(schema, &r.text, kw).map_err(classify_error))
        .collect()
}

fn cmd_classify(ctx: &mut Ctx) -> Result<(), PipelineError> {
    let cfg = ctx.cfg;
    let kw = ctx.keywords()?;
    let records = ctx.records()?;
    let labeled: Vec<&TweetRecord> = records.iter().filter(|r| r.label.is_some()).collect();
    let unlabeled: Vec<&TweetRecord> = records.iter().filter(|r| r.label.is_none()).collect();
    let golds: Vec<Label> = labeled.iter().map(|r| r.label.expect("filtered")).collect();
    let hyper = cfg.hyper();
    let seed = cfg.classify_seed();
    ctx.manifest.seeds.insert("classify".into(), seed);
    ctx.manifest.param("folds", cfg.classify.folds);
    ctx.manifest.param("batch_size", hyper.batch_size);
    ctx.manifest.param("epochs", hyper.epochs);
    ctx.manifest.param("learning_rate", hyper.learning_rate);
    ctx.manifest.param("standardize", hyper.standardize);
    ctx.manifest.param("labeled_records", labeled.len());

    let mut schemas = cfg.feature_sets()?;
    let predict_with = cfg.predict_schema()?;
    let mut reports: Vec<(SchemaId, EvalReport)> = Vec::new();
    let mut models = BTreeMap::new();
    if !schemas.contains(&predict_with) {
        schemas.push(predict_with);
    }
    for &schema in &schemas {
        let examples: Vec<(FeatureVector, Label)> = features(&labeled, schema, &kw)?
            .into_iter()
            .zip(golds.iter().copied())
            .collect();
        if cfg.feature_sets()?.contains(&schema) {
            let report = cross_validate(&examples, cfg.classify.folds, hyper, seed).map_err(classify_error)?;
            reports.push((schema, report));
        }
        let model = train(&examples, hyper, seed).map_err(classify_error)?;
        models.insert(schema.name(), (schema, model));
    }

    let rows: Vec<(&str, &EvalReport)> = reports.iter().map(|(s, r)| (s.name(), r)).collect();
    ctx.emit_csv("classification.csv", |w| classify::write_eval_csv(w, &rows))?;
    ctx.emit_csv("classification_confusion.csv", |w| {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["feature_set", "gold", "hate", "counterspeech", "neutral"])?;
        for (s, r) in &reports {
            for g in Label::ALL {
                let c = r.confusion[g.index()];
                out.write_record([
                    s.name(),
                    g.as_str(),
                    &c[0].to_string(),
                    &c[1].to_string(),
                    &c[2].to_string(),
                ])?;
            }
        }
        out.flush()?;
        Ok(())
    })?;
    for (name, (_, model)) in &models {
        ctx.emit(&format!("models/{name}.model"), model.to_text().as_bytes())?;
    }

    let (_, model) = &models[predict_with.name()];
    let fv = features(&unlabeled, predict_with, &kw)?;
    let mut predicted = Vec::with_capacity(fv.len());
    for (r, f) in unlabeled.iter().zip(&fv) {
        predicted.push((r.tweet_id.clone(), model.predict(f).map_err(classify_error)?.label));
    }
    ctx.manifest.param("predicted_records", predicted.len());
    ctx.emit_csv(PREDICTED_LABELS, |w| {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["tweet_id", "label"])?;
        for (id, l) in &predicted {
            out.write_record([id.as_str(), l.as_str()])?;
        }
        out.flush()?;
        Ok(())
    })
}

fn activation_times(users: &BTreeMap<String, cascade::UserSummary>) -> HashMap<String, Timestamp> {
    users
        .iter()
        .filter_map(|(id, s)| s.first.iter().flatten().map(|(t, _)| *t).min().map(|t| (id.clone(), t)))
        .collect()
}

fn cmd_users(ctx: &mut Ctx) -> Result<(), PipelineError> {
    let records = ctx.records()?;
    let users = cascade::categorize_users(&records);
    let activations = activation_times(&users);

    ctx.emit_csv("users.csv", |w| {
        let mut out = csv::Writer::from_writer(w);
        out.write_record([
            "user_id",
            "category",
            "hate",
            "counterspeech",
            "neutral",
            "unlabeled",
            "first_hate",
            "first_counterspeech",
        ])?;
        let first = |f: &Option<(Timestamp, String)>| f.as_ref().map(|(t, _)| format_timestamp(*t)).unwrap_or_default();
        for (id, s) in &users {
            out.write_record([
                id.clone(),
                s.category().as_str().to_string(),
                s.hate.to_string(),
                s.counterspeech.to_string(),
                s.neutral.to_string(),
                s.unlabeled.to_string(),
                first(&s.first[0]),
                first(&s.first[1]),
            ])?;
        }
        out.flush()?;
        Ok(())
    })?;

    let group = |cat: UserCategory| -> Vec<&str> {
        users
            .iter()
            .filter(|(_, s)| s.category() == cat)
            .map(|(id, _)| id.as_str())
            .collect()
    };
    let (hate, counter) = (group(UserCategory::Hate), group(UserCategory::Counterspeech));
    let mut rows = Vec::new();
    let mut omitted = Vec::new();
    for (phase, prefix) in [(Phase::Pre, "pre_"), (Phase::Post, "post_")] {
        let a = stats::behavior_profiles(&records, hate.iter().copied(), &activations, phase);
        let b = stats::behavior_profiles(&records, counter.iter().copied(), &activations, phase);
        omitted.push((prefix, a.omitted, b.omitted));
        rows.extend(stats::compare_profiles(prefix, &a, &b));
    }
    ctx.emit_csv("user_comparisons.csv", |w| stats::write_comparisons_csv(w, &rows))?;

    let mut counts = [0usize; 5];
    for s in users.values() {
        counts[s.category().matrix_index().unwrap_or(4)] += 1;
    }
    ctx.emit_csv("users_summary.csv", |w| {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["metric", "value"])?;
        out.write_record(["users", &users.len().to_string()])?;
        for (i, name) in ["hate", "counterspeech", "dual", "neutral", "uncategorized"]
            .iter()
            .enumerate()
        {
            out.write_record([&format!("{name}_users"), &counts[i].to_string()])?;
        }
        for (prefix, a, b) in &omitted {
            out.write_record([&format!("{prefix}omitted_hate_users"), &a.to_string()])?;
            out.write_record([&format!("{prefix}omitted_counterspeech_users"), &b.to_string()])?;
        }
        out.flush()?;
        Ok(())
    })?;
    let hate_tail = stats::tail_distribution(&records, Label::Hate);
    let counter_tail = stats::tail_distribution(&records, Label::Counterspeech);
    ctx.emit_csv("tail_hate.csv", |w| stats::write_histogram_csv(w, &hate_tail))?;
    ctx.emit_csv("tail_counterspeech.csv", |w| {
        stats::write_histogram_csv(w, &counter_tail)
    })
}

fn cmd_timeline(ctx: &mut Ctx) -> Result<(), PipelineError> {
    let cfg = ctx.cfg;
    let window = cfg.window()?;
    let records = ctx.records()?;
    let series = stats::daily_counts(&records, &window);
    let w = cfg.timeline.window_days;
    ctx.manifest.param("window_days", w);
    ctx.emit_csv("daily_series.csv", |out| stats::write_series_csv(out, &series))?;

    let configured = cfg.event_days()?;
    let mut rows: Vec<(Label, NaiveDate, String, &str)> = Vec::new();
    for label in [Label::Hate, Label::Counterspeech] {
        let events = if configured.is_empty() {
            series.peak_day_with_margin(label, w as usize).into_iter().collect()
        } else {
            configured.clone()
        };
        for day in events {
            let (value, status) = match stats::window_change(&series, label, day, w) {
                Ok(Some(p)) => (fmt_f64(p), "ok"),
                Ok(None) => (String::new(), "undefined"),
                Err(_) => (String::new(), "out_of_range"),
            };
            rows.push((label, day, value, status));
        }
    }
    ctx.emit_csv("window_change.csv", |out| {
        let mut out = csv::Writer::from_writer(out);
        out.write_record(["label", "event_day", "window_days", "percent_change", "status"])?;
        for (label, day, value, status) in &rows {
            out.write_record([label.as_str(), &day.to_string(), &w.to_string(), value, status])?;
        }
        out.flush()?;
        Ok(())
    })
}

fn cmd_homophily(ctx: &mut Ctx) -> Result<(), PipelineError> {
    let cfg = ctx.cfg;
    let window = cfg.window()?;
    let records = ctx.records()?;
    let mut graph = ctx.graph(&records)?;
    match cfg.input.nodes.clone() {
        Some(p) => {
            let bytes = ctx.read_input("nodes", &p)?;
            let attrs = graph::read_node_attributes(&bytes[..]).map_err(|e| data(format!("nodes: {e}")))?;
            let unknown = graph
                .apply_attributes(&attrs)
                .map_err(|e| data(format!("nodes: {e}")))?;
            if unknown > 0 {
                ctx.warn(format!(
                    "{unknown} node attribute rows name users missing from the graph"
                ));
            }
        }
        None => build_cascade(&records, &graph, &window)
            .map_err(data)?
            .apply_to(&mut graph),
    }
    let hcfg = HomophilyConfig {
        replicates: cfg.homophily.replicates,
        seed: cfg.homophily_seed(),
        shuffle: ShuffleConfig {
            swap_attempts_factor: cfg.homophily.swap_factor,
            seed: 0,
            preserve_covid_partition: cfg.homophily.preserve_covid_partition,
        },
        direction: cfg.homophily_direction()?,
        mode: cfg.homophily_mode()?,
    };
    ctx.manifest.seeds.insert("homophily".into(), hcfg.seed);
    ctx.manifest.param("replicates", hcfg.replicates);
    ctx.manifest.param("swap_factor", hcfg.shuffle.swap_attempts_factor);
    ctx.manifest
        .param("preserve_covid_partition", hcfg.shuffle.preserve_covid_partition);
    ctx.manifest.param("direction", hcfg.direction);
    ctx.manifest.param("mode", &cfg.homophily.mode);
    ctx.manifest.param("nodes", graph.num_nodes());
    ctx.manifest.param("edges", graph.num_edges());

    let ego = graph::ego_stats(&graph).map_err(data)?;
    let report = homophily_report(&graph, &hcfg).map_err(data)?;
    if report.degenerate_replicates > 0 {
        ctx.warn(format!(
            "{} shuffle replicates had nothing to swap",
            report.degenerate_replicates
        ));
    }
    ctx.emit_csv("ego_stats.csv", |w| graph::write_ego_csv(w, &ego))?;
    ctx.emit_csv("connectivity_observed.csv", |w| {
        graph::write_matrix_csv(w, &report.observed.as_matrix())
    })?;
    ctx.emit_csv("baseline_mean.csv", |w| {
        graph::write_matrix_csv(w, &report.baseline_mean)
    })?;
    ctx.emit_csv("baseline_std.csv", |w| graph::write_matrix_csv(w, &report.baseline_std))?;
    ctx.emit_csv("ratio.csv", |w| graph::write_matrix_csv(w, &report.ratio))
}

fn cmd_contagion(ctx: &mut Ctx) -> Result<(), PipelineError> {
    let cfg = ctx.cfg;
    let window = cfg.window()?;
    let records = ctx.records()?;
    let mut graph = ctx.graph(&records)?;
    let build = build_cascade(&records, &graph, &window).map_err(data)?;
    build.apply_to(&mut graph);
    if build.unresolved_users > 0 {
        ctx.warn(format!(
            "{} users with records are missing from the graph",
            build.unresolved_users
        ));
    }
    let risk = RiskConfig {
        direction: cfg.contagion_direction()?,
        population: cfg.population()?,
        include_dual: cfg.contagion.include_dual,
    };
    let pairs = cfg.pairs()?;
    let n_max = if cfg.contagion.n_max > 0 {
        cfg.contagion.n_max
    } else {
        pairs
            .iter()
            .map(|p| default_n_max(&graph, &build.cascade, p.source, &risk, cfg.contagion.min_exposed))
            .max()
            .unwrap_or(1)
    };
    let ccfg = ContagionConfig {
        n_max,
        replicates: cfg.contagion.replicates,
        seed: cfg.contagion_seed(),
        risk,
    };
    ctx.manifest.seeds.insert("contagion".into(), ccfg.seed);
    ctx.manifest.param("replicates", ccfg.replicates);
    ctx.manifest.param("n_max", n_max);
    ctx.manifest.param("direction", risk.direction);
    ctx.manifest.param("population", &cfg.contagion.population);
    ctx.manifest.param("include_dual", risk.include_dual);
    ctx.manifest.param(
        "pairs",
        pairs.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" "),
    );

    let curves = contagion_report(&graph, &build.cascade, &pairs, &ccfg).map_err(data)?;
    if build.cascade.len() < 2 {
        ctx.warn("cascade has fewer than two events; the shuffle baseline is vacuous".into());
    }
    ctx.emit_csv("cascade.csv", |w| cascade::write_cascade_csv(w, &build.cascade, &graph))?;
    ctx.emit_csv("risk_curves.csv", |w| cascade::write_risk_csv(w, &curves))?;
    let counts = build.category_counts();
    ctx.emit_csv("contagion_summary.csv", |w| {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["metric", "value"])?;
        let rows: [(&str, usize); 10] = [
            ("events", build.cascade.len()),
            ("hate_events", build.cascade.count(crate::labels::ActivationKind::Hate)),
            (
                "counterspeech_events",
                build.cascade.count(crate::labels::ActivationKind::Counterspeech),
            ),
            ("hate_users", counts[0]),
            ("counterspeech_users", counts[1]),
            ("dual_users", counts[2]),
            ("neutral_users", counts[3]),
            ("unresolved_users", build.unresolved_users),
            ("n_max", n_max as usize),
            ("replicates", ccfg.replicates),
        ];
        for (k, v) in rows {
            out.write_record([k, &v.to_string()])?;
        }
        out.flush()?;
        Ok(())
    })
}

fn csv_rows(bytes: &[u8], name: &str) -> Result<Vec<Vec<String>>, PipelineError> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(bytes);
    rdr.records()
        .map(|r| {
            r.map(|r| r.iter().map(str::to_string).collect())
                .map_err(|e| data(format!("{name}: {e}")))
        })
        .collect()
}

fn parse_num<T: std::str::FromStr>(s: &str, name: &str) -> Result<T, PipelineError> {
    s.parse().map_err(|_| data(format!("{name}: bad number `{s}`")))
}

fn parse_opt(s: &str, name: &str) -> Result<Option<f64>, PipelineError> {
    if s.is_empty() {
        Ok(None)
    } else {
        parse_num(s, name).map(Some)
    }
}

fn histogram(bytes: &[u8], name: &str) -> Result<BTreeMap<u64, u64>, PipelineError> {
    csv_rows(bytes, name)?
        .iter()
        .map(|r| Ok((parse_num(&r[0], name)?, parse_num(&r[1], name)?)))
        .collect()
}

fn cmd_report(ctx: &mut Ctx) -> Result<(), PipelineError> {
    let mut rendered = 0;
    if let Some(bytes) = ctx.upstream_opt("daily_series.csv")? {
        let rows = csv_rows(&bytes, "daily_series.csv")?;
        let mut days = Vec::with_capacity(rows.len());
        let mut counts = Vec::with_capacity(rows.len());
        for r in &rows {
            days.push(crate::time::parse_date(&r[0]).map_err(data)?);
            counts.push([
                parse_num(&r[1], "daily_series.csv")?,
                parse_num(&r[2], "daily_series.csv")?,
                parse_num(&r[3], "daily_series.csv")?,
            ]);
        }
        ctx.emit("daily_series.svg", svg::daily_series_chart(&days, &counts).as_bytes())?;
        rendered += 1;
    }
    let hate = ctx.upstream_opt("tail_hate.csv")?;
    let counter = ctx.upstream_opt("tail_counterspeech.csv")?;
    if hate.is_some() || counter.is_some() {
        let mut hists = Vec::new();
        if let Some(b) = &hate {
            hists.push(("hate", histogram(b, "tail_hate.csv")?));
        }
        if let Some(b) = &counter {
            hists.push(("counterspeech", histogram(b, "tail_counterspeech.csv")?));
        }
        let refs: Vec<(&str, &BTreeMap<u64, u64>)> = hists.iter().map(|(n, h)| (*n, h)).collect();
        ctx.emit("tail_distribution.svg", svg::tail_chart(&refs).as_bytes())?;
        rendered += 1;
    }
    if let Some(bytes) = ctx.upstream_opt("ratio.csv")? {
        let rows = csv_rows(&bytes, "ratio.csv")?;
        let short = |s: &str| s.chars().next().map(|c| c.to_ascii_uppercase()).unwrap_or('?');
        let cols = ["hate", "counterspeech", "dual", "neutral"];
        let mut bars = Vec::new();
        for r in &rows {
            for (j, col) in cols.iter().enumerate() {
                if let Some(v) = parse_opt(&r[j + 1], "ratio.csv")? {
                    bars.push((format!("{}-{}", short(&r[0]), short(col)), v));
                }
            }
        }
        ctx.emit(
            "homophily_ratio.svg",
            svg::ratio_bars("Connectivity relative to shuffled baseline", &bars).as_bytes(),
        )?;
        rendered += 1;
    }
    if let Some(bytes) = ctx.upstream_opt("risk_curves.csv")? {
        let rows = csv_rows(&bytes, "risk_curves.csv")?;
        let mut series: Vec<svg::RiskSeries> = Vec::new();
        for r in &rows {
            let point = (
                parse_num(&r[1], "risk_curves.csv")?,
                parse_opt(&r[4], "risk_curves.csv")?,
                parse_opt(&r[5], "risk_curves.csv")?,
                parse_opt(&r[6], "risk_curves.csv")?,
            );
            match series.last_mut() {
                Some(s) if s.name == r[0] => s.points.push(point),
                _ => series.push(svg::RiskSeries {
                    name: r[0].clone(),
                    points: vec![point],
                }),
            }
        }
        ctx.emit("risk_curves.svg", svg::risk_chart(&series).as_bytes())?;
        rendered += 1;
    }
    if rendered == 0 {
        return Err(validation(format!(
            "no analysis artifacts found in {}; run the analysis commands first",
            ctx.out.display()
        )));
    }
    Ok(())
}

/// Writes a synthetic dataset (`records.jsonl`, `labels.csv`, `edges.tsv`)
/// and a `hatenet.toml` that runs the full pipeline on it. Returns the file
/// names written.
pub fn generate(dir: &Path, corpus: &CorpusConfig) -> Result<Vec<String>, PipelineError> {
    std::fs::create_dir_all(dir).map_err(|e| validation(format!("cannot create {}: {e}", dir.display())))?;
    let c = synthetic_corpus(corpus);
    let write = |name: &str, body: String| -> Result<String, PipelineError> {
        let path: PathBuf = dir.join(name);
        std::fs::write(&path, body).map_err(|e| internal(format!("cannot write {}: {e}", path.display())))?;
        Ok(name.to_string())
    };
    let mut records = c.record_lines.join("\n");
    records.push('\n');
    let mut labels = String::from("tweet_id,label\n");
    for (id, l) in &c.labels {
        labels.push_str(&format!("{id},{l}\n"));
    }
    let mut edges = String::from("# follower\tfollowee\n");
    for (a, b) in &c.edges {
        edges.push_str(&format!("{a}\t{b}\n"));
    }
    let config = format!(
        r#"# Synthetic corpus: {users} users, {records} retained records, seed {seed}.
# Regenerate with `hatenet generate --out <dir> --seed {seed}`.

[input]
records = "records.jsonl"
labels = "labels.csv"
edges = "edges.tsv"
keywords = "builtin"

[window]
start = "{start}"
end = "{end}"

[classify]
folds = 5
batch_size = 8
epochs = 20
learning_rate = 0.05
standardize = true

[timeline]
window_days = 7

[homophily]
replicates = 100
swap_factor = 10.0

[contagion]
replicates = 100
min_exposed = 20

[run]
seed = {seed}
output = "out"
"#,
        users = corpus.users,
        records = corpus.records,
        seed = corpus.seed,
        start = corpus.window.start,
        end = corpus.window.end,
    );
    Ok(vec![
        write("records.jsonl", records)?,
        write("labels.csv", labels)?,
        write("edges.tsv", edges)?,
        write("hatenet.toml", config)?,
    ])
}
