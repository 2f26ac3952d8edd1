//! Run configuration: a sectioned TOML file whose relative paths resolve
//! against the file's directory.

use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use serde::Deserialize;

use super::{Command, PipelineError};
use crate::cascade::{Population, RiskPair};
use crate::classify::{Hyper, SchemaId};
use crate::graph::ConnectivityMode;
use crate::ingest::KeywordSet;
use crate::labels::Direction;
use crate::seeds;
use crate::time::{parse_date, Window};

/// Environment variable naming the config file used when none is given.
pub const CONFIG_ENV: &str = "HATENET_CONFIG";

#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub input: InputSection,
    pub window: WindowSection,
    pub classify: ClassifySection,
    pub timeline: TimelineSection,
    pub homophily: HomophilySection,
    pub contagion: ContagionSection,
    pub run: RunSection,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InputSection {
    pub records: Option<PathBuf>,
    /// `tweet_id,label` CSV; labels embedded in records are used otherwise.
    pub labels: Option<PathBuf>,
    pub edges: Option<PathBuf>,
    /// `user_id,covid_flag,category` CSV. When given, homophily takes node
    /// categories from it instead of deriving them from the records.
    pub nodes: Option<PathBuf>,
    /// `builtin` or a keyword file.
    pub keywords: String,
}

impl Default for InputSection {
    fn default() -> Self {
        Self {
            records: None,
            labels: None,
            edges: None,
            nodes: None,
            keywords: KeywordSet::BUILTIN_TOKEN.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WindowSection {
    pub start: String,
    pub end: String,
}

impl Default for WindowSection {
    fn default() -> Self {
        let w = Window::default();
        Self {
            start: w.start.to_string(),
            end: w.end.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClassifySection {
    pub folds: usize,
    pub batch_size: usize,
    pub epochs: usize,
    pub learning_rate: f64,
    pub standardize: bool,
    pub feature_sets: Vec<String>,
    /// Feature set whose full-data model labels unlabeled records.
    pub predict_with: String,
    pub seed: Option<u64>,
}

impl Default for ClassifySection {
    fn default() -> Self {
        let h = Hyper::default();
        Self {
            folds: 5,
            batch_size: h.batch_size,
            epochs: h.epochs,
            learning_rate: h.learning_rate,
            standardize: h.standardize,
            feature_sets: SchemaId::ALL.iter().map(|s| s.name().to_string()).collect(),
            predict_with: SchemaId::Combined.name().to_string(),
            seed: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TimelineSection {
    pub window_days: u32,
    /// Event days for spike measurement; each label's peak day when empty.
    pub events: Vec<String>,
}

impl Default for TimelineSection {
    fn default() -> Self {
        Self {
            window_days: 7,
            events: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HomophilySection {
    pub replicates: usize,
    pub swap_factor: f64,
    pub direction: String,
    pub mode: String,
    pub preserve_covid_partition: bool,
    pub seed: Option<u64>,
}

impl Default for HomophilySection {
    fn default() -> Self {
        Self {
            replicates: 100,
            swap_factor: 10.0,
            direction: "out".into(),
            mode: "edge".into(),
            preserve_covid_partition: true,
            seed: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ContagionSection {
    pub replicates: usize,
    pub pairs: Vec<String>,
    /// 0 picks the largest level with at least `min_exposed` exposed users.
    pub n_max: u32,
    pub min_exposed: u64,
    pub direction: String,
    /// `covid` (users with records) or `all`.
    pub population: String,
    pub include_dual: bool,
    pub seed: Option<u64>,
}

impl Default for ContagionSection {
    fn default() -> Self {
        Self {
            replicates: 100,
            pairs: vec![RiskPair::HATE_HATE.to_string(), RiskPair::COUNTER_HATE.to_string()],
            n_max: 0,
            min_exposed: 50,
            direction: "out".into(),
            population: "covid".into(),
            include_dual: false,
            seed: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunSection {
    pub seed: u64,
    /// Worker threads; 0 uses every core.
    pub threads: usize,
    pub output: PathBuf,
}

impl Default for RunSection {
    fn default() -> Self {
        Self {
            seed: 2020,
            threads: 0,
            output: PathBuf::from("out"),
        }
    }
}

fn invalid(msg: impl Into<String>) -> PipelineError {
    PipelineError::Validation(msg.into())
}

fn resolve(base: &Path, p: &mut PathBuf) {
    if p.is_relative() {
        *p = base.join(&*p);
    }
}

impl RunConfig {
    pub fn parse(doc: &str) -> Result<Self, PipelineError> {
        toml::from_str(doc).map_err(|e| invalid(format!("config: {e}")))
    }

    /// Reads `path` and resolves relative input and output paths against
    /// its directory.
    pub fn load(path: &Path) -> Result<Self, PipelineError> {
        let doc = std::fs::read_to_string(path)
            .map_err(|e| invalid(format!("cannot read config {}: {e}", path.display())))?;
        let mut cfg = Self::parse(&doc)?;
        let base = path.parent().unwrap_or(Path::new("."));
        cfg.resolve_paths(base);
        Ok(cfg)
    }

    pub fn resolve_paths(&mut self, base: &Path) {
        for p in [
            &mut self.input.records,
            &mut self.input.labels,
            &mut self.input.edges,
            &mut self.input.nodes,
        ]
        .into_iter()
        .flatten()
        {
            resolve(base, p);
        }
        if self.input.keywords != KeywordSet::BUILTIN_TOKEN {
            let mut k = PathBuf::from(&self.input.keywords);
            resolve(base, &mut k);
            self.input.keywords = k.to_string_lossy().into_owned();
        }
        resolve(base, &mut self.run.output);
    }

    pub fn window(&self) -> Result<Window, PipelineError> {
        let start = parse_date(&self.window.start).map_err(|e| invalid(format!("window.start: {e}")))?;
        let end = parse_date(&self.window.end).map_err(|e| invalid(format!("window.end: {e}")))?;
        Window::new(start, end).map_err(|e| invalid(format!("window: {e}")))
    }

    pub fn hyper(&self) -> Hyper {
        Hyper {
            batch_size: self.classify.batch_size,
            epochs: self.classify.epochs,
            learning_rate: self.classify.learning_rate,
            standardize: self.classify.standardize,
        }
    }

    pub fn feature_sets(&self) -> Result<Vec<SchemaId>, PipelineError> {
        self.classify
            .feature_sets
            .iter()
            .map(|s| s.parse().map_err(|e| invalid(format!("classify.feature_sets: {e}"))))
            .collect()
    }

    pub fn predict_schema(&self) -> Result<SchemaId, PipelineError> {
        self.classify
            .predict_with
            .parse()
            .map_err(|e| invalid(format!("classify.predict_with: {e}")))
    }

    pub fn event_days(&self) -> Result<Vec<NaiveDate>, PipelineError> {
        self.timeline
            .events
            .iter()
            .map(|d| parse_date(d).map_err(|e| invalid(format!("timeline.events: {e}"))))
            .collect()
    }

    pub fn homophily_direction(&self) -> Result<Direction, PipelineError> {
        self.homophily
            .direction
            .parse()
            .map_err(|e| invalid(format!("homophily.direction: {e}")))
    }

    pub fn homophily_mode(&self) -> Result<ConnectivityMode, PipelineError> {
        self.homophily
            .mode
            .parse()
            .map_err(|e| invalid(format!("homophily.mode: {e}")))
    }

    pub fn contagion_direction(&self) -> Result<Direction, PipelineError> {
        self.contagion
            .direction
            .parse()
            .map_err(|e| invalid(format!("contagion.direction: {e}")))
    }

    pub fn population(&self) -> Result<Population, PipelineError> {
        match self.contagion.population.trim().to_ascii_lowercase().as_str() {
            "covid" | "covid-flagged" => Ok(Population::CovidFlagged),
            "all" => Ok(Population::AllNodes),
            other => Err(invalid(format!(
                "contagion.population: expected `covid` or `all`, got `{other}`"
            ))),
        }
    }

    pub fn pairs(&self) -> Result<Vec<RiskPair>, PipelineError> {
        self.contagion
            .pairs
            .iter()
            .map(|p| p.parse().map_err(|e| invalid(format!("contagion.pairs: {e}"))))
            .collect()
    }

    pub fn classify_seed(&self) -> u64 {
        self.classify
            .seed
            .unwrap_or_else(|| seeds::derive_seed(self.run.seed, 1))
    }

    pub fn homophily_seed(&self) -> u64 {
        self.homophily
            .seed
            .unwrap_or_else(|| seeds::derive_seed(self.run.seed, 2))
    }

    pub fn contagion_seed(&self) -> u64 {
        self.contagion
            .seed
            .unwrap_or_else(|| seeds::derive_seed(self.run.seed, 3))
    }

    /// Checks everything `command` needs: parameter ranges and the
    /// existence of its input files.
    pub fn validate(&self, command: Command) -> Result<(), PipelineError> {
        self.window()?;
        let need_file = |name: &str, p: &Option<PathBuf>, required: bool| -> Result<(), PipelineError> {
            match p {
                Some(p) if !p.is_file() => Err(invalid(format!("input.{name}: {} does not exist", p.display()))),
                None if required => Err(invalid(format!("input.{name} is required for `{command}`"))),
                _ => Ok(()),
            }
        };
        if self.input.keywords != KeywordSet::BUILTIN_TOKEN && !Path::new(&self.input.keywords).is_file() {
            return Err(invalid(format!(
                "input.keywords: {} does not exist",
                self.input.keywords
            )));
        }
        match command {
            Command::Ingest => {
                need_file("records", &self.input.records, true)?;
                need_file("labels", &self.input.labels, false)?;
            }
            Command::Classify => {
                if self.classify.folds < 2 {
                    return Err(invalid(format!(
                        "classify.folds must be at least 2, got {}",
                        self.classify.folds
                    )));
                }
                if self.classify.batch_size == 0 || self.classify.epochs == 0 {
                    return Err(invalid("classify.batch_size and classify.epochs must be positive"));
                }
                if !(self.classify.learning_rate.is_finite() && self.classify.learning_rate > 0.0) {
                    return Err(invalid("classify.learning_rate must be positive"));
                }
                if self.feature_sets()?.is_empty() {
                    return Err(invalid("classify.feature_sets is empty"));
                }
                self.predict_schema()?;
            }
            Command::Timeline => {
                if self.timeline.window_days == 0 {
                    return Err(invalid("timeline.window_days must be positive"));
                }
                self.event_days()?;
            }
            Command::Homophily => {
                need_file("edges", &self.input.edges, true)?;
                need_file("nodes", &self.input.nodes, false)?;
                if self.homophily.replicates < 2 {
                    return Err(invalid(format!(
                        "homophily.replicates must be at least 2, got {}",
                        self.homophily.replicates
                    )));
                }
                if !(self.homophily.swap_factor.is_finite() && self.homophily.swap_factor >= 0.0) {
                    return Err(invalid("homophily.swap_factor must be a non-negative number"));
                }
                self.homophily_direction()?;
                self.homophily_mode()?;
            }
            Command::Contagion => {
                need_file("edges", &self.input.edges, true)?;
                if self.contagion.replicates < 2 {
                    return Err(invalid(format!(
                        "contagion.replicates must be at least 2, got {}",
                        self.contagion.replicates
                    )));
                }
                if self.contagion.min_exposed == 0 && self.contagion.n_max == 0 {
                    return Err(invalid(
                        "contagion.min_exposed must be positive when n_max is automatic",
                    ));
                }
                self.contagion_direction()?;
                self.population()?;
                self.pairs()?;
            }
            Command::Users | Command::Report => {}
        }
        Ok(())
    }
}
