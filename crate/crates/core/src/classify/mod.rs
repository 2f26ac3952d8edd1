//! Feature-based tweet classification and evaluation.

mod eval;
mod features;
mod model;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub use eval::{cross_validate, eval_metrics, stratified_folds, write_eval_csv, ClassMetrics, EvalReport};
pub use features::{
    extract, extract_combined_features, extract_hashtag_features, extract_linguistic_features, linguistic_index,
    HASHTAG_DIM, LINGUISTIC_DIM, LINGUISTIC_FEATURES,
};
pub use model::{predict, train, ClassifierModel, Hyper, Prediction, Scaler, TrainingMeta};

use crate::labels::Label;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClassifyError {
    #[error("feature schema mismatch: expected dimension {expected}, found {found}")]
    SchemaMismatch { expected: usize, found: usize },
    #[error("hashtag features need exactly 42 keywords, got {0}")]
    KeywordCount(usize),
    #[error("missing class `{0}` in training data")]
    MissingClass(Label),
    #[error("non-finite loss at iteration {iteration}")]
    NonFiniteLoss { iteration: usize },
    #[error("{predictions} predictions for {golds} gold labels")]
    LengthMismatch { predictions: usize, golds: usize },
    #[error("no examples")]
    Empty,
    #[error("class `{label}` has {count} examples, fewer than {folds} folds")]
    ClassTooSmall { label: Label, count: usize, folds: usize },
    #[error("need at least 2 folds, got {0}")]
    InvalidFolds(usize),
    #[error("batch size and learning rate must be positive")]
    InvalidHyper,
    #[error("unknown feature schema `{0}`")]
    UnknownSchema(String),
    #[error("model file: {0}")]
    ModelFormat(String),
}

/// Names a feature extractor and its dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemaId {
    Hashtag,
    Linguistic,
    /// Hashtag features followed by linguistic features.
    Combined,
}

impl SchemaId {
    pub const ALL: [SchemaId; 3] = [SchemaId::Hashtag, SchemaId::Linguistic, SchemaId::Combined];

    pub fn dim(self) -> usize {
        match self {
            SchemaId::Hashtag => HASHTAG_DIM,
            SchemaId::Linguistic => LINGUISTIC_DIM,
            SchemaId::Combined => HASHTAG_DIM + LINGUISTIC_DIM,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SchemaId::Hashtag => "hashtag",
            SchemaId::Linguistic => "linguistic",
            SchemaId::Combined => "combined",
        }
    }
}

impl fmt::Display for SchemaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.name(), self.dim())
    }
}

impl FromStr for SchemaId {
    type Err = ClassifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let name = s.trim();
        SchemaId::ALL
            .into_iter()
            .find(|id| id.to_string() == name || id.name() == name)
            .ok_or_else(|| ClassifyError::UnknownSchema(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    pub values: Vec<f64>,
    pub schema: SchemaId,
}

impl FeatureVector {
    pub fn new(values: Vec<f64>, schema: SchemaId) -> Result<Self, ClassifyError> {
        let fv = Self { values, schema };
        fv.check(schema)?;
        Ok(fv)
    }

    fn check(&self, schema: SchemaId) -> Result<(), ClassifyError> {
        if self.schema != schema || self.values.len() != schema.dim() {
            return Err(ClassifyError::SchemaMismatch {
                expected: schema.dim(),
                found: self.values.len(),
            });
        }
        Ok(())
    }
}
