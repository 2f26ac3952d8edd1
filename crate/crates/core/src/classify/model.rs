//! Softmax-output linear classifier trained by minibatch gradient descent
//! on cross-entropy.

use std::fmt::Write as _;

use rand::seq::SliceRandom;

use super::{ClassifyError, FeatureVector, SchemaId};
use crate::labels::Label;
use crate::seeds;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hyper {
    pub batch_size: usize,
    pub epochs: usize,
    pub learning_rate: f64,
    /// Standardize features (per-feature mean/std from training data)
    /// before the linear layer.
    pub standardize: bool,
}

impl Default for Hyper {
    /// Batch size 8, 3 epochs, learning rate 1e-5, raw features.
    fn default() -> Self {
        Self {
            batch_size: 8,
            epochs: 3,
            learning_rate: 1e-5,
            standardize: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainingMeta {
    pub batch_size: usize,
    pub epochs: usize,
    pub learning_rate: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scaler {
    pub mean: Vec<f64>,
    pub scale: Vec<f64>,
}

impl Scaler {
    fn fit(rows: &[&[f64]], dim: usize) -> Self {
        let n = rows.len() as f64;
        let mut mean = vec![0.0; dim];
        for r in rows {
            for (m, x) in mean.iter_mut().zip(r.iter()) {
                *m += x / n;
            }
        }
        let mut var = vec![0.0; dim];
        for r in rows {
            for ((v, x), m) in var.iter_mut().zip(r.iter()).zip(&mean) {
                *v += (x - m).powi(2) / n;
            }
        }
        let scale = var.into_iter().map(|v| if v > 0.0 { v.sqrt() } else { 1.0 }).collect();
        Self { mean, scale }
    }

    fn apply(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(&self.mean)
            .zip(&self.scale)
            .map(|((x, m), s)| (x - m) / s)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassifierModel {
    pub schema: SchemaId,
    /// Row-major `dim x 3`: `weights[f * 3 + c]`.
    pub weights: Vec<f64>,
    pub bias: [f64; 3],
    pub meta: TrainingMeta,
    pub scaler: Option<Scaler>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    pub label: Label,
    pub probabilities: [f64; 3],
}

fn softmax(logits: [f64; 3]) -> [f64; 3] {
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let e = logits.map(|l| (l - max).exp());
    let sum: f64 = e.iter().sum();
    e.map(|x| x / sum)
}

/// First index of the maximum, so ties resolve Hate < Counterspeech < Neutral.
fn argmax(p: &[f64; 3]) -> usize {
    let mut best = 0;
    for i in 1..3 {
        if p[i] > p[best] {
            best = i;
        }
    }
    best
}

impl ClassifierModel {
    pub fn zeros(schema: SchemaId, meta: TrainingMeta) -> Self {
        Self {
            schema,
            weights: vec![0.0; schema.dim() * 3],
            bias: [0.0; 3],
            meta,
            scaler: None,
        }
    }

    pub fn dim(&self) -> usize {
        self.schema.dim()
    }

    fn logits(&self, x: &[f64]) -> [f64; 3] {
        let mut z = self.bias;
        for (f, &xf) in x.iter().enumerate() {
            if xf == 0.0 {
                continue;
            }
            let row = &self.weights[f * 3..f * 3 + 3];
            for c in 0..3 {
                z[c] += xf * row[c];
            }
        }
        z
    }

    pub fn predict(&self, features: &FeatureVector) -> Result<Prediction, ClassifyError> {
        features.check(self.schema)?;
        let probabilities = match &self.scaler {
            Some(s) => softmax(self.logits(&s.apply(&features.values))),
            None => softmax(self.logits(&features.values)),
        };
        Ok(Prediction {
            label: Label::from_index(argmax(&probabilities)).expect("three classes"),
            probabilities,
        })
    }

    /// Flat text form: a `schema_id` header, training metadata, optional
    /// scaler rows, the bias row and one `w` row per feature.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "schema_id {}", self.schema);
        let _ = writeln!(s, "dim {}", self.dim());
        let _ = writeln!(s, "batch_size {}", self.meta.batch_size);
        let _ = writeln!(s, "epochs {}", self.meta.epochs);
        let _ = writeln!(s, "learning_rate {:?}", self.meta.learning_rate);
        let _ = writeln!(s, "seed {}", self.meta.seed);
        if let Some(sc) = &self.scaler {
            let _ = writeln!(s, "scale_mean {}", join(&sc.mean));
            let _ = writeln!(s, "scale_std {}", join(&sc.scale));
        }
        let _ = writeln!(s, "bias {}", join(&self.bias));
        for row in self.weights.chunks(3) {
            let _ = writeln!(s, "w {}", join(row));
        }
        s
    }

    pub fn from_text(doc: &str) -> Result<Self, ClassifyError> {
        let bad = |m: &str| ClassifyError::ModelFormat(m.to_string());
        let mut schema = None;
        let mut dim = None;
        let (mut batch_size, mut epochs, mut lr, mut seed) = (None, None, None, None);
        let (mut smean, mut sstd) = (None, None);
        let mut bias = None;
        let mut weights = Vec::new();
        for line in doc.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let (key, rest) = line.split_once(' ').ok_or_else(|| bad(line))?;
            let floats = || -> Result<Vec<f64>, ClassifyError> {
                rest.split_whitespace()
                    .map(|t| t.parse::<f64>().map_err(|_| bad(line)))
                    .collect()
            };
            match key {
                "schema_id" => schema = Some(rest.parse::<SchemaId>()?),
                "dim" => dim = Some(rest.parse::<usize>().map_err(|_| bad(line))?),
                "batch_size" => batch_size = Some(rest.parse::<usize>().map_err(|_| bad(line))?),
                "epochs" => epochs = Some(rest.parse::<usize>().map_err(|_| bad(line))?),
                "learning_rate" => lr = Some(rest.parse::<f64>().map_err(|_| bad(line))?),
                "seed" => seed = Some(rest.parse::<u64>().map_err(|_| bad(line))?),
                "scale_mean" => smean = Some(floats()?),
                "scale_std" => sstd = Some(floats()?),
                "bias" => {
                    let b = floats()?;
                    bias = Some(<[f64; 3]>::try_from(b.as_slice()).map_err(|_| bad(line))?);
                }
                "w" => {
                    let w = floats()?;
                    if w.len() != 3 {
                        return Err(bad(line));
                    }
                    weights.extend(w);
                }
                _ => return Err(bad(line)),
            }
        }
        let schema = schema.ok_or_else(|| bad("missing schema_id"))?;
        let dim = dim.ok_or_else(|| bad("missing dim"))?;
        if dim != schema.dim() {
            return Err(ClassifyError::SchemaMismatch {
                expected: schema.dim(),
                found: dim,
            });
        }
        if weights.len() != dim * 3 {
            return Err(bad("weight rows do not match dim"));
        }
        let scaler = match (smean, sstd) {
            (Some(mean), Some(scale)) if mean.len() == dim && scale.len() == dim => Some(Scaler { mean, scale }),
            (None, None) => None,
            _ => return Err(bad("incomplete scaler")),
        };
        Ok(Self {
            schema,
            weights,
            bias: bias.ok_or_else(|| bad("missing bias"))?,
            meta: TrainingMeta {
                batch_size: batch_size.ok_or_else(|| bad("missing batch_size"))?,
                epochs: epochs.ok_or_else(|| bad("missing epochs"))?,
                learning_rate: lr.ok_or_else(|| bad("missing learning_rate"))?,
                seed: seed.ok_or_else(|| bad("missing seed"))?,
            },
            scaler,
        })
    }
}

fn join(xs: &[f64]) -> String {
    xs.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(" ")
}

pub fn train(examples: &[(FeatureVector, Label)], hyper: Hyper, seed: u64) -> Result<ClassifierModel, ClassifyError> {
    let Some((first, _)) = examples.first() else {
        return Err(ClassifyError::Empty);
    };
    let schema = first.schema;
    for (fv, _) in examples {
        fv.check(schema)?;
    }
    for label in Label::ALL {
        if !examples.iter().any(|(_, l)| *l == label) {
            return Err(ClassifyError::MissingClass(label));
        }
    }
    if hyper.batch_size == 0 || !(hyper.learning_rate.is_finite() && hyper.learning_rate > 0.0) {
        return Err(ClassifyError::InvalidHyper);
    }
    let dim = schema.dim();
    let meta = TrainingMeta {
        batch_size: hyper.batch_size,
        epochs: hyper.epochs,
        learning_rate: hyper.learning_rate,
        seed,
    };
    let mut model = ClassifierModel::zeros(schema, meta);
    let inputs: Vec<Vec<f64>> = if hyper.standardize {
        let rows: Vec<&[f64]> = examples.iter().map(|(fv, _)| fv.values.as_slice()).collect();
        let scaler = Scaler::fit(&rows, dim);
        let xs = rows.iter().map(|r| scaler.apply(r)).collect();
        model.scaler = Some(scaler);
        xs
    } else {
        examples.iter().map(|(fv, _)| fv.values.clone()).collect()
    };

    let mut rng = seeds::rng(seed);
    let mut order: Vec<usize> = (0..examples.len()).collect();
    let mut grad_w = vec![0.0; dim * 3];
    let mut iteration = 0usize;
    for _ in 0..hyper.epochs {
        order.shuffle(&mut rng);
        for batch in order.chunks(hyper.batch_size) {
            grad_w.iter_mut().for_each(|g| *g = 0.0);
            let mut grad_b = [0.0; 3];
            let mut loss = 0.0;
            for &i in batch {
                let x = &inputs[i];
                let y = examples[i].1.index();
                let p = softmax(model.logits(x));
                loss -= p[y].ln();
                let mut g = p;
                g[y] -= 1.0;
                for (f, &xf) in x.iter().enumerate() {
                    if xf == 0.0 {
                        continue;
                    }
                    for c in 0..3 {
                        grad_w[f * 3 + c] += xf * g[c];
                    }
                }
                for c in 0..3 {
                    grad_b[c] += g[c];
                }
            }
            if !loss.is_finite() {
                return Err(ClassifyError::NonFiniteLoss { iteration });
            }
            let step = hyper.learning_rate / batch.len() as f64;
            for (w, g) in model.weights.iter_mut().zip(&grad_w) {
                *w -= step * g;
            }
            for c in 0..3 {
                model.bias[c] -= step * grad_b[c];
            }
            if model.weights.iter().chain(&model.bias).any(|w| !w.is_finite()) {
                return Err(ClassifyError::NonFiniteLoss { iteration });
            }
            iteration += 1;
        }
    }
    Ok(model)
}

pub fn predict(model: &ClassifierModel, features: &FeatureVector) -> Result<Prediction, ClassifyError> {
    model.predict(features)
}
