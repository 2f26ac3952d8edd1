use std::io::Write;

use rand::seq::SliceRandom;
use rayon::prelude::*;

use super::model::{train, Hyper};
use super::{ClassifyError, FeatureVector};
use crate::labels::Label;
use crate::seeds;
use crate::stats::fmt_f64;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// Per-class metrics indexed by [`Label::index`]. `confusion[gold][pred]`.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub per_class: [ClassMetrics; 3],
    pub macro_f1: f64,
    pub fold_count: usize,
    pub confusion: [[u64; 3]; 3],
}

fn f1(p: f64, r: f64) -> f64 {
    if p + r > 0.0 {
        2.0 * p * r / (p + r)
    } else {
        0.0
    }
}

fn metrics_from_confusion(confusion: &[[u64; 3]; 3]) -> [ClassMetrics; 3] {
    let mut out = [ClassMetrics::default(); 3];
    for c in 0..3 {
        let tp = confusion[c][c] as f64;
        let predicted: u64 = (0..3).map(|g| confusion[g][c]).sum();
        let gold: u64 = confusion[c].iter().sum();
        let precision = if predicted > 0 { tp / predicted as f64 } else { 0.0 };
        let recall = if gold > 0 { tp / gold as f64 } else { 0.0 };
        out[c] = ClassMetrics {
            precision,
            recall,
            f1: f1(precision, recall),
        };
    }
    out
}

fn macro_f1(per_class: &[ClassMetrics; 3]) -> f64 {
    per_class.iter().map(|m| m.f1).sum::<f64>() / 3.0
}

pub fn eval_metrics(predictions: &[Label], golds: &[Label]) -> Result<EvalReport, ClassifyError> {
    if predictions.len() != golds.len() {
        return Err(ClassifyError::LengthMismatch {
            predictions: predictions.len(),
            golds: golds.len(),
        });
    }
    if golds.is_empty() {
        return Err(ClassifyError::Empty);
    }
    let mut confusion = [[0u64; 3]; 3];
    for (p, g) in predictions.iter().zip(golds) {
        confusion[g.index()][p.index()] += 1;
    }
    let per_class = metrics_from_confusion(&confusion);
    Ok(EvalReport {
        per_class,
        macro_f1: macro_f1(&per_class),
        fold_count: 1,
        confusion,
    })
}

/// Stratified fold assignment: each class is shuffled and dealt round-robin.
pub fn stratified_folds(labels: &[Label], k: usize, seed: u64) -> Vec<usize> {
    let mut rng = seeds::rng(seed);
    let mut fold = vec![0; labels.len()];
    for class in Label::ALL {
        let mut idx: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == class).collect();
        idx.shuffle(&mut rng);
        for (pos, i) in idx.into_iter().enumerate() {
            fold[i] = pos % k;
        }
    }
    fold
}

/// Stratified k-fold cross-validation. Per-class metrics are averaged over
/// folds, the confusion matrix is summed, and macro-F1 is the mean of the
/// averaged class F1 scores.
pub fn cross_validate(
    examples: &[(FeatureVector, Label)],
    k: usize,
    hyper: Hyper,
    seed: u64,
) -> Result<EvalReport, ClassifyError> {
    if k < 2 {
        return Err(ClassifyError::InvalidFolds(k));
    }
    let labels: Vec<Label> = examples.iter().map(|(_, l)| *l).collect();
    for class in Label::ALL {
        let count = labels.iter().filter(|&&l| l == class).count();
        if count < k {
            return Err(ClassifyError::ClassTooSmall {
                label: class,
                count,
                folds: k,
            });
        }
    }
    let folds = stratified_folds(&labels, k, seed);
    let reports: Vec<EvalReport> = (0..k)
        .into_par_iter()
        .map(|f| {
            let train_set: Vec<(FeatureVector, Label)> = examples
                .iter()
                .zip(&folds)
                .filter(|(_, &fold)| fold != f)
                .map(|(e, _)| e.clone())
                .collect();
            let model = train(&train_set, hyper, seeds::derive_seed(seed, f as u64))?;
            let mut preds = Vec::new();
            let mut golds = Vec::new();
            for ((fv, gold), _) in examples.iter().zip(&folds).filter(|(_, &fold)| fold == f) {
                preds.push(model.predict(fv)?.label);
                golds.push(*gold);
            }
            eval_metrics(&preds, &golds)
        })
        .collect::<Result<_, _>>()?;

    let mut confusion = [[0u64; 3]; 3];
    let mut per_class = [ClassMetrics::default(); 3];
    for r in &reports {
        for g in 0..3 {
            for p in 0..3 {
                confusion[g][p] += r.confusion[g][p];
            }
            per_class[g].precision += r.per_class[g].precision / k as f64;
            per_class[g].recall += r.per_class[g].recall / k as f64;
            per_class[g].f1 += r.per_class[g].f1 / k as f64;
        }
    }
    Ok(EvalReport {
        macro_f1: macro_f1(&per_class),
        per_class,
        fold_count: k,
        confusion,
    })
}

/// Rows of `feature_set,class,precision,recall,f1`, one block per report,
/// each closed by a `macro` row.
pub fn write_eval_csv<W: Write>(w: W, rows: &[(&str, &EvalReport)]) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["feature_set", "class", "precision", "recall", "f1"])?;
    for (name, report) in rows {
        for label in Label::ALL {
            let m = report.per_class[label.index()];
            out.write_record([
                name.to_string(),
                label.to_string(),
                fmt_f64(m.precision),
                fmt_f64(m.recall),
                fmt_f64(m.f1),
            ])?;
        }
        let mean = |f: fn(&ClassMetrics) -> f64| report.per_class.iter().map(f).sum::<f64>() / 3.0;
        out.write_record([
            name.to_string(),
            "macro".to_string(),
            fmt_f64(mean(|m| m.precision)),
            fmt_f64(mean(|m| m.recall)),
            fmt_f64(report.macro_f1),
        ])?;
    }
    out.flush()?;
    Ok(())
}
