//! Analysis toolkit for hate speech and counterspeech on follower networks.
//!
//! The crate covers the whole measurement pipeline:
//!
//! - [`ingest`]: keyword-filtered ingestion of tweet-like records
//! - [`classify`]: hashtag and linguistic feature extraction, a softmax
//!   classifier, cross-validation and per-class metrics
//! - [`graph`]: follower graphs, degree-preserving shuffles and homophily
//!   ratios against shuffled baselines
//! - [`cascade`]: activation cascades, exposure counting and infection risk
//!   curves against cascade-shuffle null models
//! - [`stats`]: daily series, spike quantification, Mann-Whitney U tests and
//!   behavioral profiles
//! - [`pipeline`]: the command layer used by the `hatenet` binary
//!
//! [`synth`] holds the generators for synthetic corpora, planted graphs and
//! simulated cascades, and [`svg`] renders the report charts.

// Small fixed-size matrices read better with explicit indices.
#![allow(clippy::needless_range_loop)]

pub mod cascade;
pub mod classify;
pub mod graph;
pub mod ingest;
pub mod labels;
pub mod lexicon;
pub mod pipeline;
pub mod seeds;
pub mod stats;
pub mod svg;
pub mod synth;
pub mod text;
pub mod time;

pub use labels::{ActivationKind, Direction, Label, UserCategory};
