//! Group evolution discovery and next-event prediction for temporal
//! social networks.
//!
//! The pipeline: slice a timestamped interaction log into (possibly
//! overlapping) timeframes, extract overlapping communities per frame with
//! k-clique percolation, score member importance, classify every
//! consecutive-frame group transition into one of seven evolution events,
//! reconstruct 4-step event sequences, and train classifiers that predict
//! the next event of a group.

pub mod communities;
pub mod evochain;
pub mod formats;
pub mod ged;
pub mod importance;
pub mod learn;
pub mod manifest;
pub mod sweep;
pub mod synth;
pub mod tsn;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("too many malformed rows ({count}), first errors: {sample}")]
    TooManyErrors { count: usize, sample: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("empty input: {0}")]
    EmptyInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
