use std::io;
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error(
        "item universe has {items} items, exceeding the cap of {cap} (raise it with --max-items)"
    )]
    TooManyItems { items: usize, cap: usize },

    #[error("lattice oracle refuses {items} items, exceeding its cap of {cap}")]
    OracleCapExceeded { items: usize, cap: usize },

    #[error("threshold {value} out of range: must lie in [1, {max}] for a database of {transactions} transactions")]
    ThresholdOutOfRange {
        value: usize,
        max: usize,
        transactions: usize,
    },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("line {line}: timestamp {timestamp} precedes previous timestamp {previous} (replay requires non-decreasing timestamps)")]
    NonMonotoneTimestamp {
        line: usize,
        timestamp: u64,
        previous: u64,
    },

    #[error("cannot write store {path}: {source}")]
    Store { path: PathBuf, source: io::Error },

    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
