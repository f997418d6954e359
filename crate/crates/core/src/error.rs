use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid hypothesis space: {0}")]
    Config(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("cannot parse hypothesis label {label:?}: bad token {token:?}")]
    Label { label: String, token: String },

    #[error("invalid sequence: {0}")]
    Sequence(String),

    #[error("{hypothesis} applied to {input} gives {output}, above the domain bound {n_max}")]
    DomainOverflow {
        hypothesis: String,
        input: u64,
        output: u128,
        n_max: u64,
    },

    #[error("generation overflow at step {step}: value {value} exceeds n_max {n_max}")]
    GenerationOverflow { step: usize, value: u128, n_max: u64 },

    #[error("could not keep the sequence strictly increasing at step {step} after {attempts} noise draws")]
    NoiseRejection { step: usize, attempts: usize },

    #[error("could not build a suite for class {class}: every attempt overflowed the domain")]
    Suite { class: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}
