use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the solver and its building blocks.
#[derive(Debug, Error)]
pub enum Error {
    #[error("non-positive pressure {pressure:e} (density {density:e})")]
    NonPositivePressure { density: f64, pressure: f64 },

    #[error("non-positive density {density:e}")]
    NonPositiveDensity { density: f64 },

    #[error("degenerate transform state: j_minus {j_minus:e} >= j_plus {j_plus:e} or srt_entropy {srt_entropy:e} <= 0")]
    DegenerateState {
        j_minus: f64,
        j_plus: f64,
        srt_entropy: f64,
    },

    #[error("imaginary Roe sound speed (c^2 = {c2:e})")]
    ImaginarySoundSpeed { c2: f64 },

    #[error("wave speeds too close for the HLL middle branch: sL = {s_left:e}, sR = {s_right:e}")]
    DegenerateSpeeds { s_left: f64, s_right: f64 },

    #[error("limiter node value lies outside the admissible set")]
    InadmissibleNode,

    #[error("unknown problem `{0}`")]
    UnknownProblem(String),

    #[error("iteration failed to converge: {0}")]
    NoConvergence(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{source} at cell {cell:?}, t = {time}")]
    AtCell {
        cell: (usize, usize),
        time: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Attaches a cell index and time to a numerical error.
    pub fn at_cell(self, cell: (usize, usize), time: f64) -> Self {
        match self {
            e @ Error::AtCell { .. } => e,
            e => Error::AtCell {
                cell,
                time,
                source: Box::new(e),
            },
        }
    }

    /// True for errors that come from the numerics rather than from input.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::AtCell { source, .. } => source.is_numerical(),
            Error::UnknownProblem(_) | Error::Config(_) | Error::Io { .. } => false,
            _ => true,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
