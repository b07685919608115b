use thiserror::Error;

use crate::scenario::{Collision, MirrorId};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown case `{0}` (expected a, b or c)")]
    UnknownCase(String),

    #[error("unknown mirror `{0}` (expected one of A, B, C, E, F)")]
    UnknownMirror(String),

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("mirror {mirror} already kicked in mode {label}")]
    MirrorAlreadyKicked { mirror: MirrorId, label: String },

    #[error("invalid mode label `{0}` (expected five characters of 0/1)")]
    InvalidLabel(String),

    #[error("mirror shift {shift:e} exceeds the second-order expansion bound {bound}")]
    ShiftBound { shift: f64, bound: f64 },

    #[error("invalid quadrature grid: {0}")]
    InvalidGrid(String),

    #[error("invalid time series: {0}")]
    InvalidSeries(String),

    #[error("frequency plan has {} collision(s), first: {}", .0.len(), .0[0])]
    FrequencyCollision(Vec<Collision>),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
