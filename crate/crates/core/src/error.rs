use thiserror::Error;

use crate::bench::Stage;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimensions must be positive")]
    EmptyDimension,
    #[error("expected {expected} entries, found {found}")]
    EntryCount { expected: usize, found: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("expected a square matrix, found {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("expected a 2x2 operator, found {rows}x{cols}")]
    NotTwoByTwo { rows: usize, cols: usize },
    #[error("expected a 4x4 single-source operator, found {rows}x{cols}")]
    NotFourByFour { rows: usize, cols: usize },
    #[error("subsystem slot {0} is outside 0..=3")]
    SlotOutOfRange(usize),
    #[error("source tag {0} is not 1 or 2")]
    SourceOutOfRange(u8),
    #[error("state is at stage `{found}`, operation needs `{expected}`")]
    WrongStage { expected: Stage, found: Stage },
    #[error("anchors differ (alpha - beta = {0}); the case-2 functional needs alpha = beta")]
    AnchorMismatch(f64),
    #[error("{0}")]
    InvalidParameter(String),
}
