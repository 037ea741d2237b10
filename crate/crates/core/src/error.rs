use thiserror::Error;

use crate::lattice::LatticePoint;

#[derive(Debug, Error)]
pub enum Error {
    #[error("overlap conflict at {anchor:?}: {existing} vs {incoming}")]
    OverlapConflict {
        anchor: LatticePoint,
        existing: String,
        incoming: String,
    },
    #[error("search budget of {0} nodes exceeded")]
    SearchBudgetExceeded(u64),
    #[error("inconsistent patch: {0}")]
    InconsistentPatch(String),
    #[error("window radius {radius} plus shift {shift} does not fit in the patch (inradius {available})")]
    WindowTooLarge {
        radius: f64,
        shift: f64,
        available: f64,
    },
    #[error("delta {0} outside (0, 1/2)")]
    DeltaOutOfRange(String),
    #[error("grid is not generic: {0} triple points")]
    NonGenericGrid(usize),
    #[error("patch is not decomposable: {0}")]
    NotDecomposable(String),
    #[error("inconsistent figures: {0}")]
    InconsistentFigures(String),
    #[error("missing metadata: {0}")]
    MissingMetadata(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("bad data: {0}")]
    Data(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors that mean a shipped invariant was broken rather than
    /// bad user input.
    pub fn is_invariant_breach(&self) -> bool {
        matches!(
            self,
            Error::OverlapConflict { .. }
                | Error::InconsistentPatch(_)
                | Error::NotDecomposable(_)
                | Error::InconsistentFigures(_)
                | Error::Data(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
