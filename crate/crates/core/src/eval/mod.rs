//! Scoring model predictions and reporting accuracy breakdowns.

mod emit;
mod score;

use thiserror::Error;

pub use emit::{emit_report, ReportFormat};
pub use score::{
    axiom_consistency, breakdown, score, Averaging, Axis, BreakdownRow, Cell, EvalReport, PredictionRecord,
    ProbeOutcome, Reference, REPORTED_HUMAN_ACCURACY,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("no prediction for probe {0}")]
    MissingPrediction(String),
    #[error("more than one prediction for probe {0}")]
    DuplicatePrediction(String),
    #[error("probe id {0} appears twice in the probe file")]
    DuplicateProbe(String),
    #[error("prediction for unknown probe {0}")]
    IdMismatch(String),
    #[error("bad scores for probe {probe_id}: {reason}")]
    InvalidScores { probe_id: String, reason: String },
    #[error("unknown breakdown axis `{0}` (perturbation, valence, axiom, template)")]
    UnknownAxis(String),
    #[error("unknown report format `{0}` (json, csv, md)")]
    UnknownFormat(String),
    #[error("cannot serialize report: {0}")]
    Serialize(String),
}
