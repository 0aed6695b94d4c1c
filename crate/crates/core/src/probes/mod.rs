//! Task-specific probes, the knowledge-augmented variants, and dataset
//! splits.

mod split;
mod task;

use thiserror::Error;

use crate::surface::SurfaceError;

pub use split::{split_dataset, Setting, SplitConfig, SplitManifest, SplitName, SplitSet};
pub use task::{to_mwp, to_sp, MwpProbe, Probe, SpProbe, Task, DEFAULT_MASK};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProbeError {
    #[error("statement {0} has no comparator in its conclusion")]
    NoComparator(String),
    #[error("pool too small: {requested} statements requested, {available} available")]
    PoolTooSmall { requested: usize, available: usize },
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}
