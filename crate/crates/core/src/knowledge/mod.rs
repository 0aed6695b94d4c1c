//! Offline knowledge-base loading and the crawling strategies that turn
//! it into knowledge tables.

mod edges;
mod seeds;
mod strategy;
mod table;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use thiserror::Error;

pub use edges::{
    atomic_event_forms, load_atomic, load_conceptnet, parse_atomic, parse_conceptnet, EdgeStore, KbEdge,
    LoadStats, Origin, RelationVocabulary, DEFAULT_RELATIONS,
};
pub use seeds::{load_list, parse_list, ListKind, SeedEntry, SeedList};
pub use strategy::{default_strategies, run_strategy, CrawlRule, CrawlStrategy, EdgeFollow};
pub use table::{fill_templates, FillOutcome, KnowledgeRow, KnowledgeTable, Provenance, RowDiagnostic, TableLine};

#[derive(Debug, Error)]
pub enum KnowledgeError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{source_name}:{line}: {message}")]
    Format {
        source_name: String,
        line: usize,
        message: String,
    },
    #[error("missing knowledge source: {0}")]
    MissingSource(String),
}

pub(crate) fn read_source(path: &Path) -> Result<String, KnowledgeError> {
    std::fs::read_to_string(path).map_err(|source| KnowledgeError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Everything a strategy may draw on. Absent sources are only an error
/// when a strategy needs them.
#[derive(Debug, Clone, Default)]
pub struct KnowledgeSources {
    pub conceptnet: Option<EdgeStore>,
    pub atomic: Option<EdgeStore>,
    pub lists: BTreeMap<ListKind, SeedList>,
}
