use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{read_source, KnowledgeError};
use crate::fol::Comparator;
use crate::text::normalize_phrase;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ListKind {
    Materials,
    Grades,
    Locations,
    Animals,
    Occupations,
    PhysicalAdjectives,
    TemporalEvents,
}

impl ListKind {
    pub const ALL: [ListKind; 7] = [
        ListKind::Materials,
        ListKind::Grades,
        ListKind::Locations,
        ListKind::Animals,
        ListKind::Occupations,
        ListKind::PhysicalAdjectives,
        ListKind::TemporalEvents,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ListKind::Materials => "materials",
            ListKind::Grades => "grades",
            ListKind::Locations => "locations",
            ListKind::Animals => "animals",
            ListKind::Occupations => "occupations",
            ListKind::PhysicalAdjectives => "physical_adjectives",
            ListKind::TemporalEvents => "temporal_events",
        }
    }
}

impl fmt::Display for ListKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ListKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ListKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown list kind `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedEntry {
    pub name: String,
    /// Locations only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub latitude: Option<f64>,
    /// Temporal events only: the state that holds around the event and
    /// whether it holds before or after it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub marker: Option<Comparator>,
}

impl SeedEntry {
    fn named(name: String) -> Self {
        SeedEntry {
            name,
            latitude: None,
            state: None,
            marker: None,
        }
    }
}

/// An ordered seed list. Grades keep file (or explicit rank) order;
/// locations are sorted by descending latitude.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedList {
    pub kind: ListKind,
    pub entries: Vec<SeedEntry>,
}

impl SeedList {
    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|e| e.name.as_str())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

pub fn parse_list(text: &str, kind: ListKind, source_name: &str) -> Result<SeedList, KnowledgeError> {
    let format_err = |line: usize, message: String| KnowledgeError::Format {
        source_name: source_name.to_string(),
        line,
        message,
    };
    let mut ranked: Vec<(f64, SeedEntry)> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
        let name = normalize_phrase(fields[0]);
        if name.is_empty() {
            return Err(format_err(line_no, "empty entry".into()));
        }
        let position = ranked.len() as f64;
        let entry = match kind {
            ListKind::Locations => {
                let lat: f64 = fields
                    .get(1)
                    .ok_or_else(|| format_err(line_no, "location needs a latitude column".into()))?
                    .parse()
                    .map_err(|e| format_err(line_no, format!("bad latitude: {e}")))?;
                if !(-90.0..=90.0).contains(&lat) {
                    return Err(format_err(line_no, format!("latitude {lat} out of range")));
                }
                // sort key: descending latitude
                ranked.push((
                    -lat,
                    SeedEntry {
                        latitude: Some(lat),
                        ..SeedEntry::named(name)
                    },
                ));
                continue;
            }
            ListKind::Grades => {
                let rank = match fields.get(1).filter(|f| !f.is_empty()) {
                    Some(r) => r
                        .parse::<f64>()
                        .map_err(|e| format_err(line_no, format!("bad order index: {e}")))?,
                    None => position,
                };
                ranked.push((rank, SeedEntry::named(name)));
                continue;
            }
            ListKind::TemporalEvents => {
                let [_, state, marker, ..] = fields.as_slice() else {
                    return Err(format_err(
                        line_no,
                        "temporal event needs event, state and before/after columns".into(),
                    ));
                };
                let marker = Comparator::from_word(marker)
                    .filter(|c| c.is_temporal())
                    .ok_or_else(|| format_err(line_no, format!("`{marker}` is not before/after")))?;
                let state = normalize_phrase(state);
                if state.is_empty() {
                    return Err(format_err(line_no, "empty state".into()));
                }
                SeedEntry {
                    state: Some(state),
                    marker: Some(marker),
                    ..SeedEntry::named(name)
                }
            }
            _ => SeedEntry::named(name),
        };
        ranked.push((position, entry));
    }
    ranked.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(SeedList {
        kind,
        entries: ranked.into_iter().map(|(_, e)| e).collect(),
    })
}

pub fn load_list(path: &Path, kind: ListKind) -> Result<SeedList, KnowledgeError> {
    let text = read_source(path)?;
    parse_list(&text, kind, &path.display().to_string())
}
