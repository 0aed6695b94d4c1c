use std::collections::{BTreeSet, HashMap, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{read_source, KnowledgeError};
use crate::text::normalize_phrase;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Origin {
    Conceptnet,
    Atomic,
    List,
}

/// One normalised knowledge-base triple.
///
/// ATOMIC events are stored with the subject `PersonX` stripped; `source`
/// holds the single-person reading ("forces upon another person") and
/// `binary` the two-person relation form ("forces upon") when the event
/// ends with its `PersonY` object.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct KbEdge {
    pub source: String,
    pub relation: String,
    pub target: String,
    pub origin: Origin,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub binary: Option<String>,
}

/// Relations accepted by default. Anything else in a dump is skipped and
/// counted.
pub const DEFAULT_RELATIONS: [&str; 14] = [
    "HasProperty",
    "NotMadeOf",
    "MadeOf",
    "CapableOf",
    "NotCapableOf",
    "AtLocation",
    "LocatedNear",
    "UsedFor",
    "IsA",
    "PartOf",
    "HasA",
    "Desires",
    "ReceivesAction",
    "Attribute",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationVocabulary(BTreeSet<String>);

impl Default for RelationVocabulary {
    fn default() -> Self {
        RelationVocabulary(DEFAULT_RELATIONS.iter().map(|s| s.to_string()).collect())
    }
}

impl RelationVocabulary {
    pub fn new<I: IntoIterator<Item = S>, S: Into<String>>(relations: I) -> Self {
        RelationVocabulary(relations.into_iter().map(Into::into).collect())
    }

    pub fn contains(&self, relation: &str) -> bool {
        self.0.contains(relation)
    }
}

/// Counts reported by a loader.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct LoadStats {
    pub edges: usize,
    pub duplicates: usize,
    pub skipped: usize,
}

/// Deduplicated, immutable-after-load edge collection with a
/// `(source, relation)` index.
#[derive(Debug, Clone, Default)]
pub struct EdgeStore {
    edges: Vec<KbEdge>,
    index: HashMap<(String, String), Vec<usize>>,
    seen: HashSet<KbEdge>,
    stats: LoadStats,
}

impl EdgeStore {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts unless an identical edge is already present.
    pub fn insert(&mut self, edge: KbEdge) -> bool {
        if !self.seen.insert(edge.clone()) {
            self.stats.duplicates += 1;
            return false;
        }
        self.index
            .entry((edge.source.clone(), edge.relation.clone()))
            .or_default()
            .push(self.edges.len());
        self.edges.push(edge);
        self.stats.edges += 1;
        true
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn stats(&self) -> LoadStats {
        self.stats
    }

    pub fn edges(&self) -> &[KbEdge] {
        &self.edges
    }

    /// Edges leaving `source` along `relation`, in load order.
    pub fn outgoing<'a>(&'a self, source: &str, relation: &str) -> impl Iterator<Item = &'a KbEdge> {
        self.index
            .get(&(source.to_string(), relation.to_string()))
            .into_iter()
            .flatten()
            .map(move |&i| &self.edges[i])
    }

    pub fn with_relation<'a>(&'a self, relation: &'a str) -> impl Iterator<Item = &'a KbEdge> {
        self.edges.iter().filter(move |e| e.relation == relation)
    }
}

fn split_fields(line: &str) -> Vec<&str> {
    if line.contains('\t') {
        line.split('\t').collect()
    } else {
        line.split(',').collect()
    }
}

/// `/c/en/know_the_law/n` -> `know the law`; plain phrases pass through.
fn concept_text(raw: &str) -> String {
    let raw = raw.trim();
    if let Some(rest) = raw.strip_prefix("/c/") {
        let term = rest.split('/').nth(1).unwrap_or("");
        normalize_phrase(&term.replace('_', " "))
    } else {
        normalize_phrase(raw)
    }
}

fn relation_name(raw: &str) -> String {
    raw.trim().trim_start_matches("/r/").to_string()
}

/// Parses ConceptNet-style triples: `source<TAB>relation<TAB>target`, a
/// comma-separated equivalent, or the five-column assertion dump layout
/// (`/a/...`, relation, start, end, metadata).
pub fn parse_conceptnet(
    text: &str,
    origin_name: &str,
    vocabulary: &RelationVocabulary,
) -> Result<EdgeStore, KnowledgeError> {
    let mut store = EdgeStore::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let fields = split_fields(line);
        let (s, r, t) = match fields.as_slice() {
            [uri, r, s, t, ..] if uri.starts_with("/a/") => (*s, *r, *t),
            [s, r, t, ..] => (*s, *r, *t),
            _ => {
                return Err(KnowledgeError::Format {
                    source_name: origin_name.to_string(),
                    line: line_no,
                    message: format!("expected 3 fields, found {}", fields.len()),
                })
            }
        };
        let (source, relation, target) = (concept_text(s), relation_name(r), concept_text(t));
        if source.is_empty() || target.is_empty() || relation.is_empty() {
            return Err(KnowledgeError::Format {
                source_name: origin_name.to_string(),
                line: line_no,
                message: "empty field".into(),
            });
        }
        if !vocabulary.contains(&relation) {
            store.stats.skipped += 1;
            continue;
        }
        store.insert(KbEdge {
            source,
            relation,
            target,
            origin: Origin::Conceptnet,
            binary: None,
        });
    }
    Ok(store)
}

pub fn load_conceptnet(path: &Path, vocabulary: &RelationVocabulary) -> Result<EdgeStore, KnowledgeError> {
    let text = read_source(path)?;
    parse_conceptnet(&text, &path.display().to_string(), vocabulary)
}

fn is_blank(tok: &str) -> bool {
    matches!(tok, "___" | "X" | "Y" | "Z" | "_")
}

/// Single-person and (when available) two-person readings of an ATOMIC
/// event head.
pub fn atomic_event_forms(event: &str) -> (String, Option<String>) {
    let mut tokens: Vec<&str> = event.split_whitespace().collect();
    if tokens.first() == Some(&"PersonX") {
        tokens.remove(0);
    }

    let unary: Vec<String> = tokens
        .iter()
        .filter(|t| !is_blank(t))
        .map(|t| match *t {
            "PersonX" => "themself".to_string(),
            "PersonX's" => "their own".to_string(),
            "PersonY" => "another person".to_string(),
            "PersonY's" => "another person's".to_string(),
            other => other.to_string(),
        })
        .collect();

    let binary = match tokens.iter().rposition(|t| t.starts_with("PersonY")) {
        Some(pos) if pos + 1 == tokens.len() && tokens[pos] == "PersonY" => Some(
            tokens[..pos]
                .iter()
                .filter(|t| !is_blank(t))
                .copied()
                .collect::<Vec<_>>()
                .join(" "),
        ),
        Some(pos) if tokens[pos] == "PersonY's" && pos + 1 < tokens.len() => {
            let head: Vec<&str> = tokens[..pos].iter().filter(|t| !is_blank(t)).copied().collect();
            let tail: Vec<&str> = tokens[pos + 1..].iter().filter(|t| !is_blank(t)).copied().collect();
            if tail.iter().any(|t| t.starts_with("Person")) {
                None
            } else {
                Some(format!("{} the {} of", head.join(" "), tail.join(" ")))
            }
        }
        _ => None,
    }
    .filter(|b| !b.trim().is_empty() && !b.contains("Person"));

    (
        normalize_phrase(&unary.join(" ")),
        binary.map(|b| normalize_phrase(&b)),
    )
}

/// Parses ATOMIC `event<TAB>relation<TAB>target` rows. `xAttr` is read as
/// `Attribute`; `none` targets are dropped.
pub fn parse_atomic(
    text: &str,
    origin_name: &str,
    vocabulary: &RelationVocabulary,
) -> Result<EdgeStore, KnowledgeError> {
    let mut store = EdgeStore::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        let [event, relation, target, ..] = fields.as_slice() else {
            return Err(KnowledgeError::Format {
                source_name: origin_name.to_string(),
                line: line_no,
                message: format!("expected 3 tab-separated fields, found {}", fields.len()),
            });
        };
        let relation = match relation.trim() {
            "xAttr" => "Attribute".to_string(),
            other => other.to_string(),
        };
        let target = normalize_phrase(target);
        if target.is_empty() || event.trim().is_empty() {
            return Err(KnowledgeError::Format {
                source_name: origin_name.to_string(),
                line: line_no,
                message: "empty field".into(),
            });
        }
        if target == "none" || !vocabulary.contains(&relation) {
            store.stats.skipped += 1;
            continue;
        }
        let (source, binary) = atomic_event_forms(event.trim());
        if source.is_empty() {
            store.stats.skipped += 1;
            continue;
        }
        store.insert(KbEdge {
            source,
            relation,
            target,
            origin: Origin::Atomic,
            binary,
        });
    }
    Ok(store)
}

pub fn load_atomic(path: &Path, vocabulary: &RelationVocabulary) -> Result<EdgeStore, KnowledgeError> {
    let text = read_source(path)?;
    parse_atomic(&text, &path.display().to_string(), vocabulary)
}
