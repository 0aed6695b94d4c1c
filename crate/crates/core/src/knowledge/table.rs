use serde::{Deserialize, Serialize};

use super::edges::KbEdge;
use super::seeds::ListKind;
use crate::fol::{instantiate_template, Bindings, Comparator, FolError, TemplateId, TypeConstraint, TypedAxiom};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Edge(KbEdge),
    Seed { list: ListKind, entry: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnowledgeRow {
    pub bindings: Bindings,
    pub comparator: Comparator,
    pub provenance: Vec<Provenance>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnowledgeTable {
    pub strategy_id: u8,
    pub template_id: TemplateId,
    pub type_constraint: TypeConstraint,
    pub rows: Vec<KnowledgeRow>,
}

/// One line of a knowledge table dump.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableLine {
    pub strategy_id: u8,
    pub template_id: TemplateId,
    pub type_constraint: TypeConstraint,
    pub row: Bindings,
    pub comparator: Comparator,
    pub provenance: Vec<Provenance>,
}

impl KnowledgeTable {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn to_lines(&self) -> Vec<TableLine> {
        self.rows
            .iter()
            .map(|r| TableLine {
                strategy_id: self.strategy_id,
                template_id: self.template_id,
                type_constraint: self.type_constraint,
                row: r.bindings.clone(),
                comparator: r.comparator,
                provenance: r.provenance.clone(),
            })
            .collect()
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for line in self.to_lines() {
            out.push_str(&serde_json::to_string(&line).expect("table lines serialize"));
            out.push('\n');
        }
        out
    }

    /// Rebuilds a table from dump lines. Lines must share one strategy.
    pub fn from_lines(lines: Vec<TableLine>) -> Option<KnowledgeTable> {
        let first = lines.first()?;
        let mut table = KnowledgeTable {
            strategy_id: first.strategy_id,
            template_id: first.template_id,
            type_constraint: first.type_constraint,
            rows: Vec::with_capacity(lines.len()),
        };
        for l in lines {
            if l.strategy_id != table.strategy_id {
                return None;
            }
            table.rows.push(KnowledgeRow {
                bindings: l.row,
                comparator: l.comparator,
                provenance: l.provenance,
            });
        }
        Some(table)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowDiagnostic {
    pub row_index: usize,
    pub error: FolError,
}

#[derive(Debug, Clone, Default)]
pub struct FillOutcome {
    pub axioms: Vec<TypedAxiom>,
    pub diagnostics: Vec<RowDiagnostic>,
}

/// Instantiates one axiom per valid row. Rows that fail validation are
/// skipped and reported. Rows yielding an axiom already produced are
/// dropped silently, so ids are unique within the output.
pub fn fill_templates(table: &KnowledgeTable) -> FillOutcome {
    let mut out = FillOutcome::default();
    let mut seen = std::collections::HashSet::new();
    for (row_index, row) in table.rows.iter().enumerate() {
        let built = instantiate_template(table.template_id, row.bindings.clone(), row.comparator)
            .and_then(|a| TypedAxiom::new(a, table.type_constraint));
        match built {
            Ok(axiom) => {
                if seen.insert(axiom.id()) {
                    out.axioms.push(axiom);
                }
            }
            Err(error) => out.diagnostics.push(RowDiagnostic { row_index, error }),
        }
    }
    out
}
