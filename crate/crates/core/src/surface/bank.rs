use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::SurfaceError;
use crate::fol::TypeConstraint;

const BUILTIN_BANK: &str = include_str!("../../data/templates.json");

/// Patterns for one type constraint.
///
/// `premise` may use `{A}`, `{B}`, `{p1}`, `{p2}`, `{p}`, `{r}` and
/// `{PCOMP}`. `phrase` is the conclusion verb phrase with `{COMP}` and
/// `{q}`; it is placed as `X phrase than Y` unless it mentions `{Y}`
/// itself. `fact` states the premise knowledge outright using `{PHRASE}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceTemplate {
    pub premise: String,
    pub phrase: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fact: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TemplateBank(pub BTreeMap<TypeConstraint, SurfaceTemplate>);

impl TemplateBank {
    pub fn builtin() -> TemplateBank {
        TemplateBank::from_json(BUILTIN_BANK).expect("built-in template bank is valid")
    }

    pub fn from_json(text: &str) -> Result<TemplateBank, SurfaceError> {
        let bank: TemplateBank = serde_json::from_str(text).map_err(|e| SurfaceError::Bank(e.to_string()))?;
        for (c, t) in &bank.0 {
            if t.phrase.matches("{COMP}").count() != 1 {
                return Err(SurfaceError::Bank(format!("{c}: phrase needs exactly one {{COMP}} slot")));
            }
            if !t.premise.contains("{A}") {
                return Err(SurfaceError::Bank(format!("{c}: premise must mention {{A}}")));
            }
        }
        Ok(bank)
    }

    pub fn get(&self, constraint: TypeConstraint) -> Result<&SurfaceTemplate, SurfaceError> {
        self.0.get(&constraint).ok_or(SurfaceError::NoTemplate(constraint))
    }
}
