use std::fmt;

use serde::{Deserialize, Serialize};

use super::PerturbError;
use crate::fol::{Comparator, ComparatorPair};
use crate::text::negate_verb_phrase;

/// Marks where the comparator word goes inside a phrase.
pub const COMP_SLOT: &str = "{COMP}";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhraseRole {
    Base,
    Antonym,
    Paraphrase,
    ParaphraseOfAntonym,
}

impl PhraseRole {
    pub const ALL: [PhraseRole; 4] = [
        PhraseRole::Base,
        PhraseRole::Antonym,
        PhraseRole::Paraphrase,
        PhraseRole::ParaphraseOfAntonym,
    ];

    /// Whether the phrase inverts the truth direction relative to base.
    pub fn flip_bit(self) -> bool {
        matches!(self, PhraseRole::Antonym | PhraseRole::ParaphraseOfAntonym)
    }

    pub fn name(self) -> &'static str {
        match self {
            PhraseRole::Base => "base",
            PhraseRole::Antonym => "antonym",
            PhraseRole::Paraphrase => "paraphrase",
            PhraseRole::ParaphraseOfAntonym => "paraphrase_of_antonym",
        }
    }
}

impl fmt::Display for PhraseRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A conclusion verb phrase with its comparator replaced by [`COMP_SLOT`].
///
/// `pair` is the comparator pair the phrase is written with; `None` means
/// "whatever pair the axiom uses" and is only produced for phrases written
/// with an explicit slot.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Phrase {
    pub role: PhraseRole,
    pub text: String,
    pub negated: String,
    pub pair: Option<ComparatorPair>,
}

fn word_spans(text: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut start = None;
    let mut out = Vec::new();
    for (i, c) in text.char_indices() {
        match (c.is_alphanumeric() || c == '{' || c == '}', start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                out.push((s, &text[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, &text[s..]));
    }
    out.into_iter()
}

/// Replaces the first comparator word (or an existing slot) with the slot.
fn slot_comparator(role: PhraseRole, text: &str) -> Result<(String, Option<ComparatorPair>), PerturbError> {
    let text = text.split_whitespace().collect::<Vec<_>>().join(" ");
    if text.is_empty() {
        return Err(PerturbError::Phrase {
            role,
            message: "empty phrase".into(),
        });
    }
    let slots = text.matches(COMP_SLOT).count();
    if slots > 1 {
        return Err(PerturbError::Phrase {
            role,
            message: format!("`{text}` has more than one comparator slot"),
        });
    }
    if slots == 1 {
        return Ok((text, None));
    }
    for (start, word) in word_spans(&text) {
        if let Some(c) = Comparator::from_word(word) {
            let slotted = format!("{}{COMP_SLOT}{}", &text[..start], &text[start + word.len()..]);
            return Ok((slotted, Some(c.pair())));
        }
    }
    Err(PerturbError::Phrase {
        role,
        message: format!("`{text}` contains no comparator word"),
    })
}

impl Phrase {
    /// Builds a phrase from text containing either one comparator word or
    /// one [`COMP_SLOT`]. The negated form is derived automatically unless
    /// given.
    pub fn new(role: PhraseRole, text: &str, negated: Option<&str>) -> Result<Phrase, PerturbError> {
        let (text, pair) = slot_comparator(role, text)?;
        let negated = match negated {
            Some(n) => {
                let (n, npair) = slot_comparator(role, n)?;
                if npair.is_some() && pair.is_some() && npair != pair {
                    return Err(PerturbError::Phrase {
                        role,
                        message: "negated form uses a different comparator pair".into(),
                    });
                }
                n
            }
            None => {
                if text.starts_with(COMP_SLOT) {
                    return Err(PerturbError::Phrase {
                        role,
                        message: format!("`{text}` starts with the comparator; give its negated form explicitly"),
                    });
                }
                negate_verb_phrase(&text)
            }
        };
        Ok(Phrase {
            role,
            text,
            negated,
            pair,
        })
    }

    /// Phrase pattern for the requested polarity of the `not` token.
    pub fn pattern(&self, negated: bool) -> &str {
        if negated {
            &self.negated
        } else {
            &self.text
        }
    }

    pub fn pair_or(&self, fallback: ComparatorPair) -> ComparatorPair {
        self.pair.unwrap_or(fallback)
    }

    pub fn render(&self, negated: bool, comparator: Comparator) -> String {
        self.pattern(negated).replacen(COMP_SLOT, comparator.word(), 1)
    }
}

/// Curated conclusion phrases for one axiom.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConclusionLexicon {
    /// Optional hand-written premise pattern overriding the template bank,
    /// using `{A}` and `{B}` for the entities.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub premise: Option<String>,
    pub base: Phrase,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub antonym: Option<Phrase>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub paraphrase: Option<Phrase>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub paraphrase_of_antonym: Option<Phrase>,
}

impl ConclusionLexicon {
    pub fn base_only(base: Phrase) -> ConclusionLexicon {
        ConclusionLexicon {
            premise: None,
            base,
            antonym: None,
            paraphrase: None,
            paraphrase_of_antonym: None,
        }
    }

    pub fn phrase(&self, role: PhraseRole) -> Option<&Phrase> {
        match role {
            PhraseRole::Base => Some(&self.base),
            PhraseRole::Antonym => self.antonym.as_ref(),
            PhraseRole::Paraphrase => self.paraphrase.as_ref(),
            PhraseRole::ParaphraseOfAntonym => self.paraphrase_of_antonym.as_ref(),
        }
    }

    pub fn is_complete(&self) -> bool {
        PhraseRole::ALL.iter().all(|r| self.phrase(*r).is_some())
    }
}

/// A phrase in a lexicon file: plain text, or text with an explicit
/// negated form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PhraseSpec {
    Text(String),
    Full {
        text: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        negated: Option<String>,
    },
}

impl PhraseSpec {
    fn build(&self, role: PhraseRole) -> Result<Phrase, PerturbError> {
        match self {
            PhraseSpec::Text(t) => Phrase::new(role, t, None),
            PhraseSpec::Full { text, negated } => Phrase::new(role, text, negated.as_deref()),
        }
    }
}

/// One line of a lexicon file. The axiom is identified by `axiom_id` or by
/// its `fol_text`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LexiconRecord {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub axiom_id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fol_text: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub premise: Option<String>,
    pub base: PhraseSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub antonym: Option<PhraseSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub paraphrase: Option<PhraseSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub paraphrase_of_antonym: Option<PhraseSpec>,
}

impl LexiconRecord {
    pub fn to_lexicon(&self) -> Result<ConclusionLexicon, PerturbError> {
        let opt = |spec: &Option<PhraseSpec>, role| spec.as_ref().map(|s| s.build(role)).transpose();
        if let Some(p) = &self.premise {
            if !(p.contains("{A}") && p.contains("{B}")) {
                return Err(PerturbError::Phrase {
                    role: PhraseRole::Base,
                    message: format!("premise pattern `{p}` must mention both {{A}} and {{B}}"),
                });
            }
        }
        Ok(ConclusionLexicon {
            premise: self.premise.clone(),
            base: self.base.build(PhraseRole::Base)?,
            antonym: opt(&self.antonym, PhraseRole::Antonym)?,
            paraphrase: opt(&self.paraphrase, PhraseRole::Paraphrase)?,
            paraphrase_of_antonym: opt(&self.paraphrase_of_antonym, PhraseRole::ParaphraseOfAntonym)?,
        })
    }
}
