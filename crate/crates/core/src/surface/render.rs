use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::bank::TemplateBank;
use super::entities::EntityMode;
use super::SurfaceError;
use crate::fol::{AxiomId, Comparator, Hole, Polarity, TemplateId, TypeConstraint, TypedAxiom};
use crate::perturb::{
    apply_tag, expand_statement_set, ConclusionLexicon, PerturbationTag, PerturbedAxiom, Phrase, PhraseRole,
    COMP_SLOT,
};
use crate::text::{capitalize_first, char_len};

/// Separator between premise and conclusion.
pub const SO: &str = ", so ";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FactMode {
    /// The premise knowledge is stated outright before the conclusion.
    Parrot,
    /// As `Parrot`, with `not` toggled in the conclusion.
    NegationSwitch,
}

/// A rendered probe statement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Statement {
    pub statement_id: String,
    pub axiom_id: AxiomId,
    pub template_id: TemplateId,
    pub type_constraint: TypeConstraint,
    pub tag: PerturbationTag,
    pub premise: String,
    pub conclusion: String,
    pub comparator: Comparator,
    /// Char offsets `[start, end)` of `comparator` within `conclusion`.
    pub comparator_span: (usize, usize),
    pub entities: [String; 2],
    pub gold_polarity: Option<Polarity>,
    pub mode: EntityMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fact: Option<FactMode>,
}

fn statement_id(
    axiom_id: &AxiomId,
    tag: PerturbationTag,
    entities: &[String; 2],
    mode: EntityMode,
    fact: Option<FactMode>,
) -> String {
    let mut h = Sha256::new();
    for part in [
        axiom_id.as_str(),
        &tag.to_string(),
        &entities[0],
        &entities[1],
        mode.name(),
        match fact {
            None => "",
            Some(FactMode::Parrot) => "parrot",
            Some(FactMode::NegationSwitch) => "negation_switch",
        },
    ] {
        h.update(part.as_bytes());
        h.update([0u8]);
    }
    format!("st-{}", hex::encode(&h.finalize()[..8]))
}

impl Statement {
    pub fn full_text(&self) -> String {
        format!("{}{SO}{}", self.premise, self.conclusion)
    }

    /// Char offsets of the comparator within [`full_text`](Self::full_text).
    pub fn full_span(&self) -> (usize, usize) {
        let shift = char_len(&self.premise) + char_len(SO);
        (self.comparator_span.0 + shift, self.comparator_span.1 + shift)
    }

    /// Full text with the comparator replaced by `replacement`.
    pub fn full_text_with(&self, replacement: &str) -> String {
        let mut chars: Vec<char> = self.conclusion.chars().collect();
        let (s, e) = self.comparator_span;
        chars.splice(s..e, replacement.chars());
        let conclusion: String = chars.into_iter().collect();
        format!("{}{SO}{conclusion}", self.premise)
    }

    /// The same statement with different entity names. Only entity tokens
    /// change.
    pub fn rebind(&self, entities: [String; 2], mode: EntityMode) -> Statement {
        let map = [
            (self.entities[0].as_str(), entities[0].as_str()),
            (self.entities[1].as_str(), entities[1].as_str()),
        ];
        let premise = replace_tokens(&self.premise, &map, true);
        let conclusion = replace_tokens(&self.conclusion, &map, false);
        let prefix: String = self.conclusion.chars().take(self.comparator_span.0).collect();
        let start = char_len(&replace_tokens(&prefix, &map, false));
        let len = self.comparator_span.1 - self.comparator_span.0;
        Statement {
            statement_id: statement_id(&self.axiom_id, self.tag, &entities, mode, self.fact),
            premise,
            conclusion,
            comparator_span: (start, start + len),
            entities,
            mode,
            ..self.clone()
        }
    }
}

/// Replaces whole alphanumeric tokens. With `sentence_start`, a
/// capitalised first token also matches and stays capitalised.
fn replace_tokens(text: &str, map: &[(&str, &str)], sentence_start: bool) -> String {
    let mut out = String::with_capacity(text.len());
    let mut token = String::new();
    let mut first = true;
    let flush = |token: &mut String, out: &mut String, first: &mut bool| {
        if token.is_empty() {
            return;
        }
        let mut replaced = None;
        for (old, new) in map {
            if token == old {
                replaced = Some(if *first && sentence_start {
                    capitalize_first(new)
                } else {
                    new.to_string()
                });
            } else if *first && sentence_start && *token == capitalize_first(old) {
                replaced = Some(capitalize_first(new));
            }
            if replaced.is_some() {
                break;
            }
        }
        out.push_str(replaced.as_deref().unwrap_or(token));
        token.clear();
        *first = false;
    };
    for c in text.chars() {
        if c.is_alphanumeric() {
            token.push(c);
        } else {
            flush(&mut token, &mut out, &mut first);
            first = false;
            out.push(c);
        }
    }
    flush(&mut token, &mut out, &mut first);
    out
}

/// Everything needed to render any variant of one axiom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomSurface {
    pub axiom: TypedAxiom,
    pub lexicon: ConclusionLexicon,
    /// Premise with arguments filled and `{A}`/`{B}` left open.
    premise: String,
    /// Fact sentence with the base comparator, if the bank has one.
    fact: Option<String>,
}

fn fill(pattern: &str, typed: &TypedAxiom) -> String {
    let a = &typed.axiom;
    let get = |h: Hole| a.bindings().get(&h).map(String::as_str).unwrap_or("");
    pattern
        .replace("{p1}", get(Hole::PropA))
        .replace("{p2}", get(Hole::PropB))
        .replace("{p}", get(Hole::Premise))
        .replace("{r}", get(Hole::Relation))
        .replace("{PCOMP}", get(Hole::PremiseComparator))
        .replace("{q}", get(Hole::Property))
}

impl AxiomSurface {
    /// Without a curated lexicon the bank's phrase becomes the only (base)
    /// phrase, giving the automatically derivable variants.
    pub fn new(
        axiom: TypedAxiom,
        lexicon: Option<ConclusionLexicon>,
        bank: &TemplateBank,
    ) -> Result<AxiomSurface, SurfaceError> {
        let template = bank.get(axiom.constraint);
        let lexicon = match lexicon {
            Some(l) => l,
            None => {
                let t = template.as_ref().map_err(|e| e.clone())?;
                let base = Phrase::new(PhraseRole::Base, &fill(&t.phrase, &axiom), None)?;
                ConclusionLexicon::base_only(base)
            }
        };
        let premise = match (&lexicon.premise, &template) {
            (Some(p), _) => fill(p, &axiom),
            (None, Ok(t)) => fill(&t.premise, &axiom),
            (None, Err(e)) => return Err(e.clone()),
        };
        let fact = match &template {
            Ok(t) => t.fact.as_ref().map(|f| {
                let phrase = fill(&lexicon.base.render(false, axiom.axiom.comparator()), &axiom);
                fill(&f.replace("{PHRASE}", &phrase), &axiom)
            }),
            Err(_) => None,
        };
        Ok(AxiomSurface {
            axiom,
            lexicon,
            premise,
            fact,
        })
    }

    pub fn variants(&self) -> Result<Vec<PerturbedAxiom>, SurfaceError> {
        Ok(expand_statement_set(&self.axiom.axiom, &self.lexicon)?)
    }

    pub fn variant(&self, tag: PerturbationTag) -> Result<PerturbedAxiom, SurfaceError> {
        Ok(apply_tag(&self.axiom.axiom, &self.lexicon, tag)?)
    }

    pub fn fact(&self) -> Option<&str> {
        self.fact.as_deref()
    }

    pub fn render(
        &self,
        p: &PerturbedAxiom,
        entities: &[String; 2],
        mode: EntityMode,
    ) -> Result<Statement, SurfaceError> {
        self.render_with(p, entities, mode, None)
    }

    fn render_with(
        &self,
        p: &PerturbedAxiom,
        entities: &[String; 2],
        mode: EntityMode,
        fact: Option<FactMode>,
    ) -> Result<Statement, SurfaceError> {
        if p.axiom_id != self.axiom.id() {
            return Err(SurfaceError::ForeignVariant);
        }
        if entities[0] == entities[1] {
            return Err(SurfaceError::SameEntities);
        }
        let (a, b) = (&entities[0], &entities[1]);
        let (pa, pb) = if p.entity_order_premise.is_swapped() { (b, a) } else { (a, b) };
        let mut premise = capitalize_first(&self.premise.replace("{A}", pa).replace("{B}", pb));
        if fact.is_some() {
            let f = self.fact.as_ref().ok_or(SurfaceError::NoFactTemplate(self.axiom.constraint))?;
            premise = format!("{premise}, and {f}");
        }

        let (x, y) = if p.entity_order_conclusion.is_swapped() { (b, a) } else { (a, b) };
        let phrase = fill(p.phrase.pattern(p.has_not_token), &self.axiom);
        let slotted = if phrase.contains("{Y}") {
            format!("{x} {}", phrase.replace("{Y}", y))
        } else if self.axiom.axiom.template().is_temporal() {
            format!("{x} {phrase}")
        } else {
            format!("{x} {phrase} than {y}")
        };
        let at = slotted.find(COMP_SLOT).ok_or(SurfaceError::MissingSlot)?;
        let word = p.effective_comparator.word();
        let start = char_len(&slotted[..at]);
        let conclusion = format!("{}{word}{}", &slotted[..at], &slotted[at + COMP_SLOT.len()..]);

        Ok(Statement {
            statement_id: statement_id(&p.axiom_id, p.tag, entities, mode, fact),
            axiom_id: p.axiom_id.clone(),
            template_id: self.axiom.axiom.template(),
            type_constraint: self.axiom.constraint,
            tag: p.tag,
            premise,
            conclusion,
            comparator: p.effective_comparator,
            comparator_span: (start, start + char_len(word)),
            entities: entities.clone(),
            gold_polarity: p.effective_comparator.valence(),
            mode,
            fact,
        })
    }

    /// Adds the premise knowledge as an explicit fact. `NegationSwitch`
    /// toggles `not` in the conclusion, and the gold comparator follows the
    /// parity rule.
    pub fn augment_with_fact(
        &self,
        p: &PerturbedAxiom,
        entities: &[String; 2],
        mode: EntityMode,
        fact: FactMode,
    ) -> Result<Statement, SurfaceError> {
        if self.fact.is_none() {
            return Err(SurfaceError::NoFactTemplate(self.axiom.constraint));
        }
        let variant = match fact {
            FactMode::Parrot => p.clone(),
            FactMode::NegationSwitch => self.variant(PerturbationTag {
                linguistic: p.tag.linguistic.toggle_negation(),
                asymmetry: p.tag.asymmetry,
            })?,
        };
        self.render_with(&variant, entities, mode, Some(fact))
    }
}

/// Seam for alternative statement converters keyed by axiom and tag.
pub trait StatementProvider {
    fn statement(
        &self,
        surface: &AxiomSurface,
        variant: &PerturbedAxiom,
        entities: &[String; 2],
        mode: EntityMode,
    ) -> Result<Statement, SurfaceError>;
}

/// The deterministic template renderer.
#[derive(Debug, Clone, Copy, Default)]
pub struct TemplateRenderer;

impl StatementProvider for TemplateRenderer {
    fn statement(
        &self,
        surface: &AxiomSurface,
        variant: &PerturbedAxiom,
        entities: &[String; 2],
        mode: EntityMode,
    ) -> Result<Statement, SurfaceError> {
        surface.render(variant, entities, mode)
    }
}
