use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::lexicon::{ConclusionLexicon, Phrase, PhraseRole};
use super::PerturbError;
use crate::fol::{Axiom, AxiomId, Comparator, Hole, TemplateId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LinguisticOp {
    Original,
    Negation,
    Antonym,
    Paraphrase,
    ParaphraseInversion,
    NegationAntonym,
    NegationParaphrase,
    NegationParaphraseInversion,
}

impl LinguisticOp {
    pub const ALL: [LinguisticOp; 8] = [
        LinguisticOp::Original,
        LinguisticOp::Negation,
        LinguisticOp::Antonym,
        LinguisticOp::Paraphrase,
        LinguisticOp::ParaphraseInversion,
        LinguisticOp::NegationAntonym,
        LinguisticOp::NegationParaphrase,
        LinguisticOp::NegationParaphraseInversion,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LinguisticOp::Original => "original",
            LinguisticOp::Negation => "negation",
            LinguisticOp::Antonym => "antonym",
            LinguisticOp::Paraphrase => "paraphrase",
            LinguisticOp::ParaphraseInversion => "paraphrase_inversion",
            LinguisticOp::NegationAntonym => "negation_antonym",
            LinguisticOp::NegationParaphrase => "negation_paraphrase",
            LinguisticOp::NegationParaphraseInversion => "negation_paraphrase_inversion",
        }
    }

    /// Lexicon phrase the operator draws on.
    pub fn role(self) -> PhraseRole {
        match self {
            LinguisticOp::Original | LinguisticOp::Negation => PhraseRole::Base,
            LinguisticOp::Antonym | LinguisticOp::NegationAntonym => PhraseRole::Antonym,
            LinguisticOp::Paraphrase | LinguisticOp::NegationParaphrase => PhraseRole::Paraphrase,
            LinguisticOp::ParaphraseInversion | LinguisticOp::NegationParaphraseInversion => {
                PhraseRole::ParaphraseOfAntonym
            }
        }
    }

    pub fn has_not(self) -> bool {
        matches!(
            self,
            LinguisticOp::Negation
                | LinguisticOp::NegationAntonym
                | LinguisticOp::NegationParaphrase
                | LinguisticOp::NegationParaphraseInversion
        )
    }

    /// The operator with the `not` token toggled.
    pub fn toggle_negation(self) -> LinguisticOp {
        LinguisticOp::from_parts(self.role(), !self.has_not())
    }

    pub fn from_parts(role: PhraseRole, not: bool) -> LinguisticOp {
        match (role, not) {
            (PhraseRole::Base, false) => LinguisticOp::Original,
            (PhraseRole::Base, true) => LinguisticOp::Negation,
            (PhraseRole::Antonym, false) => LinguisticOp::Antonym,
            (PhraseRole::Antonym, true) => LinguisticOp::NegationAntonym,
            (PhraseRole::Paraphrase, false) => LinguisticOp::Paraphrase,
            (PhraseRole::Paraphrase, true) => LinguisticOp::NegationParaphrase,
            (PhraseRole::ParaphraseOfAntonym, false) => LinguisticOp::ParaphraseInversion,
            (PhraseRole::ParaphraseOfAntonym, true) => LinguisticOp::NegationParaphraseInversion,
        }
    }

    /// XOR of the phrase flip and the `not` token.
    pub fn parity(self) -> bool {
        self.role().flip_bit() ^ self.has_not()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Asymmetry {
    Original,
    AsymmetricPremise,
    AsymmetricConclusion,
}

impl Asymmetry {
    pub const ALL: [Asymmetry; 3] = [
        Asymmetry::Original,
        Asymmetry::AsymmetricPremise,
        Asymmetry::AsymmetricConclusion,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Asymmetry::Original => "original",
            Asymmetry::AsymmetricPremise => "asymmetric_premise",
            Asymmetry::AsymmetricConclusion => "asymmetric_conclusion",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Site {
    Premise,
    Conclusion,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PerturbationTag {
    pub linguistic: LinguisticOp,
    pub asymmetry: Asymmetry,
}

impl PerturbationTag {
    pub const ORIGINAL: PerturbationTag = PerturbationTag {
        linguistic: LinguisticOp::Original,
        asymmetry: Asymmetry::Original,
    };

    /// All 24 tags, linguistic-major.
    pub fn all() -> Vec<PerturbationTag> {
        LinguisticOp::ALL
            .iter()
            .flat_map(|&linguistic| {
                Asymmetry::ALL
                    .iter()
                    .map(move |&asymmetry| PerturbationTag { linguistic, asymmetry })
            })
            .collect()
    }
}

impl fmt::Display for PerturbationTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.linguistic.name(), self.asymmetry.name())
    }
}

impl fmt::Display for LinguisticOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl fmt::Display for Asymmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PerturbationTag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PerturbationTag::all()
            .into_iter()
            .find(|t| t.to_string() == s)
            .ok_or_else(|| format!("unknown perturbation tag `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EntityOrder {
    AB,
    BA,
}

impl EntityOrder {
    pub fn swapped(self) -> EntityOrder {
        match self {
            EntityOrder::AB => EntityOrder::BA,
            EntityOrder::BA => EntityOrder::AB,
        }
    }

    pub fn is_swapped(self) -> bool {
        self == EntityOrder::BA
    }
}

/// Relations whose two arguments can be exchanged without changing
/// meaning. Swapping entities around them is not a perturbation.
pub const SYMMETRIC_RELATIONS: [&str; 10] = [
    "friend",
    "sibling",
    "spouse",
    "neighbor",
    "classmate",
    "colleague",
    "cousin",
    "roommate",
    "partner",
    "teammate",
];

/// Whether exchanging A and B at `site` changes the axiom's meaning.
pub fn site_is_ordered(axiom: &Axiom, site: Site) -> bool {
    match (axiom.template(), site) {
        (TemplateId::Lt5, _) => false,
        (TemplateId::Lt2, Site::Premise) => {
            let rel = axiom.binding(Hole::Relation).to_lowercase();
            !SYMMETRIC_RELATIONS
                .iter()
                .any(|s| rel == *s || rel.strip_suffix('s') == Some(s))
        }
        _ => true,
    }
}

/// One variant of an axiom, with every input of the parity rule kept for
/// auditing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PerturbedAxiom {
    pub axiom_id: AxiomId,
    pub tag: PerturbationTag,
    pub base_comparator: Comparator,
    pub phrase: Phrase,
    pub has_not_token: bool,
    pub entity_order_premise: EntityOrder,
    pub entity_order_conclusion: EntityOrder,
    pub phrase_flip: bool,
    pub parity: bool,
    pub effective_comparator: Comparator,
    pub premise_ordered: bool,
    pub conclusion_ordered: bool,
}

impl PerturbedAxiom {
    fn recompute(&mut self) {
        self.parity = self.phrase_flip
            ^ self.has_not_token
            ^ self.entity_order_premise.is_swapped()
            ^ self.entity_order_conclusion.is_swapped();
        let pair = self.phrase.pair_or(self.base_comparator.pair());
        self.effective_comparator = resolve_comparator(self.base_comparator, self.parity).in_pair(pair);
    }
}

/// `base` when `parity` is false, otherwise the other member of its pair.
pub fn resolve_comparator(base: Comparator, parity: bool) -> Comparator {
    base.resolve(parity)
}

pub fn apply_linguistic(
    axiom: &Axiom,
    lexicon: &ConclusionLexicon,
    op: LinguisticOp,
) -> Result<PerturbedAxiom, PerturbError> {
    let role = op.role();
    let phrase = lexicon.phrase(role).ok_or(PerturbError::LexiconGap { op, role })?;
    let base = axiom.comparator();
    if let Some(pair) = phrase.pair {
        if pair.is_temporal() != base.is_temporal() {
            return Err(PerturbError::PairMismatch {
                role,
                comparator: base,
            });
        }
    }
    let mut p = PerturbedAxiom {
        axiom_id: axiom.id(),
        tag: PerturbationTag {
            linguistic: op,
            asymmetry: Asymmetry::Original,
        },
        base_comparator: base,
        phrase: phrase.clone(),
        has_not_token: op.has_not(),
        entity_order_premise: EntityOrder::AB,
        entity_order_conclusion: EntityOrder::AB,
        phrase_flip: role.flip_bit(),
        parity: false,
        effective_comparator: base,
        premise_ordered: site_is_ordered(axiom, Site::Premise),
        conclusion_ordered: site_is_ordered(axiom, Site::Conclusion),
    };
    p.recompute();
    Ok(p)
}

/// Swaps the entities at `site`. Applying it twice at the same site
/// restores the input. Only one site may be swapped at a time.
pub fn apply_asymmetry(p: &PerturbedAxiom, site: Site) -> Result<PerturbedAxiom, PerturbError> {
    let ordered = match site {
        Site::Premise => p.premise_ordered,
        Site::Conclusion => p.conclusion_ordered,
    };
    if !ordered {
        return Err(PerturbError::SymmetricSite { site });
    }
    let mut out = p.clone();
    match site {
        Site::Premise => out.entity_order_premise = out.entity_order_premise.swapped(),
        Site::Conclusion => out.entity_order_conclusion = out.entity_order_conclusion.swapped(),
    }
    out.tag.asymmetry = match (out.entity_order_premise, out.entity_order_conclusion) {
        (EntityOrder::AB, EntityOrder::AB) => Asymmetry::Original,
        (EntityOrder::BA, EntityOrder::AB) => Asymmetry::AsymmetricPremise,
        (EntityOrder::AB, EntityOrder::BA) => Asymmetry::AsymmetricConclusion,
        (EntityOrder::BA, EntityOrder::BA) => return Err(PerturbError::CompoundAsymmetry),
    };
    out.recompute();
    Ok(out)
}

/// Applies a full tag.
pub fn apply_tag(
    axiom: &Axiom,
    lexicon: &ConclusionLexicon,
    tag: PerturbationTag,
) -> Result<PerturbedAxiom, PerturbError> {
    let p = apply_linguistic(axiom, lexicon, tag.linguistic)?;
    match tag.asymmetry {
        Asymmetry::Original => Ok(p),
        Asymmetry::AsymmetricPremise => apply_asymmetry(&p, Site::Premise),
        Asymmetry::AsymmetricConclusion => apply_asymmetry(&p, Site::Conclusion),
    }
}

/// Every variant the lexicon and the axiom's shape support, in tag order.
/// Missing phrases and symmetric sites reduce the output.
pub fn expand_statement_set(
    axiom: &Axiom,
    lexicon: &ConclusionLexicon,
) -> Result<Vec<PerturbedAxiom>, PerturbError> {
    let mut out = Vec::with_capacity(24);
    for tag in PerturbationTag::all() {
        match apply_tag(axiom, lexicon, tag) {
            Ok(p) => out.push(p),
            Err(PerturbError::LexiconGap { .. } | PerturbError::SymmetricSite { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fol::parse_axiom;
    use crate::perturb::PhraseRole;

    fn cracks() -> (Axiom, ConclusionLexicon) {
        let axiom = parse_axiom(
            "More(Prop(A,wide),Prop(B,wide)) -> Harder(Prop(A,slip through cracks),Prop(B,slip through cracks))",
        )
        .unwrap();
        let p = |role, t| Phrase::new(role, t, None).unwrap();
        let lex = ConclusionLexicon {
            premise: Some("{A} is wider than {B}".into()),
            base: p(PhraseRole::Base, "finds it harder to slip through cracks"),
            antonym: Some(p(PhraseRole::Antonym, "finds it easier to be blocked by cracks")),
            paraphrase: Some(p(PhraseRole::Paraphrase, "is worse at fitting into openings")),
            paraphrase_of_antonym: Some(p(
                PhraseRole::ParaphraseOfAntonym,
                "is more impeded by small openings",
            )),
        };
        (axiom, lex)
    }

    #[test]
    fn op_parities() {
        use LinguisticOp::*;
        let expected = [false, true, true, false, true, false, true, false];
        for (op, want) in LinguisticOp::ALL.iter().zip(expected) {
            assert_eq!(op.parity(), want, "{op}");
        }
        assert!(!NegationAntonym.parity());
        for op in LinguisticOp::ALL {
            assert_eq!(op.toggle_negation().toggle_negation(), op);
        }
    }

    #[test]
    fn full_lexicon_expands_to_24_balanced() {
        let (axiom, lex) = cracks();
        let set = expand_statement_set(&axiom, &lex).unwrap();
        assert_eq!(set.len(), 24);
        let pos = set
            .iter()
            .filter(|p| p.effective_comparator.is_leading())
            .count();
        assert_eq!(pos, 12);
    }

    #[test]
    fn base_only_lexicon_gives_six() {
        let (axiom, lex) = cracks();
        let set = expand_statement_set(&axiom, &ConclusionLexicon::base_only(lex.base)).unwrap();
        assert_eq!(set.len(), 6);
    }

    #[test]
    fn missing_paraphrase_is_a_gap() {
        let (axiom, lex) = cracks();
        let err = apply_linguistic(&axiom, &ConclusionLexicon::base_only(lex.base), LinguisticOp::Paraphrase)
            .unwrap_err();
        assert!(matches!(err, PerturbError::LexiconGap { .. }));
    }

    #[test]
    fn asymmetry_is_an_involution() {
        let (axiom, lex) = cracks();
        for op in LinguisticOp::ALL {
            let p = apply_linguistic(&axiom, &lex, op).unwrap();
            for site in [Site::Premise, Site::Conclusion] {
                let once = apply_asymmetry(&p, site).unwrap();
                assert_ne!(once.effective_comparator, p.effective_comparator);
                assert_eq!(apply_asymmetry(&once, site).unwrap(), p);
            }
        }
    }

    #[test]
    fn symmetric_relation_and_temporal_sites() {
        let friend = parse_axiom("Rel(A,B,friend) -> More(Prop(A,x),Prop(B,x))").unwrap();
        let lex = ConclusionLexicon::base_only(Phrase::new(PhraseRole::Base, "is {COMP} likely to x", None).unwrap());
        let p = apply_linguistic(&friend, &lex, LinguisticOp::Original).unwrap();
        assert!(matches!(
            apply_asymmetry(&p, Site::Premise),
            Err(PerturbError::SymmetricSite { site: Site::Premise })
        ));
        assert_eq!(expand_statement_set(&friend, &lex).unwrap().len(), 4);

        let t = parse_axiom("Prop(A,entered the building) -> before(Prop(A,outside))").unwrap();
        let lex = ConclusionLexicon::base_only(Phrase::new(PhraseRole::Base, "was outside before that", None).unwrap());
        let set = expand_statement_set(&t, &lex).unwrap();
        assert_eq!(set.len(), 2);
        assert_eq!(set[1].effective_comparator, Comparator::After);
    }

    #[test]
    fn temporal_phrase_on_comparative_axiom_is_rejected() {
        let (axiom, _) = cracks();
        let lex = ConclusionLexicon::base_only(Phrase::new(PhraseRole::Base, "was x before that", None).unwrap());
        assert!(matches!(
            apply_linguistic(&axiom, &lex, LinguisticOp::Original),
            Err(PerturbError::PairMismatch { .. })
        ));
    }

    #[test]
    fn tags_parse_back() {
        let all = PerturbationTag::all();
        assert_eq!(all.len(), 24);
        for t in all {
            assert_eq!(t.to_string().parse::<PerturbationTag>().unwrap(), t);
        }
    }
}
