use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::ProbeError;
use crate::fol::{AxiomId, Comparator, Polarity, TemplateId};
use crate::perturb::PerturbationTag;
use crate::surface::Statement;

pub const DEFAULT_MASK: &str = "[MASK]";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    Mwp,
    Sp,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MwpProbe {
    pub probe_id: String,
    pub statement_id: String,
    pub axiom_id: AxiomId,
    pub tag: PerturbationTag,
    pub template_id: TemplateId,
    pub masked_text: String,
    pub candidates: [Comparator; 2],
    pub gold_index: usize,
}

impl MwpProbe {
    pub fn gold(&self) -> Comparator {
        self.candidates[self.gold_index]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpProbe {
    pub probe_id: String,
    pub statement_id: String,
    pub axiom_id: AxiomId,
    pub tag: PerturbationTag,
    pub template_id: TemplateId,
    pub sentence_correct: String,
    pub sentence_incorrect: String,
    /// Comparator of the correct sentence.
    pub comparator: Comparator,
}

/// Either kind of probe, as read back from a probe file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Probe {
    Mwp(MwpProbe),
    Sp(SpProbe),
}

impl Probe {
    pub fn id(&self) -> &str {
        match self {
            Probe::Mwp(p) => &p.probe_id,
            Probe::Sp(p) => &p.probe_id,
        }
    }

    pub fn task(&self) -> Task {
        match self {
            Probe::Mwp(_) => Task::Mwp,
            Probe::Sp(_) => Task::Sp,
        }
    }

    pub fn axiom_id(&self) -> &AxiomId {
        match self {
            Probe::Mwp(p) => &p.axiom_id,
            Probe::Sp(p) => &p.axiom_id,
        }
    }

    pub fn tag(&self) -> PerturbationTag {
        match self {
            Probe::Mwp(p) => p.tag,
            Probe::Sp(p) => p.tag,
        }
    }

    pub fn template_id(&self) -> TemplateId {
        match self {
            Probe::Mwp(p) => p.template_id,
            Probe::Sp(p) => p.template_id,
        }
    }

    pub fn gold_comparator(&self) -> Comparator {
        match self {
            Probe::Mwp(p) => p.gold(),
            Probe::Sp(p) => p.comparator,
        }
    }

    pub fn gold_polarity(&self) -> Option<Polarity> {
        self.gold_comparator().valence()
    }

    /// Number of scores a prediction must carry.
    pub fn arity(&self) -> usize {
        2
    }
}

fn check_span(s: &Statement) -> Result<(), ProbeError> {
    let (a, b) = s.comparator_span;
    let got: String = s.conclusion.chars().skip(a).take(b.saturating_sub(a)).collect();
    if b <= a || got != s.comparator.word() {
        return Err(ProbeError::NoComparator(s.statement_id.clone()));
    }
    Ok(())
}

/// Per-probe coin for candidate order, derived from the run seed and the
/// statement id so it does not depend on processing order.
fn order_coin(seed: u64, statement_id: &str) -> bool {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update(statement_id.as_bytes());
    let digest = h.finalize();
    let mut bytes = [0u8; 8];
    bytes.copy_from_slice(&digest[..8]);
    ChaCha8Rng::seed_from_u64(u64::from_le_bytes(bytes)).gen_bool(0.5)
}

/// Masks the conclusion comparator. Candidates are the two members of its
/// pair in seeded random order.
pub fn to_mwp(s: &Statement, mask: &str, seed: u64) -> Result<MwpProbe, ProbeError> {
    check_span(s)?;
    let (lead, trail) = s.comparator.pair().members();
    let candidates = if order_coin(seed, &s.statement_id) {
        [trail, lead]
    } else {
        [lead, trail]
    };
    let gold_index = candidates.iter().position(|c| *c == s.comparator).expect("gold is in its own pair");
    Ok(MwpProbe {
        probe_id: format!("mwp-{}", s.statement_id),
        statement_id: s.statement_id.clone(),
        axiom_id: s.axiom_id.clone(),
        tag: s.tag,
        template_id: s.template_id,
        masked_text: s.full_text_with(mask),
        candidates,
        gold_index,
    })
}

/// Pairs the statement with its comparator-flipped twin.
pub fn to_sp(s: &Statement) -> Result<SpProbe, ProbeError> {
    check_span(s)?;
    Ok(SpProbe {
        probe_id: format!("sp-{}", s.statement_id),
        statement_id: s.statement_id.clone(),
        axiom_id: s.axiom_id.clone(),
        tag: s.tag,
        template_id: s.template_id,
        sentence_correct: s.full_text(),
        sentence_incorrect: s.full_text_with(s.comparator.flip().word()),
        comparator: s.comparator,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fol::{parse_axiom, TypeConstraint, TypedAxiom};
    use crate::surface::{AxiomSurface, EntityMode, TemplateBank};

    fn statements() -> Vec<Statement> {
        let t = TypedAxiom::new(
            parse_axiom("More(Prop(A,concentrate),Prop(B,concentrate)) -> More(Prop(A,productive),Prop(B,productive))")
                .unwrap(),
            TypeConstraint::ActionComparison,
        )
        .unwrap();
        let s = AxiomSurface::new(t, None, &TemplateBank::builtin()).unwrap();
        s.variants()
            .unwrap()
            .iter()
            .map(|v| s.render(v, &["A".into(), "B".into()], EntityMode::Novel).unwrap())
            .collect()
    }

    #[test]
    fn mask_lands_in_conclusion_only() {
        for s in statements() {
            let p = to_mwp(&s, DEFAULT_MASK, 1).unwrap();
            assert_eq!(p.masked_text.matches(DEFAULT_MASK).count(), 1);
            let (premise, conclusion) = p.masked_text.split_once(", so ").unwrap();
            assert!(premise.contains("more"), "premise comparator kept: {premise}");
            assert!(conclusion.contains(DEFAULT_MASK));
            assert_eq!(p.gold(), s.comparator);
        }
    }

    #[test]
    fn sp_pair_differs_in_one_token() {
        for s in statements() {
            let p = to_sp(&s).unwrap();
            let a: Vec<_> = p.sentence_correct.split(' ').collect();
            let b: Vec<_> = p.sentence_incorrect.split(' ').collect();
            assert_eq!(a.len(), b.len());
            assert_eq!(a.iter().zip(&b).filter(|(x, y)| x != y).count(), 1);
        }
    }

    #[test]
    fn candidate_order_varies_but_is_seeded() {
        let ss = statements();
        let firsts: Vec<_> = ss.iter().map(|s| to_mwp(s, "<m>", 5).unwrap().gold_index).collect();
        let again: Vec<_> = ss.iter().map(|s| to_mwp(s, "<m>", 5).unwrap().gold_index).collect();
        assert_eq!(firsts, again);
        assert!(firsts.contains(&0) && firsts.contains(&1));
    }

    #[test]
    fn broken_span_is_no_comparator() {
        let mut s = statements().remove(0);
        s.comparator_span = (0, 1);
        assert!(matches!(to_mwp(&s, DEFAULT_MASK, 0), Err(ProbeError::NoComparator(_))));
    }

    #[test]
    fn probes_parse_back_as_the_right_kind() {
        let s = &statements()[0];
        let m = serde_json::to_string(&to_mwp(s, DEFAULT_MASK, 0).unwrap()).unwrap();
        let p = serde_json::to_string(&to_sp(s).unwrap()).unwrap();
        assert_eq!(serde_json::from_str::<Probe>(&m).unwrap().task(), Task::Mwp);
        assert_eq!(serde_json::from_str::<Probe>(&p).unwrap().task(), Task::Sp);
    }
}
