//! Meaning-preserving rewrites of an axiom's conclusion and the polarity
//! bookkeeping that keeps every variant true.

mod lexicon;
mod ops;

use thiserror::Error;

use crate::fol::Comparator;

pub use lexicon::{ConclusionLexicon, LexiconRecord, Phrase, PhraseRole, PhraseSpec, COMP_SLOT};
pub use ops::{
    apply_asymmetry, apply_linguistic, apply_tag, expand_statement_set, resolve_comparator, site_is_ordered,
    Asymmetry, EntityOrder, LinguisticOp, PerturbationTag, PerturbedAxiom, Site, SYMMETRIC_RELATIONS,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PerturbError {
    #[error("lexicon has no {role} phrase required by `{op}`")]
    LexiconGap { op: LinguisticOp, role: PhraseRole },
    #[error("the {site:?} has no order-sensitive predicate")]
    SymmetricSite { site: Site },
    #[error("only one site may be swapped at a time")]
    CompoundAsymmetry,
    #[error("{role} phrase uses a comparator pair incompatible with `{comparator}`")]
    PairMismatch { role: PhraseRole, comparator: Comparator },
    #[error("bad {role} phrase: {message}")]
    Phrase { role: PhraseRole, message: String },
}
