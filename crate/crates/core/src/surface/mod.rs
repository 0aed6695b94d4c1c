//! Novel entities and deterministic rendering of axiom variants into
//! premise/conclusion statements.

mod bank;
mod entities;
mod render;

use thiserror::Error;

use crate::fol::TypeConstraint;
use crate::perturb::PerturbError;

pub use bank::{SurfaceTemplate, TemplateBank};
pub use entities::{
    gen_entity_assignment, gen_novel_entity, real_names, EntityGenerator, EntityMode, Vocabulary,
    MAX_ENTITY_LEN, MAX_REJECTIONS, MIN_ENTITY_LEN,
};
pub use render::{AxiomSurface, FactMode, Statement, StatementProvider, TemplateRenderer, SO};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurfaceError {
    #[error("no surface template for `{0}`")]
    NoTemplate(TypeConstraint),
    #[error("no fact template for `{0}`")]
    NoFactTemplate(TypeConstraint),
    #[error("no fresh entity after {0} attempts")]
    ExhaustedRetries(usize),
    #[error("the two entities of a statement must differ")]
    SameEntities,
    #[error("variant belongs to a different axiom")]
    ForeignVariant,
    #[error("conclusion phrase lost its comparator slot")]
    MissingSlot,
    #[error("invalid template bank: {0}")]
    Bank(String),
    #[error(transparent)]
    Perturb(#[from] PerturbError),
}
