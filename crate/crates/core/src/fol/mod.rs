//! Logical intermediate representation: predicates, the five templates,
//! axioms, and the one-line textual syntax.

mod axiom;
mod comparator;
mod parser;
mod syntax;
mod template;

use std::fmt;

use thiserror::Error;

pub use axiom::{
    instantiate_template, parse_axiom, print_axiom, validate, validate_axiom, Axiom, AxiomId,
    AxiomRecord, Bindings, TypedAxiom,
};
pub use comparator::{Comparator, ComparatorPair, Polarity};
pub use parser::parse_formula;
pub use syntax::{canonical_argument, EntityVar, Formula, Literal, Predicate};
pub use template::{Hole, TemplateId, TypeConstraint};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FolError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("invalid axiom: {}", list(.0))]
    Validation(Vec<Violation>),
    #[error("missing binding for hole `{0}`")]
    MissingBinding(Hole),
    #[error("binding shape mismatch: {0}")]
    Arity(String),
    #[error("comparator `{comparator}` cannot conclude a {template} axiom")]
    ComparatorMismatch {
        template: TemplateId,
        comparator: Comparator,
    },
    #[error("type constraint `{constraint}` belongs to a different template than {template}")]
    ConstraintMismatch {
        constraint: TypeConstraint,
        template: TemplateId,
    },
    #[error("axiom record field `{0}` disagrees with fol_text")]
    Inconsistent(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Arity {
        predicate: String,
        expected: usize,
        found: usize,
    },
    UnknownPredicate { name: String, offset: usize },
    ExpectedEntity { found: String, offset: usize },
    ExpectedPredicate { found: String, offset: usize },
    ExpectedArgument { found: String, offset: usize },
    SameEntity { relation: String },
    CompOverNonProp { found: String },
    ComparatorMisuse { comparator: Comparator },
    UnbalancedComparison,
    NegatedNonProp { predicate: String },
    TemporalPremise,
    ConclusionNotComparison,
    InvalidArgument { value: String },
    PlaceholderInArgument { value: String },
    IdenticalContrast,
    UnrecognizedShape,
    Other(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Arity {
                predicate,
                expected,
                found,
            } => write!(f, "{predicate} takes {expected} arguments, got {found}"),
            Violation::UnknownPredicate { name, offset } => {
                write!(f, "unknown predicate `{name}` at byte {offset}")
            }
            Violation::ExpectedEntity { found, offset } => {
                write!(f, "expected entity A or B at byte {offset}, found `{found}`")
            }
            Violation::ExpectedPredicate { found, offset } => {
                write!(f, "expected a predicate at byte {offset}, found `{found}`")
            }
            Violation::ExpectedArgument { found, offset } => {
                write!(f, "expected a plain argument at byte {offset}, found `{found}(...)`")
            }
            Violation::SameEntity { relation } => {
                write!(f, "relation `{relation}` has identical subject and object")
            }
            Violation::CompOverNonProp { found } => {
                write!(f, "comparisons range over Prop terms only, found {found}")
            }
            Violation::ComparatorMisuse { comparator } => {
                write!(f, "`{comparator}` used in the wrong kind of conclusion")
            }
            Violation::UnbalancedComparison => {
                f.write_str("comparison must contrast the same property of A and B")
            }
            Violation::NegatedNonProp { predicate } => {
                write!(f, "only Prop premises may be negated, found !{predicate}")
            }
            Violation::TemporalPremise => f.write_str("temporal markers are conclusion-only"),
            Violation::ConclusionNotComparison => {
                f.write_str("conclusion must be a comparison or a temporal marker")
            }
            Violation::InvalidArgument { value } => write!(f, "invalid argument `{value}`"),
            Violation::PlaceholderInArgument { value } => {
                write!(f, "argument `{value}` contains an entity placeholder")
            }
            Violation::IdenticalContrast => {
                f.write_str("both premise arguments are identical, nothing distinguishes A from B")
            }
            Violation::UnrecognizedShape => f.write_str("formula matches none of the five templates"),
            Violation::Other(s) => f.write_str(s),
        }
    }
}

fn list(v: &[Violation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}
