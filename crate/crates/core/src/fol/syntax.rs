//! Formula AST and its canonical printer.
//!
//! The AST is deliberately more permissive than the set of well-formed
//! axioms (it can express `Rel(A,A,r)` or a comparison over relations) so
//! that validation can report those cases as data.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::comparator::Comparator;

/// One of the two entity placeholders.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EntityVar {
    A,
    B,
}

impl EntityVar {
    pub fn other(self) -> EntityVar {
        match self {
            EntityVar::A => EntityVar::B,
            EntityVar::B => EntityVar::A,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            EntityVar::A => "A",
            EntityVar::B => "B",
        }
    }

    pub fn parse(s: &str) -> Option<EntityVar> {
        match s {
            "A" => Some(EntityVar::A),
            "B" => Some(EntityVar::B),
            _ => None,
        }
    }
}

impl fmt::Display for EntityVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Predicate {
    Prop {
        entity: EntityVar,
        property: String,
    },
    Rel {
        subject: EntityVar,
        object: EntityVar,
        relation: String,
    },
    Comp {
        comparator: Comparator,
        left: Box<Predicate>,
        right: Box<Predicate>,
    },
    Temporal {
        marker: Comparator,
        inner: Box<Predicate>,
    },
}

impl Predicate {
    pub fn prop(entity: EntityVar, property: impl Into<String>) -> Predicate {
        Predicate::Prop {
            entity,
            property: property.into(),
        }
    }

    pub fn rel(subject: EntityVar, object: EntityVar, relation: impl Into<String>) -> Predicate {
        Predicate::Rel {
            subject,
            object,
            relation: relation.into(),
        }
    }

    pub fn comp(comparator: Comparator, left: Predicate, right: Predicate) -> Predicate {
        Predicate::Comp {
            comparator,
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    pub fn temporal(marker: Comparator, inner: Predicate) -> Predicate {
        Predicate::Temporal {
            marker,
            inner: Box::new(inner),
        }
    }

    /// Name as it appears in the textual syntax.
    pub fn name(&self) -> &'static str {
        match self {
            Predicate::Prop { .. } => "Prop",
            Predicate::Rel { .. } => "Rel",
            Predicate::Comp { comparator, .. } => comparator.keyword(),
            Predicate::Temporal { marker, .. } => marker.keyword(),
        }
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Predicate::Prop { entity, property } => write!(f, "Prop({entity},{property})"),
            Predicate::Rel {
                subject,
                object,
                relation,
            } => write!(f, "Rel({subject},{object},{relation})"),
            Predicate::Comp {
                comparator,
                left,
                right,
            } => write!(f, "{}({left},{right})", comparator.keyword()),
            Predicate::Temporal { marker, inner } => write!(f, "{}({inner})", marker.keyword()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Literal {
    pub negated: bool,
    pub predicate: Predicate,
}

impl Literal {
    pub fn pos(predicate: Predicate) -> Literal {
        Literal {
            negated: false,
            predicate,
        }
    }

    pub fn neg(predicate: Predicate) -> Literal {
        Literal {
            negated: true,
            predicate,
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            f.write_str("!")?;
        }
        self.predicate.fmt(f)
    }
}

/// A conjunction of premise literals implying a single conclusion.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Formula {
    pub premises: Vec<Literal>,
    pub conclusion: Predicate,
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.premises.iter().enumerate() {
            if i > 0 {
                f.write_str(" & ")?;
            }
            p.fmt(f)?;
        }
        write!(f, " -> {}", self.conclusion)
    }
}

/// Canonical form of a free-text argument: trimmed, inner whitespace runs
/// collapsed to one space.
pub fn canonical_argument(raw: &str) -> String {
    raw.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Characters that would make an argument unparseable.
pub(crate) const RESERVED_ARGUMENT_CHARS: [char; 3] = ['(', ')', ','];

pub(crate) fn argument_is_printable(arg: &str) -> bool {
    !arg.is_empty()
        && !arg.contains(RESERVED_ARGUMENT_CHARS)
        && !arg.contains(['\n', '\r'])
        && arg == canonical_argument(arg)
}
