use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// The five logical template shapes.
///
/// * `Lt1`: `Prop(A,p1) & Prop(B,p2) -> Comp(Prop(A,q),Prop(B,q))`
/// * `Lt2`: `Rel(A,B,r) -> Comp(Prop(A,q),Prop(B,q))`
/// * `Lt3`: `Prop(A,p) & !Prop(B,p) -> Comp(Prop(A,q),Prop(B,q))`
/// * `Lt4`: `Comp'(Prop(A,p),Prop(B,p)) -> Comp(Prop(A,q),Prop(B,q))`
/// * `Lt5`: `Prop(A,p) -> before|after(Prop(A,q))`
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum TemplateId {
    Lt1,
    Lt2,
    Lt3,
    Lt4,
    Lt5,
}

impl TemplateId {
    pub const ALL: [TemplateId; 5] = [
        TemplateId::Lt1,
        TemplateId::Lt2,
        TemplateId::Lt3,
        TemplateId::Lt4,
        TemplateId::Lt5,
    ];

    pub fn number(self) -> u8 {
        match self {
            TemplateId::Lt1 => 1,
            TemplateId::Lt2 => 2,
            TemplateId::Lt3 => 3,
            TemplateId::Lt4 => 4,
            TemplateId::Lt5 => 5,
        }
    }

    /// Argument holes a binding map must cover.
    pub fn holes(self) -> &'static [Hole] {
        match self {
            TemplateId::Lt1 => &[Hole::PropA, Hole::PropB, Hole::Property],
            TemplateId::Lt2 => &[Hole::Relation, Hole::Property],
            TemplateId::Lt3 => &[Hole::Premise, Hole::Property],
            TemplateId::Lt4 => &[Hole::Premise, Hole::PremiseComparator, Hole::Property],
            TemplateId::Lt5 => &[Hole::Premise, Hole::Property],
        }
    }

    /// Whether the conclusion is the single-entity temporal form.
    pub fn is_temporal(self) -> bool {
        self == TemplateId::Lt5
    }
}

impl From<TemplateId> for u8 {
    fn from(t: TemplateId) -> u8 {
        t.number()
    }
}

impl TryFrom<u8> for TemplateId {
    type Error = String;

    fn try_from(n: u8) -> Result<Self, Self::Error> {
        TemplateId::ALL
            .into_iter()
            .find(|t| t.number() == n)
            .ok_or_else(|| format!("template id must be 1..=5, got {n}"))
    }
}

impl fmt::Display for TemplateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LT{}", self.number())
    }
}

/// A non-entity argument slot of a template.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Hole {
    /// Premise property of entity A (LT1).
    PropA,
    /// Premise property of entity B (LT1).
    PropB,
    /// Shared premise property (LT3, LT4, LT5).
    Premise,
    /// Relation between A and B (LT2).
    Relation,
    /// Comparative word of the LT4 premise.
    PremiseComparator,
    /// Property compared in the conclusion.
    Property,
}

impl Hole {
    pub const ALL: [Hole; 6] = [
        Hole::PropA,
        Hole::PropB,
        Hole::Premise,
        Hole::Relation,
        Hole::PremiseComparator,
        Hole::Property,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Hole::PropA => "prop_a",
            Hole::PropB => "prop_b",
            Hole::Premise => "premise",
            Hole::Relation => "relation",
            Hole::PremiseComparator => "premise_comparator",
            Hole::Property => "property",
        }
    }
}

impl fmt::Display for Hole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Hole {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Hole::ALL
            .into_iter()
            .find(|h| h.name() == s)
            .ok_or_else(|| format!("unknown hole `{s}`"))
    }
}

/// Type constraints narrowing the generic predicates for knowledge crawling.
/// Each resolves to exactly one template.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TypeConstraint {
    AttributeMaterial,
    AttributeGrade,
    ConditionLocation,
    AttributeAnimal,
    Role,
    ActionRelation,
    ActionContrast,
    PhysicalContrast,
    ActionComparison,
    PhysicalComparison,
    AttributeTemporal,
}

impl TypeConstraint {
    /// In crawling-strategy order (strategy ids 1..=11).
    pub const ALL: [TypeConstraint; 11] = [
        TypeConstraint::AttributeMaterial,
        TypeConstraint::AttributeGrade,
        TypeConstraint::ConditionLocation,
        TypeConstraint::AttributeAnimal,
        TypeConstraint::Role,
        TypeConstraint::ActionRelation,
        TypeConstraint::ActionContrast,
        TypeConstraint::PhysicalContrast,
        TypeConstraint::ActionComparison,
        TypeConstraint::PhysicalComparison,
        TypeConstraint::AttributeTemporal,
    ];

    pub fn template(self) -> TemplateId {
        use TypeConstraint::*;
        match self {
            AttributeMaterial | AttributeGrade | ConditionLocation | AttributeAnimal => {
                TemplateId::Lt1
            }
            Role | ActionRelation => TemplateId::Lt2,
            ActionContrast | PhysicalContrast => TemplateId::Lt3,
            ActionComparison | PhysicalComparison => TemplateId::Lt4,
            AttributeTemporal => TemplateId::Lt5,
        }
    }

    pub fn strategy_id(self) -> u8 {
        TypeConstraint::ALL.iter().position(|&c| c == self).unwrap() as u8 + 1
    }

    pub fn from_strategy_id(id: u8) -> Option<TypeConstraint> {
        TypeConstraint::ALL.get(usize::from(id).checked_sub(1)?).copied()
    }

    pub fn name(self) -> &'static str {
        use TypeConstraint::*;
        match self {
            AttributeMaterial => "attribute_material",
            AttributeGrade => "attribute_grade",
            ConditionLocation => "condition_location",
            AttributeAnimal => "attribute_animal",
            Role => "role",
            ActionRelation => "action_relation",
            ActionContrast => "action_contrast",
            PhysicalContrast => "physical_contrast",
            ActionComparison => "action_comparison",
            PhysicalComparison => "physical_comparison",
            AttributeTemporal => "attribute_temporal",
        }
    }

    /// Predicate label used when an LT1 premise is printed for humans,
    /// e.g. `Material(A, glass)`.
    pub fn premise_label(self) -> Option<&'static str> {
        use TypeConstraint::*;
        match self {
            AttributeMaterial => Some("Material"),
            AttributeGrade => Some("Grade"),
            ConditionLocation => Some("Location"),
            AttributeAnimal => Some("Animal"),
            _ => None,
        }
    }
}

impl fmt::Display for TypeConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TypeConstraint {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TypeConstraint::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown type constraint `{s}`"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constraint_to_template_mapping() {
        let by_template = |t: TemplateId| {
            TypeConstraint::ALL
                .into_iter()
                .filter(|c| c.template() == t)
                .count()
        };
        assert_eq!(by_template(TemplateId::Lt1), 4);
        assert_eq!(by_template(TemplateId::Lt2), 2);
        assert_eq!(by_template(TemplateId::Lt3), 2);
        assert_eq!(by_template(TemplateId::Lt4), 2);
        assert_eq!(by_template(TemplateId::Lt5), 1);
    }

    #[test]
    fn strategy_ids_are_one_based_and_invertible() {
        for (i, c) in TypeConstraint::ALL.into_iter().enumerate() {
            assert_eq!(usize::from(c.strategy_id()), i + 1);
            assert_eq!(TypeConstraint::from_strategy_id(c.strategy_id()), Some(c));
            assert_eq!(c.name().parse::<TypeConstraint>(), Ok(c));
        }
        assert_eq!(TypeConstraint::from_strategy_id(0), None);
        assert_eq!(TypeConstraint::from_strategy_id(12), None);
    }

    #[test]
    fn template_id_serializes_as_number() {
        assert_eq!(serde_json::to_string(&TemplateId::Lt4).unwrap(), "4");
        assert_eq!(serde_json::from_str::<TemplateId>("2").unwrap(), TemplateId::Lt2);
        assert!(serde_json::from_str::<TemplateId>("6").is_err());
    }
}
