use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::comparator::Comparator;
use super::parser::parse_formula;
use super::syntax::{argument_is_printable, canonical_argument, EntityVar, Formula, Literal, Predicate};
use super::template::{Hole, TemplateId, TypeConstraint};
use super::{FolError, Violation};

pub type Bindings = BTreeMap<Hole, String>;

/// Content-derived axiom identifier (`ax-` followed by 16 hex digits of the
/// SHA-256 of the canonical text).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AxiomId(pub String);

impl AxiomId {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for AxiomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for AxiomId {
    fn from(s: &str) -> Self {
        AxiomId(s.to_string())
    }
}

/// A logical template with every non-entity hole filled in. Entities A and B
/// stay as placeholders.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Axiom {
    template: TemplateId,
    bindings: Bindings,
    comparator: Comparator,
}

impl Axiom {
    pub fn template(&self) -> TemplateId {
        self.template
    }

    pub fn bindings(&self) -> &Bindings {
        &self.bindings
    }

    /// Panics if `hole` is not part of this axiom's template.
    pub fn binding(&self, hole: Hole) -> &str {
        self.bindings
            .get(&hole)
            .unwrap_or_else(|| panic!("{} has no `{hole}` hole", self.template))
    }

    /// Base comparator of the conclusion (before/after for LT5).
    pub fn comparator(&self) -> Comparator {
        self.comparator
    }

    pub fn premise_comparator(&self) -> Option<Comparator> {
        self.bindings
            .get(&Hole::PremiseComparator)
            .and_then(|w| Comparator::from_word(w))
    }

    pub fn id(&self) -> AxiomId {
        let digest = Sha256::digest(self.to_string().as_bytes());
        AxiomId(format!("ax-{}", hex::encode(&digest[..8])))
    }

    /// Rebuilds the formula this axiom stands for.
    pub fn formula(&self) -> Formula {
        use EntityVar::{A, B};
        let b = |h: Hole| self.binding(h).to_string();
        let q = b(Hole::Property);
        let premises = match self.template {
            TemplateId::Lt1 => vec![
                Literal::pos(Predicate::prop(A, b(Hole::PropA))),
                Literal::pos(Predicate::prop(B, b(Hole::PropB))),
            ],
            TemplateId::Lt2 => vec![Literal::pos(Predicate::rel(A, B, b(Hole::Relation)))],
            TemplateId::Lt3 => vec![
                Literal::pos(Predicate::prop(A, b(Hole::Premise))),
                Literal::neg(Predicate::prop(B, b(Hole::Premise))),
            ],
            TemplateId::Lt4 => vec![Literal::pos(Predicate::comp(
                self.premise_comparator().expect("validated premise comparator"),
                Predicate::prop(A, b(Hole::Premise)),
                Predicate::prop(B, b(Hole::Premise)),
            ))],
            TemplateId::Lt5 => vec![Literal::pos(Predicate::prop(A, b(Hole::Premise)))],
        };
        let conclusion = if self.template.is_temporal() {
            Predicate::temporal(self.comparator, Predicate::prop(A, q))
        } else {
            Predicate::comp(
                self.comparator,
                Predicate::prop(A, q.clone()),
                Predicate::prop(B, q),
            )
        };
        Formula {
            premises,
            conclusion,
        }
    }

    /// Recognises which template a formula instantiates.
    pub fn from_formula(formula: &Formula) -> Result<Axiom, FolError> {
        let violations = structural_violations(formula);
        if !violations.is_empty() {
            return Err(FolError::Validation(violations));
        }
        let (template, bindings, comparator) =
            recognise(formula).ok_or(FolError::Validation(vec![Violation::UnrecognizedShape]))?;
        let axiom = Axiom {
            template,
            bindings,
            comparator,
        };
        let violations = binding_violations(&axiom);
        if violations.is_empty() {
            Ok(axiom)
        } else {
            Err(FolError::Validation(violations))
        }
    }

    /// Human-oriented rendering in the style `Material(A, glass) and
    /// Material(B, wood), so More(clear(A), clear(B))`.
    pub fn readable(&self, constraint: TypeConstraint) -> String {
        let b = |h: Hole| self.binding(h);
        let pair = |c: Comparator, p: &str, second: Option<&str>| match second {
            Some(_) => format!("{}({p}(A), {p}(B))", c.keyword()),
            None => format!("{}({p}(A))", c.keyword()),
        };
        let premise = match self.template {
            TemplateId::Lt1 => {
                let label = constraint.premise_label().unwrap_or("Prop");
                format!("{label}(A, {}) and {label}(B, {})", b(Hole::PropA), b(Hole::PropB))
            }
            TemplateId::Lt2 => format!("{}(A, B)", b(Hole::Relation)),
            TemplateId::Lt3 => format!("{p}(A) and not {p}(B)", p = b(Hole::Premise)),
            TemplateId::Lt4 => pair(
                self.premise_comparator().expect("validated premise comparator"),
                b(Hole::Premise),
                Some("B"),
            ),
            TemplateId::Lt5 => format!("{}(A)", b(Hole::Premise)),
        };
        let second = (!self.template.is_temporal()).then_some("B");
        format!(
            "{premise}, so {}",
            pair(self.comparator, b(Hole::Property), second)
        )
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.formula().fmt(f)
    }
}

/// Fills a template's holes and validates the result.
pub fn instantiate_template<K, V>(
    template: TemplateId,
    bindings: impl IntoIterator<Item = (K, V)>,
    comparator: Comparator,
) -> Result<Axiom, FolError>
where
    K: Into<Hole>,
    V: AsRef<str>,
{
    let mut map = Bindings::new();
    for (k, v) in bindings {
        let hole = k.into();
        if !template.holes().contains(&hole) {
            return Err(FolError::Arity(format!(
                "{template} has no `{hole}` hole"
            )));
        }
        let value = if hole == Hole::PremiseComparator {
            match Comparator::from_word(v.as_ref().trim()) {
                Some(c) if !c.is_temporal() => c.word().to_string(),
                _ => {
                    return Err(FolError::Arity(format!(
                        "`{}` is not a comparative word",
                        v.as_ref()
                    )))
                }
            }
        } else {
            canonical_argument(v.as_ref())
        };
        map.insert(hole, value);
    }
    if let Some(&missing) = template.holes().iter().find(|h| !map.contains_key(h)) {
        return Err(FolError::MissingBinding(missing));
    }
    if comparator.is_temporal() != template.is_temporal() {
        return Err(FolError::ComparatorMismatch {
            template,
            comparator,
        });
    }
    let axiom = Axiom {
        template,
        bindings: map,
        comparator,
    };
    let violations = binding_violations(&axiom);
    if violations.is_empty() {
        Ok(axiom)
    } else {
        Err(FolError::Validation(violations))
    }
}

pub fn parse_axiom(text: &str) -> Result<Axiom, FolError> {
    Axiom::from_formula(&parse_formula(text)?)
}

pub fn print_axiom(axiom: &Axiom) -> String {
    axiom.to_string()
}

/// Every violation found in a formula, including failure to match any of
/// the five template shapes. An empty list means the formula is a valid
/// axiom.
pub fn validate(formula: &Formula) -> Vec<Violation> {
    match Axiom::from_formula(formula) {
        Ok(_) => Vec::new(),
        Err(FolError::Validation(v)) => v,
        Err(other) => vec![Violation::Other(other.to_string())],
    }
}

pub fn validate_axiom(axiom: &Axiom) -> Vec<Violation> {
    validate(&axiom.formula())
}

fn structural_violations(formula: &Formula) -> Vec<Violation> {
    let mut out = Vec::new();
    for lit in &formula.premises {
        check_predicate(&lit.predicate, &mut out);
        if lit.negated && !matches!(lit.predicate, Predicate::Prop { .. }) {
            out.push(Violation::NegatedNonProp {
                predicate: lit.predicate.name().to_string(),
            });
        }
        if matches!(lit.predicate, Predicate::Temporal { .. }) {
            out.push(Violation::TemporalPremise);
        }
    }
    check_predicate(&formula.conclusion, &mut out);
    if matches!(
        formula.conclusion,
        Predicate::Prop { .. } | Predicate::Rel { .. }
    ) {
        out.push(Violation::ConclusionNotComparison);
    }
    out
}

fn check_argument(value: &str, out: &mut Vec<Violation>) {
    if !argument_is_printable(value) {
        out.push(Violation::InvalidArgument {
            value: value.to_string(),
        });
    } else if value
        .split(|c: char| !c.is_alphanumeric())
        .any(|tok| EntityVar::parse(tok).is_some())
    {
        out.push(Violation::PlaceholderInArgument {
            value: value.to_string(),
        });
    }
}

fn check_predicate(p: &Predicate, out: &mut Vec<Violation>) {
    match p {
        Predicate::Prop { property, .. } => check_argument(property, out),
        Predicate::Rel {
            subject,
            object,
            relation,
        } => {
            if subject == object {
                out.push(Violation::SameEntity {
                    relation: relation.clone(),
                });
            }
            check_argument(relation, out);
        }
        Predicate::Comp {
            comparator,
            left,
            right,
        } => {
            if comparator.is_temporal() {
                out.push(Violation::ComparatorMisuse {
                    comparator: *comparator,
                });
            }
            for side in [left, right] {
                if !matches!(**side, Predicate::Prop { .. }) {
                    out.push(Violation::CompOverNonProp {
                        found: side.name().to_string(),
                    });
                }
                check_predicate(side, out);
            }
            if let (
                Predicate::Prop {
                    entity: ea,
                    property: pa,
                },
                Predicate::Prop {
                    entity: eb,
                    property: pb,
                },
            ) = (&**left, &**right)
            {
                if ea == eb || pa != pb {
                    out.push(Violation::UnbalancedComparison);
                }
            }
        }
        Predicate::Temporal { marker, inner } => {
            if !marker.is_temporal() {
                out.push(Violation::ComparatorMisuse { comparator: *marker });
            }
            if !matches!(**inner, Predicate::Prop { .. }) {
                out.push(Violation::CompOverNonProp {
                    found: inner.name().to_string(),
                });
            }
            check_predicate(inner, out);
        }
    }
}

fn binding_violations(axiom: &Axiom) -> Vec<Violation> {
    let mut out = Vec::new();
    for (hole, value) in &axiom.bindings {
        if *hole != Hole::PremiseComparator {
            check_argument(value, &mut out);
        }
    }
    if axiom.template == TemplateId::Lt1
        && axiom.bindings.get(&Hole::PropA) == axiom.bindings.get(&Hole::PropB)
    {
        out.push(Violation::IdenticalContrast);
    }
    out
}

fn prop_of(p: &Predicate, who: EntityVar) -> Option<&str> {
    match p {
        Predicate::Prop { entity, property } if *entity == who => Some(property),
        _ => None,
    }
}

fn recognise(f: &Formula) -> Option<(TemplateId, Bindings, Comparator)> {
    use EntityVar::{A, B};
    let mut bindings = Bindings::new();

    let (comparator, property, temporal) = match &f.conclusion {
        Predicate::Comp {
            comparator,
            left,
            right,
        } => {
            let q = prop_of(left, A)?;
            (prop_of(right, B) == Some(q)).then_some(())?;
            (*comparator, q, false)
        }
        Predicate::Temporal { marker, inner } => (*marker, prop_of(inner, A)?, true),
        _ => return None,
    };
    bindings.insert(Hole::Property, property.to_string());

    let template = match f.premises.as_slice() {
        [x] if temporal && !x.negated => {
            bindings.insert(Hole::Premise, prop_of(&x.predicate, A)?.to_string());
            TemplateId::Lt5
        }
        _ if temporal => return None,
        [x, y] if !x.negated && !y.negated => {
            bindings.insert(Hole::PropA, prop_of(&x.predicate, A)?.to_string());
            bindings.insert(Hole::PropB, prop_of(&y.predicate, B)?.to_string());
            TemplateId::Lt1
        }
        [x, y] if !x.negated && y.negated => {
            let p = prop_of(&x.predicate, A)?;
            (prop_of(&y.predicate, B)? == p).then_some(())?;
            bindings.insert(Hole::Premise, p.to_string());
            TemplateId::Lt3
        }
        [x] if !x.negated => match &x.predicate {
            Predicate::Rel {
                subject: A,
                object: B,
                relation,
            } => {
                bindings.insert(Hole::Relation, relation.clone());
                TemplateId::Lt2
            }
            Predicate::Comp {
                comparator,
                left,
                right,
            } => {
                let p = prop_of(left, A)?;
                (prop_of(right, B)? == p).then_some(())?;
                bindings.insert(Hole::Premise, p.to_string());
                bindings.insert(Hole::PremiseComparator, comparator.word().to_string());
                TemplateId::Lt4
            }
            _ => return None,
        },
        _ => return None,
    };
    Some((template, bindings, comparator))
}

/// JSONL wire form of an axiom together with the type constraint it was
/// crawled under.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomRecord {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub axiom_id: Option<AxiomId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub template_id: Option<TemplateId>,
    pub type_constraint: TypeConstraint,
    #[serde(default)]
    pub bindings: Bindings,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comparator: Option<Comparator>,
    pub fol_text: String,
}

/// An axiom paired with the type constraint that selects its surface
/// templates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TypedAxiom {
    pub axiom: Axiom,
    pub constraint: TypeConstraint,
}

impl TypedAxiom {
    pub fn new(axiom: Axiom, constraint: TypeConstraint) -> Result<TypedAxiom, FolError> {
        if constraint.template() != axiom.template() {
            return Err(FolError::ConstraintMismatch {
                constraint,
                template: axiom.template(),
            });
        }
        Ok(TypedAxiom { axiom, constraint })
    }

    pub fn id(&self) -> AxiomId {
        self.axiom.id()
    }

    pub fn to_record(&self) -> AxiomRecord {
        AxiomRecord {
            axiom_id: Some(self.axiom.id()),
            template_id: Some(self.axiom.template()),
            type_constraint: self.constraint,
            bindings: self.axiom.bindings().clone(),
            comparator: Some(self.axiom.comparator()),
            fol_text: self.axiom.to_string(),
        }
    }
}

impl TryFrom<AxiomRecord> for TypedAxiom {
    type Error = FolError;

    /// `fol_text` is authoritative; any other populated field must agree
    /// with it.
    fn try_from(rec: AxiomRecord) -> Result<Self, Self::Error> {
        let axiom = parse_axiom(&rec.fol_text)?;
        let inconsistent = |field: &str| FolError::Inconsistent(field.to_string());
        if rec.axiom_id.as_ref().is_some_and(|id| *id != axiom.id()) {
            return Err(inconsistent("axiom_id"));
        }
        if rec.template_id.is_some_and(|t| t != axiom.template()) {
            return Err(inconsistent("template_id"));
        }
        if rec.comparator.is_some_and(|c| c != axiom.comparator()) {
            return Err(inconsistent("comparator"));
        }
        if !rec.bindings.is_empty() && rec.bindings != *axiom.bindings() {
            return Err(inconsistent("bindings"));
        }
        TypedAxiom::new(axiom, rec.type_constraint)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lawyer() -> Axiom {
        instantiate_template(
            TemplateId::Lt2,
            [(Hole::Relation, "lawyer"), (Hole::Property, "know_law")],
            Comparator::More,
        )
        .unwrap()
    }

    #[test]
    fn instantiates_the_lawyer_axiom() {
        assert_eq!(
            print_axiom(&lawyer()),
            "Rel(A,B,lawyer) -> More(Prop(A,know_law),Prop(B,know_law))"
        );
    }

    #[test]
    fn instantiates_the_material_axiom() {
        let a = instantiate_template(
            TemplateId::Lt1,
            [
                (Hole::PropA, "glass"),
                (Hole::PropB, "wood"),
                (Hole::Property, "clear"),
            ],
            Comparator::More,
        )
        .unwrap();
        assert_eq!(
            a.to_string(),
            "Prop(A,glass) & Prop(B,wood) -> More(Prop(A,clear),Prop(B,clear))"
        );
        assert_eq!(
            a.readable(TypeConstraint::AttributeMaterial),
            "Material(A, glass) and Material(B, wood), so More(clear(A), clear(B))"
        );
    }

    #[test]
    fn missing_binding() {
        let err = instantiate_template(TemplateId::Lt2, [(Hole::Relation, "lawyer")], Comparator::More)
            .unwrap_err();
        assert_eq!(err, FolError::MissingBinding(Hole::Property));
    }

    #[test]
    fn binding_shape_mismatch() {
        let err = instantiate_template(
            TemplateId::Lt2,
            [
                (Hole::Relation, "lawyer"),
                (Hole::Property, "know_law"),
                (Hole::PropA, "glass"),
            ],
            Comparator::More,
        )
        .unwrap_err();
        assert!(matches!(err, FolError::Arity(_)));
        let err = instantiate_template(
            TemplateId::Lt4,
            [
                (Hole::Premise, "wide"),
                (Hole::PremiseComparator, "before"),
                (Hole::Property, "slip"),
            ],
            Comparator::More,
        )
        .unwrap_err();
        assert!(matches!(err, FolError::Arity(_)));
    }

    #[test]
    fn comparator_must_match_template_kind() {
        let err = instantiate_template(
            TemplateId::Lt5,
            [(Hole::Premise, "entered the building"), (Hole::Property, "outside")],
            Comparator::More,
        )
        .unwrap_err();
        assert!(matches!(err, FolError::ComparatorMismatch { .. }));
    }

    #[test]
    fn parse_recognises_every_shape() {
        let cases = [
            ("Prop(A,glass) & Prop(B,wood) -> More(Prop(A,clear),Prop(B,clear))", TemplateId::Lt1),
            ("Rel(A,B,lawyer) -> More(Prop(A,know_law),Prop(B,know_law))", TemplateId::Lt2),
            ("Prop(A,tie knot) & !Prop(B,tie knot) -> More(Prop(A,elastic),Prop(B,elastic))", TemplateId::Lt3),
            ("More(Prop(A,square),Prop(B,square)) -> Better(Prop(A,divide two space),Prop(B,divide two space))", TemplateId::Lt4),
            ("Prop(A,entered the building) -> before(Prop(A,outside))", TemplateId::Lt5),
        ];
        for (text, t) in cases {
            let a = parse_axiom(text).unwrap();
            assert_eq!(a.template(), t);
            assert_eq!(a.to_string(), text);
        }
    }

    #[test]
    fn validation_reports_same_entity() {
        let f = parse_formula("Rel(A,A,lawyer) -> More(Prop(A,know_law),Prop(B,know_law))").unwrap();
        let v = validate(&f);
        assert!(v.contains(&Violation::SameEntity {
            relation: "lawyer".into()
        }));
        assert!(matches!(
            parse_axiom("Rel(A,A,lawyer) -> More(Prop(A,know_law),Prop(B,know_law))"),
            Err(FolError::Validation(_))
        ));
    }

    #[test]
    fn validation_rejects_comp_over_rel() {
        let f = parse_formula("Prop(A,x) -> More(Rel(A,B,boss),Prop(B,q))").unwrap();
        assert!(validate(&f)
            .iter()
            .any(|v| matches!(v, Violation::CompOverNonProp { .. })));
    }

    #[test]
    fn lawyer_axiom_is_valid() {
        assert!(validate_axiom(&lawyer()).is_empty());
    }

    #[test]
    fn placeholder_strings_are_rejected_in_arguments() {
        let err = instantiate_template(
            TemplateId::Lt2,
            [(Hole::Relation, "B"), (Hole::Property, "know law")],
            Comparator::More,
        )
        .unwrap_err();
        assert!(matches!(
            err,
            FolError::Validation(ref v) if matches!(v[0], Violation::PlaceholderInArgument { .. })
        ));
    }

    #[test]
    fn identical_contrast_is_rejected() {
        let err = instantiate_template(
            TemplateId::Lt1,
            [(Hole::PropA, "glass"), (Hole::PropB, "glass"), (Hole::Property, "clear")],
            Comparator::More,
        )
        .unwrap_err();
        assert_eq!(err, FolError::Validation(vec![Violation::IdenticalContrast]));
    }

    #[test]
    fn binding_order_does_not_affect_output() {
        let a = instantiate_template(
            TemplateId::Lt1,
            [(Hole::Property, "clear"), (Hole::PropB, "wood"), (Hole::PropA, "glass")],
            Comparator::More,
        )
        .unwrap();
        let b = instantiate_template(
            TemplateId::Lt1,
            [(Hole::PropA, "glass"), (Hole::PropB, "wood"), (Hole::Property, "clear")],
            Comparator::More,
        )
        .unwrap();
        assert_eq!(a.to_string(), b.to_string());
        assert_eq!(a.id(), b.id());
    }

    #[test]
    fn record_round_trip_and_consistency() {
        let typed = TypedAxiom::new(lawyer(), TypeConstraint::Role).unwrap();
        let rec = typed.to_record();
        let json = serde_json::to_string(&rec).unwrap();
        let back: AxiomRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(TypedAxiom::try_from(back).unwrap(), typed);

        let mut tampered = rec.clone();
        tampered.comparator = Some(Comparator::Less);
        assert_eq!(
            TypedAxiom::try_from(tampered),
            Err(FolError::Inconsistent("comparator".into()))
        );
        assert!(TypedAxiom::new(lawyer(), TypeConstraint::AttributeGrade).is_err());
    }
}
