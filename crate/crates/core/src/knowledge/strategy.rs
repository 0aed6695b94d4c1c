//! Declarative crawling strategies.
//!
//! A strategy is plain data: which seed list and edges to walk and how to
//! pair the results into template arguments. New strategies for other KB
//! schemas can be supplied as JSON without code changes, provided they use
//! one of the pairing rules below.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::edges::{EdgeStore, KbEdge};
use super::seeds::{ListKind, SeedList};
use super::table::{KnowledgeRow, KnowledgeTable, Provenance};
use super::{KnowledgeError, KnowledgeSources};
use crate::fol::{Bindings, Comparator, Hole, TemplateId, TypeConstraint};
use crate::text::verb_base_form;

/// How a derived property is phrased from an edge target, e.g.
/// `locate at the {target}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeFollow {
    pub relation: String,
    #[serde(default = "EdgeFollow::default_pattern")]
    pub pattern: String,
}

impl EdgeFollow {
    fn default_pattern() -> String {
        "{target}".into()
    }

    fn render(&self, target: &str) -> String {
        self.pattern.replace("{target}", target)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CrawlRule {
    /// seed --first--> property --second--> contrasting seed.
    SecondHop {
        seeds: ListKind,
        first: String,
        second: String,
    },
    /// Every ordered pair (earlier, later) of the seed list.
    OrderedPairs { seeds: ListKind, property: String },
    /// Pairs ordered by distance from the equator: A is the place with the
    /// smaller absolute latitude. Equal absolute latitudes are skipped.
    LatitudePairs { seeds: ListKind, property: String },
    /// A has a derived property, B is another seed lacking it.
    ContrastPairs {
        seeds: ListKind,
        follow: Vec<EdgeFollow>,
    },
    /// Each `seed --relation--> target` edge becomes a row with the seed
    /// and the target written into the named holes.
    SeedEdges {
        seeds: ListKind,
        relation: String,
        seed_hole: Hole,
        target_hole: Hole,
    },
    /// ATOMIC events along `relation`. Two-person events fill
    /// `relation`/`property`; single-person readings fill
    /// `premise`/`property`.
    AtomicEvents {
        relation: String,
        two_person: bool,
        #[serde(default)]
        base_form: bool,
    },
    /// Hand-written `(event, state, before|after)` triples.
    TemporalList { seeds: ListKind },
}

impl CrawlRule {
    pub fn seed_list(&self) -> Option<ListKind> {
        match self {
            CrawlRule::SecondHop { seeds, .. }
            | CrawlRule::OrderedPairs { seeds, .. }
            | CrawlRule::LatitudePairs { seeds, .. }
            | CrawlRule::ContrastPairs { seeds, .. }
            | CrawlRule::SeedEdges { seeds, .. }
            | CrawlRule::TemporalList { seeds } => Some(*seeds),
            CrawlRule::AtomicEvents { .. } => None,
        }
    }

    pub fn needs_conceptnet(&self) -> bool {
        matches!(
            self,
            CrawlRule::SecondHop { .. } | CrawlRule::ContrastPairs { .. } | CrawlRule::SeedEdges { .. }
        )
    }

    pub fn needs_atomic(&self) -> bool {
        matches!(self, CrawlRule::AtomicEvents { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrawlStrategy {
    pub strategy_id: u8,
    pub type_constraint: TypeConstraint,
    pub rule: CrawlRule,
    /// Conclusion comparator written into every row (temporal rows take
    /// their marker from the seed list instead).
    pub comparator: Comparator,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub premise_comparator: Option<Comparator>,
}

impl CrawlStrategy {
    pub fn template_id(&self) -> TemplateId {
        self.type_constraint.template()
    }
}

/// The eleven built-in strategies, one per type constraint.
pub fn default_strategies() -> Vec<CrawlStrategy> {
    use TypeConstraint::*;
    let s = |c: TypeConstraint, rule: CrawlRule, comparator: Comparator| CrawlStrategy {
        strategy_id: c.strategy_id(),
        type_constraint: c,
        rule,
        comparator,
        premise_comparator: None,
    };
    vec![
        s(
            AttributeMaterial,
            CrawlRule::SecondHop {
                seeds: ListKind::Materials,
                first: "HasProperty".into(),
                second: "NotMadeOf".into(),
            },
            Comparator::More,
        ),
        s(
            AttributeGrade,
            CrawlRule::OrderedPairs {
                seeds: ListKind::Grades,
                property: "young".into(),
            },
            Comparator::More,
        ),
        s(
            ConditionLocation,
            CrawlRule::LatitudePairs {
                seeds: ListKind::Locations,
                property: "living in hot condition".into(),
            },
            Comparator::More,
        ),
        s(
            AttributeAnimal,
            CrawlRule::ContrastPairs {
                seeds: ListKind::Animals,
                follow: vec![
                    EdgeFollow {
                        relation: "CapableOf".into(),
                        pattern: "{target}".into(),
                    },
                    EdgeFollow {
                        relation: "AtLocation".into(),
                        pattern: "locate at the {target}".into(),
                    },
                ],
            },
            Comparator::More,
        ),
        s(
            Role,
            CrawlRule::SeedEdges {
                seeds: ListKind::Occupations,
                relation: "CapableOf".into(),
                seed_hole: Hole::Relation,
                target_hole: Hole::Property,
            },
            Comparator::More,
        ),
        s(
            ActionRelation,
            CrawlRule::AtomicEvents {
                relation: "Attribute".into(),
                two_person: true,
                base_form: false,
            },
            Comparator::More,
        ),
        s(
            ActionContrast,
            CrawlRule::AtomicEvents {
                relation: "Attribute".into(),
                two_person: false,
                base_form: false,
            },
            Comparator::More,
        ),
        s(
            PhysicalContrast,
            CrawlRule::SeedEdges {
                seeds: ListKind::PhysicalAdjectives,
                relation: "UsedFor".into(),
                seed_hole: Hole::Property,
                target_hole: Hole::Premise,
            },
            Comparator::More,
        ),
        CrawlStrategy {
            premise_comparator: Some(Comparator::More),
            ..s(
                ActionComparison,
                CrawlRule::AtomicEvents {
                    relation: "Attribute".into(),
                    two_person: false,
                    base_form: true,
                },
                Comparator::More,
            )
        },
        CrawlStrategy {
            premise_comparator: Some(Comparator::More),
            ..s(
                PhysicalComparison,
                CrawlRule::SeedEdges {
                    seeds: ListKind::PhysicalAdjectives,
                    relation: "UsedFor".into(),
                    seed_hole: Hole::Premise,
                    target_hole: Hole::Property,
                },
                Comparator::Better,
            )
        },
        s(
            AttributeTemporal,
            CrawlRule::TemporalList {
                seeds: ListKind::TemporalEvents,
            },
            Comparator::Before,
        ),
    ]
}

struct RowSink<'a> {
    strategy: &'a CrawlStrategy,
    rows: Vec<KnowledgeRow>,
    seen: BTreeSet<(Bindings, Comparator)>,
}

impl<'a> RowSink<'a> {
    fn push(&mut self, pairs: &[(Hole, &str)], comparator: Comparator, provenance: Vec<Provenance>) {
        let mut bindings: Bindings = pairs.iter().map(|(h, v)| (*h, v.to_string())).collect();
        if let Some(pc) = self.strategy.premise_comparator {
            bindings.insert(Hole::PremiseComparator, pc.word().to_string());
        }
        if self.seen.insert((bindings.clone(), comparator)) {
            self.rows.push(KnowledgeRow {
                bindings,
                comparator,
                provenance,
            });
        }
    }
}

fn seed_prov(kind: ListKind, name: &str) -> Provenance {
    Provenance::Seed {
        list: kind,
        entry: name.to_string(),
    }
}

fn edge_prov(e: &KbEdge) -> Provenance {
    Provenance::Edge(e.clone())
}

fn require_list(sources: &KnowledgeSources, kind: ListKind) -> Result<&SeedList, KnowledgeError> {
    sources
        .lists
        .get(&kind)
        .ok_or_else(|| KnowledgeError::MissingSource(format!("seed list `{kind}`")))
}

fn require<'a>(store: &'a Option<EdgeStore>, name: &str) -> Result<&'a EdgeStore, KnowledgeError> {
    store
        .as_ref()
        .ok_or_else(|| KnowledgeError::MissingSource(name.to_string()))
}

/// Runs one strategy over loaded sources, producing a deduplicated table
/// in deterministic order.
pub fn run_strategy(
    strategy: &CrawlStrategy,
    sources: &KnowledgeSources,
) -> Result<KnowledgeTable, KnowledgeError> {
    let rule = &strategy.rule;
    let seeds = rule.seed_list().map(|k| require_list(sources, k)).transpose()?;
    let conceptnet = if rule.needs_conceptnet() {
        Some(require(&sources.conceptnet, "conceptnet")?)
    } else {
        None
    };
    let atomic = if rule.needs_atomic() {
        Some(require(&sources.atomic, "atomic")?)
    } else {
        None
    };

    let mut sink = RowSink {
        strategy,
        rows: Vec::new(),
        seen: BTreeSet::new(),
    };
    let cmp = strategy.comparator;

    match rule {
        CrawlRule::SecondHop { seeds: kind, first, second } => {
            let kb = conceptnet.unwrap();
            for seed in seeds.unwrap().names() {
                for e1 in kb.outgoing(seed, first) {
                    for e2 in kb.outgoing(&e1.target, second) {
                        if e2.target == seed {
                            continue;
                        }
                        sink.push(
                            &[
                                (Hole::PropA, seed),
                                (Hole::PropB, &e2.target),
                                (Hole::Property, &e1.target),
                            ],
                            cmp,
                            vec![seed_prov(*kind, seed), edge_prov(e1), edge_prov(e2)],
                        );
                    }
                }
            }
        }
        CrawlRule::OrderedPairs { seeds: kind, property } => {
            let names: Vec<&str> = seeds.unwrap().names().collect();
            for (i, a) in names.iter().enumerate() {
                for b in &names[i + 1..] {
                    sink.push(
                        &[(Hole::PropA, a), (Hole::PropB, b), (Hole::Property, property)],
                        cmp,
                        vec![seed_prov(*kind, a), seed_prov(*kind, b)],
                    );
                }
            }
        }
        CrawlRule::LatitudePairs { seeds: kind, property } => {
            let entries = &seeds.unwrap().entries;
            for a in entries {
                for b in entries {
                    let (Some(la), Some(lb)) = (a.latitude, b.latitude) else {
                        continue;
                    };
                    if la.abs() < lb.abs() {
                        sink.push(
                            &[
                                (Hole::PropA, &a.name),
                                (Hole::PropB, &b.name),
                                (Hole::Property, property),
                            ],
                            cmp,
                            vec![seed_prov(*kind, &a.name), seed_prov(*kind, &b.name)],
                        );
                    }
                }
            }
        }
        CrawlRule::ContrastPairs { seeds: kind, follow } => {
            let kb = conceptnet.unwrap();
            let names: Vec<&str> = seeds.unwrap().names().collect();
            let derived: Vec<Vec<(String, &KbEdge)>> = names
                .iter()
                .map(|n| {
                    follow
                        .iter()
                        .flat_map(|f| kb.outgoing(n, &f.relation).map(move |e| (f.render(&e.target), e)))
                        .collect()
                })
                .collect();
            for (i, a) in names.iter().enumerate() {
                for (property, edge) in &derived[i] {
                    for (j, b) in names.iter().enumerate() {
                        if i == j || derived[j].iter().any(|(p, _)| p == property) {
                            continue;
                        }
                        sink.push(
                            &[(Hole::PropA, a), (Hole::PropB, b), (Hole::Property, property)],
                            cmp,
                            vec![edge_prov(edge), seed_prov(*kind, b)],
                        );
                    }
                }
            }
        }
        CrawlRule::SeedEdges {
            seeds: kind,
            relation,
            seed_hole,
            target_hole,
        } => {
            let kb = conceptnet.unwrap();
            for seed in seeds.unwrap().names() {
                for e in kb.outgoing(seed, relation) {
                    sink.push(
                        &[(*seed_hole, seed), (*target_hole, &e.target)],
                        cmp,
                        vec![seed_prov(*kind, seed), edge_prov(e)],
                    );
                }
            }
        }
        CrawlRule::AtomicEvents {
            relation,
            two_person,
            base_form,
        } => {
            for e in atomic.unwrap().with_relation(relation) {
                if *two_person {
                    if let Some(rel) = &e.binary {
                        sink.push(&[(Hole::Relation, rel), (Hole::Property, &e.target)], cmp, vec![edge_prov(e)]);
                    }
                } else {
                    let premise = if *base_form {
                        match e.source.split_once(' ') {
                            Some((head, rest)) => format!("{} {rest}", verb_base_form(head)),
                            None => verb_base_form(&e.source),
                        }
                    } else {
                        e.source.clone()
                    };
                    sink.push(&[(Hole::Premise, &premise), (Hole::Property, &e.target)], cmp, vec![edge_prov(e)]);
                }
            }
        }
        CrawlRule::TemporalList { seeds: kind } => {
            for entry in &seeds.unwrap().entries {
                let (Some(state), Some(marker)) = (&entry.state, entry.marker) else {
                    continue;
                };
                sink.push(
                    &[(Hole::Premise, &entry.name), (Hole::Property, state)],
                    marker,
                    vec![seed_prov(*kind, &entry.name)],
                );
            }
        }
    }

    Ok(KnowledgeTable {
        strategy_id: strategy.strategy_id,
        template_id: strategy.template_id(),
        type_constraint: strategy.type_constraint,
        rows: sink.rows,
    })
}
