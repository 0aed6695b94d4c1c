mod common;

use std::fs;

use axiomprobe::fol::{parse_axiom, TypedAxiom};
use axiomprobe::pipeline;
use common::{fixture, kb_config, squash};

struct Expected {
    strategy: u8,
    readable: String,
    fol: String,
}

fn expected() -> Vec<Expected> {
    fs::read_to_string(fixture("strategy_examples.tsv"))
        .unwrap()
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let f: Vec<&str> = l.split('\t').collect();
            Expected {
                strategy: f[0].parse().unwrap(),
                readable: f[1].to_string(),
                fol: f[2].to_string(),
            }
        })
        .collect()
}

fn ingest_all() -> Vec<TypedAxiom> {
    let dir = tempfile::tempdir().unwrap();
    pipeline::ingest(&kb_config(dir.path())).unwrap().axioms
}

#[test]
fn every_strategy_reproduces_its_reference_example() {
    let axioms = ingest_all();
    for e in expected() {
        let constraint = axiomprobe::fol::TypeConstraint::ALL[usize::from(e.strategy) - 1];
        let produced: Vec<&TypedAxiom> = axioms.iter().filter(|a| a.constraint == constraint).collect();
        assert!(
            produced.iter().any(|a| squash(&a.axiom.readable(a.constraint)) == squash(&e.readable)),
            "strategy {} did not produce `{}`; got {:?}",
            e.strategy,
            e.readable,
            produced.iter().map(|a| a.axiom.readable(a.constraint)).collect::<Vec<_>>()
        );
        let want = parse_axiom(&e.fol).unwrap();
        assert!(
            produced.iter().any(|a| a.axiom == want),
            "strategy {} missing structural match for {}",
            e.strategy,
            e.fol
        );
    }
}

#[test]
fn second_hop_skips_the_seed_itself() {
    let dir = tempfile::tempdir().unwrap();
    pipeline::ingest(&kb_config(dir.path())).unwrap();
    let table = fs::read_to_string(dir.path().join("tables/strategy_01_attribute_material.jsonl")).unwrap();
    assert_eq!(table.lines().count(), 2);
    for line in table.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_ne!(v["row"]["prop_a"], v["row"]["prop_b"], "{line}");
    }
}

#[test]
fn contrast_pairs_skip_shared_properties() {
    let axioms = ingest_all();
    let shared = parse_axiom("Prop(A,fish) & Prop(B,horse) -> More(Prop(A,swim),Prop(B,swim))").unwrap();
    assert!(axioms.iter().all(|a| a.axiom != shared));
}

#[test]
fn latitude_pairs_put_the_warmer_place_first() {
    let axioms = ingest_all();
    let backwards =
        parse_axiom("Prop(A,north pole) & Prop(B,equator) -> More(Prop(A,living in hot condition),Prop(B,living in hot condition))")
            .unwrap();
    assert!(axioms.iter().all(|a| a.axiom != backwards));
    // equal |latitude| yields no pair
    let poles = parse_axiom(
        "Prop(A,north pole) & Prop(B,south pole) -> More(Prop(A,living in hot condition),Prop(B,living in hot condition))",
    )
    .unwrap();
    assert!(axioms.iter().all(|a| a.axiom != poles));
}

#[test]
fn ingest_writes_one_table_per_strategy() {
    let dir = tempfile::tempdir().unwrap();
    let out = pipeline::ingest(&kb_config(dir.path())).unwrap();
    assert_eq!(out.tables, 11);
    let tables: Vec<_> = fs::read_dir(dir.path().join("tables")).unwrap().collect();
    assert_eq!(tables.len(), 11);
    assert!(dir.path().join("axioms.jsonl").exists());
    assert!(dir.path().join("ingest_manifest.json").exists());
}

#[test]
fn ingest_is_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    pipeline::ingest(&kb_config(a.path())).unwrap();
    pipeline::ingest(&kb_config(b.path())).unwrap();
    assert_eq!(
        fs::read(a.path().join("axioms.jsonl")).unwrap(),
        fs::read(b.path().join("axioms.jsonl")).unwrap()
    );
}

#[test]
fn empty_enable_list_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let mut config = kb_config(dir.path());
    config.strategies = Some(Vec::new());
    let out = pipeline::ingest(&config).unwrap();
    assert_eq!(out.tables, 0);
    assert!(out.axioms.is_empty());
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn subset_of_strategies_only_emits_those_tables() {
    let dir = tempfile::tempdir().unwrap();
    let mut config = kb_config(dir.path());
    config.strategies = Some(vec![2, 11]);
    let out = pipeline::ingest(&config).unwrap();
    assert_eq!(out.tables, 2);
    assert!(out
        .axioms
        .iter()
        .all(|a| matches!(a.constraint.strategy_id(), 2 | 11)));
}

#[test]
fn missing_dump_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let mut config = kb_config(dir.path());
    config.paths.conceptnet = Some(dir.path().join("nope.tsv"));
    assert!(pipeline::ingest(&config).is_err());
}
