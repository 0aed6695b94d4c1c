mod common;

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use common::{fixture, kb_config};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_axiomprobe"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write_config(dir: &Path) -> String {
    let path = dir.join("config.json");
    fs::write(&path, serde_json::to_string_pretty(&kb_config(&dir.join("out"))).unwrap()).unwrap();
    path.display().to_string()
}

#[test]
fn ingest_emits_eleven_tables() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path());
    let o = run(&["ingest", "--config", &cfg]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(fs::read_dir(dir.path().join("out/tables")).unwrap().count(), 11);
}

#[test]
fn ingest_with_empty_enable_list_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path());
    let o = run(&["ingest", "--config", &cfg, "--strategies", ""]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(!dir.path().join("out").exists());
}

#[test]
fn ingest_with_missing_dump_fails() {
    let dir = tempfile::tempdir().unwrap();
    let mut config = kb_config(&dir.path().join("out"));
    config.paths.atomic = Some(dir.path().join("missing.tsv"));
    let cfg = dir.path().join("config.json");
    fs::write(&cfg, serde_json::to_string(&config).unwrap()).unwrap();
    let o = run(&["ingest", "--config", cfg.to_str().unwrap()]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("missing.tsv"), "{}", stderr(&o));
}

fn generate_cracks(out: &Path, lexicon: &str) -> Output {
    run(&[
        "generate",
        "--axioms",
        fixture("cracks_axioms.jsonl").to_str().unwrap(),
        "--lexicons",
        fixture(lexicon).to_str().unwrap(),
        "--seed",
        "3",
        "--out",
        out.to_str().unwrap(),
    ])
}

fn lines(path: &Path) -> usize {
    fs::read_to_string(path).unwrap().lines().count()
}

#[test]
fn generate_counts_and_reruns_are_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    assert!(generate_cracks(a.path(), "cracks_lexicon.jsonl").status.success());
    assert!(generate_cracks(b.path(), "cracks_lexicon.jsonl").status.success());
    assert_eq!(lines(&a.path().join("statements.jsonl")), 24);
    assert_eq!(lines(&a.path().join("mwp.jsonl")), 24);
    assert_eq!(lines(&a.path().join("sp.jsonl")), 24);
    for f in ["statements.jsonl", "mwp.jsonl", "sp.jsonl", "manifest.json"] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap(), "{f}");
    }

    let c = tempfile::tempdir().unwrap();
    assert!(generate_cracks(c.path(), "cracks_lexicon_base_only.jsonl").status.success());
    assert_eq!(lines(&c.path().join("statements.jsonl")), 6);
}

#[test]
fn generate_uses_the_custom_mask_token() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&[
        "generate",
        "--axioms",
        fixture("cracks_axioms.jsonl").to_str().unwrap(),
        "--mask-token",
        "<mask>",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let mwp = fs::read_to_string(dir.path().join("mwp.jsonl")).unwrap();
    assert!(mwp.lines().all(|l| l.contains("<mask>") && !l.contains("[MASK]")));
}

#[test]
fn knowledge_augmented_generation_writes_fact_probes() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&[
        "generate",
        "--axioms",
        fixture("glass_stone_axioms.jsonl").to_str().unwrap(),
        "--knowledge-augmented",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(lines(&dir.path().join("augmented_statements.jsonl")), 2);
    let mwp = fs::read_to_string(dir.path().join("augmented_mwp.jsonl")).unwrap();
    assert!(mwp.contains("and glass is more transparent than stone"));
}

#[test]
fn split_rejects_an_oversized_request() {
    let dir = tempfile::tempdir().unwrap();
    assert!(generate_cracks(dir.path(), "cracks_lexicon.jsonl").status.success());
    let o = run(&[
        "split",
        "--out",
        dir.path().to_str().unwrap(),
        "--setting",
        "low-resource",
        "--train",
        "100",
    ]);
    assert!(!o.status.success());
    assert!(stderr(&o).to_lowercase().contains("pool"), "{}", stderr(&o));
}

#[test]
fn split_writes_manifests() {
    let dir = tempfile::tempdir().unwrap();
    assert!(generate_cracks(dir.path(), "cracks_lexicon.jsonl").status.success());
    let o = run(&[
        "split",
        "--out",
        dir.path().to_str().unwrap(),
        "--setting",
        "zero-shot",
        "--test",
        "24",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let test: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("splits/zero_shot/test.json")).unwrap()).unwrap();
    assert_eq!(test["statement_ids"].as_array().unwrap().len(), 24);
}

fn gold_predictions(probes: &Path, out: &Path, drop: usize) {
    let text = fs::read_to_string(probes).unwrap();
    let mut lines = Vec::new();
    for l in text.lines().skip(drop) {
        let v: serde_json::Value = serde_json::from_str(l).unwrap();
        let gold = v["gold_index"].as_u64().unwrap() as usize;
        let mut scores = [0.1, 0.1];
        scores[gold] = 0.9;
        lines.push(serde_json::json!({"probe_id": v["probe_id"], "task": "mwp", "scores": scores}).to_string());
    }
    fs::write(out, lines.join("\n") + "\n").unwrap();
}

#[test]
fn score_reports_in_every_format() {
    let dir = tempfile::tempdir().unwrap();
    assert!(generate_cracks(dir.path(), "cracks_lexicon.jsonl").status.success());
    let probes = dir.path().join("mwp.jsonl");
    let preds = dir.path().join("preds.jsonl");
    gold_predictions(&probes, &preds, 0);
    for format in ["json", "csv", "md"] {
        let o = run(&[
            "score",
            "--probes",
            probes.to_str().unwrap(),
            "--predictions",
            preds.to_str().unwrap(),
            "--format",
            format,
            "--by",
            "perturbation,valence,axiom,template",
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
        assert!(!o.stdout.is_empty());
    }
    let o = run(&[
        "score",
        "--probes",
        probes.to_str().unwrap(),
        "--predictions",
        preds.to_str().unwrap(),
    ]);
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["overall_accuracy"], 1.0);
}

#[test]
fn score_fails_on_missing_predictions() {
    let dir = tempfile::tempdir().unwrap();
    assert!(generate_cracks(dir.path(), "cracks_lexicon.jsonl").status.success());
    let probes = dir.path().join("mwp.jsonl");
    let preds = dir.path().join("preds.jsonl");
    gold_predictions(&probes, &preds, 1);
    let o = run(&[
        "score",
        "--probes",
        probes.to_str().unwrap(),
        "--predictions",
        preds.to_str().unwrap(),
    ]);
    assert!(!o.status.success());
    assert!(stderr(&o).starts_with("error:"));
}

#[test]
fn score_fails_on_malformed_predictions() {
    let dir = tempfile::tempdir().unwrap();
    assert!(generate_cracks(dir.path(), "cracks_lexicon.jsonl").status.success());
    let preds = dir.path().join("preds.jsonl");
    fs::write(&preds, "{not json}\n").unwrap();
    let o = run(&[
        "score",
        "--probes",
        dir.path().join("mwp.jsonl").to_str().unwrap(),
        "--predictions",
        preds.to_str().unwrap(),
    ]);
    assert!(!o.status.success());
}
