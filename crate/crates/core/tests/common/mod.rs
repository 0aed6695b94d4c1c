#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use axiomprobe::knowledge::ListKind;
use axiomprobe::pipeline::{Paths, PipelineConfig};

pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn kb_lists() -> BTreeMap<ListKind, PathBuf> {
    ListKind::ALL
        .into_iter()
        .map(|k| (k, fixture(&format!("kb/{}.txt", k.name()))))
        .collect()
}

/// A config pointing at the miniature knowledge base, writing into `out`.
pub fn kb_config(out: &Path) -> PipelineConfig {
    PipelineConfig {
        paths: Paths {
            conceptnet: Some(fixture("kb/conceptnet.tsv")),
            atomic: Some(fixture("kb/atomic.tsv")),
            lists: kb_lists(),
            output_dir: out.to_path_buf(),
            ..Paths::default()
        },
        ..PipelineConfig::default()
    }
}

/// Lowercase with all whitespace removed.
pub fn squash(s: &str) -> String {
    s.chars().filter(|c| !c.is_whitespace()).flat_map(char::to_lowercase).collect()
}

/// `(linguistic, asymmetry, text)` rows of the wider/cracks reference table.
pub fn cracks_table() -> Vec<(String, String, String)> {
    std::fs::read_to_string(fixture("cracks_table.tsv"))
        .unwrap()
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let f: Vec<&str> = l.split('\t').collect();
            (f[0].to_string(), f[1].to_string(), f[2].to_string())
        })
        .collect()
}
