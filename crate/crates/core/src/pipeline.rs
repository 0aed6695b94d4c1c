//! End-to-end commands over files: ingest, generate, split, score.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::eval::{emit_report, score, Averaging, Axis, EvalError, EvalReport, PredictionRecord, ReportFormat};
use crate::fol::{parse_axiom, AxiomId, AxiomRecord, FolError, TypedAxiom};
use crate::knowledge::{
    default_strategies, fill_templates, load_atomic, load_conceptnet, load_list, run_strategy, CrawlStrategy,
    KnowledgeError, KnowledgeSources, ListKind, RelationVocabulary, RowDiagnostic,
};
use crate::perturb::{ConclusionLexicon, LexiconRecord, PerturbError, PerturbedAxiom};
use crate::probes::{split_dataset, to_mwp, to_sp, Probe, ProbeError, Setting, SplitConfig, DEFAULT_MASK};
use crate::surface::{
    gen_entity_assignment, AxiomSurface, EntityMode, FactMode, Statement, SurfaceError, TemplateBank, Vocabulary,
};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Json { path: PathBuf, line: usize, message: String },
    #[error("configured path does not exist: {0}")]
    MissingPath(PathBuf),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Knowledge(#[from] KnowledgeError),
    #[error(transparent)]
    Fol(#[from] FolError),
    #[error(transparent)]
    Perturb(#[from] PerturbError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Probe(#[from] ProbeError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

type Result<T, E = PipelineError> = std::result::Result<T, E>;

/// Input locations. Anything unset falls back to built-in data or to the
/// previous command's output in `output_dir`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Paths {
    pub conceptnet: Option<PathBuf>,
    pub atomic: Option<PathBuf>,
    pub lists: BTreeMap<ListKind, PathBuf>,
    /// Declarative strategy records replacing the built-in eleven.
    pub strategies: Option<PathBuf>,
    /// Axiom records to generate from instead of the ingested ones.
    pub axioms: Option<PathBuf>,
    pub lexicons: Option<PathBuf>,
    pub template_bank: Option<PathBuf>,
    pub vocabulary: Option<PathBuf>,
    /// Statements to split instead of the generated ones.
    pub statements: Option<PathBuf>,
    pub output_dir: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub paths: Paths,
    pub seed: u64,
    pub entities: EntityMode,
    pub entity_mult: Option<usize>,
    pub setting: Setting,
    pub train: Option<usize>,
    pub val: Option<usize>,
    pub test: Option<usize>,
    pub holdout_axioms: Vec<AxiomId>,
    pub mask_token: String,
    /// Strategy ids to run; `None` runs all.
    pub strategies: Option<Vec<u8>>,
    /// Also emit fact-augmented statements and probes where a fact
    /// template exists.
    pub knowledge_augmented: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            paths: Paths {
                output_dir: PathBuf::from("out"),
                ..Paths::default()
            },
            seed: 0,
            entities: EntityMode::Novel,
            entity_mult: None,
            setting: Setting::HighResource,
            train: None,
            val: None,
            test: None,
            holdout_axioms: Vec::new(),
            mask_token: DEFAULT_MASK.to_string(),
            strategies: None,
            knowledge_augmented: false,
        }
    }
}

impl PipelineConfig {
    pub fn load(path: &Path) -> Result<PipelineConfig> {
        let text = read(path)?;
        serde_json::from_str(&text).map_err(|e| PipelineError::Json {
            path: path.to_path_buf(),
            line: e.line(),
            message: e.to_string(),
        })
    }

    /// Every configured input path must exist.
    pub fn validate(&self) -> Result<()> {
        let p = &self.paths;
        let inputs = [
            &p.conceptnet,
            &p.atomic,
            &p.strategies,
            &p.axioms,
            &p.lexicons,
            &p.template_bank,
            &p.vocabulary,
            &p.statements,
        ];
        for path in inputs.into_iter().flatten().chain(p.lists.values()) {
            if !path.exists() {
                return Err(PipelineError::MissingPath(path.clone()));
            }
        }
        if self.mask_token.is_empty() {
            return Err(PipelineError::Config("mask token must not be empty".into()));
        }
        Ok(())
    }

    /// Hash of the canonical JSON form. The output directory is left out
    /// so identical runs written to different places hash the same.
    pub fn hash(&self) -> String {
        let mut c = self.clone();
        c.paths.output_dir = PathBuf::new();
        let json = serde_json::to_vec(&c).expect("config serializes");
        hex::encode(Sha256::digest(&json))
    }

    /// Seed of a named random stream derived from the root seed.
    pub fn stream(&self, name: &str) -> u64 {
        sub_seed(self.seed, name)
    }

    fn out(&self, name: &str) -> PathBuf {
        self.paths.output_dir.join(name)
    }
}

pub fn sub_seed(root: u64, name: &str) -> u64 {
    let mut h = Sha256::new();
    h.update(root.to_le_bytes());
    h.update(name.as_bytes());
    let d = h.finalize();
    let mut b = [0u8; 8];
    b.copy_from_slice(&d[..8]);
    u64::from_le_bytes(b)
}

/// Written next to every command's outputs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub tool_version: String,
    pub config_hash: String,
    pub seed: u64,
    pub streams: BTreeMap<String, u64>,
    pub counts: BTreeMap<String, usize>,
}

impl RunManifest {
    fn new(command: &str, config: &PipelineConfig, streams: &[&str]) -> RunManifest {
        RunManifest {
            command: command.to_string(),
            tool_version: TOOL_VERSION.to_string(),
            config_hash: config.hash(),
            seed: config.seed,
            streams: streams.iter().map(|s| (s.to_string(), config.stream(s))).collect(),
            counts: BTreeMap::new(),
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| PipelineError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_jsonl<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    parse_jsonl(&read(path)?, path)
}

/// One record per non-blank line. `source` only labels errors.
pub fn parse_jsonl<T: DeserializeOwned>(text: &str, source: &Path) -> Result<Vec<T>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(line).map_err(|e| PipelineError::Json {
            path: source.to_path_buf(),
            line: i + 1,
            message: e.to_string(),
        })?);
    }
    Ok(out)
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> PipelineError + '_ {
    move |source| PipelineError::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub fn write_jsonl<T: Serialize>(path: &Path, items: &[T]) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(io_err(dir))?;
    }
    let mut buf = Vec::new();
    for item in items {
        serde_json::to_writer(&mut buf, item).expect("records serialize");
        buf.push(b'\n');
    }
    let mut f = fs::File::create(path).map_err(io_err(path))?;
    f.write_all(&buf).map_err(io_err(path))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(io_err(dir))?;
    }
    let mut text = serde_json::to_string_pretty(value).expect("values serialize");
    text.push('\n');
    fs::write(path, text).map_err(io_err(path))
}

#[derive(Debug, Clone, Default)]
pub struct IngestOutput {
    pub axioms: Vec<TypedAxiom>,
    pub diagnostics: Vec<(u8, RowDiagnostic)>,
    pub tables: usize,
    pub manifest: Option<RunManifest>,
}

fn strategies(config: &PipelineConfig) -> Result<Vec<CrawlStrategy>> {
    let all: Vec<CrawlStrategy> = match &config.paths.strategies {
        Some(p) => {
            let text = read(p)?;
            serde_json::from_str(&text).map_err(|e| PipelineError::Json {
                path: p.clone(),
                line: e.line(),
                message: e.to_string(),
            })?
        }
        None => default_strategies(),
    };
    Ok(match &config.strategies {
        Some(ids) => all.into_iter().filter(|s| ids.contains(&s.strategy_id)).collect(),
        None => all,
    })
}

/// Loads the knowledge sources, runs every enabled strategy and writes one
/// table per strategy plus the resulting axioms.
pub fn ingest(config: &PipelineConfig) -> Result<IngestOutput> {
    config.validate()?;
    let strategies = strategies(config)?;
    if strategies.is_empty() {
        return Ok(IngestOutput::default());
    }
    let vocab = RelationVocabulary::default();
    let mut sources = KnowledgeSources {
        conceptnet: config.paths.conceptnet.as_deref().map(|p| load_conceptnet(p, &vocab)).transpose()?,
        atomic: config.paths.atomic.as_deref().map(|p| load_atomic(p, &vocab)).transpose()?,
        lists: BTreeMap::new(),
    };
    for (kind, path) in &config.paths.lists {
        sources.lists.insert(*kind, load_list(path, *kind)?);
    }
    let tables = strategies
        .par_iter()
        .map(|s| run_strategy(s, &sources))
        .collect::<Result<Vec<_>, _>>()?;

    let mut out = IngestOutput::default();
    let mut manifest = RunManifest::new("ingest", config, &[]);
    let mut seen = std::collections::HashSet::new();
    for (strategy, table) in strategies.iter().zip(&tables) {
        let name = format!(
            "tables/strategy_{:02}_{}.jsonl",
            strategy.strategy_id,
            strategy.type_constraint.name()
        );
        write_jsonl(&config.out(&name), &table.to_lines())?;
        manifest.counts.insert(format!("rows.{:02}", strategy.strategy_id), table.len());
        let filled = fill_templates(table);
        for d in filled.diagnostics {
            out.diagnostics.push((strategy.strategy_id, d));
        }
        for a in filled.axioms {
            if seen.insert(a.id()) {
                out.axioms.push(a);
            }
        }
    }
    let records: Vec<AxiomRecord> = out.axioms.iter().map(TypedAxiom::to_record).collect();
    write_jsonl(&config.out("axioms.jsonl"), &records)?;
    manifest.counts.insert("axioms".into(), out.axioms.len());
    manifest.counts.insert("rejected_rows".into(), out.diagnostics.len());
    write_json(&config.out("ingest_manifest.json"), &manifest)?;
    out.tables = tables.len();
    out.manifest = Some(manifest);
    Ok(out)
}

/// Lexicons keyed by the axiom they belong to.
pub fn load_lexicons(path: &Path) -> Result<HashMap<AxiomId, ConclusionLexicon>> {
    lexicons_from_records(read_jsonl(path)?)
}

pub fn lexicons_from_records(records: Vec<LexiconRecord>) -> Result<HashMap<AxiomId, ConclusionLexicon>> {
    let mut out = HashMap::new();
    for r in records {
        let id = match (&r.axiom_id, &r.fol_text) {
            (Some(id), _) => AxiomId(id.clone()),
            (None, Some(text)) => parse_axiom(text)?.id(),
            (None, None) => {
                return Err(PipelineError::Config(
                    "lexicon record needs `axiom_id` or `fol_text`".into(),
                ))
            }
        };
        out.insert(id, r.to_lexicon()?);
    }
    Ok(out)
}

#[derive(Debug, Clone, Default)]
pub struct GenerateOutput {
    pub axioms: Vec<TypedAxiom>,
    pub perturbed: Vec<PerturbedAxiom>,
    pub statements: Vec<Statement>,
    pub augmented: Vec<Statement>,
    pub manifest: Option<RunManifest>,
}

fn vocabulary(config: &PipelineConfig) -> Result<Vocabulary> {
    Ok(match &config.paths.vocabulary {
        Some(p) => Vocabulary::from_text(&read(p)?),
        None => Vocabulary::builtin(),
    })
}

/// Expands axioms into statement sets and probes, in memory.
pub fn generate_statements(
    axioms: &[TypedAxiom],
    lexicons: &HashMap<AxiomId, ConclusionLexicon>,
    bank: &TemplateBank,
    vocabulary: &Vocabulary,
    config: &PipelineConfig,
) -> Result<GenerateOutput> {
    let surfaces = axioms
        .par_iter()
        .map(|a| AxiomSurface::new(a.clone(), lexicons.get(&a.id()).cloned(), bank))
        .collect::<Result<Vec<_>, _>>()?;
    let variants = surfaces
        .par_iter()
        .map(|s| s.variants())
        .collect::<Result<Vec<_>, _>>()?;
    let total: usize = variants.iter().map(Vec::len).sum();
    let entities = gen_entity_assignment(total, 1, config.stream("entities"), vocabulary, config.entities)?;

    let mut jobs = Vec::with_capacity(total);
    let mut next = entities.into_iter();
    for (surface, vs) in surfaces.iter().zip(&variants) {
        for v in vs {
            let pair = next.next().expect("one pair per variant").remove(0);
            jobs.push((surface, v, pair));
        }
    }
    let statements = jobs
        .par_iter()
        .map(|(s, v, pair)| s.render(v, pair, config.entities))
        .collect::<Result<Vec<_>, _>>()?;

    let augmented = if config.knowledge_augmented {
        jobs.par_iter()
            .filter(|(s, v, _)| s.fact().is_some() && v.tag == crate::perturb::PerturbationTag::ORIGINAL)
            .map(|(s, v, pair)| {
                [FactMode::Parrot, FactMode::NegationSwitch]
                    .into_iter()
                    .map(|m| s.augment_with_fact(v, pair, config.entities, m))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .flatten()
            .collect()
    } else {
        Vec::new()
    };

    Ok(GenerateOutput {
        axioms: axioms.to_vec(),
        perturbed: variants.into_iter().flatten().collect(),
        statements,
        augmented,
        manifest: None,
    })
}

pub fn probes_for(statements: &[Statement], config: &PipelineConfig) -> Result<(Vec<Probe>, Vec<Probe>)> {
    let seed = config.stream("candidate_order");
    let mwp = statements
        .par_iter()
        .map(|s| to_mwp(s, &config.mask_token, seed).map(Probe::Mwp))
        .collect::<Result<Vec<_>, _>>()?;
    let sp = statements
        .par_iter()
        .map(|s| to_sp(s).map(Probe::Sp))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((mwp, sp))
}

/// Reads axioms (and optional lexicons), writes statements, perturbation
/// audit records, MWP and SP probes.
pub fn generate(config: &PipelineConfig) -> Result<GenerateOutput> {
    config.validate()?;
    let axiom_path = config.paths.axioms.clone().unwrap_or_else(|| config.out("axioms.jsonl"));
    let records: Vec<AxiomRecord> = read_jsonl(&axiom_path)?;
    let axioms = records
        .into_iter()
        .map(TypedAxiom::try_from)
        .collect::<Result<Vec<_>, _>>()?;
    let lexicons = match &config.paths.lexicons {
        Some(p) => load_lexicons(p)?,
        None => HashMap::new(),
    };
    let bank = match &config.paths.template_bank {
        Some(p) => TemplateBank::from_json(&read(p)?)?,
        None => TemplateBank::builtin(),
    };
    let vocabulary = vocabulary(config)?;
    let mut out = generate_statements(&axioms, &lexicons, &bank, &vocabulary, config)?;
    let (mwp, sp) = probes_for(&out.statements, config)?;

    let records: Vec<AxiomRecord> = out.axioms.iter().map(TypedAxiom::to_record).collect();
    write_jsonl(&config.out("axioms.jsonl"), &records)?;
    write_jsonl(&config.out("perturbed.jsonl"), &out.perturbed)?;
    write_jsonl(&config.out("statements.jsonl"), &out.statements)?;
    write_jsonl(&config.out("mwp.jsonl"), &mwp)?;
    write_jsonl(&config.out("sp.jsonl"), &sp)?;

    let mut manifest = RunManifest::new("generate", config, &["entities", "candidate_order"]);
    let matched = out.axioms.iter().filter(|a| lexicons.contains_key(&a.id())).count();
    manifest.counts.insert("axioms".into(), out.axioms.len());
    manifest.counts.insert("lexicons_matched".into(), matched);
    manifest.counts.insert("lexicons_unmatched".into(), lexicons.len() - matched);
    manifest.counts.insert("statements".into(), out.statements.len());
    manifest.counts.insert("mwp".into(), mwp.len());
    manifest.counts.insert("sp".into(), sp.len());
    if config.knowledge_augmented {
        let (amwp, _) = probes_for(&out.augmented, config)?;
        write_jsonl(&config.out("augmented_statements.jsonl"), &out.augmented)?;
        write_jsonl(&config.out("augmented_mwp.jsonl"), &amwp)?;
        manifest.counts.insert("augmented".into(), out.augmented.len());
    }
    write_json(&config.out("manifest.json"), &manifest)?;
    out.manifest = Some(manifest);
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct SplitOutput {
    pub split: crate::probes::SplitSet,
    pub manifest: RunManifest,
}

pub fn split_config(config: &PipelineConfig) -> SplitConfig {
    SplitConfig {
        setting: config.setting,
        train: config.train,
        val: config.val,
        test: config.test,
        entity_mult: config.entity_mult,
        seed: config.stream("splits"),
        holdout_axioms: config.holdout_axioms.iter().cloned().collect(),
    }
}

/// Splits generated statements and writes the manifests plus the
/// (entity-multiplied) training instances.
pub fn split(config: &PipelineConfig) -> Result<SplitOutput> {
    config.validate()?;
    let path = config
        .paths
        .statements
        .clone()
        .unwrap_or_else(|| config.out("statements.jsonl"));
    let statements: Vec<Statement> = read_jsonl(&path)?;
    let vocabulary = vocabulary(config)?;
    let split = split_dataset(&statements, &split_config(config), &vocabulary)?;
    let dir = format!("splits/{}", config.setting.name());
    for m in &split.manifests {
        let name = match m.split {
            crate::probes::SplitName::Train => "train",
            crate::probes::SplitName::Val => "val",
            crate::probes::SplitName::Test => "test",
        };
        write_json(&config.out(&format!("{dir}/{name}.json")), m)?;
    }
    write_jsonl(&config.out(&format!("{dir}/train_instances.jsonl")), &split.train_instances)?;
    let mut manifest = RunManifest::new("split", config, &["splits"]);
    for m in &split.manifests {
        manifest.counts.insert(format!("{:?}", m.split).to_lowercase(), m.statement_ids.len());
    }
    manifest.counts.insert("train_instances".into(), split.train_instances.len());
    write_json(&config.out(&format!("{dir}/manifest.json")), &manifest)?;
    Ok(SplitOutput { split, manifest })
}

/// Scores a prediction file against a probe file.
pub fn score_files(probes: &Path, predictions: &Path, averaging: Averaging) -> Result<EvalReport> {
    let probes: Vec<Probe> = read_jsonl(probes)?;
    let predictions: Vec<PredictionRecord> = read_jsonl(predictions)?;
    let mut report = score(&probes, &predictions)?;
    report.averaging = averaging;
    Ok(report)
}

pub fn render_report(report: &EvalReport, format: ReportFormat, axes: &[Axis]) -> Result<String> {
    Ok(emit_report(report, format, axes)?)
}
