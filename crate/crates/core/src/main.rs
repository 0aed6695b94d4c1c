use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use axiomprobe::eval::{Averaging, Axis, ReportFormat};
use axiomprobe::pipeline::{self, PipelineConfig};
use axiomprobe::probes::Setting;
use axiomprobe::surface::EntityMode;

#[derive(Parser)]
#[command(name = "axiomprobe", version, about = "Commonsense axiom probe generation and scoring")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// JSON pipeline config; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Entities {
    Novel,
    Real,
}

#[derive(Clone, Copy, ValueEnum)]
enum SettingArg {
    ZeroShot,
    LowResource,
    HighResource,
    RawLarge,
}

#[derive(Clone, Copy, ValueEnum)]
enum ByArg {
    Perturbation,
    Valence,
    Axiom,
    Template,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
    Md,
}

#[derive(Subcommand)]
enum Command {
    /// Crawl knowledge tables and fill them into axioms.
    Ingest {
        #[command(flatten)]
        common: Common,
        /// Comma-separated strategy ids to run (empty runs none).
        #[arg(long, value_delimiter = ',')]
        strategies: Option<Vec<String>>,
    },
    /// Expand axioms into statements and MWP/SP probes.
    Generate {
        #[command(flatten)]
        common: Common,
        /// Axiom records (JSONL) to use instead of ingested ones.
        #[arg(long)]
        axioms: Option<PathBuf>,
        #[arg(long)]
        lexicons: Option<PathBuf>,
        #[arg(long, value_enum)]
        entities: Option<Entities>,
        #[arg(long)]
        mask_token: Option<String>,
        /// Also emit fact-augmented statements and probes.
        #[arg(long)]
        knowledge_augmented: bool,
    },
    /// Split statements into axiom-disjoint train/val/test sets.
    Split {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        statements: Option<PathBuf>,
        #[arg(long, value_enum)]
        setting: Option<SettingArg>,
        #[arg(long)]
        entity_mult: Option<usize>,
        #[arg(long)]
        train: Option<usize>,
        #[arg(long)]
        val: Option<usize>,
        #[arg(long)]
        test: Option<usize>,
    },
    /// Score a prediction file against a probe file.
    Score {
        #[arg(long)]
        probes: PathBuf,
        #[arg(long)]
        predictions: PathBuf,
        /// Breakdown axes to include.
        #[arg(long, value_enum, value_delimiter = ',', default_value = "perturbation,valence")]
        by: Vec<ByArg>,
        #[arg(long, value_enum, default_value = "json")]
        format: FormatArg,
        /// Average within axioms first instead of over all probes.
        #[arg(long)]
        macro_average: bool,
        /// Label recorded in the report.
        #[arg(long)]
        setting: Option<String>,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load_config(common: &Common) -> Result<PipelineConfig> {
    let mut config = match &common.config {
        Some(p) => PipelineConfig::load(p).with_context(|| format!("loading config {}", p.display()))?,
        None => PipelineConfig::default(),
    };
    if let Some(seed) = common.seed {
        config.seed = seed;
    }
    if let Some(out) = &common.out {
        config.paths.output_dir = out.clone();
    }
    Ok(config)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Ingest { common, strategies } => {
            let mut config = load_config(&common)?;
            if let Some(ids) = strategies {
                let ids = ids
                    .iter()
                    .filter(|s| !s.trim().is_empty())
                    .map(|s| s.trim().parse::<u8>().with_context(|| format!("bad strategy id `{s}`")))
                    .collect::<Result<Vec<_>>>()?;
                config.strategies = Some(ids);
            }
            let out = pipeline::ingest(&config)?;
            eprintln!(
                "ingest: {} tables, {} axioms, {} rejected rows",
                out.tables,
                out.axioms.len(),
                out.diagnostics.len()
            );
            for (strategy, d) in &out.diagnostics {
                eprintln!("  strategy {strategy} row {}: {}", d.row_index, d.error);
            }
        }
        Command::Generate {
            common,
            axioms,
            lexicons,
            entities,
            mask_token,
            knowledge_augmented,
        } => {
            let mut config = load_config(&common)?;
            if axioms.is_some() {
                config.paths.axioms = axioms;
            }
            if lexicons.is_some() {
                config.paths.lexicons = lexicons;
            }
            if let Some(e) = entities {
                config.entities = match e {
                    Entities::Novel => EntityMode::Novel,
                    Entities::Real => EntityMode::RealNames,
                };
            }
            if let Some(m) = mask_token {
                config.mask_token = m;
            }
            config.knowledge_augmented |= knowledge_augmented;
            let out = pipeline::generate(&config)?;
            eprintln!(
                "generate: {} axioms, {} statements",
                out.axioms.len(),
                out.statements.len()
            );
        }
        Command::Split {
            common,
            statements,
            setting,
            entity_mult,
            train,
            val,
            test,
        } => {
            let mut config = load_config(&common)?;
            if statements.is_some() {
                config.paths.statements = statements;
            }
            if let Some(s) = setting {
                config.setting = match s {
                    SettingArg::ZeroShot => Setting::ZeroShot,
                    SettingArg::LowResource => Setting::LowResource,
                    SettingArg::HighResource => Setting::HighResource,
                    SettingArg::RawLarge => Setting::RawLarge,
                };
            }
            config.entity_mult = entity_mult.or(config.entity_mult);
            config.train = train.or(config.train);
            config.val = val.or(config.val);
            config.test = test.or(config.test);
            let out = pipeline::split(&config)?;
            for m in &out.split.manifests {
                eprintln!(
                    "{:?}: {} statements, {} axioms, {} instances",
                    m.split,
                    m.statement_ids.len(),
                    m.axiom_ids.len(),
                    m.instances
                );
            }
        }
        Command::Score {
            probes,
            predictions,
            by,
            format,
            macro_average,
            setting,
            out,
        } => {
            let averaging = if macro_average { Averaging::Axiom } else { Averaging::Probe };
            let mut report = pipeline::score_files(&probes, &predictions, averaging)?;
            report.setting = setting;
            let axes: Vec<Axis> = by
                .into_iter()
                .map(|b| match b {
                    ByArg::Perturbation => Axis::Perturbation,
                    ByArg::Valence => Axis::Valence,
                    ByArg::Axiom => Axis::Axiom,
                    ByArg::Template => Axis::Template,
                })
                .collect();
            let format = match format {
                FormatArg::Json => ReportFormat::Json,
                FormatArg::Csv => ReportFormat::Csv,
                FormatArg::Md => ReportFormat::Md,
            };
            let text = pipeline::render_report(&report, format, &axes)?;
            match out {
                Some(p) => fs::write(&p, text).with_context(|| format!("writing {}", p.display()))?,
                None => print!("{text}"),
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
