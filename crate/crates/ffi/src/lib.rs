//! C ABI over the axiomprobe library.
//!
//! Every fallible call returns an [`AxpStatus`]. On failure the message is
//! available from [`axp_last_error`] on the same thread. Objects are
//! opaque handles released with their `_free` function; strings handed out
//! by this library are released with [`axp_string_free`].

use std::cell::RefCell;
use std::collections::HashMap;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::ptr;

use axiomprobe::eval::{score, Averaging, Axis, EvalReport, PredictionRecord, ReportFormat};
use axiomprobe::fol::{parse_axiom, print_axiom, Axiom, AxiomRecord, TypedAxiom};
use axiomprobe::knowledge::KnowledgeError;
use axiomprobe::perturb::LexiconRecord;
use axiomprobe::pipeline::{self, PipelineConfig, PipelineError};
use axiomprobe::probes::Probe;
use axiomprobe::surface::{TemplateBank, Vocabulary};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    Parse = 4,
    Io = 5,
    Generation = 6,
    Scoring = 7,
    Panic = 8,
}

/// Which output of a generation run to read.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxpStream {
    Statements = 0,
    Mwp = 1,
    Sp = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxpFormat {
    Json = 0,
    Csv = 1,
    Markdown = 2,
}

pub struct AxpAxiom(Axiom);

pub struct AxpConfig(PipelineConfig);

pub struct AxpGeneration {
    statements: usize,
    jsonl: [String; 3],
}

pub struct AxpReport(EvalReport);

struct Failure(AxpStatus, String);

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Self {
        let status = match &e {
            PipelineError::Io { .. } | PipelineError::MissingPath(_) => AxpStatus::Io,
            PipelineError::Json { .. } | PipelineError::Fol(_) => AxpStatus::Parse,
            PipelineError::Config(_) => AxpStatus::InvalidArgument,
            PipelineError::Knowledge(k) => match k {
                KnowledgeError::Io { .. } => AxpStatus::Io,
                KnowledgeError::Format { .. } => AxpStatus::Parse,
                _ => AxpStatus::InvalidArgument,
            },
            PipelineError::Perturb(_) | PipelineError::Surface(_) | PipelineError::Probe(_) => AxpStatus::Generation,
            PipelineError::Eval(_) => AxpStatus::Scoring,
        };
        Failure(status, e.to_string())
    }
}

fn fail(status: AxpStatus, message: impl Into<String>) -> Failure {
    Failure(status, message.into())
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> AxpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            AxpStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_last_error(&message);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            AxpStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(fail(AxpStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(AxpStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| fail(AxpStatus::NullPointer, format!("{what} is null")))
}

unsafe fn handle_mut<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| fail(AxpStatus::NullPointer, format!("{what} is null")))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(fail(AxpStatus::NullPointer, "output pointer is null"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(fail(AxpStatus::NullPointer, "output pointer is null"));
    }
    let c = CString::new(s).map_err(|_| fail(AxpStatus::InvalidArgument, "output contains a nul byte"))?;
    *out = c.into_raw();
    Ok(())
}

unsafe fn check_out<T>(out: *mut *mut T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(fail(AxpStatus::NullPointer, "output pointer is null"));
    }
    *out = ptr::null_mut();
    Ok(())
}

/// Library version, statically allocated. Do not free.
#[no_mangle]
pub extern "C" fn axp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or NULL. Valid until the
/// next call into this library on the same thread. Do not free.
#[no_mangle]
pub extern "C" fn axp_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn axp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses and validates an axiom formula.
///
/// # Safety
/// `formula` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn axp_axiom_parse(formula: *const c_char, out: *mut *mut AxpAxiom) -> AxpStatus {
    guard(|| {
        check_out(out)?;
        let formula = text(formula, "formula")?;
        let axiom = parse_axiom(formula).map_err(|e| fail(AxpStatus::Parse, e.to_string()))?;
        put(out, AxpAxiom(axiom))
    })
}

/// Canonical formula text. Free the result with `axp_string_free`.
///
/// # Safety
/// `axiom` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn axp_axiom_print(axiom: *const AxpAxiom, out: *mut *mut c_char) -> AxpStatus {
    guard(|| {
        check_out(out)?;
        put_string(out, print_axiom(&handle(axiom, "axiom")?.0))
    })
}

/// Content-derived axiom id. Free the result with `axp_string_free`.
///
/// # Safety
/// `axiom` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn axp_axiom_id(axiom: *const AxpAxiom, out: *mut *mut c_char) -> AxpStatus {
    guard(|| {
        check_out(out)?;
        put_string(out, handle(axiom, "axiom")?.0.id().0)
    })
}

/// # Safety
/// `axiom` must be NULL or a handle from `axp_axiom_parse`, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn axp_axiom_free(axiom: *mut AxpAxiom) {
    if !axiom.is_null() {
        drop(Box::from_raw(axiom));
    }
}

/// Default configuration: seed 0, novel entities, output directory `out`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn axp_config_new(out: *mut *mut AxpConfig) -> AxpStatus {
    guard(|| {
        check_out(out)?;
        put(out, AxpConfig(PipelineConfig::default()))
    })
}

/// Configuration from the same JSON document the command line accepts.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn axp_config_from_json(json: *const c_char, out: *mut *mut AxpConfig) -> AxpStatus {
    guard(|| {
        check_out(out)?;
        let json = text(json, "json")?;
        let config: PipelineConfig =
            serde_json::from_str(json).map_err(|e| fail(AxpStatus::Parse, format!("config: {e}")))?;
        put(out, AxpConfig(config))
    })
}

/// # Safety
/// `config` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn axp_config_set_seed(config: *mut AxpConfig, seed: u64) -> AxpStatus {
    guard(|| {
        handle_mut(config, "config")?.0.seed = seed;
        Ok(())
    })
}

/// # Safety
/// `config` must be a live handle; `dir` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn axp_config_set_output_dir(config: *mut AxpConfig, dir: *const c_char) -> AxpStatus {
    guard(|| {
        let dir = text(dir, "dir")?;
        handle_mut(config, "config")?.0.paths.output_dir = PathBuf::from(dir);
        Ok(())
    })
}

/// # Safety
/// `config` must be NULL or a live handle, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn axp_config_free(config: *mut AxpConfig) {
    if !config.is_null() {
        drop(Box::from_raw(config));
    }
}

/// Runs the `ingest` stage, writing under the configured output directory.
///
/// # Safety
/// `config` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn axp_ingest(config: *const AxpConfig) -> AxpStatus {
    guard(|| {
        pipeline::ingest(&handle(config, "config")?.0)?;
        Ok(())
    })
}

/// Runs the `generate` stage on disk.
///
/// # Safety
/// `config` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn axp_generate(config: *const AxpConfig) -> AxpStatus {
    guard(|| {
        pipeline::generate(&handle(config, "config")?.0)?;
        Ok(())
    })
}

/// Runs the `split` stage on disk.
///
/// # Safety
/// `config` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn axp_split(config: *const AxpConfig) -> AxpStatus {
    guard(|| {
        pipeline::split(&handle(config, "config")?.0)?;
        Ok(())
    })
}

fn to_jsonl<T: serde::Serialize>(items: &[T]) -> String {
    let mut s = String::new();
    for item in items {
        s.push_str(&serde_json::to_string(item).expect("records serialize"));
        s.push('\n');
    }
    s
}

/// Generates statements and probes in memory from axiom records (JSONL).
/// `lexicons_jsonl` may be NULL.
///
/// # Safety
/// `config` must be a live handle; string arguments NUL-terminated or, for
/// lexicons, NULL; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn axp_generate_jsonl(
    config: *const AxpConfig,
    axioms_jsonl: *const c_char,
    lexicons_jsonl: *const c_char,
    out: *mut *mut AxpGeneration,
) -> AxpStatus {
    guard(|| {
        check_out(out)?;
        let config = &handle(config, "config")?.0;
        let records: Vec<AxiomRecord> = pipeline::parse_jsonl(text(axioms_jsonl, "axioms_jsonl")?, Path::new("<axioms>"))?;
        let axioms = records
            .into_iter()
            .map(TypedAxiom::try_from)
            .collect::<Result<Vec<_>, _>>()
            .map_err(PipelineError::from)?;
        let lexicons = if lexicons_jsonl.is_null() {
            HashMap::new()
        } else {
            let records: Vec<LexiconRecord> =
                pipeline::parse_jsonl(text(lexicons_jsonl, "lexicons_jsonl")?, Path::new("<lexicons>"))?;
            pipeline::lexicons_from_records(records)?
        };
        let generated = pipeline::generate_statements(
            &axioms,
            &lexicons,
            &TemplateBank::builtin(),
            &Vocabulary::builtin(),
            config,
        )?;
        let (mwp, sp) = pipeline::probes_for(&generated.statements, config)?;
        put(
            out,
            AxpGeneration {
                statements: generated.statements.len(),
                jsonl: [to_jsonl(&generated.statements), to_jsonl(&mwp), to_jsonl(&sp)],
            },
        )
    })
}

/// # Safety
/// `generation` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn axp_generation_statement_count(generation: *const AxpGeneration) -> usize {
    generation.as_ref().map_or(0, |g| g.statements)
}

/// One output stream as JSONL. Free the result with `axp_string_free`.
///
/// # Safety
/// `generation` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn axp_generation_jsonl(
    generation: *const AxpGeneration,
    stream: AxpStream,
    out: *mut *mut c_char,
) -> AxpStatus {
    guard(|| {
        check_out(out)?;
        let g = handle(generation, "generation")?;
        put_string(out, g.jsonl[stream as usize].clone())
    })
}

/// # Safety
/// `generation` must be NULL or a live handle, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn axp_generation_free(generation: *mut AxpGeneration) {
    if !generation.is_null() {
        drop(Box::from_raw(generation));
    }
}

/// Scores predictions (JSONL) against probes (JSONL).
///
/// # Safety
/// String arguments must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn axp_score_jsonl(
    probes_jsonl: *const c_char,
    predictions_jsonl: *const c_char,
    macro_average: bool,
    out: *mut *mut AxpReport,
) -> AxpStatus {
    guard(|| {
        check_out(out)?;
        let probes: Vec<Probe> = pipeline::parse_jsonl(text(probes_jsonl, "probes_jsonl")?, Path::new("<probes>"))?;
        let preds: Vec<PredictionRecord> =
            pipeline::parse_jsonl(text(predictions_jsonl, "predictions_jsonl")?, Path::new("<predictions>"))?;
        let mut report = score(&probes, &preds).map_err(PipelineError::from)?;
        report.averaging = if macro_average { Averaging::Axiom } else { Averaging::Probe };
        put(out, AxpReport(report))
    })
}

/// Headline accuracy under the report's averaging.
///
/// # Safety
/// `report` must be a live handle; `accuracy` must be writable.
#[no_mangle]
pub unsafe extern "C" fn axp_report_accuracy(report: *const AxpReport, accuracy: *mut f64) -> AxpStatus {
    guard(|| {
        let r = handle(report, "report")?;
        let out = handle_mut(accuracy, "accuracy")?;
        *out = r.0.headline();
        Ok(())
    })
}

/// Probe, correct and tie counts. Any output pointer may be NULL.
///
/// # Safety
/// `report` must be a live handle; non-NULL outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn axp_report_counts(
    report: *const AxpReport,
    n: *mut usize,
    correct: *mut usize,
    ties: *mut usize,
) -> AxpStatus {
    guard(|| {
        let r = &handle(report, "report")?.0;
        for (p, v) in [(n, r.n), (correct, r.correct), (ties, r.ties)] {
            if let Some(p) = p.as_mut() {
                *p = v;
            }
        }
        Ok(())
    })
}

/// Renders the report. `axes` is a comma-separated list of breakdown axes
/// (perturbation, valence, axiom, template) or NULL for the default
/// perturbation and valence breakdowns. Free the result with
/// `axp_string_free`.
///
/// # Safety
/// `report` must be a live handle; `axes` NULL or NUL-terminated; `out`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn axp_report_emit(
    report: *const AxpReport,
    format: AxpFormat,
    axes: *const c_char,
    out: *mut *mut c_char,
) -> AxpStatus {
    guard(|| {
        check_out(out)?;
        let r = &handle(report, "report")?.0;
        let axes: Vec<Axis> = if axes.is_null() {
            vec![Axis::Perturbation, Axis::Valence]
        } else {
            text(axes, "axes")?
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<Axis>().map_err(|e| fail(AxpStatus::InvalidArgument, e.to_string())))
                .collect::<Result<_, _>>()?
        };
        let format = match format {
            AxpFormat::Json => ReportFormat::Json,
            AxpFormat::Csv => ReportFormat::Csv,
            AxpFormat::Markdown => ReportFormat::Md,
        };
        put_string(out, pipeline::render_report(r, format, &axes)?)
    })
}

/// # Safety
/// `report` must be NULL or a live handle, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn axp_report_free(report: *mut AxpReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}
