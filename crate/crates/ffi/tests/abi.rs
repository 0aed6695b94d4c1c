use std::ffi::{c_char, CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use axiomprobe_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    axp_string_free(s);
    out
}

fn last_error() -> String {
    let p = axp_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

const CRACKS: &str = "More(Prop(A,wide),Prop(B,wide)) -> Harder(Prop(A,slip through cracks),Prop(B,slip through cracks))";

#[test]
fn axiom_round_trips_through_the_abi() {
    unsafe {
        let mut axiom = ptr::null_mut();
        assert_eq!(axp_axiom_parse(c(CRACKS).as_ptr(), &mut axiom), AxpStatus::Ok);
        let mut printed = ptr::null_mut();
        assert_eq!(axp_axiom_print(axiom, &mut printed), AxpStatus::Ok);
        let printed = take(printed);
        assert_eq!(printed, axiomprobe::fol::parse_axiom(CRACKS).unwrap().to_string());
        let mut id = ptr::null_mut();
        assert_eq!(axp_axiom_id(axiom, &mut id), AxpStatus::Ok);
        assert!(!take(id).is_empty());
        axp_axiom_free(axiom);
    }
}

#[test]
fn errors_carry_codes_and_messages() {
    unsafe {
        let mut axiom = ptr::null_mut();
        assert_eq!(axp_axiom_parse(c("More(A)").as_ptr(), &mut axiom), AxpStatus::Parse);
        assert!(axiom.is_null());
        assert!(!last_error().is_empty());

        assert_eq!(axp_axiom_parse(ptr::null(), &mut axiom), AxpStatus::NullPointer);
        assert_eq!(axp_axiom_parse(c(CRACKS).as_ptr(), ptr::null_mut()), AxpStatus::NullPointer);

        let bad = [0xffu8, 0];
        assert_eq!(axp_axiom_parse(bad.as_ptr().cast(), &mut axiom), AxpStatus::InvalidUtf8);

        let mut report = ptr::null_mut();
        assert_eq!(axp_score_jsonl(c("{}").as_ptr(), c("").as_ptr(), false, &mut report), AxpStatus::Parse);

        // success clears the message
        assert_eq!(axp_axiom_parse(c(CRACKS).as_ptr(), &mut axiom), AxpStatus::Ok);
        assert!(axp_last_error().is_null());
        axp_axiom_free(axiom);
    }
}

#[test]
fn free_functions_accept_null() {
    unsafe {
        axp_string_free(ptr::null_mut());
        axp_axiom_free(ptr::null_mut());
        axp_config_free(ptr::null_mut());
        axp_generation_free(ptr::null_mut());
        axp_report_free(ptr::null_mut());
    }
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures").join(name)
}

#[test]
fn generate_and_score_in_memory() {
    let axioms = std::fs::read_to_string(fixture("cracks_axioms.jsonl")).unwrap();
    let lexicons = std::fs::read_to_string(fixture("cracks_lexicon.jsonl")).unwrap();
    unsafe {
        let mut config = ptr::null_mut();
        assert_eq!(axp_config_new(&mut config), AxpStatus::Ok);
        assert_eq!(axp_config_set_seed(config, 42), AxpStatus::Ok);
        let mut generation = ptr::null_mut();
        assert_eq!(
            axp_generate_jsonl(config, c(&axioms).as_ptr(), c(&lexicons).as_ptr(), &mut generation),
            AxpStatus::Ok,
            "{}",
            last_error()
        );
        assert_eq!(axp_generation_statement_count(generation), 24);
        let mut mwp = ptr::null_mut();
        assert_eq!(axp_generation_jsonl(generation, AxpStream::Mwp, &mut mwp), AxpStatus::Ok);
        let mwp = take(mwp);
        assert_eq!(mwp.lines().count(), 24);

        let preds: String = mwp
            .lines()
            .map(|l| {
                let v: serde_json::Value = serde_json::from_str(l).unwrap();
                let gold = v["gold_index"].as_u64().unwrap() as usize;
                let mut scores = [0.0, 0.0];
                scores[gold] = 1.0;
                serde_json::json!({"probe_id": v["probe_id"], "task": "mwp", "scores": scores}).to_string() + "\n"
            })
            .collect();
        let mut report = ptr::null_mut();
        assert_eq!(
            axp_score_jsonl(c(&mwp).as_ptr(), c(&preds).as_ptr(), false, &mut report),
            AxpStatus::Ok,
            "{}",
            last_error()
        );
        let mut acc = 0.0;
        assert_eq!(axp_report_accuracy(report, &mut acc), AxpStatus::Ok);
        assert_eq!(acc, 1.0);
        let (mut n, mut correct) = (0usize, 0usize);
        assert_eq!(axp_report_counts(report, &mut n, &mut correct, ptr::null_mut()), AxpStatus::Ok);
        assert_eq!((n, correct), (24, 24));

        let mut csv = ptr::null_mut();
        assert_eq!(
            axp_report_emit(report, AxpFormat::Csv, c("perturbation,template").as_ptr(), &mut csv),
            AxpStatus::Ok
        );
        assert!(take(csv).starts_with("axis,key,n,correct,accuracy"));
        let mut md = ptr::null_mut();
        assert_eq!(
            axp_report_emit(report, AxpFormat::Markdown, c("nonsense").as_ptr(), &mut md),
            AxpStatus::InvalidArgument
        );
        assert!(md.is_null());

        axp_report_free(report);
        axp_generation_free(generation);
        axp_config_free(config);
    }
}

#[test]
fn disk_pipeline_runs_from_a_json_config() {
    let dir = tempfile::tempdir().unwrap();
    let json = serde_json::json!({
        "paths": {
            "axioms": fixture("cracks_axioms.jsonl"),
            "lexicons": fixture("cracks_lexicon.jsonl"),
            "output_dir": dir.path(),
        },
        "seed": 1,
        "setting": "zero_shot",
        "test": 24,
    })
    .to_string();
    unsafe {
        let mut config = ptr::null_mut();
        assert_eq!(axp_config_from_json(c(&json).as_ptr(), &mut config), AxpStatus::Ok, "{}", last_error());
        assert_eq!(axp_generate(config), AxpStatus::Ok, "{}", last_error());
        assert_eq!(axp_split(config), AxpStatus::Ok, "{}", last_error());
        assert!(dir.path().join("splits/zero_shot/test.json").exists());

        let missing = dir.path().join("missing");
        assert_eq!(axp_config_set_output_dir(config, c(missing.to_str().unwrap()).as_ptr()), AxpStatus::Ok);
        assert_eq!(axp_split(config), AxpStatus::Io);
        axp_config_free(config);

        let mut bad = ptr::null_mut();
        assert_eq!(axp_config_from_json(c("{\"nope\": 1}").as_ptr(), &mut bad), AxpStatus::Parse);
        assert!(bad.is_null());
    }
}

#[test]
fn version_is_static() {
    let v = unsafe { CStr::from_ptr(axp_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_the_abi() {
    let header = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/axiomprobe.h")).unwrap();
    for symbol in [
        "typedef struct AxpAxiom AxpAxiom;",
        "typedef struct AxpReport AxpReport;",
        "AXP_STATUS_OK = 0",
        "AXP_STATUS_PANIC = 8",
        "axp_last_error(void)",
        "axp_string_free(char *s)",
        "axp_generate_jsonl(",
        "axp_score_jsonl(",
        "axp_report_emit(",
    ] {
        assert!(header.contains(symbol), "header lacks `{symbol}`");
    }
}

/// Compiles and runs a small C program against the header and the static
/// library.
#[test]
fn c_program_links_against_the_static_library() {
    let Ok(cc) = which_cc() else {
        eprintln!("no C compiler on PATH; C link check not run");
        return;
    };
    let target_dir = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let lib = target_dir.join("libaxiomprobe_ffi.a");
    assert!(lib.exists(), "{} not built", lib.display());
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let dir = tempfile::tempdir().unwrap();
    let exe = dir.path().join("smoke");
    let status = Command::new(&cc)
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    assert_eq!(
        String::from_utf8(out.stdout).unwrap().trim(),
        "Rel(A,B,lawyer) -> More(Prop(A,know law),Prop(B,know law))"
    );
}

fn which_cc() -> Result<String, ()> {
    for cc in ["cc", "gcc", "clang"] {
        if Command::new(cc).arg("--version").output().is_ok_and(|o| o.status.success()) {
            return Ok(cc.to_string());
        }
    }
    Err(())
}
