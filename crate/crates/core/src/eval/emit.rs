use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::score::{breakdown, Averaging, Axis, EvalReport};
use super::EvalError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportFormat {
    Json,
    Csv,
    Md,
}

impl FromStr for ReportFormat {
    type Err = EvalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            "md" | "markdown" => Ok(ReportFormat::Md),
            other => Err(EvalError::UnknownFormat(other.to_string())),
        }
    }
}

impl ReportFormat {
    pub fn extension(self) -> &'static str {
        match self {
            ReportFormat::Json => "json",
            ReportFormat::Csv => "csv",
            ReportFormat::Md => "md",
        }
    }
}

/// Serializes a report. JSON carries everything; CSV and markdown show
/// the breakdowns along `axes`.
pub fn emit_report(report: &EvalReport, format: ReportFormat, axes: &[Axis]) -> Result<String, EvalError> {
    match format {
        ReportFormat::Json => {
            serde_json::to_string_pretty(report).map_err(|e| EvalError::Serialize(e.to_string()))
        }
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| EvalError::Serialize(e.to_string());
            w.write_record(["axis", "key", "n", "correct", "accuracy"]).map_err(io)?;
            for &axis in axes {
                for row in breakdown(report, axis) {
                    w.write_record([
                        axis.name(),
                        &row.key,
                        &row.n.to_string(),
                        &row.correct.to_string(),
                        &format!("{:.6}", row.accuracy),
                    ])
                    .map_err(io)?;
                }
            }
            let bytes = w.into_inner().map_err(|e| EvalError::Serialize(e.to_string()))?;
            Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
        }
        ReportFormat::Md => Ok(markdown(report, axes)),
    }
}

fn markdown(report: &EvalReport, axes: &[Axis]) -> String {
    let mut out = String::new();
    if let Some(s) = &report.setting {
        let _ = writeln!(out, "## Evaluation: {s}\n");
    } else {
        out.push_str("## Evaluation\n\n");
    }
    out.push_str("| metric | value | n |\n|---|---|---|\n");
    let headline = match report.averaging {
        Averaging::Probe => "accuracy",
        Averaging::Axiom => "accuracy (per-axiom mean)",
    };
    let _ = writeln!(out, "| {headline} | {:.4} | {} |", report.headline(), report.n);
    let _ = writeln!(out, "| axiom consistency | {:.4} | |", report.axiom_consistency);
    let _ = writeln!(out, "| ties | {} | |", report.ties);
    for r in &report.references {
        let _ = writeln!(out, "| {} | {:.4} | reference |", r.label, r.accuracy);
    }
    for &axis in axes {
        let _ = writeln!(out, "\n### By {axis}\n");
        out.push_str("| key | accuracy | correct | n |\n|---|---|---|---|\n");
        for row in breakdown(report, axis) {
            let _ = writeln!(out, "| {} | {:.4} | {} | {} |", row.key, row.accuracy, row.correct, row.n);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::score::{EvalReport, ProbeOutcome};
    use crate::fol::{AxiomId, Polarity, TemplateId};
    use crate::perturb::PerturbationTag;

    fn report() -> EvalReport {
        let outcomes = (0..30)
            .map(|i| ProbeOutcome {
                probe_id: format!("p{i}"),
                axiom_id: AxiomId(format!("ax{}", i % 4)),
                tag: PerturbationTag::all()[i % 24],
                template_id: TemplateId::Lt2,
                valence: Some(if i % 3 == 0 { Polarity::Negative } else { Polarity::Positive }),
                correct: i % 5 != 0,
                tie: false,
            })
            .collect();
        EvalReport::from_outcomes(outcomes)
    }

    #[test]
    fn json_round_trips() {
        let r = report();
        let s = emit_report(&r, ReportFormat::Json, &[]).unwrap();
        assert_eq!(serde_json::from_str::<EvalReport>(&s).unwrap(), r);
    }

    #[test]
    fn csv_has_header_plus_rows() {
        let r = report();
        let s = emit_report(&r, ReportFormat::Csv, &[Axis::Valence, Axis::Axiom]).unwrap();
        assert_eq!(s.lines().count(), 1 + 2 + 4);
    }

    #[test]
    fn markdown_flags_the_reference_row() {
        let s = emit_report(&report(), ReportFormat::Md, &[Axis::Template]).unwrap();
        let row = s.lines().find(|l| l.contains("0.9170")).unwrap();
        assert!(row.contains("reported") && row.contains("reference"));
        assert!(s.contains("| lt2 |"));
    }
}
