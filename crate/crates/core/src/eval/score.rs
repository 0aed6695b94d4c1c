use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::EvalError;
use crate::fol::{AxiomId, Polarity, TemplateId};
use crate::perturb::PerturbationTag;
use crate::probes::{Probe, Task};

/// Human accuracy on the joint test set as reported in the literature.
/// Stored for reference, never recomputed.
pub const REPORTED_HUMAN_ACCURACY: f64 = 0.917;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionRecord {
    pub probe_id: String,
    pub task: Task,
    /// MWP: one score per candidate, in candidate order. SP: scores of the
    /// correct and the incorrect sentence, in that order.
    pub scores: Vec<f64>,
}

/// Correctness of one probe, kept so reports can be re-sliced.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeOutcome {
    pub probe_id: String,
    pub axiom_id: AxiomId,
    pub tag: PerturbationTag,
    pub template_id: TemplateId,
    pub valence: Option<Polarity>,
    pub correct: bool,
    pub tie: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub accuracy: f64,
    pub correct: usize,
    pub n: usize,
}

impl Cell {
    fn from_counts(correct: usize, n: usize) -> Cell {
        Cell {
            accuracy: if n == 0 { 0.0 } else { correct as f64 / n as f64 },
            correct,
            n,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Averaging {
    /// Every probe weighs the same.
    #[default]
    Probe,
    /// Accuracy is averaged within each axiom first.
    Axiom,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reference {
    pub label: String,
    pub accuracy: f64,
}

impl Reference {
    pub fn human() -> Reference {
        Reference {
            label: "human, joint test set (reported)".into(),
            accuracy: REPORTED_HUMAN_ACCURACY,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub setting: Option<String>,
    pub averaging: Averaging,
    pub n: usize,
    pub correct: usize,
    pub ties: usize,
    /// Probe-averaged accuracy.
    pub overall_accuracy: f64,
    /// Mean of per-axiom accuracies.
    pub macro_accuracy: f64,
    pub per_perturbation: BTreeMap<String, Cell>,
    /// Temporal probes carry no valence and are left out.
    pub per_valence: BTreeMap<String, Cell>,
    pub axiom_consistency: f64,
    pub references: Vec<Reference>,
    pub outcomes: Vec<ProbeOutcome>,
}

impl EvalReport {
    pub fn from_outcomes(mut outcomes: Vec<ProbeOutcome>) -> EvalReport {
        outcomes.sort_by(|a, b| a.probe_id.cmp(&b.probe_id));
        let n = outcomes.len();
        let correct = outcomes.iter().filter(|o| o.correct).count();
        let ties = outcomes.iter().filter(|o| o.tie).count();
        let cells = |axis: Axis| -> BTreeMap<String, Cell> {
            breakdown_outcomes(&outcomes, axis)
                .into_iter()
                .map(|r| (r.key, Cell::from_counts(r.correct, r.n)))
                .collect()
        };
        let per_axiom = cells(Axis::Axiom);
        let macro_accuracy = if per_axiom.is_empty() {
            0.0
        } else {
            per_axiom.values().map(|c| c.accuracy).sum::<f64>() / per_axiom.len() as f64
        };
        EvalReport {
            setting: None,
            averaging: Averaging::Probe,
            n,
            correct,
            ties,
            overall_accuracy: Cell::from_counts(correct, n).accuracy,
            macro_accuracy,
            per_perturbation: cells(Axis::Perturbation),
            per_valence: cells(Axis::Valence),
            axiom_consistency: consistency(&outcomes),
            references: vec![Reference::human()],
            outcomes,
        }
    }

    /// Headline number under the chosen averaging.
    pub fn headline(&self) -> f64 {
        match self.averaging {
            Averaging::Probe => self.overall_accuracy,
            Averaging::Axiom => self.macro_accuracy,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    Perturbation,
    Valence,
    Axiom,
    Template,
}

impl Axis {
    pub const ALL: [Axis; 4] = [Axis::Perturbation, Axis::Valence, Axis::Axiom, Axis::Template];

    pub fn name(self) -> &'static str {
        match self {
            Axis::Perturbation => "perturbation",
            Axis::Valence => "valence",
            Axis::Axiom => "axiom",
            Axis::Template => "template",
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Axis {
    type Err = EvalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Axis::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| EvalError::UnknownAxis(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BreakdownRow {
    pub key: String,
    pub n: usize,
    pub correct: usize,
    pub accuracy: f64,
}

fn breakdown_outcomes(outcomes: &[ProbeOutcome], axis: Axis) -> Vec<BreakdownRow> {
    let mut counts: BTreeMap<String, (usize, usize)> = BTreeMap::new();
    for o in outcomes {
        let key = match axis {
            Axis::Perturbation => o.tag.to_string(),
            Axis::Valence => match o.valence {
                Some(v) => v.as_str().to_string(),
                None => continue,
            },
            Axis::Axiom => o.axiom_id.as_str().to_string(),
            Axis::Template => format!("lt{}", o.template_id.number()),
        };
        let e = counts.entry(key).or_default();
        e.0 += usize::from(o.correct);
        e.1 += 1;
    }
    counts
        .into_iter()
        .map(|(key, (correct, n))| BreakdownRow {
            key,
            n,
            correct,
            accuracy: Cell::from_counts(correct, n).accuracy,
        })
        .collect()
}

/// Per-key accuracy along `axis`, recomputed from the probe ledger.
pub fn breakdown(report: &EvalReport, axis: Axis) -> Vec<BreakdownRow> {
    breakdown_outcomes(&report.outcomes, axis)
}

fn consistency(outcomes: &[ProbeOutcome]) -> f64 {
    let mut all_correct: HashMap<&AxiomId, bool> = HashMap::new();
    for o in outcomes {
        *all_correct.entry(&o.axiom_id).or_insert(true) &= o.correct;
    }
    if all_correct.is_empty() {
        return 0.0;
    }
    all_correct.values().filter(|v| **v).count() as f64 / all_correct.len() as f64
}

/// Fraction of axioms whose every probe is answered correctly.
pub fn axiom_consistency(report: &EvalReport) -> f64 {
    consistency(&report.outcomes)
}

fn judge(probe: &Probe, scores: &[f64]) -> (bool, bool) {
    match probe {
        Probe::Mwp(p) => {
            let gold = scores[p.gold_index];
            let other = scores[1 - p.gold_index];
            (gold > other, gold == other)
        }
        Probe::Sp(_) => (scores[0] > scores[1], scores[0] == scores[1]),
    }
}

/// Scores predictions against probes. Every probe needs exactly one
/// prediction with finite scores of the right count; ties are incorrect.
pub fn score(probes: &[Probe], predictions: &[PredictionRecord]) -> Result<EvalReport, EvalError> {
    let mut by_id: HashMap<&str, &Probe> = HashMap::with_capacity(probes.len());
    for p in probes {
        if by_id.insert(p.id(), p).is_some() {
            return Err(EvalError::DuplicateProbe(p.id().to_string()));
        }
    }
    let mut seen: HashSet<&str> = HashSet::with_capacity(predictions.len());
    let mut outcomes = Vec::with_capacity(probes.len());
    for pred in predictions {
        let probe = by_id
            .get(pred.probe_id.as_str())
            .ok_or_else(|| EvalError::IdMismatch(pred.probe_id.clone()))?;
        if !seen.insert(&pred.probe_id) {
            return Err(EvalError::DuplicatePrediction(pred.probe_id.clone()));
        }
        if pred.task != probe.task() {
            return Err(EvalError::InvalidScores {
                probe_id: pred.probe_id.clone(),
                reason: format!("task {:?} does not match the probe", pred.task),
            });
        }
        if pred.scores.len() != probe.arity() || pred.scores.iter().any(|s| !s.is_finite()) {
            return Err(EvalError::InvalidScores {
                probe_id: pred.probe_id.clone(),
                reason: format!("expected {} finite scores", probe.arity()),
            });
        }
        let (correct, tie) = judge(probe, &pred.scores);
        outcomes.push(ProbeOutcome {
            probe_id: pred.probe_id.clone(),
            axiom_id: probe.axiom_id().clone(),
            tag: probe.tag(),
            template_id: probe.template_id(),
            valence: probe.gold_polarity(),
            correct,
            tie,
        });
    }
    if let Some(missing) = probes.iter().find(|p| !seen.contains(p.id())) {
        return Err(EvalError::MissingPrediction(missing.id().to_string()));
    }
    Ok(EvalReport::from_outcomes(outcomes))
}
