use std::fmt::Write as _;

use rayon::prelude::*;

use super::spec::{DeltaSource, ExperimentKind, ExperimentSpec};
use crate::bounds::{remark1_certificate, valid_reports, BoundReport, DeltaOrigin, DeltaValue};
use crate::error::{Error, Result};
use crate::linalg::{norm_frobenius, norm_vec, VectorNorm};
use crate::model::{dominant_row, CoefficientPattern, InstanceRecipe, MatrixEnsemble, MmvInstance};
use crate::pursuit::{somp, PursuitConfig, PursuitTrace};
use crate::rip::{ric_exact, support_delta};
use crate::tolerances::TOLERANCES;

/// Identity checks on closed forms are held to this relative accuracy.
const IDENTITY_TOL: f64 = 1e-12;
/// Slack on the approximate single-dominant-row ratio bound.
const DOMINANCE_TOL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckOutcome {
    pub ok: bool,
    pub value: f64,
}

/// One bound report with the trial it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub trial: usize,
    pub seed: u64,
    pub k: usize,
    pub report: BoundReport,
    /// Negative slack allowed before a bound counts as violated.
    pub slack_tolerance: f64,
    /// One entry per scenario claim; `None` outside that claim's domain.
    pub checks: Vec<Option<CheckOutcome>>,
}

impl ReportRow {
    /// Only certified constants (exact or support-restricted) make the bounds provable.
    pub fn is_certified(&self) -> bool {
        self.report.delta.origin != DeltaOrigin::Hypothetical
    }

    pub fn tightness(&self) -> Option<f64> {
        (self.report.thm1_bound > 0.0).then(|| self.report.exact_metric / self.report.thm1_bound)
    }
}

#[derive(Debug, Clone)]
pub struct TrialOutcome {
    pub trial: usize,
    pub seed: u64,
    pub k: usize,
    pub recovered: bool,
    /// Isometry constants `>= 1` for which no bound applies.
    pub rip_skipped: usize,
    pub rows: Vec<ReportRow>,
    pub trace: PursuitTrace,
    pub instance: MmvInstance,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub trial: usize,
    pub seed: u64,
    pub k: usize,
    pub t: usize,
    pub theorem: u8,
    pub slack: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaseVerdict {
    pub claim: &'static str,
    pub checked: usize,
    pub passed: usize,
    pub min_value: f64,
    pub max_value: f64,
}

impl CaseVerdict {
    pub fn holds(&self) -> bool {
        self.checked > 0 && self.passed == self.checked
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CampaignSummary {
    pub kind: ExperimentKind,
    pub trials: usize,
    pub ks: Vec<usize>,
    pub delta_source: &'static str,
    pub instances: usize,
    pub recovered: usize,
    pub reports: usize,
    pub certified_reports: usize,
    pub rip_skipped: usize,
    pub violations: Vec<Violation>,
    pub thm1_slack_min: f64,
    pub thm1_slack_median: f64,
    pub thm2_slack_min: f64,
    pub thm2_slack_median: f64,
    pub ratio_above_one: f64,
    pub tightness_min: f64,
    pub tightness_median: f64,
    pub tightness_max: f64,
    pub verdicts: Vec<CaseVerdict>,
}

impl CampaignSummary {
    pub fn sound(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_text(&self) -> String {
        let ks: Vec<String> = self.ks.iter().map(|k| k.to_string()).collect();
        let mut out = String::new();
        let _ = writeln!(out, "scenario={}", self.kind);
        let _ = writeln!(out, "trials={}", self.trials);
        let _ = writeln!(out, "K={}", ks.join(","));
        let _ = writeln!(out, "delta_source={}", self.delta_source);
        let _ = writeln!(out, "instances={}", self.instances);
        let _ = writeln!(out, "recovered={}", self.recovered);
        let _ = writeln!(out, "reports={}", self.reports);
        let _ = writeln!(out, "certified_reports={}", self.certified_reports);
        let _ = writeln!(out, "rip_skipped={}", self.rip_skipped);
        let _ = writeln!(out, "violations={}", self.violations.len());
        let _ = writeln!(out, "thm1_slack_min={:e}", self.thm1_slack_min);
        let _ = writeln!(out, "thm1_slack_median={:e}", self.thm1_slack_median);
        let _ = writeln!(out, "thm2_slack_min={:e}", self.thm2_slack_min);
        let _ = writeln!(out, "thm2_slack_median={:e}", self.thm2_slack_median);
        let _ = writeln!(out, "ratio_above_one={:e}", self.ratio_above_one);
        let _ = writeln!(out, "tightness_min={:e}", self.tightness_min);
        let _ = writeln!(out, "tightness_median={:e}", self.tightness_median);
        let _ = writeln!(out, "tightness_max={:e}", self.tightness_max);
        for (i, v) in self.verdicts.iter().enumerate() {
            let _ = writeln!(out, "claim{}={}", i + 1, v.claim);
            let _ = writeln!(
                out,
                "claim{}_result={} checked={} passed={} min={:e} max={:e}",
                i + 1,
                if v.holds() { "pass" } else { "fail" },
                v.checked,
                v.passed,
                v.min_value,
                v.max_value
            );
        }
        out
    }
}

pub fn claims(kind: ExperimentKind) -> &'static [&'static str] {
    match kind {
        ExperimentKind::Case1DominantRow => &[
            "ratio_r > 1 while the dominant row is pending and |J_t| > 1",
            "ratio_r >= sqrt(|J_t|)(1+d)/(1+sqrt(|J_t|)d) - 1e-3 while the dominant row is pending",
        ],
        ExperimentKind::Case2IdenticalMagnitudes => &[
            "ratio_r = sqrt(K)(1+d)/(1+sqrt(|J_t|)d) within 1e-12 relative",
            "ratio_r < 1 when K = 1, |J_t| > 1, d > 0",
        ],
        ExperimentKind::Case3LastIteration => &[
            "ratio_r = ||row||_1/||row||_2 within 1e-12 when |J_t| = 1",
            "ratio_r = sqrt(K) within 1e-12 for an equal-magnitude last row",
        ],
        ExperimentKind::Case4Orthonormal => &[
            "|exact_metric - ||X^J_t||_inf| <= 1e-8 max(1, ||X^J_t||_inf)",
            "ratio_r >= 1 (within 1e-12)",
        ],
        _ => &[],
    }
}

fn recipe(spec: &ExperimentSpec, k: usize, trial: usize) -> InstanceRecipe {
    let (ensemble, pattern) = match spec.kind {
        ExperimentKind::Case1DominantRow => {
            (MatrixEnsemble::Gaussian, CoefficientPattern::dominant_row())
        }
        ExperimentKind::Case2IdenticalMagnitudes => (
            MatrixEnsemble::Gaussian,
            CoefficientPattern::IdenticalMagnitudes { magnitude: 1.0 },
        ),
        ExperimentKind::Case3LastIteration if trial % 2 == 1 => (
            MatrixEnsemble::Gaussian,
            CoefficientPattern::IdenticalMagnitudes { magnitude: 1.0 },
        ),
        ExperimentKind::Case4Orthonormal => (
            MatrixEnsemble::Orthonormal,
            CoefficientPattern::GenericRandom,
        ),
        _ => (MatrixEnsemble::Gaussian, CoefficientPattern::GenericRandom),
    };
    InstanceRecipe {
        m: spec.m,
        n: spec.n,
        k,
        sparsity: spec.sparsity,
        ensemble,
        pattern,
    }
}

/// The isometry constants an instance is evaluated with.
pub fn resolve_deltas(source: &DeltaSource, inst: &MmvInstance) -> Result<Vec<DeltaValue>> {
    Ok(match source {
        DeltaSource::ExactRic => {
            let table = ric_exact(&inst.phi, inst.support.len())?;
            vec![DeltaValue {
                value: table
                    .delta(inst.support.len())
                    .expect("order |S| was computed"),
                origin: DeltaOrigin::ExactRic,
            }]
        }
        DeltaSource::SupportGram => vec![DeltaValue {
            value: support_delta(&inst.phi, &inst.support)?.0.max(0.0),
            origin: DeltaOrigin::SupportGram,
        }],
        DeltaSource::HypotheticalGrid(grid) => grid
            .iter()
            .map(|&value| DeltaValue {
                value,
                origin: DeltaOrigin::Hypothetical,
            })
            .collect(),
    })
}

fn check(ok: bool, value: f64) -> Option<CheckOutcome> {
    Some(CheckOutcome { ok, value })
}

fn scenario_checks(
    kind: ExperimentKind,
    inst: &MmvInstance,
    trace: &PursuitTrace,
    rep: &BoundReport,
    dominant: Option<usize>,
) -> Result<Vec<Option<CheckOutcome>>> {
    let Some(r) = rep.ratio_r else {
        return Ok(vec![None; claims(kind).len()]);
    };
    let d = rep.delta.value;
    let jt = rep.jt.len();
    let sj = (jt as f64).sqrt();
    let k = inst.k();
    Ok(match kind {
        ExperimentKind::Case1DominantRow => {
            let pending = dominant.is_some_and(|j| rep.jt.contains(j));
            let rhs = sj * (1.0 + d) / (1.0 + sj * d);
            vec![
                (pending && jt > 1)
                    .then_some(())
                    .and_then(|_| check(r > 1.0, r)),
                pending
                    .then_some(())
                    .and_then(|_| check(r >= rhs - DOMINANCE_TOL, r - rhs)),
            ]
        }
        ExperimentKind::Case2IdenticalMagnitudes => {
            let closed = (k as f64).sqrt() * (1.0 + d) / (1.0 + sj * d);
            let rel = (r - closed).abs() / closed;
            vec![
                check(rel <= IDENTITY_TOL, rel),
                (k == 1 && jt > 1 && d > 0.0)
                    .then_some(())
                    .and_then(|_| check(r < 1.0, r)),
            ]
        }
        ExperimentKind::Case3LastIteration => {
            if jt != 1 {
                vec![None, None]
            } else {
                let row = inst.x.row(rep.jt.as_slice()[0]);
                let l1l2 = norm_vec(row, VectorNorm::L1) / norm_vec(row, VectorNorm::L2);
                let dev = (r - l1l2).abs();
                let equal = row.iter().all(|v| v.abs() == row[0].abs());
                let dev_k = (r - (k as f64).sqrt()).abs();
                vec![
                    check(dev <= IDENTITY_TOL, dev),
                    equal
                        .then_some(())
                        .and_then(|_| check(dev_k <= IDENTITY_TOL, dev_k)),
                ]
            }
        }
        ExperimentKind::Case4Orthonormal => {
            let cert = remark1_certificate(inst, trace, rep.t)?;
            vec![
                check(cert.holds, cert.gap),
                check(r >= 1.0 - IDENTITY_TOL, r),
            ]
        }
        _ => Vec::new(),
    })
}

/// Samples, solves and evaluates one instance.
pub fn run_trial(spec: &ExperimentSpec, k: usize, trial: usize) -> Result<TrialOutcome> {
    let seed = spec.trial_seed(trial);
    let inst = recipe(spec, k, trial).sample(seed)?;
    let trace = somp(&inst.y, &inst.phi, &PursuitConfig::new(spec.s))?;
    let dominant = match spec.kind {
        ExperimentKind::Case1DominantRow => dominant_row(&inst.x, &inst.support),
        _ => None,
    };
    let slack_tolerance = TOLERANCES.soundness_slack * norm_frobenius(&inst.x).max(1.0);

    let mut rows = Vec::new();
    let mut rip_skipped = 0;
    for delta in resolve_deltas(&spec.delta_source, &inst)? {
        if delta.value >= 1.0 {
            rip_skipped += 1;
            continue;
        }
        for report in valid_reports(&inst, &trace, delta)? {
            let checks = scenario_checks(spec.kind, &inst, &trace, &report, dominant)?;
            rows.push(ReportRow {
                trial,
                seed,
                k,
                report,
                slack_tolerance,
                checks,
            });
        }
    }
    Ok(TrialOutcome {
        trial,
        seed,
        k,
        recovered: trace.final_support == inst.support,
        rip_skipped,
        rows,
        trace,
        instance: inst,
    })
}

fn median(mut v: Vec<f64>) -> f64 {
    if v.is_empty() {
        return f64::NAN;
    }
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    if v.len() % 2 == 1 {
        v[mid]
    } else {
        0.5 * (v[mid - 1] + v[mid])
    }
}

fn min_of(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::NAN, f64::min)
}

fn max_of(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::NAN, f64::max)
}

fn summarize(spec: &ExperimentSpec, outcomes: &[TrialOutcome]) -> CampaignSummary {
    let rows: Vec<&ReportRow> = outcomes.iter().flat_map(|o| &o.rows).collect();
    let certified: Vec<&ReportRow> = rows.iter().copied().filter(|r| r.is_certified()).collect();

    let mut violations = Vec::new();
    for row in &certified {
        for (theorem, slack) in [(1, row.report.thm1_slack()), (2, row.report.thm2_slack())] {
            if slack < -row.slack_tolerance {
                violations.push(Violation {
                    trial: row.trial,
                    seed: row.seed,
                    k: row.k,
                    t: row.report.t,
                    theorem,
                    slack,
                });
            }
        }
    }
    let thm1: Vec<f64> = certified.iter().map(|r| r.report.thm1_slack()).collect();
    let thm2: Vec<f64> = certified.iter().map(|r| r.report.thm2_slack()).collect();
    let tight: Vec<f64> = certified.iter().filter_map(|r| r.tightness()).collect();
    let ratios: Vec<f64> = rows.iter().filter_map(|r| r.report.ratio_r).collect();
    let above = ratios.iter().filter(|r| **r > 1.0).count();

    let verdicts = claims(spec.kind)
        .iter()
        .enumerate()
        .map(|(i, claim)| {
            let outcomes: Vec<CheckOutcome> = rows.iter().filter_map(|r| r.checks[i]).collect();
            let values: Vec<f64> = outcomes.iter().map(|c| c.value).collect();
            CaseVerdict {
                claim,
                checked: outcomes.len(),
                passed: outcomes.iter().filter(|c| c.ok).count(),
                min_value: min_of(&values),
                max_value: max_of(&values),
            }
        })
        .collect();

    CampaignSummary {
        kind: spec.kind,
        trials: spec.trials,
        ks: spec.ks.clone(),
        delta_source: spec.delta_source.name(),
        instances: outcomes.len(),
        recovered: outcomes.iter().filter(|o| o.recovered).count(),
        reports: rows.len(),
        certified_reports: certified.len(),
        rip_skipped: outcomes.iter().map(|o| o.rip_skipped).sum(),
        violations,
        thm1_slack_min: min_of(&thm1),
        thm1_slack_median: median(thm1),
        thm2_slack_min: min_of(&thm2),
        thm2_slack_median: median(thm2),
        ratio_above_one: if ratios.is_empty() {
            f64::NAN
        } else {
            above as f64 / ratios.len() as f64
        },
        tightness_min: min_of(&tight),
        tightness_median: median(tight.clone()),
        tightness_max: max_of(&tight),
        verdicts,
    }
}

/// Runs every `(K, trial)` pair; trials run in parallel, results keep
/// `(K, trial)` order so the output is independent of scheduling.
pub fn run_campaign(spec: &ExperimentSpec) -> Result<(CampaignSummary, Vec<TrialOutcome>)> {
    spec.validate()?;
    match spec.kind {
        ExperimentKind::Figure1Grid | ExperimentKind::Ric => {
            return Err(Error::NotApplicable(format!(
                "{} is not a trial campaign",
                spec.kind
            )))
        }
        _ => {}
    }
    let jobs: Vec<(usize, usize)> = spec
        .ks
        .iter()
        .flat_map(|&k| (0..spec.trials).map(move |t| (k, t)))
        .collect();
    let results: Vec<Result<TrialOutcome>> = jobs
        .par_iter()
        .map(|&(k, t)| {
            run_trial(spec, k, t).map_err(|e| Error::Trial {
                seed: spec.trial_seed(t),
                source: Box::new(e),
            })
        })
        .collect();
    let outcomes = results.into_iter().collect::<Result<Vec<_>>>()?;
    Ok((summarize(spec, &outcomes), outcomes))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(kind: ExperimentKind) -> ExperimentSpec {
        let mut spec = ExperimentSpec::defaults(kind);
        spec.trials = 12;
        spec.m = 24;
        spec.n = if kind == ExperimentKind::Case4Orthonormal {
            24
        } else {
            40
        };
        spec.s = 4;
        spec.sparsity = 4;
        spec
    }

    #[test]
    fn median_and_extremes() {
        assert_eq!(median(vec![3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(vec![4.0, 1.0, 2.0, 3.0]), 2.5);
        assert!(median(vec![]).is_nan());
        assert_eq!(min_of(&[2.0, -1.0]), -1.0);
        assert_eq!(max_of(&[2.0, -1.0]), 2.0);
    }

    #[test]
    fn soundness_small_campaign() {
        let mut spec = small(ExperimentKind::SoundnessCampaign);
        spec.ks = vec![1, 3];
        let (summary, outcomes) = run_campaign(&spec).unwrap();
        assert_eq!(outcomes.len(), 24);
        assert!(summary.sound(), "{:?}", summary.violations);
        assert!(summary.thm1_slack_min >= -1e-10);
        assert!(summary.tightness_min >= 1.0 - 1e-12);
        assert!(summary.verdicts.is_empty());
    }

    #[test]
    fn exact_ric_campaign_on_a_small_dictionary() {
        let mut spec = small(ExperimentKind::SoundnessCampaign);
        spec.m = 10;
        spec.n = 14;
        spec.s = 3;
        spec.sparsity = 3;
        spec.ks = vec![2];
        spec.delta_source = DeltaSource::ExactRic;
        let (summary, outcomes) = run_campaign(&spec).unwrap();
        assert!(summary.sound());
        for o in &outcomes {
            for row in &o.rows {
                assert_eq!(row.report.delta.origin, DeltaOrigin::ExactRic);
                let (local, _) = support_delta(&o.instance.phi, &o.instance.support).unwrap();
                assert!(local <= row.report.delta.value + 1e-12);
            }
        }
    }

    #[test]
    fn case_verdicts_hold_on_small_runs() {
        for kind in [
            ExperimentKind::Case1DominantRow,
            ExperimentKind::Case2IdenticalMagnitudes,
            ExperimentKind::Case3LastIteration,
            ExperimentKind::Case4Orthonormal,
        ] {
            let (summary, _) = run_campaign(&small(kind)).unwrap();
            assert!(summary.sound(), "{kind}");
            for v in &summary.verdicts {
                assert!(v.holds(), "{kind}: {v:?}");
            }
        }
    }

    #[test]
    fn hypothetical_grid_multiplies_reports() {
        let mut spec = small(ExperimentKind::Case2IdenticalMagnitudes);
        spec.delta_source = DeltaSource::HypotheticalGrid(vec![0.1, 0.5]);
        let (summary, outcomes) = run_campaign(&spec).unwrap();
        assert_eq!(summary.certified_reports, 0);
        assert!(summary.verdicts.iter().all(|v| v.holds()));
        for o in &outcomes {
            assert_eq!(o.rows.len() % 2, 0);
        }
    }

    #[test]
    fn figure1_is_not_a_campaign() {
        let spec = ExperimentSpec::defaults(ExperimentKind::Figure1Grid);
        assert!(matches!(run_campaign(&spec), Err(Error::NotApplicable(_))));
    }
}
