//! Simultaneous orthogonal matching pursuit and its p-SOMP variants.
//!
//! Each iteration picks the atom `j` maximising `||R^T phi_j||_p`, adds it to
//! the estimated support, and recomputes the residual as the component of `Y`
//! orthogonal to the span of the selected atoms. With a single measurement
//! vector this is plain OMP.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::linalg::{norm_frobenius, project_onto_complement, row_norms, DenseMatrix, VectorNorm};
use crate::model::Support;

pub type SelectionNorm = VectorNorm;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieBreak {
    #[default]
    LowestIndex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PursuitConfig {
    pub selection_norm: SelectionNorm,
    /// Number of iterations `s`, i.e. the size of the returned support.
    pub iterations: usize,
    pub tie_break: TieBreak,
}

impl PursuitConfig {
    /// 1-SOMP with `iterations` steps.
    pub fn new(iterations: usize) -> Self {
        Self {
            selection_norm: VectorNorm::L1,
            iterations,
            tie_break: TieBreak::LowestIndex,
        }
    }

    pub fn with_norm(mut self, p: SelectionNorm) -> Self {
        self.selection_norm = p;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(Error::Domain("pursuit needs at least one iteration".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    pub t: usize,
    pub selected_atom: usize,
    /// `||(R^(t))^T phi_j||_p` for every atom `j`.
    pub metric_values: Vec<f64>,
    pub support_after: Support,
    /// `||R^(t+1)||_F`, the residual left after this iteration.
    pub residual_frobenius: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PursuitTrace {
    pub records: Vec<IterationRecord>,
    pub final_support: Support,
    /// `R^(0) = Y, R^(1), ...`; one more entry than `records`.
    pub residuals: Vec<DenseMatrix>,
}

impl PursuitTrace {
    pub fn iterations(&self) -> usize {
        self.records.len()
    }

    pub fn residual(&self, t: usize) -> Option<&DenseMatrix> {
        self.residuals.get(t)
    }

    /// `S_t`: the atoms selected before iteration `t`.
    pub fn support_before(&self, t: usize) -> Option<Support> {
        match t {
            0 => Some(Support::empty()),
            t if t <= self.records.len() => Some(self.records[t - 1].support_after.clone()),
            _ => None,
        }
    }

    pub fn selected_atoms(&self) -> Vec<usize> {
        self.records.iter().map(|r| r.selected_atom).collect()
    }

    /// Flag per `t` in `0..=iterations`: whether `S_t` is contained in `truth`.
    pub fn correct_before(&self, truth: &Support) -> Vec<bool> {
        (0..=self.records.len())
            .map(|t| {
                self.support_before(t)
                    .is_some_and(|s| s.is_subset_of(truth))
            })
            .collect()
    }

    /// One CSV line per iteration, split by whether atoms belong to `truth`.
    pub fn to_csv(&self, truth: &Support) -> String {
        let mut out = String::from(
            "t,j_t,metric_max_correct,metric_max_incorrect,residual_frobenius,correct_so_far\n",
        );
        for r in &self.records {
            let (mut best_in, mut best_out) = (f64::NAN, f64::NAN);
            for (j, v) in r.metric_values.iter().enumerate() {
                let slot = if truth.contains(j) {
                    &mut best_in
                } else {
                    &mut best_out
                };
                if slot.is_nan() || *v > *slot {
                    *slot = *v;
                }
            }
            let _ = writeln!(
                out,
                "{},{},{:e},{:e},{:e},{}",
                r.t,
                r.selected_atom,
                best_in,
                best_out,
                r.residual_frobenius,
                r.support_after.is_subset_of(truth)
            );
        }
        out
    }
}

/// `||R^T phi_j||_p` for every column `j` of `phi`.
pub fn selection_metric(r: &DenseMatrix, phi: &DenseMatrix, p: SelectionNorm) -> Result<Vec<f64>> {
    let corr = phi.t_matmul(r)?;
    Ok(row_norms(&corr, p))
}

/// `(I - P) Y` with `P` projecting onto the span of `phi`'s `support` columns.
pub fn residual_update(
    y: &DenseMatrix,
    phi: &DenseMatrix,
    support: &Support,
) -> Result<DenseMatrix> {
    if support.is_empty() {
        return Err(Error::Domain(
            "residual update needs a non-empty support".into(),
        ));
    }
    let phi_s = phi.select_columns(support.as_slice())?;
    project_onto_complement(&phi_s, y)
}

fn argmax(values: &[f64], tie_break: TieBreak) -> usize {
    match tie_break {
        TieBreak::LowestIndex => {
            let mut best = 0;
            for (j, v) in values.iter().enumerate() {
                if *v > values[best] {
                    best = j;
                }
            }
            best
        }
    }
}

/// Runs exactly `config.iterations` SOMP steps on `Y = Phi X`.
pub fn somp(y: &DenseMatrix, phi: &DenseMatrix, config: &PursuitConfig) -> Result<PursuitTrace> {
    config.validate()?;
    if y.rows() != phi.rows() {
        return Err(Error::dim(
            "somp",
            format!("Y has {} rows, Phi has {}", y.rows(), phi.rows()),
        ));
    }
    if phi.cols() == 0 {
        return Err(Error::dim("somp", "dictionary has no atoms"));
    }

    let mut trace = PursuitTrace {
        records: Vec::with_capacity(config.iterations),
        final_support: Support::empty(),
        residuals: vec![y.clone()],
    };
    for t in 0..config.iterations {
        let r = trace.residuals.last().expect("R^(0) is always present");
        let metric_values = selection_metric(r, phi, config.selection_norm)?;
        let atom = argmax(&metric_values, config.tie_break);
        if trace.final_support.contains(atom) {
            return Err(Error::Reselection {
                atom,
                t,
                trace: Box::new(trace),
            });
        }
        let support_after = trace.final_support.with_index(atom);
        let residual = match residual_update(y, phi, &support_after) {
            Ok(r) => r,
            Err(e) => {
                return Err(Error::PursuitSingular {
                    t,
                    trace: Box::new(trace),
                    source: Box::new(e),
                })
            }
        };
        trace.records.push(IterationRecord {
            t,
            selected_atom: atom,
            metric_values,
            support_after: support_after.clone(),
            residual_frobenius: norm_frobenius(&residual),
        });
        trace.final_support = support_after;
        trace.residuals.push(residual);
    }
    Ok(trace)
}
