//! Scenario campaigns over random instances, the closed-form ratio grid, and
//! their CSV / plot-script output.

mod campaign;
mod figure1;
mod output;
mod spec;

pub use campaign::{
    resolve_deltas, run_campaign, run_trial, CampaignSummary, CaseVerdict, ReportRow, TrialOutcome,
    Violation,
};
pub use figure1::{
    figure1_grid, identical_rows_ratio, predicted_crossing, Crossing, Figure1Grid, Figure1Point,
};
pub use output::{write_campaign, write_figure1, write_ric};
pub use spec::{DeltaSource, ExperimentKind, ExperimentSpec};
