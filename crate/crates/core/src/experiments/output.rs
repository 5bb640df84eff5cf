use std::fs;
use std::path::Path;

use super::campaign::{CampaignSummary, TrialOutcome};
use super::figure1::Figure1Grid;
use crate::bounds::BoundReport;
use crate::error::{Error, Result};
use crate::model::write_instance;
use crate::rip::RicTable;

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn create_dir(path: &Path) -> Result<()> {
    fs::create_dir_all(path).map_err(|e| Error::io(path, e))
}

/// Per-trial files are only produced for campaigns below this size.
const PER_TRIAL_LIMIT: usize = 1000;

const CAMPAIGN_PLOT: &str = "\
set datafile separator ','
set key autotitle columnhead
set xlabel 't'
set ylabel 'value'
set logscale y
set title 'exact metric and lower bounds'
plot 'all_reports.csv' using 5:8 with points pt 7 title 'exact', \\
     '' using 5:11 with points pt 1 title 'thm1 bound', \\
     '' using 5:12 with points pt 2 title 'thm2 bound'
";

const FIGURE1_PLOT: &str = "\
set datafile separator ','
set xlabel 'K'
set ylabel 'r'
set logscale x 2
set key outside right
set title 'bound ratio for rows of identical magnitude'
plot for [jt in '1 2 4 9 16'] 'figure1.csv' using (column(2) == jt+0 && column(3) == 0.3 ? column(1) : 1/0):4 \\
     with linespoints title sprintf('|J|=%s, d=0.3', jt), \\
     1 with lines dashtype 2 linecolor rgb 'red' title 'r = 1'
";

/// Writes the campaign directory.
///
/// Layout: `summary.txt`, `violations.csv`, `all_reports.csv`, `plot.gp`,
/// and, for campaigns of at most 1000 instances, `reports/` and `traces/`
/// with one file per trial. `instances/` is added when requested.
pub fn write_campaign(
    dir: &Path,
    summary: &CampaignSummary,
    outcomes: &[TrialOutcome],
    save_instances: bool,
) -> Result<()> {
    create_dir(dir)?;
    write(&dir.join("summary.txt"), &summary.to_text())?;

    let mut violations = String::from("trial,seed,K,t,theorem,slack\n");
    for v in &summary.violations {
        violations.push_str(&format!(
            "{},{},{},{},{},{:e}\n",
            v.trial, v.seed, v.k, v.t, v.theorem, v.slack
        ));
    }
    write(&dir.join("violations.csv"), &violations)?;

    let mut all = format!("trial,seed,K,delta_source,{}\n", BoundReport::CSV_HEADER);
    for o in outcomes {
        for row in &o.rows {
            all.push_str(&format!(
                "{},{},{},{},{}\n",
                row.trial,
                row.seed,
                row.k,
                row.report.delta.origin,
                row.report.csv_row()
            ));
        }
    }
    write(&dir.join("all_reports.csv"), &all)?;
    write(&dir.join("plot.gp"), CAMPAIGN_PLOT)?;

    if outcomes.len() <= PER_TRIAL_LIMIT {
        let reports = dir.join("reports");
        let traces = dir.join("traces");
        create_dir(&reports)?;
        create_dir(&traces)?;
        for o in outcomes {
            let stem = format!("K{}_trial{:04}", o.k, o.trial);
            let rows: Vec<BoundReport> = o.rows.iter().map(|r| r.report.clone()).collect();
            write(
                &reports.join(format!("{stem}.csv")),
                &crate::bounds::reports_to_csv(&rows),
            )?;
            write(
                &traces.join(format!("{stem}.csv")),
                &o.trace.to_csv(&o.instance.support),
            )?;
        }
    }
    if save_instances {
        for o in outcomes {
            write_instance(
                &dir.join("instances")
                    .join(format!("K{}_trial{:04}", o.k, o.trial)),
                &o.instance,
            )?;
        }
    }
    Ok(())
}

/// Writes `figure1.csv`, `figure1_crossings.csv` and `figure1.gp`.
pub fn write_figure1(dir: &Path, grid: &Figure1Grid) -> Result<()> {
    create_dir(dir)?;
    write(&dir.join("figure1.csv"), &grid.to_csv())?;
    write(&dir.join("figure1_crossings.csv"), &grid.crossings_csv())?;
    write(&dir.join("figure1.gp"), FIGURE1_PLOT)
}

pub fn write_ric(dir: &Path, table: &RicTable) -> Result<()> {
    create_dir(dir)?;
    write(&dir.join("ric.csv"), &table.to_csv())
}
