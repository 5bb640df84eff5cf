use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use somp_bounds::experiments::{
    figure1_grid, run_campaign, write_campaign, write_figure1, write_ric, ExperimentKind,
    ExperimentSpec,
};
use somp_bounds::linalg::read_matrix;
use somp_bounds::model::gen_matrix_gaussian;
use somp_bounds::rip::ric_exact;
use somp_bounds::{Error, Result};

#[derive(Parser)]
#[command(
    name = "somp-bounds",
    version,
    about = "SOMP correlation bounds: scenarios, soundness campaigns and RIC tables"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// One dominant row in the coefficient matrix
    Case1(Common),
    /// Rows of identical magnitude
    Case2(Common),
    /// The last correct iteration, |J_t| = 1
    Case3(Common),
    /// Orthonormal atoms
    Case4(Common),
    /// Bound ratio grid for rows of identical magnitude
    Figure1(Common),
    /// Randomized soundness campaign for both lower bounds
    Soundness(Common),
    /// Exact restricted isometry constants by enumeration
    Ric {
        #[command(flatten)]
        common: Common,
        /// Dictionary file ("rows cols" header, then row-major entries); random Gaussian if absent
        #[arg(long)]
        phi: Option<PathBuf>,
    },
}

#[derive(Args, Clone)]
struct Common {
    /// key=value file applied before the flags below
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    /// Comma-separated list of measurement-vector counts
    #[arg(long = "K", value_delimiter = ',')]
    k: Option<Vec<usize>>,
    /// Pursuit iterations (and RIC order for `ric`)
    #[arg(long)]
    s: Option<usize>,
    /// Support size; follows --s when omitted
    #[arg(long)]
    sparsity: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// exact | support | grid
    #[arg(long)]
    delta_source: Option<String>,
    #[arg(long, value_delimiter = ',')]
    delta_grid: Option<Vec<f64>>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    save_instances: bool,
    #[arg(long)]
    k_max: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    jt_sizes: Option<Vec<usize>>,
}

impl Common {
    fn spec(&self, kind: ExperimentKind) -> Result<ExperimentSpec> {
        let mut spec = ExperimentSpec::defaults(kind);
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
                path: path.clone(),
                source: e,
            })?;
            spec.apply_config(&text)?;
        }
        if let Some(v) = self.m {
            spec.m = v;
        }
        if let Some(v) = self.n {
            spec.n = v;
        }
        if let Some(v) = &self.k {
            spec.ks = v.clone();
        }
        if let Some(v) = self.s {
            spec.s = v;
            spec.sparsity = v;
        }
        if let Some(v) = self.sparsity {
            spec.sparsity = v;
        }
        if let Some(v) = self.trials {
            spec.trials = v;
        }
        if let Some(v) = self.seed {
            spec.seed = v;
        }
        if let Some(v) = &self.delta_grid {
            spec.delta_grid = v.clone();
        }
        if let Some(v) = &self.delta_source {
            spec.set_delta_source(v)?;
        } else if let somp_bounds::experiments::DeltaSource::HypotheticalGrid(_) = spec.delta_source
        {
            spec.set_delta_source("grid")?;
        }
        if let Some(v) = &self.out {
            spec.output_dir = Some(v.clone());
        }
        spec.save_instances |= self.save_instances;
        if let Some(v) = self.k_max {
            spec.k_max = v;
        }
        if let Some(v) = &self.jt_sizes {
            spec.jt_sizes = v.clone();
        }
        spec.validate()?;
        Ok(spec)
    }
}

fn run(cli: Cli) -> Result<bool> {
    let (kind, common, phi) = match cli.command {
        Command::Case1(c) => (ExperimentKind::Case1DominantRow, c, None),
        Command::Case2(c) => (ExperimentKind::Case2IdenticalMagnitudes, c, None),
        Command::Case3(c) => (ExperimentKind::Case3LastIteration, c, None),
        Command::Case4(c) => (ExperimentKind::Case4Orthonormal, c, None),
        Command::Figure1(c) => (ExperimentKind::Figure1Grid, c, None),
        Command::Soundness(c) => (ExperimentKind::SoundnessCampaign, c, None),
        Command::Ric { common, phi } => (ExperimentKind::Ric, common, phi),
    };
    let spec = common.spec(kind)?;
    match kind {
        ExperimentKind::Figure1Grid => {
            let grid = figure1_grid(spec.k_max, &spec.jt_sizes, &spec.delta_grid)?;
            print!("{}", grid.crossings_csv());
            println!(
                "max_relative_closed_form_error={:e}",
                grid.max_closed_form_error()
            );
            if let Some(dir) = &spec.output_dir {
                write_figure1(dir, &grid)?;
            }
            Ok(true)
        }
        ExperimentKind::Ric => {
            let phi = match phi {
                Some(path) => read_matrix(&path)?,
                None => gen_matrix_gaussian(spec.m, spec.n, spec.seed)?,
            };
            let table = ric_exact(&phi, spec.s.min(phi.cols()))?;
            print!("{}", table.to_csv());
            for s in table.violations() {
                eprintln!("warning: delta_{s} >= 1, no restricted isometry at order {s}");
            }
            if let Some(dir) = &spec.output_dir {
                write_ric(dir, &table)?;
            }
            Ok(true)
        }
        _ => {
            let (summary, outcomes) = run_campaign(&spec)?;
            print!("{}", summary.to_text());
            for v in &summary.violations {
                eprintln!(
                    "violation: seed={} K={} t={} theorem={} slack={:e}",
                    v.seed, v.k, v.t, v.theorem, v.slack
                );
            }
            if let Some(dir) = &spec.output_dir {
                write_campaign(dir, &summary, &outcomes, spec.save_instances)?;
            }
            Ok(summary.sound())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
