use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::parse_key_values;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExperimentKind {
    Case1DominantRow,
    Case2IdenticalMagnitudes,
    Case3LastIteration,
    Case4Orthonormal,
    SoundnessCampaign,
    Figure1Grid,
    Ric,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Case1DominantRow => "case1",
            ExperimentKind::Case2IdenticalMagnitudes => "case2",
            ExperimentKind::Case3LastIteration => "case3",
            ExperimentKind::Case4Orthonormal => "case4",
            ExperimentKind::SoundnessCampaign => "soundness",
            ExperimentKind::Figure1Grid => "figure1",
            ExperimentKind::Ric => "ric",
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "case1" => ExperimentKind::Case1DominantRow,
            "case2" => ExperimentKind::Case2IdenticalMagnitudes,
            "case3" => ExperimentKind::Case3LastIteration,
            "case4" => ExperimentKind::Case4Orthonormal,
            "soundness" => ExperimentKind::SoundnessCampaign,
            "figure1" => ExperimentKind::Figure1Grid,
            "ric" => ExperimentKind::Ric,
            other => return Err(Error::Parse(format!("unknown scenario {other:?}"))),
        })
    }
}

/// Where the isometry constant of each instance comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum DeltaSource {
    /// `delta_{|S|}` by exhaustive enumeration (small `n` only).
    ExactRic,
    /// Deviation of `Phi_S^T Phi_S` on the true support.
    SupportGram,
    /// Fixed hypothetical values; every instance is evaluated once per value.
    HypotheticalGrid(Vec<f64>),
}

impl DeltaSource {
    pub fn name(&self) -> &'static str {
        match self {
            DeltaSource::ExactRic => "exact",
            DeltaSource::SupportGram => "support",
            DeltaSource::HypotheticalGrid(_) => "grid",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub kind: ExperimentKind,
    pub m: usize,
    pub n: usize,
    /// Number of measurement vectors; each value is run as its own sub-campaign.
    pub ks: Vec<usize>,
    /// SOMP iterations.
    pub s: usize,
    /// Size of the true support; defaults to `s`.
    pub sparsity: usize,
    pub trials: usize,
    pub seed: u64,
    pub delta_source: DeltaSource,
    pub output_dir: Option<PathBuf>,
    pub save_instances: bool,
    /// Figure 1 sweep: `K = 1..=k_max`.
    pub k_max: usize,
    pub jt_sizes: Vec<usize>,
    pub delta_grid: Vec<f64>,
}

pub(crate) fn parse_list<T: FromStr>(text: &str, what: &str) -> Result<Vec<T>> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse()
                .map_err(|_| Error::Parse(format!("bad {what} value {t:?}")))
        })
        .collect()
}

fn parse_one<T: FromStr>(text: &str, what: &str) -> Result<T> {
    text.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad {what} value {text:?}")))
}

impl ExperimentSpec {
    pub const FIGURE1_JT_SIZES: [usize; 5] = [1, 2, 4, 9, 16];
    pub const FIGURE1_DELTAS: [f64; 4] = [0.1, 0.3, 0.5, 0.7];

    pub fn defaults(kind: ExperimentKind) -> Self {
        let mut spec = Self {
            kind,
            m: 32,
            n: 64,
            ks: vec![4],
            s: 5,
            sparsity: 5,
            trials: 100,
            seed: 0,
            delta_source: DeltaSource::SupportGram,
            output_dir: None,
            save_instances: false,
            k_max: 64,
            jt_sizes: Self::FIGURE1_JT_SIZES.to_vec(),
            delta_grid: Self::FIGURE1_DELTAS.to_vec(),
        };
        match kind {
            ExperimentKind::Case2IdenticalMagnitudes => spec.ks = vec![1],
            ExperimentKind::Case4Orthonormal => spec.n = 32,
            ExperimentKind::SoundnessCampaign => {
                spec.ks = vec![1, 4, 16];
                spec.trials = 1000;
            }
            ExperimentKind::Ric => {
                spec.m = 8;
                spec.n = 12;
                spec.s = 4;
                spec.sparsity = 4;
                spec.delta_source = DeltaSource::ExactRic;
            }
            _ => {}
        }
        spec
    }

    /// Applies `key=value` overrides (the config file format).
    pub fn apply_config(&mut self, text: &str) -> Result<()> {
        let kv = parse_key_values(text)?;
        let mut sparsity_set = false;
        let mut source: Option<String> = None;
        for (key, value) in &kv {
            match key.as_str() {
                "scenario" => {
                    let kind: ExperimentKind = value.parse()?;
                    if kind != self.kind {
                        return Err(Error::Parse(format!(
                            "config is for {kind}, command is {}",
                            self.kind
                        )));
                    }
                }
                "m" => self.m = parse_one(value, key)?,
                "n" => self.n = parse_one(value, key)?,
                "K" | "k" => self.ks = parse_list(value, key)?,
                "s" => self.s = parse_one(value, key)?,
                "sparsity" => {
                    self.sparsity = parse_one(value, key)?;
                    sparsity_set = true;
                }
                "trials" => self.trials = parse_one(value, key)?,
                "seed" => self.seed = parse_one(value, key)?,
                "delta_source" => source = Some(value.clone()),
                "delta_grid" => self.delta_grid = parse_list(value, key)?,
                "out" | "output_dir" => self.output_dir = Some(PathBuf::from(value)),
                "save_instances" => self.save_instances = parse_one(value, key)?,
                "k_max" => self.k_max = parse_one(value, key)?,
                "jt_sizes" => self.jt_sizes = parse_list(value, key)?,
                other => return Err(Error::Parse(format!("unknown config key {other:?}"))),
            }
        }
        if !sparsity_set && kv.contains_key("s") {
            self.sparsity = self.s;
        }
        if let Some(src) = source {
            self.set_delta_source(&src)?;
        }
        Ok(())
    }

    pub fn set_delta_source(&mut self, name: &str) -> Result<()> {
        self.delta_source = match name {
            "exact" => DeltaSource::ExactRic,
            "support" => DeltaSource::SupportGram,
            "grid" => DeltaSource::HypotheticalGrid(self.delta_grid.clone()),
            other => return Err(Error::Parse(format!("unknown delta source {other:?}"))),
        };
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Domain(msg));
        if self.m == 0 {
            return fail("m must be >= 1".into());
        }
        if self.trials == 0 {
            return fail("trials must be >= 1".into());
        }
        if self.s == 0 || self.s > self.n {
            return fail(format!("s = {} must lie in 1..=n = {}", self.s, self.n));
        }
        if self.sparsity == 0 || self.sparsity > self.n {
            return fail(format!(
                "sparsity {} must lie in 1..=n = {}",
                self.sparsity, self.n
            ));
        }
        if self.ks.is_empty() || self.ks.contains(&0) {
            return fail("every K must be >= 1".into());
        }
        if self.kind == ExperimentKind::Case4Orthonormal && self.n > self.m {
            return fail(format!(
                "orthonormal atoms need n <= m, got n = {} > m = {}",
                self.n, self.m
            ));
        }
        if let DeltaSource::HypotheticalGrid(grid) = &self.delta_source {
            if grid.is_empty() {
                return fail("empty delta grid".into());
            }
        }
        let grid_in_range = self.delta_grid.iter().all(|d| (0.0..1.0).contains(d));
        if !grid_in_range {
            return fail("delta grid values must lie in [0, 1)".into());
        }
        if self.kind == ExperimentKind::Figure1Grid
            && (self.k_max == 0 || self.jt_sizes.contains(&0))
        {
            return fail("figure1 needs k_max >= 1 and |J_t| >= 1".into());
        }
        Ok(())
    }

    /// Seed of trial `index` (0-based).
    pub fn trial_seed(&self, index: usize) -> u64 {
        self.seed.wrapping_add(index as u64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_overrides() {
        let mut spec = ExperimentSpec::defaults(ExperimentKind::SoundnessCampaign);
        spec.apply_config(
            "# campaign\nscenario=soundness\nm=16\nn=24\nK=1, 2\ns=3\ntrials=7\nseed=42\ndelta_grid=0.2,0.4\ndelta_source=grid\n",
        )
        .unwrap();
        assert_eq!(
            (
                spec.m,
                spec.n,
                spec.s,
                spec.sparsity,
                spec.trials,
                spec.seed
            ),
            (16, 24, 3, 3, 7, 42)
        );
        assert_eq!(spec.ks, vec![1, 2]);
        assert_eq!(
            spec.delta_source,
            DeltaSource::HypotheticalGrid(vec![0.2, 0.4])
        );
        spec.validate().unwrap();
        assert_eq!(spec.trial_seed(3), 45);
    }

    #[test]
    fn config_errors() {
        let mut spec = ExperimentSpec::defaults(ExperimentKind::Case1DominantRow);
        assert!(spec.apply_config("bogus=1").is_err());
        assert!(spec.apply_config("m=x").is_err());
        assert!(spec.apply_config("scenario=case2").is_err());
        assert!(spec.apply_config("no equals sign").is_err());
    }

    #[test]
    fn validation() {
        let mut spec = ExperimentSpec::defaults(ExperimentKind::Case4Orthonormal);
        spec.validate().unwrap();
        spec.n = 40;
        assert!(spec.validate().is_err());
        let mut spec = ExperimentSpec::defaults(ExperimentKind::Case1DominantRow);
        spec.trials = 0;
        assert!(spec.validate().is_err());
        spec.trials = 1;
        spec.s = 65;
        assert!(spec.validate().is_err());
        spec.s = 5;
        spec.delta_grid = vec![1.0];
        assert!(spec.validate().is_err());
    }
}
