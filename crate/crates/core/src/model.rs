//! Multiple-measurement-vector problem instances `Y = Phi X` with a known
//! row support, and the random ensembles used to sample them.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{
    norm_frobenius, norm_vec, read_matrix, write_matrix, DenseMatrix, HouseholderQr, VectorNorm,
};

/// Name of the generator recorded in instance metadata.
pub const RNG_ALGORITHM: &str = "ChaCha8";

const STREAM_MATRIX: u64 = 0;
const STREAM_COEFFICIENTS: u64 = 1;
const STREAM_SUPPORT: u64 = 2;

/// A ChaCha8 generator on an independent stream of `seed`.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Strictly increasing set of column indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Support {
    indices: Vec<usize>,
}

impl Support {
    /// Sorts `indices`; rejects duplicates and indices `>= n`.
    pub fn new(mut indices: Vec<usize>, n: usize) -> Result<Self> {
        indices.sort_unstable();
        if let Some(w) = indices.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Domain(format!("duplicate support index {}", w[0])));
        }
        if let Some(&bad) = indices.last().filter(|&&j| j >= n) {
            return Err(Error::Domain(format!(
                "support index {bad} out of range for n = {n}"
            )));
        }
        Ok(Self { indices })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.indices
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.indices.iter().copied()
    }

    pub fn contains(&self, j: usize) -> bool {
        self.indices.binary_search(&j).is_ok()
    }

    pub fn is_subset_of(&self, other: &Support) -> bool {
        self.iter().all(|j| other.contains(j))
    }

    pub fn is_disjoint(&self, other: &Support) -> bool {
        self.iter().all(|j| !other.contains(j))
    }

    /// `self \ other`.
    pub fn difference(&self, other: &Support) -> Support {
        Support {
            indices: self.iter().filter(|&j| !other.contains(j)).collect(),
        }
    }

    pub fn with_index(&self, j: usize) -> Support {
        let mut indices = self.indices.clone();
        if let Err(pos) = indices.binary_search(&j) {
            indices.insert(pos, j);
        }
        Support { indices }
    }
}

impl fmt::Display for Support {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.indices.iter().map(|j| j.to_string()).collect();
        write!(f, "{}", parts.join(";"))
    }
}

/// Generation tag carried by an instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scenario {
    DominantRow,
    IdenticalMagnitudes,
    GenericRandom,
    Orthonormal,
}

impl Scenario {
    pub fn as_str(self) -> &'static str {
        match self {
            Scenario::DominantRow => "DominantRow",
            Scenario::IdenticalMagnitudes => "IdenticalMagnitudes",
            Scenario::GenericRandom => "GenericRandom",
            Scenario::Orthonormal => "Orthonormal",
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "DominantRow" => Scenario::DominantRow,
            "IdenticalMagnitudes" => Scenario::IdenticalMagnitudes,
            "GenericRandom" => Scenario::GenericRandom,
            "Orthonormal" => Scenario::Orthonormal,
            other => return Err(Error::Parse(format!("unknown scenario {other:?}"))),
        })
    }
}

/// Row pattern of the coefficient matrix on its support.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CoefficientPattern {
    /// One support row whose entries each exceed `factor` times the summed
    /// magnitudes of all other rows. `factor >= 1e3`.
    DominantRow { factor: f64 },
    /// `|X_jk| = magnitude` on the support, with i.i.d. random signs.
    IdenticalMagnitudes { magnitude: f64 },
    /// i.i.d. standard normal rows.
    GenericRandom,
}

impl CoefficientPattern {
    pub const DEFAULT_DOMINANCE: f64 = 1e6;

    pub fn dominant_row() -> Self {
        CoefficientPattern::DominantRow {
            factor: Self::DEFAULT_DOMINANCE,
        }
    }

    pub fn scenario(self) -> Scenario {
        match self {
            CoefficientPattern::DominantRow { .. } => Scenario::DominantRow,
            CoefficientPattern::IdenticalMagnitudes { .. } => Scenario::IdenticalMagnitudes,
            CoefficientPattern::GenericRandom => Scenario::GenericRandom,
        }
    }
}

/// How the measurement matrix is drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixEnsemble {
    /// i.i.d. `N(0, 1/m)` entries.
    Gaussian,
    /// Gaussian columns rescaled to unit `l2` norm.
    GaussianUnitColumns,
    /// Orthonormal columns (`n <= m`).
    Orthonormal,
}

fn gaussian(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> DenseMatrix {
    let data = (0..rows * cols)
        .map(|_| rng.sample::<f64, _>(StandardNormal))
        .collect();
    DenseMatrix::new(rows, cols, data).expect("normal samples are finite")
}

/// `m x n` matrix with i.i.d. standard normal entries scaled by `1/sqrt(m)`.
pub fn gen_matrix_gaussian(m: usize, n: usize, seed: u64) -> Result<DenseMatrix> {
    if m == 0 || n == 0 {
        return Err(Error::Domain(format!(
            "matrix dimensions must be positive, got {m}x{n}"
        )));
    }
    let mut rng = rng_for(seed, STREAM_MATRIX);
    Ok(gaussian(m, n, &mut rng).scale(1.0 / (m as f64).sqrt()))
}

/// Same draw as [`gen_matrix_gaussian`], then every column normalised to unit length.
pub fn gen_matrix_gaussian_unit(m: usize, n: usize, seed: u64) -> Result<DenseMatrix> {
    let phi = gen_matrix_gaussian(m, n, seed)?;
    let norms: Vec<f64> = (0..n)
        .map(|j| norm_vec(&phi.column(j), VectorNorm::L2))
        .collect();
    DenseMatrix::from_fn(m, n, |i, j| phi.get(i, j) / norms[j])
}

/// `m x n` matrix with orthonormal columns: the Q factor of a Gaussian draw.
pub fn gen_matrix_orthonormal(m: usize, n: usize, seed: u64) -> Result<DenseMatrix> {
    if n > m {
        return Err(Error::dim(
            "gen_matrix_orthonormal",
            format!("{n} orthonormal columns do not fit in dimension {m}"),
        ));
    }
    if n == 0 {
        return Err(Error::Domain("need at least one column".into()));
    }
    let mut rng = rng_for(seed, STREAM_MATRIX);
    let g = gaussian(m, n, &mut rng);
    Ok(HouseholderQr::new(&g)?.thin_q())
}

pub fn gen_matrix(ensemble: MatrixEnsemble, m: usize, n: usize, seed: u64) -> Result<DenseMatrix> {
    match ensemble {
        MatrixEnsemble::Gaussian => gen_matrix_gaussian(m, n, seed),
        MatrixEnsemble::GaussianUnitColumns => gen_matrix_gaussian_unit(m, n, seed),
        MatrixEnsemble::Orthonormal => gen_matrix_orthonormal(m, n, seed),
    }
}

/// Uniformly random support of the given size.
pub fn random_support(n: usize, size: usize, seed: u64) -> Result<Support> {
    if size > n {
        return Err(Error::Domain(format!(
            "support size {size} exceeds n = {n}"
        )));
    }
    let mut rng = rng_for(seed, STREAM_SUPPORT);
    Support::new(index::sample(&mut rng, n, size).into_vec(), n)
}

fn nonzero_normal(rng: &mut ChaCha8Rng) -> f64 {
    loop {
        let v: f64 = rng.sample(StandardNormal);
        if v != 0.0 {
            return v;
        }
    }
}

fn random_sign(rng: &mut ChaCha8Rng) -> f64 {
    if rng.random::<bool>() {
        1.0
    } else {
        -1.0
    }
}

/// `n x K` coefficient matrix whose nonzero rows are exactly `support`.
pub fn gen_coefficients(
    n: usize,
    k: usize,
    support: &Support,
    pattern: CoefficientPattern,
    seed: u64,
) -> Result<DenseMatrix> {
    if support.is_empty() {
        return Err(Error::Domain(
            "coefficient support must be non-empty".into(),
        ));
    }
    if k == 0 {
        return Err(Error::Domain("need at least one measurement vector".into()));
    }
    if let Some(bad) = support.iter().find(|&j| j >= n) {
        return Err(Error::Domain(format!(
            "support index {bad} out of range for n = {n}"
        )));
    }
    let mut rng = rng_for(seed, STREAM_COEFFICIENTS);
    let mut x = DenseMatrix::zeros(n, k);
    match pattern {
        CoefficientPattern::GenericRandom => {
            for j in support.iter() {
                for c in 0..k {
                    x.set(j, c, nonzero_normal(&mut rng));
                }
            }
        }
        CoefficientPattern::IdenticalMagnitudes { magnitude } => {
            if !(magnitude > 0.0 && magnitude.is_finite()) {
                return Err(Error::Domain(format!(
                    "magnitude must be positive, got {magnitude}"
                )));
            }
            for j in support.iter() {
                for c in 0..k {
                    x.set(j, c, random_sign(&mut rng) * magnitude);
                }
            }
        }
        CoefficientPattern::DominantRow { factor } => {
            if !(factor >= 1e3 && factor.is_finite()) {
                return Err(Error::Domain(format!(
                    "dominance factor must be >= 1e3, got {factor}"
                )));
            }
            let dominant = support.as_slice()[rng.random_range(0..support.len())];
            let mut others = 0.0;
            for j in support.iter().filter(|&j| j != dominant) {
                for c in 0..k {
                    let v = nonzero_normal(&mut rng);
                    others += v.abs();
                    x.set(j, c, v);
                }
            }
            let floor = factor * others.max(1.0);
            for c in 0..k {
                let magnitude = floor * (1.0 + rng.random::<f64>());
                x.set(dominant, c, random_sign(&mut rng) * magnitude);
            }
        }
    }
    Ok(x)
}

/// Index of the row with the largest `l1` norm among `support` (lowest index on ties).
pub fn dominant_row(x: &DenseMatrix, support: &Support) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for j in support.iter() {
        let v = norm_vec(x.row(j), VectorNorm::L1);
        if best.is_none_or(|(_, b)| v > b) {
            best = Some((j, v));
        }
    }
    best.map(|(j, _)| j)
}

/// Union of the per-column supports of `x`: its nonzero rows.
pub fn row_support(x: &DenseMatrix) -> Support {
    Support {
        indices: (0..x.rows())
            .filter(|&j| x.row(j).iter().any(|v| *v != 0.0))
            .collect(),
    }
}

/// A noiseless MMV problem with its ground truth.
#[derive(Debug, Clone, PartialEq)]
pub struct MmvInstance {
    pub phi: DenseMatrix,
    pub x: DenseMatrix,
    pub y: DenseMatrix,
    pub support: Support,
    pub seed: u64,
    pub scenario: Scenario,
}

/// Computes `Y = Phi X` and extracts the support of `X`.
pub fn assemble_instance(phi: DenseMatrix, x: DenseMatrix) -> Result<MmvInstance> {
    let y = phi.matmul(&x)?;
    let support = row_support(&x);
    Ok(MmvInstance {
        phi,
        x,
        y,
        support,
        seed: 0,
        scenario: Scenario::GenericRandom,
    })
}

impl MmvInstance {
    pub fn with_metadata(mut self, seed: u64, scenario: Scenario) -> Self {
        self.seed = seed;
        self.scenario = scenario;
        self
    }

    pub fn m(&self) -> usize {
        self.phi.rows()
    }

    pub fn n(&self) -> usize {
        self.phi.cols()
    }

    pub fn k(&self) -> usize {
        self.x.cols()
    }

    /// Rows of `X` indexed by `rows`, i.e. `X^J`.
    pub fn x_rows(&self, rows: &Support) -> DenseMatrix {
        self.x
            .select_rows(rows.as_slice())
            .expect("support indices are < n")
    }

    pub fn phi_columns(&self, cols: &Support) -> DenseMatrix {
        self.phi
            .select_columns(cols.as_slice())
            .expect("support indices are < n")
    }

    /// Checks all instance invariants.
    pub fn validate(&self) -> Result<()> {
        if self.phi.cols() != self.x.rows() || self.y.shape() != (self.phi.rows(), self.x.cols()) {
            return Err(Error::dim("MmvInstance", "phi, x and y shapes disagree"));
        }
        let y = self.phi.matmul(&self.x)?;
        let err = norm_frobenius(&y.sub(&self.y)?);
        if err > 1e-12 * norm_frobenius(&y).max(f64::MIN_POSITIVE) && err > 0.0 {
            return Err(Error::Consistency(format!("||Y - Phi X||_F = {err:e}")));
        }
        if row_support(&self.x) != self.support {
            return Err(Error::Consistency(format!(
                "recorded support {} differs from the nonzero rows of X {}",
                self.support,
                row_support(&self.x)
            )));
        }
        Ok(())
    }
}

/// Everything needed to sample one instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InstanceRecipe {
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub sparsity: usize,
    pub ensemble: MatrixEnsemble,
    pub pattern: CoefficientPattern,
}

impl InstanceRecipe {
    /// Samples matrix, support and coefficients from independent streams of `seed`.
    pub fn sample(&self, seed: u64) -> Result<MmvInstance> {
        let phi = gen_matrix(self.ensemble, self.m, self.n, seed)?;
        let support = random_support(self.n, self.sparsity, seed)?;
        let x = gen_coefficients(self.n, self.k, &support, self.pattern, seed)?;
        let scenario = match self.ensemble {
            MatrixEnsemble::Orthonormal => Scenario::Orthonormal,
            _ => self.pattern.scenario(),
        };
        Ok(assemble_instance(phi, x)?.with_metadata(seed, scenario))
    }
}

/// Writes `phi.txt`, `x.txt`, `y.txt` and `meta.txt` into `dir`.
pub fn write_instance(dir: &Path, inst: &MmvInstance) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    write_matrix(&dir.join("phi.txt"), &inst.phi)?;
    write_matrix(&dir.join("x.txt"), &inst.x)?;
    write_matrix(&dir.join("y.txt"), &inst.y)?;
    let meta = format!(
        "m={}\nn={}\nK={}\ns={}\nseed={}\nscenario={}\nrng={}\n",
        inst.m(),
        inst.n(),
        inst.k(),
        inst.support.len(),
        inst.seed,
        inst.scenario,
        RNG_ALGORITHM
    );
    let path = dir.join("meta.txt");
    std::fs::write(&path, meta).map_err(|e| Error::io(path, e))
}

/// Parses `key=value` lines; blank lines and `#` comments are skipped.
pub fn parse_key_values(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("line {}: expected key=value", lineno + 1)))?;
        out.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(out)
}

pub fn read_instance(dir: &Path) -> Result<MmvInstance> {
    let phi = read_matrix(&dir.join("phi.txt"))?;
    let x = read_matrix(&dir.join("x.txt"))?;
    let y = read_matrix(&dir.join("y.txt"))?;
    let path = dir.join("meta.txt");
    let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    let meta = parse_key_values(&text)?;
    let get = |key: &str| {
        meta.get(key)
            .ok_or_else(|| Error::Parse(format!("meta.txt lacks {key}")))
    };
    let seed = get("seed")?
        .parse()
        .map_err(|_| Error::Parse("bad seed".into()))?;
    let scenario = get("scenario")?.parse()?;
    let inst = MmvInstance {
        support: row_support(&x),
        phi,
        x,
        y,
        seed,
        scenario,
    };
    let declared: usize = get("s")?
        .parse()
        .map_err(|_| Error::Parse("bad s".into()))?;
    if declared != inst.support.len() {
        return Err(Error::Consistency(format!(
            "meta.txt declares s = {declared}, X has {} nonzero rows",
            inst.support.len()
        )));
    }
    inst.validate()?;
    Ok(inst)
}
