//! Exact restricted isometry constants by exhaustive subset enumeration.
//!
//! `delta_s` is the smallest `delta` with
//! `(1 - delta) ||u||^2 <= ||Phi u||^2 <= (1 + delta) ||u||^2` for all
//! `s`-sparse `u`; equivalently the largest deviation from 1 of any eigenvalue
//! of any `s x s` principal Gram submatrix `Phi_T^T Phi_T`.

use std::fmt::{self, Write as _};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{project_onto_complement, sym_eigen, DenseMatrix};
use crate::model::Support;
use crate::tolerances::TOLERANCES;

/// Which side of the isometry sandwich attains `delta`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BindingSide {
    /// `1 - lambda_min`.
    Lower,
    /// `lambda_max - 1`.
    Upper,
}

impl fmt::Display for BindingSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BindingSide::Lower => "lower",
            BindingSide::Upper => "upper",
        })
    }
}

/// Extreme eigenvalues of a Gram-type matrix and the deviation they imply.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GramSpectrum {
    pub lambda_min: f64,
    pub lambda_max: f64,
}

impl GramSpectrum {
    pub fn deviation(&self) -> (f64, BindingSide) {
        let lower = 1.0 - self.lambda_min;
        let upper = self.lambda_max - 1.0;
        if lower >= upper {
            (lower, BindingSide::Lower)
        } else {
            (upper, BindingSide::Upper)
        }
    }

    /// `1 - delta <= lambda_min <= lambda_max <= 1 + delta`, up to `slack`.
    pub fn within(&self, delta: f64, slack: f64) -> bool {
        self.lambda_min >= 1.0 - delta - slack && self.lambda_max <= 1.0 + delta + slack
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RicOrder {
    pub s: usize,
    pub delta: f64,
    pub side: BindingSide,
    /// Sorted column indices of a subset attaining `delta`.
    pub witness: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RicTable {
    /// `orders[s - 1]` holds `delta_s`.
    pub orders: Vec<RicOrder>,
}

impl RicTable {
    pub fn deltas(&self) -> Vec<f64> {
        self.orders.iter().map(|o| o.delta).collect()
    }

    pub fn delta(&self, s: usize) -> Option<f64> {
        s.checked_sub(1)
            .and_then(|i| self.orders.get(i))
            .map(|o| o.delta)
    }

    pub fn s_max(&self) -> usize {
        self.orders.len()
    }

    /// Orders at which the RIP hypothesis `delta < 1` fails.
    pub fn violations(&self) -> Vec<usize> {
        self.orders
            .iter()
            .filter(|o| o.delta >= 1.0)
            .map(|o| o.s)
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("s,delta,binding_side,witness_indices\n");
        for o in &self.orders {
            let witness: Vec<String> = o.witness.iter().map(|j| j.to_string()).collect();
            let _ = writeln!(
                out,
                "{},{:e},{},{}",
                o.s,
                o.delta,
                o.side,
                witness.join(";")
            );
        }
        out
    }
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Visits the `k`-subsets of `0..limit` in colexicographic order.
fn for_each_colex(k: usize, limit: usize, mut visit: impl FnMut(&[usize])) {
    if k > limit {
        return;
    }
    let mut c: Vec<usize> = (0..k).collect();
    loop {
        visit(&c);
        let mut i = 0;
        while i < k
            && (if i + 1 < k {
                c[i] + 1 == c[i + 1]
            } else {
                c[i] + 1 == limit
            })
        {
            i += 1;
        }
        if i == k {
            return;
        }
        c[i] += 1;
        for (l, v) in c.iter_mut().enumerate().take(i) {
            *v = l;
        }
    }
}

fn principal(gram: &DenseMatrix, idx: &[usize]) -> DenseMatrix {
    let s = idx.len();
    let mut data = Vec::with_capacity(s * s);
    for &a in idx {
        for &b in idx {
            data.push(gram.get(a, b));
        }
    }
    DenseMatrix::from_raw(s, s, data)
}

fn spectrum(m: &DenseMatrix) -> Result<GramSpectrum> {
    let e = sym_eigen(m)?;
    Ok(GramSpectrum {
        lambda_min: e.min(),
        lambda_max: e.max(),
    })
}

#[derive(Debug, Clone)]
struct Candidate {
    delta: f64,
    side: BindingSide,
    witness: Vec<usize>,
}

fn best_of_order(gram: &DenseMatrix, s: usize) -> Result<Candidate> {
    let n = gram.rows();
    // colex order groups subsets by their largest element, one block per worker
    let blocks: Vec<Result<Option<Candidate>>> = ((s - 1)..n)
        .into_par_iter()
        .map(|top| {
            let mut best: Option<Candidate> = None;
            let mut failure = None;
            let mut idx = vec![0; s];
            for_each_colex(s - 1, top, |head| {
                if failure.is_some() {
                    return;
                }
                idx[..s - 1].copy_from_slice(head);
                idx[s - 1] = top;
                match spectrum(&principal(gram, &idx)) {
                    Ok(spec) => {
                        let (delta, side) = spec.deviation();
                        if best.as_ref().is_none_or(|b| delta > b.delta) {
                            best = Some(Candidate {
                                delta,
                                side,
                                witness: idx.clone(),
                            });
                        }
                    }
                    Err(e) => failure = Some(e),
                }
            });
            match failure {
                Some(e) => Err(e),
                None => Ok(best),
            }
        })
        .collect();

    let mut best: Option<Candidate> = None;
    for block in blocks {
        if let Some(c) = block? {
            if best.as_ref().is_none_or(|b| c.delta > b.delta) {
                best = Some(c);
            }
        }
    }
    best.ok_or_else(|| Error::Consistency(format!("no subsets of size {s}")))
}

/// Exact `delta_1 .. delta_{s_max}` of `phi` with witnessing subsets.
///
/// Only subsets of size exactly `s` are enumerated for `delta_s`; nesting of
/// principal submatrices makes smaller subsets redundant, and the returned
/// table is checked to be non-decreasing.
pub fn ric_exact(phi: &DenseMatrix, s_max: usize) -> Result<RicTable> {
    let n = phi.cols();
    if s_max == 0 || s_max > n {
        return Err(Error::Domain(format!("order {s_max} must lie in 1..={n}")));
    }
    let required = (1..=s_max).map(|s| binomial(n, s)).max().unwrap_or(0);
    if required > TOLERANCES.ric_budget {
        return Err(Error::Budget {
            required,
            budget: TOLERANCES.ric_budget,
        });
    }
    let gram = phi.gram();
    let mut orders: Vec<RicOrder> = Vec::with_capacity(s_max);
    for s in 1..=s_max {
        let best = best_of_order(&gram, s)?;
        let mut delta = best.delta;
        if let Some(prev) = orders.last() {
            if delta < prev.delta - TOLERANCES.ric_monotonicity {
                return Err(Error::Consistency(format!(
                    "delta_{s} = {delta:e} < delta_{} = {:e}",
                    s - 1,
                    prev.delta
                )));
            }
            // rounding-level dips are clamped so the table stays monotone
            delta = delta.max(prev.delta);
        }
        orders.push(RicOrder {
            s,
            delta,
            side: best.side,
            witness: best.witness,
        });
    }
    Ok(RicTable { orders })
}

/// Extreme eigenvalues of `Phi_J^T (I - P) Phi_J`, where `P` projects onto the
/// span of the `projector_support` atoms and `J = support`.
pub fn gram_spectrum_bounds(
    phi: &DenseMatrix,
    support: &Support,
    projector_support: &Support,
) -> Result<GramSpectrum> {
    if support.is_empty() {
        return Err(Error::Domain("gram spectrum of an empty support".into()));
    }
    if !support.is_disjoint(projector_support) {
        return Err(Error::Domain(format!(
            "support {support} and projector support {projector_support} overlap"
        )));
    }
    let phi_j = phi.select_columns(support.as_slice())?;
    let phi_p = phi.select_columns(projector_support.as_slice())?;
    let b = project_onto_complement(&phi_p, &phi_j)?;
    let spec = spectrum(&b.gram())?;
    if spec.lambda_min <= TOLERANCES.rank * spec.lambda_max.max(f64::MIN_POSITIVE) {
        return Err(Error::Singular {
            column: support.len() - 1,
            cols: support.len(),
        });
    }
    Ok(spec)
}

/// Deviation from isometry of the single Gram matrix `Phi_S^T Phi_S`.
///
/// This is at most `delta_{|S|}` and is all the bound theorems consume.
pub fn support_delta(phi: &DenseMatrix, support: &Support) -> Result<(f64, BindingSide)> {
    if support.is_empty() {
        return Err(Error::Domain(
            "isometry constant of an empty support".into(),
        ));
    }
    let phi_s = phi.select_columns(support.as_slice())?;
    Ok(spectrum(&phi_s.gram())?.deviation())
}
