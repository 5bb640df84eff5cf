//! Lower bounds on the largest correct-atom SOMP metric `||Phi_S^T R^(t)||_{inf->inf}`.
//!
//! Two bounds are evaluated at every iteration `t` where only correct atoms
//! have been picked (`S_t ⊂ S`), with `J_t = S \ S_t`:
//!
//! * the infinity-norm bound `psi * tau` with
//!   `psi = (1 - d)(1 + d) / (1 + sqrt(|J_t|) d)` and `tau = ||X^{J_t}||_{inf->inf}`,
//! * the Frobenius bound `(1 - d) ||X^{J_t}||_F / sqrt(|J_t|)`,
//!
//! where `d` is a restricted isometry constant of order `|S|`. Their ratio
//! `r` tells which of the two is stronger.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{
    least_squares, norm_frobenius, norm_inf_to_inf, project_onto_complement, sym_eigen, DenseMatrix,
};
use crate::model::{MmvInstance, Support};
use crate::pursuit::PursuitTrace;
use crate::tolerances::TOLERANCES;

/// Upper bound on `||A||_{inf->inf}` for a symmetric `d x d` matrix from its
/// spectrum: `|alpha| + sqrt(d) * max_j |lambda_j - alpha|`.
pub fn lemma1_bound(a: &DenseMatrix, alpha: f64) -> Result<f64> {
    let eig = sym_eigen(a)?;
    let spread = eig
        .eigenvalues
        .iter()
        .map(|l| (l - alpha).abs())
        .fold(0.0, f64::max);
    Ok(alpha.abs() + (a.rows() as f64).sqrt() * spread)
}

/// The centring point used for inverse Gram matrices: the midpoint of
/// `[1/(1+d), 1/(1-d)]`, which equals `1/((1+d)(1-d))`.
pub fn lemma1_alpha(delta: f64) -> f64 {
    1.0 / ((1.0 + delta) * (1.0 - delta))
}

fn check_delta(delta: f64) -> Result<()> {
    if delta.is_nan() || delta < 0.0 {
        return Err(Error::Domain(format!(
            "isometry constant must be >= 0, got {delta}"
        )));
    }
    if delta >= 1.0 {
        return Err(Error::RipViolation { delta });
    }
    Ok(())
}

fn check_iteration(s_size: usize, t: usize, x_jt: &DenseMatrix) -> Result<usize> {
    if t >= s_size {
        return Err(Error::Domain(format!(
            "iteration {t} leaves no correct atom to find in a support of size {s_size}"
        )));
    }
    let jt = s_size - t;
    if x_jt.rows() != jt {
        return Err(Error::dim(
            "bound",
            format!("X^J_t has {} rows, expected |S| - t = {jt}", x_jt.rows()),
        ));
    }
    Ok(jt)
}

/// `psi`, `tau` and their product.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Theorem1Parts {
    pub psi: f64,
    pub tau: f64,
    pub bound: f64,
}

pub fn theorem1_psi(delta: f64, jt_size: usize) -> f64 {
    (1.0 - delta) * (1.0 + delta) / (1.0 + (jt_size as f64).sqrt() * delta)
}

/// Infinity-norm lower bound for iteration `t` of a support of size `s_size`.
pub fn theorem1_bound(
    delta: f64,
    s_size: usize,
    t: usize,
    x_jt: &DenseMatrix,
) -> Result<Theorem1Parts> {
    check_delta(delta)?;
    let jt = check_iteration(s_size, t, x_jt)?;
    let psi = theorem1_psi(delta, jt);
    let tau = norm_inf_to_inf(x_jt);
    Ok(Theorem1Parts {
        psi,
        tau,
        bound: psi * tau,
    })
}

/// Frobenius lower bound `(1 - d) ||X^{J_t}||_F / sqrt(|S| - t)`.
pub fn theorem2_bound(delta: f64, s_size: usize, t: usize, x_jt: &DenseMatrix) -> Result<f64> {
    check_delta(delta)?;
    let jt = check_iteration(s_size, t, x_jt)?;
    Ok((1.0 - delta) * norm_frobenius(x_jt) / (jt as f64).sqrt())
}

/// Ratio of the two bounds together with its a-priori bracket.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioBracket {
    pub ratio: f64,
    /// `(1 + d) / (1 + sqrt(|J|) d)`.
    pub lower: f64,
    /// `sqrt(K) sqrt(|J|) (1 + d) / (1 + sqrt(|J|) d)`.
    pub middle: f64,
    /// `sqrt(K) (1 + d) / d`; equals `middle` when `d = 0`.
    pub upper: f64,
}

impl RatioBracket {
    pub fn contains_ratio(&self, rel_tol: f64) -> bool {
        let slack = rel_tol * self.ratio.abs().max(1.0);
        self.lower - slack <= self.ratio
            && self.ratio <= self.middle + slack
            && self.middle <= self.upper + slack
    }
}

pub fn ratio_r(
    delta: f64,
    s_size: usize,
    jt_size: usize,
    x_jt: &DenseMatrix,
) -> Result<RatioBracket> {
    check_delta(delta)?;
    if jt_size == 0 || jt_size > s_size {
        return Err(Error::Domain(format!(
            "|J_t| = {jt_size} must lie in 1..={s_size}"
        )));
    }
    if x_jt.rows() != jt_size {
        return Err(Error::dim(
            "ratio_r",
            format!("X^J_t has {} rows, expected {jt_size}", x_jt.rows()),
        ));
    }
    let fro = norm_frobenius(x_jt);
    if fro == 0.0 {
        return Err(Error::Domain("ratio undefined for a zero X^J_t".into()));
    }
    let sj = (jt_size as f64).sqrt();
    let sk = (x_jt.cols() as f64).sqrt();
    let factor = sj * (1.0 + delta) / (1.0 + sj * delta);
    let lower = (1.0 + delta) / (1.0 + sj * delta);
    let middle = sk * factor;
    let upper = if delta > 0.0 {
        sk * (1.0 + delta) / delta
    } else {
        middle
    };
    Ok(RatioBracket {
        ratio: factor * norm_inf_to_inf(x_jt) / fro,
        lower,
        middle,
        upper,
    })
}

/// Where the isometry constant fed to the bounds came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeltaOrigin {
    /// `delta_{|S|}` by exhaustive enumeration.
    ExactRic,
    /// Deviation of the single Gram matrix `Phi_S^T Phi_S`; never exceeds `delta_{|S|}`.
    SupportGram,
    /// A user-supplied value, not tied to the instance.
    Hypothetical,
}

impl fmt::Display for DeltaOrigin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DeltaOrigin::ExactRic => "exact_ric",
            DeltaOrigin::SupportGram => "support_gram",
            DeltaOrigin::Hypothetical => "hypothetical",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaValue {
    pub value: f64,
    pub origin: DeltaOrigin,
}

/// Exact metric, both bounds and their ratio at one iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub t: usize,
    pub jt: Support,
    pub exact_metric: f64,
    pub thm1_psi: f64,
    pub thm1_tau: f64,
    pub thm1_bound: f64,
    pub thm2_bound: f64,
    /// `None` when the Frobenius bound vanishes.
    pub ratio_r: Option<f64>,
    pub ratio_lower: f64,
    pub ratio_middle: f64,
    pub ratio_upper: f64,
    pub delta: DeltaValue,
}

impl BoundReport {
    pub const CSV_HEADER: &'static str =
        "t,Jt_size,delta,exact_metric,thm1_psi,thm1_tau,thm1_bound,thm2_bound,ratio_r,ratio_lower,ratio_upper";

    pub fn csv_row(&self) -> String {
        let ratio = self
            .ratio_r
            .map_or_else(|| "NaN".to_string(), |r| format!("{r:e}"));
        format!(
            "{},{},{:e},{:e},{:e},{:e},{:e},{:e},{},{:e},{:e}",
            self.t,
            self.jt.len(),
            self.delta.value,
            self.exact_metric,
            self.thm1_psi,
            self.thm1_tau,
            self.thm1_bound,
            self.thm2_bound,
            ratio,
            self.ratio_lower,
            self.ratio_upper
        )
    }

    /// `exact_metric - thm1_bound`.
    pub fn thm1_slack(&self) -> f64 {
        self.exact_metric - self.thm1_bound
    }

    pub fn thm2_slack(&self) -> f64 {
        self.exact_metric - self.thm2_bound
    }
}

pub fn reports_to_csv(reports: &[BoundReport]) -> String {
    let mut out = String::from(BoundReport::CSV_HEADER);
    out.push('\n');
    for r in reports {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}

/// `||Phi_S^T R^(t)||_{inf->inf}`, the largest SOMP metric among correct atoms.
pub fn exact_metric(inst: &MmvInstance, trace: &PursuitTrace, t: usize) -> Result<f64> {
    let r = trace.residual(t).ok_or_else(|| {
        Error::Domain(format!(
            "iteration {t} outside trace of {} iterations",
            trace.iterations()
        ))
    })?;
    if inst.support.is_empty() {
        return Ok(0.0);
    }
    Ok(norm_inf_to_inf(
        &inst.phi_columns(&inst.support).t_matmul(r)?,
    ))
}

/// `S_t` and `J_t`, provided only correct atoms were picked before `t`.
pub fn correct_split(
    inst: &MmvInstance,
    trace: &PursuitTrace,
    t: usize,
) -> Result<(Support, Support)> {
    let st = trace.support_before(t).ok_or_else(|| {
        Error::Domain(format!(
            "iteration {t} outside trace of {} iterations",
            trace.iterations()
        ))
    })?;
    if !st.is_subset_of(&inst.support) {
        return Err(Error::NotApplicable(format!(
            "S_{t} = {{{st}}} contains an incorrect atom"
        )));
    }
    let jt = inst.support.difference(&st);
    Ok((st, jt))
}

/// Evaluates everything at iteration `t`; requires `S_t ⊂ S` and `t < |S|`.
pub fn bound_report(
    inst: &MmvInstance,
    trace: &PursuitTrace,
    t: usize,
    delta: DeltaValue,
) -> Result<BoundReport> {
    let (_, jt) = correct_split(inst, trace, t)?;
    let s_size = inst.support.len();
    let x_jt = inst.x_rows(&jt);
    let thm1 = theorem1_bound(delta.value, s_size, t, &x_jt)?;
    let thm2 = theorem2_bound(delta.value, s_size, t, &x_jt)?;
    let bracket = ratio_r(delta.value, s_size, jt.len(), &x_jt)?;
    Ok(BoundReport {
        t,
        exact_metric: exact_metric(inst, trace, t)?,
        thm1_psi: thm1.psi,
        thm1_tau: thm1.tau,
        thm1_bound: thm1.bound,
        thm2_bound: thm2,
        ratio_r: (thm2 > 0.0).then_some(bracket.ratio),
        ratio_lower: bracket.lower,
        ratio_middle: bracket.middle,
        ratio_upper: bracket.upper,
        jt,
        delta,
    })
}

/// Reports for every iteration (including `t = 0`) with `S_t ⊂ S` and `t < |S|`.
pub fn valid_reports(
    inst: &MmvInstance,
    trace: &PursuitTrace,
    delta: DeltaValue,
) -> Result<Vec<BoundReport>> {
    let flags = trace.correct_before(&inst.support);
    let limit = inst.support.len().min(trace.iterations() + 1);
    (0..limit)
        .filter(|&t| flags[t])
        .map(|t| bound_report(inst, trace, t, delta))
        .collect()
}

/// Intermediate quantities of the infinity-norm bound's derivation, for
/// `C = Phi_J^T (I - P^(t)) Phi_J`:
/// `exact >= tau / ||C^-1|| >= tau / lemma >= tau / closed_form = psi * tau`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProofChain {
    /// `C`, symmetric positive definite when `S_t ⊂ S` and `d < 1`.
    pub gram: DenseMatrix,
    pub inverse_inf_norm: f64,
    pub lemma_value: f64,
    pub closed_form: f64,
    pub inverse_eigen_min: f64,
    pub inverse_eigen_max: f64,
}

pub fn theorem1_chain(
    inst: &MmvInstance,
    trace: &PursuitTrace,
    t: usize,
    delta: f64,
) -> Result<ProofChain> {
    check_delta(delta)?;
    let (st, jt) = correct_split(inst, trace, t)?;
    if jt.is_empty() {
        return Err(Error::Domain(format!(
            "no correct atom left at iteration {t}"
        )));
    }
    let phi_j = inst.phi_columns(&jt);
    let b = project_onto_complement(&inst.phi_columns(&st), &phi_j)?;
    let gram = b.gram();
    let inv = least_squares(&gram, &DenseMatrix::identity(jt.len()))?;
    let inv = inv.add(&inv.transpose())?.scale(0.5);
    let eig = sym_eigen(&inv)?;
    let closed_form = (1.0 + (jt.len() as f64).sqrt() * delta) / ((1.0 + delta) * (1.0 - delta));
    Ok(ProofChain {
        inverse_inf_norm: norm_inf_to_inf(&inv),
        lemma_value: lemma1_bound(&inv, lemma1_alpha(delta))?,
        closed_form,
        inverse_eigen_min: eig.min(),
        inverse_eigen_max: eig.max(),
        gram,
    })
}

/// Outcome of the sharpness check for orthonormal supports.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SharpnessCertificate {
    /// `|exact_metric - ||X^{J_t}||_{inf->inf}|`.
    pub gap: f64,
    pub holds: bool,
}

/// With orthonormal atoms on `S` the infinity-norm bound is attained:
/// `||Phi_S^T R^(t)||_{inf->inf} = ||X^{J_t}||_{inf->inf}`.
pub fn remark1_certificate(
    inst: &MmvInstance,
    trace: &PursuitTrace,
    t: usize,
) -> Result<SharpnessCertificate> {
    let phi_s = inst.phi_columns(&inst.support);
    let off = norm_frobenius(
        &phi_s
            .gram()
            .sub(&DenseMatrix::identity(inst.support.len()))?,
    );
    if off > TOLERANCES.orthonormal {
        return Err(Error::NotApplicable(format!(
            "atoms on the support are not orthonormal: ||Phi_S^T Phi_S - I||_F = {off:e}"
        )));
    }
    let (_, jt) = correct_split(inst, trace, t)?;
    let tau = norm_inf_to_inf(&inst.x_rows(&jt));
    let gap = (exact_metric(inst, trace, t)? - tau).abs();
    Ok(SharpnessCertificate {
        gap,
        holds: gap <= TOLERANCES.sharpness * tau.max(1.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{assemble_instance, CoefficientPattern, InstanceRecipe, MatrixEnsemble};
    use crate::pursuit::{somp, PursuitConfig};
    use crate::rip::support_delta;

    fn recipe(ensemble: MatrixEnsemble, pattern: CoefficientPattern, k: usize) -> InstanceRecipe {
        InstanceRecipe {
            m: 20,
            n: if ensemble == MatrixEnsemble::Orthonormal {
                20
            } else {
                30
            },
            k,
            sparsity: 4,
            ensemble,
            pattern,
        }
    }

    #[test]
    fn lemma1_examples() {
        assert_eq!(lemma1_bound(&DenseMatrix::identity(4), 1.0).unwrap(), 1.0);
        let a = DenseMatrix::diag(&[1.0, 3.0]).unwrap();
        let b = lemma1_bound(&a, 2.0).unwrap();
        assert!((b - (2.0 + 2f64.sqrt())).abs() < 1e-14);
        assert!(b >= norm_inf_to_inf(&a));
        let asym = DenseMatrix::from_rows(&[[1.0, 1.0], [0.0, 1.0]]).unwrap();
        assert!(matches!(
            lemma1_bound(&asym, 0.0),
            Err(Error::Asymmetric { .. })
        ));
    }

    #[test]
    fn alpha_is_the_midpoint() {
        for d in [0.0, 0.1, 0.5, 0.9] {
            let mid = 0.5 * (1.0 / (1.0 + d) + 1.0 / (1.0 - d));
            assert!((lemma1_alpha(d) - mid).abs() <= 1e-15 * mid);
        }
    }

    #[test]
    fn theorem1_examples() {
        let x = DenseMatrix::from_rows(&[[1.0, -1.0], [0.5, 0.0]]).unwrap();
        let p = theorem1_bound(0.0, 3, 1, &x).unwrap();
        assert_eq!(p.bound, norm_inf_to_inf(&x));

        let row = DenseMatrix::from_rows(&[[0.4, 0.2]]).unwrap();
        let p = theorem1_bound(0.3, 5, 4, &row).unwrap();
        assert!((p.psi - 0.7).abs() < 1e-15);

        // |J| = 4, d = 0.5, tau = 2: psi = 0.75 / 2
        let x = DenseMatrix::from_rows(&[[2.0], [1.0], [0.5], [-1.0]]).unwrap();
        let p = theorem1_bound(0.5, 4, 0, &x).unwrap();
        assert_eq!(p.psi, 0.375);
        assert_eq!(p.tau, 2.0);
        assert_eq!(p.bound, 0.75);

        assert!(matches!(
            theorem1_bound(1.0, 4, 0, &x),
            Err(Error::RipViolation { .. })
        ));
        assert!(matches!(
            theorem1_bound(-0.1, 4, 0, &x),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            theorem1_bound(0.1, 4, 4, &x),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            theorem1_bound(0.1, 4, 1, &x),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn theorem2_examples() {
        let row = DenseMatrix::from_rows(&[[0.6, 0.8]]).unwrap();
        assert!((theorem2_bound(0.0, 1, 0, &row).unwrap() - 1.0).abs() < 1e-15);
        // single vector at t = 0: (1 - d) ||x_S||_2 / sqrt(|S|)
        let x = DenseMatrix::new(3, 1, vec![1.0, 2.0, 2.0]).unwrap();
        let b = theorem2_bound(0.2, 3, 0, &x).unwrap();
        assert!((b - 0.8 * 3.0 / 3f64.sqrt()).abs() < 1e-15);
        assert!(theorem2_bound(1.5, 3, 0, &x).is_err());
    }

    #[test]
    fn ratio_examples() {
        // last atom: ratio is the row's l1 / l2
        let row = DenseMatrix::from_rows(&[[3.0, -4.0]]).unwrap();
        let r = ratio_r(0.4, 5, 1, &row).unwrap();
        assert!((r.ratio - 7.0 / 5.0).abs() < 1e-15);
        assert!(r.contains_ratio(1e-12));

        // identical magnitudes give sqrt(K)(1 + d)/(1 + sqrt(|J|) d)
        let x = DenseMatrix::from_rows(&[
            [1.0, -1.0, 1.0],
            [-1.0, -1.0, 1.0],
            [1.0, 1.0, 1.0],
            [1.0, -1.0, -1.0],
        ])
        .unwrap();
        let d = 0.25;
        let r = ratio_r(d, 4, 4, &x).unwrap();
        let expect = 3f64.sqrt() * (1.0 + d) / (1.0 + 2.0 * d);
        assert!((r.ratio - expect).abs() < 1e-14);
        assert!(r.contains_ratio(1e-12));

        // d = 0: sqrt(|J|) ||X||_inf / ||X||_F >= 1 and the upper end collapses
        let x = DenseMatrix::from_rows(&[[1.0, 2.0], [0.5, -0.1]]).unwrap();
        let r = ratio_r(0.0, 2, 2, &x).unwrap();
        let expect = 2f64.sqrt() * norm_inf_to_inf(&x) / norm_frobenius(&x);
        assert!((r.ratio - expect).abs() < 1e-15);
        assert!(r.ratio >= 1.0);
        assert_eq!(r.upper, r.middle);

        assert!(ratio_r(0.1, 2, 2, &DenseMatrix::zeros(2, 2)).is_err());
        assert!(ratio_r(0.1, 2, 3, &DenseMatrix::zeros(3, 2)).is_err());
    }

    #[test]
    fn exact_metric_matches_definition_and_vanishes_at_the_end() {
        let inst = recipe(
            MatrixEnsemble::Gaussian,
            CoefficientPattern::GenericRandom,
            3,
        )
        .sample(12)
        .unwrap();
        let trace = somp(&inst.y, &inst.phi, &PursuitConfig::new(4)).unwrap();
        for t in 0..=trace.iterations() {
            let r = trace.residual(t).unwrap();
            let mut brute = 0.0_f64;
            for j in inst.support.iter() {
                let s: f64 = (0..inst.k())
                    .map(|k| {
                        (0..inst.m())
                            .map(|i| inst.phi.get(i, j) * r.get(i, k))
                            .sum::<f64>()
                            .abs()
                    })
                    .sum();
                brute = brute.max(s);
            }
            let e = exact_metric(&inst, &trace, t).unwrap();
            assert!((e - brute).abs() <= 1e-12 * brute.max(1.0));
        }
        if trace.final_support == inst.support {
            assert!(exact_metric(&inst, &trace, 4).unwrap() <= 1e-10);
        }
        assert!(exact_metric(&inst, &trace, 5).is_err());
    }

    #[test]
    fn exact_metric_at_start_with_orthonormal_atoms() {
        let inst = recipe(
            MatrixEnsemble::Orthonormal,
            CoefficientPattern::GenericRandom,
            3,
        )
        .sample(2)
        .unwrap();
        let trace = somp(&inst.y, &inst.phi, &PursuitConfig::new(4)).unwrap();
        let e = exact_metric(&inst, &trace, 0).unwrap();
        let tau = norm_inf_to_inf(&inst.x_rows(&inst.support));
        assert!((e - tau).abs() <= 1e-12 * tau);
    }

    #[test]
    fn reports_are_sound_and_consistent() {
        for seed in 0..20 {
            for k in [1, 3] {
                let inst = recipe(
                    MatrixEnsemble::Gaussian,
                    CoefficientPattern::GenericRandom,
                    k,
                )
                .sample(seed)
                .unwrap();
                let (d, _) = support_delta(&inst.phi, &inst.support).unwrap();
                if d >= 1.0 {
                    continue;
                }
                let trace = somp(&inst.y, &inst.phi, &PursuitConfig::new(4)).unwrap();
                let delta = DeltaValue {
                    value: d,
                    origin: DeltaOrigin::SupportGram,
                };
                for rep in valid_reports(&inst, &trace, delta).unwrap() {
                    assert!(rep.thm1_slack() >= -1e-10, "{rep:?}");
                    assert!(rep.thm2_slack() >= -1e-10, "{rep:?}");
                    assert_eq!(rep.thm1_bound, rep.thm1_psi * rep.thm1_tau);
                    let r = rep.ratio_r.unwrap();
                    assert!((r - rep.thm1_bound / rep.thm2_bound).abs() <= 1e-12 * r);
                    assert!(
                        rep.ratio_lower <= r * (1.0 + 1e-12)
                            && r <= rep.ratio_upper * (1.0 + 1e-12)
                    );

                    let chain = theorem1_chain(&inst, &trace, rep.t, d).unwrap();
                    let via_chain = rep.thm1_tau / chain.inverse_inf_norm;
                    assert!(rep.exact_metric >= via_chain - 1e-10);
                    assert!(chain.inverse_inf_norm <= chain.lemma_value * (1.0 + 1e-12));
                    assert!(chain.lemma_value <= chain.closed_form * (1.0 + 1e-12));
                    assert!(chain.inverse_eigen_min >= 1.0 / (1.0 + d) - 1e-12);
                    assert!(chain.inverse_eigen_max <= 1.0 / (1.0 - d) + 1e-12);

                    // the metric only sees the rows still to be found
                    let cx = chain.gram.matmul(&inst.x_rows(&rep.jt)).unwrap();
                    assert!(
                        (norm_inf_to_inf(&cx) - rep.exact_metric).abs()
                            <= 1e-10 * rep.exact_metric.max(1.0)
                    );
                }
            }
        }
    }

    #[test]
    fn csv_row_layout() {
        let inst = recipe(
            MatrixEnsemble::Gaussian,
            CoefficientPattern::GenericRandom,
            2,
        )
        .sample(5)
        .unwrap();
        let trace = somp(&inst.y, &inst.phi, &PursuitConfig::new(4)).unwrap();
        let delta = DeltaValue {
            value: 0.2,
            origin: DeltaOrigin::Hypothetical,
        };
        let rep = bound_report(&inst, &trace, 0, delta).unwrap();
        let csv = reports_to_csv(&[rep]);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], BoundReport::CSV_HEADER);
        assert_eq!(lines[1].split(',').count(), 11);
        assert!(lines[1].starts_with("0,4,2e-1,"));
    }

    #[test]
    fn remark1_examples() {
        // Phi = I: gap is exactly zero
        let mut x = DenseMatrix::zeros(6, 2);
        for (j, a, b) in [(0, 3.0, -1.0), (2, 0.5, 2.0), (5, -1.0, 1.0)] {
            x.set(j, 0, a);
            x.set(j, 1, b);
        }
        let inst = assemble_instance(DenseMatrix::identity(6), x).unwrap();
        let trace = somp(&inst.y, &inst.phi, &PursuitConfig::new(3)).unwrap();
        for t in 0..3 {
            let c = remark1_certificate(&inst, &trace, t).unwrap();
            assert_eq!(c.gap, 0.0);
            assert!(c.holds);
        }

        let inst = recipe(
            MatrixEnsemble::Orthonormal,
            CoefficientPattern::GenericRandom,
            4,
        )
        .sample(9)
        .unwrap();
        let trace = somp(&inst.y, &inst.phi, &PursuitConfig::new(4)).unwrap();
        for t in 0..4 {
            let c = remark1_certificate(&inst, &trace, t).unwrap();
            assert!(c.holds && c.gap <= 1e-8, "{c:?}");
        }

        let inst = recipe(
            MatrixEnsemble::Gaussian,
            CoefficientPattern::GenericRandom,
            2,
        )
        .sample(9)
        .unwrap();
        let trace = somp(&inst.y, &inst.phi, &PursuitConfig::new(4)).unwrap();
        assert!(matches!(
            remark1_certificate(&inst, &trace, 0),
            Err(Error::NotApplicable(_))
        ));
    }
}
