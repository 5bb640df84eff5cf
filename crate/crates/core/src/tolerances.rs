//! Every numerical threshold used by the crate, in one place.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative asymmetry admitted by the symmetric eigensolver and Lemma-style bounds.
    pub symmetry: f64,
    /// Jacobi stops once the off-diagonal Frobenius norm drops below this times `||A||_F`.
    pub jacobi_off_diagonal: f64,
    pub jacobi_max_sweeps: usize,
    /// A Householder pivot `|R_ii|` below this times the largest column norm means rank deficiency.
    pub rank: f64,
    /// Orthogonality of residuals against selected atoms.
    pub orthogonality: f64,
    /// Allowed negative margin when asserting a proven inequality, per unit of `max(1, ||X||_F)`.
    pub soundness_slack: f64,
    /// Relative gap admitted by the sharpness certificate.
    pub sharpness: f64,
    /// `||Phi_S^T Phi_S - I||_F` below this counts as an orthonormal support.
    pub orthonormal: f64,
    /// Monotonicity slack for restricted isometry tables.
    pub ric_monotonicity: f64,
    /// Maximum number of subsets `ric_exact` may enumerate per order.
    pub ric_budget: u128,
}

pub const TOLERANCES: Tolerances = Tolerances {
    symmetry: 1e-12,
    jacobi_off_diagonal: 1e-14,
    jacobi_max_sweeps: 100,
    rank: 1e-12,
    orthogonality: 1e-10,
    soundness_slack: 1e-10,
    sharpness: 1e-8,
    orthonormal: 1e-10,
    ric_monotonicity: 1e-12,
    ric_budget: 1_000_000,
};
