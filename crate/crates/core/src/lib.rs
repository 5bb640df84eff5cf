//! Simultaneous orthogonal matching pursuit (SOMP) under the multiple
//! measurement vector model, together with exact restricted isometry
//! constants and numerically certified lower bounds on the largest
//! correct-atom selection metric.
//!
//! The crate is organised bottom-up:
//!
//! * [`linalg`]: dense real matrices, Householder QR, Jacobi eigensolver, norms.
//! * [`model`]: measurement matrices, coefficient patterns and MMV instances.
//! * [`pursuit`]: SOMP / p-SOMP with per-iteration traces.
//! * [`rip`]: exact restricted isometry constants by subset enumeration.
//! * [`bounds`]: the infinity-norm (RIP) bound, the Frobenius bound, their ratio.
//! * [`experiments`]: scenario campaigns, grid sweeps and CSV emission.

pub mod bounds;
pub mod error;
pub mod experiments;
pub mod linalg;
pub mod model;
pub mod pursuit;
pub mod rip;
pub mod tolerances;

pub use error::{Error, Result};
pub use linalg::{DenseMatrix, SymEigen};
pub use model::{MmvInstance, Scenario, Support};
pub use pursuit::{PursuitConfig, PursuitTrace, SelectionNorm};
pub use tolerances::{Tolerances, TOLERANCES};
