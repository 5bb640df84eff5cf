//! Dense real linear algebra sized for desk-scale compressive sensing
//! experiments: matrices of a few dozen rows and columns.

mod eigen;
mod matrix;
mod norms;
mod qr;
mod text;

pub use eigen::{sym_eigen, SymEigen};
pub use matrix::DenseMatrix;
pub use norms::{norm_2_to_2, norm_frobenius, norm_inf_to_inf, norm_vec, row_norms, VectorNorm};
pub use qr::{least_squares, project_onto_complement, project_onto_range, HouseholderQr};
pub use text::{format_matrix, parse_matrix, read_matrix, write_matrix};
