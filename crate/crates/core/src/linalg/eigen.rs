use super::matrix::DenseMatrix;
use super::norms::norm_frobenius;
use crate::error::{Error, Result};
use crate::tolerances::TOLERANCES;

/// Spectral decomposition `A = Q diag(eigenvalues) Q^T` of a real symmetric matrix.
#[derive(Debug, Clone)]
pub struct SymEigen {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Orthogonal; column `i` pairs with `eigenvalues[i]`.
    pub eigenvectors: DenseMatrix,
}

impl SymEigen {
    pub fn min(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(f64::NAN)
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(f64::NAN)
    }

    /// `Q diag(lambda) Q^T`.
    pub fn reconstruct(&self) -> DenseMatrix {
        let q = &self.eigenvectors;
        let n = q.rows();
        let mut out = DenseMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v: f64 = (0..n)
                    .map(|k| q.get(i, k) * self.eigenvalues[k] * q.get(j, k))
                    .sum();
                out.set(i, j, v);
                out.set(j, i, v);
            }
        }
        out
    }
}

/// Cyclic Jacobi eigensolver.
///
/// Sweeps over all `(p, q)` pairs, annihilating each off-diagonal entry with a
/// plane rotation, until the off-diagonal Frobenius norm falls below
/// `jacobi_off_diagonal * ||A||_F`. Rotations are accumulated into `Q`.
pub fn sym_eigen(a: &DenseMatrix) -> Result<SymEigen> {
    if !a.is_square() {
        return Err(Error::dim(
            "sym_eigen",
            format!("{}x{} is not square", a.rows(), a.cols()),
        ));
    }
    let asym = a.asymmetry();
    if asym > TOLERANCES.symmetry * a.max_abs() {
        return Err(Error::Asymmetric { asymmetry: asym });
    }

    let n = a.rows();
    let mut w = a.clone();
    for i in 0..n {
        for j in (i + 1)..n {
            let v = 0.5 * (w.get(i, j) + w.get(j, i));
            w.set(i, j, v);
            w.set(j, i, v);
        }
    }
    let mut q = DenseMatrix::identity(n);
    let target = TOLERANCES.jacobi_off_diagonal * norm_frobenius(a);

    let mut converged = false;
    let mut off = off_diagonal(&w);
    for _ in 0..TOLERANCES.jacobi_max_sweeps {
        if off <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for r in (p + 1)..n {
                rotate(&mut w, &mut q, p, r);
            }
        }
        off = off_diagonal(&w);
    }
    if !converged && off > target {
        return Err(Error::NotConverged {
            sweeps: TOLERANCES.jacobi_max_sweeps,
            off,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| w.get(i, i).total_cmp(&w.get(j, j)));
    let eigenvalues = order.iter().map(|&i| w.get(i, i)).collect();
    let eigenvectors = q.permute_columns(&order)?;
    Ok(SymEigen {
        eigenvalues,
        eigenvectors,
    })
}

fn off_diagonal(w: &DenseMatrix) -> f64 {
    let n = w.rows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += w.get(i, j) * w.get(i, j);
            }
        }
    }
    acc.sqrt()
}

/// Applies `W <- J^T W J` and `Q <- Q J` with the rotation zeroing `W[p][r]`.
fn rotate(w: &mut DenseMatrix, q: &mut DenseMatrix, p: usize, r: usize) {
    let apr = w.get(p, r);
    if apr == 0.0 {
        return;
    }
    let tau = (w.get(r, r) - w.get(p, p)) / (2.0 * apr);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let n = w.rows();

    for k in 0..n {
        let wkp = w.get(k, p);
        let wkr = w.get(k, r);
        w.set(k, p, c * wkp - s * wkr);
        w.set(k, r, s * wkp + c * wkr);
    }
    for k in 0..n {
        let wpk = w.get(p, k);
        let wrk = w.get(r, k);
        w.set(p, k, c * wpk - s * wrk);
        w.set(r, k, s * wpk + c * wrk);
    }
    w.set(p, r, 0.0);
    w.set(r, p, 0.0);

    for k in 0..n {
        let qkp = q.get(k, p);
        let qkr = q.get(k, r);
        q.set(k, p, c * qkp - s * qkr);
        q.set(k, r, s * qkp + c * qkr);
    }
}
