use super::matrix::DenseMatrix;
use super::norms::{norm_vec, VectorNorm};
use crate::error::{Error, Result};
use crate::tolerances::TOLERANCES;

/// Householder QR of a tall `m x k` matrix, stored as reflectors plus `R`.
#[derive(Debug, Clone)]
pub struct HouseholderQr {
    rows: usize,
    cols: usize,
    /// Reflector `j` acts on rows `j..m`; `v[0]` is stored explicitly.
    reflectors: Vec<Vec<f64>>,
    betas: Vec<f64>,
    /// Upper triangle of the factorised matrix (row-major `k x k`).
    r: Vec<f64>,
}

impl HouseholderQr {
    /// Factorises `a`. Fails with [`Error::Singular`] when a pivot is below the
    /// relative rank threshold, naming the first dependent column.
    pub fn new(a: &DenseMatrix) -> Result<Self> {
        let (m, k) = a.shape();
        if m < k {
            return Err(Error::dim(
                "HouseholderQr",
                format!("{m}x{k} has more columns than rows"),
            ));
        }
        let scale = (0..k)
            .map(|j| norm_vec(&a.column(j), VectorNorm::L2))
            .fold(0.0, f64::max);
        let mut w = a.clone();
        let mut reflectors = Vec::with_capacity(k);
        let mut betas = Vec::with_capacity(k);
        let mut r = vec![0.0; k * k];

        for j in 0..k {
            let x: Vec<f64> = (j..m).map(|i| w.get(i, j)).collect();
            let norm = norm_vec(&x, VectorNorm::L2);
            if norm <= TOLERANCES.rank * scale || norm == 0.0 {
                return Err(Error::Singular { column: j, cols: k });
            }
            let alpha = x[0];
            let rjj = if alpha >= 0.0 { -norm } else { norm };
            let mut v = x;
            v[0] -= rjj;
            let beta = 1.0 / (rjj * (rjj - alpha));

            w.set(j, j, rjj);
            for i in (j + 1)..m {
                w.set(i, j, 0.0);
            }
            for c in (j + 1)..k {
                let dot: f64 = v
                    .iter()
                    .enumerate()
                    .map(|(l, vl)| vl * w.get(j + l, c))
                    .sum();
                let f = beta * dot;
                for (l, vl) in v.iter().enumerate() {
                    let cur = w.get(j + l, c);
                    w.set(j + l, c, cur - f * vl);
                }
            }
            reflectors.push(v);
            betas.push(beta);
        }
        for i in 0..k {
            for j in i..k {
                r[i * k + j] = w.get(i, j);
            }
        }
        Ok(Self {
            rows: m,
            cols: k,
            reflectors,
            betas,
            r,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn r(&self) -> DenseMatrix {
        DenseMatrix::from_raw(self.cols, self.cols, self.r.clone())
    }

    fn check_rows(&self, b: &DenseMatrix, op: &'static str) -> Result<()> {
        if b.rows() != self.rows {
            return Err(Error::dim(
                op,
                format!(
                    "right-hand side has {} rows, factor has {}",
                    b.rows(),
                    self.rows
                ),
            ));
        }
        Ok(())
    }

    fn reflect(&self, j: usize, w: &mut DenseMatrix) {
        let v = &self.reflectors[j];
        let beta = self.betas[j];
        for c in 0..w.cols() {
            let dot: f64 = v
                .iter()
                .enumerate()
                .map(|(l, vl)| vl * w.get(j + l, c))
                .sum();
            let f = beta * dot;
            if f == 0.0 {
                continue;
            }
            for (l, vl) in v.iter().enumerate() {
                let cur = w.get(j + l, c);
                w.set(j + l, c, cur - f * vl);
            }
        }
    }

    pub fn apply_qt(&self, b: &DenseMatrix) -> Result<DenseMatrix> {
        self.check_rows(b, "apply_qt")?;
        let mut w = b.clone();
        for j in 0..self.cols {
            self.reflect(j, &mut w);
        }
        Ok(w)
    }

    pub fn apply_q(&self, b: &DenseMatrix) -> Result<DenseMatrix> {
        self.check_rows(b, "apply_q")?;
        let mut w = b.clone();
        for j in (0..self.cols).rev() {
            self.reflect(j, &mut w);
        }
        Ok(w)
    }

    /// The `m x k` factor with orthonormal columns.
    pub fn thin_q(&self) -> DenseMatrix {
        let mut e = DenseMatrix::zeros(self.rows, self.cols);
        for j in 0..self.cols {
            e.set(j, j, 1.0);
        }
        self.apply_q(&e).expect("shape fixed by construction")
    }

    /// `argmin_Z ||A Z - B||_F` via back substitution on `R`.
    pub fn solve_least_squares(&self, b: &DenseMatrix) -> Result<DenseMatrix> {
        let qtb = self.apply_qt(b)?;
        let (k, nrhs) = (self.cols, b.cols());
        let mut z = DenseMatrix::zeros(k, nrhs);
        for c in 0..nrhs {
            for i in (0..k).rev() {
                let mut acc = qtb.get(i, c);
                for l in (i + 1)..k {
                    acc -= self.r[i * k + l] * z.get(l, c);
                }
                z.set(i, c, acc / self.r[i * k + i]);
            }
        }
        Ok(z)
    }

    fn split_projection(&self, b: &DenseMatrix, keep_range: bool) -> Result<DenseMatrix> {
        let mut c = self.apply_qt(b)?;
        let k = self.cols;
        for i in 0..self.rows {
            if (i < k) != keep_range {
                for col in 0..c.cols() {
                    c.set(i, col, 0.0);
                }
            }
        }
        self.apply_q(&c)
    }

    /// `P B` with `P` the orthogonal projector onto `range(A)`.
    pub fn project(&self, b: &DenseMatrix) -> Result<DenseMatrix> {
        self.split_projection(b, true)
    }

    /// `(I - P) B`.
    pub fn project_complement(&self, b: &DenseMatrix) -> Result<DenseMatrix> {
        self.split_projection(b, false)
    }
}

pub fn least_squares(a: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix> {
    HouseholderQr::new(a)?.solve_least_squares(b)
}

/// `A A^+ B`.
pub fn project_onto_range(a: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix> {
    HouseholderQr::new(a)?.project(b)
}

/// `(I - A A^+) B`; with zero columns in `a` this is `B` itself.
pub fn project_onto_complement(a: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix> {
    if a.cols() == 0 {
        if a.rows() != b.rows() {
            return Err(Error::dim("project_onto_complement", "row count mismatch"));
        }
        return Ok(b.clone());
    }
    HouseholderQr::new(a)?.project_complement(b)
}
