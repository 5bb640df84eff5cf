use super::eigen::sym_eigen;
use super::matrix::DenseMatrix;
use crate::error::Result;

/// The vector `l_p` norms used for selection metrics and matrix row norms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VectorNorm {
    L1,
    L2,
    Inf,
}

impl VectorNorm {
    pub fn eval(self, x: &[f64]) -> f64 {
        norm_vec(x, self)
    }
}

pub fn norm_vec(x: &[f64], p: VectorNorm) -> f64 {
    match p {
        VectorNorm::L1 => x.iter().map(|v| v.abs()).sum(),
        VectorNorm::L2 => x.iter().map(|v| v * v).sum::<f64>().sqrt(),
        VectorNorm::Inf => x.iter().fold(0.0, |m, v| m.max(v.abs())),
    }
}

/// `||A||_{inf->inf}`: the largest absolute row sum.
pub fn norm_inf_to_inf(a: &DenseMatrix) -> f64 {
    (0..a.rows())
        .map(|i| norm_vec(a.row(i), VectorNorm::L1))
        .fold(0.0, f64::max)
}

/// Largest singular value, from the eigenvalues of the smaller Gram matrix.
pub fn norm_2_to_2(a: &DenseMatrix) -> Result<f64> {
    if a.is_empty() {
        return Ok(0.0);
    }
    let gram = if a.cols() <= a.rows() {
        a.gram()
    } else {
        a.transpose().gram()
    };
    Ok(sym_eigen(&gram)?.max().max(0.0).sqrt())
}

pub fn norm_frobenius(a: &DenseMatrix) -> f64 {
    norm_vec(a.as_slice(), VectorNorm::L2)
}

/// `||A^{{i}}||_p` for every row `i`.
pub fn row_norms(a: &DenseMatrix, p: VectorNorm) -> Vec<f64> {
    (0..a.rows()).map(|i| norm_vec(a.row(i), p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn vector_norms() {
        assert_eq!(norm_vec(&[3.0, 4.0], VectorNorm::L2), 5.0);
        assert_eq!(norm_vec(&[1.0, -1.0, 1.0], VectorNorm::L1), 3.0);
        assert_eq!(norm_vec(&[1.0, -7.0, 1.0], VectorNorm::Inf), 7.0);
        assert_eq!(norm_vec(&[], VectorNorm::Inf), 0.0);
    }

    #[test]
    fn inf_norm_examples() {
        assert_eq!(norm_inf_to_inf(&DenseMatrix::identity(3)), 1.0);
        let a = DenseMatrix::from_rows(&[[1.0, -2.0], [3.0, 0.0]]).unwrap();
        assert_eq!(norm_inf_to_inf(&a), 3.0);
    }

    #[test]
    fn inf_norm_matches_sign_enumeration() {
        // sup over ||z||_inf = 1 is attained at a sign vector
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let rows = rng.random_range(1..6);
            let cols = rng.random_range(1..=10);
            let a = DenseMatrix::from_fn(rows, cols, |_, _| rng.random_range(-2.0..2.0)).unwrap();
            let mut best = 0.0_f64;
            for mask in 0u32..(1 << cols) {
                let z: Vec<f64> = (0..cols)
                    .map(|j| if mask >> j & 1 == 1 { -1.0 } else { 1.0 })
                    .collect();
                for i in 0..rows {
                    let v: f64 = a.row(i).iter().zip(&z).map(|(x, y)| x * y).sum();
                    best = best.max(v.abs());
                }
            }
            assert!((best - norm_inf_to_inf(&a)).abs() <= 1e-12 * best.max(1.0));
        }
    }

    #[test]
    fn spectral_norm() {
        assert!((norm_2_to_2(&DenseMatrix::identity(4)).unwrap() - 1.0).abs() < 1e-15);
        let d = DenseMatrix::diag(&[2.0, 5.0]).unwrap();
        assert!((norm_2_to_2(&d).unwrap() - 5.0).abs() < 1e-14);
    }

    #[test]
    fn spectral_norm_randomized_certificate() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = DenseMatrix::from_fn(6, 4, |_, _| rng.random_range(-1.0..1.0)).unwrap();
        let n2 = norm_2_to_2(&a).unwrap();
        for _ in 0..1000 {
            let v: Vec<f64> = (0..4).map(|_| rng.random_range(-1.0..1.0)).collect();
            let nv = norm_vec(&v, VectorNorm::L2);
            let av = a.matmul(&DenseMatrix::new(4, 1, v).unwrap()).unwrap();
            assert!(norm_frobenius(&av) <= n2 * nv * (1.0 + 1e-12));
        }
        // attained by the top right-singular vector
        let e = sym_eigen(&a.gram()).unwrap();
        let top = DenseMatrix::new(4, 1, e.eigenvectors.column(3)).unwrap();
        let attained = norm_frobenius(&a.matmul(&top).unwrap());
        assert!((attained - n2).abs() <= 1e-8);
    }

    #[test]
    fn frobenius_is_sum_of_row_energies() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let a = DenseMatrix::from_fn(7, 3, |_, _| rng.random_range(-3.0..3.0)).unwrap();
        let rows: f64 = row_norms(&a, VectorNorm::L2).iter().map(|r| r * r).sum();
        let f = norm_frobenius(&a);
        assert!((f * f - rows).abs() <= 1e-12 * rows);
    }
}
