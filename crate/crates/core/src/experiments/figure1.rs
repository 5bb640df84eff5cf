use crate::bounds::ratio_r;
use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;

/// Ratios within this distance of 1 count as a crossing.
const CROSSING_TOL: f64 = 1e-12;

/// Bound ratio for rows of identical magnitude: `sqrt(K)(1 + d) / (1 + sqrt(J) d)`.
pub fn identical_rows_ratio(k: usize, jt: usize, delta: f64) -> f64 {
    let sj = (jt as f64).sqrt();
    (k as f64).sqrt() * (1.0 + delta) / (1.0 + sj * delta)
}

/// Smallest `K` with `identical_rows_ratio(K, jt, delta) >= 1`.
pub fn predicted_crossing(jt: usize, delta: f64) -> usize {
    let q = (1.0 + (jt as f64).sqrt() * delta) / (1.0 + delta);
    ((q * q) - CROSSING_TOL).ceil().max(1.0) as usize
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Figure1Point {
    pub k: usize,
    pub jt: usize,
    pub delta: f64,
    pub ratio: f64,
    pub closed_form: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    pub jt: usize,
    pub delta: f64,
    /// First `K` on the grid where the ratio reaches 1.
    pub observed: Option<usize>,
    pub predicted: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Figure1Grid {
    pub points: Vec<Figure1Point>,
    pub crossings: Vec<Crossing>,
}

impl Figure1Grid {
    pub fn max_closed_form_error(&self) -> f64 {
        self.points
            .iter()
            .map(|p| (p.ratio - p.closed_form).abs() / p.closed_form)
            .fold(0.0, f64::max)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("K,Jt,delta,r\n");
        for p in &self.points {
            out.push_str(&format!("{},{},{},{:e}\n", p.k, p.jt, p.delta, p.ratio));
        }
        out
    }

    pub fn crossings_csv(&self) -> String {
        let mut out = String::from("Jt,delta,K_observed,K_predicted\n");
        for c in &self.crossings {
            let observed = c
                .observed
                .map_or_else(|| "NaN".to_string(), |k| k.to_string());
            out.push_str(&format!(
                "{},{},{},{}\n",
                c.jt, c.delta, observed, c.predicted
            ));
        }
        out
    }
}

/// Evaluates the ratio on `X^{J}` of all ones for every `(J, d, K)`.
///
/// Points are ordered by `J`, then `d`, then `K`.
pub fn figure1_grid(k_max: usize, jt_sizes: &[usize], deltas: &[f64]) -> Result<Figure1Grid> {
    if k_max == 0 || jt_sizes.contains(&0) {
        return Err(Error::Domain("K and |J_t| must be positive".into()));
    }
    let mut points = Vec::with_capacity(k_max * jt_sizes.len() * deltas.len());
    let mut crossings = Vec::new();
    for &jt in jt_sizes {
        for &delta in deltas {
            let mut observed = None;
            for k in 1..=k_max {
                let x = DenseMatrix::from_fn(jt, k, |_, _| 1.0)?;
                let ratio = ratio_r(delta, jt, jt, &x)?.ratio;
                if observed.is_none() && ratio >= 1.0 - CROSSING_TOL {
                    observed = Some(k);
                }
                points.push(Figure1Point {
                    k,
                    jt,
                    delta,
                    ratio,
                    closed_form: identical_rows_ratio(k, jt, delta),
                });
            }
            crossings.push(Crossing {
                jt,
                delta,
                observed,
                predicted: predicted_crossing(jt, delta),
            });
        }
    }
    Ok(Figure1Grid { points, crossings })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ideal_dictionary_gives_sqrt_k() {
        for k in 1..20 {
            assert!((identical_rows_ratio(k, 9, 0.0) - (k as f64).sqrt()).abs() < 1e-15);
            assert!((identical_rows_ratio(k, 1, 0.4) - (k as f64).sqrt()).abs() < 1e-15);
        }
    }

    #[test]
    fn known_crossing() {
        assert_eq!(predicted_crossing(9, 0.5), 3);
        assert!(identical_rows_ratio(2, 9, 0.5) < 1.0);
        assert!(identical_rows_ratio(3, 9, 0.5) >= 1.0);
        assert_eq!(predicted_crossing(16, 0.5), 4);
        assert_eq!(predicted_crossing(1, 0.7), 1);
    }

    #[test]
    fn grid_matches_closed_form_and_crossings() {
        let grid = figure1_grid(64, &[1, 2, 4, 9, 16], &[0.1, 0.3, 0.5, 0.7]).unwrap();
        assert_eq!(grid.points.len(), 64 * 20);
        assert!(grid.max_closed_form_error() <= 1e-14);
        for c in &grid.crossings {
            assert_eq!(c.observed, Some(c.predicted), "{c:?}");
        }
    }

    #[test]
    fn ratio_grows_in_k_and_falls_in_j() {
        for &d in &[0.1, 0.3, 0.5, 0.7] {
            for k in 1..64 {
                assert!(identical_rows_ratio(k + 1, 4, d) > identical_rows_ratio(k, 4, d));
            }
            for jt in 1..16 {
                assert!(identical_rows_ratio(8, jt + 1, d) < identical_rows_ratio(8, jt, d));
            }
        }
    }

    #[test]
    fn csv_layout() {
        let grid = figure1_grid(2, &[1], &[0.5]).unwrap();
        let csv = grid.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "K,Jt,delta,r");
        assert_eq!(lines[1], "1,1,0.5,1e0");
        let r: f64 = lines[2].strip_prefix("2,1,0.5,").unwrap().parse().unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(
            grid.crossings_csv(),
            "Jt,delta,K_observed,K_predicted\n1,0.5,1,1\n"
        );
    }

    #[test]
    fn rejects_empty_axes() {
        assert!(figure1_grid(0, &[1], &[0.1]).is_err());
        assert!(figure1_grid(4, &[0], &[0.1]).is_err());
    }
}
