//! Baseline association measures reported next to PREDEP.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::stats;

fn check_paired<T: Scalar>(x: &[T], y: &[T], min: usize) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.is_empty() {
        return Err(Error::EmptySample);
    }
    if x.len() < min {
        return Err(Error::InsufficientData {
            needed: min,
            got: x.len(),
        });
    }
    stats::ensure_finite(x)?;
    stats::ensure_finite(y)
}

/// Sample Pearson correlation.
pub fn pearson<T: Scalar>(x: &[T], y: &[T]) -> Result<T> {
    check_paired(x, y, 2)?;
    let mx = stats::mean(x)?;
    let my = stats::mean(y)?;
    let sxy = stats::compensated_sum(x.iter().zip(y).map(|(&a, &b)| (a - mx) * (b - my)));
    let sxx = stats::compensated_sum(x.iter().map(|&a| (a - mx) * (a - mx)));
    let syy = stats::compensated_sum(y.iter().map(|&b| (b - my) * (b - my)));
    if sxx <= T::zero() || syy <= T::zero() {
        return Err(Error::ZeroVariance);
    }
    let r = sxy / (sxx.sqrt() * syy.sqrt());
    Ok(r.max(-T::one()).min(T::one()))
}

/// Spearman rank correlation: Pearson on average ranks.
pub fn spearman<T: Scalar>(x: &[T], y: &[T]) -> Result<T> {
    check_paired(x, y, 2)?;
    pearson(&stats::average_ranks(x), &stats::average_ranks(y))
}

/// Szekely's distance correlation (biased V-statistic), in `[0, 1]`.
///
/// O(N^2) time and O(N) memory: row means of the distance matrices are
/// computed first, the double-centred products are then streamed.
pub fn distance_correlation<T: Scalar>(x: &[T], y: &[T]) -> Result<T> {
    check_paired(x, y, 1)?;
    let n = x.len();
    let row_means = |v: &[T]| -> (Vec<T>, T) {
        let means: Vec<T> = v
            .iter()
            .map(|&a| v.iter().map(|&b| (a - b).abs()).sum::<T>() / T::from_count(n))
            .collect();
        let grand = means.iter().copied().sum::<T>() / T::from_count(n);
        (means, grand)
    };
    let (ax, gx) = row_means(x);
    let (ay, gy) = row_means(y);

    let mut cov = T::zero();
    let mut var_x = T::zero();
    let mut var_y = T::zero();
    for i in 0..n {
        let mut row_cov = T::zero();
        let mut row_vx = T::zero();
        let mut row_vy = T::zero();
        for j in 0..n {
            let a = (x[i] - x[j]).abs() - ax[i] - ax[j] + gx;
            let b = (y[i] - y[j]).abs() - ay[i] - ay[j] + gy;
            row_cov = row_cov + a * b;
            row_vx = row_vx + a * a;
            row_vy = row_vy + b * b;
        }
        cov = cov + row_cov;
        var_x = var_x + row_vx;
        var_y = var_y + row_vy;
    }
    let denom = (var_x * var_y).sqrt();
    if denom <= T::zero() {
        return Ok(T::zero());
    }
    let ratio = (cov / denom).max(T::zero()).min(T::one());
    Ok(ratio.sqrt())
}

/// Which margin of a [`ContingencyTable`] is being predicted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PredictTarget {
    RowsGivenColumns,
    ColumnsGivenRows,
}

/// `r x c` table of counts with at least two rows and two columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContingencyTable {
    counts: Vec<Vec<u64>>,
}

impl ContingencyTable {
    pub fn new(counts: Vec<Vec<u64>>) -> Result<Self> {
        if counts.len() < 2 {
            return Err(Error::InvalidParameter("contingency table needs at least 2 rows".into()));
        }
        let cols = counts[0].len();
        if cols < 2 {
            return Err(Error::InvalidParameter("contingency table needs at least 2 columns".into()));
        }
        if counts.iter().any(|row| row.len() != cols) {
            return Err(Error::InvalidParameter("contingency table rows differ in length".into()));
        }
        if counts.iter().flatten().all(|&c| c == 0) {
            return Err(Error::InvalidParameter("contingency table is empty".into()));
        }
        Ok(Self { counts })
    }

    pub fn rows(&self) -> usize {
        self.counts.len()
    }

    pub fn columns(&self) -> usize {
        self.counts[0].len()
    }

    pub fn count(&self, row: usize, col: usize) -> u64 {
        self.counts[row][col]
    }

    pub fn row_totals(&self) -> Vec<u64> {
        self.counts.iter().map(|r| r.iter().sum()).collect()
    }

    pub fn column_totals(&self) -> Vec<u64> {
        (0..self.columns()).map(|j| self.counts.iter().map(|r| r[j]).sum()).collect()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn transpose(&self) -> Self {
        let counts = (0..self.columns())
            .map(|j| self.counts.iter().map(|r| r[j]).collect())
            .collect();
        Self { counts }
    }

    /// Expected misassignments of rows ignoring columns: `n * sum_i p_i. (1 - p_i.)`.
    pub fn errors_without_columns(&self) -> f64 {
        let n = self.total() as f64;
        self.row_totals()
            .iter()
            .map(|&ni| {
                let p = ni as f64 / n;
                n * p * (1.0 - p)
            })
            .sum()
    }

    /// Expected misassignments of rows within each column:
    /// `sum_j n_.j sum_i (n_ij / n_.j) (1 - n_ij / n_.j)`.
    pub fn errors_within_columns(&self) -> f64 {
        self.column_totals()
            .iter()
            .enumerate()
            .filter(|(_, &nj)| nj > 0)
            .map(|(j, &nj)| {
                let nj_f = nj as f64;
                let inner: f64 = self
                    .counts
                    .iter()
                    .map(|r| {
                        let q = r[j] as f64 / nj_f;
                        q * (1.0 - q)
                    })
                    .sum();
                nj_f * inner
            })
            .sum()
    }
}

/// Goodman-Kruskal `tau_b = (A - B) / A`.
pub fn goodman_kruskal_tau(table: &ContingencyTable, predict: PredictTarget) -> Result<f64> {
    let oriented;
    let table = match predict {
        PredictTarget::RowsGivenColumns => table,
        PredictTarget::ColumnsGivenRows => {
            oriented = table.transpose();
            &oriented
        }
    };
    let a = table.errors_without_columns();
    if a <= 0.0 {
        return Err(Error::NoPredictionError);
    }
    let b = table.errors_within_columns();
    Ok(((a - b) / a).clamp(0.0, 1.0))
}
