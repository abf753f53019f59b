//! Small descriptive-statistics helpers shared by the estimators.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Neumaier-compensated sum. Order-dependent only in the last ulp.
pub fn compensated_sum<T: Scalar>(values: impl IntoIterator<Item = T>) -> T {
    let mut sum = T::zero();
    let mut comp = T::zero();
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp = comp + ((sum - t) + v);
        } else {
            comp = comp + ((v - t) + sum);
        }
        sum = t;
    }
    sum + comp
}

pub fn mean<T: Scalar>(values: &[T]) -> Result<T> {
    if values.is_empty() {
        return Err(Error::EmptySample);
    }
    Ok(compensated_sum(values.iter().copied()) / T::from_count(values.len()))
}

/// Sample standard deviation with divisor `n - 1`. Zero for a single value.
pub fn sample_sd<T: Scalar>(values: &[T]) -> Result<T> {
    let m = mean(values)?;
    if values.len() < 2 {
        return Ok(T::zero());
    }
    let ss = compensated_sum(values.iter().map(|&v| (v - m) * (v - m)));
    Ok((ss / T::from_count(values.len() - 1)).sqrt())
}

/// Linear-interpolation quantile ("type 7") of an already sorted slice.
///
/// `prob` is clamped to `[0, 1]`.
pub fn quantile_sorted<T: Scalar>(sorted: &[T], prob: f64) -> Result<T> {
    if sorted.is_empty() {
        return Err(Error::EmptySample);
    }
    let prob = prob.clamp(0.0, 1.0);
    let h = (sorted.len() - 1) as f64 * prob;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    let frac = T::lit(h - lo as f64);
    Ok(sorted[lo] + (sorted[hi] - sorted[lo]) * frac)
}

/// Sorts a copy of `values`. Panics on NaN, so callers validate finiteness first.
pub fn sorted_copy<T: Scalar>(values: &[T]) -> Vec<T> {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
    v
}

pub fn median<T: Scalar>(values: &[T]) -> Result<T> {
    quantile_sorted(&sorted_copy(values), 0.5)
}

/// Average ranks (1-based); tied values share the mean of their ranks.
pub fn average_ranks<T: Scalar>(values: &[T]) -> Vec<T> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).expect("finite values"));
    let mut ranks = vec![T::zero(); n];
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        while j < n && values[order[j]] == values[order[i]] {
            j += 1;
        }
        // positions i..j (0-based) share rank mean((i+1)..=j)
        let rank = T::lit((i + 1 + j) as f64 / 2.0);
        for &idx in &order[i..j] {
            ranks[idx] = rank;
        }
        i = j;
    }
    ranks
}

pub fn all_finite<T: Scalar>(values: &[T]) -> bool {
    values.iter().all(|v| v.is_finite())
}

pub(crate) fn ensure_finite<T: Scalar>(values: &[T]) -> Result<()> {
    if all_finite(values) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

pub fn count_distinct<T: Scalar>(values: &[T]) -> usize {
    let sorted = sorted_copy(values);
    let mut count = 0;
    for (i, v) in sorted.iter().enumerate() {
        if i == 0 || *v != sorted[i - 1] {
            count += 1;
        }
    }
    count
}

/// Kolmogorov-Smirnov distance between the empirical CDF of `values` and
/// the uniform CDF on `[lo, hi]`.
pub fn ks_uniform_statistic<T: Scalar>(values: &[T], lo: f64, hi: f64) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptySample);
    }
    ensure_finite(values)?;
    let sorted = sorted_copy(values);
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    for (i, v) in sorted.iter().enumerate() {
        let cdf = ((v.as_f64() - lo) / (hi - lo)).clamp(0.0, 1.0);
        d = d.max((i as f64 + 1.0) / n - cdf).max(cdf - i as f64 / n);
    }
    Ok(d)
}
