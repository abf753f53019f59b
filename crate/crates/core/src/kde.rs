//! One-dimensional Gaussian kernel density estimation.
//!
//! The estimator only ever needs point evaluations, so [`DensityEstimate`]
//! keeps the raw samples and a bandwidth chosen by Silverman's rule of thumb.

use crate::error::{Error, Result};
use crate::scalar::{inv_sqrt_two_pi, Scalar};
use crate::stats;

/// Samples plus a positive bandwidth; evaluates a Gaussian-kernel density.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityEstimate<T> {
    samples: Vec<T>,
    bandwidth: T,
    degenerate: bool,
}

impl<T: Scalar> DensityEstimate<T> {
    /// Fits with [`bandwidth_silverman`].
    pub fn fit(samples: Vec<T>) -> Result<Self> {
        let (bandwidth, degenerate) = silverman_with_flag(&samples)?;
        Ok(Self {
            samples,
            bandwidth,
            degenerate,
        })
    }

    /// Uses a caller-supplied bandwidth, which must be finite and positive.
    pub fn with_bandwidth(samples: Vec<T>, bandwidth: T) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptySample);
        }
        stats::ensure_finite(&samples)?;
        if !bandwidth.is_finite() || bandwidth <= T::zero() {
            return Err(Error::InvalidParameter(format!(
                "bandwidth must be finite and positive, got {bandwidth}"
            )));
        }
        Ok(Self {
            samples,
            bandwidth,
            degenerate: false,
        })
    }

    pub fn samples(&self) -> &[T] {
        &self.samples
    }

    pub fn bandwidth(&self) -> T {
        self.bandwidth
    }

    /// True when the sample had no spread and the bandwidth floor was used.
    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    /// Density at `point`.
    pub fn pdf_at(&self, point: T) -> Result<T> {
        kde_pdf_at(self, point)
    }
}

/// Smallest bandwidth ever returned: `1e-9 * max(1, |median|)`.
pub fn bandwidth_floor<T: Scalar>(samples: &[T]) -> Result<T> {
    let med = stats::median(samples)?;
    Ok(T::lit(1e-9) * T::one().max(med.abs()))
}

/// Silverman's rule of thumb, `0.9 * min(sd, IQR / 1.34) * n^(-1/5)`.
///
/// `sd` uses divisor `n - 1`, the IQR uses type-7 quantiles. When the IQR
/// is zero but the standard deviation is not, the standard deviation alone
/// is used. A result at or below [`bandwidth_floor`] is replaced by the floor.
pub fn bandwidth_silverman<T: Scalar>(samples: &[T]) -> Result<T> {
    silverman_with_flag(samples).map(|(h, _)| h)
}

fn silverman_with_flag<T: Scalar>(samples: &[T]) -> Result<(T, bool)> {
    if samples.is_empty() {
        return Err(Error::EmptySample);
    }
    stats::ensure_finite(samples)?;
    let sorted = stats::sorted_copy(samples);
    let floor = T::lit(1e-9) * T::one().max(stats::quantile_sorted(&sorted, 0.5)?.abs());

    let sd = stats::sample_sd(samples)?;
    let iqr = stats::quantile_sorted(&sorted, 0.75)? - stats::quantile_sorted(&sorted, 0.25)?;
    let robust = iqr / T::lit(1.34);
    let spread = if robust > T::zero() { sd.min(robust) } else { sd };
    let n = T::from_count(samples.len());
    let h = T::lit(0.9) * spread * n.powf(T::lit(-0.2));
    if h.is_finite() && h > floor {
        Ok((h, false))
    } else {
        Ok((floor, true))
    }
}

/// `(1 / (n h)) * sum_i phi((point - s_i) / h)` with `phi` the standard normal density.
pub fn kde_pdf_at<T: Scalar>(estimate: &DensityEstimate<T>, point: T) -> Result<T> {
    if !point.is_finite() {
        return Err(Error::NonFinite);
    }
    let h = estimate.bandwidth;
    let half = T::lit(0.5);
    let sum: T = estimate
        .samples
        .iter()
        .map(|&s| {
            let u = (point - s) / h;
            (-half * u * u).exp()
        })
        .sum();
    let density = sum * inv_sqrt_two_pi::<T>() / (T::from_count(estimate.samples.len()) * h);
    Ok(density.max(T::zero()))
}
