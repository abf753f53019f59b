//! Predictive dependence estimation.
//!
//! `S_Y = E[f_Y(Y)]` equals the density of `W = Y1 - Y2` at zero for
//! independent copies `Y1`, `Y2`. Both rates are therefore estimated by
//! bootstrapping two copies of the predicted variable, differencing them,
//! and evaluating a Gaussian KDE of the differences at zero:
//!
//! * `S_Y` from the whole sample;
//! * `S_{Y|X}` as the bin-weighted sum of the same estimate computed inside
//!   each bin of the conditioning variable.
//!
//! `alpha = (S_{Y|X} - S_Y) / S_{Y|X}` is the relative loss in predictive
//! rate from ignoring the conditioning variable.
//!
//! # Seeds
//!
//! Every random draw is derived from [`PredepConfig::seed`]:
//!
//! | stream | seed |
//! |--------|------|
//! | marginal copies | `seed.child(0)`, `seed.child(1)` |
//! | bin `b` copies | `seed.child(2).child(2b)`, `seed.child(2).child(2b + 1)` |
//! | CI resample `r` | `seed.child(3).child(r)` |
//! | [`predep_both`] directions | `seed.child(4)` (Y given X), `seed.child(5)` (X given Y) |

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::binning::{compute_bin_edges_with, BinningMethod, BinningOptions};
use crate::error::{Error, Result};
use crate::kde::DensityEstimate;
use crate::sampling::{bootstrap_sample, default_bootstrap_count, difference_sample, RngSeed};
use crate::scalar::Scalar;
use crate::stats;

/// Fewest observations accepted by [`predep`].
pub const MIN_OBSERVATIONS: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct PredepConfig {
    /// Bootstrap size for every KDE; `None` uses `ceil(n ln n)` for the
    /// marginal and `max(ceil(m ln m), min_bin_bootstrap)` per bin of size `m`.
    pub bootstrap_count_override: Option<usize>,
    pub seed: RngSeed,
    /// Pair resamples for the percentile interval; `0` disables it.
    pub ci_resamples: usize,
    pub ci_level: f64,
    /// Clamp the headline `alpha` to `[0, 1]`.
    pub clamp: bool,
    pub min_bin_bootstrap: usize,
    pub binning: BinningOptions,
}

impl Default for PredepConfig {
    fn default() -> Self {
        Self {
            bootstrap_count_override: None,
            seed: RngSeed(0),
            ci_resamples: 200,
            ci_level: 0.95,
            clamp: true,
            min_bin_bootstrap: 16,
            binning: BinningOptions {
                method: BinningMethod::ExactWard,
                min_bin_size: 5,
                bins: None,
            },
        }
    }
}

impl PredepConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed: RngSeed(seed),
            ..Self::default()
        }
    }

    /// Same configuration without the confidence interval.
    pub fn without_ci(mut self) -> Self {
        self.ci_resamples = 0;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.ci_level > 0.0 && self.ci_level < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "ci_level must lie in (0, 1), got {}",
                self.ci_level
            )));
        }
        if self.bootstrap_count_override == Some(0) {
            return Err(Error::InvalidParameter("bootstrap count must be positive".into()));
        }
        Ok(())
    }

    fn marginal_count(&self, n: usize) -> usize {
        self.bootstrap_count_override.unwrap_or_else(|| default_bootstrap_count(n))
    }

    fn bin_count(&self, m: usize) -> usize {
        self.bootstrap_count_override
            .unwrap_or_else(|| default_bootstrap_count(m).max(self.min_bin_bootstrap))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// Predicting the second variable from the first.
    YGivenX,
    /// Predicting the first variable from the second.
    XGivenY,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Direction::YGivenX => "y_given_x",
            Direction::XGivenY => "x_given_y",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredepResult<T> {
    pub alpha_raw: T,
    /// Headline value: `alpha_raw` clamped to `[0, 1]` unless clamping is off.
    pub alpha: T,
    pub s_marginal: T,
    pub s_conditional: T,
    pub direction: Direction,
    pub ci: Option<(T, T)>,
    /// Bins whose predicted values were all equal (bandwidth floor used).
    pub degenerate_bins: usize,
    pub bins: usize,
    pub marginal_degenerate: bool,
}

/// Density of `y1 - y2` at zero from two bootstrap copies of `values`.
fn convolution_at_zero<T: Scalar>(values: &[T], count: usize, seeds: (RngSeed, RngSeed)) -> Result<(T, bool)> {
    let y1 = bootstrap_sample(values, count, seeds.0)?;
    let y2 = bootstrap_sample(values, count, seeds.1)?;
    let w = difference_sample(&y1, &y2)?;
    let estimate = DensityEstimate::fit(w)?;
    Ok((estimate.pdf_at(T::zero())?, estimate.is_degenerate()))
}

fn marginal_with_flag<T: Scalar>(y: &[T], config: &PredepConfig) -> Result<(T, bool)> {
    if y.len() < 2 {
        return Err(Error::InsufficientData {
            needed: 2,
            got: y.len(),
        });
    }
    stats::ensure_finite(y)?;
    let seed = config.seed;
    convolution_at_zero(y, config.marginal_count(y.len()), (seed.child(0), seed.child(1)))
}

/// Estimate of `S_Y = integral of f_Y^2`.
///
/// A constant sample is not an error: the bandwidth floor applies and the
/// result is very large.
pub fn estimate_s_marginal<T: Scalar>(y: &[T], config: &PredepConfig) -> Result<T> {
    config.validate()?;
    marginal_with_flag(y, config).map(|(s, _)| s)
}

/// Estimate of `S_{Y|X}` and the number of degenerate bins.
pub fn estimate_s_conditional<T: Scalar>(x: &[T], y: &[T], config: &PredepConfig) -> Result<(T, usize)> {
    config.validate()?;
    check_pair(x, y)?;
    conditional(x, y, config).map(|(s, degenerate, _)| (s, degenerate))
}

fn conditional<T: Scalar>(x: &[T], y: &[T], config: &PredepConfig) -> Result<(T, usize, usize)> {
    let partition = compute_bin_edges_with(x, &config.binning)?;
    let groups = partition.group(y)?;
    let n = T::from_count(y.len());
    let base = config.seed.child(2);
    let mut contributions = Vec::with_capacity(groups.len());
    let mut degenerate = 0;
    for (b, values) in groups.iter().enumerate() {
        let b = b as u64;
        let (density, flat) = convolution_at_zero(
            values,
            config.bin_count(values.len()),
            (base.child(2 * b), base.child(2 * b + 1)),
        )?;
        if flat {
            degenerate += 1;
        }
        contributions.push(T::from_count(values.len()) / n * density);
    }
    Ok((stats::compensated_sum(contributions), degenerate, groups.len()))
}

fn check_pair<T: Scalar>(x: &[T], y: &[T]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.len() < MIN_OBSERVATIONS {
        return Err(Error::InsufficientData {
            needed: MIN_OBSERVATIONS,
            got: x.len(),
        });
    }
    stats::ensure_finite(x)?;
    stats::ensure_finite(y)
}

fn point_estimate<T: Scalar>(x: &[T], y: &[T], config: &PredepConfig) -> Result<PredepResult<T>> {
    check_pair(x, y)?;
    if stats::count_distinct(x) < 2 {
        return Err(Error::DegenerateConditioning);
    }
    if stats::count_distinct(y) < 2 {
        return Err(Error::DegeneratePredicted);
    }
    let (s_marginal, marginal_degenerate) = marginal_with_flag(y, config)?;
    let (s_conditional, degenerate_bins, bins) = conditional(x, y, config)?;
    if !(s_marginal > T::zero() && s_conditional > T::zero()) {
        return Err(Error::DegeneratePredicted);
    }
    let alpha_raw = (s_conditional - s_marginal) / s_conditional;
    let alpha = if config.clamp {
        alpha_raw.max(T::zero()).min(T::one())
    } else {
        alpha_raw
    };
    Ok(PredepResult {
        alpha_raw,
        alpha,
        s_marginal,
        s_conditional,
        direction: Direction::YGivenX,
        ci: None,
        degenerate_bins,
        bins,
        marginal_degenerate,
    })
}

/// `alpha` for predicting `y` from `x`, with the interval when enabled.
pub fn predep<T: Scalar>(x: &[T], y: &[T], config: &PredepConfig) -> Result<PredepResult<T>> {
    config.validate()?;
    let mut result = point_estimate(x, y, config)?;
    if config.ci_resamples > 0 {
        result.ci = Some(predep_ci(x, y, config)?);
    }
    Ok(result)
}

/// Both directions; the second result predicts `x` from `y`.
pub fn predep_both<T: Scalar>(
    x: &[T],
    y: &[T],
    config: &PredepConfig,
) -> Result<(PredepResult<T>, PredepResult<T>)> {
    let forward = PredepConfig {
        seed: config.seed.child(4),
        ..config.clone()
    };
    let backward = PredepConfig {
        seed: config.seed.child(5),
        ..config.clone()
    };
    let y_given_x = predep(x, y, &forward)?;
    let mut x_given_y = predep(y, x, &backward)?;
    x_given_y.direction = Direction::XGivenY;
    Ok((y_given_x, x_given_y))
}

/// Percentile bootstrap interval for the headline `alpha`, resampling pairs jointly.
///
/// Resamples that turn degenerate (e.g. a single distinct `x`) are skipped.
pub fn predep_ci<T: Scalar>(x: &[T], y: &[T], config: &PredepConfig) -> Result<(T, T)> {
    config.validate()?;
    if config.ci_resamples == 0 {
        return Err(Error::InvalidParameter("ci_resamples must be at least 1".into()));
    }
    check_pair(x, y)?;
    let n = x.len();
    let indices: Vec<usize> = (0..n).collect();
    let base = config.seed.child(3);
    let outcomes: Vec<Result<T>> = (0..config.ci_resamples as u64)
        .into_par_iter()
        .map(|r| {
            let seed = base.child(r);
            let picks = bootstrap_sample(&indices, n, seed.child(0))?;
            let xs: Vec<T> = picks.iter().map(|&i| x[i]).collect();
            let ys: Vec<T> = picks.iter().map(|&i| y[i]).collect();
            let inner = PredepConfig {
                seed: seed.child(1),
                ci_resamples: 0,
                ..config.clone()
            };
            point_estimate(&xs, &ys, &inner).map(|res| res.alpha)
        })
        .collect();

    let mut alphas = Vec::with_capacity(outcomes.len());
    let mut last_error = None;
    for outcome in outcomes {
        match outcome {
            Ok(a) => alphas.push(a),
            Err(e) if e.is_degeneracy() => last_error = Some(e),
            Err(e) => return Err(e),
        }
    }
    if alphas.is_empty() {
        return Err(last_error.unwrap_or(Error::DegenerateConditioning));
    }
    let sorted = stats::sorted_copy(&alphas);
    let tail = (1.0 - config.ci_level) / 2.0;
    Ok((
        stats::quantile_sorted(&sorted, tail)?,
        stats::quantile_sorted(&sorted, 1.0 - tail)?,
    ))
}
