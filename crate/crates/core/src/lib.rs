//! Predictive dependence (PREDEP) between two continuous variables.
//!
//! `alpha = (S_{Y|X} - S_Y) / S_{Y|X}`, where `S = integral of f^2` is the
//! probability of predicting a value correctly from its density. Each `S`
//! is estimated by fitting a Gaussian KDE to the difference of two bootstrap
//! copies and evaluating it at zero; the conditional version averages this
//! over bins of `x` chosen by one-dimensional Ward clustering.
//!
//! The numeric core is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below fix it to `f64`.
//!
//! ```
//! use predep::{predep, PredepConfig};
//!
//! let x: Vec<f64> = (0..400).map(|i| i as f64 / 200.0 - 1.0).collect();
//! let y: Vec<f64> = x.iter().map(|v| v * v).collect();
//! let r = predep(&x, &y, &PredepConfig::with_seed(7).without_ci()).unwrap();
//! assert!(r.alpha > 0.5);
//! ```

pub mod analytic;
pub mod bench;
pub mod binning;
pub mod comparators;
pub mod error;
pub mod estimator;
pub mod kde;
pub mod report;
pub mod sampling;
pub mod scalar;
pub mod stats;
pub mod sweep;
pub mod synth;
pub mod table;

pub use analytic::{gaussian_alpha, gaussian_s_conditional, gaussian_s_marginal, GaussianParams};
pub use binning::{compute_bin_edges, compute_bin_edges_with, BinPartition, BinningMethod, BinningOptions};
pub use comparators::{distance_correlation, goodman_kruskal_tau, pearson, spearman, ContingencyTable, PredictTarget};
pub use error::{Error, Result};
pub use estimator::{
    estimate_s_conditional, estimate_s_marginal, predep, predep_both, predep_ci, Direction, PredepConfig,
    PredepResult,
};
pub use kde::DensityEstimate;
pub use sampling::RngSeed;
pub use scalar::Scalar;
pub use sweep::{pairwise_sweep, Measure, PairReport, SweepConfig, SweepOutcome};
pub use synth::{ModelKind, PairedSample, RelationshipModel};
pub use table::{load_csv, ColumnTable, LoadOptions};

pub type Density = DensityEstimate<f64>;
pub type Partition = BinPartition<f64>;
pub type Gaussian = GaussianParams<f64>;
pub type Estimate = PredepResult<f64>;
pub type Sample = PairedSample<f64>;
pub type Table = ColumnTable<f64>;
pub type Report = PairReport<f64>;
