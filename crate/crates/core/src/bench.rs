//! Noise-sweep and copula benchmarks emitting long-format CSV.

use std::io::Write;

use rayon::prelude::*;

use crate::comparators::{distance_correlation, pearson, spearman};
use crate::error::{Error, Result};
use crate::estimator::{predep, PredepConfig};
use crate::report::round_sig6;
use crate::sampling::RngSeed;
use crate::sweep::Measure;
use crate::synth::{
    clayton_sample, delta_for_noise_level, draw_model, generate_with, ModelKind, PairedSample, RelationshipModel,
    ShapeGeometry,
};

#[derive(Debug, Clone, PartialEq)]
pub struct BenchSpec {
    pub models: Vec<ModelKind>,
    /// Points per dataset.
    pub n: usize,
    /// Number of target noise levels, evenly spaced on `[0, max_noise]`.
    pub noise_levels: usize,
    pub max_noise: f64,
    /// Replicates per (model, noise level) cell.
    pub seeds: usize,
    pub seed: RngSeed,
    pub measures: Vec<Measure>,
    pub predep: PredepConfig,
    pub geometry: ShapeGeometry,
}

impl Default for BenchSpec {
    fn default() -> Self {
        Self {
            models: ModelKind::TABLE.to_vec(),
            n: 1000,
            noise_levels: 20,
            max_noise: 0.9,
            seeds: 5,
            seed: RngSeed(0),
            measures: Measure::ALL.to_vec(),
            predep: PredepConfig::default().without_ci(),
            geometry: ShapeGeometry::default(),
        }
    }
}

/// One measurement. `level` is the target `1 - r^2` in noise mode and the
/// copula parameter in copula mode.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub model: String,
    pub level: f64,
    pub measure: Measure,
    pub value: f64,
    pub seed: u64,
}

impl BenchSpec {
    pub fn validate(&self) -> Result<()> {
        if self.models.is_empty() || self.measures.is_empty() {
            return Err(Error::InvalidParameter("bench needs at least one model and one measure".into()));
        }
        if self.n < 4 || self.noise_levels == 0 || self.seeds == 0 {
            return Err(Error::InvalidParameter("bench needs n >= 4, noise levels >= 1 and seeds >= 1".into()));
        }
        if !(0.0..1.0).contains(&self.max_noise) {
            return Err(Error::InvalidParameter(format!(
                "max noise must lie in [0, 1), got {}",
                self.max_noise
            )));
        }
        self.predep.validate()
    }

    pub fn noise_grid(&self) -> Vec<f64> {
        if self.noise_levels == 1 {
            return vec![0.0];
        }
        (0..self.noise_levels)
            .map(|j| round_sig6(self.max_noise * j as f64 / (self.noise_levels - 1) as f64))
            .collect()
    }
}

/// Evaluates the requested measures on one dataset. Correlations are
/// reported as absolute values. Measures that fail are left out.
pub fn measure_sample(sample: &PairedSample<f64>, measures: &[Measure], config: &PredepConfig) -> Vec<(Measure, f64)> {
    let (x, y) = (&sample.x, &sample.y);
    measures
        .iter()
        .filter_map(|&m| {
            let v = match m {
                Measure::Predep => predep(x, y, config).map(|r| r.alpha),
                Measure::Pearson => pearson(x, y).map(f64::abs),
                Measure::Spearman => spearman(x, y).map(f64::abs),
                Measure::Dcor => distance_correlation(x, y),
            };
            v.ok().map(|v| (m, v))
        })
        .collect()
}

/// Runs every (model, replicate, noise level) cell.
///
/// Each replicate draws one set of coefficients; each cell draws its own
/// data. The noise half-width is set from a noiseless draw of the same cell
/// so the expected `1 - r^2` matches the target level.
pub fn run_bench(spec: &BenchSpec) -> Result<Vec<BenchRow>> {
    spec.validate()?;
    let grid = spec.noise_grid();
    let mut cells = Vec::new();
    for &kind in &spec.models {
        for s in 0..spec.seeds {
            let base = spec.seed.child_named(kind.name()).child(s as u64);
            let model = if kind.is_functional() {
                draw_model(kind, base.child(0))?
            } else {
                RelationshipModel::shape(kind)?
            };
            for (j, &level) in grid.iter().enumerate() {
                cells.push((model.clone(), level, base.child(1).child(j as u64)));
            }
        }
    }

    let results: Vec<Result<Vec<BenchRow>>> = cells
        .par_iter()
        .map(|(model, level, seed)| {
            let pilot: PairedSample<f64> = generate_with(model, spec.n, 0.0, *seed, &spec.geometry)?;
            let delta = if *level > 0.0 {
                delta_for_noise_level(pilot.y_clean.as_ref().unwrap_or(&pilot.y), *level)?
            } else {
                0.0
            };
            let sample = generate_with(model, spec.n, delta, *seed, &spec.geometry)?;
            let config = PredepConfig {
                seed: seed.child(0),
                ..spec.predep.clone()
            };
            Ok(measure_sample(&sample, &spec.measures, &config)
                .into_iter()
                .map(|(measure, value)| BenchRow {
                    model: model.kind().name().to_string(),
                    level: *level,
                    measure,
                    value,
                    seed: seed.value(),
                })
                .collect())
        })
        .collect();
    let mut rows = Vec::new();
    for r in results {
        rows.extend(r?);
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CopulaSpec {
    pub thetas: Vec<f64>,
    pub n: usize,
    pub seeds: usize,
    pub seed: RngSeed,
    pub measures: Vec<Measure>,
    pub predep: PredepConfig,
}

impl Default for CopulaSpec {
    fn default() -> Self {
        Self {
            thetas: vec![-0.9, -0.5, 0.5, 2.0, 8.0],
            n: 2000,
            seeds: 5,
            seed: RngSeed(0),
            measures: Measure::ALL.to_vec(),
            predep: PredepConfig::default().without_ci(),
        }
    }
}

/// Clayton copula curve; rows carry the parameter in `level`.
pub fn run_copula_bench(spec: &CopulaSpec) -> Result<Vec<BenchRow>> {
    if spec.thetas.is_empty() || spec.seeds == 0 || spec.n < 4 || spec.measures.is_empty() {
        return Err(Error::InvalidParameter(
            "copula bench needs thetas, n >= 4, seeds >= 1 and at least one measure".into(),
        ));
    }
    spec.predep.validate()?;
    let cells: Vec<(f64, RngSeed)> = spec
        .thetas
        .iter()
        .enumerate()
        .flat_map(|(i, &t)| (0..spec.seeds).map(move |s| (t, spec.seed.child(i as u64).child(s as u64))))
        .collect();
    let results: Vec<Result<Vec<BenchRow>>> = cells
        .par_iter()
        .map(|&(theta, seed)| {
            let sample = clayton_sample::<f64>(theta, spec.n, seed.child(0))?;
            let config = PredepConfig {
                seed: seed.child(1),
                ..spec.predep.clone()
            };
            Ok(measure_sample(&sample, &spec.measures, &config)
                .into_iter()
                .map(|(measure, value)| BenchRow {
                    model: "clayton".into(),
                    level: theta,
                    measure,
                    value,
                    seed: seed.value(),
                })
                .collect())
        })
        .collect();
    let mut rows = Vec::new();
    for r in results {
        rows.extend(r?);
    }
    Ok(rows)
}

/// Long-format CSV `model,<level_header>,measure,value,seed`.
pub fn write_bench_csv<W: Write>(rows: &[BenchRow], level_header: &str, writer: W) -> Result<()> {
    let fail = |e: csv::Error| Error::Format {
        path: "<output>".into(),
        message: e.to_string(),
    };
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(writer);
    w.write_record(["model", level_header, "measure", "value", "seed"]).map_err(fail)?;
    for r in rows {
        w.write_record([
            r.model.clone(),
            round_sig6(r.level).to_string(),
            r.measure.name().to_string(),
            round_sig6(r.value).to_string(),
            r.seed.to_string(),
        ])
        .map_err(fail)?;
    }
    w.flush().map_err(|e| Error::Format {
        path: "<output>".into(),
        message: e.to_string(),
    })
}

/// Mean value per (model, level, measure), in first-seen order.
pub fn cell_means(rows: &[BenchRow]) -> Vec<(String, f64, Measure, f64)> {
    let mut out: Vec<(String, f64, Measure, f64, usize)> = Vec::new();
    for r in rows {
        match out.iter_mut().find(|c| c.0 == r.model && c.1 == r.level && c.2 == r.measure) {
            Some(c) => {
                c.3 += r.value;
                c.4 += 1;
            }
            None => out.push((r.model.clone(), r.level, r.measure, r.value, 1)),
        }
    }
    out.into_iter().map(|(m, l, k, sum, n)| (m, l, k, sum / n as f64)).collect()
}
