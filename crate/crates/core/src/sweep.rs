//! All-pairs dependence sweep over the columns of a table.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::comparators::{distance_correlation, pearson, spearman};
use crate::error::{Error, Result};
use crate::estimator::{predep, Direction, PredepConfig, PredepResult, MIN_OBSERVATIONS};
use crate::sampling::RngSeed;
use crate::scalar::Scalar;
use crate::table::ColumnTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    Predep,
    Pearson,
    Spearman,
    Dcor,
}

impl Measure {
    pub const ALL: [Measure; 4] = [Measure::Predep, Measure::Pearson, Measure::Spearman, Measure::Dcor];

    pub fn name(self) -> &'static str {
        match self {
            Measure::Predep => "predep",
            Measure::Pearson => "pearson",
            Measure::Spearman => "spearman",
            Measure::Dcor => "dcor",
        }
    }

    /// Parses a comma-separated list, dropping duplicates and keeping order.
    pub fn parse_list(list: &str) -> Result<Vec<Measure>> {
        let mut out = Vec::new();
        for part in list.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let m: Measure = part.parse()?;
            if !out.contains(&m) {
                out.push(m);
            }
        }
        if out.is_empty() {
            return Err(Error::InvalidParameter("no measures requested".into()));
        }
        Ok(out)
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "predep" | "alpha" => Ok(Measure::Predep),
            "pearson" | "r" => Ok(Measure::Pearson),
            "spearman" | "rho" => Ok(Measure::Spearman),
            "dcor" | "distance_correlation" => Ok(Measure::Dcor),
            _ => Err(Error::InvalidParameter(format!(
                "unknown measure '{s}'; valid measures: predep, pearson, spearman, dcor"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    /// Pairs with fewer complete rows are skipped.
    pub min_overlap: usize,
    pub measures: Vec<Measure>,
    /// Estimator settings; its seed is the master seed for all pairs.
    pub predep: PredepConfig,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            min_overlap: 50,
            measures: Measure::ALL.to_vec(),
            predep: PredepConfig::default().without_ci(),
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.min_overlap < MIN_OBSERVATIONS {
            return Err(Error::InvalidParameter(format!(
                "min_overlap must be at least {MIN_OBSERVATIONS}, got {}",
                self.min_overlap
            )));
        }
        self.predep.validate()
    }

    fn wants(&self, m: Measure) -> bool {
        self.measures.contains(&m)
    }
}

/// Dependence of `column_b` on `column_a` over their complete rows.
#[derive(Debug, Clone, PartialEq)]
pub struct PairReport<T> {
    pub column_a: String,
    pub column_b: String,
    pub direction: Direction,
    pub overlap_n: usize,
    pub predep: Option<PredepResult<T>>,
    pub pearson: Option<T>,
    pub spearman: Option<T>,
    pub dcor: Option<T>,
    pub seed: RngSeed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkippedPair {
    pub column_a: String,
    pub column_b: String,
    pub overlap_n: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutcome<T> {
    pub reports: Vec<PairReport<T>>,
    pub skipped: Vec<SkippedPair>,
}

impl<T> SweepOutcome<T> {
    /// Candidate pairs considered (computed plus skipped).
    pub fn pair_count(&self) -> usize {
        self.reports.len() + self.skipped.len()
    }
}

/// Seed of the ordered pair `(a, b)` under `master`.
pub fn pair_seed(master: RngSeed, a: &str, b: &str) -> RngSeed {
    master.child_named(&format!("{a}\u{0}{b}"))
}

enum PairOutcome<T> {
    Done(PairReport<T>),
    Skipped(SkippedPair),
}

/// Runs every ordered pair of distinct columns, in lexicographic order of
/// `(column_a, column_b)`. Output does not depend on the thread count.
pub fn pairwise_sweep<T: Scalar>(table: &ColumnTable<T>, config: &SweepConfig) -> Result<SweepOutcome<T>> {
    config.validate()?;
    let names = table.names();
    let mut order: Vec<usize> = (0..names.len()).collect();
    order.sort_by(|&i, &j| names[i].cmp(&names[j]));
    let pairs: Vec<(usize, usize)> = order
        .iter()
        .flat_map(|&a| order.iter().filter(move |&&b| b != a).map(move |&b| (a, b)))
        .collect();

    let outcomes: Vec<PairOutcome<T>> = pairs
        .par_iter()
        .map(|&(a, b)| run_pair(table, a, b, config))
        .collect();

    let mut reports = Vec::new();
    let mut skipped = Vec::new();
    for o in outcomes {
        match o {
            PairOutcome::Done(r) => reports.push(r),
            PairOutcome::Skipped(s) => skipped.push(s),
        }
    }
    Ok(SweepOutcome { reports, skipped })
}

fn run_pair<T: Scalar>(table: &ColumnTable<T>, a: usize, b: usize, config: &SweepConfig) -> PairOutcome<T> {
    let column_a = table.names()[a].clone();
    let column_b = table.names()[b].clone();
    let (x, y) = table.complete_pairs(a, b);
    let overlap_n = x.len();
    let skip = |reason: String| {
        PairOutcome::Skipped(SkippedPair {
            column_a: column_a.clone(),
            column_b: column_b.clone(),
            overlap_n,
            reason,
        })
    };
    if overlap_n < config.min_overlap {
        return skip("insufficient overlap".into());
    }

    let seed = pair_seed(config.predep.seed, &column_a, &column_b);
    let predep_result = if config.wants(Measure::Predep) {
        let cfg = PredepConfig {
            seed,
            ..config.predep.clone()
        };
        match predep(&x, &y, &cfg) {
            Ok(r) => Some(r),
            Err(e) => return skip(e.to_string()),
        }
    } else {
        None
    };
    let measure = |m: Measure, f: fn(&[T], &[T]) -> Result<T>| if config.wants(m) { f(&x, &y).ok() } else { None };
    let pearson_r = measure(Measure::Pearson, pearson);
    let spearman_r = measure(Measure::Spearman, spearman);
    let dcor = measure(Measure::Dcor, distance_correlation);
    if predep_result.is_none() && pearson_r.is_none() && spearman_r.is_none() && dcor.is_none() {
        return skip("no measure could be computed".into());
    }

    PairOutcome::Done(PairReport {
        column_a,
        column_b,
        direction: Direction::YGivenX,
        overlap_n,
        predep: predep_result,
        pearson: pearson_r,
        spearman: spearman_r,
        dcor,
        seed,
    })
}
