//! Synthetic benchmark data.
//!
//! Functional families follow `X ~ U(-1, 1)`, `Y = h(X)`, `Y* = Y + U(-delta, delta)`
//! with coefficients drawn from `U(-1, 1)` (piecewise: `theta0 ~ U(-3, 0)`,
//! `theta1 ~ U(0, 3)`). The non-functional shapes are reconstructions whose
//! geometry lives in [`ShapeGeometry`]; their noise is `U(-delta, delta)`
//! added to both coordinates.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::analytic::GaussianParams;
use crate::comparators::pearson;
use crate::error::{Error, Result};
use crate::sampling::RngSeed;
use crate::scalar::Scalar;
use crate::stats;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Linear,
    Logarithmic,
    Cubic,
    Quadratic,
    Sinusoidal,
    Piecewise,
    CrossShaped,
    Circular,
    TwoCircles,
    Checkerboard,
    Annulus,
}

impl ModelKind {
    pub const ALL: [ModelKind; 11] = [
        ModelKind::Linear,
        ModelKind::Logarithmic,
        ModelKind::Cubic,
        ModelKind::Quadratic,
        ModelKind::Sinusoidal,
        ModelKind::Piecewise,
        ModelKind::CrossShaped,
        ModelKind::Circular,
        ModelKind::TwoCircles,
        ModelKind::Checkerboard,
        ModelKind::Annulus,
    ];

    /// The nine families of the noiseless comparison table.
    pub const TABLE: [ModelKind; 9] = [
        ModelKind::Linear,
        ModelKind::Logarithmic,
        ModelKind::Cubic,
        ModelKind::Quadratic,
        ModelKind::Sinusoidal,
        ModelKind::Piecewise,
        ModelKind::CrossShaped,
        ModelKind::Circular,
        ModelKind::Checkerboard,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Linear => "linear",
            ModelKind::Logarithmic => "logarithmic",
            ModelKind::Cubic => "cubic",
            ModelKind::Quadratic => "quadratic",
            ModelKind::Sinusoidal => "sinusoidal",
            ModelKind::Piecewise => "piecewise",
            ModelKind::CrossShaped => "cross",
            ModelKind::Circular => "circular",
            ModelKind::TwoCircles => "two_circles",
            ModelKind::Checkerboard => "checkerboard",
            ModelKind::Annulus => "annulus",
        }
    }

    /// Number of coefficients; zero for the non-functional shapes.
    pub fn arity(self) -> usize {
        match self {
            ModelKind::Linear => 2,
            ModelKind::Logarithmic => 1,
            ModelKind::Cubic => 4,
            ModelKind::Quadratic => 3,
            ModelKind::Sinusoidal => 2,
            ModelKind::Piecewise => 2,
            _ => 0,
        }
    }

    pub fn is_functional(self) -> bool {
        self.arity() > 0
    }

    pub fn valid_names() -> String {
        Self::ALL.iter().map(|k| k.name()).collect::<Vec<_>>().join(", ")
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace(['-', ' '], "_");
        let kind = match key.as_str() {
            "linear" | "lin" => ModelKind::Linear,
            "logarithmic" | "log" => ModelKind::Logarithmic,
            "cubic" | "cub" => ModelKind::Cubic,
            "quadratic" | "parabolic" | "qua" => ModelKind::Quadratic,
            "sinusoidal" | "sin" => ModelKind::Sinusoidal,
            "piecewise" | "piw" => ModelKind::Piecewise,
            "cross" | "cross_shaped" | "cro" => ModelKind::CrossShaped,
            "circular" | "circle" | "cir" => ModelKind::Circular,
            "two_circles" | "twocircles" => ModelKind::TwoCircles,
            "checkerboard" | "che" => ModelKind::Checkerboard,
            "annulus" => ModelKind::Annulus,
            _ => {
                return Err(Error::UnknownModel {
                    name: s.to_string(),
                    valid: Self::valid_names(),
                })
            }
        };
        Ok(kind)
    }
}

/// A model family together with its coefficients `theta_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationshipModel {
    kind: ModelKind,
    coefficients: Vec<f64>,
}

impl RelationshipModel {
    /// Validates arity and, for the piecewise model, `theta0 < 0 < theta1`.
    pub fn new(kind: ModelKind, coefficients: Vec<f64>) -> Result<Self> {
        if coefficients.len() != kind.arity() {
            return Err(Error::InvalidParameter(format!(
                "{kind} takes {} coefficients, got {}",
                kind.arity(),
                coefficients.len()
            )));
        }
        if coefficients.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite);
        }
        if kind == ModelKind::Piecewise && !(coefficients[0] < 0.0 && 0.0 < coefficients[1]) {
            return Err(Error::InvalidParameter("piecewise needs theta0 < 0 < theta1".into()));
        }
        Ok(Self { kind, coefficients })
    }

    /// A non-functional shape (no coefficients).
    pub fn shape(kind: ModelKind) -> Result<Self> {
        Self::new(kind, Vec::new())
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// `h(x)` for functional models; `None` for shapes.
    pub fn eval(&self, x: f64) -> Option<f64> {
        let t = &self.coefficients;
        let y = match self.kind {
            ModelKind::Linear => t[0] * x + t[1],
            ModelKind::Quadratic => t[2] * x * x + t[1] * x + t[0],
            ModelKind::Cubic => ((t[3] * x + t[2]) * x + t[1]) * x + t[0],
            ModelKind::Logarithmic => t[0] * (x + 1.0).ln(),
            ModelKind::Sinusoidal => t[1] * (t[0] * x).sin(),
            ModelKind::Piecewise => (1.0 / x).max(t[0]).min(t[1]),
            _ => return None,
        };
        Some(y)
    }
}

/// Coefficients drawn per family; deterministic given `seed`.
pub fn draw_model(kind: ModelKind, seed: RngSeed) -> Result<RelationshipModel> {
    if !kind.is_functional() {
        return Err(Error::NoCoefficients(kind.name().to_string()));
    }
    let mut rng = seed.rng();
    let coefficients = if kind == ModelKind::Piecewise {
        let lo = -3.0 * open_unit(&mut rng);
        let hi = 3.0 * open_unit(&mut rng);
        vec![lo, hi]
    } else {
        (0..kind.arity()).map(|_| open_symmetric(&mut rng)).collect()
    };
    RelationshipModel::new(kind, coefficients)
}

/// Geometry of the reconstructed non-functional shapes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShapeGeometry {
    /// Half-thickness of each arm of the cross.
    pub cross_half_width: f64,
    /// Radial half-thickness of the circle band, relative to the radius.
    pub ring_half_width: f64,
    pub two_circle_radii: (f64, f64),
    /// Cells per side of the checkerboard on `[-1, 1]^2`.
    pub checkerboard_cells: usize,
    /// Squared inner radius of the annulus (outer radius is 1).
    pub annulus_inner_sq: f64,
}

impl Default for ShapeGeometry {
    fn default() -> Self {
        Self {
            cross_half_width: 0.02,
            ring_half_width: 0.2,
            two_circle_radii: (0.5, 1.0),
            checkerboard_cells: 4,
            annulus_inner_sq: 0.75,
        }
    }
}

/// Paired observations `(x, y)` with the pre-noise `y` when known.
#[derive(Debug, Clone, PartialEq)]
pub struct PairedSample<T> {
    pub x: Vec<T>,
    pub y: Vec<T>,
    pub y_clean: Option<Vec<T>>,
}

impl<T: Scalar> PairedSample<T> {
    pub fn new(x: Vec<T>, y: Vec<T>, y_clean: Option<Vec<T>>) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::LengthMismatch {
                left: x.len(),
                right: y.len(),
            });
        }
        if let Some(c) = &y_clean {
            if c.len() != y.len() {
                return Err(Error::LengthMismatch {
                    left: y.len(),
                    right: c.len(),
                });
            }
            stats::ensure_finite(c)?;
        }
        stats::ensure_finite(&x)?;
        stats::ensure_finite(&y)?;
        Ok(Self { x, y, y_clean })
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// Swaps the roles of the two variables (drops `y_clean`).
    pub fn swapped(&self) -> Self {
        Self {
            x: self.y.clone(),
            y: self.x.clone(),
            y_clean: None,
        }
    }
}

fn open_unit<R: Rng>(rng: &mut R) -> f64 {
    loop {
        let u: f64 = rng.random();
        if u > 0.0 {
            return u;
        }
    }
}

/// Uniform on the open interval `(-1, 1)`.
fn open_symmetric<R: Rng>(rng: &mut R) -> f64 {
    loop {
        let v = rng.random_range(-1.0..1.0);
        if v > -1.0 {
            return v;
        }
    }
}

/// `U(-delta, delta)`; always consumes one draw so the other coordinates of
/// a sample do not depend on `delta`.
fn jitter<R: Rng>(rng: &mut R, delta: f64) -> f64 {
    delta * rng.random_range(-1.0..=1.0)
}

fn to_scalar<T: Scalar>(v: Vec<f64>) -> Vec<T> {
    v.into_iter().map(T::lit).collect()
}

/// `n` pairs from `model` with noise half-width `delta`, using the default geometry.
pub fn generate<T: Scalar>(model: &RelationshipModel, n: usize, delta: f64, seed: RngSeed) -> Result<PairedSample<T>> {
    generate_with(model, n, delta, seed, &ShapeGeometry::default())
}

pub fn generate_with<T: Scalar>(
    model: &RelationshipModel,
    n: usize,
    delta: f64,
    seed: RngSeed,
    geometry: &ShapeGeometry,
) -> Result<PairedSample<T>> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    if !(delta.is_finite() && delta >= 0.0) {
        return Err(Error::InvalidParameter(format!("delta must be >= 0, got {delta}")));
    }
    let mut rng = seed.rng();
    if model.kind.is_functional() {
        let mut x = Vec::with_capacity(n);
        let mut clean = Vec::with_capacity(n);
        let mut y = Vec::with_capacity(n);
        for _ in 0..n {
            let xi = open_symmetric(&mut rng);
            let yi = model.eval(xi).expect("functional model");
            x.push(xi);
            clean.push(yi);
            y.push(yi + jitter(&mut rng, delta));
        }
        return PairedSample::new(to_scalar(x), to_scalar(y), Some(to_scalar(clean)));
    }

    let (x, y) = match model.kind {
        ModelKind::Annulus => annulus_points(n, geometry.annulus_inner_sq, &mut rng).0,
        kind => {
            let mut x = Vec::with_capacity(n);
            let mut y = Vec::with_capacity(n);
            for _ in 0..n {
                let (a, b) = shape_point(kind, geometry, &mut rng);
                x.push(a);
                y.push(b);
            }
            (x, y)
        }
    };
    let (x, y): (Vec<f64>, Vec<f64>) = x
        .into_iter()
        .zip(y)
        .map(|(a, b)| (a + jitter(&mut rng, delta), b + jitter(&mut rng, delta)))
        .unzip();
    PairedSample::new(to_scalar(x), to_scalar(y), None)
}

fn shape_point<R: Rng>(kind: ModelKind, g: &ShapeGeometry, rng: &mut R) -> (f64, f64) {
    match kind {
        ModelKind::CrossShaped => {
            let along = rng.random_range(-1.0..=1.0);
            let across = rng.random_range(-g.cross_half_width..=g.cross_half_width);
            if rng.random_bool(0.5) {
                (along, across)
            } else {
                (across, along)
            }
        }
        ModelKind::Circular => ring_point(1.0, g.ring_half_width, rng),
        ModelKind::TwoCircles => {
            let (inner, outer) = g.two_circle_radii;
            // uniform over the union: pick a circle in proportion to its length
            let r = if rng.random_bool(outer / (inner + outer)) { outer } else { inner };
            ring_point(r, g.ring_half_width, rng)
        }
        ModelKind::Checkerboard => {
            let cells = g.checkerboard_cells.max(1);
            let width = 2.0 / cells as f64;
            let dark = cells * cells / 2 + (cells * cells) % 2;
            let pick = rng.random_range(0..dark);
            // enumerate the dark cells (i + j even) in row-major order
            let mut seen = 0;
            let mut cell = (0, 0);
            'outer: for i in 0..cells {
                for j in 0..cells {
                    if (i + j) % 2 == 0 {
                        if seen == pick {
                            cell = (i, j);
                            break 'outer;
                        }
                        seen += 1;
                    }
                }
            }
            let x = -1.0 + width * (cell.0 as f64 + rng.random::<f64>());
            let y = -1.0 + width * (cell.1 as f64 + rng.random::<f64>());
            (x, y)
        }
        _ => unreachable!("functional kinds and the annulus are handled by the caller"),
    }
}

fn ring_point<R: Rng>(radius: f64, relative_half_width: f64, rng: &mut R) -> (f64, f64) {
    let angle = rng.random_range(0.0..2.0 * PI);
    let r = if relative_half_width > 0.0 {
        radius * (1.0 + rng.random_range(-relative_half_width..=relative_half_width))
    } else {
        radius
    };
    (r * angle.cos(), r * angle.sin())
}

/// Rejection sampling from `[-1, 1]^2`; returns the points and the proposal count.
fn annulus_points<R: Rng>(n: usize, inner_sq: f64, rng: &mut R) -> ((Vec<f64>, Vec<f64>), u64) {
    let mut x = Vec::with_capacity(n);
    let mut y = Vec::with_capacity(n);
    let mut proposals = 0u64;
    while x.len() < n {
        proposals += 1;
        let a = rng.random_range(-1.0..=1.0);
        let b = rng.random_range(-1.0..=1.0);
        let r2 = a * a + b * b;
        if (inner_sq..=1.0).contains(&r2) {
            x.push(a);
            y.push(b);
        }
    }
    ((x, y), proposals)
}

/// Uniform annulus sample plus the number of proposals it took.
pub fn annulus_sample<T: Scalar>(n: usize, seed: RngSeed) -> Result<(PairedSample<T>, u64)> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let mut rng = seed.rng();
    let ((x, y), proposals) = annulus_points(n, ShapeGeometry::default().annulus_inner_sq, &mut rng);
    Ok((PairedSample::new(to_scalar(x), to_scalar(y), None)?, proposals))
}

/// `1 - cor(y_clean, y_noisy)^2`.
pub fn noise_level<T: Scalar>(y_clean: &[T], y_noisy: &[T]) -> Result<T> {
    if y_clean.len() != y_noisy.len() {
        return Err(Error::LengthMismatch {
            left: y_clean.len(),
            right: y_noisy.len(),
        });
    }
    if y_clean == y_noisy {
        // still reject constant input
        pearson(y_clean, y_noisy)?;
        return Ok(T::zero());
    }
    let r = pearson(y_clean, y_noisy)?;
    Ok((T::one() - r * r).max(T::zero()).min(T::one()))
}

/// Noise half-width giving an expected `1 - r^2` of `level` for uniform noise
/// added to `y_clean`: `Var(eps) = delta^2 / 3 = Var(y) level / (1 - level)`.
pub fn delta_for_noise_level<T: Scalar>(y_clean: &[T], level: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&level) {
        return Err(Error::InvalidParameter(format!("noise level must lie in [0, 1), got {level}")));
    }
    let sd = stats::sample_sd(y_clean)?.as_f64();
    if sd <= 0.0 {
        return Err(Error::ZeroVariance);
    }
    Ok((3.0 * sd * sd * level / (1.0 - level)).sqrt())
}

/// Clayton copula pairs with uniform marginals by the conditional-inverse method.
///
/// `theta` must lie in `[-1, 0) U (0, inf)`; `theta = -1` is the
/// countermonotonic limit `V = 1 - U`.
pub fn clayton_sample<T: Scalar>(theta: f64, n: usize, seed: RngSeed) -> Result<PairedSample<T>> {
    if !theta.is_finite() || theta < -1.0 || theta == 0.0 {
        return Err(Error::InvalidParameter(format!(
            "Clayton theta must lie in [-1, 0) or (0, inf), got {theta}"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let mut rng = seed.rng();
    let mut u = Vec::with_capacity(n);
    let mut v = Vec::with_capacity(n);
    for _ in 0..n {
        let ui = open_unit(&mut rng);
        let wi = open_unit(&mut rng);
        let vi = if theta == -1.0 {
            1.0 - ui
        } else {
            let inner = (wi.powf(-theta / (1.0 + theta)) - 1.0) * ui.powf(-theta) + 1.0;
            inner.powf(-1.0 / theta).clamp(0.0, 1.0)
        };
        u.push(ui);
        v.push(vi);
    }
    PairedSample::new(to_scalar(u), to_scalar(v), None)
}

/// Bivariate normal pairs by the Cholesky construction.
pub fn gaussian_pair_sample<T: Scalar>(params: &GaussianParams<T>, n: usize, seed: RngSeed) -> Result<PairedSample<T>> {
    params.validate()?;
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let rho = params.rho.as_f64();
    let sx = params.sigma_x.as_f64();
    let sy = params.sigma_y.as_f64();
    let resid = (1.0 - rho * rho).max(0.0).sqrt();
    let mut rng = seed.rng();
    let mut x = Vec::with_capacity(n);
    let mut y = Vec::with_capacity(n);
    for _ in 0..n {
        let z1: f64 = StandardNormal.sample(&mut rng);
        let z2: f64 = StandardNormal.sample(&mut rng);
        x.push(sx * z1);
        y.push(sy * (rho * z1 + resid * z2));
    }
    PairedSample::new(to_scalar(x), to_scalar(y), None)
}
