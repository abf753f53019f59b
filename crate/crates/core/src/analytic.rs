//! Closed forms for the bivariate normal and the quadratic Rényi entropy.
//!
//! For `(X, Y)` bivariate normal with correlation `rho`:
//!
//! | quantity | value |
//! |----------|-------|
//! | `S_Y` | `1 / (2 sigma_y sqrt(pi))` |
//! | `S_{Y|X}` | `1 / (2 sigma_y sqrt(pi (1 - rho^2)))` |
//! | `alpha` | `1 - sqrt(1 - rho^2)` |
//! | mutual information | `-ln(1 - rho^2) / 2 = -ln(1 - alpha)` |
//!
//! Means drop out of every formula. All logarithms are natural.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianParams<T> {
    pub sigma_x: T,
    pub sigma_y: T,
    pub rho: T,
}

impl<T: Scalar> GaussianParams<T> {
    pub fn new(sigma_x: T, sigma_y: T, rho: T) -> Result<Self> {
        let p = Self { sigma_x, sigma_y, rho };
        p.validate()?;
        Ok(p)
    }

    /// Unit variances with correlation `rho`.
    pub fn standard(rho: T) -> Result<Self> {
        Self::new(T::one(), T::one(), rho)
    }

    pub fn validate(&self) -> Result<()> {
        check_rho(self.rho)?;
        check_sigma(self.sigma_x)?;
        check_sigma(self.sigma_y)
    }
}

fn check_rho<T: Scalar>(rho: T) -> Result<()> {
    if rho.is_finite() && rho.abs() <= T::one() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("|rho| must be <= 1, got {rho}")))
    }
}

fn check_sigma<T: Scalar>(sigma: T) -> Result<()> {
    if sigma.is_finite() && sigma > T::zero() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("sigma must be positive, got {sigma}")))
    }
}

fn two_sqrt_pi<T: Scalar>() -> T {
    T::lit(2.0 * std::f64::consts::PI.sqrt())
}

/// `1 - sqrt(1 - rho^2)`.
pub fn gaussian_alpha<T: Scalar>(rho: T) -> Result<T> {
    check_rho(rho)?;
    Ok(T::one() - (T::one() - rho * rho).sqrt())
}

/// `S_Y = 1 / (2 sigma sqrt(pi))` for a normal with standard deviation `sigma`.
pub fn gaussian_s_marginal<T: Scalar>(sigma: T) -> Result<T> {
    check_sigma(sigma)?;
    Ok(T::one() / (two_sqrt_pi::<T>() * sigma))
}

/// `S_{Y|X} = 1 / (2 sigma_y sqrt(pi (1 - rho^2)))`; undefined at `|rho| = 1`.
pub fn gaussian_s_conditional<T: Scalar>(params: &GaussianParams<T>) -> Result<T> {
    params.validate()?;
    let residual = T::one() - params.rho * params.rho;
    if residual <= T::zero() {
        return Err(Error::DegenerateConditional);
    }
    Ok(T::one() / (two_sqrt_pi::<T>() * params.sigma_y * residual.sqrt()))
}

/// `-ln(1 - rho^2) / 2`, in nats.
pub fn gaussian_mutual_information<T: Scalar>(rho: T) -> Result<T> {
    check_rho(rho)?;
    let residual = T::one() - rho * rho;
    if residual <= T::zero() {
        return Err(Error::InvalidParameter("mutual information is infinite at |rho| = 1".into()));
    }
    Ok(-T::lit(0.5) * residual.ln())
}

/// Quadratic Rényi entropy `H2 = -ln(S)` from `S = integral of f^2`.
pub fn renyi2_entropy_from_s<T: Scalar>(s: T) -> Result<T> {
    if !s.is_finite() || s <= T::zero() {
        return Err(Error::InvalidParameter(format!("S must be positive, got {s}")));
    }
    Ok(-s.ln())
}

/// Inverse of [`renyi2_entropy_from_s`].
pub fn s_from_renyi2_entropy<T: Scalar>(h2: T) -> T {
    (-h2).exp()
}
