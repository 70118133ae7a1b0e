//! Seeded noise models: additive Gaussian, multiplicative gamma speckle and
//! salt-and-pepper impulses.
//!
//! Each pixel's noise is drawn from a counter-based generator keyed by
//! `(seed, pixel index, stream)`, so every injector is a pure function of
//! its image, parameters and seed.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::image::{Image, MAX_VALUE};
use crate::rng::CounterRng;

/// A noise model together with the seed that realises it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseSpec {
    pub model: NoiseModel,
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NoiseModel {
    /// `out = in + n`, `n ~ N(0, sigma^2)`.
    GaussianAdditive { sigma: f64 },
    /// `out = in * g`, `g ~ Gamma(shape = alpha, scale = 1/alpha)`.
    SpeckleGamma { alpha: u32 },
    /// Each pixel is replaced with probability `density`; a replaced pixel
    /// becomes 255 with probability `salt_fraction`, otherwise 0.
    SaltPepper { density: f64, salt_fraction: f64 },
}

/// Salt share used when none is given: both extremes equally likely.
pub const DEFAULT_SALT_FRACTION: f64 = 0.5;

impl NoiseSpec {
    pub fn validate(&self) -> Result<()> {
        match self.model {
            NoiseModel::GaussianAdditive { sigma } => check_sigma(sigma),
            NoiseModel::SpeckleGamma { alpha } => check_alpha(alpha),
            NoiseModel::SaltPepper {
                density,
                salt_fraction,
            } => check_probabilities(density, salt_fraction),
        }
    }

    pub fn apply(&self, img: &Image) -> Result<Image> {
        match self.model {
            NoiseModel::GaussianAdditive { sigma } => inject_gaussian(img, sigma, self.seed),
            NoiseModel::SpeckleGamma { alpha } => inject_speckle(img, alpha, self.seed),
            NoiseModel::SaltPepper {
                density,
                salt_fraction,
            } => inject_salt_pepper(img, density, salt_fraction, self.seed),
        }
    }
}

fn check_sigma(sigma: f64) -> Result<()> {
    if sigma.is_finite() && sigma > 0.0 {
        Ok(())
    } else {
        Err(Error::contract(format!(
            "gaussian sigma must be positive, got {sigma}"
        )))
    }
}

fn check_alpha(alpha: u32) -> Result<()> {
    if alpha >= 1 {
        Ok(())
    } else {
        Err(Error::contract("speckle alpha must be an integer >= 1"))
    }
}

fn check_probabilities(density: f64, salt_fraction: f64) -> Result<()> {
    for (name, p) in [("density", density), ("salt fraction", salt_fraction)] {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::contract(format!(
                "{name} must lie in [0, 1], got {p}"
            )));
        }
    }
    Ok(())
}

fn map_indexed(img: &Image, f: impl Fn(u64, f64) -> f64) -> Image {
    let pixels = img
        .pixels()
        .iter()
        .enumerate()
        .map(|(i, &v)| f(i as u64, v))
        .collect();
    Image::from_raw(img.width(), img.height(), pixels)
}

/// Standard normal variate via Box-Muller on two keyed uniforms.
#[inline]
fn standard_normal(rng: &CounterRng, index: u64) -> f64 {
    let u1 = rng.uniform(index, 0);
    let u2 = rng.uniform(index, 1);
    (-2.0 * u1.ln()).sqrt() * (TAU * u2).cos()
}

/// Gamma variate with integer shape `alpha` and scale `1/alpha`: the sum of
/// `alpha` unit exponentials, scaled. Mean 1, variance `1/alpha`.
#[inline]
fn unit_mean_gamma(rng: &CounterRng, index: u64, alpha: u32) -> f64 {
    let sum: f64 = (0..u64::from(alpha))
        .map(|k| -rng.uniform(index, k).ln())
        .sum();
    sum / f64::from(alpha)
}

/// Adds zero-mean Gaussian noise. The result is not clamped.
pub fn inject_gaussian(img: &Image, sigma: f64, seed: u64) -> Result<Image> {
    check_sigma(sigma)?;
    let rng = CounterRng::new(seed);
    Ok(map_indexed(img, |i, v| {
        v + sigma * standard_normal(&rng, i)
    }))
}

/// Multiplies every pixel by a unit-mean gamma gain with shape `alpha`.
pub fn inject_speckle(img: &Image, alpha: u32, seed: u64) -> Result<Image> {
    check_alpha(alpha)?;
    let rng = CounterRng::new(seed);
    Ok(map_indexed(img, |i, v| v * unit_mean_gamma(&rng, i, alpha)))
}

/// Sets a random subset of pixels to 0 or 255; all other pixels are copied.
pub fn inject_salt_pepper(
    img: &Image,
    density: f64,
    salt_fraction: f64,
    seed: u64,
) -> Result<Image> {
    check_probabilities(density, salt_fraction)?;
    let rng = CounterRng::new(seed);
    Ok(map_indexed(img, |i, v| {
        if rng.uniform(i, 0) >= density {
            v
        } else if rng.uniform(i, 1) < salt_fraction {
            MAX_VALUE
        } else {
            0.0
        }
    }))
}
