//! Full-reference quality metrics for a `(reference, test)` image pair.
//!
//! Two PSNR variants are provided. [`psnr_paper`] evaluates
//! `20 log10(255^2 / RMSE)`, the form used in the comparative report tables;
//! [`psnr_std`] is the conventional `10 log10(255^2 / MSE)`. They differ by
//! the constant `20 log10(255) ~ 48.13 dB`.
//!
//! Identical images have `MSE = 0`; both PSNR variants then return
//! `f64::INFINITY` rather than an error.

use crate::error::{Error, Result};
use crate::image::{Image, MAX_VALUE};

/// All metrics for one image pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricsReport {
    pub mse: f64,
    pub rmse: f64,
    /// `NaN` when the reference is constant and the error is not, since the
    /// ratio is undefined there.
    pub snr_db: f64,
    pub psnr_paper: f64,
    pub psnr_std: f64,
    pub pixel_count: usize,
}

impl MetricsReport {
    pub fn compute(reference: &Image, test: &Image) -> Result<Self> {
        let mse = mse(reference, test)?;
        let snr_db = match snr_db(reference, test) {
            Ok(v) => v,
            Err(Error::Domain(_)) => f64::NAN,
            Err(e) => return Err(e),
        };
        Ok(MetricsReport {
            mse,
            rmse: mse.sqrt(),
            snr_db,
            psnr_paper: psnr_paper_from_mse(mse),
            psnr_std: psnr_std_from_mse(mse),
            pixel_count: reference.len(),
        })
    }
}

fn check_dims(reference: &Image, test: &Image) -> Result<()> {
    if reference.same_dimensions(test) {
        Ok(())
    } else {
        Err(Error::contract(format!(
            "image dimensions differ: {}x{} vs {}x{}",
            reference.width(),
            reference.height(),
            test.width(),
            test.height()
        )))
    }
}

/// Mean squared pixel difference.
pub fn mse(reference: &Image, test: &Image) -> Result<f64> {
    check_dims(reference, test)?;
    let sum: f64 = reference
        .pixels()
        .iter()
        .zip(test.pixels())
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    Ok(sum / reference.len() as f64)
}

pub fn rmse(reference: &Image, test: &Image) -> Result<f64> {
    mse(reference, test).map(f64::sqrt)
}

/// Population variance (divisor `len`), two passes.
fn variance(values: impl Iterator<Item = f64> + Clone) -> f64 {
    let (sum, count) = values
        .clone()
        .fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
    let mean = sum / count as f64;
    values.map(|v| (v - mean) * (v - mean)).sum::<f64>() / count as f64
}

/// `10 log10(var(ref) / var(ref - test))` in decibels.
///
/// The denominator is the variance of the error image, not its mean square,
/// so a constant offset between the images does not count as noise. A zero
/// error variance yields `+inf`; a constant reference with nonzero error
/// variance is a [`Error::Domain`] error.
pub fn snr_db(reference: &Image, test: &Image) -> Result<f64> {
    check_dims(reference, test)?;
    let error = reference
        .pixels()
        .iter()
        .zip(test.pixels())
        .map(|(a, b)| a - b);
    let error_var = variance(error);
    if error_var == 0.0 {
        return Ok(f64::INFINITY);
    }
    let signal_var = variance(reference.pixels().iter().copied());
    if signal_var == 0.0 {
        return Err(Error::Domain(
            "SNR is undefined for a constant reference image".into(),
        ));
    }
    Ok(10.0 * (signal_var / error_var).log10())
}

/// Amplitude SNR `sqrt(var_t / var_n - 1)` of the additive noise model.
///
/// Pass the variance of the recorded (signal plus noise) image as
/// `sigma_t_sq` and the noise variance as `sigma_n_sq`; with that reading
/// the value is the ratio of signal to noise standard deviations.
pub fn snr_ratio(sigma_t_sq: f64, sigma_n_sq: f64) -> Result<f64> {
    if !(sigma_n_sq > 0.0 && sigma_n_sq.is_finite()) {
        return Err(Error::Domain(format!(
            "noise variance must be positive, got {sigma_n_sq}"
        )));
    }
    if !(sigma_t_sq >= sigma_n_sq) {
        return Err(Error::Domain(format!(
            "total variance {sigma_t_sq} is below noise variance {sigma_n_sq}"
        )));
    }
    Ok((sigma_t_sq / sigma_n_sq - 1.0).sqrt())
}

fn psnr_paper_from_mse(mse: f64) -> f64 {
    if mse == 0.0 {
        f64::INFINITY
    } else {
        20.0 * (MAX_VALUE * MAX_VALUE / mse.sqrt()).log10()
    }
}

fn psnr_std_from_mse(mse: f64) -> f64 {
    if mse == 0.0 {
        f64::INFINITY
    } else {
        10.0 * (MAX_VALUE * MAX_VALUE / mse).log10()
    }
}

/// `20 log10(255^2 / RMSE)`.
pub fn psnr_paper(reference: &Image, test: &Image) -> Result<f64> {
    mse(reference, test).map(psnr_paper_from_mse)
}

/// `10 log10(255^2 / MSE)`.
pub fn psnr_std(reference: &Image, test: &Image) -> Result<f64> {
    mse(reference, test).map(psnr_std_from_mse)
}
