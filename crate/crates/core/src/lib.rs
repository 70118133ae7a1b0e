//! Denoising benchmark toolkit for 8-bit grayscale images.
//!
//! The crate is organised around a small pipeline:
//!
//! - [`image`]: the [`Image`] value type, border handling and PGM I/O
//! - [`noise`]: seeded Gaussian, speckle (gamma) and salt-and-pepper injectors
//! - [`filter`]: windowed median/mean/max/min/std-dev/variance filters, each
//!   with a naive reference engine and an optimized engine
//! - [`metrics`]: MSE, RMSE, SNR and PSNR scoring
//! - [`enhance`]: histogram equalization and seeded region growing
//! - [`bench`]: declarative pipeline configs and comparative report tables
//! - [`cli`]: the `sonobench` command-line front end

pub mod bench;
pub mod cli;
pub mod enhance;
mod error;
pub mod filter;
pub mod image;
pub mod metrics;
pub mod noise;
mod rng;

pub use error::{Error, Result};
pub use image::{BorderPolicy, Image, Window, WindowSize};
