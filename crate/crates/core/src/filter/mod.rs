//! Sliding-window spatial filters.
//!
//! Every filter maps each pixel to a statistic of its `n x n` neighbourhood
//! (see [`window_at`](crate::image::window_at)). Two engines compute the same
//! result: [`FilterEngine::NaiveOracle`] gathers each window and reduces it
//! with the per-window functions in this module, while
//! [`FilterEngine::Optimized`] uses running histograms, monotone deques and
//! running sums.
//!
//! The rank filters (median, max, min) first quantize their input to integer
//! levels in `[0, 255]`; that is what allows the histogram median. Mean,
//! standard deviation and variance operate on the raw real intensities.

mod fast;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::image::{fill_window, BorderPolicy, Image, Window, WindowSize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FilterKind {
    Median,
    Mean,
    Max,
    Min,
    StdDev,
    Variance,
}

impl FilterKind {
    pub const ALL: [FilterKind; 6] = [
        FilterKind::Median,
        FilterKind::Mean,
        FilterKind::Max,
        FilterKind::Min,
        FilterKind::StdDev,
        FilterKind::Variance,
    ];

    /// Rank filters work on quantized integer levels.
    pub fn is_rank(self) -> bool {
        matches!(self, FilterKind::Median | FilterKind::Max | FilterKind::Min)
    }

    /// Reduces one window to this kind's statistic.
    pub fn reduce(self, window: &Window) -> f64 {
        reduce_values(self, window.values())
    }

    pub fn name(self) -> &'static str {
        match self {
            FilterKind::Median => "median",
            FilterKind::Mean => "mean",
            FilterKind::Max => "max",
            FilterKind::Min => "min",
            FilterKind::StdDev => "stddev",
            FilterKind::Variance => "variance",
        }
    }
}

impl fmt::Display for FilterKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FilterKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        match lower.as_str() {
            "median" => Ok(FilterKind::Median),
            "mean" => Ok(FilterKind::Mean),
            "max" => Ok(FilterKind::Max),
            "min" => Ok(FilterKind::Min),
            "stddev" | "std" => Ok(FilterKind::StdDev),
            "variance" | "var" => Ok(FilterKind::Variance),
            _ => Err(Error::contract(format!(
                "unknown filter kind `{s}` (expected median, mean, max, min, stddev or variance)"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FilterSpec {
    pub kind: FilterKind,
    pub window: WindowSize,
    pub border: BorderPolicy,
}

impl FilterSpec {
    pub fn new(kind: FilterKind, window: usize, border: BorderPolicy) -> Result<Self> {
        Ok(FilterSpec {
            kind,
            window: WindowSize::new(window)?,
            border,
        })
    }

    /// 3x3 window with replicated borders.
    pub fn with_defaults(kind: FilterKind) -> Self {
        FilterSpec {
            kind,
            window: WindowSize::DEFAULT,
            border: BorderPolicy::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum FilterEngine {
    /// Gather every window and reduce it directly. O(n^2) per pixel.
    NaiveOracle,
    #[default]
    Optimized,
}

impl FromStr for FilterEngine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "naive" | "oracle" | "naive-oracle" => Ok(FilterEngine::NaiveOracle),
            "optimized" | "fast" => Ok(FilterEngine::Optimized),
            _ => Err(Error::contract(format!(
                "unknown engine `{s}` (expected naive or optimized)"
            ))),
        }
    }
}

impl fmt::Display for FilterEngine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FilterEngine::NaiveOracle => "naive",
            FilterEngine::Optimized => "optimized",
        })
    }
}

/// Filters `img`, producing an image of the same dimensions.
pub fn apply_filter(img: &Image, spec: &FilterSpec, engine: FilterEngine) -> Image {
    let input;
    let src = if spec.kind.is_rank() {
        input = img.quantized();
        &input
    } else {
        img
    };
    match engine {
        FilterEngine::NaiveOracle => naive(src, spec),
        FilterEngine::Optimized => fast::apply(src, spec),
    }
}

fn naive(img: &Image, spec: &FilterSpec) -> Image {
    let mut buf = Vec::with_capacity(spec.window.area());
    let mut out = Vec::with_capacity(img.len());
    for y in 0..img.height() {
        for x in 0..img.width() {
            fill_window(img, x, y, spec.window, spec.border, &mut buf);
            out.push(reduce_values(spec.kind, &buf));
        }
    }
    Image::from_raw(img.width(), img.height(), out)
}

fn reduce_values(kind: FilterKind, values: &[f64]) -> f64 {
    match kind {
        FilterKind::Median => median_of(values),
        FilterKind::Mean => mean_of(values),
        FilterKind::Max => values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        FilterKind::Min => values.iter().copied().fold(f64::INFINITY, f64::min),
        FilterKind::StdDev => variance_of(values).sqrt(),
        FilterKind::Variance => variance_of(values),
    }
}

/// Both moments are taken about the first sample, which leaves the values
/// unchanged mathematically and makes constant windows exact.
fn mean_of(values: &[f64]) -> f64 {
    let shift = values[0];
    shift + values.iter().map(|v| v - shift).sum::<f64>() / values.len() as f64
}

/// Population variance, two passes.
fn variance_of(values: &[f64]) -> f64 {
    let shift = values[0];
    let n = values.len() as f64;
    let mean = values.iter().map(|v| v - shift).sum::<f64>() / n;
    values
        .iter()
        .map(|v| {
            let d = v - shift - mean;
            d * d
        })
        .sum::<f64>()
        / n
}

fn median_of(values: &[f64]) -> f64 {
    let mut scratch = values.to_vec();
    let mid = scratch.len() / 2;
    *scratch.select_nth_unstable_by(mid, f64::total_cmp).1
}

/// Brightest value in the window (grayscale dilation).
pub fn max_filter(window: &Window) -> f64 {
    reduce_values(FilterKind::Max, window.values())
}

/// Darkest value in the window (grayscale erosion).
pub fn min_filter(window: &Window) -> f64 {
    reduce_values(FilterKind::Min, window.values())
}

/// Population standard deviation of the window: `sqrt(sum((x - mean)^2) / n^2)`.
pub fn stddev_filter(window: &Window) -> f64 {
    reduce_values(FilterKind::StdDev, window.values())
}

/// Population variance of the window, the square of [`stddev_filter`].
pub fn variance_filter(window: &Window) -> f64 {
    reduce_values(FilterKind::Variance, window.values())
}

/// Middle order statistic; `n^2` is odd so it is unique.
pub fn median_filter(window: &Window) -> f64 {
    reduce_values(FilterKind::Median, window.values())
}

pub fn mean_filter(window: &Window) -> f64 {
    reduce_values(FilterKind::Mean, window.values())
}
