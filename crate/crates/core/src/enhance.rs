//! Histogram equalization and seeded region growing.

use std::collections::VecDeque;
use std::path::Path;

use crate::error::{Error, Result};
use crate::image::{quantize, save_pgm, Image, PgmFormat, MAX_VALUE};

/// Lookup table from a quantized input level to an output intensity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EqualizationMap {
    lut: [u8; 256],
}

impl EqualizationMap {
    pub fn lut(&self) -> &[u8; 256] {
        &self.lut
    }

    pub fn map_level(&self, level: u8) -> u8 {
        self.lut[level as usize]
    }

    pub fn apply(&self, img: &Image) -> Image {
        img.map(|v| f64::from(self.lut[quantize(v) as usize]))
    }
}

/// 256-bin histogram of the quantized image.
pub fn histogram(img: &Image) -> [u64; 256] {
    let mut hist = [0u64; 256];
    for &v in img.pixels() {
        hist[quantize(v) as usize] += 1;
    }
    hist
}

/// CDF-based equalization on the 256-level histogram:
/// `lut[v] = round(255 * CDF(v))`, rounding half away from zero.
pub fn histogram_equalize(img: &Image) -> (Image, EqualizationMap) {
    let hist = histogram(img);
    let total = img.len() as f64;
    let mut lut = [0u8; 256];
    let mut cumulative = 0u64;
    for (level, &count) in hist.iter().enumerate() {
        cumulative += count;
        lut[level] = (MAX_VALUE * cumulative as f64 / total).round() as u8;
    }
    let map = EqualizationMap { lut };
    (map.apply(img), map)
}

/// Boolean membership per pixel, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegionMask {
    width: usize,
    height: usize,
    member: Vec<bool>,
}

impl RegionMask {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.member[y * self.width + x]
    }

    pub fn members(&self) -> &[bool] {
        &self.member
    }

    pub fn count(&self) -> usize {
        self.member.iter().filter(|&&m| m).count()
    }

    /// Members as 255, everything else as 0.
    pub fn to_image(&self) -> Image {
        let pixels = self
            .member
            .iter()
            .map(|&m| if m { MAX_VALUE } else { 0.0 })
            .collect();
        Image::from_raw(self.width, self.height, pixels)
    }

    pub fn save_pgm(&self, path: impl AsRef<Path>) -> Result<()> {
        save_pgm(&self.to_image(), path, PgmFormat::P5)
    }
}

/// Grows the 4-connected region around `(seed_x, seed_y)` whose intensities
/// lie within `tolerance` of the seed pixel's intensity.
///
/// The criterion always compares against the seed value, never a running
/// region mean, so the result does not depend on visiting order.
pub fn region_grow(
    img: &Image,
    seed_x: usize,
    seed_y: usize,
    tolerance: f64,
) -> Result<RegionMask> {
    let (w, h) = (img.width(), img.height());
    if seed_x >= w || seed_y >= h {
        return Err(Error::contract(format!(
            "seed ({seed_x}, {seed_y}) lies outside the {w}x{h} image"
        )));
    }
    if !(tolerance >= 0.0) {
        return Err(Error::contract(format!(
            "tolerance must be non-negative, got {tolerance}"
        )));
    }

    let reference = img.get(seed_x, seed_y);
    let accepts = |i: usize| (img.pixels()[i] - reference).abs() <= tolerance;

    let mut member = vec![false; w * h];
    let mut queue = VecDeque::new();
    let start = seed_y * w + seed_x;
    member[start] = true;
    queue.push_back(start);

    while let Some(i) = queue.pop_front() {
        let (x, y) = (i % w, i / w);
        let neighbours = [
            (x > 0).then(|| i - 1),
            (x + 1 < w).then(|| i + 1),
            (y > 0).then(|| i - w),
            (y + 1 < h).then(|| i + w),
        ];
        for j in neighbours.into_iter().flatten() {
            if !member[j] && accepts(j) {
                member[j] = true;
                queue.push_back(j);
            }
        }
    }

    Ok(RegionMask {
        width: w,
        height: h,
        member,
    })
}
