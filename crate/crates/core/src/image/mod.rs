//! Grayscale raster type, window extraction and border handling.

mod pgm;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub use pgm::{decode_pgm, encode_pgm, load_pgm, save_pgm, PgmError, PgmErrorKind, PgmFormat};

/// Nominal intensity ceiling of every image handled by this crate.
pub const MAX_VALUE: f64 = 255.0;

/// Row-major grayscale image with real-valued intensities.
///
/// Intensities are kept as `f64` so that filters such as the standard
/// deviation can produce fractional output. Values are only clamped to
/// `[0, 255]` and rounded when written to a file (see [`Image::quantized`]).
#[derive(Clone, Debug, PartialEq)]
pub struct Image {
    width: usize,
    height: usize,
    pixels: Vec<f64>,
}

impl Image {
    pub fn new(width: usize, height: usize, pixels: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::contract(format!(
                "image dimensions must be positive, got {width}x{height}"
            )));
        }
        if pixels.len() != width * height {
            return Err(Error::contract(format!(
                "{width}x{height} image needs {} pixels, got {}",
                width * height,
                pixels.len()
            )));
        }
        if let Some(i) = pixels.iter().position(|v| !v.is_finite()) {
            return Err(Error::contract(format!(
                "pixel {i} is not finite ({})",
                pixels[i]
            )));
        }
        Ok(Image {
            width,
            height,
            pixels,
        })
    }

    /// Builds an image by evaluating `f(x, y)` at every pixel.
    ///
    /// # Panics
    ///
    /// Panics if either dimension is zero or `f` returns a non-finite value.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut pixels = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                pixels.push(f(x, y));
            }
        }
        Image::new(width, height, pixels).expect("from_fn produced an invalid image")
    }

    pub fn filled(width: usize, height: usize, value: f64) -> Self {
        Image::from_fn(width, height, |_, _| value)
    }

    /// Internal constructor for callers that already uphold the invariants.
    pub(crate) fn from_raw(width: usize, height: usize, pixels: Vec<f64>) -> Self {
        debug_assert_eq!(pixels.len(), width * height);
        debug_assert!(pixels.iter().all(|v| v.is_finite()));
        Image {
            width,
            height,
            pixels,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }

    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }

    pub fn into_pixels(self) -> Vec<f64> {
        self.pixels
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.pixels[y * self.width + x]
    }

    pub fn same_dimensions(&self, other: &Image) -> bool {
        self.width == other.width && self.height == other.height
    }

    /// Applies `f` to every intensity.
    ///
    /// # Panics
    ///
    /// Panics if `f` produces a non-finite value.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Image {
        let pixels: Vec<f64> = self.pixels.iter().map(|&v| f(v)).collect();
        assert!(
            pixels.iter().all(|v| v.is_finite()),
            "map produced a non-finite intensity"
        );
        Image::from_raw(self.width, self.height, pixels)
    }

    /// Intensities clamped to `[0, 255]` and rounded half away from zero.
    pub fn quantized_samples(&self) -> Vec<u8> {
        self.pixels.iter().map(|&v| quantize(v)).collect()
    }

    /// The image as it would read back after a round-trip through a PGM file.
    pub fn quantized(&self) -> Image {
        self.map(|v| f64::from(quantize(v)))
    }
}

/// Clamps to `[0, 255]` and rounds half away from zero.
#[inline]
pub fn quantize(v: f64) -> u8 {
    v.clamp(0.0, MAX_VALUE).round() as u8
}

/// Rule for reading coordinates that fall outside the image.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum BorderPolicy {
    /// Clamp to the nearest valid row/column.
    #[default]
    Replicate,
    /// Mirror about the edge pixel without repeating it (`-1 -> 1`).
    Reflect,
    /// Read zero.
    Zero,
}

impl BorderPolicy {
    /// Maps a possibly out-of-range coordinate onto `0..len`, or `None` when
    /// the policy reads a constant zero there.
    #[inline]
    pub fn resolve(self, i: isize, len: usize) -> Option<usize> {
        let n = len as isize;
        if (0..n).contains(&i) {
            return Some(i as usize);
        }
        match self {
            BorderPolicy::Replicate => Some(i.clamp(0, n - 1) as usize),
            BorderPolicy::Reflect => {
                if n == 1 {
                    return Some(0);
                }
                let period = 2 * (n - 1);
                let m = i.rem_euclid(period);
                Some(if m >= n { period - m } else { m } as usize)
            }
            BorderPolicy::Zero => None,
        }
    }

    /// Reads `img(x, y)` with out-of-range coordinates resolved by the policy.
    #[inline]
    pub fn read(self, img: &Image, x: isize, y: isize) -> f64 {
        match (self.resolve(x, img.width), self.resolve(y, img.height)) {
            (Some(cx), Some(cy)) => img.get(cx, cy),
            _ => 0.0,
        }
    }
}

impl fmt::Display for BorderPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BorderPolicy::Replicate => "replicate",
            BorderPolicy::Reflect => "reflect",
            BorderPolicy::Zero => "zero",
        })
    }
}

impl FromStr for BorderPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "replicate" => Ok(BorderPolicy::Replicate),
            "reflect" => Ok(BorderPolicy::Reflect),
            "zero" => Ok(BorderPolicy::Zero),
            _ => Err(Error::contract(format!(
                "unknown border policy `{s}` (expected replicate, reflect or zero)"
            ))),
        }
    }
}

/// Side length of a square window: odd and at least 3.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WindowSize(usize);

impl WindowSize {
    /// The 3x3 window.
    pub const DEFAULT: WindowSize = WindowSize(3);

    pub fn new(size: usize) -> Result<Self> {
        if size < 3 || size.is_multiple_of(2) {
            return Err(Error::contract(format!(
                "window size must be odd and at least 3, got {size}"
            )));
        }
        Ok(WindowSize(size))
    }

    pub fn get(self) -> usize {
        self.0
    }

    pub fn radius(self) -> usize {
        self.0 / 2
    }

    pub fn area(self) -> usize {
        self.0 * self.0
    }
}

impl Default for WindowSize {
    fn default() -> Self {
        WindowSize::DEFAULT
    }
}

impl fmt::Display for WindowSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The `n x n` neighbourhood of a pixel, in raster order.
#[derive(Clone, Debug, PartialEq)]
pub struct Window {
    size: WindowSize,
    values: Vec<f64>,
}

impl Window {
    pub fn new(size: WindowSize, values: Vec<f64>) -> Result<Self> {
        if values.len() != size.area() {
            return Err(Error::contract(format!(
                "a {size}x{size} window holds {} values, got {}",
                size.area(),
                values.len()
            )));
        }
        Ok(Window { size, values })
    }

    pub fn size(&self) -> WindowSize {
        self.size
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Extracts the `size x size` window centred on `(x, y)`.
pub fn window_at(
    img: &Image,
    x: usize,
    y: usize,
    size: usize,
    policy: BorderPolicy,
) -> Result<Window> {
    let size = WindowSize::new(size)?;
    if x >= img.width || y >= img.height {
        return Err(Error::contract(format!(
            "window centre ({x}, {y}) lies outside the {}x{} image",
            img.width, img.height
        )));
    }
    let mut values = Vec::with_capacity(size.area());
    fill_window(img, x, y, size, policy, &mut values);
    Ok(Window { size, values })
}

/// Writes the window around `(x, y)` into `out`, reusing its allocation.
pub(crate) fn fill_window(
    img: &Image,
    x: usize,
    y: usize,
    size: WindowSize,
    policy: BorderPolicy,
    out: &mut Vec<f64>,
) {
    out.clear();
    let r = size.radius() as isize;
    let (cx, cy) = (x as isize, y as isize);
    for dy in -r..=r {
        for dx in -r..=r {
            out.push(policy.read(img, cx + dx, cy + dy));
        }
    }
}
