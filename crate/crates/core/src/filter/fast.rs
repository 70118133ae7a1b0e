//! Optimized filter engine.
//!
//! All paths first materialise the border-resolved image once (a padded
//! buffer with `r = n/2` extra rows and columns on each side), after which
//! every window is a plain rectangle of the buffer.
//!
//! - median: Huang's running 256-bin histogram, sliding along each row and
//!   tracking the median level and the count of samples below it
//! - max/min: separable passes with a monotone deque, O(1) amortized per pixel
//! - mean/variance/std-dev: separable running sums of shifted values and
//!   their squares

use std::collections::VecDeque;

use super::{FilterKind, FilterSpec};
use crate::image::{BorderPolicy, Image};

/// Windows whose running-sum variance falls below this are recomputed with
/// the two-pass formula; `E[x^2] - E[x]^2` loses all precision there, and the
/// square root amplifies what is left.
const FLAT_VARIANCE: f64 = 1.0;

struct Padded {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl Padded {
    fn new(img: &Image, r: usize, policy: BorderPolicy) -> Self {
        let width = img.width() + 2 * r;
        let height = img.height() + 2 * r;
        let r = r as isize;
        let mut data = Vec::with_capacity(width * height);
        for py in 0..height as isize {
            for px in 0..width as isize {
                data.push(policy.read(img, px - r, py - r));
            }
        }
        Padded {
            width,
            height,
            data,
        }
    }

    fn row(&self, y: usize) -> &[f64] {
        &self.data[y * self.width..(y + 1) * self.width]
    }
}

pub(super) fn apply(img: &Image, spec: &FilterSpec) -> Image {
    let n = spec.window.get();
    let padded = Padded::new(img, spec.window.radius(), spec.border);
    let (w, h) = (img.width(), img.height());
    let pixels = match spec.kind {
        FilterKind::Median => median(&padded, n, w, h),
        FilterKind::Max => extremum(&padded, n, w, h, |a, b| a >= b),
        FilterKind::Min => extremum(&padded, n, w, h, |a, b| a <= b),
        FilterKind::Mean | FilterKind::Variance | FilterKind::StdDev => {
            moments(&padded, n, w, h, spec.kind)
        }
    };
    Image::from_raw(w, h, pixels)
}

fn median(padded: &Padded, n: usize, w: usize, h: usize) -> Vec<f64> {
    // Rank inputs are already quantized, so every sample is an exact level.
    let levels: Vec<u8> = padded.data.iter().map(|&v| v as u8).collect();
    let pw = padded.width;
    let half = (n * n / 2) as u32;
    let mut out = Vec::with_capacity(w * h);
    let mut hist = [0u32; 256];

    for y in 0..h {
        hist.fill(0);
        for row in y..y + n {
            for &v in &levels[row * pw..row * pw + n] {
                hist[v as usize] += 1;
            }
        }
        // Establish the median for the first window of the row.
        let mut med = 0usize;
        let mut below = 0u32;
        while below + hist[med] <= half {
            below += hist[med];
            med += 1;
        }
        out.push(med as f64);

        for x in 1..w {
            for row in y..y + n {
                let base = row * pw;
                let gone = levels[base + x - 1] as usize;
                let come = levels[base + x + n - 1] as usize;
                hist[gone] -= 1;
                if gone < med {
                    below -= 1;
                }
                hist[come] += 1;
                if come < med {
                    below += 1;
                }
            }
            // Invariant afterwards: below <= half < below + hist[med].
            while below > half {
                med -= 1;
                below -= hist[med];
            }
            while below + hist[med] <= half {
                below += hist[med];
                med += 1;
            }
            out.push(med as f64);
        }
    }
    out
}

/// Sliding extremum of every length-`n` run of `src`, passed to `emit`.
/// `keeps(a, b)` is true when `a` dominates `b`.
fn sliding_extremum(
    src: impl Iterator<Item = f64>,
    n: usize,
    deque: &mut VecDeque<(usize, f64)>,
    keeps: impl Fn(f64, f64) -> bool,
    mut emit: impl FnMut(f64),
) {
    deque.clear();
    for (i, v) in src.enumerate() {
        while deque.back().is_some_and(|&(_, b)| keeps(v, b)) {
            deque.pop_back();
        }
        deque.push_back((i, v));
        if deque.front().is_some_and(|&(j, _)| j + n <= i) {
            deque.pop_front();
        }
        if i + 1 >= n {
            emit(deque.front().expect("deque holds the current sample").1);
        }
    }
}

fn extremum(
    padded: &Padded,
    n: usize,
    w: usize,
    h: usize,
    keeps: impl Fn(f64, f64) -> bool + Copy,
) -> Vec<f64> {
    let mut deque = VecDeque::with_capacity(n + 1);

    // Horizontal pass: w x padded.height.
    let mut horiz = Vec::with_capacity(w * padded.height);
    for y in 0..padded.height {
        sliding_extremum(padded.row(y).iter().copied(), n, &mut deque, keeps, |v| {
            horiz.push(v)
        });
    }

    // Vertical pass, column by column.
    let mut out = vec![0.0; w * h];
    for x in 0..w {
        let column = (0..padded.height).map(|y| horiz[y * w + x]);
        let mut y = 0;
        sliding_extremum(column, n, &mut deque, keeps, |v| {
            out[y * w + x] = v;
            y += 1;
        });
    }
    out
}

fn moments(padded: &Padded, n: usize, w: usize, h: usize, kind: FilterKind) -> Vec<f64> {
    // Shifting by a sample keeps sums small and makes constant regions
    // that share the shift value exactly zero.
    let shift = padded.data[0];
    let pw = padded.width;

    // Horizontal running sums: w x padded.height.
    let mut hs1 = Vec::with_capacity(w * padded.height);
    let mut hs2 = Vec::with_capacity(w * padded.height);
    for y in 0..padded.height {
        let row = padded.row(y);
        let (mut s1, mut s2) = (0.0, 0.0);
        for &v in &row[..n] {
            let d = v - shift;
            s1 += d;
            s2 += d * d;
        }
        hs1.push(s1);
        hs2.push(s2);
        for x in 1..w {
            let gone = row[x - 1] - shift;
            let come = row[x + n - 1] - shift;
            s1 += come - gone;
            s2 += come * come - gone * gone;
            hs1.push(s1);
            hs2.push(s2);
        }
    }

    // Vertical running sums over the horizontal ones.
    let mut s1: Vec<f64> = vec![0.0; w];
    let mut s2: Vec<f64> = vec![0.0; w];
    for row in 0..n {
        for x in 0..w {
            s1[x] += hs1[row * w + x];
            s2[x] += hs2[row * w + x];
        }
    }

    let area = (n * n) as f64;
    let mut out = Vec::with_capacity(w * h);
    for y in 0..h {
        if y > 0 {
            let (gone, come) = ((y - 1) * w, (y + n - 1) * w);
            for x in 0..w {
                s1[x] += hs1[come + x] - hs1[gone + x];
                s2[x] += hs2[come + x] - hs2[gone + x];
            }
        }
        for x in 0..w {
            let value = match kind {
                FilterKind::Mean => s1[x] / area + shift,
                _ => {
                    let mut var = ((area * s2[x] - s1[x] * s1[x]) / (area * area)).max(0.0);
                    if var < FLAT_VARIANCE {
                        var = two_pass_variance(padded.data.as_slice(), pw, x, y, n);
                    }
                    if kind == FilterKind::StdDev {
                        var.sqrt()
                    } else {
                        var
                    }
                }
            };
            out.push(value);
        }
    }
    out
}

fn two_pass_variance(data: &[f64], pw: usize, x: usize, y: usize, n: usize) -> f64 {
    let window: Vec<f64> = (y..y + n)
        .flat_map(|r| data[r * pw + x..r * pw + x + n].iter().copied())
        .collect();
    super::variance_of(&window)
}
