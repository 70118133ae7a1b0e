#![allow(dead_code)]

use std::path::PathBuf;

use sonobench::Image;

/// SplitMix64 stream for test inputs; independent of the crate's noise RNG.
pub struct TestRng(u64);

impl TestRng {
    pub fn new(seed: u64) -> Self {
        TestRng(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }

    /// Real intensities in `[0, 255)`.
    pub fn real_image(&mut self, w: usize, h: usize) -> Image {
        Image::from_fn(w, h, |_, _| self.unit() * 255.0)
    }

    /// Integer intensities in `0..levels`.
    pub fn level_image(&mut self, w: usize, h: usize, levels: u64) -> Image {
        Image::from_fn(w, h, |_, _| self.below(levels) as f64)
    }
}

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

pub fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("golden")
        .join(name)
}

/// Naive loop oracle: window statistics straight from the definition.
pub fn window_values(img: &Image, x: usize, y: usize, n: usize) -> Vec<f64> {
    // Index-clamping reference for the replicate policy.
    let r = (n / 2) as isize;
    let mut v = Vec::new();
    for dy in -r..=r {
        for dx in -r..=r {
            let cx = (x as isize + dx).clamp(0, img.width() as isize - 1) as usize;
            let cy = (y as isize + dy).clamp(0, img.height() as isize - 1) as usize;
            v.push(img.get(cx, cy));
        }
    }
    v
}
