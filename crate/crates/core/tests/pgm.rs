mod common;

use proptest::prelude::*;
use sonobench::image::{decode_pgm, encode_pgm, load_pgm, save_pgm, PgmFormat};
use sonobench::Image;

use common::TestRng;

fn format_strategy() -> impl Strategy<Value = PgmFormat> {
    prop_oneof![Just(PgmFormat::P2), Just(PgmFormat::P5)]
}

proptest! {
    #[test]
    fn load_of_save_is_quantize(
        (w, h, px) in (1usize..20, 1usize..20).prop_flat_map(|(w, h)| {
            (Just(w), Just(h), prop::collection::vec(-50.0..300.0f64, w * h))
        }),
        format in format_strategy(),
    ) {
        let img = Image::new(w, h, px).unwrap();
        let back = decode_pgm(&encode_pgm(&img, format)).unwrap();
        prop_assert_eq!(back, img.quantized());
    }

    #[test]
    fn integer_images_round_trip_exactly(
        (w, h, px) in (1usize..20, 1usize..20).prop_flat_map(|(w, h)| {
            (Just(w), Just(h), prop::collection::vec(0u8..=255, w * h))
        }),
        format in format_strategy(),
    ) {
        let img = Image::new(w, h, px.into_iter().map(f64::from).collect()).unwrap();
        prop_assert_eq!(decode_pgm(&encode_pgm(&img, format)).unwrap(), img);
    }
}

/// The same samples as a non-canonical P2 file with comments and irregular
/// whitespace.
fn messy_p2(w: usize, h: usize, samples: &[u8]) -> Vec<u8> {
    let mut text = format!("P2\n# fixture\n  {w}\t{h}\n# maxval next\n255\n");
    for (i, s) in samples.iter().enumerate() {
        text.push_str(&s.to_string());
        text.push_str(if i % 7 == 6 { "\n\n" } else { "   " });
    }
    text.into_bytes()
}

#[test]
fn save_of_load_is_canonical_64x64() {
    let mut rng = TestRng::new(64);
    let samples: Vec<u8> = (0..64 * 64).map(|_| rng.below(256) as u8).collect();
    let dir = tempfile::tempdir().unwrap();

    // Canonical P5, built byte by byte without the crate's encoder.
    let mut canonical_p5 = b"P5\n64 64\n255\n".to_vec();
    canonical_p5.extend_from_slice(&samples);

    let messy = dir.path().join("messy.pgm");
    std::fs::write(&messy, messy_p2(64, 64, &samples)).unwrap();
    let resaved = dir.path().join("canonical.pgm");
    save_pgm(&load_pgm(&messy).unwrap(), &resaved, PgmFormat::P5).unwrap();
    assert_eq!(std::fs::read(&resaved).unwrap(), canonical_p5);

    // A canonical P5 file survives load/save byte for byte.
    let p5 = dir.path().join("p5.pgm");
    std::fs::write(&p5, &canonical_p5).unwrap();
    save_pgm(&load_pgm(&p5).unwrap(), &resaved, PgmFormat::P5).unwrap();
    assert_eq!(std::fs::read(&resaved).unwrap(), canonical_p5);

    // And a canonical P2 one.
    save_pgm(&load_pgm(&p5).unwrap(), &resaved, PgmFormat::P2).unwrap();
    let p2_bytes = std::fs::read(&resaved).unwrap();
    let p2 = dir.path().join("p2.pgm");
    std::fs::write(&p2, &p2_bytes).unwrap();
    save_pgm(&load_pgm(&p2).unwrap(), &resaved, PgmFormat::P2).unwrap();
    assert_eq!(std::fs::read(&resaved).unwrap(), p2_bytes);
}

#[test]
fn random_32x32_round_trip() {
    let mut rng = TestRng::new(32);
    let img = rng.real_image(32, 32).map(|v| v * 1.2 - 20.0);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("x.pgm");
    save_pgm(&img, &path, PgmFormat::P5).unwrap();
    let back = load_pgm(&path).unwrap();
    assert_eq!(back, img.quantized());
    assert_eq!(
        std::fs::metadata(&path).unwrap().len() as usize,
        "P5\n32 32\n255\n".len() + 32 * 32
    );
}

#[test]
fn unwritable_path_is_io_error() {
    let img = Image::filled(2, 2, 1.0);
    let err = save_pgm(&img, "/nonexistent-dir/x.pgm", PgmFormat::P5).unwrap_err();
    assert!(matches!(err, sonobench::Error::Io { .. }));
}
