//! 8-bit PGM (P2 ASCII / P5 binary) reading and writing.
//!
//! Input accepts `#` comments and arbitrary whitespace in the header and any
//! `maxval` in `1..=255`; samples are taken as stored, without rescaling.
//! Output is canonical: maxval 255, single whitespace separators, no
//! comments, P2 lines no longer than 70 characters.

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use super::Image;
use crate::error::{Error, Result};

const P2_LINE_LIMIT: usize = 70;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PgmFormat {
    /// ASCII samples.
    P2,
    /// Binary samples, one byte each.
    #[default]
    P5,
}

impl FromStr for PgmFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "P2" => Ok(PgmFormat::P2),
            "P5" => Ok(PgmFormat::P5),
            _ => Err(Error::contract(format!(
                "unknown PGM format `{s}` (expected P2 or P5)"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PgmErrorKind {
    BadMagic,
    /// A header field is missing or not a decimal integer.
    BadHeaderField(&'static str),
    ZeroDimension,
    MaxvalOutOfRange(u64),
    /// The payload ended before `expected` samples were read.
    Truncated {
        expected: usize,
        found: usize,
    },
    SampleOutOfRange {
        value: u64,
        maxval: u64,
    },
    BadSample,
}

/// A PGM decoding failure at a byte offset into the input.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{kind} at byte offset {offset}")]
pub struct PgmError {
    pub offset: usize,
    pub kind: PgmErrorKind,
}

impl fmt::Display for PgmErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PgmErrorKind::BadMagic => f.write_str("not a P2/P5 PGM file"),
            PgmErrorKind::BadHeaderField(field) => write!(f, "malformed header field `{field}`"),
            PgmErrorKind::ZeroDimension => f.write_str("zero image dimension"),
            PgmErrorKind::MaxvalOutOfRange(v) => write!(f, "maxval {v} outside 1..=255"),
            PgmErrorKind::Truncated { expected, found } => {
                write!(
                    f,
                    "truncated payload: expected {expected} samples, found {found}"
                )
            }
            PgmErrorKind::SampleOutOfRange { value, maxval } => {
                write!(f, "sample {value} exceeds maxval {maxval}")
            }
            PgmErrorKind::BadSample => f.write_str("malformed ASCII sample"),
        }
    }
}

struct Cursor<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn err(&self, kind: PgmErrorKind) -> PgmError {
        PgmError {
            offset: self.pos,
            kind,
        }
    }

    fn skip_whitespace(&mut self, comments: bool) {
        while let Some(&b) = self.data.get(self.pos) {
            if b.is_ascii_whitespace() {
                self.pos += 1;
            } else if comments && b == b'#' {
                while let Some(&c) = self.data.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    /// Reads a run of decimal digits. `None` if there are none.
    fn number(&mut self) -> Option<u64> {
        let start = self.pos;
        let mut value: u64 = 0;
        while let Some(&b) = self.data.get(self.pos) {
            if !b.is_ascii_digit() {
                break;
            }
            value = value.saturating_mul(10).saturating_add(u64::from(b - b'0'));
            self.pos += 1;
        }
        (self.pos > start).then_some(value)
    }

    fn header_field(&mut self, field: &'static str) -> Result<u64, PgmError> {
        self.skip_whitespace(true);
        let at = self.pos;
        let value = self.number().ok_or(PgmError {
            offset: at,
            kind: PgmErrorKind::BadHeaderField(field),
        })?;
        // A number must be followed by whitespace, a comment, or the end.
        match self.data.get(self.pos) {
            Some(b) if !b.is_ascii_whitespace() && *b != b'#' => {
                Err(self.err(PgmErrorKind::BadHeaderField(field)))
            }
            _ => Ok(value),
        }
    }
}

/// Decodes an in-memory PGM file.
pub fn decode_pgm(data: &[u8]) -> Result<Image, PgmError> {
    let mut cur = Cursor { data, pos: 0 };
    let format = match data.get(..2) {
        Some(b"P2") => PgmFormat::P2,
        Some(b"P5") => PgmFormat::P5,
        _ => return Err(cur.err(PgmErrorKind::BadMagic)),
    };
    cur.pos = 2;
    if !matches!(data.get(2), Some(b) if b.is_ascii_whitespace() || *b == b'#') {
        return Err(cur.err(PgmErrorKind::BadMagic));
    }

    let width_at = cur.pos;
    let width = cur.header_field("width")?;
    let height = cur.header_field("height")?;
    if width == 0 || height == 0 {
        return Err(PgmError {
            offset: width_at,
            kind: PgmErrorKind::ZeroDimension,
        });
    }
    cur.skip_whitespace(true);
    let maxval_at = cur.pos;
    let maxval = cur.header_field("maxval")?;
    if !(1..=255).contains(&maxval) {
        return Err(PgmError {
            offset: maxval_at,
            kind: PgmErrorKind::MaxvalOutOfRange(maxval),
        });
    }

    let count = usize::try_from(width.saturating_mul(height))
        .map_err(|_| cur.err(PgmErrorKind::BadHeaderField("width")))?;
    let mut pixels = Vec::with_capacity(count.min(data.len()));

    match format {
        PgmFormat::P5 => {
            // Exactly one whitespace byte separates maxval from the raster.
            if cur.pos >= data.len() {
                return Err(cur.err(PgmErrorKind::Truncated {
                    expected: count,
                    found: 0,
                }));
            }
            cur.pos += 1;
            let payload = &data[cur.pos..];
            if payload.len() < count {
                return Err(PgmError {
                    offset: data.len(),
                    kind: PgmErrorKind::Truncated {
                        expected: count,
                        found: payload.len(),
                    },
                });
            }
            for (i, &b) in payload[..count].iter().enumerate() {
                if u64::from(b) > maxval {
                    return Err(PgmError {
                        offset: cur.pos + i,
                        kind: PgmErrorKind::SampleOutOfRange {
                            value: u64::from(b),
                            maxval,
                        },
                    });
                }
                pixels.push(f64::from(b));
            }
        }
        PgmFormat::P2 => {
            for found in 0..count {
                cur.skip_whitespace(true);
                if cur.pos >= data.len() {
                    return Err(cur.err(PgmErrorKind::Truncated {
                        expected: count,
                        found,
                    }));
                }
                let at = cur.pos;
                let value = cur
                    .number()
                    .ok_or_else(|| cur.err(PgmErrorKind::BadSample))?;
                if matches!(data.get(cur.pos), Some(b) if !b.is_ascii_whitespace() && *b != b'#') {
                    return Err(cur.err(PgmErrorKind::BadSample));
                }
                if value > maxval {
                    return Err(PgmError {
                        offset: at,
                        kind: PgmErrorKind::SampleOutOfRange { value, maxval },
                    });
                }
                pixels.push(value as f64);
            }
        }
    }

    Ok(Image::from_raw(width as usize, height as usize, pixels))
}

/// Encodes an image as a canonical PGM file.
pub fn encode_pgm(img: &Image, format: PgmFormat) -> Vec<u8> {
    let samples = img.quantized_samples();
    let magic = match format {
        PgmFormat::P2 => "P2",
        PgmFormat::P5 => "P5",
    };
    let mut out = format!("{magic}\n{} {}\n255\n", img.width(), img.height()).into_bytes();
    match format {
        PgmFormat::P5 => out.extend_from_slice(&samples),
        PgmFormat::P2 => {
            let mut line_len = 0;
            for s in samples {
                let text = s.to_string();
                if line_len > 0 {
                    if line_len + 1 + text.len() > P2_LINE_LIMIT {
                        out.push(b'\n');
                        line_len = 0;
                    } else {
                        out.push(b' ');
                        line_len += 1;
                    }
                }
                out.extend_from_slice(text.as_bytes());
                line_len += text.len();
            }
            out.push(b'\n');
        }
    }
    out
}

pub fn load_pgm(path: impl AsRef<Path>) -> Result<Image> {
    let path = path.as_ref();
    let data = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_pgm(&data).map_err(|source| Error::Pgm {
        path: path.to_path_buf(),
        source,
    })
}

pub fn save_pgm(img: &Image, path: impl AsRef<Path>, format: PgmFormat) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode_pgm(img, format)).map_err(|e| Error::io(path, e))
}
