use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ReportFormat {
    #[default]
    Csv,
    Markdown,
}

impl ReportFormat {
    pub fn extension(self) -> &'static str {
        match self {
            ReportFormat::Csv => "csv",
            ReportFormat::Markdown => "md",
        }
    }
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(ReportFormat::Csv),
            "markdown" | "md" => Ok(ReportFormat::Markdown),
            _ => Err(Error::Config(format!(
                "unknown report format `{s}` (expected csv or markdown)"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub serial: usize,
    pub method: String,
    pub rmse: f64,
    pub snr: f64,
    pub psnr: f64,
}

/// Comparative results, one row per filtering method, serials `1..=n`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct BenchTable {
    rows: Vec<BenchRow>,
}

impl BenchTable {
    pub fn new() -> Self {
        BenchTable::default()
    }

    /// Builds a table from externally supplied rows, e.g. published results
    /// for methods this crate does not implement.
    pub fn from_rows(rows: Vec<BenchRow>) -> Result<Self> {
        for (i, row) in rows.iter().enumerate() {
            if row.serial != i + 1 {
                return Err(Error::contract(format!(
                    "row {} has serial {}, expected {}",
                    i + 1,
                    row.serial,
                    i + 1
                )));
            }
        }
        Ok(BenchTable { rows })
    }

    /// Appends a row with the next serial number.
    pub fn push(&mut self, method: impl Into<String>, rmse: f64, snr: f64, psnr: f64) {
        let serial = self.rows.len() + 1;
        self.rows.push(BenchRow {
            serial,
            method: method.into(),
            rmse,
            snr,
            psnr,
        });
    }

    pub fn rows(&self) -> &[BenchRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

/// Formats `x` with exactly two decimals, rounding half away from zero.
///
/// Rounding is applied to the shortest decimal representation that
/// round-trips to `x`, so `2.005` renders as `2.01` even though the nearest
/// binary double lies just below it. Non-finite values render as `inf`,
/// `-inf` and `nan`.
pub fn format_fixed2(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    let text = x.abs().to_string();
    let (int_part, frac_part) = text.split_once('.').unwrap_or((&text, ""));
    let mut digits: Vec<u8> = int_part.bytes().collect();
    let mut frac: Vec<u8> = frac_part.bytes().take(2).collect();
    frac.resize(2, b'0');
    digits.extend_from_slice(&frac);

    if frac_part.as_bytes().get(2).is_some_and(|&d| d >= b'5') {
        let mut i = digits.len();
        loop {
            if i == 0 {
                digits.insert(0, b'1');
                break;
            }
            i -= 1;
            if digits[i] == b'9' {
                digits[i] = b'0';
            } else {
                digits[i] += 1;
                break;
            }
        }
    }

    let split = digits.len() - 2;
    let body = format!(
        "{}.{}",
        std::str::from_utf8(&digits[..split]).expect("ascii digits"),
        std::str::from_utf8(&digits[split..]).expect("ascii digits")
    );
    let is_zero = digits.iter().all(|&d| d == b'0');
    if x < 0.0 && !is_zero {
        format!("-{body}")
    } else {
        body
    }
}

/// Shortest round-trip representation, with `inf`/`-inf`/`nan` spelled out.
pub(crate) fn format_full(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:?}")
    }
}

fn csv_field(text: &str) -> String {
    if text.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_string()
    }
}

pub const CSV_HEADER: &str = "s_no,method,rmse,snr,psnr";

fn render_with(table: &BenchTable, format: ReportFormat, number: fn(f64) -> String) -> String {
    let mut out = String::new();
    match format {
        ReportFormat::Csv => {
            out.push_str(CSV_HEADER);
            out.push('\n');
            for row in table.rows() {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    row.serial,
                    csv_field(&row.method),
                    number(row.rmse),
                    number(row.snr),
                    number(row.psnr)
                );
            }
        }
        ReportFormat::Markdown => {
            out.push_str("| S.No | FILTERING METHOD | RMSE | SNR | PSNR |\n");
            out.push_str("|---:|---|---:|---:|---:|\n");
            for row in table.rows() {
                let _ = writeln!(
                    out,
                    "| {} | {} | {} | {} | {} |",
                    row.serial,
                    row.method.replace('|', "\\|"),
                    number(row.rmse),
                    number(row.snr),
                    number(row.psnr)
                );
            }
        }
    }
    out
}

/// Renders the table with two-decimal values.
pub fn render_table(table: &BenchTable, format: ReportFormat) -> String {
    render_with(table, format, format_fixed2)
}

/// CSV with full-precision values, written next to the rounded report.
pub fn render_full_precision(table: &BenchTable) -> String {
    render_with(table, ReportFormat::Csv, format_full)
}
