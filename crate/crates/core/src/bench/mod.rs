//! Comparative denoising benchmark: noise, filter bank, metrics, report.

mod config;
mod table;

use std::fs;
use std::path::{Path, PathBuf};

pub use config::{LabeledFilter, MetricsReference, PipelineConfig};
pub use table::{
    format_fixed2, render_full_precision, render_table, BenchRow, BenchTable, ReportFormat,
    CSV_HEADER,
};

use crate::error::{Error, Result};
use crate::filter::apply_filter;
use crate::image::{load_pgm, save_pgm, Image, PgmFormat};
use crate::metrics::{self, MetricsReport};

/// Name of the noisy image written when the config injects noise.
pub const NOISY_FILE: &str = "noisy.pgm";
/// Full-precision companion to the rounded report.
pub const FULL_PRECISION_FILE: &str = "report_full.csv";

/// Report file name for a format: `report.csv` or `report.md`.
pub fn report_file_name(format: ReportFormat) -> String {
    format!("report.{}", format.extension())
}

/// Output file for the filter at `serial` (1-based), e.g. `01_median_filter.pgm`.
pub fn output_file_name(serial: usize, label: &str) -> String {
    let mut slug = String::new();
    for c in label.chars() {
        if c.is_ascii_alphanumeric() {
            slug.push(c.to_ascii_lowercase());
        } else if !slug.ends_with('_') {
            slug.push('_');
        }
    }
    let slug = slug.trim_matches('_');
    format!("{serial:02}_{slug}.pgm")
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Runs the configured pipeline and writes its artefacts into `output_dir`:
/// the noisy image (if any), one PGM per filter, the rounded report and the
/// full-precision sidecar.
///
/// Each filter output is scored exactly as it is stored on disk (clamped and
/// rounded to 8 bits), so metrics recomputed from the saved files reproduce
/// the table.
pub fn run_pipeline(config: &PipelineConfig) -> Result<BenchTable> {
    config.validate()?;
    let input = load_pgm(&config.input).map_err(|e| e.at_stage("load input"))?;
    let reference = match &config.reference {
        MetricsReference::CleanInput => input.clone(),
        MetricsReference::ProvidedPath(path) => {
            load_pgm(path).map_err(|e| e.at_stage("load reference"))?
        }
    };
    if !reference.same_dimensions(&input) {
        return Err(Error::contract(format!(
            "reference is {}x{} but input is {}x{}",
            reference.width(),
            reference.height(),
            input.width(),
            input.height()
        ))
        .at_stage("load reference"));
    }

    let noisy = match &config.noise {
        Some(spec) => spec.apply(&input).map_err(|e| e.at_stage("inject noise"))?,
        None => input,
    };

    let out_dir = &config.output_dir;
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e).at_stage("write outputs"))?;
    if config.noise.is_some() {
        save_pgm(&noisy, out_dir.join(NOISY_FILE), PgmFormat::P5)
            .map_err(|e| e.at_stage("write outputs"))?;
    }

    let mut table = BenchTable::new();
    for (i, filter) in config.filters.iter().enumerate() {
        let stage = format!("filter `{}`", filter.label);
        let filtered = apply_filter(&noisy, &filter.spec, filter.engine).quantized();
        let path = out_dir.join(output_file_name(i + 1, &filter.label));
        save_pgm(&filtered, &path, PgmFormat::P5).map_err(|e| e.at_stage(stage.as_str()))?;
        let scores = score(&reference, &filtered).map_err(|e| e.at_stage(stage.as_str()))?;
        table.push(
            filter.label.clone(),
            scores.rmse,
            scores.snr_db,
            scores.psnr_paper,
        );
    }

    let report_path = out_dir.join(report_file_name(config.report_format));
    write_text(&report_path, &render_table(&table, config.report_format))
        .map_err(|e| e.at_stage("write report"))?;
    write_text(
        &out_dir.join(FULL_PRECISION_FILE),
        &render_full_precision(&table),
    )
    .map_err(|e| e.at_stage("write report"))?;
    Ok(table)
}

fn score(reference: &Image, test: &Image) -> Result<MetricsReport> {
    MetricsReport::compute(reference, test)
}

/// Recomputes the rows of a finished run from the images on disk.
pub fn rescore_outputs(config: &PipelineConfig) -> Result<BenchTable> {
    let reference = match &config.reference {
        MetricsReference::CleanInput => load_pgm(&config.input)?,
        MetricsReference::ProvidedPath(path) => load_pgm(path)?,
    };
    let mut table = BenchTable::new();
    for (i, filter) in config.filters.iter().enumerate() {
        let saved = load_pgm(
            config
                .output_dir
                .join(output_file_name(i + 1, &filter.label)),
        )?;
        table.push(
            filter.label.clone(),
            metrics::rmse(&reference, &saved)?,
            metrics::snr_db(&reference, &saved).unwrap_or(f64::NAN),
            metrics::psnr_paper(&reference, &saved)?,
        );
    }
    Ok(table)
}

/// Every file a run of `config` writes, in a stable order.
pub fn output_paths(config: &PipelineConfig) -> Vec<PathBuf> {
    let dir = &config.output_dir;
    let mut paths = Vec::new();
    if config.noise.is_some() {
        paths.push(dir.join(NOISY_FILE));
    }
    for (i, f) in config.filters.iter().enumerate() {
        paths.push(dir.join(output_file_name(i + 1, &f.label)));
    }
    paths.push(dir.join(report_file_name(config.report_format)));
    paths.push(dir.join(FULL_PRECISION_FILE));
    paths
}
