//! Pipeline configuration files.
//!
//! A config is a TOML document; `docs/pipeline-config.md` gives the full
//! grammar. Relative paths are resolved against the directory containing
//! the config file.
//!
//! ```toml
//! input = "phantom.pgm"
//! output_dir = "out"
//! reference = "clean"          # or a path to a reference PGM
//! report_format = "csv"        # or "markdown"
//!
//! [noise]
//! model = "salt_pepper"        # gaussian | speckle | salt_pepper
//! density = 0.05
//! seed = 42
//!
//! [[filter]]
//! label = "Median filter"
//! kind = "median"
//! window = 3
//! ```

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use super::table::ReportFormat;
use crate::error::{Error, Result};
use crate::filter::{FilterEngine, FilterKind, FilterSpec};
use crate::image::{BorderPolicy, WindowSize};
use crate::noise::{NoiseModel, NoiseSpec, DEFAULT_SALT_FRACTION};

#[derive(Clone, Debug, PartialEq)]
pub enum MetricsReference {
    /// Score against the input image before noise injection.
    CleanInput,
    ProvidedPath(PathBuf),
}

#[derive(Clone, Debug, PartialEq)]
pub struct LabeledFilter {
    pub label: String,
    pub spec: FilterSpec,
    pub engine: FilterEngine,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PipelineConfig {
    pub input: PathBuf,
    pub noise: Option<NoiseSpec>,
    pub filters: Vec<LabeledFilter>,
    pub reference: MetricsReference,
    pub output_dir: PathBuf,
    pub report_format: ReportFormat,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    input: PathBuf,
    output_dir: PathBuf,
    reference: Option<String>,
    report_format: Option<String>,
    noise: Option<RawNoise>,
    #[serde(default, rename = "filter")]
    filters: Vec<RawFilter>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNoise {
    model: String,
    seed: u64,
    sigma: Option<f64>,
    alpha: Option<i64>,
    density: Option<f64>,
    salt_fraction: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFilter {
    label: String,
    kind: String,
    window: Option<i64>,
    border: Option<String>,
    engine: Option<String>,
}

fn config_err(e: Error) -> Error {
    match e {
        Error::Contract(msg) => Error::Config(msg),
        other => other,
    }
}

fn require<T>(value: Option<T>, model: &str, field: &str) -> Result<T> {
    value.ok_or_else(|| Error::Config(format!("noise model `{model}` requires `{field}`")))
}

fn forbid<T>(value: &Option<T>, model: &str, field: &str) -> Result<()> {
    match value {
        Some(_) => Err(Error::Config(format!(
            "noise model `{model}` does not take `{field}`"
        ))),
        None => Ok(()),
    }
}

impl RawNoise {
    fn into_spec(self) -> Result<NoiseSpec> {
        let m = self.model.as_str();
        let model = match m {
            "gaussian" => {
                forbid(&self.alpha, m, "alpha")?;
                forbid(&self.density, m, "density")?;
                forbid(&self.salt_fraction, m, "salt_fraction")?;
                NoiseModel::GaussianAdditive {
                    sigma: require(self.sigma, m, "sigma")?,
                }
            }
            "speckle" => {
                forbid(&self.sigma, m, "sigma")?;
                forbid(&self.density, m, "density")?;
                forbid(&self.salt_fraction, m, "salt_fraction")?;
                let alpha = require(self.alpha, m, "alpha")?;
                let alpha = u32::try_from(alpha)
                    .ok()
                    .filter(|&a| a >= 1)
                    .ok_or_else(|| {
                        Error::Config(format!("speckle alpha must be >= 1, got {alpha}"))
                    })?;
                NoiseModel::SpeckleGamma { alpha }
            }
            "salt_pepper" => {
                forbid(&self.sigma, m, "sigma")?;
                forbid(&self.alpha, m, "alpha")?;
                NoiseModel::SaltPepper {
                    density: require(self.density, m, "density")?,
                    salt_fraction: self.salt_fraction.unwrap_or(DEFAULT_SALT_FRACTION),
                }
            }
            other => {
                return Err(Error::Config(format!(
                    "unknown noise model `{other}` (expected gaussian, speckle or salt_pepper)"
                )))
            }
        };
        let spec = NoiseSpec {
            model,
            seed: self.seed,
        };
        spec.validate().map_err(config_err)?;
        Ok(spec)
    }
}

impl RawFilter {
    fn into_filter(self) -> Result<LabeledFilter> {
        let kind: FilterKind = self.kind.parse().map_err(config_err)?;
        let window = match self.window {
            None => WindowSize::DEFAULT,
            Some(n) => usize::try_from(n)
                .map_err(|_| Error::Config(format!("window must be positive, got {n}")))
                .and_then(|n| WindowSize::new(n).map_err(config_err))?,
        };
        let border = match self.border {
            None => BorderPolicy::default(),
            Some(b) => b.parse().map_err(config_err)?,
        };
        let engine = match self.engine {
            None => FilterEngine::default(),
            Some(e) => e.parse().map_err(config_err)?,
        };
        Ok(LabeledFilter {
            label: self.label,
            spec: FilterSpec {
                kind,
                window,
                border,
            },
            engine,
        })
    }
}

impl PipelineConfig {
    /// Parses a config document, resolving relative paths against `base_dir`.
    pub fn from_toml_str(text: &str, base_dir: &Path) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let resolve = |p: &Path| {
            if p.is_absolute() {
                p.to_path_buf()
            } else {
                base_dir.join(p)
            }
        };

        let reference = match raw.reference.as_deref() {
            None | Some("clean") => MetricsReference::CleanInput,
            Some(path) => MetricsReference::ProvidedPath(resolve(Path::new(path))),
        };
        let report_format = match raw.report_format {
            None => ReportFormat::default(),
            Some(f) => f.parse()?,
        };
        let noise = raw.noise.map(RawNoise::into_spec).transpose()?;
        let filters = raw
            .filters
            .into_iter()
            .map(RawFilter::into_filter)
            .collect::<Result<Vec<_>>>()?;

        let config = PipelineConfig {
            input: resolve(&raw.input),
            noise,
            filters,
            reference,
            output_dir: resolve(&raw.output_dir),
            report_format,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        PipelineConfig::from_toml_str(&text, base)
    }

    /// Labels must be non-empty and unique.
    pub fn validate(&self) -> Result<()> {
        let mut seen = HashSet::new();
        for f in &self.filters {
            if f.label.trim().is_empty() {
                return Err(Error::Config("filter labels must not be empty".into()));
            }
            if !seen.insert(f.label.as_str()) {
                return Err(Error::Config(format!(
                    "duplicate filter label `{}`",
                    f.label
                )));
            }
        }
        Ok(())
    }
}
