//! `sonobench` command-line interface.
//!
//! Exit codes: 0 on success, 1 for usage errors (unknown flags, invalid
//! parameter values), 2 for data errors (unreadable or malformed files,
//! dimension mismatches, unwritable outputs).

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::bench::{self, format_fixed2, render_table, PipelineConfig};
use crate::enhance::{histogram_equalize, region_grow};
use crate::error::{Error, Result};
use crate::filter::{apply_filter, FilterEngine, FilterKind, FilterSpec};
use crate::image::{load_pgm, save_pgm, BorderPolicy, PgmFormat};
use crate::metrics::MetricsReport;
use crate::noise::{NoiseModel, NoiseSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "sonobench",
    version,
    about = "Grayscale denoising benchmark toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Corrupt an image with seeded noise.
    Inject(InjectArgs),
    /// Apply a windowed spatial filter.
    Filter(FilterArgs),
    /// Score a test image against a reference.
    Metrics(MetricsArgs),
    /// Histogram-equalize an image.
    Equalize(EqualizeArgs),
    /// Grow a region from a seed pixel and write it as a 0/255 mask.
    Grow(GrowArgs),
    /// Run a benchmark pipeline from a config file.
    Bench(BenchArgs),
}

#[derive(Args, Debug)]
struct OutputFormat {
    /// Output PGM flavour (p2 = ASCII, p5 = binary).
    #[arg(long, default_value = "p5")]
    format: String,
}

#[derive(Args, Debug)]
#[command(group(clap::ArgGroup::new("model").required(true)))]
struct InjectArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: PathBuf,
    /// Additive Gaussian noise with this standard deviation.
    #[arg(long, group = "model")]
    gaussian_sigma: Option<f64>,
    /// Multiplicative gamma speckle with this integer shape.
    #[arg(long, group = "model")]
    speckle_alpha: Option<u32>,
    /// Salt-and-pepper noise corrupting this fraction of pixels.
    #[arg(long, group = "model")]
    sp_density: Option<f64>,
    /// Share of corrupted pixels set to 255 rather than 0.
    #[arg(long, default_value_t = crate::noise::DEFAULT_SALT_FRACTION, requires = "sp_density")]
    sp_salt_fraction: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    out: OutputFormat,
}

#[derive(Args, Debug)]
struct FilterArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: PathBuf,
    /// median, mean, max, min, stddev or variance.
    #[arg(long)]
    kind: String,
    /// Odd window side length, at least 3.
    #[arg(long, default_value_t = 3)]
    window: usize,
    /// replicate, reflect or zero.
    #[arg(long, default_value = "replicate")]
    border: String,
    /// naive or optimized.
    #[arg(long, default_value = "optimized")]
    engine: String,
    #[command(flatten)]
    out: OutputFormat,
}

#[derive(Args, Debug)]
struct MetricsArgs {
    #[arg(long = "ref")]
    reference: PathBuf,
    #[arg(long)]
    test: PathBuf,
}

#[derive(Args, Debug)]
struct EqualizeArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: PathBuf,
    #[command(flatten)]
    out: OutputFormat,
}

#[derive(Args, Debug)]
struct GrowArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: PathBuf,
    #[arg(long)]
    seed_x: usize,
    #[arg(long)]
    seed_y: usize,
    /// Maximum intensity difference from the seed pixel.
    #[arg(long, default_value_t = 0.0)]
    tol: f64,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[arg(long)]
    config: PathBuf,
    /// Override the config's output directory.
    #[arg(long)]
    output_dir: Option<PathBuf>,
}

/// Failure classified by exit code.
enum Failure {
    Usage(Error),
    Data(Error),
}

fn usage<T>(r: Result<T>) -> Result<T, Failure> {
    r.map_err(Failure::Usage)
}

fn data<T>(r: Result<T>) -> Result<T, Failure> {
    r.map_err(Failure::Data)
}

/// Runs the CLI with `args` (including the program name) and returns the
/// process exit code.
pub fn cli_main<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(stdout, "{text}");
                EXIT_OK
            };
        }
    };
    match run(cli.command, stdout) {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            let _ = writeln!(stderr, "run `sonobench --help` for usage");
            EXIT_USAGE
        }
        Err(Failure::Data(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_DATA
        }
    }
}

fn run(command: Command, stdout: &mut dyn Write) -> Result<(), Failure> {
    // Arguments are fully validated before any file is touched, so every
    // error past that point is a data error.
    match command {
        Command::Inject(a) => {
            let format: PgmFormat = usage(a.out.format.parse())?;
            let model = if let Some(sigma) = a.gaussian_sigma {
                NoiseModel::GaussianAdditive { sigma }
            } else if let Some(alpha) = a.speckle_alpha {
                NoiseModel::SpeckleGamma { alpha }
            } else {
                NoiseModel::SaltPepper {
                    density: a.sp_density.expect("clap enforces one noise model"),
                    salt_fraction: a.sp_salt_fraction,
                }
            };
            let spec = NoiseSpec {
                model,
                seed: a.seed,
            };
            usage(spec.validate())?;
            let img = data(load_pgm(&a.input))?;
            let noisy = data(spec.apply(&img))?;
            data(save_pgm(&noisy, &a.output, format))
        }
        Command::Filter(a) => {
            let format: PgmFormat = usage(a.out.format.parse())?;
            let kind: FilterKind = usage(a.kind.parse())?;
            let border: BorderPolicy = usage(a.border.parse())?;
            let engine: FilterEngine = usage(a.engine.parse())?;
            let spec = usage(FilterSpec::new(kind, a.window, border))?;
            let img = data(load_pgm(&a.input))?;
            data(save_pgm(
                &apply_filter(&img, &spec, engine),
                &a.output,
                format,
            ))
        }
        Command::Metrics(a) => {
            let reference = data(load_pgm(&a.reference))?;
            let test = data(load_pgm(&a.test))?;
            let r = data(MetricsReport::compute(&reference, &test))?;
            let lines = [
                ("mse", r.mse),
                ("rmse", r.rmse),
                ("snr", r.snr_db),
                ("psnr", r.psnr_paper),
                ("psnr_std", r.psnr_std),
            ];
            for (name, value) in lines {
                let _ = writeln!(stdout, "{name}={}", format_fixed2(value));
            }
            Ok(())
        }
        Command::Equalize(a) => {
            let format: PgmFormat = usage(a.out.format.parse())?;
            let img = data(load_pgm(&a.input))?;
            let (out, _) = histogram_equalize(&img);
            data(save_pgm(&out, &a.output, format))
        }
        Command::Grow(a) => {
            if !(a.tol >= 0.0) {
                return Err(Failure::Usage(Error::Contract(format!(
                    "tolerance must be non-negative, got {}",
                    a.tol
                ))));
            }
            let img = data(load_pgm(&a.input))?;
            let mask = data(region_grow(&img, a.seed_x, a.seed_y, a.tol))?;
            data(mask.save_pgm(&a.output))?;
            let _ = writeln!(stdout, "region_pixels={}", mask.count());
            Ok(())
        }
        Command::Bench(a) => {
            let mut config = data(PipelineConfig::load(&a.config))?;
            if let Some(dir) = a.output_dir {
                config.output_dir = dir;
            }
            let table = data(bench::run_pipeline(&config))?;
            let _ = write!(stdout, "{}", render_table(&table, config.report_format));
            Ok(())
        }
    }
}
