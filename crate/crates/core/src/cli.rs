//! Command-line front end.
//!
//! Every subcommand is a pure function of its flags and input files, so two
//! identical invocations write identical bytes.

use std::f64::consts::TAU;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::angle::ANGLE_TOLERANCE;
use crate::dimension::{
    fringe_dimension, parse_weights, schmidt_number_from_weights, shannon_dimension, single_sector_dimension,
    SourceSpectrum,
};
use crate::fringe::{coincidence_fringe, default_samples, visibility, Source};
use crate::optimize::{dimension_vs_sectors_with, optimize_plate_with, sweep_csv, OptimizerConfig};
use crate::plate::SectorPlate;
use crate::spectrum::{mode_spectrum, truncate_spectrum, LMaxRule, ModeSpectrum};

#[derive(Debug, Parser)]
#[command(name = "sectordim", version, about = "Shannon dimensionality of sector-plate OAM analyzers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Shannon dimensionality of one analyzer
    Dim(DimArgs),
    /// OAM mode spectrum of one analyzer as `l,re_c,im_c,gamma`
    Spectrum(SpectrumArgs),
    /// Coincidence fringe of two analyzers as `delta_rad,rate`
    Fringe(FringeArgs),
    /// Closed-form dimensionality of single-sector plates
    Analytic(AnalyticArgs),
    /// Search multi-sector plates for the largest dimensionality
    Optimize(OptimizeArgs),
    /// Schmidt number of a list of source weights
    Schmidt(SchmidtArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Table,
}

#[derive(Debug, Args)]
pub struct WindowArgs {
    /// Fixed mode window |l| <= L (overrides --residual)
    #[arg(long)]
    pub l_max: Option<usize>,
    /// Parseval residual for choosing the window
    #[arg(long, default_value_t = 1e-6)]
    pub residual: f64,
}

impl WindowArgs {
    fn rule(&self) -> Result<LMaxRule> {
        if let Some(l) = self.l_max {
            return Ok(LMaxRule::Fixed(l));
        }
        if !(self.residual > 0.0 && self.residual < 1.0) {
            bail!("--residual must lie in (0, 1)");
        }
        Ok(LMaxRule::Residual {
            tolerance: self.residual,
            cap: 4096,
        })
    }
}

#[derive(Debug, Args)]
pub struct DimArgs {
    pub plate: PathBuf,
    #[command(flatten)]
    pub window: WindowArgs,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    pub plate: PathBuf,
    #[command(flatten)]
    pub window: WindowArgs,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SourceKind {
    /// Equal weight on every mode, no cutoff
    Flat,
    /// Equal weight on |l| <= --source-l-max
    Uniform,
    /// Gaussian weights of width --source-width cut at --source-l-max
    Gaussian,
}

#[derive(Debug, Args)]
pub struct FringeArgs {
    pub plate_a: PathBuf,
    /// Second analyzer; defaults to the first
    pub plate_b: Option<PathBuf>,
    #[command(flatten)]
    pub window: WindowArgs,
    /// Aperture cutoff: keep |l| <= L_CUT and renormalize
    #[arg(long)]
    pub l_cut: Option<usize>,
    /// Number of Delta samples over a full turn
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long, value_enum, default_value_t = SourceKind::Flat)]
    pub source: SourceKind,
    #[arg(long, default_value_t = 10.0)]
    pub source_width: f64,
    #[arg(long, default_value_t = 30)]
    pub source_l_max: usize,
    /// CSV destination; stdout when absent (summary then goes to stderr)
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct AnalyticArgs {
    /// Sector angle
    #[arg(long, conflicts_with = "sweep", required_unless_present = "sweep", allow_hyphen_values = true)]
    pub delta: Option<f64>,
    /// START:STOP:STEP, inclusive of STOP
    #[arg(long, allow_hyphen_values = true)]
    pub sweep: Option<String>,
    /// Read angles as radians instead of degrees
    #[arg(long)]
    pub radians: bool,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    /// Number of pi-mesas N (the plate has 2N sectors)
    #[arg(long = "n", value_parser = clap::value_parser!(u32).range(1..))]
    pub n_mesas: u32,
    /// Random candidates drawn per N
    #[arg(long, default_value_t = 4000, value_parser = clap::value_parser!(u64).range(1..))]
    pub budget: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u32).range(1..))]
    pub restarts: u32,
    /// Plain random search without pattern refinement
    #[arg(long)]
    pub random_only: bool,
    /// Optimize every N from 1 to --n and emit `n,dimension_max`
    #[arg(long)]
    pub sweep: bool,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SchmidtArgs {
    pub weights: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Runs one subcommand. Primary output goes to `stdout` unless `--out`
/// redirects it; `stderr` only receives summaries that would otherwise mix
/// with CSV on stdout.
pub fn run(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Dim(args) => cmd_dim(&args, stdout),
        Command::Spectrum(args) => cmd_spectrum(&args, stdout),
        Command::Fringe(args) => cmd_fringe(&args, stdout, stderr),
        Command::Analytic(args) => cmd_analytic(&args, stdout),
        Command::Optimize(args) => cmd_optimize(&args, stdout),
        Command::Schmidt(args) => cmd_schmidt(&args, stdout),
    }
}

pub fn read_plate(path: &Path) -> Result<SectorPlate> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    SectorPlate::from_json(&text).with_context(|| format!("invalid plate file {}", path.display()))
}

fn emit(out: &Option<PathBuf>, stdout: &mut dyn Write, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => stdout.write_all(text.as_bytes()).context("writing to stdout"),
    }
}

fn table(rows: &[(&str, String)]) -> String {
    rows.iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
}

pub fn cmd_dim(args: &DimArgs, stdout: &mut dyn Write) -> Result<()> {
    let plate = read_plate(&args.plate)?;
    let l_max = args.window.rule()?.resolve(&plate);
    let spectrum = mode_spectrum(&plate, l_max);
    let d = shannon_dimension(&spectrum)?;
    let power = spectrum.captured_power();
    let text = match args.format {
        Format::Table => table(&[
            ("D", format!("{d:.6}")),
            ("l_max", l_max.to_string()),
            ("captured_power", format!("{power:.6}")),
        ]),
        Format::Csv => format!("dimension,l_max,captured_power\n{d:?},{l_max},{power:?}\n"),
    };
    emit(&args.out, stdout, &text)
}

pub fn cmd_spectrum(args: &SpectrumArgs, stdout: &mut dyn Write) -> Result<()> {
    let plate = read_plate(&args.plate)?;
    let spectrum = mode_spectrum(&plate, args.window.rule()?.resolve(&plate));
    let text = match args.format {
        Format::Csv => {
            let mut buf = Vec::new();
            spectrum.write_csv(&mut buf)?;
            String::from_utf8(buf)?
        }
        Format::Table => {
            let mut s = format!("{:>6} {:>12} {:>12} {:>12}\n", "l", "re_c", "im_c", "gamma");
            for r in spectrum.records() {
                s.push_str(&format!("{:>6} {:>12.6} {:>12.6} {:>12.6}\n", r.l, r.re_c, r.im_c, r.gamma));
            }
            s
        }
    };
    emit(&args.out, stdout, &text)
}

fn analyzer(plate: &SectorPlate, args: &FringeArgs) -> Result<ModeSpectrum> {
    let spectrum = mode_spectrum(plate, args.window.rule()?.resolve(plate));
    Ok(match args.l_cut {
        Some(l_cut) => truncate_spectrum(&spectrum, l_cut)?,
        None => spectrum,
    })
}

pub fn cmd_fringe(args: &FringeArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    let plate_a = read_plate(&args.plate_a)?;
    let plate_b = match &args.plate_b {
        Some(path) => read_plate(path)?,
        None => plate_a.clone(),
    };
    let a = analyzer(&plate_a, args)?;
    let b = analyzer(&plate_b, args)?;
    let source = match args.source {
        SourceKind::Flat => Source::Flat,
        SourceKind::Uniform => Source::Spectrum(SourceSpectrum::flat(args.source_l_max)),
        SourceKind::Gaussian => Source::Spectrum(SourceSpectrum::gaussian(args.source_width, args.source_l_max)?),
    };
    let samples = args.samples.unwrap_or_else(|| default_samples(a.l_max().max(b.l_max())));
    let fringe = coincidence_fringe(&a, &b, &source, samples)?;
    let v = visibility(&fringe)?;
    let d = fringe_dimension(&fringe)?;

    let summary = match args.format {
        Format::Table => table(&[
            ("samples", samples.to_string()),
            ("visibility", format!("{v:.6}")),
            ("D", format!("{d:.6}")),
        ]),
        Format::Csv => format!("samples,visibility,dimension\n{samples},{v:?},{d:?}\n"),
    };
    let csv = fringe.to_csv();
    match &args.out {
        Some(_) => {
            emit(&args.out, stdout, &csv)?;
            stdout.write_all(summary.as_bytes())?;
        }
        None => {
            stdout.write_all(csv.as_bytes())?;
            stderr.write_all(summary.as_bytes())?;
        }
    }
    Ok(())
}

fn parse_sweep(spec: &str) -> Result<(f64, f64, f64)> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        bail!("--sweep expects START:STOP:STEP, got '{spec}'");
    }
    let mut values = [0.0; 3];
    for (v, p) in values.iter_mut().zip(&parts) {
        *v = p.trim().parse().with_context(|| format!("bad number '{p}' in --sweep"))?;
    }
    Ok((values[0], values[1], values[2]))
}

/// Sweep points in radians.
fn sweep_points(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || stop < start {
        bail!("--sweep needs STEP > 0 and STOP >= START");
    }
    let span = stop - start;
    let count = (span / step + 1e-9).floor() as usize;
    Ok((0..=count).map(|i| start + i as f64 * step).collect())
}

pub fn cmd_analytic(args: &AnalyticArgs, stdout: &mut dyn Write) -> Result<()> {
    let to_rad = |x: f64| if args.radians { x } else { x.to_radians() };
    let deltas: Vec<f64> = match (&args.sweep, args.delta) {
        (Some(spec), _) => {
            let (start, stop, step) = parse_sweep(spec)?;
            sweep_points(to_rad(start), to_rad(stop), to_rad(step))?
        }
        (None, Some(delta)) => vec![to_rad(delta)],
        (None, None) => bail!("either --delta or --sweep is required"),
    };
    let mut rows = Vec::with_capacity(deltas.len());
    for delta in deltas {
        // tolerate rounding at the 2pi end of degree sweeps
        let delta = if delta > TAU && delta - TAU < ANGLE_TOLERANCE { TAU } else { delta };
        let d = single_sector_dimension(delta).with_context(|| format!("delta = {delta} rad is outside [0, 2pi]"))?;
        rows.push((delta, d));
    }
    let text = match args.format {
        Format::Csv => {
            let mut s = String::from("delta_rad,dimension\n");
            for (delta, d) in rows {
                s.push_str(&format!("{delta:?},{d:?}\n"));
            }
            s
        }
        Format::Table => {
            let mut s = format!("{:>12} {:>12}\n", "delta_rad", "dimension");
            for (delta, d) in rows {
                s.push_str(&format!("{delta:>12.6} {d:>12.6}\n"));
            }
            s
        }
    };
    emit(&args.out, stdout, &text)
}

pub fn cmd_optimize(args: &OptimizeArgs, stdout: &mut dyn Write) -> Result<()> {
    let config = OptimizerConfig {
        restarts: args.restarts as usize,
        refine: !args.random_only,
        ..OptimizerConfig::default()
    };
    let n = args.n_mesas as usize;
    let budget = args.budget as usize;
    if args.sweep {
        let reports = dimension_vs_sectors_with(n, budget, args.seed, &config)?;
        let text = match args.format.unwrap_or(Format::Csv) {
            Format::Csv => sweep_csv(&reports),
            Format::Table => {
                let mut s = format!("{:>4} {:>12}\n", "n", "dimension");
                for r in &reports {
                    s.push_str(&format!("{:>4} {:>12.6}\n", r.n_mesas, r.dimension));
                }
                s
            }
        };
        return emit(&args.out, stdout, &text);
    }
    let report = optimize_plate_with(n, budget, args.seed, &config)?;
    let summary = table(&[
        ("n_mesas", report.n_mesas.to_string()),
        ("D", format!("{:.6}", report.dimension)),
        ("evaluations", report.evaluations.to_string()),
        ("seed", report.seed.to_string()),
    ]);
    match (args.format, &args.out) {
        (Some(Format::Table), _) => emit(&args.out, stdout, &summary),
        (_, Some(_)) => {
            emit(&args.out, stdout, &(report.to_json() + "\n"))?;
            stdout.write_all(summary.as_bytes())?;
            Ok(())
        }
        (_, None) => emit(&None, stdout, &(report.to_json() + "\n")),
    }
}

pub fn cmd_schmidt(args: &SchmidtArgs, stdout: &mut dyn Write) -> Result<()> {
    let text = fs::read_to_string(&args.weights).with_context(|| format!("reading {}", args.weights.display()))?;
    let weights = parse_weights(&text).with_context(|| format!("invalid weights file {}", args.weights.display()))?;
    let k = schmidt_number_from_weights(&weights)?;
    let out = match args.format {
        Format::Table => table(&[("K", format!("{k:.6}")), ("modes", weights.len().to_string())]),
        Format::Csv => format!("schmidt_number,modes\n{k:?},{}\n", weights.len()),
    };
    emit(&args.out, stdout, &out)
}
