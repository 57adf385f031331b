//! Command-line front end: delay scans, extremum reports, figure data and
//! the detection-probability table.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use num_traits::FromPrimitive;

use crate::assembly::{
    all_events, find_extrema, scan, Assembler, Classification, Event, ExtremumKind, ExtremumReport,
};
use crate::error::Error;
use crate::oracle::oracle_distribution;
use crate::output::{format_sig, Table};
use crate::scattering::exact::{balanced_transmittance, detection_table_exact, Fraction};
use crate::scattering::{detection_table, CouplerSpec};
use crate::spectral::{OverlapModel, SPEED_OF_LIGHT};

/// Maximum assembly/oracle disagreement tolerated by `--oracle-check`.
pub const ORACLE_TOLERANCE: f64 = 1e-10;

/// Number of scan points compared against the oracle.
pub const ORACLE_POINTS: usize = 11;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFICATION: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "multiphoton",
    version,
    about = "Multiphoton interference of partially distinguishable photons at a two-mode coupler"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Event probabilities and component weights along a delay scan.
    Scan(ScanArgs),
    /// Interior extrema of one event probability as a function of delay.
    Extrema(ExtremaArgs),
    /// Write the weight and probability tables for N = 2, 4, 6.
    Figures(FiguresArgs),
    /// Detection probabilities of each distinguishability type.
    Table1(Table1Args),
}

#[derive(Debug, Clone, Args)]
pub struct SpectralArgs {
    /// Amplitude-Gaussian spectral width Δω in rad/s.
    #[arg(long, conflicts_with = "fwhm_nm")]
    pub sigma_omega: Option<f64>,

    /// Intensity FWHM of the spectral filter in nm [default: 4].
    #[arg(long)]
    pub fwhm_nm: Option<f64>,

    /// Central wavelength in nm.
    #[arg(long, default_value_t = 780.0)]
    pub center_nm: f64,
}

impl SpectralArgs {
    pub fn model(&self) -> Result<OverlapModel, Error> {
        match self.sigma_omega {
            Some(sigma) => {
                OverlapModel::new(sigma, 2.0 * PI * SPEED_OF_LIGHT / (self.center_nm * 1e-9))
            }
            None => {
                OverlapModel::from_filter(self.fwhm_nm.unwrap_or(4.0) * 1e-9, self.center_nm * 1e-9)
            }
        }
    }
}

/// `min:max:steps` in micrometers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRange {
    pub min_um: f64,
    pub max_um: f64,
    pub steps: usize,
}

impl ScanRange {
    /// Evenly spaced delays in meters, endpoints included.
    pub fn delays(&self) -> Vec<f64> {
        let span = self.max_um - self.min_um;
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| (self.min_um + span * i as f64 / last) / 1e6)
            .collect()
    }
}

impl FromStr for ScanRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [min, max, steps] = parts[..] else {
            return Err(format!("scan range `{s}` is not of the form min:max:steps"));
        };
        let num = |v: &str| {
            v.trim()
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| format!("scan range `{s}`: `{v}` is not a finite number"))
        };
        let range = ScanRange {
            min_um: num(min)?,
            max_um: num(max)?,
            steps: steps
                .trim()
                .parse()
                .map_err(|_| format!("scan range `{s}`: `{steps}` is not a step count"))?,
        };
        if range.steps < 2 {
            return Err(format!("scan range `{s}`: need at least 2 steps"));
        }
        if range.min_um >= range.max_um {
            return Err(format!("scan range `{s}`: min must be below max"));
        }
        Ok(range)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Json,
}

fn parse_transmission(s: &str) -> Result<f64, String> {
    let t: f64 = s.parse().map_err(|e| format!("{e}"))?;
    CouplerSpec::new(t).map(|_| t).map_err(|e| e.to_string())
}

#[derive(Debug, Clone, Args)]
pub struct ScanArgs {
    /// Photons injected into each input port (N = 2k).
    #[arg(short = 'k', long)]
    pub photons_per_mode: usize,

    #[command(flatten)]
    pub spectral: SpectralArgs,

    /// Delay range `min:max:steps` in micrometers.
    #[arg(long, default_value = "-400:400:801", allow_hyphen_values = true)]
    pub scan_um: ScanRange,

    /// Events `m,n` to report, or `all`.
    #[arg(long, num_args = 1.., default_value = "all")]
    pub events: Vec<String>,

    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Output file; standard output if omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,

    /// Cross-check against the brute-force Fock-space oracle.
    #[arg(long)]
    pub oracle_check: bool,

    /// Transmission amplitude t of the coupler.
    #[arg(long, default_value_t = std::f64::consts::FRAC_1_SQRT_2, value_parser = parse_transmission)]
    pub transmission: f64,
}

#[derive(Debug, Clone, Args)]
pub struct ExtremaArgs {
    #[arg(short = 'k', long)]
    pub photons_per_mode: usize,

    /// Event `m,n`.
    #[arg(long)]
    pub event: Event,

    #[command(flatten)]
    pub spectral: SpectralArgs,

    /// Grid points over the squared overlap [0, 1].
    #[arg(long, default_value_t = 1024)]
    pub grid: usize,

    #[arg(long, default_value_t = std::f64::consts::FRAC_1_SQRT_2, value_parser = parse_transmission)]
    pub transmission: f64,

    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    pub format: ReportFormat,
}

#[derive(Debug, Clone, Args)]
pub struct FiguresArgs {
    /// Directory receiving the CSV files.
    #[arg(long)]
    pub out_dir: PathBuf,

    #[command(flatten)]
    pub spectral: SpectralArgs,

    #[arg(long, default_value = "-400:400:801", allow_hyphen_values = true)]
    pub scan_um: ScanRange,

    #[arg(long, default_value_t = std::f64::consts::FRAC_1_SQRT_2, value_parser = parse_transmission)]
    pub transmission: f64,
}

#[derive(Debug, Clone, Args)]
pub struct Table1Args {
    /// Only this many photons per port; k = 1 and 2 if omitted.
    #[arg(short = 'k', long)]
    pub photons_per_mode: Option<usize>,

    /// Print floating-point values instead of exact fractions.
    #[arg(long)]
    pub float: bool,

    /// List every event instead of (N,0) and (k,k) only.
    #[arg(long)]
    pub all_events: bool,

    #[arg(long, default_value_t = std::f64::consts::FRAC_1_SQRT_2, value_parser = parse_transmission)]
    pub transmission: f64,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Verification(Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification(_) => EXIT_VERIFICATION,
            _ => EXIT_USAGE,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::OracleMismatch { .. } => CliError::Verification(e),
            other => CliError::Usage(other.to_string()),
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Validated `scan` configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub photons_per_mode: usize,
    pub model: OverlapModel,
    pub range: ScanRange,
    pub events: Vec<Event>,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub oracle_check: bool,
    pub coupler: CouplerSpec,
}

impl RunConfig {
    pub fn from_args(args: &ScanArgs) -> Result<Self, CliError> {
        let k = args.photons_per_mode;
        crate::decomposition::check_photons(k)?;
        Ok(Self {
            photons_per_mode: k,
            model: args.spectral.model()?,
            range: args.scan_um,
            events: parse_events(&args.events, k)?,
            format: args.format,
            output: args.output.clone(),
            oracle_check: args.oracle_check,
            coupler: CouplerSpec::new(args.transmission)?,
        })
    }
}

/// Expands `all` and checks every event carries `2k` photons.
pub fn parse_events(specs: &[String], k: usize) -> Result<Vec<Event>, CliError> {
    let mut events = Vec::new();
    for spec in specs {
        if spec.trim().eq_ignore_ascii_case("all") {
            events.extend(all_events(k));
            continue;
        }
        let e: Event = spec.parse().map_err(CliError::Usage)?;
        if e.total() != 2 * k {
            return Err(Error::EventMismatch {
                m: e.m,
                n: e.n,
                total: 2 * k,
            }
            .into());
        }
        events.push(e);
    }
    if events.is_empty() {
        return Err(CliError::Usage("no events requested".into()));
    }
    Ok(events)
}

/// Compares the assembled distribution with the oracle at each overlap
/// amplitude in `alphas`; returns the largest deviation.
pub fn oracle_cross_check(
    k: usize,
    coupler: &CouplerSpec,
    alphas: &[f64],
    tolerance: f64,
) -> Result<f64, Error> {
    let assembler = Assembler::new(k, coupler)?;
    let mut worst = 0.0f64;
    for &alpha in alphas {
        let reference = oracle_distribution(k, alpha, coupler)?;
        let assembled = assembler.distribution_at(alpha * alpha);
        for (m, (r, a)) in reference.iter().zip(assembled.probs()).enumerate() {
            let deviation = (r - a).abs();
            if deviation.is_nan() || deviation > tolerance {
                return Err(Error::OracleMismatch {
                    k,
                    alpha,
                    m,
                    n: 2 * k - m,
                    deviation,
                    tolerance,
                });
            }
            worst = worst.max(deviation);
        }
    }
    Ok(worst)
}

fn oracle_alphas(config: &RunConfig, xs: &[f64]) -> Result<Vec<f64>, Error> {
    let last = xs.len() - 1;
    (0..ORACLE_POINTS)
        .map(|i| {
            let idx = (i * last + (ORACLE_POINTS - 1) / 2) / (ORACLE_POINTS - 1);
            config.model.overlap_from_delay(xs[idx])
        })
        .collect()
}

/// Runs a scan and renders it in the configured format.
pub fn run_scan(config: &RunConfig) -> Result<String, CliError> {
    let xs = config.range.delays();
    let result = scan(
        config.photons_per_mode,
        &config.model,
        &xs,
        &config.events,
        &config.coupler,
    )?;
    if config.oracle_check {
        let alphas = oracle_alphas(config, &xs)?;
        oracle_cross_check(
            config.photons_per_mode,
            &config.coupler,
            &alphas,
            ORACLE_TOLERANCE,
        )?;
    }
    let table = Table::from_scan(&result);
    Ok(match config.format {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json(),
    })
}

/// File names and contents of the figure data pack.
pub fn figure_pack(
    model: &OverlapModel,
    range: &ScanRange,
    coupler: &CouplerSpec,
) -> Result<Vec<(String, String)>, Error> {
    let xs = range.delays();
    let panels: [(&str, usize, bool); 5] = [
        ("weights_N2.csv", 1, false),
        ("weights_N4.csv", 2, false),
        ("probs_N4.csv", 2, true),
        ("weights_N6.csv", 3, false),
        ("probs_N6.csv", 3, true),
    ];
    panels
        .iter()
        .map(|&(name, k, with_events)| {
            let events = if with_events {
                all_events(k)
            } else {
                Vec::new()
            };
            let result = scan(k, model, &xs, &events, coupler)?;
            Ok((name.to_string(), Table::from_scan(&result).to_csv()))
        })
        .collect()
}

pub fn emit_figure_pack(
    model: &OverlapModel,
    range: &ScanRange,
    coupler: &CouplerSpec,
    out_dir: &Path,
) -> Result<Vec<PathBuf>, CliError> {
    let files = figure_pack(model, range, coupler)?;
    fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;
    files
        .into_iter()
        .map(|(name, content)| {
            let path = out_dir.join(name);
            fs::write(&path, content).map_err(io_err(&path))?;
            Ok(path)
        })
        .collect()
}

pub fn render_extrema(report: &ExtremumReport, format: ReportFormat) -> String {
    if format == ReportFormat::Json {
        let mut s = serde_json::to_string_pretty(report).expect("report serializes");
        s.push('\n');
        return s;
    }
    let mut out = String::new();
    let class = match report.classification {
        Classification::Monotonic => "monotonic",
        Classification::NonMonotonic => "non-monotonic",
    };
    let _ = writeln!(
        out,
        "event {} N={} k={}: {class}",
        report.event,
        2 * report.photons_per_mode,
        report.photons_per_mode
    );
    let _ = writeln!(out, "P(x=0) = {}", format_sig(report.p_zero_delay));
    let _ = writeln!(out, "P(|x|->inf) = {}", format_sig(report.p_infinite_delay));
    for e in &report.extrema {
        let kind = match e.kind {
            ExtremumKind::Minimum => "minimum",
            ExtremumKind::Maximum => "maximum",
        };
        let _ = writeln!(
            out,
            "{kind}: u*={:.6} P*={:.6} x*=±{:.3} um (u*={}, P*={})",
            e.alpha_sq,
            e.probability,
            e.delay * 1e6,
            format_sig(e.alpha_sq),
            format_sig(e.probability)
        );
    }
    for f in &report.flat_regions {
        let _ = writeln!(
            out,
            "flat: u in [{}, {}] P={}",
            format_sig(f.alpha_sq_lo),
            format_sig(f.alpha_sq_hi),
            format_sig(f.probability)
        );
    }
    out
}

fn column_labels(k: usize) -> Vec<String> {
    (0..=k)
        .rev()
        .map(|j| match j {
            j if j == k => "indis".to_string(),
            0 => "dist".to_string(),
            _ if k == 2 => "inter".to_string(),
            j => format!("inter:{j}"),
        })
        .collect()
}

fn table_events(k: usize, all: bool) -> Vec<Event> {
    let total = 2 * k;
    if all {
        (0..=total)
            .rev()
            .map(|m| Event::new(m, total - m))
            .collect()
    } else {
        vec![Event::new(total, 0), Event::new(k, k)]
    }
}

fn layout(header: Vec<String>, rows: Vec<Vec<String>>) -> String {
    let cols = header.len();
    let widths: Vec<usize> = (0..cols)
        .map(|c| {
            rows.iter()
                .map(|r| r[c].len())
                .chain([header[c].len()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    for line in std::iter::once(&header).chain(rows.iter()) {
        let cells: Vec<String> = line
            .iter()
            .zip(&widths)
            .map(|(cell, w)| format!("{cell:<w$}"))
            .collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out
}

/// Detection-probability table for `k` photons per port.
pub fn render_table1(k: usize, transmission: f64, float: bool, all: bool) -> Result<String, Error> {
    let coupler = CouplerSpec::new(transmission)?;
    let mut header = vec![format!("p^({};m,n)", 2 * k)];
    header.extend(column_labels(k));
    let events = table_events(k, all);

    let rows: Vec<Vec<String>> = if float {
        let table = detection_table(k, &coupler)?;
        events
            .iter()
            .map(|e| {
                std::iter::once(e.to_string())
                    .chain(table.columns().iter().map(|c| format_sig(c.get(e.m, e.n))))
                    .collect()
            })
            .collect()
    } else {
        let transmittance = if coupler.is_balanced() {
            balanced_transmittance()
        } else {
            BigRational::from_f64(transmission * transmission)
                .ok_or(Error::InvalidTransmission(transmission))?
        };
        let table = detection_table_exact(k, &transmittance)?;
        events
            .iter()
            .map(|e| {
                std::iter::once(e.to_string())
                    .chain(table.iter().map(|c| Fraction(&c.get(e.m, e.n)).to_string()))
                    .collect()
            })
            .collect()
    };
    Ok(layout(header, rows))
}

/// Executes one parsed command, writing its primary output to `stdout`.
pub fn run(cli: &Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    let io_stdout = |e: io::Error| CliError::Io {
        path: PathBuf::from("<stdout>"),
        source: e,
    };
    match &cli.command {
        Command::Scan(args) => {
            let config = RunConfig::from_args(args)?;
            let rendered = run_scan(&config)?;
            match &config.output {
                Some(path) => fs::write(path, rendered).map_err(io_err(path))?,
                None => stdout.write_all(rendered.as_bytes()).map_err(io_stdout)?,
            }
        }
        Command::Extrema(args) => {
            let coupler = CouplerSpec::new(args.transmission)?;
            let model = args.spectral.model()?;
            let report = find_extrema(
                args.photons_per_mode,
                args.event,
                &coupler,
                &model,
                args.grid,
            )?;
            stdout
                .write_all(render_extrema(&report, args.format).as_bytes())
                .map_err(io_stdout)?;
        }
        Command::Figures(args) => {
            let coupler = CouplerSpec::new(args.transmission)?;
            let model = args.spectral.model()?;
            for path in emit_figure_pack(&model, &args.scan_um, &coupler, &args.out_dir)? {
                writeln!(stdout, "{}", path.display()).map_err(io_stdout)?;
            }
        }
        Command::Table1(args) => {
            let ks = match args.photons_per_mode {
                Some(k) => vec![k],
                None => vec![1, 2],
            };
            let rendered: Vec<String> = ks
                .iter()
                .map(|&k| render_table1(k, args.transmission, args.float, args.all_events))
                .collect::<Result<_, _>>()?;
            stdout
                .write_all(rendered.join("\n").as_bytes())
                .map_err(io_stdout)?;
        }
    }
    Ok(())
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    EXIT_OK
                }
                _ => {
                    let first = e.to_string();
                    let line = first.lines().next().unwrap_or("invalid arguments");
                    let _ = writeln!(stderr, "{line}");
                    EXIT_USAGE
                }
            };
        }
    };
    match run(&cli, stdout) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
