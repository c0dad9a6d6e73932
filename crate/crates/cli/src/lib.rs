//! Command-line front end. Every run writes `<command>.json`, optionally `<command>.csv`,
//! and `manifest.json` into the output directory.

mod commands;

use std::ffi::OsString;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;
use sha2::{Digest, Sha256};

use cusp_spectra::config::{parse_config, to_canonical_string, Config};
use cusp_spectra::error::{ConfigError, ModelError, ReportError, SpectralError, TopologyError};
use cusp_spectra::report::{canonical_json, to_csv, Report, SCHEMA_VERSION};

pub use commands::Command;

pub const EXIT_INVALID: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Bundled example configurations.
pub const EXAMPLES: &[(&str, &str)] = &[
    ("threshold_free.cfg", include_str!("../../../configs/threshold_free.cfg")),
    ("trap_p1.cfg", include_str!("../../../configs/trap_p1.cfg")),
    ("trap_p_half.cfg", include_str!("../../../configs/trap_p_half.cfg")),
    ("trap_p_third.cfg", include_str!("../../../configs/trap_p_third.cfg")),
    ("coupling_half.cfg", include_str!("../../../configs/coupling_half.cfg")),
    ("mourre_free.cfg", include_str!("../../../configs/mourre_free.cfg")),
    ("holder_free.cfg", include_str!("../../../configs/holder_free.cfg")),
    ("holder_trap.cfg", include_str!("../../../configs/holder_trap.cfg")),
    ("two_cusps.cfg", include_str!("../../../configs/two_cusps.cfg")),
    ("one_cusp_integral.cfg", include_str!("../../../configs/one_cusp_integral.cfg")),
    ("one_cusp_half.cfg", include_str!("../../../configs/one_cusp_half.cfg")),
    ("nonorientable.cfg", include_str!("../../../configs/nonorientable.cfg")),
    ("compact_field.cfg", include_str!("../../../configs/compact_field.cfg")),
    ("singular_field.cfg", include_str!("../../../configs/singular_field.cfg")),
    ("torus_cusp.cfg", include_str!("../../../configs/torus_cusp.cfg")),
    ("tensor_check.cfg", include_str!("../../../configs/tensor_check.cfg")),
];

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Io(String),
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => EXIT_INVALID,
            CliError::Numerical(_) => EXIT_NUMERICAL,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "invalid input: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<TopologyError> for CliError {
    fn from(e: TopologyError) -> Self {
        match e {
            TopologyError::Overflow => CliError::Numerical(e.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<SpectralError> for CliError {
    fn from(e: SpectralError) -> Self {
        match e {
            SpectralError::NoConvergence(_) => CliError::Numerical(e.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<ReportError> for CliError {
    fn from(e: ReportError) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Both,
}

#[derive(Parser, Debug)]
#[command(name = "cusp-spectra", version, about = "Trapping classification and spectral checks for magnetic Laplacians on cusp ends")]
struct Cli {
    #[command(subcommand)]
    sub: Sub,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Cache directory, `<out>/.cache` by default.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    no_cache: bool,
    /// Worker threads; all cores by default.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true)]
    lambda_max: Option<f64>,
    #[arg(long, global = true)]
    r_max: Option<f64>,
    #[arg(long, global = true)]
    tol: Option<f64>,
}

#[derive(Args, Debug)]
struct Run {
    #[arg(long)]
    config: PathBuf,
}

#[derive(Subcommand, Debug)]
enum Sub {
    /// Trapping verdicts, zero modes and gauge existence.
    Classify(Run),
    /// Transverse mode spectrum of every end.
    Modes(Run),
    /// Radial eigenvalues below lambda_max for each contributing mode.
    Spectrum(Run),
    /// Counting function against the predicted Weyl law.
    Weyl(Run),
    /// Bottom of the essential spectrum from a truncation schedule.
    Threshold(Run),
    /// Trapping and level spacing across a coupling grid.
    ScanCoupling(Run),
    /// Compressed commutator estimate per cutoff scale.
    Mourre(Run),
    /// Hölder continuity of the weighted resolvent.
    Holder(Run),
    /// Transverse spectral zeta value.
    Zeta(Run),
    /// Write the bundled example configurations.
    Examples,
}

impl Sub {
    fn split(&self) -> Option<(Command, &Path)> {
        let (c, r) = match self {
            Sub::Classify(r) => (Command::Classify, r),
            Sub::Modes(r) => (Command::Modes, r),
            Sub::Spectrum(r) => (Command::Spectrum, r),
            Sub::Weyl(r) => (Command::Weyl, r),
            Sub::Threshold(r) => (Command::Threshold, r),
            Sub::ScanCoupling(r) => (Command::ScanCoupling, r),
            Sub::Mourre(r) => (Command::Mourre, r),
            Sub::Holder(r) => (Command::Holder, r),
            Sub::Zeta(r) => (Command::Zeta, r),
            Sub::Examples => return None,
        };
        Some((c, r.config.as_path()))
    }
}

fn sha256_hex(parts: &[&str]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update(p.as_bytes());
        h.update([0u8]);
    }
    hex::encode(h.finalize())
}

/// Applies command-line overrides and validates them.
pub fn apply_overrides(cfg: &mut Config, lambda_max: Option<f64>, r_max: Option<f64>, tol: Option<f64>) -> Result<(), CliError> {
    if let Some(l) = lambda_max {
        if !(l.is_finite() && l > 0.0) {
            return Err(CliError::Config(format!("--lambda-max {l} must be positive and finite")));
        }
        cfg.numerics.lambda_max = l;
        cfg.numerics.lambda_min = cfg.numerics.lambda_min.min(l);
    }
    if let Some(r) = r_max {
        if !(r.is_finite() && r > cfg.spec.r0()) {
            return Err(CliError::Config(format!("--r-max {r} must exceed r0 = {}", cfg.spec.r0())));
        }
        cfg.numerics.r_max = Some(r);
    }
    if let Some(t) = tol {
        if !(t.is_finite() && t > 0.0) {
            return Err(CliError::Config(format!("--tol {t} must be positive")));
        }
        cfg.numerics.tol = t;
    }
    Ok(())
}

/// A finished run: canonical JSON and CSV text.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rendered {
    pub schema_version: String,
    pub json: String,
    pub csv: String,
}

/// Runs one command on a parsed configuration.
pub fn render(command: Command, cfg: &Config) -> Result<Rendered, CliError> {
    let canonical = to_canonical_string(cfg);
    let digest = sha256_hex(&[&canonical]);
    let out = commands::execute(command, cfg)?;
    let report = Report::new(command.name(), &digest, json!({ "config": canonical }), out.result, out.warnings);
    Ok(Rendered {
        schema_version: SCHEMA_VERSION.to_string(),
        json: report.to_json(),
        csv: to_csv(&out.header, &out.rows)?,
    })
}

fn read_cache(path: &Path) -> Option<Rendered> {
    let text = fs::read_to_string(path).ok()?;
    let entry: Rendered = serde_json::from_str(&text).ok()?;
    (entry.schema_version == SCHEMA_VERSION).then_some(entry)
}

fn write_atomic(path: &Path, text: &str) -> Result<(), CliError> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, text)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

fn run(cli: &Cli) -> Result<(), CliError> {
    fs::create_dir_all(&cli.out)?;
    let Some((command, config_path)) = cli.sub.split() else {
        for (name, text) in EXAMPLES {
            fs::write(cli.out.join(name), text)?;
        }
        println!("wrote {} example configurations to {}", EXAMPLES.len(), cli.out.display());
        return Ok(());
    };
    let text = fs::read_to_string(config_path).map_err(|e| CliError::Io(format!("{}: {e}", config_path.display())))?;
    let mut cfg = parse_config(&text)?;
    apply_overrides(&mut cfg, cli.lambda_max, cli.r_max, cli.tol)?;
    let canonical = to_canonical_string(&cfg);
    let key = sha256_hex(&[SCHEMA_VERSION, &canonical, command.name()]);
    let cache_dir = cli.cache_dir.clone().unwrap_or_else(|| cli.out.join(".cache"));
    let cache_path = cache_dir.join(format!("{key}.json"));

    let cached = if cli.no_cache { None } else { read_cache(&cache_path) };
    let cache_state = match (&cached, cli.no_cache) {
        (_, true) => "disabled",
        (Some(_), _) => "hit",
        (None, _) => "miss",
    };
    let rendered = match cached {
        Some(r) => r,
        None => {
            let r = match cli.threads {
                Some(n) => {
                    let pool = rayon::ThreadPoolBuilder::new()
                        .num_threads(n.max(1))
                        .build()
                        .map_err(|e| CliError::Io(e.to_string()))?;
                    pool.install(|| render(command, &cfg))?
                }
                None => render(command, &cfg)?,
            };
            if !cli.no_cache {
                fs::create_dir_all(&cache_dir)?;
                write_atomic(&cache_path, &serde_json::to_string(&r).expect("cache entry serializes"))?;
            }
            r
        }
    };

    let mut files = Vec::new();
    if matches!(cli.format, Format::Json | Format::Both) {
        let name = format!("{}.json", command.name());
        fs::write(cli.out.join(&name), &rendered.json)?;
        files.push(name);
    }
    if matches!(cli.format, Format::Csv | Format::Both) {
        let name = format!("{}.csv", command.name());
        fs::write(cli.out.join(&name), &rendered.csv)?;
        files.push(name);
    }
    let manifest = json!({
        "schema_version": SCHEMA_VERSION,
        "tool_version": env!("CARGO_PKG_VERSION"),
        "command": command.name(),
        "config": config_path.display().to_string(),
        "config_digest": sha256_hex(&[&canonical]),
        "cache_key": key,
        "cache": cache_state,
        "files": files,
    });
    fs::write(cli.out.join("manifest.json"), canonical_json(&manifest))?;
    for f in &files {
        println!("{}", cli.out.join(f).display());
    }
    Ok(())
}

/// Parses `args` (program name first) and runs; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
