use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use super::CliError;
use crate::coherent::DEFAULT_LABEL_GUARD;

/// Environment variable naming the directory reports are written to.
pub const OUTPUT_DIR_VAR: &str = "CSQ_OUTPUT_DIR";

#[derive(Debug, Parser)]
#[command(
    name = "csquant",
    version,
    about = "Constrained coherent-state quantization checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Group-average and spectral projectors for the rotation constraint.
    ProjectorSuite(RunArgs),
    /// Reproducing kernel of the rotation-invariant subspace.
    Example1(RunArgs),
    /// Second-class pair: Gaussian projector, reduction and one-form.
    Example2(RunArgs),
    /// Projected Trotter convergence and lattice forms.
    Trotter(RunArgs),
    /// Multiplier-schedule independence of the projected propagator.
    Gauge(RunArgs),
    /// Resolution of unity and upper symbols.
    Unity(RunArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    ProjectorSuite,
    Example1,
    Example2,
    Trotter,
    Gauge,
    Unity,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::ProjectorSuite => "projector-suite",
            Suite::Example1 => "example1",
            Suite::Example2 => "example2",
            Suite::Trotter => "trotter",
            Suite::Gauge => "gauge",
            Suite::Unity => "unity",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    #[value(name = "total_quanta", alias = "total-quanta")]
    TotalQuanta,
    #[value(name = "per_mode", alias = "per-mode")]
    PerMode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

/// Options shared by every subcommand. Unset values fall back to the config
/// file, then to per-suite defaults.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct RunArgs {
    /// Cutoff(s): total quanta N_max or per-mode n_max, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub nmax: Option<Vec<usize>>,
    #[arg(long, value_enum)]
    pub scheme: Option<Scheme>,
    /// Half-width L of the phase-space box.
    #[arg(long = "box")]
    #[serde(rename = "box")]
    pub half_width: Option<f64>,
    /// Quadrature points per phase-space axis.
    #[arg(long)]
    pub points: Option<usize>,
    /// Total evolution time.
    #[arg(long = "T")]
    #[serde(rename = "T")]
    pub t: Option<f64>,
    /// Slice counts, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub slices: Option<Vec<usize>>,
    /// Seed for random multipliers and group parameters.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of random multiplier schedules.
    #[arg(long)]
    pub schedules: Option<usize>,
    /// Largest label amplitude |z| in kernel and symbol grids.
    #[arg(long)]
    pub label_radius: Option<f64>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Report file; its directory is replaced by $CSQ_OUTPUT_DIR when set.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// TOML file with the same keys as the long flags; flags win.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Record wall-clock seconds per phase (makes reports non-reproducible).
    #[arg(long)]
    #[serde(default)]
    pub timings: bool,
}

impl RunArgs {
    fn or(self, file: RunArgs) -> RunArgs {
        RunArgs {
            nmax: self.nmax.or(file.nmax),
            scheme: self.scheme.or(file.scheme),
            half_width: self.half_width.or(file.half_width),
            points: self.points.or(file.points),
            t: self.t.or(file.t),
            slices: self.slices.or(file.slices),
            seed: self.seed.or(file.seed),
            schedules: self.schedules.or(file.schedules),
            label_radius: self.label_radius.or(file.label_radius),
            format: self.format.or(file.format),
            output: self.output.or(file.output),
            config: self.config,
            timings: self.timings || file.timings,
        }
    }
}

/// Fully resolved run configuration, echoed into every report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub suite: Suite,
    pub scheme: Scheme,
    pub nmax: Vec<usize>,
    #[serde(rename = "box")]
    pub half_width: f64,
    pub points: usize,
    #[serde(rename = "T")]
    pub t: f64,
    pub slices: Vec<usize>,
    pub seed: u64,
    pub schedules: usize,
    pub label_radius: f64,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub timings: bool,
    #[serde(skip)]
    pub warnings: Vec<String>,
}

struct Defaults {
    scheme: Scheme,
    nmax: &'static [usize],
    half_width: f64,
    slices: &'static [usize],
    label_radius: f64,
}

fn defaults(suite: Suite) -> Defaults {
    let base = Defaults {
        scheme: Scheme::TotalQuanta,
        nmax: &[40],
        half_width: 6.0,
        slices: &[10, 20, 40, 80, 160],
        label_radius: 1.0,
    };
    match suite {
        Suite::ProjectorSuite => Defaults {
            nmax: &[4, 8, 12],
            ..base
        },
        Suite::Example1 => Defaults {
            nmax: &[10, 20, 30, 40],
            ..base
        },
        Suite::Example2 => Defaults {
            scheme: Scheme::PerMode,
            nmax: &[12],
            half_width: 8.0,
            ..base
        },
        Suite::Trotter => Defaults {
            nmax: &[20],
            ..base
        },
        Suite::Gauge => Defaults {
            nmax: &[8],
            slices: &[100],
            ..base
        },
        Suite::Unity => Defaults {
            label_radius: 2.0,
            ..base
        },
    }
}

fn load_file(path: &Path) -> Result<RunArgs, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("reading {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

/// Parse command-line arguments (including the program name) into a
/// validated configuration.
pub fn parse_config<I, T>(args: I) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args)?;
    resolve(cli.command)
}

pub fn resolve(command: Command) -> Result<RunConfig, CliError> {
    let (suite, args) = match command {
        Command::ProjectorSuite(a) => (Suite::ProjectorSuite, a),
        Command::Example1(a) => (Suite::Example1, a),
        Command::Example2(a) => (Suite::Example2, a),
        Command::Trotter(a) => (Suite::Trotter, a),
        Command::Gauge(a) => (Suite::Gauge, a),
        Command::Unity(a) => (Suite::Unity, a),
    };
    let args = match &args.config {
        Some(path) => {
            let file = load_file(path)?;
            args.or(file)
        }
        None => args,
    };
    let d = defaults(suite);
    let mut warnings = Vec::new();
    let mut scheme = args.scheme.unwrap_or(d.scheme);
    if suite == Suite::Example1 && scheme == Scheme::PerMode {
        warnings.push("example1 needs a total_quanta space; switching scheme".to_string());
        scheme = Scheme::TotalQuanta;
    }
    let config = RunConfig {
        suite,
        scheme,
        nmax: args.nmax.unwrap_or_else(|| d.nmax.to_vec()),
        half_width: args.half_width.unwrap_or(d.half_width),
        points: args.points.unwrap_or(64),
        t: args.t.unwrap_or(1.0),
        slices: args.slices.unwrap_or_else(|| d.slices.to_vec()),
        seed: args.seed.unwrap_or(42),
        schedules: args.schedules.unwrap_or(5),
        label_radius: args.label_radius.unwrap_or(d.label_radius),
        format: args.format.unwrap_or(Format::Json),
        output: args.output,
        timings: args.timings,
        warnings,
    };
    validate(&config)?;
    Ok(config)
}

fn validate(c: &RunConfig) -> Result<(), CliError> {
    let bad = |what: &str| Err(CliError::Usage(what.to_string()));
    if c.nmax.is_empty() || c.nmax.contains(&0) {
        return bad("--nmax values must be positive");
    }
    if c.slices.is_empty() || c.slices.contains(&0) {
        return bad("--slices values must be positive");
    }
    if !(c.half_width.is_finite() && c.half_width > 0.0) {
        return bad("--box must be positive");
    }
    if c.points == 0 {
        return bad("--points must be positive");
    }
    if !(c.t.is_finite() && c.t > 0.0) {
        return bad("--T must be positive");
    }
    if c.schedules == 0 {
        return bad("--schedules must be positive");
    }
    if !(c.label_radius.is_finite()
        && c.label_radius > 0.0
        && c.label_radius <= DEFAULT_LABEL_GUARD)
    {
        return Err(CliError::Usage(format!(
            "--label-radius must lie in (0, {DEFAULT_LABEL_GUARD}]"
        )));
    }
    Ok(())
}

impl RunConfig {
    /// Destination of the report file.
    pub fn output_path(&self) -> PathBuf {
        let default_name = format!("{}-report.{}", self.suite.name(), self.format.extension());
        let (dir, name) = match &self.output {
            Some(p) => (
                p.parent().map(Path::to_path_buf).unwrap_or_default(),
                p.file_name()
                    .map(|n| n.to_os_string())
                    .unwrap_or_else(|| default_name.clone().into()),
            ),
            None => (PathBuf::new(), default_name.into()),
        };
        match std::env::var_os(OUTPUT_DIR_VAR) {
            Some(env_dir) if !env_dir.is_empty() => PathBuf::from(env_dir).join(name),
            _ => dir.join(name),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example1_defaults_and_override() {
        let c = parse_config(["csquant", "example1", "--nmax", "30", "--format", "json"]).unwrap();
        assert_eq!(c.suite, Suite::Example1);
        assert_eq!(c.nmax, vec![30]);
        assert_eq!(c.format, Format::Json);
        let c = parse_config(["csquant", "example1"]).unwrap();
        assert_eq!(c.nmax, vec![10, 20, 30, 40]);
        assert_eq!(c.half_width, 6.0);
        assert_eq!(c.points, 64);
        assert_eq!(c.t, 1.0);
    }

    #[test]
    fn trotter_slice_list() {
        let c = parse_config(["csquant", "trotter", "--T", "2", "--slices", "10,20,40"]).unwrap();
        assert_eq!(c.slices, vec![10, 20, 40]);
        assert_eq!(c.t, 2.0);
        let c = parse_config(["csquant", "trotter"]).unwrap();
        assert_eq!(c.slices, vec![10, 20, 40, 80, 160]);
    }

    #[test]
    fn usage_errors() {
        assert!(matches!(parse_config(["csquant"]), Err(CliError::Clap(_))));
        assert!(matches!(
            parse_config(["csquant", "unity", "--bogus"]),
            Err(CliError::Clap(_))
        ));
        assert!(matches!(
            parse_config(["csquant", "unity", "--points", "0"]),
            Err(CliError::Usage(_))
        ));
        assert!(matches!(
            parse_config(["csquant", "unity", "--label-radius", "9"]),
            Err(CliError::Usage(_))
        ));
    }

    #[test]
    fn per_mode_example1_switches_scheme() {
        let c = parse_config(["csquant", "example1", "--scheme", "per_mode"]).unwrap();
        assert_eq!(c.scheme, Scheme::TotalQuanta);
        assert_eq!(c.warnings.len(), 1);
    }

    #[test]
    fn file_values_lose_to_flags() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        fs::write(&path, "nmax = [6]\npoints = 32\nT = 3.0\n").unwrap();
        let p = path.to_str().unwrap();
        let c = parse_config(["csquant", "unity", "--config", p, "--points", "48"]).unwrap();
        assert_eq!(c.nmax, vec![6]);
        assert_eq!(c.points, 48);
        assert_eq!(c.t, 3.0);
        fs::write(&path, "unknown = 1\n").unwrap();
        assert!(matches!(
            parse_config(["csquant", "unity", "--config", p]),
            Err(CliError::Usage(_))
        ));
    }
}
