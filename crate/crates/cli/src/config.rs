//! Command-line flags, the JSON config file mirroring them, and the merged,
//! validated run configuration.

use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use idxf_core::bergman::{GammaMode, GammaParam};
use idxf_core::transform::Convention;
use idxf_core::verify::{Suite, DEFAULT_SEED, MAX_TOL, MIN_TOL};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const DEFAULT_GAMMA: f64 = 2.0;
pub const DEFAULT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Verify,
    Transform,
    Eval,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Strict,
    Extended,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum What {
    Basis,
    Kernel,
    KernelDiagonal,
    Eigenfunction,
    CoherentState,
    Energy,
}

impl What {
    pub fn name(self) -> &'static str {
        match self {
            What::Basis => "basis",
            What::Kernel => "kernel",
            What::KernelDiagonal => "kernel-diagonal",
            What::Eigenfunction => "eigenfunction",
            What::CoherentState => "coherent-state",
            What::Energy => "energy",
        }
    }
}

/// Index ₂F₂ transform toolkit: verification suites, tabulation and the
/// transform itself.
///
/// IDXF_MAX_THREADS bounds the number of worker threads.
#[derive(Debug, Parser)]
#[command(name = "idxf", version)]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// JSON file with any of the flags below; flags given on the command
    /// line take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<f64>,
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    /// Tolerance in [1e-12, 1e-3]; loosens every check whose pinned
    /// accuracy is tighter.
    #[arg(long)]
    pub tol: Option<f64>,
    /// gamma | bessel | hyper | bergman | oscillator | transform | all
    #[arg(long)]
    pub suite: Option<String>,
    #[arg(long, value_enum)]
    pub what: Option<What>,
    /// Coefficient file, or sampled-function file with an `# envelope:` line.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Inline coefficients, e.g. "0, i".
    #[arg(long, allow_hyphen_values = true)]
    pub coeffs: Option<String>,
    /// `a+bi;c+di`, `lattice:re0:re1:nre:im0:im1:nim` or `|z|=r[:count]`.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
    /// Degrees: `3`, `0..3` or `0,2,5`.
    #[arg(long)]
    pub n: Option<String>,
    /// Abscissae: `0.5`, `0,0.5,1` or `a:b:count`.
    #[arg(long)]
    pub x: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Use the linear convention `Σ c_n ψ_n` instead of `Σ conj(c_n) ψ_n`.
    #[arg(long)]
    pub linear: bool,
    #[arg(long)]
    pub seed: Option<u64>,
}

/// Contents of a `--config` file.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub gamma: Option<f64>,
    pub mode: Option<Mode>,
    pub tol: Option<f64>,
    pub suite: Option<String>,
    pub what: Option<What>,
    pub input: Option<PathBuf>,
    pub coeffs: Option<String>,
    pub grid: Option<String>,
    pub n: Option<String>,
    pub x: Option<String>,
    pub out: Option<PathBuf>,
    pub linear: Option<bool>,
    pub seed: Option<u64>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("config {}: {e}", path.display())))
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub gamma: GammaParam,
    pub tol: f64,
    pub suite: Suite,
    pub what: Option<What>,
    pub input: Option<PathBuf>,
    pub coeffs: Option<String>,
    pub grid: Option<String>,
    pub n: Option<String>,
    pub x: Option<String>,
    pub out: Option<PathBuf>,
    pub convention: Convention,
    pub seed: u64,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self, CliError> {
        let file = match &cli.config {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };
        let gamma = cli.gamma.or(file.gamma).unwrap_or(DEFAULT_GAMMA);
        let mode = match cli.mode.or(file.mode).unwrap_or(Mode::Strict) {
            Mode::Strict => GammaMode::Strict,
            Mode::Extended => GammaMode::Extended,
        };
        let gamma = GammaParam::new(gamma, mode).map_err(|e| CliError::Config(e.to_string()))?;
        let tol = cli.tol.or(file.tol).unwrap_or(DEFAULT_TOL);
        if !(MIN_TOL..=MAX_TOL).contains(&tol) {
            return Err(CliError::Config(format!("--tol must lie in [{MIN_TOL:e}, {MAX_TOL:e}], got {tol:e}")));
        }
        let suite = match cli.suite.or(file.suite) {
            Some(s) => s.parse().map_err(|e: idxf_core::Error| CliError::Config(e.to_string()))?,
            None => Suite::All,
        };
        let out = cli.out.or(file.out);
        if let Some(p) = &out {
            let parent = p.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
            if !parent.is_dir() {
                return Err(CliError::Config(format!("output directory {} does not exist", parent.display())));
            }
        }
        let linear = cli.linear || file.linear.unwrap_or(false);
        Ok(Self {
            command: cli.command,
            gamma,
            tol,
            suite,
            what: cli.what.or(file.what),
            input: cli.input.or(file.input),
            coeffs: cli.coeffs.or(file.coeffs),
            grid: cli.grid.or(file.grid),
            n: cli.n.or(file.n),
            x: cli.x.or(file.x),
            out,
            convention: if linear { Convention::Linear } else { Convention::ConjugateLinear },
            seed: cli.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
        })
    }

    pub fn mode_name(&self) -> &'static str {
        match self.gamma.mode {
            GammaMode::Strict => "strict",
            GammaMode::Extended => "extended",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Result<RunConfig, CliError> {
        let cli = Cli::try_parse_from(std::iter::once("idxf").chain(args.iter().copied())).unwrap();
        RunConfig::from_cli(cli)
    }

    #[test]
    fn defaults() {
        let cfg = parse(&["verify"]).unwrap();
        assert_eq!(cfg.gamma.gamma, DEFAULT_GAMMA);
        assert_eq!(cfg.tol, DEFAULT_TOL);
        assert_eq!(cfg.suite, Suite::All);
        assert_eq!(cfg.convention, Convention::ConjugateLinear);
    }

    #[test]
    fn validation() {
        assert!(parse(&["verify", "--tol", "1e-2"]).is_err());
        assert!(parse(&["verify", "--gamma", "1.3"]).is_err());
        assert!(parse(&["verify", "--gamma", "1.3", "--mode", "extended"]).is_ok());
        assert!(parse(&["verify", "--gamma", "0.25", "--mode", "extended"]).is_err());
        assert!(parse(&["verify", "--suite", "everything"]).is_err());
        assert!(parse(&["eval", "--out", "/nonexistent/dir/f.csv"]).is_err());
        assert_eq!(parse(&["transform", "--linear"]).unwrap().convention, Convention::Linear);
        assert_eq!(parse(&["transform", "--grid", "-1+i"]).unwrap().grid.as_deref(), Some("-1+i"));
    }

    #[test]
    fn config_file_is_overridden_by_flags() {
        let dir = std::env::temp_dir().join(format!("idxf-config-test-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("cfg.json");
        std::fs::write(&path, r#"{"gamma": 1.5, "tol": 1e-6, "suite": "bessel", "linear": true}"#).unwrap();
        let p = path.to_str().unwrap();
        let cfg = parse(&["verify", "--config", p, "--gamma", "3"]).unwrap();
        assert_eq!(cfg.gamma.gamma, 3.0);
        assert_eq!(cfg.tol, 1e-6);
        assert_eq!(cfg.suite, Suite::Bessel);
        assert_eq!(cfg.convention, Convention::Linear);
        std::fs::write(&path, r#"{"gamma": 1.5, "colour": "blue"}"#).unwrap();
        assert!(parse(&["verify", "--config", p]).is_err());
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
