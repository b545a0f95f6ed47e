//! Command line, run configuration and validation.

use crate::CliError;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "CYCLAB_OUT";

pub const VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), " (report format 1)");

#[derive(Parser, Debug)]
#[command(name = "cyclab", version = VERSION, about = "Cyclicity laboratory: weighted spaces, Corona solving and decay experiments")]
pub struct Cli {
    /// Output directory for the JSON report and CSV tables.
    #[arg(long, global = true, env = OUT_DIR_ENV)]
    pub out: Option<PathBuf>,
    /// Seed for randomised sweeps.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Re-run the configuration echoed in a report (or a bare config file).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Subcommand, Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    /// Reduced-weight diagnostics and the doubling subsequence.
    Weight {
        #[command(subcommand)]
        action: WeightAction,
    },
    /// Manufactured ∂̄ problems on the disc and bidisc.
    Dbar {
        #[command(subcommand)]
        action: DbarAction,
    },
    /// Bezout equations through the Koszul complex.
    Corona {
        #[command(subcommand)]
        action: CoronaAction,
    },
    /// Harnack floors of a zero-free function.
    Harnack {
        #[command(subcommand)]
        action: HarnackAction,
    },
    /// Decay of ‖1 − fU‖ in a weighted space.
    Cyclicity {
        #[command(subcommand)]
        action: CyclicityAction,
    },
    /// Invariant suite on the shipped fixtures.
    Selftest,
}

#[derive(Subcommand, Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightAction {
    Check(WeightCheck),
    Subseq(WeightSubseq),
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightCheck {
    /// Weight or space JSON.
    #[arg(long)]
    pub spec: PathBuf,
    #[arg(long, default_value_t = 1000)]
    pub kmax: usize,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightSubseq {
    #[arg(long)]
    pub spec: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    pub c0: f64,
    #[arg(long, default_value_t = 100_000)]
    pub kmax: usize,
    /// Also build a split plan with this value of c.
    #[arg(long)]
    pub c: Option<f64>,
    /// Bezout constant C(d) feeding A = max(2, ln C(d)).
    #[arg(long, default_value_t = 10.0)]
    pub cd: f64,
    #[arg(long)]
    pub j0: Option<usize>,
    #[arg(long)]
    pub aggressive: bool,
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long)]
    pub b: Option<f64>,
}

#[derive(Subcommand, Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DbarAction {
    Solve(DbarSolve),
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DbarCase {
    #[value(name = "disc-01")]
    Disc01,
    #[value(name = "bidisc-01")]
    Bidisc01,
    #[value(name = "bidisc-02")]
    Bidisc02,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DbarSolve {
    #[arg(long, value_enum, default_value = "disc-01")]
    pub case: DbarCase,
    /// Rings and angles per axis.
    #[arg(long, default_value_t = 64)]
    pub resolution: usize,
    #[arg(long, default_value_t = 0.95)]
    pub rho: f64,
    /// Residual tolerance of the manufactured solutions.
    #[arg(long, default_value_t = 1e-3)]
    pub tol: f64,
    /// Relative closedness tolerance for (0,1) data.
    #[arg(long, default_value_t = 1e-4)]
    pub closedness_tol: f64,
}

#[derive(Subcommand, Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoronaAction {
    Solve(CoronaSolve),
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoronaSolve {
    /// Problem JSON listing the functions f_j.
    #[arg(long)]
    pub problem: PathBuf,
    #[arg(long, default_value_t = 0.95)]
    pub rho: f64,
    /// Rings per axis [default: 6000 on the disc, 24 on the bidisc].
    #[arg(long)]
    pub resolution: Option<usize>,
    /// Angles per axis [default: 64 on the disc, 32 on the bidisc].
    #[arg(long)]
    pub angles: Option<usize>,
    /// Measure the Bezout residual only where every |z_i| ≤ this radius.
    #[arg(long)]
    pub residual_radius: Option<f64>,
    /// Tolerance on max|Σ f_j g_j − 1|.
    #[arg(long, default_value_t = 1e-4)]
    pub tol: f64,
    /// Tolerance on the ∂̄ residual of each g_j.
    #[arg(long, default_value_t = 1e-3)]
    pub holomorphy_tol: f64,
    /// C(d,Ω) in the reported bound.
    #[arg(long, default_value_t = 10.0)]
    pub cd_omega: f64,
    /// Write the samples of every g_j.
    #[arg(long)]
    pub dump: bool,
}

#[derive(Subcommand, Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HarnackAction {
    Verify(HarnackVerify),
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HarnackVerify {
    #[arg(long)]
    pub u: PathBuf,
    /// Single k to check.
    #[arg(long)]
    pub k: Option<usize>,
    /// Check every admissible k up to this value.
    #[arg(long)]
    pub kmax: Option<usize>,
    #[arg(long, default_value_t = 1.0)]
    pub rho: f64,
    /// Radial and angular grid counts (defaults depend on dimension).
    #[arg(long)]
    pub radial: Option<usize>,
    #[arg(long)]
    pub angular: Option<usize>,
}

#[derive(Subcommand, Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CyclicityAction {
    Run(CyclicityRun),
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Direct,
    Split,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CyclicityRun {
    #[arg(long)]
    pub u: PathBuf,
    #[arg(long)]
    pub space: PathBuf,
    #[arg(long, value_enum, default_value = "direct")]
    pub mode: Mode,
    #[arg(long, value_delimiter = ',', default_value = "8,16,32,64")]
    pub nlist: Vec<usize>,
    #[arg(long)]
    pub aggressive: bool,
    #[arg(long, default_value_t = 0.95)]
    pub rho: f64,
    #[arg(long, default_value_t = 500)]
    pub radial_per_n: usize,
    #[arg(long, default_value_t = 2000)]
    pub radial_min: usize,
    #[arg(long, default_value_t = 32)]
    pub angular_extra: usize,
    /// C(d) in the decay bound (and A in split mode).
    #[arg(long, default_value_t = 10.0)]
    pub cd: f64,
    /// C(d,Ω) in the Bezout bound.
    #[arg(long, default_value_t = 10.0)]
    pub cd_omega: f64,
    #[arg(long)]
    pub cm: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub c0: f64,
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long)]
    pub b: Option<f64>,
    /// Range of the reduced-weight table in split mode.
    #[arg(long, default_value_t = 100_000)]
    pub kmax: usize,
}

/// Everything a run depends on; echoed verbatim into every report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub out_dir: PathBuf,
    pub seed: u64,
}

impl RunConfig {
    /// Build from parsed arguments, reading `--config` when given.
    pub fn from_cli(cli: Cli) -> Result<Self, CliError> {
        let default_out = || PathBuf::from("cyclab-out");
        let mut cfg = match (&cli.config, cli.command) {
            (Some(path), _) => Self::load(path)?,
            (None, Some(command)) => RunConfig {
                command,
                out_dir: default_out(),
                seed: 0,
            },
            (None, None) => {
                return Err(CliError::Parse(
                    "no subcommand given (try --help)".into(),
                ))
            }
        };
        if let Some(out) = cli.out {
            cfg.out_dir = out;
        }
        if let Some(seed) = cli.seed {
            cfg.seed = seed;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Read a bare config or the `config` field of a report.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = crate::read_text(path)?;
        let value: serde_json::Value =
            serde_json::from_str(&text).map_err(|e| CliError::json(path, &e))?;
        let inner = value.get("config").cloned().unwrap_or(value);
        serde_json::from_value(inner)
            .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Parse(m));
        let rho_ok = |r: f64| r > 0.0 && r < 1.0;
        match &self.command {
            Command::Weight { action } => match action {
                WeightAction::Check(a) if a.kmax < 16 => bad(format!("--kmax {} < 16", a.kmax)),
                WeightAction::Subseq(a) if a.kmax < 16 => bad(format!("--kmax {} < 16", a.kmax)),
                WeightAction::Subseq(a) if !(a.c0 > 0.0) => bad(format!("--c0 {}", a.c0)),
                _ => Ok(()),
            },
            Command::Dbar {
                action: DbarAction::Solve(a),
            } => {
                if !rho_ok(a.rho) {
                    bad(format!("--rho {} outside (0,1)", a.rho))
                } else if a.resolution < 16 {
                    bad(format!("--resolution {} < 16", a.resolution))
                } else if !(a.tol > 0.0 && a.closedness_tol > 0.0) {
                    bad("tolerances must be positive".into())
                } else {
                    Ok(())
                }
            }
            Command::Corona {
                action: CoronaAction::Solve(a),
            } => {
                if !rho_ok(a.rho) {
                    bad(format!("--rho {} outside (0,1)", a.rho))
                } else if a.resolution.is_some_and(|r| r < 16) || a.angles.is_some_and(|r| r < 16) {
                    bad("resolution and angles must be at least 16".into())
                } else if a.residual_radius.is_some_and(|r| !(r > 0.0 && r <= a.rho)) {
                    bad("--residual-radius must lie in (0, rho]".into())
                } else if !(a.tol > 0.0 && a.holomorphy_tol > 0.0) {
                    bad("tolerances must be positive".into())
                } else {
                    Ok(())
                }
            }
            Command::Harnack {
                action: HarnackAction::Verify(a),
            } => {
                if !(a.rho > 0.0 && a.rho <= 1.0) {
                    bad(format!("--rho {} outside (0,1]", a.rho))
                } else if a.k.is_none() && a.kmax.is_none() {
                    bad("give --k or --kmax".into())
                } else if a.radial.is_some_and(|r| r < 16) || a.angular.is_some_and(|r| r < 16) {
                    bad("grid counts must be at least 16".into())
                } else {
                    Ok(())
                }
            }
            Command::Cyclicity {
                action: CyclicityAction::Run(a),
            } => {
                if !rho_ok(a.rho) {
                    bad(format!("--rho {} outside (0,1)", a.rho))
                } else if a.radial_min < 16 {
                    bad(format!("--radial-min {} < 16", a.radial_min))
                } else if a.nlist.is_empty() && a.mode == Mode::Direct {
                    bad("empty --nlist".into())
                } else {
                    Ok(())
                }
            }
            Command::Selftest => Ok(()),
        }
    }
}
