//! Command-line and config-file parsing into a validated [`RunConfig`].

use clap::{Parser, Subcommand, ValueEnum};
use zmlab_core::C64;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use zmlab_core::arith::{DirichletCoefficients, ShiftTuple};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("i/o: {0}")]
    Io(String),
    #[error("numeric budget: {0}")]
    Budget(String),
    #[error("{0}")]
    Tolerance(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
            CliError::Budget(_) => 4,
            CliError::Tolerance(_) => 5,
        }
    }
}

impl From<zmlab_core::Error> for CliError {
    fn from(e: zmlab_core::Error) -> Self {
        use zmlab_core::Error as E;
        match e {
            E::Budget(_) | E::Refinement { .. } | E::Evaluation(_) => CliError::Budget(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Verify,
    Moment,
    Qdp,
    Afe,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ToleranceProfile {
    Strict,
    #[default]
    Default,
}

/// Which main term decides the moment command's exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Compare {
    #[default]
    Thm1,
    Thm2,
    Both,
}

/// Flags shared by every subcommand. Anything left unset falls back to the
/// config file and then to the per-command default.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct Flags {
    /// JSON config file whose keys mirror the long flags (T, X, Z, shifts, ...).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Moment height T (moment) or the point t (afe).
    #[arg(long = "T", global = true)]
    pub t: Option<f64>,
    /// Divisor-problem scale X (qdp).
    #[arg(long = "X", global = true)]
    pub x: Option<f64>,
    /// Divisor-problem scale Z (qdp); defaults to X. The shift window is h ~ 2X/Z.
    #[arg(long = "Z", global = true)]
    pub z: Option<f64>,
    /// Shifts α,β,γ,δ as four reals. Defaults: moment 0.04,0.02,0.03,0.01;
    /// qdp 0.2,-0.1,0.1,-0.1; afe 0.03,-0.02,0.015,-0.04.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub shifts: Option<String>,
    /// Coefficient file for A: lines "n re im", 1-indexed; default δ₁.
    #[arg(long = "coeffs-a", global = true)]
    pub coeffs_a: Option<PathBuf>,
    /// Coefficient file for B; default δ₁.
    #[arg(long = "coeffs-b", global = true)]
    pub coeffs_b: Option<PathBuf>,
    /// JSON report path; the CSV breakdown goes next to it with extension .csv.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Seed for the verify suite's random draws.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long = "tolerance-profile", global = true, value_enum)]
    pub tolerance_profile: Option<ToleranceProfile>,
    /// Nodes on the contour for Z̃ (moment) or f̃ (qdp).
    #[arg(long, global = true)]
    pub nodes: Option<usize>,
    /// Initial trapezoid step for the direct moment integral.
    #[arg(long, global = true)]
    pub step: Option<f64>,
    /// Main term that decides the moment exit status.
    #[arg(long, global = true, value_enum)]
    pub compare: Option<Compare>,
}

#[derive(Debug, Parser)]
#[command(name = "zmlab", version, about = "Fourth-moment and quadratic-divisor verification workbench")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Sub,
}

#[derive(Debug, Subcommand)]
pub enum Sub {
    /// Run the identity suite.
    Verify(Flags),
    /// Direct fourth moment against the six-term main terms.
    Moment(Flags),
    /// Brute-force divisor sum against the four permuted main terms.
    Qdp(Flags),
    /// Both sides of the approximate functional equation at t = T.
    Afe(Flags),
}

impl Sub {
    pub fn split(self) -> (Command, Flags) {
        match self {
            Sub::Verify(f) => (Command::Verify, f),
            Sub::Moment(f) => (Command::Moment, f),
            Sub::Qdp(f) => (Command::Qdp, f),
            Sub::Afe(f) => (Command::Afe, f),
        }
    }
}

/// Config-file contents; same names as the flags.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(rename = "T")]
    pub t: Option<f64>,
    #[serde(rename = "X")]
    pub x: Option<f64>,
    #[serde(rename = "Z")]
    pub z: Option<f64>,
    pub shifts: Option<[f64; 4]>,
    pub coeffs_a: Option<CoeffSource>,
    pub coeffs_b: Option<CoeffSource>,
    pub out: Option<PathBuf>,
    pub workers: Option<usize>,
    pub seed: Option<u64>,
    pub tolerance_profile: Option<ToleranceProfile>,
    pub nodes: Option<usize>,
    pub step: Option<f64>,
    pub compare: Option<Compare>,
}

/// Coefficients given inline as [[re, im], ...] (index 1 first) or as a file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoeffSource {
    Inline(Vec<[f64; 2]>),
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub shifts: [f64; 4],
    /// Resolved coefficient values, index 1 first, as [re, im].
    pub coeffs_a: Vec<[f64; 2]>,
    pub coeffs_b: Vec<[f64; 2]>,
    #[serde(rename = "T")]
    pub t: Option<f64>,
    #[serde(rename = "X")]
    pub x: Option<f64>,
    #[serde(rename = "Z")]
    pub z: Option<f64>,
    pub nodes: Option<usize>,
    pub step: Option<f64>,
    pub compare: Compare,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[serde(skip)]
    pub workers: Option<usize>,
    pub seed: u64,
    pub tolerance_profile: ToleranceProfile,
}

impl RunConfig {
    pub fn shift_tuple(&self) -> Result<ShiftTuple, CliError> {
        let [a, b, g, d] = self.shifts;
        Ok(ShiftTuple::real(a, b, g, d)?)
    }

    pub fn coefficients(&self) -> (DirichletCoefficients, DirichletCoefficients) {
        let conv = |v: &[[f64; 2]]| DirichletCoefficients::new(v.iter().map(|p| C64::new(p[0], p[1])).collect());
        (conv(&self.coeffs_a), conv(&self.coeffs_b))
    }

    /// SHA-256 prefix of the canonical JSON form.
    pub fn digest(&self) -> String {
        zmlab_core::verify::digest(&serde_json::to_string(self).expect("RunConfig serializes"))
    }
}

fn parse_shifts(s: &str) -> Result<[f64; 4], CliError> {
    let v: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|_| CliError::Usage(format!("malformed shift '{x}'"))))
        .collect::<Result<_, _>>()?;
    v.try_into().map_err(|v: Vec<f64>| CliError::Usage(format!("--shifts needs 4 values, got {}", v.len())))
}

/// Reads "n re im" lines; blank lines and lines starting with '#' are skipped.
pub fn read_coefficients(path: &Path) -> Result<Vec<[f64; 2]>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_coefficients(&text).map_err(|e| match e {
        CliError::Usage(m) => CliError::Usage(format!("{}: {m}", path.display())),
        other => other,
    })
}

pub fn parse_coefficients(text: &str) -> Result<Vec<[f64; 2]>, CliError> {
    let mut out: Vec<[f64; 2]> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let f: Vec<&str> = line.split_whitespace().collect();
        let bad = || CliError::Usage(format!("line {}: expected 'n re im', got '{line}'", i + 1));
        if f.len() != 3 {
            return Err(bad());
        }
        let n: usize = f[0].parse().map_err(|_| bad())?;
        let re: f64 = f[1].parse().map_err(|_| bad())?;
        let im: f64 = f[2].parse().map_err(|_| bad())?;
        if n == 0 {
            return Err(CliError::Usage(format!("line {}: indices start at 1", i + 1)));
        }
        if out.len() < n {
            out.resize(n, [0.0, 0.0]);
        }
        out[n - 1] = [re, im];
    }
    Ok(out)
}

fn resolve_coeffs(flag: Option<PathBuf>, file: Option<CoeffSource>, base: &Path) -> Result<Vec<[f64; 2]>, CliError> {
    match (flag, file) {
        (Some(p), _) => read_coefficients(&p),
        (None, Some(CoeffSource::File(p))) => read_coefficients(&base.join(p)),
        (None, Some(CoeffSource::Inline(v))) => Ok(v),
        (None, None) => Ok(vec![[1.0, 0.0]]),
    }
}

fn default_shifts(cmd: Command) -> [f64; 4] {
    match cmd {
        Command::Verify | Command::Moment => [0.04, 0.02, 0.03, 0.01],
        Command::Qdp => [0.2, -0.1, 0.1, -0.1],
        Command::Afe => [0.03, -0.02, 0.015, -0.04],
    }
}

/// Merges flags over the config file over the defaults and validates.
pub fn parse_config(cmd: Command, flags: Flags) -> Result<RunConfig, CliError> {
    let (file, base) = match &flags.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
            let fc: FileConfig =
                serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?;
            (fc, p.parent().map(Path::to_path_buf).unwrap_or_default())
        }
        None => (FileConfig::default(), PathBuf::new()),
    };
    let shifts = match flags.shifts {
        Some(s) => parse_shifts(&s)?,
        None => file.shifts.unwrap_or_else(|| default_shifts(cmd)),
    };
    let cfg = RunConfig {
        command: cmd,
        shifts,
        coeffs_a: resolve_coeffs(flags.coeffs_a, file.coeffs_a, &base)?,
        coeffs_b: resolve_coeffs(flags.coeffs_b, file.coeffs_b, &base)?,
        t: flags.t.or(file.t),
        x: flags.x.or(file.x),
        z: flags.z.or(file.z),
        nodes: flags.nodes.or(file.nodes),
        step: flags.step.or(file.step),
        compare: flags.compare.or(file.compare).unwrap_or_default(),
        out: flags.out.or(file.out),
        workers: flags.workers.or(file.workers),
        seed: flags.seed.or(file.seed).unwrap_or(zmlab_core::verify::DEFAULT_SEED),
        tolerance_profile: flags.tolerance_profile.or(file.tolerance_profile).unwrap_or_default(),
    };
    validate(&cfg)?;
    Ok(cfg)
}

fn validate(cfg: &RunConfig) -> Result<(), CliError> {
    let need = |v: Option<f64>, name: &str| -> Result<(), CliError> {
        match v {
            None => Err(CliError::Usage(format!("{} needs --{name}", format!("{:?}", cfg.command).to_lowercase()))),
            Some(x) if !(x > 0.0 && x.is_finite()) => Err(CliError::Usage(format!("--{name} must be positive, got {x}"))),
            Some(_) => Ok(()),
        }
    };
    for (v, name) in [(cfg.t, "T"), (cfg.x, "X"), (cfg.z, "Z"), (cfg.step, "step")] {
        if let Some(x) = v {
            if !(x > 0.0 && x.is_finite()) {
                return Err(CliError::Usage(format!("--{name} must be positive, got {x}")));
            }
        }
    }
    if cfg.workers == Some(0) {
        return Err(CliError::Usage("--workers must be at least 1".into()));
    }
    let sh = cfg.shift_tuple()?;
    match cfg.command {
        Command::Moment => {
            need(cfg.t, "T")?;
            // the smoothing G needs every pairwise half-sum nonzero
            zmlab_core::smoothing::build_G(&sh)?;
        }
        Command::Afe => need(cfg.t, "T")?,
        Command::Qdp => need(cfg.x, "X")?,
        Command::Verify => {}
    }
    Ok(())
}
