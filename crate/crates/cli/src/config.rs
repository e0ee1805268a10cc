use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use relspin::nalgebra::Vector3;
use relspin::OperatorKind;
use serde::Deserialize;

pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Linear (or logarithmic) grid `start:stop:steps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("expected start:stop:steps, got `{s}`"));
        }
        let num = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("bad number `{x}`: {e}"));
        let steps = parts[2]
            .trim()
            .parse::<usize>()
            .map_err(|e| format!("bad step count `{}`: {e}", parts[2]))?;
        Ok(Grid {
            start: num(parts[0])?,
            stop: num(parts[1])?,
            steps,
        })
    }
}

impl Grid {
    pub fn validate(&self, name: &str) -> Result<()> {
        if !self.start.is_finite() || !self.stop.is_finite() {
            bail!("{name} grid must be finite");
        }
        if self.steps < 1 {
            bail!("{name} grid needs at least one step");
        }
        if self.start > self.stop {
            bail!("{name} grid start {} exceeds stop {}", self.start, self.stop);
        }
        Ok(())
    }

    pub fn points(&self, log: bool) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.start];
        }
        let n = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                let t = i as f64 / n;
                if log {
                    (self.start.ln() + t * (self.stop.ln() - self.start.ln())).exp()
                } else {
                    self.start + t * (self.stop - self.start)
                }
            })
            .collect()
    }
}

fn parse_vec3(s: &str) -> std::result::Result<[f64; 3], String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected x,y,z, got `{s}`"));
    }
    let mut out = [0.0; 3];
    for (slot, p) in out.iter_mut().zip(parts) {
        *slot = p.trim().parse().map_err(|e| format!("bad component `{p}`: {e}"))?;
    }
    Ok(out)
}

fn parse_kind(s: &str) -> std::result::Result<OperatorKind, String> {
    s.parse::<OperatorKind>().map_err(|e| e.to_string())
}

/// Flags shared by every command. Each overrides the matching `--config` key.
#[derive(Debug, Clone, Default, Args)]
pub struct ScanArgs {
    /// TOML file with any of the keys below (flags take precedence)
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Particle mass (> 0)
    #[arg(long)]
    pub mass: Option<f64>,
    /// Momentum magnitude grid start:stop:steps
    #[arg(long, value_name = "A:B:N")]
    pub pmag: Option<Grid>,
    /// Explicit momentum for single-point commands
    #[arg(long, value_name = "X,Y,Z", value_parser = parse_vec3, allow_hyphen_values = true)]
    pub p: Option<[f64; 3]>,
    /// Momentum direction for scans (normalized)
    #[arg(long, value_name = "X,Y,Z", value_parser = parse_vec3, allow_hyphen_values = true)]
    pub dir: Option<[f64; 3]>,
    /// Operator kind: wigner | pl
    #[arg(long, value_parser = parse_kind)]
    pub kind: Option<OperatorKind>,
    /// Measurement axis (first particle for `sample`)
    #[arg(long, value_name = "X,Y,Z", value_parser = parse_vec3, allow_hyphen_values = true)]
    pub axis: Option<[f64; 3]>,
    /// Second particle's measurement axis for `sample` (defaults to --axis)
    #[arg(long, value_name = "X,Y,Z", value_parser = parse_vec3, allow_hyphen_values = true)]
    pub axis_b: Option<[f64; 3]>,
    /// Angle grid between axis and momentum, radians
    #[arg(long, value_name = "A:B:N")]
    pub theta: Option<Grid>,
    /// RNG seed (falls back to $RELSPIN_SEED, then 42)
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of sampled shots
    #[arg(long)]
    pub shots: Option<u64>,
    /// Output file (stdout when omitted)
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Output format
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Numerical tolerance for invariant checks
    #[arg(long)]
    pub tol: Option<f64>,
    /// Use a logarithmic momentum grid
    #[arg(long)]
    pub log_grid: bool,
    /// Optimizer restarts for bell-scan
    #[arg(long)]
    pub restarts: Option<usize>,
    /// Objective evaluations per optimizer restart
    #[arg(long)]
    pub max_evals: Option<usize>,
    /// Expectation table JSON to check instead of computing one (table command)
    #[arg(long, value_name = "PATH")]
    pub from: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    mass: Option<f64>,
    pmag: Option<String>,
    p: Option<[f64; 3]>,
    dir: Option<[f64; 3]>,
    kind: Option<String>,
    axis: Option<[f64; 3]>,
    axis_b: Option<[f64; 3]>,
    theta: Option<String>,
    seed: Option<u64>,
    shots: Option<u64>,
    out: Option<PathBuf>,
    format: Option<Format>,
    tol: Option<f64>,
    log_grid: Option<bool>,
    restarts: Option<usize>,
    max_evals: Option<usize>,
    from: Option<PathBuf>,
}

fn read_file_config(path: &Path) -> Result<FileConfig> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    toml::from_str(&text).map_err(|e| anyhow::anyhow!("config {}: {e}", path.display()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanConfig {
    pub mass: f64,
    pub pmag: Grid,
    pub momentum: Vector3<f64>,
    pub dir: Vector3<f64>,
    pub kind: OperatorKind,
    pub axis: Vector3<f64>,
    pub axis_b: Vector3<f64>,
    pub theta: Grid,
    pub seed: u64,
    pub shots: u64,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub tol: f64,
    pub log_grid: bool,
    pub restarts: usize,
    pub max_evals: usize,
    pub from: Option<PathBuf>,
}

fn unit(v: [f64; 3], name: &str) -> Result<Vector3<f64>> {
    let v = Vector3::from(v);
    let n = v.norm();
    if !n.is_finite() || n == 0.0 {
        bail!("{name} must be a nonzero finite vector");
    }
    Ok(v / n)
}

impl ScanConfig {
    /// Merges flags over the optional config file over defaults and validates.
    pub fn resolve(args: &ScanArgs, default_tol: f64) -> Result<Self> {
        let file = match &args.config {
            Some(path) => read_file_config(path)?,
            None => FileConfig::default(),
        };
        let file_grid = |s: &Option<String>, name: &str| -> Result<Option<Grid>> {
            s.as_deref()
                .map(|g| g.parse::<Grid>().map_err(|e| anyhow::anyhow!("config {name}: {e}")))
                .transpose()
        };
        let file_kind = file
            .kind
            .as_deref()
            .map(|k| k.parse::<OperatorKind>())
            .transpose()
            .map_err(|e| anyhow::anyhow!("config kind: {e}"))?;
        let env_seed = match std::env::var("RELSPIN_SEED") {
            Ok(s) => Some(
                s.trim()
                    .parse::<u64>()
                    .context("RELSPIN_SEED must be an unsigned integer")?,
            ),
            Err(_) => None,
        };

        let mass = args.mass.or(file.mass).unwrap_or(1.0);
        if !(mass.is_finite() && mass > 0.0) {
            bail!("mass must be positive, got {mass}");
        }
        let pmag = args.pmag.or(file_grid(&file.pmag, "pmag")?).unwrap_or(Grid {
            start: 0.0,
            stop: 1.0,
            steps: 11,
        });
        pmag.validate("pmag")?;
        if pmag.start < 0.0 {
            bail!("pmag grid must be non-negative");
        }
        let log_grid = args.log_grid || file.log_grid.unwrap_or(false);
        if log_grid && pmag.start <= 0.0 {
            bail!("log grid needs a positive start");
        }
        let theta = args.theta.or(file_grid(&file.theta, "theta")?).unwrap_or(Grid {
            start: 0.0,
            stop: std::f64::consts::PI,
            steps: 9,
        });
        theta.validate("theta")?;
        let tol = args.tol.or(file.tol).unwrap_or(default_tol);
        if !(tol.is_finite() && tol > 0.0) {
            bail!("tolerance must be positive");
        }
        let axis = unit(args.axis.or(file.axis).unwrap_or([0.0, 0.0, 1.0]), "axis")?;
        let momentum = Vector3::from(args.p.or(file.p).unwrap_or([0.0; 3]));
        if !momentum.iter().all(|x| x.is_finite()) {
            bail!("momentum must be finite");
        }
        let restarts = args.restarts.or(file.restarts).unwrap_or(32);
        let max_evals = args.max_evals.or(file.max_evals).unwrap_or(20_000);
        if restarts == 0 || max_evals == 0 {
            bail!("restarts and max-evals must be at least 1");
        }
        Ok(Self {
            mass,
            pmag,
            momentum,
            dir: unit(args.dir.or(file.dir).unwrap_or([0.0, 0.0, 1.0]), "dir")?,
            kind: args.kind.or(file_kind).unwrap_or(OperatorKind::NormalizedPL),
            axis,
            axis_b: match args.axis_b.or(file.axis_b) {
                Some(b) => unit(b, "axis-b")?,
                None => axis,
            },
            theta,
            seed: args.seed.or(file.seed).or(env_seed).unwrap_or(DEFAULT_SEED),
            shots: args.shots.or(file.shots).unwrap_or(100_000),
            out: args.out.clone().or(file.out),
            format: args.format.or(file.format).unwrap_or(Format::Csv),
            tol,
            log_grid,
            restarts,
            max_evals,
            from: args.from.clone().or(file.from),
        })
    }

    pub fn momenta(&self) -> Vec<f64> {
        self.pmag.points(self.log_grid)
    }
}
