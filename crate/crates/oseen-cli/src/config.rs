//! Run configuration: defaults, `key = value` file parsing, environment
//! override, and command-line flags, merged in ascending precedence
//! (defaults < `OSEEN_OUTPUT_ROOT` < config file < flags).

use std::path::{Path, PathBuf};

use serde::Serialize;

use oseen_core::grid::{make_log_grid, LogGrid};
use oseen_core::profile::{DEFAULT_EPS0, DEFAULT_EPS1};

use crate::CliError;

/// Environment variable that relocates the artifact root.
pub const OUTPUT_ROOT_VAR: &str = "OSEEN_OUTPUT_ROOT";

/// Validated parameters shared by every subcommand. A snapshot of this
/// struct is embedded in each CSV header and run manifest, so two artifacts
/// are comparable exactly when their snapshots agree.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    /// Left endpoint of the log-variable window.
    pub t_min: f64,
    /// Right endpoint of the log-variable window.
    pub t_max: f64,
    /// Grid nodes (boundary included).
    pub n: usize,
    /// Outer case threshold `ε₀`.
    pub eps0: f64,
    /// Inner case threshold `ε₁`.
    pub eps1: f64,
    /// Whether the velocity-coupling (nonlocal) term is assembled.
    pub include_nonlocal: bool,
    /// Directory all artifacts and manifests are written into.
    pub output_dir: PathBuf,
    /// Relative agreement required of the half-line and log-line routes.
    pub dual_route_tol: f64,
    /// Half-width of the acceptance band around the target exponent `1/3`.
    pub exponent_band: f64,
    /// Seed of every randomized sampling (the verification battery's
    /// metric check is the only consumer).
    pub seed: u64,
    /// Whether plot artifacts (SVG) are emitted alongside the CSV/JSON.
    pub emit_svg: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            t_min: -12.0,
            t_max: 3.0,
            n: 600,
            eps0: DEFAULT_EPS0,
            eps1: DEFAULT_EPS1,
            include_nonlocal: true,
            output_dir: PathBuf::from("runs"),
            dual_route_tol: 1e-3,
            exponent_band: 0.08,
            seed: 2026,
            emit_svg: true,
        }
    }
}

impl RunConfig {
    /// Build the effective configuration: defaults, then the environment
    /// output root, then `file` (if given), then the common flags.
    pub fn resolve(file: Option<&Path>, flags: &CommonOpts) -> Result<RunConfig, CliError> {
        let mut cfg = RunConfig::default();
        if let Ok(root) = std::env::var(OUTPUT_ROOT_VAR) {
            if !root.is_empty() {
                cfg.output_dir = PathBuf::from(root);
            }
        }
        if let Some(path) = file {
            cfg.apply_file(path)?;
        }
        flags.apply(&mut cfg);
        cfg.validate()?;
        Ok(cfg)
    }

    /// Merge a `key = value` file ('#' starts a comment; blank lines
    /// ignored; unknown keys are usage errors).
    fn apply_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::Usage(format!("cannot read config file {}: {e}", path.display()))
        })?;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Usage(format!(
                    "{}:{}: expected `key = value`, got {raw:?}",
                    path.display(),
                    lineno + 1
                ))
            })?;
            let (key, value) = (key.trim(), value.trim());
            let bad = |e: String| {
                CliError::Usage(format!("{}:{}: {key}: {e}", path.display(), lineno + 1))
            };
            match key {
                "t_min" => self.t_min = parse(value).map_err(bad)?,
                "t_max" => self.t_max = parse(value).map_err(bad)?,
                "n" => self.n = parse(value).map_err(bad)?,
                "eps0" => self.eps0 = parse(value).map_err(bad)?,
                "eps1" => self.eps1 = parse(value).map_err(bad)?,
                "include_nonlocal" => self.include_nonlocal = parse(value).map_err(bad)?,
                "output_dir" => self.output_dir = PathBuf::from(value),
                "dual_route_tol" => self.dual_route_tol = parse(value).map_err(bad)?,
                "exponent_band" => self.exponent_band = parse(value).map_err(bad)?,
                "seed" => self.seed = parse(value).map_err(bad)?,
                "emit_svg" => self.emit_svg = parse(value).map_err(bad)?,
                other => {
                    return Err(CliError::Usage(format!(
                        "{}:{}: unknown configuration key {other:?}",
                        path.display(),
                        lineno + 1
                    )))
                }
            }
        }
        Ok(())
    }

    fn validate(&self) -> Result<(), CliError> {
        let usage = |m: String| Err(CliError::Usage(m));
        if !(self.t_min.is_finite() && self.t_max.is_finite() && self.t_min < self.t_max) {
            return usage(format!(
                "grid window must be finite with t_min < t_max, got [{}, {}]",
                self.t_min, self.t_max
            ));
        }
        if self.n < 16 {
            return usage(format!("grid needs at least 16 nodes, got {}", self.n));
        }
        for (name, v) in [("eps0", self.eps0), ("eps1", self.eps1)] {
            if !(v > 0.0 && v < 1.0) {
                return usage(format!("{name} must lie in (0,1), got {v}"));
            }
        }
        for (name, v) in [
            ("dual_route_tol", self.dual_route_tol),
            ("exponent_band", self.exponent_band),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return usage(format!("{name} must be positive, got {v}"));
            }
        }
        Ok(())
    }

    /// The log grid this configuration describes.
    pub fn grid(&self) -> Result<LogGrid, CliError> {
        Ok(make_log_grid(self.t_min, self.t_max, self.n)?)
    }

    /// `#`-prefixed metadata lines embedded at the top of every CSV
    /// artifact (configuration only — no timestamps, so identical runs
    /// produce identical bytes).
    pub fn header_lines(&self) -> Vec<String> {
        vec![
            format!(
                "grid: t in [{}, {}], n = {}",
                self.t_min, self.t_max, self.n
            ),
            format!("eps0 = {}, eps1 = {}", self.eps0, self.eps1),
            format!(
                "nonlocal = {}, seed = {}",
                if self.include_nonlocal { "on" } else { "off" },
                self.seed
            ),
        ]
    }
}

fn parse<T: std::str::FromStr>(value: &str) -> Result<T, String>
where
    T::Err: std::fmt::Display,
{
    value
        .parse()
        .map_err(|e| format!("cannot parse {value:?}: {e}"))
}

/// Flags shared by every subcommand; `None` means "not given" so the
/// file/default value survives.
#[derive(Clone, Debug, Default, clap::Args)]
pub struct CommonOpts {
    /// Configuration file (`key = value` lines, `#` comments).
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Left endpoint of the log-variable window.
    #[arg(long, value_name = "T")]
    pub t_min: Option<f64>,
    /// Right endpoint of the log-variable window.
    #[arg(long, value_name = "T")]
    pub t_max: Option<f64>,
    /// Number of grid nodes.
    #[arg(long, value_name = "N")]
    pub grid_n: Option<usize>,
    /// Outer case threshold ε₀.
    #[arg(long, value_name = "X")]
    pub eps0: Option<f64>,
    /// Inner case threshold ε₁.
    #[arg(long, value_name = "X")]
    pub eps1: Option<f64>,
    /// Drop the velocity-coupling term (the model-operator variant).
    #[arg(long)]
    pub no_nonlocal: bool,
    /// Directory artifacts are written into.
    #[arg(long, value_name = "DIR")]
    pub output_dir: Option<PathBuf>,
    /// Seed for randomized sampling.
    #[arg(long, value_name = "SEED")]
    pub seed: Option<u64>,
    /// Skip SVG plot emission.
    #[arg(long)]
    pub no_svg: bool,
    /// Reuse completed cells recorded in an earlier manifest.
    #[arg(long)]
    pub resume: bool,
}

impl CommonOpts {
    fn apply(&self, cfg: &mut RunConfig) {
        if let Some(v) = self.t_min {
            cfg.t_min = v;
        }
        if let Some(v) = self.t_max {
            cfg.t_max = v;
        }
        if let Some(v) = self.grid_n {
            cfg.n = v;
        }
        if let Some(v) = self.eps0 {
            cfg.eps0 = v;
        }
        if let Some(v) = self.eps1 {
            cfg.eps1 = v;
        }
        if self.no_nonlocal {
            cfg.include_nonlocal = false;
        }
        if let Some(v) = &self.output_dir {
            cfg.output_dir = v.clone();
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if self.no_svg {
            cfg.emit_svg = false;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write_tmp(content: &str) -> tempfile::NamedTempFile {
        use std::io::Write;
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn precedence_is_flags_over_file_over_defaults() {
        let file = write_tmp("n = 300\nt_max = 4.0  # comment\nseed = 7\n");
        let flags = CommonOpts {
            grid_n: Some(200),
            ..CommonOpts::default()
        };
        let cfg = RunConfig::resolve(Some(file.path()), &flags).unwrap();
        assert_eq!(cfg.n, 200); // flag wins
        assert_eq!(cfg.t_max, 4.0); // file wins over default
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.t_min, -12.0); // default survives
    }

    #[test]
    fn unknown_keys_and_bad_values_are_usage_errors() {
        for content in ["wat = 3\n", "n = many\n", "n 300\n"] {
            let file = write_tmp(content);
            let err = RunConfig::resolve(Some(file.path()), &CommonOpts::default()).unwrap_err();
            assert!(matches!(err, CliError::Usage(_)), "content {content:?}");
        }
    }

    #[test]
    fn validation_rejects_degenerate_windows() {
        let flags = CommonOpts {
            t_min: Some(5.0),
            t_max: Some(3.0),
            ..CommonOpts::default()
        };
        assert!(matches!(
            RunConfig::resolve(None, &flags).unwrap_err(),
            CliError::Usage(_)
        ));
    }
}
