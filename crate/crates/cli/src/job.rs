use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde::Serialize;
use sobolev_trace::extension::support_radius;
use sobolev_trace::{Backend, Exponent, ExtensionConfig, GridSpec};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Every applicable trace functional, as a JSON report.
    Check,
    /// Spline extension as JSON plus sampled derivatives as CSV.
    Extend,
    /// Sharp maximal profiles as CSV plus the criterion value as JSON.
    Maximal,
    /// Functional and norm ratios over a seeded random corpus.
    Compare,
}

/// One invocation of the tool.
#[derive(Debug, Clone, Parser, Serialize)]
#[command(name = "sobolev-trace", version, about = "Trace functionals and spline extensions on finite point sets")]
pub struct JobSpec {
    /// JSON `{"points": [...], "values": [...]}` or two-column CSV.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub command: Command,
    /// Sobolev smoothness order, at least 1.
    #[arg(long)]
    pub m: usize,
    /// Exponent in (1, inf]; pass `inf` for the sup norm.
    #[arg(long, default_value = "2")]
    pub p: Exponent,
    #[arg(long, default_value = "hermite")]
    pub backend: Backend,
    /// Half-width of the extension window; defaults to 3(m + 2).
    #[arg(long)]
    pub window_pad: Option<f64>,
    #[arg(long)]
    pub out: PathBuf,
    /// Seed of the random corpus used by `compare`.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Cell width for profiles, quadrature and extension samples.
    #[arg(long)]
    pub grid_h: Option<f64>,
    /// Quadrature tolerance.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Number of corpus instances for `compare`.
    #[arg(long, default_value_t = 100)]
    pub count: usize,
}

impl JobSpec {
    pub fn new(command: Command, m: usize, p: Exponent, out: impl Into<PathBuf>) -> Self {
        Self {
            input: None,
            command,
            m,
            p,
            backend: Backend::Hermite,
            window_pad: None,
            out: out.into(),
            seed: 0,
            grid_h: None,
            tol: 1e-10,
            count: 100,
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.m == 0 {
            return Err(CliError::Input("--m must be at least 1".into()));
        }
        self.p.check_trace_range()?;
        if !(self.tol > 0.0) {
            return Err(CliError::Input("--tol must be positive".into()));
        }
        if let Some(h) = self.grid_h {
            if !(h > 0.0) || !h.is_finite() {
                return Err(CliError::Input("--grid-h must be positive".into()));
            }
        }
        if self.command != Command::Compare && self.input.is_none() {
            return Err(CliError::Input(format!("--input is required for {:?}", self.command)));
        }
        self.extension_config().validate()?;
        Ok(())
    }

    pub fn input_path(&self) -> Result<&Path, CliError> {
        self.input
            .as_deref()
            .ok_or_else(|| CliError::Input("--input is required".into()))
    }

    pub fn extension_config(&self) -> ExtensionConfig {
        let mut cfg = ExtensionConfig::new(self.m, self.p)
            .with_backend(self.backend)
            .with_window_pad(self.window_pad.unwrap_or_else(|| support_radius(self.m)));
        cfg.quad_tol = self.tol;
        cfg
    }

    pub fn grid(&self) -> GridSpec {
        self.grid_h.map_or_else(GridSpec::default, GridSpec::with_h)
    }
}
