use std::path::PathBuf;

use serde::Serialize;
use sobolev_trace::extension::verify_necessity;
use sobolev_trace::{extend, sobolev_norm, ExtensionConfig, NecessityReport, NormReport, PiecewisePolynomial, SampledFunction};

use super::{sidecar, to_json, write};
use crate::table::Table;
use crate::{input, CliError, JobSpec};

/// Samples per unit length when `--grid-h` is not given.
const DEFAULT_SAMPLES_PER_UNIT: f64 = 50.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtendReport {
    pub config: ExtensionConfig,
    pub spline: PiecewisePolynomial,
    pub norms: NormReport,
    pub necessity: NecessityReport,
}

/// The extension report and the CSV of `x, F, F', ..., F^(m)` on a uniform
/// grid over the extension window.
pub fn extension_outputs(s: &SampledFunction, job: &JobSpec) -> Result<(ExtendReport, String), CliError> {
    let config = job.extension_config();
    let spline = extend(s, &config)?;
    let norms = sobolev_norm(&spline, job.m, job.p, job.tol)?;
    let necessity = verify_necessity(s, &spline, job.m, job.p, job.tol)?;

    let lo = s.min() - config.window_pad;
    let hi = s.max() + config.window_pad;
    let h = job.grid_h.unwrap_or(1.0 / DEFAULT_SAMPLES_PER_UNIT);
    let cells = ((hi - lo) / h).ceil().max(1.0) as usize;
    let mut header = vec!["x".to_string(), "F".to_string()];
    header.extend((1..=job.m).map(|k| format!("F{k}")));
    let mut table = Table::new(&header);
    let mut row = Vec::with_capacity(job.m + 2);
    for i in 0..=cells {
        let x = lo + (hi - lo) * i as f64 / cells as f64;
        row.clear();
        row.push(x);
        row.extend((0..=job.m).map(|k| spline.evaluate_derivative(x, k)));
        table.numbers(&row);
    }
    Ok((ExtendReport { config, spline, norms, necessity }, table.finish()))
}

pub(super) fn run(job: &JobSpec) -> Result<Vec<PathBuf>, CliError> {
    let s = input::load(job.input_path()?)?;
    let (report, samples) = extension_outputs(&s, job)?;
    let samples_path = sidecar(&job.out, "csv");
    write(&job.out, &to_json(&report))?;
    write(&samples_path, &samples)?;
    Ok(vec![job.out.clone(), samples_path])
}
