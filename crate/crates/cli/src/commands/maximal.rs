use std::path::PathBuf;

use serde::Serialize;
use sobolev_trace::{sharp_profile, wmf_functional, Exponent, FunctionalReport, SampledFunction, TraceError};

use super::{sidecar, to_json, write};
use crate::table::Table;
use crate::{input, CliError, JobSpec};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MaximalSummary {
    pub grid_h: f64,
    pub support_bounds: (f64, f64),
    pub wmf: FunctionalReport,
}

/// CSV columns `x, f#0, ..., f#m` and the criterion value.
pub fn maximal_outputs(s: &SampledFunction, job: &JobSpec) -> Result<(MaximalSummary, String), CliError> {
    if job.p == Exponent::Infinite {
        return Err(TraceError::Unsupported("maximal needs a finite p".into()).into());
    }
    let grid = job.grid();
    let profiles = (0..=job.m)
        .map(|k| sharp_profile(s, job.m, k, grid))
        .collect::<Result<Vec<_>, _>>()?;
    let wmf = wmf_functional(s, job.m, job.p, grid)?;
    let xs = &profiles[0].grid;
    debug_assert!(profiles.iter().all(|p| &p.grid == xs));

    let mut header = vec!["x".to_string()];
    header.extend((0..=job.m).map(|k| format!("sharp{k}")));
    let mut table = Table::new(&header);
    let mut row = Vec::with_capacity(job.m + 2);
    for (i, &x) in xs.iter().enumerate() {
        row.clear();
        row.push(x);
        row.extend(profiles.iter().map(|p| p.values[i]));
        table.numbers(&row);
    }
    let summary = MaximalSummary {
        grid_h: grid.resolve(s)?,
        support_bounds: profiles[0].support_bounds,
        wmf,
    };
    Ok((summary, table.finish()))
}

pub(super) fn run(job: &JobSpec) -> Result<Vec<PathBuf>, CliError> {
    let s = input::load(job.input_path()?)?;
    let (summary, profiles) = maximal_outputs(&s, job)?;
    let summary_path = sidecar(&job.out, "json");
    write(&job.out, &profiles)?;
    write(&summary_path, &to_json(&summary))?;
    Ok(vec![job.out.clone(), summary_path])
}
