use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use sobolev_trace::corpus::{CorpusSpec, Instance};
use sobolev_trace::extension::verify_necessity;
use sobolev_trace::trace_functionals::ENUMERATION_CAP;
use sobolev_trace::{
    extend, homogeneous_sequence_functional, sequence_functional, sobolev_norm, variational_functional,
    wmf_functional, Backend, Execution, Exponent, ExtensionConfig, GridSpec,
};

use super::{sidecar, write};
use crate::table::{number, Table};
use crate::{CliError, JobSpec};

/// Cell width of the sharp maximal quadrature when `--grid-h` is not given.
/// Between forced nodes the profiles are smooth, so this is ample.
pub const DEFAULT_COMPARE_GRID_H: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompareSettings {
    pub grid_h: f64,
    pub quad_tol: f64,
    pub exec: Execution,
}

impl Default for CompareSettings {
    fn default() -> Self {
        Self { grid_h: DEFAULT_COMPARE_GRID_H, quad_tol: 1e-10, exec: Execution::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareRow {
    pub index: usize,
    pub m: usize,
    pub p: Exponent,
    pub points: usize,
    pub scale: f64,
    pub sequence: f64,
    pub variational: Option<f64>,
    pub homogeneous: Option<f64>,
    pub w_hermite: f64,
    pub w_natural2: f64,
    pub wmf: Option<f64>,
    pub necessity_hermite: bool,
    pub necessity_natural2: bool,
}

fn ratio(num: Option<f64>, den: f64) -> Option<f64> {
    num.map(|n| n / den)
}

impl CompareRow {
    pub const RATIOS: [&'static str; 4] =
        ["sequence_over_variational", "hermite_over_sequence", "natural2_over_sequence", "wmf_over_sequence"];

    /// Ratios in the order of [`CompareRow::RATIOS`]; `None` when a
    /// functional was not computed.
    pub fn ratios(&self) -> [Option<f64>; 4] {
        [
            self.variational.map(|v| self.sequence / v),
            ratio(Some(self.w_hermite), self.sequence),
            ratio(Some(self.w_natural2), self.sequence),
            ratio(self.wmf, self.sequence),
        ]
    }
}

fn compare_one(index: usize, inst: &Instance, settings: &CompareSettings) -> Result<CompareRow, CliError> {
    let (s, m, p) = (&inst.function, inst.m, inst.p);
    let small = s.len() <= m;
    let enumerable = s.len() <= ENUMERATION_CAP;
    let sequence = sequence_functional(s, m, p)?.value;
    let variational = (enumerable && (!small || p.is_infinite()))
        .then(|| variational_functional(s, m, p).map(|r| r.value))
        .transpose()?;
    let homogeneous = (!small)
        .then(|| homogeneous_sequence_functional(s, m, p).map(|r| r.value))
        .transpose()?;
    let wmf = (enumerable && !p.is_infinite())
        .then(|| wmf_functional(s, m, p, GridSpec::with_h(settings.grid_h)).map(|r| r.value))
        .transpose()?;
    let mut norms = [0.0; 2];
    let mut passes = [false; 2];
    for (j, backend) in [Backend::Hermite, Backend::Natural2].into_iter().enumerate() {
        let mut cfg = ExtensionConfig::new(m, p).with_backend(backend);
        cfg.quad_tol = settings.quad_tol;
        let f = extend(s, &cfg)?;
        norms[j] = sobolev_norm(&f, m, p, settings.quad_tol)?.w_norm;
        passes[j] = verify_necessity(s, &f, m, p, settings.quad_tol)?.pass;
    }
    Ok(CompareRow {
        index,
        m,
        p,
        points: s.len(),
        scale: inst.scale,
        sequence,
        variational,
        homogeneous,
        w_hermite: norms[0],
        w_natural2: norms[1],
        wmf,
        necessity_hermite: passes[0],
        necessity_natural2: passes[1],
    })
}

/// Every functional and both extension norms for each instance.
pub fn compare_rows(instances: &[Instance], settings: &CompareSettings) -> Result<Vec<CompareRow>, CliError> {
    let indexed: Vec<(usize, &Instance)> = instances.iter().enumerate().collect();
    settings
        .exec
        .map_slice(&indexed, |&(i, inst)| compare_one(i, inst, settings))
        .into_iter()
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioRange {
    pub name: String,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareSummary {
    pub ranges: Vec<RatioRange>,
    pub necessity_failures: usize,
}

pub fn summarize(rows: &[CompareRow]) -> CompareSummary {
    let ranges = CompareRow::RATIOS
        .iter()
        .enumerate()
        .map(|(j, name)| {
            let values: Vec<f64> = rows.iter().filter_map(|r| r.ratios()[j]).collect();
            RatioRange {
                name: name.to_string(),
                min: values.iter().copied().fold(f64::INFINITY, f64::min),
                max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                count: values.len(),
            }
        })
        .collect();
    let necessity_failures = rows
        .iter()
        .map(|r| usize::from(!r.necessity_hermite) + usize::from(!r.necessity_natural2))
        .sum();
    CompareSummary { ranges, necessity_failures }
}

fn optional(x: Option<f64>) -> String {
    x.map(number).unwrap_or_default()
}

fn verdict(pass: bool) -> String {
    if pass { "pass" } else { "fail" }.to_string()
}

pub(crate) fn rows_csv(rows: &[CompareRow]) -> String {
    let mut header: Vec<&str> = vec![
        "index", "m", "p", "points", "scale", "sequence", "variational", "homogeneous", "w_hermite",
        "w_natural2", "wmf",
    ];
    header.extend(CompareRow::RATIOS);
    header.extend(["necessity_hermite", "necessity_natural2"]);
    let mut table = Table::new(&header);
    for r in rows {
        let mut cells = vec![
            r.index.to_string(),
            r.m.to_string(),
            r.p.to_string(),
            r.points.to_string(),
            number(r.scale),
            number(r.sequence),
            optional(r.variational),
            optional(r.homogeneous),
            number(r.w_hermite),
            number(r.w_natural2),
            optional(r.wmf),
        ];
        cells.extend(r.ratios().into_iter().map(optional));
        cells.push(verdict(r.necessity_hermite));
        cells.push(verdict(r.necessity_natural2));
        table.row(cells);
    }
    table.finish()
}

pub(crate) fn summary_csv(summary: &CompareSummary) -> String {
    let mut table = Table::new(&["ratio", "min", "max", "count"]);
    for r in &summary.ranges {
        table.row([r.name.clone(), number(r.min), number(r.max), r.count.to_string()]);
    }
    table.row([
        "necessity_failures".to_string(),
        String::new(),
        String::new(),
        summary.necessity_failures.to_string(),
    ]);
    table.finish()
}

pub(super) fn run(job: &JobSpec) -> Result<Vec<PathBuf>, CliError> {
    let spec = CorpusSpec {
        m_values: vec![job.m],
        p_values: vec![job.p],
        ..CorpusSpec::default()
    }
    .with_count(job.count)
    .with_seed(job.seed);
    let instances = spec.generate()?;
    let settings = CompareSettings {
        grid_h: job.grid_h.unwrap_or(DEFAULT_COMPARE_GRID_H),
        quad_tol: job.tol,
        ..CompareSettings::default()
    };
    let rows = compare_rows(&instances, &settings)?;
    let summary_path = sidecar(&job.out, "summary.csv");
    write(&job.out, &rows_csv(&rows))?;
    write(&summary_path, &summary_csv(&summarize(&rows)))?;
    Ok(vec![job.out.clone(), summary_path])
}
