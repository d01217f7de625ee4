use std::path::PathBuf;

use serde::Serialize;
use sobolev_trace::trace_functionals::ENUMERATION_CAP;
use sobolev_trace::{
    homogeneous_sequence_functional, homogeneous_variational_functional, sequence_functional,
    small_set_functional, variational_functional, wmf_functional, Exponent, FunctionalReport,
    SampledFunction,
};

use super::{to_json, write};
use crate::{input, CliError, JobSpec};

const CONVENTIONS: [&str; 4] = [
    "points past the last one sit at +inf, so min{1, x[i+m] - x[i]} = 1 there",
    "sequence functionals use consecutive windows of orders k <= min(m, #E - 1)",
    "variational functionals take the supremum over all increasing subsequences of at least m + 1 points, or over all subsets of at most m + 1 points when p = inf",
    "sets with #E <= m are represented by the largest consecutive divided difference of any order",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub points: usize,
    pub m: usize,
    pub p: Exponent,
    pub effective_order: usize,
    /// `#E <= m`: the small-set representative is the trace functional.
    pub small_set_route: bool,
    pub conventions: Vec<String>,
    pub sequence: FunctionalReport,
    pub variational: Option<FunctionalReport>,
    pub homogeneous_sequence: Option<FunctionalReport>,
    pub homogeneous_variational: Option<FunctionalReport>,
    pub small_set: Option<FunctionalReport>,
    pub sharp_maximal: Option<FunctionalReport>,
    /// Functionals that were skipped and why.
    pub skipped: Vec<String>,
}

pub fn check_report(s: &SampledFunction, job: &JobSpec) -> Result<CheckReport, CliError> {
    let (m, p) = (job.m, job.p);
    let small = s.len() <= m;
    let enumerable = s.len() <= ENUMERATION_CAP;
    let mut skipped = Vec::new();
    if !enumerable {
        skipped.push(format!(
            "variational and sharp maximal functionals need #E <= {ENUMERATION_CAP}"
        ));
    }
    let sequence = sequence_functional(s, m, p)?;
    let variational = (enumerable && (!small || p.is_infinite()))
        .then(|| variational_functional(s, m, p))
        .transpose()?;
    let homogeneous_sequence = (!small).then(|| homogeneous_sequence_functional(s, m, p)).transpose()?;
    let homogeneous_variational = (!small && enumerable)
        .then(|| homogeneous_variational_functional(s, m, p))
        .transpose()?;
    if small {
        skipped.push("homogeneous functionals need #E >= m + 1".into());
    }
    let small_set = small.then(|| small_set_functional(s, m, p)).transpose()?;
    let sharp_maximal = (enumerable && !p.is_infinite())
        .then(|| wmf_functional(s, m, p, job.grid()))
        .transpose()?;
    if p.is_infinite() {
        skipped.push("the sharp maximal criterion is defined for finite p only".into());
    }
    Ok(CheckReport {
        points: s.len(),
        m,
        p,
        effective_order: sequence.effective_order,
        small_set_route: small,
        conventions: CONVENTIONS.iter().map(|c| c.to_string()).collect(),
        sequence,
        variational,
        homogeneous_sequence,
        homogeneous_variational,
        small_set,
        sharp_maximal,
        skipped,
    })
}

pub(super) fn run(job: &JobSpec) -> Result<Vec<PathBuf>, CliError> {
    let s = input::load(job.input_path()?)?;
    let report = check_report(&s, job)?;
    write(&job.out, &to_json(&report))?;
    Ok(vec![job.out.clone()])
}
