//! Trace-norm functionals of a sampled function.
//!
//! The sequence functionals use consecutive windows of the point set only.
//! The variational ones take the supremum over every increasing subsequence
//! by exhaustive enumeration and are therefore capped at
//! [`ENUMERATION_CAP`] points.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::divided_differences::{divdiff_in_place, SampledFunction};
use crate::exec::Execution;
use crate::{Result, TraceError};

/// Largest point set accepted by the enumerating functionals.
pub const ENUMERATION_CAP: usize = 20;

/// The integrability exponent `p`: a finite real or `∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinite,
}

impl Exponent {
    pub fn is_infinite(self) -> bool {
        matches!(self, Exponent::Infinite)
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            Exponent::Finite(p) => Some(p),
            Exponent::Infinite => None,
        }
    }

    /// Accepts `p ∈ (1, ∞]`.
    pub fn check_trace_range(self) -> Result<Self> {
        match self {
            Exponent::Finite(p) if !(p > 1.0) || !p.is_finite() => Err(
                TraceError::InvalidParameter(format!("p must lie in (1, ∞], got {p}")),
            ),
            _ => Ok(self),
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Exponent {
    type Err = TraceError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "Inf" | "INF" | "infinity" | "∞" => Ok(Exponent::Infinite),
            other => other
                .parse::<f64>()
                .ok()
                .filter(|p| p.is_finite())
                .map(Exponent::Finite)
                .ok_or_else(|| TraceError::InvalidParameter(format!("cannot parse p from {s:?}"))),
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Exponent::Finite(p) => serializer.serialize_f64(*p),
            Exponent::Infinite => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(f64),
            Text(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Number(p) => Ok(Exponent::Finite(p)),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// `|x|^p` as `exp(p ln|x|)`, with `0^p = 0`.
pub(crate) fn abs_pow(x: f64, p: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        (p * x.abs().ln()).exp()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FunctionalKind {
    Sequence,
    Variational,
    HomogeneousSequence,
    HomogeneousVariational,
    SharpMaximal,
    SmallSetMax,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionalReport {
    pub m: usize,
    pub p: Exponent,
    pub value: f64,
    pub kind: FunctionalKind,
    /// `min(m, #E - 1)`.
    pub effective_order: usize,
}

impl FunctionalReport {
    pub(crate) fn new(kind: FunctionalKind, s: &SampledFunction, m: usize, p: Exponent, value: f64) -> Self {
        Self {
            m,
            p,
            value,
            kind,
            effective_order: effective_order(s, m),
        }
    }
}

pub fn effective_order(s: &SampledFunction, m: usize) -> usize {
    m.min(s.len() - 1)
}

pub(crate) fn check_m(m: usize) -> Result<()> {
    if m == 0 {
        return Err(TraceError::InvalidParameter("m must be at least 1".into()));
    }
    Ok(())
}

fn check_cap(s: &SampledFunction) -> Result<()> {
    if s.len() > ENUMERATION_CAP {
        return Err(TraceError::SizeCap {
            size: s.len(),
            cap: ENUMERATION_CAP,
        });
    }
    Ok(())
}

fn check_enough_points(s: &SampledFunction, m: usize, what: &str) -> Result<()> {
    if s.len() <= m {
        return Err(TraceError::Hypothesis(format!(
            "{what} needs at least m + 1 = {} points, have {}; use the small-set functional",
            m + 1,
            s.len()
        )));
    }
    Ok(())
}

/// `Σ_{k=0}^{M} Σ_i min{1, x_{i+m} - x_i} |Δ^k f[x_i..x_{i+k}]|^p` with
/// `M = min(m, len - 1)` and `x_j = +∞` past the end.
fn sequence_power_sum(x: &[f64], values: &[f64], m: usize, p: f64) -> f64 {
    let len = x.len();
    let top = m.min(len - 1);
    let mut row = values.to_vec();
    let mut sum = 0.0;
    for k in 0..=top {
        if k > 0 {
            for i in 0..(len - k) {
                row[i] = (row[i + 1] - row[i]) / (x[i + k] - x[i]);
            }
        }
        for (i, &d) in row[..len - k].iter().enumerate() {
            let w = if i + m < len { (x[i + m] - x[i]).min(1.0) } else { 1.0 };
            sum += w * abs_pow(d, p);
        }
    }
    sum
}

/// `max_{k <= M, i} |Δ^k f[x_i..x_{i+k}]|`.
fn sequence_sup(x: &[f64], values: &[f64], top: usize) -> f64 {
    let len = x.len();
    let mut row = values.to_vec();
    let mut best = row.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    for k in 1..=top {
        for i in 0..(len - k) {
            row[i] = (row[i + 1] - row[i]) / (x[i + k] - x[i]);
            best = best.max(row[i].abs());
        }
    }
    best
}

/// `Σ_i (x_{i+m} - x_i) |Δ^m f[x_i..x_{i+m}]|^p`; needs `len > m`.
fn homogeneous_power_sum(x: &[f64], values: &[f64], m: usize, p: f64) -> f64 {
    let len = x.len();
    let mut row = values.to_vec();
    for k in 1..=m {
        for i in 0..(len - k) {
            row[i] = (row[i + 1] - row[i]) / (x[i + k] - x[i]);
        }
    }
    (0..=(len - 1 - m))
        .map(|i| (x[i + m] - x[i]) * abs_pow(row[i], p))
        .sum()
}

fn top_order_sup(x: &[f64], values: &[f64], m: usize) -> f64 {
    let len = x.len();
    let mut row = values.to_vec();
    for k in 1..=m {
        for i in 0..(len - k) {
            row[i] = (row[i + 1] - row[i]) / (x[i + k] - x[i]);
        }
    }
    row[..len - m].iter().fold(0.0f64, |a, v| a.max(v.abs()))
}

/// The sequence functional over consecutive windows of `E` itself.
pub fn sequence_functional(s: &SampledFunction, m: usize, p: Exponent) -> Result<FunctionalReport> {
    check_m(m)?;
    let p = p.check_trace_range()?;
    let value = match p {
        Exponent::Finite(p) => abs_pow(sequence_power_sum(s.points(), s.values(), m, p), 1.0 / p),
        Exponent::Infinite => sequence_sup(s.points(), s.values(), effective_order(s, m)),
    };
    Ok(FunctionalReport::new(FunctionalKind::Sequence, s, m, p, value))
}

/// Copies the masked subset into the front of the scratch buffers.
fn gather(mask: u32, s: &SampledFunction, xs: &mut [f64], vs: &mut [f64]) -> usize {
    let mut len = 0;
    let mut bits = mask;
    while bits != 0 {
        let i = bits.trailing_zeros() as usize;
        xs[len] = s.points()[i];
        vs[len] = s.values()[i];
        len += 1;
        bits &= bits - 1;
    }
    len
}

fn enumerate_max<F>(s: &SampledFunction, exec: Execution, eval: F) -> f64
where
    F: Fn(&[f64], &[f64]) -> Option<f64> + Sync + Send,
{
    let n = s.len();
    exec.max_range(1usize << n, 0.0, |mask| {
        let mut xs = [0.0; ENUMERATION_CAP];
        let mut vs = [0.0; ENUMERATION_CAP];
        let len = gather(mask as u32, s, &mut xs, &mut vs);
        if len == 0 {
            return 0.0;
        }
        eval(&xs[..len], &vs[..len]).unwrap_or(0.0)
    })
}

/// Supremum of the sequence functional over every increasing subsequence
/// with at least `m + 1` points (finite `p`), or of `|Δ^k f[S]|` over every
/// `(k+1)`-subset with `k <= m` (`p = ∞`).
pub fn variational_functional(s: &SampledFunction, m: usize, p: Exponent) -> Result<FunctionalReport> {
    variational_functional_in(s, m, p, Execution::default())
}

pub fn variational_functional_in(
    s: &SampledFunction,
    m: usize,
    p: Exponent,
    exec: Execution,
) -> Result<FunctionalReport> {
    check_m(m)?;
    let p = p.check_trace_range()?;
    check_cap(s)?;
    let value = match p {
        Exponent::Finite(q) => {
            check_enough_points(s, m, "the variational functional")?;
            enumerate_max(s, exec, |x, v| {
                (x.len() > m).then(|| abs_pow(sequence_power_sum(x, v, m, q), 1.0 / q))
            })
        }
        Exponent::Infinite => enumerate_max(s, exec, |x, v| {
            (x.len() <= m + 1).then(|| {
                let mut scratch = v.to_vec();
                divdiff_in_place(x, &mut scratch).abs()
            })
        }),
    };
    Ok(FunctionalReport::new(FunctionalKind::Variational, s, m, p, value))
}

/// `(Σ_i (x_{i+m} - x_i) |Δ^m f[x_i..x_{i+m}]|^p)^{1/p}` over consecutive
/// windows, or `max_i |Δ^m f|` for `p = ∞`.
pub fn homogeneous_sequence_functional(
    s: &SampledFunction,
    m: usize,
    p: Exponent,
) -> Result<FunctionalReport> {
    check_m(m)?;
    let p = p.check_trace_range()?;
    check_enough_points(s, m, "the homogeneous functional")?;
    let value = match p {
        Exponent::Finite(q) => abs_pow(homogeneous_power_sum(s.points(), s.values(), m, q), 1.0 / q),
        Exponent::Infinite => top_order_sup(s.points(), s.values(), m),
    };
    Ok(FunctionalReport::new(FunctionalKind::HomogeneousSequence, s, m, p, value))
}

pub fn homogeneous_variational_functional(
    s: &SampledFunction,
    m: usize,
    p: Exponent,
) -> Result<FunctionalReport> {
    homogeneous_variational_functional_in(s, m, p, Execution::default())
}

pub fn homogeneous_variational_functional_in(
    s: &SampledFunction,
    m: usize,
    p: Exponent,
    exec: Execution,
) -> Result<FunctionalReport> {
    check_m(m)?;
    let p = p.check_trace_range()?;
    check_enough_points(s, m, "the homogeneous variational functional")?;
    check_cap(s)?;
    let value = match p {
        Exponent::Finite(q) => enumerate_max(s, exec, |x, v| {
            (x.len() > m).then(|| abs_pow(homogeneous_power_sum(x, v, m, q), 1.0 / q))
        }),
        Exponent::Infinite => enumerate_max(s, exec, |x, v| {
            (x.len() == m + 1).then(|| top_order_sup(x, v, m))
        }),
    };
    Ok(FunctionalReport::new(FunctionalKind::HomogeneousVariational, s, m, p, value))
}

/// For `#E <= m`: the largest `|Δ^k f|` over consecutive windows of every
/// order `k <= #E - 1`. This represents the trace norm up to constants
/// because the trace space on so few points is that of `W^n_∞`.
pub fn small_set_functional(s: &SampledFunction, m: usize, p: Exponent) -> Result<FunctionalReport> {
    check_m(m)?;
    let p = p.check_trace_range()?;
    if s.len() > m {
        return Err(TraceError::Hypothesis(format!(
            "the small-set functional needs at most m = {m} points, have {}",
            s.len()
        )));
    }
    let value = sequence_sup(s.points(), s.values(), s.len() - 1);
    Ok(FunctionalReport::new(FunctionalKind::SmallSetMax, s, m, p, value))
}

/// Pads `#E = n + 1 <= m` points to `m + 1` by appending `x_n + 2(k - n)`,
/// `k = n+1..=m`, with value zero.
pub fn pad_small_set(s: &SampledFunction, m: usize) -> Result<SampledFunction> {
    check_m(m)?;
    if s.len() > m {
        return Err(TraceError::Hypothesis(format!(
            "padding applies to at most m = {m} points, have {}",
            s.len()
        )));
    }
    let n = s.len() - 1;
    let last = s.max();
    let mut points = s.points().to_vec();
    let mut values = s.values().to_vec();
    for k in (n + 1)..=m {
        points.push(last + 2.0 * (k - n) as f64);
        values.push(0.0);
    }
    SampledFunction::new(points, values)
}
