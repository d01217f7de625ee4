//! Local sharp maximal functions `f♯_k` and the `Σ_k ‖f♯_k‖_p` criterion.
//!
//! For `k < m`, `f♯_k(x)` is the largest `|Δ^k f[S]|` over `(k+1)`-subsets
//! `S ⊆ E` with a point in `[x - 1, x + 1]`; for `k = m` each term is damped
//! by `diam S / diam(S ∪ {x})`. The admissible family only changes when
//! `x ± 1` crosses a point of `E`, so between the nodes `E ∪ (E ± 1)`
//! `f♯_k` is constant for `k < m` and a maximum of finitely many
//! `A / |x - c|` branches for `k = m`. The quadrature uses those nodes as
//! forced breakpoints.

use serde::Serialize;

use crate::divided_differences::{divdiff_in_place, SampledFunction};
use crate::exec::Execution;
use crate::trace_functionals::{abs_pow, check_m, Exponent, FunctionalKind, FunctionalReport, ENUMERATION_CAP};
use crate::{Result, TraceError};

/// Grid used for profiles and for the midpoint quadrature.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct GridSpec {
    /// Maximal cell width; defaults to `0.02 * min(1, min gap of E)`.
    pub h: Option<f64>,
}

impl GridSpec {
    pub fn with_h(h: f64) -> Self {
        Self { h: Some(h) }
    }

    pub fn resolve(&self, s: &SampledFunction) -> Result<f64> {
        let h = match self.h {
            Some(h) => h,
            None => 0.02 * s.min_gap().unwrap_or(1.0).min(1.0),
        };
        if !(h > 0.0) || !h.is_finite() {
            return Err(TraceError::InvalidParameter(format!("grid spacing must be positive, got {h}")));
        }
        Ok(h)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MaximalProfile {
    pub k: usize,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    /// `[min E - 1, max E + 1]`; the profile vanishes outside.
    pub support_bounds: (f64, f64),
}

fn check_inputs(s: &SampledFunction, m: usize, k: usize) -> Result<()> {
    check_m(m)?;
    if k > m {
        return Err(TraceError::InvalidParameter(format!("order k = {k} exceeds m = {m}")));
    }
    if s.len() > ENUMERATION_CAP {
        return Err(TraceError::SizeCap { size: s.len(), cap: ENUMERATION_CAP });
    }
    Ok(())
}

/// Calls `f` with every increasing `r`-tuple of indices below `n`.
fn for_each_combination(n: usize, r: usize, mut f: impl FnMut(&[usize])) {
    if r > n || r == 0 {
        return;
    }
    let mut idx: Vec<usize> = (0..r).collect();
    loop {
        f(&idx);
        let mut i = r;
        while i > 0 && idx[i - 1] == n - r + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        idx[i - 1] += 1;
        for j in i..r {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// `|Δ^k f[S]|` and the hull of `S`, for one subset.
#[derive(Debug, Clone, Copy)]
struct SubsetTerm {
    value: f64,
    mask: u32,
    first: usize,
    last: usize,
}

fn subset_terms(s: &SampledFunction, k: usize) -> Vec<SubsetTerm> {
    let mut terms = Vec::new();
    let mut xs = vec![0.0; k + 1];
    let mut vs = vec![0.0; k + 1];
    for_each_combination(s.len(), k + 1, |idx| {
        for (j, &i) in idx.iter().enumerate() {
            xs[j] = s.points()[i];
            vs[j] = s.values()[i];
        }
        let value = divdiff_in_place(&xs, &mut vs).abs();
        terms.push(SubsetTerm {
            value,
            mask: idx.iter().fold(0u32, |m, &i| m | (1 << i)),
            first: idx[0],
            last: idx[k],
        });
    });
    terms
}

/// Bitmask of the points of `E` within distance one of `x`.
fn window_mask(s: &SampledFunction, x: f64) -> u32 {
    s.points()
        .iter()
        .enumerate()
        .filter(|(_, &e)| (e - x).abs() <= 1.0)
        .fold(0u32, |m, (i, _)| m | (1 << i))
}

fn damping(s: &SampledFunction, t: &SubsetTerm, x: f64) -> f64 {
    let lo = s.points()[t.first];
    let hi = s.points()[t.last];
    let diam = hi - lo;
    let outer = hi.max(x) - lo.min(x);
    if outer > diam {
        diam / outer
    } else {
        1.0
    }
}

/// `f♯_k(x)` by direct enumeration of all `(k+1)`-subsets of `E`.
pub fn sharp_value(s: &SampledFunction, m: usize, k: usize, x: f64) -> Result<f64> {
    check_inputs(s, m, k)?;
    let window = window_mask(s, x);
    if window == 0 {
        return Ok(0.0);
    }
    Ok(subset_terms(s, k)
        .iter()
        .filter(|t| t.mask & window != 0)
        .map(|t| if k == m { damping(s, t, x) * t.value } else { t.value })
        .fold(0.0, f64::max))
}

/// `f♯_k` restricted to an open interval between consecutive nodes:
/// `max(constant, max A / (x - c) over left, max A / (c - x) over right)`.
#[derive(Debug, Clone)]
struct Branches {
    lo: f64,
    hi: f64,
    constant: f64,
    /// Subsets lying left of the interval, grouped by their left end `c`.
    left: Vec<(f64, f64)>,
    /// Subsets lying right of the interval, grouped by their right end `c`.
    right: Vec<(f64, f64)>,
}

impl Branches {
    fn value(&self, x: f64) -> f64 {
        let mut best = self.constant;
        for &(a, c) in &self.left {
            best = best.max(a / (x - c));
        }
        for &(a, c) in &self.right {
            best = best.max(a / (c - x));
        }
        best
    }
}

/// Piecewise description of one `f♯_k` over `[min E - 1, max E + 1]`.
struct SharpPieces {
    nodes: Vec<f64>,
    branches: Vec<Branches>,
}

impl SharpPieces {
    fn build(s: &SampledFunction, m: usize, k: usize) -> Self {
        let mut nodes: Vec<f64> = s
            .points()
            .iter()
            .flat_map(|&e| [e - 1.0, e, e + 1.0])
            .collect();
        nodes.sort_by(|a, b| a.total_cmp(b));
        nodes.dedup();
        let terms = subset_terms(s, k);
        let n = s.len();
        let branches = nodes
            .windows(2)
            .map(|w| {
                let (lo, hi) = (w[0], w[1]);
                let window = window_mask(s, 0.5 * (lo + hi));
                let mut constant = 0.0f64;
                let mut left = vec![0.0f64; n];
                let mut right = vec![0.0f64; n];
                for t in terms.iter().filter(|t| t.mask & window != 0) {
                    let a = s.points()[t.first];
                    let b = s.points()[t.last];
                    if k < m || (a <= lo && b >= hi) {
                        constant = constant.max(t.value);
                    } else if b <= lo {
                        left[t.first] = left[t.first].max(t.value * (b - a));
                    } else {
                        right[t.last] = right[t.last].max(t.value * (b - a));
                    }
                }
                let keep = |v: Vec<f64>| -> Vec<(f64, f64)> {
                    v.into_iter()
                        .enumerate()
                        .filter(|&(_, a)| a > 0.0)
                        .map(|(i, a)| (a, s.points()[i]))
                        .collect()
                };
                Branches { lo, hi, constant, left: keep(left), right: keep(right) }
            })
            .collect();
        Self { nodes, branches }
    }

    fn bounds(&self) -> (f64, f64) {
        (self.nodes[0], *self.nodes.last().unwrap())
    }

    /// Number of equal cells of width `<= h` in interval `j`.
    fn cells(&self, j: usize, h: f64) -> usize {
        let b = &self.branches[j];
        (((b.hi - b.lo) / h).ceil() as usize).max(1)
    }

    /// Composite midpoint rule for `∫ (f♯_k)^p` over interval `j`.
    fn midpoint_integral(&self, j: usize, h: f64, p: f64) -> f64 {
        let b = &self.branches[j];
        let cells = self.cells(j, h);
        let width = (b.hi - b.lo) / cells as f64;
        if b.left.is_empty() && b.right.is_empty() {
            return (b.hi - b.lo) * abs_pow(b.constant, p);
        }
        (0..cells)
            .map(|c| width * abs_pow(b.value(b.lo + (c as f64 + 0.5) * width), p))
            .sum()
    }
}

/// Samples `f♯_k` on a grid containing every node of `E ∪ (E ± 1)`, with
/// cells of width at most `h` in between.
pub fn sharp_profile(s: &SampledFunction, m: usize, k: usize, grid: GridSpec) -> Result<MaximalProfile> {
    sharp_profile_in(s, m, k, grid, Execution::default())
}

pub fn sharp_profile_in(
    s: &SampledFunction,
    m: usize,
    k: usize,
    grid: GridSpec,
    exec: Execution,
) -> Result<MaximalProfile> {
    check_inputs(s, m, k)?;
    let h = grid.resolve(s)?;
    let pieces = SharpPieces::build(s, m, k);
    let mut xs = Vec::new();
    for j in 0..pieces.branches.len() {
        let b = &pieces.branches[j];
        let cells = pieces.cells(j, h);
        let width = (b.hi - b.lo) / cells as f64;
        xs.extend((0..cells).map(|c| b.lo + c as f64 * width));
    }
    xs.push(pieces.bounds().1);
    let terms = subset_terms(s, k);
    let values = exec.map_slice(&xs, |&x| {
        match pieces.nodes.binary_search_by(|v| v.total_cmp(&x)) {
            Ok(_) => {
                // Nodes are where the admissible family changes: evaluate directly.
                let window = window_mask(s, x);
                terms
                    .iter()
                    .filter(|t| t.mask & window != 0)
                    .map(|t| if k == m { damping(s, t, x) * t.value } else { t.value })
                    .fold(0.0, f64::max)
            }
            Err(pos) => pieces.branches[pos - 1].value(x),
        }
    });
    Ok(MaximalProfile { k, grid: xs, values, support_bounds: pieces.bounds() })
}

/// `∫ (f♯_k)^p` by the composite midpoint rule on the forced-node grid.
pub fn sharp_power_integral(
    s: &SampledFunction,
    m: usize,
    k: usize,
    p: f64,
    grid: GridSpec,
    exec: Execution,
) -> Result<f64> {
    check_inputs(s, m, k)?;
    let h = grid.resolve(s)?;
    let pieces = SharpPieces::build(s, m, k);
    let parts = exec.map_range(pieces.branches.len(), |j| pieces.midpoint_integral(j, h, p));
    Ok(parts.iter().sum())
}

/// `Σ_{k=0}^{m} (∫ (f♯_k)^p)^{1/p}` for finite `p`.
pub fn wmf_functional(s: &SampledFunction, m: usize, p: Exponent, grid: GridSpec) -> Result<FunctionalReport> {
    wmf_functional_in(s, m, p, grid, Execution::default())
}

pub fn wmf_functional_in(
    s: &SampledFunction,
    m: usize,
    p: Exponent,
    grid: GridSpec,
    exec: Execution,
) -> Result<FunctionalReport> {
    let p = p.check_trace_range()?;
    let Exponent::Finite(q) = p else {
        return Err(TraceError::Unsupported(
            "the sharp maximal criterion is defined for finite p only".into(),
        ));
    };
    let mut value = 0.0;
    for k in 0..=m {
        value += abs_pow(sharp_power_integral(s, m, k, q, grid, exec)?, 1.0 / q);
    }
    Ok(FunctionalReport::new(FunctionalKind::SharpMaximal, s, m, p, value))
}
