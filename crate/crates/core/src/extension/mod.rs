//! The extension operator and the explicit-constant necessity check.
//!
//! Gaps of `E` longer than 4 get lattice points spaced between 2 and 3. `f`
//! is extended by zero to `Ẽ = E ∪ G`, then a `C^{m-1}` spline of degree
//! `<= 2m - 1` with knots `Ẽ` interpolates the result. Every step is linear
//! in `f`, so the operator is linear.

mod lattice;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use lattice::{build_gap_lattice, zero_extend, Gap, GapLattice, KnotOrigin, Window, ZeroExtension};

use crate::divided_differences::{newton_coefficients, SampledFunction};
use crate::spline::{interpolating_spline, poly, sobolev_norm, two_point_hermite, EndCondition, PiecewisePolynomial};
use crate::trace_functionals::{
    check_m, pad_small_set, sequence_functional, variational_functional, Exponent, FunctionalReport,
    ENUMERATION_CAP,
};
use crate::{Result, TraceError};

/// `δ = 3(m + 2)`: the constructed extension vanishes outside the
/// `δ`-neighbourhood of `E`.
pub fn support_radius(m: usize) -> f64 {
    3.0 * (m as f64 + 2.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    /// Local two-point Hermite pieces between consecutive knots of `Ẽ`.
    Hermite,
    /// Minimal-energy spline on `Ẽ`, clamped to zero at the window edges.
    Natural2,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Hermite => "hermite",
            Backend::Natural2 => "natural2",
        })
    }
}

impl FromStr for Backend {
    type Err = TraceError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hermite" => Ok(Backend::Hermite),
            "natural2" => Ok(Backend::Natural2),
            other => Err(TraceError::InvalidParameter(format!("unknown backend {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtensionConfig {
    pub m: usize,
    pub p: Exponent,
    pub backend: Backend,
    /// Half-width added on each side of `E`; at least `3(m + 2)`.
    pub window_pad: f64,
    pub smoothness_tol: f64,
    pub quad_tol: f64,
}

impl ExtensionConfig {
    pub fn new(m: usize, p: Exponent) -> Self {
        Self {
            m,
            p,
            backend: Backend::Hermite,
            window_pad: support_radius(m),
            smoothness_tol: 1e-7,
            quad_tol: 1e-10,
        }
    }

    pub fn with_backend(mut self, backend: Backend) -> Self {
        self.backend = backend;
        self
    }

    pub fn with_window_pad(mut self, pad: f64) -> Self {
        self.window_pad = pad;
        self
    }

    pub fn validate(&self) -> Result<()> {
        check_m(self.m)?;
        self.p.check_trace_range()?;
        let delta = support_radius(self.m);
        if !(self.window_pad >= delta) || !self.window_pad.is_finite() {
            return Err(TraceError::InvalidParameter(format!(
                "window_pad must be at least 3(m + 2) = {delta}, got {}",
                self.window_pad
            )));
        }
        if !(self.quad_tol > 0.0) || !(self.smoothness_tol > 0.0) {
            return Err(TraceError::InvalidParameter("tolerances must be positive".into()));
        }
        Ok(())
    }
}

/// Data set actually extended: `E` itself, or `E` padded to `m + 1` points.
fn working_set(s: &SampledFunction, m: usize) -> Result<SampledFunction> {
    if s.len() <= m {
        pad_small_set(s, m)
    } else {
        Ok(s.clone())
    }
}

/// Builds the lattice and zero fill used by [`extend`]. The window is
/// measured from the original `E`, before any small-set padding.
pub fn prepare(s: &SampledFunction, cfg: &ExtensionConfig) -> Result<(GapLattice, ZeroExtension)> {
    cfg.validate()?;
    let data = working_set(s, cfg.m)?;
    let window = Window::around(s.points(), cfg.window_pad);
    let lattice = build_gap_lattice(data.points(), window)?;
    let filled = zero_extend(&data, &lattice)?;
    Ok((lattice, filled))
}

/// A linear `C^{m-1}` extension of `f` of degree `<= 2m - 1` with knots
/// `Ẽ = E ∪ G`, vanishing outside `[min E - pad, max E + pad]`.
pub fn extend(s: &SampledFunction, cfg: &ExtensionConfig) -> Result<PiecewisePolynomial> {
    let (lattice, filled) = prepare(s, cfg)?;
    match cfg.backend {
        Backend::Hermite => hermite_extension(&filled, cfg.m),
        Backend::Natural2 => natural_extension(&filled, lattice.window, cfg.m),
    }
}

/// Indices `lo..=hi` of the `count` data points nearest to data point `i`,
/// ties going to the smaller coordinate.
fn nearest_block(points: &[f64], i: usize, count: usize) -> (usize, usize) {
    let (mut lo, mut hi) = (i, i);
    while hi - lo + 1 < count {
        let take_left = match (lo.checked_sub(1), points.get(hi + 1)) {
            (Some(l), Some(&r)) => points[i] - points[l] <= r - points[i],
            (Some(_), None) => true,
            (None, _) => false,
        };
        if take_left {
            lo -= 1;
        } else {
            hi += 1;
        }
    }
    (lo, hi)
}

/// Derivatives `0..m` at each data point of the local Lagrange polynomial
/// through its `min(m, #E)` nearest data points.
fn data_jets(data_points: &[f64], data_values: &[f64], m: usize) -> Vec<Vec<f64>> {
    let count = m.min(data_points.len());
    (0..data_points.len())
        .map(|i| {
            let (lo, hi) = nearest_block(data_points, i, count);
            let coeffs = newton_coefficients(&data_points[lo..=hi], &data_values[lo..=hi], data_points[i]);
            let mut jet: Vec<f64> = (0..m)
                .map(|k| coeffs.get(k).map_or(0.0, |c| c * poly::factorial(k)))
                .collect();
            jet[0] = data_values[i];
            jet
        })
        .collect()
}

fn hermite_extension(filled: &ZeroExtension, m: usize) -> Result<PiecewisePolynomial> {
    let knots = filled.function.points();
    let values = filled.function.values();
    let (data_points, data_values): (Vec<f64>, Vec<f64>) = knots
        .iter()
        .zip(values)
        .zip(&filled.origin)
        .filter(|(_, &o)| o == KnotOrigin::Data)
        .map(|((&x, &v), _)| (x, v))
        .unzip();
    let mut data_jet_iter = data_jets(&data_points, &data_values, m).into_iter();
    let jets: Vec<Vec<f64>> = filled
        .origin
        .iter()
        .map(|o| match o {
            KnotOrigin::Data => data_jet_iter.next().expect("one jet per data point"),
            KnotOrigin::Lattice => vec![0.0; m],
        })
        .collect();
    if knots.len() < 2 {
        return Err(TraceError::Numerical("extension needs at least two knots".into()));
    }
    let pieces = knots
        .windows(2)
        .enumerate()
        .map(|(j, w)| two_point_hermite(&jets[j], &jets[j + 1], w[1] - w[0]))
        .collect::<Result<Vec<_>>>()?;
    debug_assert!(filled.origin.first() == Some(&KnotOrigin::Lattice));
    PiecewisePolynomial::new(knots.to_vec(), pieces, vec![0.0], vec![0.0])
}

fn natural_extension(filled: &ZeroExtension, window: Window, m: usize) -> Result<PiecewisePolynomial> {
    let mut knots = Vec::with_capacity(filled.function.len() + 2);
    let mut values = Vec::with_capacity(filled.function.len() + 2);
    if filled.function.min() > window.lo {
        knots.push(window.lo);
        values.push(0.0);
    }
    knots.extend_from_slice(filled.function.points());
    values.extend_from_slice(filled.function.values());
    if filled.function.max() < window.hi {
        knots.push(window.hi);
        values.push(0.0);
    }
    interpolating_spline(&knots, &values, m, EndCondition::ZeroJet)
}

/// Outcome of checking `N ≤ C · ‖F‖_{W^m_p}` for an extension `F`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NecessityReport {
    /// The trace functional `N` that was bounded.
    pub functional: FunctionalReport,
    pub w_norm: f64,
    /// `2 ((m+1)(2m+1))^{1/p}` for finite `p`, `1` for `p = ∞`.
    pub constant: f64,
    /// `N / ‖F‖_W`.
    pub ratio: f64,
    pub pass: bool,
}

pub fn necessity_constant(m: usize, p: Exponent) -> f64 {
    match p {
        Exponent::Finite(p) => 2.0 * (((m + 1) * (2 * m + 1)) as f64).powf(1.0 / p),
        Exponent::Infinite => 1.0,
    }
}

/// Largest `|F(x_i) - f(x_i)|`.
pub fn interpolation_residual(s: &SampledFunction, f: &PiecewisePolynomial) -> f64 {
    s.points()
        .iter()
        .zip(s.values())
        .map(|(&x, &v)| (f.evaluate(x) - v).abs())
        .fold(0.0, f64::max)
}

/// Checks the explicit necessity inequality for an interpolant `F` of `f`.
///
/// `N` is the variational functional when `E` is small enough to enumerate
/// and has at least `m + 1` points (any size for `p = ∞`), and the sequence
/// functional otherwise.
pub fn verify_necessity(
    s: &SampledFunction,
    f: &PiecewisePolynomial,
    m: usize,
    p: Exponent,
    quad_tol: f64,
) -> Result<NecessityReport> {
    check_m(m)?;
    let p = p.check_trace_range()?;
    let residual = interpolation_residual(s, f);
    if residual > 1e-9 * (1.0 + s.max_abs_value()) {
        return Err(TraceError::Precondition(format!(
            "F does not interpolate f (residual {residual:e})"
        )));
    }
    let enumerable = s.len() <= ENUMERATION_CAP && (p.is_infinite() || s.len() > m);
    let functional = if enumerable {
        variational_functional(s, m, p)?
    } else {
        sequence_functional(s, m, p)?
    };
    let w_norm = sobolev_norm(f, m, p, quad_tol)?.w_norm;
    let constant = necessity_constant(m, p);
    let n = functional.value;
    let ratio = if n == 0.0 { 0.0 } else { n / w_norm };
    Ok(NecessityReport {
        pass: n <= constant * w_norm,
        functional,
        w_norm,
        constant,
        ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spline::smoothness_order;

    fn sf(points: &[f64], values: &[f64]) -> SampledFunction {
        SampledFunction::new(points.to_vec(), values.to_vec()).unwrap()
    }

    #[test]
    fn nearest_block_breaks_ties_left() {
        let pts = [0.0, 1.0, 2.0, 3.0, 10.0];
        assert_eq!(nearest_block(&pts, 2, 2), (1, 2));
        assert_eq!(nearest_block(&pts, 2, 3), (1, 3));
        assert_eq!(nearest_block(&pts, 0, 3), (0, 2));
        assert_eq!(nearest_block(&pts, 4, 2), (3, 4));
    }

    #[test]
    fn config_validation() {
        let cfg = ExtensionConfig::new(2, Exponent::Finite(2.0));
        assert_eq!(cfg.window_pad, 12.0);
        assert!(cfg.validate().is_ok());
        assert!(cfg.with_window_pad(5.0).validate().is_err());
        assert!(ExtensionConfig::new(0, Exponent::Finite(2.0)).validate().is_err());
        assert_eq!("natural2".parse::<Backend>().unwrap(), Backend::Natural2);
        assert!("spline".parse::<Backend>().is_err());
    }

    #[test]
    fn zero_data_extends_to_zero() {
        let s = sf(&[0.0, 0.5, 7.0], &[0.0; 3]);
        for backend in [Backend::Hermite, Backend::Natural2] {
            let cfg = ExtensionConfig::new(2, Exponent::Finite(2.0)).with_backend(backend);
            let f = extend(&s, &cfg).unwrap();
            assert_eq!(f.support(), None, "{backend}");
        }
    }

    #[test]
    fn both_backends_interpolate_and_are_smooth() {
        let s = sf(&[0.0, 0.4, 1.5, 7.2, 8.0], &[1.0, -2.0, 0.5, 3.0, -1.0]);
        for m in 1..=3 {
            for backend in [Backend::Hermite, Backend::Natural2] {
                let cfg = ExtensionConfig::new(m, Exponent::Finite(2.0)).with_backend(backend);
                let f = extend(&s, &cfg).unwrap();
                assert!(interpolation_residual(&s, &f) < 1e-10, "{backend} m={m}");
                let r = smoothness_order(&f, 1e-7).unwrap();
                assert!(r + 1 >= m, "{backend} m={m} r={r}");
                let (lo, hi) = f.support().unwrap();
                assert!(lo >= -support_radius(m) && hi <= 8.0 + support_radius(m));
            }
        }
    }

    #[test]
    fn small_sets_are_padded() {
        let s = sf(&[1.0], &[2.0]);
        let cfg = ExtensionConfig::new(3, Exponent::Finite(2.0));
        let (lattice, filled) = prepare(&s, &cfg).unwrap();
        assert!(filled.function.points().contains(&7.0));
        assert!(lattice.lattice_points.iter().all(|&y| y <= 1.0 + 15.0));
        let f = extend(&s, &cfg).unwrap();
        assert!((f.evaluate(1.0) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn necessity_on_zero_data() {
        let s = sf(&[0.0, 1.0, 2.0], &[0.0; 3]);
        let f = PiecewisePolynomial::zero(vec![-1.0, 3.0]).unwrap();
        let r = verify_necessity(&s, &f, 1, Exponent::Finite(2.0), 1e-10).unwrap();
        assert!(r.pass);
        assert_eq!(r.ratio, 0.0);
    }

    #[test]
    fn necessity_requires_interpolation() {
        let s = sf(&[0.0, 1.0, 2.0], &[0.0, 1.0, 4.0]);
        let f = PiecewisePolynomial::zero(vec![-1.0, 3.0]).unwrap();
        assert!(matches!(
            verify_necessity(&s, &f, 1, Exponent::Finite(2.0), 1e-10),
            Err(TraceError::Precondition(_))
        ));
    }

    #[test]
    fn necessity_hand_instance_natural2() {
        let s = sf(&[0.0, 1.0, 2.0], &[0.0, 1.0, 4.0]);
        let cfg = ExtensionConfig::new(1, Exponent::Finite(2.0)).with_backend(Backend::Natural2);
        let f = extend(&s, &cfg).unwrap();
        let r = verify_necessity(&s, &f, 1, Exponent::Finite(2.0), 1e-12).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(r.ratio > 0.0 && r.ratio <= r.constant);
    }
}
