use super::banded::BandedSystem;
use super::poly::{self, falling_factorial};
use super::quadrature::integral_of_power;
use super::PiecewisePolynomial;
use crate::divided_differences::{newton_coefficients, SampledFunction};
use crate::{Result, TraceError};

/// Boundary behaviour at the two extreme knots.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum EndCondition {
    /// `F^(k) = 0` for `k = m..=2m-2`; the tails continue with the degree
    /// `m - 1` Taylor polynomial.
    Natural,
    /// `F^(k) = 0` for `k = 1..=m-1`; the tails are identically zero, so the
    /// knot values should be zero too.
    ZeroJet,
}

/// Interpolating spline of degree `2m - 1` that is `C^{2m-2}` at interior
/// knots, with the given end conditions.
///
/// Unknowns are the monomial coefficients of each piece, ordered piece by
/// piece; equations are ordered the same way, so the system is banded with
/// width `O(m)`. Knots are rescaled to unit mean gap before solving.
pub(crate) fn interpolating_spline(
    knots: &[f64],
    values: &[f64],
    m: usize,
    ends: EndCondition,
) -> Result<PiecewisePolynomial> {
    let k_count = knots.len();
    if k_count < 2 {
        return Err(TraceError::InvalidInput(
            "a spline needs at least two knots".into(),
        ));
    }
    let pieces = k_count - 1;
    let width = 2 * m;
    let scale = (knots[k_count - 1] - knots[0]) / pieces as f64;
    let widths: Vec<f64> = knots.windows(2).map(|w| (w[1] - w[0]) / scale).collect();

    let n = width * pieces;
    let mut sys = BandedSystem::new(n);
    let mut row = 0;
    let col = |j: usize, k: usize| j * width + k;
    let end_orders: Vec<usize> = match ends {
        EndCondition::Natural => (m..=2 * m - 2).collect(),
        EndCondition::ZeroJet => (1..m).collect(),
    };

    for &r in &end_orders {
        sys.set(row, col(0, r), falling_factorial(r, r));
        row += 1;
    }
    for j in 0..pieces {
        let h = widths[j];
        sys.set(row, col(j, 0), 1.0);
        sys.set_rhs(row, values[j]);
        row += 1;
        for k in 0..width {
            sys.set(row, col(j, k), h.powi(k as i32));
        }
        sys.set_rhs(row, values[j + 1]);
        row += 1;
        if j + 1 < pieces {
            for r in 1..=(2 * m).saturating_sub(2) {
                for k in r..width {
                    sys.set(row, col(j, k), falling_factorial(k, r) * h.powi((k - r) as i32));
                }
                sys.set(row, col(j + 1, r), -falling_factorial(r, r));
                row += 1;
            }
        }
    }
    let h_last = widths[pieces - 1];
    for &r in &end_orders {
        for k in r..width {
            sys.set(
                row,
                col(pieces - 1, k),
                falling_factorial(k, r) * h_last.powi((k - r) as i32),
            );
        }
        row += 1;
    }
    debug_assert_eq!(row, n);

    let solution = sys.solve()?;
    let coeffs: Vec<Vec<f64>> = solution
        .chunks(width)
        .map(|d| {
            let mut s = 1.0;
            d.iter()
                .map(|&v| {
                    let c = v / s;
                    s *= scale;
                    c
                })
                .collect()
        })
        .collect();

    let (left_tail, right_tail) = match ends {
        EndCondition::Natural => {
            let left = coeffs[0][..m].to_vec();
            let last_width = knots[k_count - 1] - knots[k_count - 2];
            let right = poly::taylor_shift(&coeffs[pieces - 1], last_width)[..m].to_vec();
            (left, right)
        }
        EndCondition::ZeroJet => (vec![0.0], vec![0.0]),
    };
    PiecewisePolynomial::new(knots.to_vec(), coeffs, left_tail, right_tail)
}

/// The interpolant of `s` minimising `∫ |F^(m)|^2` over the whole line, and
/// that minimal energy.
///
/// With at least `m + 1` points this is the natural spline of degree
/// `2m - 1`. With fewer points the minimum is zero, attained by the
/// interpolating polynomial of degree `<= m - 1`, which is returned.
pub fn natural_spline_min_energy(s: &SampledFunction, m: usize) -> Result<(PiecewisePolynomial, f64)> {
    if m == 0 {
        return Err(TraceError::InvalidParameter("m must be at least 1".into()));
    }
    if s.len() <= m {
        let lo = s.points()[0];
        let hi = if s.len() > 1 { s.max() } else { lo + 1.0 };
        let coeffs = newton_coefficients(s.points(), s.values(), lo);
        return Ok((PiecewisePolynomial::from_polynomial(coeffs, lo, hi)?, 0.0));
    }
    let f = interpolating_spline(s.points(), s.values(), m, EndCondition::Natural)?;
    let energy = integral_of_power(&f.nth_derivative(m), 2.0, 0.0)?;
    Ok((f, energy))
}
