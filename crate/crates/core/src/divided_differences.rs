//! Divided differences on finite point sets.
//!
//! Three independent routes compute the top-order difference of a point set:
//! the recurrence ([`divdiff_recursive`]), the `Σ f(x_i) / ω'(x_i)` sum
//! ([`divdiff_sum`]) and the leading coefficient of the Lagrange interpolant
//! ([`lagrange_polynomial`]). The rest of the crate uses the recurrence,
//! usually through a [`DividedDifferenceTable`].

use serde::Serialize;

use crate::spline::{poly, PiecewisePolynomial};
use crate::{Result, TraceError};

/// Coordinates closer than this are rejected as duplicates.
pub const MIN_SEPARATION: f64 = 1e-12;

/// A function sampled on a finite, strictly increasing set of points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampledFunction {
    points: Vec<f64>,
    values: Vec<f64>,
}

fn validate(points: &[f64], values: &[f64]) -> Result<()> {
    if points.is_empty() {
        return Err(TraceError::InvalidInput("at least one point is required".into()));
    }
    if points.len() != values.len() {
        return Err(TraceError::InvalidInput(format!(
            "{} points but {} values",
            points.len(),
            values.len()
        )));
    }
    if let Some(i) = points.iter().position(|x| !x.is_finite()) {
        return Err(TraceError::InvalidInput(format!("point {i} is not finite")));
    }
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(TraceError::InvalidInput(format!("value {i} is not finite")));
    }
    for (i, w) in points.windows(2).enumerate() {
        if !(w[1] > w[0]) {
            return Err(TraceError::InvalidInput(format!(
                "points must be strictly increasing: x[{}] = {} >= x[{}] = {}",
                i,
                w[0],
                i + 1,
                w[1]
            )));
        }
        if w[1] - w[0] < MIN_SEPARATION {
            return Err(TraceError::InvalidInput(format!(
                "points {} and {} are closer than {MIN_SEPARATION:e}",
                i,
                i + 1
            )));
        }
    }
    Ok(())
}

impl SampledFunction {
    pub fn new(points: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        validate(&points, &values)?;
        Ok(Self { points, values })
    }

    /// Samples `f` on `points`.
    pub fn from_fn(points: Vec<f64>, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = points.iter().map(|&x| f(x)).collect();
        Self::new(points, values)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    /// Always false; kept for API symmetry with collections.
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.points[0]
    }

    pub fn max(&self) -> f64 {
        self.points[self.points.len() - 1]
    }

    pub fn diameter(&self) -> f64 {
        self.max() - self.min()
    }

    pub fn max_abs_value(&self) -> f64 {
        self.values.iter().fold(0.0, |a, v| a.max(v.abs()))
    }

    pub fn min_gap(&self) -> Option<f64> {
        self.points
            .windows(2)
            .map(|w| w[1] - w[0])
            .min_by(|a, b| a.total_cmp(b))
    }

    /// Same points, values multiplied by `alpha`.
    pub fn scaled(&self, alpha: f64) -> Self {
        Self {
            points: self.points.clone(),
            values: self.values.iter().map(|v| alpha * v).collect(),
        }
    }

    /// Same points, values `alpha * f + beta * g`.
    pub fn combine(&self, alpha: f64, other: &Self, beta: f64) -> Result<Self> {
        if self.points != other.points {
            return Err(TraceError::InvalidInput(
                "linear combination needs identical point sets".into(),
            ));
        }
        Ok(Self {
            points: self.points.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(f, g)| alpha * f + beta * g)
                .collect(),
        })
    }

    /// Restriction to the given increasing indices.
    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(TraceError::InvalidInput(
                "subset indices must be strictly increasing".into(),
            ));
        }
        if indices.iter().any(|&i| i >= self.len()) {
            return Err(TraceError::InvalidInput("subset index out of range".into()));
        }
        Self::new(
            indices.iter().map(|&i| self.points[i]).collect(),
            indices.iter().map(|&i| self.values[i]).collect(),
        )
    }

    /// The gap `x_j - x_i` with `x_j = +∞` once `j` runs past the last point.
    pub fn gap(&self, i: usize, j: usize) -> ExtendedGap {
        extended_gap(&self.points, i, j)
    }
}

/// A nonnegative length that may be `+∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedGap {
    Finite(f64),
    PlusInfinity,
}

impl ExtendedGap {
    /// `min{1, gap}`.
    pub fn min_one(self) -> f64 {
        match self {
            ExtendedGap::Finite(v) => v.min(1.0),
            ExtendedGap::PlusInfinity => 1.0,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, ExtendedGap::PlusInfinity)
    }
}

pub(crate) fn extended_gap(points: &[f64], i: usize, j: usize) -> ExtendedGap {
    match points.get(j) {
        Some(&xj) => ExtendedGap::Finite(xj - points[i]),
        None => ExtendedGap::PlusInfinity,
    }
}

/// Recurrence on validated data; `scratch` is overwritten.
pub(crate) fn divdiff_in_place(points: &[f64], scratch: &mut [f64]) -> f64 {
    let n = scratch.len() - 1;
    for k in 1..=n {
        for i in 0..=(n - k) {
            scratch[i] = (scratch[i + 1] - scratch[i]) / (points[i + k] - points[i]);
        }
    }
    scratch[0]
}

/// Top-order divided difference by the recurrence
/// `Δ^k f[x_0..x_k] = (Δ^{k-1} f[x_1..x_k] - Δ^{k-1} f[x_0..x_{k-1}]) / (x_k - x_0)`.
pub fn divdiff_recursive(points: &[f64], values: &[f64]) -> Result<f64> {
    validate(points, values)?;
    let mut scratch = values.to_vec();
    Ok(divdiff_in_place(points, &mut scratch))
}

/// Top-order divided difference by `Σ_i f(x_i) / Π_{j≠i} (x_i - x_j)`,
/// accumulated in input order with Neumaier compensation.
pub fn divdiff_sum(points: &[f64], values: &[f64]) -> Result<f64> {
    validate(points, values)?;
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for (i, (&xi, &fi)) in points.iter().zip(values).enumerate() {
        let denom: f64 = points
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, &xj)| xi - xj)
            .product();
        let term = fi / denom;
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
    }
    Ok(sum + comp)
}

/// Monomial coefficients, centred at `center`, of the interpolating
/// polynomial in Newton form. Inputs are assumed validated.
pub(crate) fn newton_coefficients(points: &[f64], values: &[f64], center: f64) -> Vec<f64> {
    let n = points.len();
    let mut newton = values.to_vec();
    for k in 1..n {
        for i in (k..n).rev() {
            newton[i] = (newton[i] - newton[i - 1]) / (points[i] - points[i - k]);
        }
    }
    let mut coeffs = vec![newton[n - 1]];
    for k in (0..n - 1).rev() {
        poly::mul_linear(&mut coeffs, points[k] - center);
        coeffs[0] += newton[k];
    }
    coeffs
}

/// The Lagrange interpolant of `s` as a single global piece on
/// `[min, max]` (or `[x_0, x_0 + 1]` for one point).
///
/// Built from the Lagrange basis `Σ f_i Π_{j≠i} (x - x_j) / (x_i - x_j)`,
/// independently of the recurrence, so its leading coefficient is a genuine
/// cross-check of [`divdiff_recursive`].
pub fn lagrange_polynomial(s: &SampledFunction) -> Result<PiecewisePolynomial> {
    let x = s.points();
    let center = x[0];
    let n = x.len();
    let mut coeffs = vec![0.0; n];
    for i in 0..n {
        let mut basis = vec![1.0];
        let mut denom = 1.0;
        for j in 0..n {
            if j != i {
                poly::mul_linear(&mut basis, x[j] - center);
                denom *= x[i] - x[j];
            }
        }
        let w = s.values()[i] / denom;
        for (c, b) in coeffs.iter_mut().zip(&basis) {
            *c += w * b;
        }
    }
    let hi = if n > 1 { s.max() } else { center + 1.0 };
    PiecewisePolynomial::from_polynomial(coeffs, center, hi)
}

/// Consecutive-window divided differences up to a fixed order.
#[derive(Debug, Clone, PartialEq)]
pub struct DividedDifferenceTable {
    base: SampledFunction,
    max_order: usize,
    entries: Vec<Vec<f64>>,
}

impl DividedDifferenceTable {
    pub fn base(&self) -> &SampledFunction {
        &self.base
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    /// `Δ^k f[x_i, ..., x_{i+k}]`.
    pub fn get(&self, k: usize, i: usize) -> f64 {
        self.entries[k][i]
    }

    /// All order-`k` differences, indexed by window start.
    pub fn order(&self, k: usize) -> &[f64] {
        &self.entries[k]
    }
}

pub fn build_table(s: &SampledFunction, max_order: usize) -> Result<DividedDifferenceTable> {
    if max_order >= s.len() {
        return Err(TraceError::InvalidParameter(format!(
            "table order {max_order} needs at least {} points, have {}",
            max_order + 1,
            s.len()
        )));
    }
    Ok(DividedDifferenceTable {
        base: s.clone(),
        max_order,
        entries: table_entries(s.points(), s.values(), max_order),
    })
}

pub(crate) fn table_entries(points: &[f64], values: &[f64], max_order: usize) -> Vec<Vec<f64>> {
    let mut entries = Vec::with_capacity(max_order + 1);
    entries.push(values.to_vec());
    for k in 1..=max_order {
        let prev: &Vec<f64> = &entries[k - 1];
        let row = (0..points.len() - k)
            .map(|i| (prev[i + 1] - prev[i]) / (points[i + k] - points[i]))
            .collect();
        entries.push(row);
    }
    entries
}

/// A certificate that a wide top-order difference is controlled by a
/// lower-order difference on a window of diameter at most one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WideDifferenceCertificate {
    /// Order `k` of the controlling difference.
    pub order: usize,
    /// Start index `i` of the controlling window `y_i, ..., y_{i+k}`.
    pub start: usize,
    /// `2^n |Δ^k f[y_i..y_{i+k}]| / diam S`, an upper bound for `|Δ^n f[S]|`.
    pub bound: f64,
}

/// Reduces `|Δ^n f[S]|` on a set of diameter at least one to a
/// lower-order difference on a short consecutive window.
///
/// Follows the induction directly: drop the last point or the first point,
/// recurse into whichever half still has diameter `>= 1` (or take the half
/// itself when it is shorter), and keep the larger certificate, preferring
/// the right half on ties. Two-point sets pick the larger `|f|`, again
/// preferring the right point on ties.
pub fn reduce_wide_difference(s: &SampledFunction) -> Result<WideDifferenceCertificate> {
    let n = s.len() - 1;
    if n == 0 {
        return Err(TraceError::Precondition(
            "wide-difference reduction needs at least two points".into(),
        ));
    }
    if s.diameter() < 1.0 {
        return Err(TraceError::Precondition(format!(
            "wide-difference reduction needs diameter >= 1, got {}",
            s.diameter()
        )));
    }
    let table = table_entries(s.points(), s.values(), n);
    let mut memo = vec![None; (n + 1) * (n + 1)];
    let (order, start) = certify(s.points(), &table, 0, n, &mut memo);
    let bound = 2f64.powi(n as i32) * table[order][start].abs() / s.diameter();
    Ok(WideDifferenceCertificate { order, start, bound })
}

fn certify(
    x: &[f64],
    table: &[Vec<f64>],
    lo: usize,
    hi: usize,
    memo: &mut [Option<(usize, usize)>],
) -> (usize, usize) {
    let stride = x.len();
    if let Some(c) = memo[lo * stride + hi] {
        return c;
    }
    let magnitude = |c: (usize, usize)| table[c.0][c.1].abs();
    let result = if hi - lo == 1 {
        if table[0][lo].abs() > table[0][hi].abs() {
            (0, lo)
        } else {
            (0, hi)
        }
    } else {
        let left = if x[hi - 1] - x[lo] >= 1.0 {
            certify(x, table, lo, hi - 1, memo)
        } else {
            (hi - 1 - lo, lo)
        };
        let right = if x[hi] - x[lo + 1] >= 1.0 {
            certify(x, table, lo + 1, hi, memo)
        } else {
            (hi - lo - 1, lo + 1)
        };
        if magnitude(left) > magnitude(right) {
            left
        } else {
            right
        }
    };
    memo[lo * stride + hi] = Some(result);
    result
}

/// Whether `Δ^k f` on the chosen subset lies between the smallest and
/// largest order-`k` consecutive-window differences of `full`.
///
/// The subset value is a convex combination of the window values, so this
/// holds for exact arithmetic; a relative slack of `1e-12` of the largest
/// window magnitude absorbs rounding.
pub fn convex_hull_check(full: &SampledFunction, subset_indices: &[usize], k: usize) -> Result<bool> {
    if subset_indices.len() != k + 1 {
        return Err(TraceError::InvalidInput(format!(
            "order {k} needs {} subset points, got {}",
            k + 1,
            subset_indices.len()
        )));
    }
    let sub = full.subset(subset_indices)?;
    let mut scratch = sub.values().to_vec();
    let value = divdiff_in_place(sub.points(), &mut scratch);
    let windows = &table_entries(full.points(), full.values(), k)[k];
    let lo = windows.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = windows.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let slack = 1e-12 * lo.abs().max(hi.abs());
    Ok(value >= lo - slack && value <= hi + slack)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sf(points: &[f64], values: &[f64]) -> SampledFunction {
        SampledFunction::new(points.to_vec(), values.to_vec()).unwrap()
    }

    #[test]
    fn recursive_examples() {
        assert_eq!(divdiff_recursive(&[0.0, 1.0, 2.0], &[0.0, 1.0, 4.0]).unwrap(), 1.0);
        assert_eq!(divdiff_recursive(&[0.0, 1.0], &[3.0, 3.0]).unwrap(), 0.0);
        assert_eq!(divdiff_recursive(&[0.0, 1.0, 3.0], &[0.0, 1.0, 9.0]).unwrap(), 1.0);
    }

    #[test]
    fn sum_examples() {
        assert_eq!(divdiff_sum(&[0.0, 1.0, 2.0], &[0.0, 1.0, 4.0]).unwrap(), 1.0);
        assert_eq!(divdiff_sum(&[0.0, 2.0], &[0.0, 4.0]).unwrap(), 2.0);
    }

    #[test]
    fn rejects_bad_points() {
        assert!(matches!(
            divdiff_recursive(&[0.0, 0.0], &[1.0, 2.0]),
            Err(TraceError::InvalidInput(_))
        ));
        assert!(divdiff_sum(&[1.0, 0.0], &[1.0, 2.0]).is_err());
        assert!(SampledFunction::new(vec![0.0, 1e-13], vec![0.0, 0.0]).is_err());
        assert!(SampledFunction::new(vec![], vec![]).is_err());
        assert!(SampledFunction::new(vec![0.0], vec![1.0, 2.0]).is_err());
        assert!(SampledFunction::new(vec![0.0, f64::NAN], vec![1.0, 2.0]).is_err());
    }

    #[test]
    fn lagrange_examples() {
        let line = lagrange_polynomial(&sf(&[0.0, 1.0], &[0.0, 1.0])).unwrap();
        assert_eq!(line.pieces()[0], vec![0.0, 1.0]);
        let sq = lagrange_polynomial(&sf(&[0.0, 1.0, 2.0], &[0.0, 1.0, 4.0])).unwrap();
        assert_eq!(sq.pieces()[0], vec![0.0, 0.0, 1.0]);
        assert_eq!(sq.evaluate(3.0), 9.0);
    }

    #[test]
    fn newton_form_recentres() {
        let c = newton_coefficients(&[0.0, 1.0, 2.0], &[0.0, 1.0, 4.0], 1.0);
        // x^2 = 1 + 2u + u^2 with u = x - 1
        for (got, want) in c.iter().zip([1.0, 2.0, 1.0]) {
            assert!((got - want).abs() < 1e-15);
        }
    }

    #[test]
    fn table_examples() {
        let t = build_table(&sf(&[0.0, 1.0, 2.0], &[0.0, 1.0, 4.0]), 2).unwrap();
        assert_eq!(t.get(2, 0), 1.0);
        assert_eq!(t.order(1), &[1.0, 3.0]);
        assert_eq!(t.order(0), &[0.0, 1.0, 4.0]);
        let t0 = build_table(&sf(&[0.0, 1.0], &[5.0, 6.0]), 0).unwrap();
        assert_eq!(t0.order(0), &[5.0, 6.0]);
        assert!(build_table(&sf(&[0.0, 1.0], &[5.0, 6.0]), 2).is_err());
    }

    #[test]
    fn gap_convention() {
        let s = sf(&[0.0, 0.5, 3.0], &[0.0; 3]);
        assert_eq!(s.gap(0, 1), ExtendedGap::Finite(0.5));
        assert!(s.gap(1, 3).is_infinite());
        assert_eq!(s.gap(1, 3).min_one(), 1.0);
        assert_eq!(s.gap(0, 1).min_one(), 0.5);
    }

    #[test]
    fn wide_difference_two_points() {
        let c = reduce_wide_difference(&sf(&[0.0, 5.0], &[1.0, 7.0])).unwrap();
        assert_eq!((c.order, c.start), (0, 1));
        assert!((c.bound - 2.0 * 7.0 / 5.0).abs() < 1e-15);
        let c = reduce_wide_difference(&sf(&[0.0, 5.0], &[-7.0, 1.0])).unwrap();
        assert_eq!((c.order, c.start), (0, 0));
        assert!((c.bound - 2.0 * 7.0 / 5.0).abs() < 1e-15);
    }

    #[test]
    fn wide_difference_preconditions() {
        assert!(matches!(
            reduce_wide_difference(&sf(&[0.0, 0.5], &[1.0, 2.0])),
            Err(TraceError::Precondition(_))
        ));
        assert!(reduce_wide_difference(&sf(&[0.0], &[1.0])).is_err());
    }

    #[test]
    fn wide_difference_ties_prefer_right() {
        let c = reduce_wide_difference(&sf(&[0.0, 2.0], &[-3.0, 3.0])).unwrap();
        assert_eq!(c.start, 1);
    }

    #[test]
    fn hull_check_examples() {
        let full = sf(&[0.0, 0.4, 1.1, 2.0, 3.5], &[1.0, -2.0, 0.5, 4.0, -1.0]);
        assert!(convex_hull_check(&full, &[1, 2, 3], 2).unwrap());
        assert!(convex_hull_check(&full, &[3], 0).unwrap());
        assert!(convex_hull_check(&full, &[0, 2, 4], 2).unwrap());
        assert!(convex_hull_check(&full, &[0, 2], 2).is_err());
        assert!(convex_hull_check(&full, &[0, 2, 9], 2).is_err());
    }
}
