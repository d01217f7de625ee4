use serde::{Deserialize, Serialize};

use super::poly;
use crate::{Result, TraceError};

/// A function on the whole line given by one polynomial per breakpoint
/// interval plus a polynomial tail on each side.
///
/// Piece `j` lives on `[b_j, b_{j+1}]` and is stored in the local variable
/// `u = x - b_j`. The left tail is centred at `b_0`, the right tail at the
/// last breakpoint. The last piece owns its right endpoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPiecewise")]
pub struct PiecewisePolynomial {
    breakpoints: Vec<f64>,
    pieces: Vec<Vec<f64>>,
    left_tail: Vec<f64>,
    right_tail: Vec<f64>,
}

#[derive(Deserialize)]
struct RawPiecewise {
    breakpoints: Vec<f64>,
    pieces: Vec<Vec<f64>>,
    left_tail: Vec<f64>,
    right_tail: Vec<f64>,
}

impl TryFrom<RawPiecewise> for PiecewisePolynomial {
    type Error = TraceError;

    fn try_from(raw: RawPiecewise) -> Result<Self> {
        Self::new(raw.breakpoints, raw.pieces, raw.left_tail, raw.right_tail)
    }
}

fn nonempty(mut c: Vec<f64>) -> Vec<f64> {
    if c.is_empty() {
        c.push(0.0);
    }
    c
}

impl PiecewisePolynomial {
    pub fn new(
        breakpoints: Vec<f64>,
        pieces: Vec<Vec<f64>>,
        left_tail: Vec<f64>,
        right_tail: Vec<f64>,
    ) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(TraceError::InvalidInput(
                "a piecewise polynomial needs at least two breakpoints".into(),
            ));
        }
        if breakpoints.iter().any(|b| !b.is_finite())
            || breakpoints.windows(2).any(|w| w[0] >= w[1])
        {
            return Err(TraceError::InvalidInput(
                "breakpoints must be finite and strictly increasing".into(),
            ));
        }
        if pieces.len() != breakpoints.len() - 1 {
            return Err(TraceError::InvalidInput(format!(
                "{} breakpoints need {} pieces, got {}",
                breakpoints.len(),
                breakpoints.len() - 1,
                pieces.len()
            )));
        }
        let all_finite = pieces
            .iter()
            .chain([&left_tail, &right_tail])
            .flat_map(|c| c.iter())
            .all(|c| c.is_finite());
        if !all_finite {
            return Err(TraceError::InvalidInput("non-finite coefficient".into()));
        }
        Ok(Self {
            breakpoints,
            pieces: pieces.into_iter().map(nonempty).collect(),
            left_tail: nonempty(left_tail),
            right_tail: nonempty(right_tail),
        })
    }

    /// A single global polynomial, stored on `[lo, hi]` with matching tails.
    /// `coeffs` are centred at `lo`.
    pub fn from_polynomial(coeffs: Vec<f64>, lo: f64, hi: f64) -> Result<Self> {
        let coeffs = nonempty(coeffs);
        let right = poly::taylor_shift(&coeffs, hi - lo);
        Self::new(vec![lo, hi], vec![coeffs.clone()], coeffs, right)
    }

    /// The zero function with the given breakpoints.
    pub fn zero(breakpoints: Vec<f64>) -> Result<Self> {
        let n = breakpoints.len().saturating_sub(1);
        Self::new(breakpoints, vec![vec![0.0]; n], vec![0.0], vec![0.0])
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[Vec<f64>] {
        &self.pieces
    }

    pub fn left_tail(&self) -> &[f64] {
        &self.left_tail
    }

    pub fn right_tail(&self) -> &[f64] {
        &self.right_tail
    }

    pub fn first_breakpoint(&self) -> f64 {
        self.breakpoints[0]
    }

    pub fn last_breakpoint(&self) -> f64 {
        *self.breakpoints.last().unwrap()
    }

    /// Length of piece `j`.
    pub fn piece_width(&self, j: usize) -> f64 {
        self.breakpoints[j + 1] - self.breakpoints[j]
    }

    /// Largest stored degree over pieces and tails.
    pub fn degree(&self) -> usize {
        self.all_polys().map(|c| c.len() - 1).max().unwrap_or(0)
    }

    pub fn has_zero_tails(&self) -> bool {
        poly::is_zero(&self.left_tail) && poly::is_zero(&self.right_tail)
    }

    fn all_polys(&self) -> impl Iterator<Item = &Vec<f64>> {
        self.pieces
            .iter()
            .chain([&self.left_tail, &self.right_tail])
    }

    /// The polynomial active at `x` and the centre of its local variable.
    fn locate(&self, x: f64) -> (&[f64], f64) {
        let first = self.first_breakpoint();
        let last = self.last_breakpoint();
        if x < first {
            (&self.left_tail, first)
        } else if x > last {
            (&self.right_tail, last)
        } else {
            let j = self
                .breakpoints
                .partition_point(|&b| b <= x)
                .saturating_sub(1)
                .min(self.pieces.len() - 1);
            (&self.pieces[j], self.breakpoints[j])
        }
    }

    pub fn evaluate(&self, x: f64) -> f64 {
        let (c, centre) = self.locate(x);
        poly::horner(c, x - centre)
    }

    /// Value of the `order`-th derivative at `x`, evaluated in place without
    /// building the derivative.
    pub fn evaluate_derivative(&self, x: f64, order: usize) -> f64 {
        let (c, centre) = self.locate(x);
        poly::derivative_at(c, order, x - centre)
    }

    pub fn differentiate(&self) -> Self {
        Self {
            breakpoints: self.breakpoints.clone(),
            pieces: self.pieces.iter().map(|c| poly::derivative(c)).collect(),
            left_tail: poly::derivative(&self.left_tail),
            right_tail: poly::derivative(&self.right_tail),
        }
    }

    pub fn nth_derivative(&self, order: usize) -> Self {
        (0..order).fold(self.clone(), |f, _| f.differentiate())
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        let scale = |c: &Vec<f64>| c.iter().map(|v| alpha * v).collect::<Vec<_>>();
        Self {
            breakpoints: self.breakpoints.clone(),
            pieces: self.pieces.iter().map(scale).collect(),
            left_tail: scale(&self.left_tail),
            right_tail: scale(&self.right_tail),
        }
    }

    /// `a * self + b * other` on the union of both breakpoint sets.
    pub fn linear_combination(&self, a: f64, other: &Self, b: f64) -> Self {
        let mut breaks: Vec<f64> = self
            .breakpoints
            .iter()
            .chain(other.breakpoints.iter())
            .copied()
            .collect();
        breaks.sort_by(|x, y| x.total_cmp(y));
        breaks.dedup();

        let combine = |probe: f64, centre: f64| -> Vec<f64> {
            let (p, pc) = self.locate(probe);
            let (q, qc) = other.locate(probe);
            let p = poly::taylor_shift(p, centre - pc);
            let q = poly::taylor_shift(q, centre - qc);
            let n = p.len().max(q.len());
            (0..n)
                .map(|k| {
                    a * p.get(k).copied().unwrap_or(0.0) + b * q.get(k).copied().unwrap_or(0.0)
                })
                .collect()
        };
        let first = breaks[0];
        let last = *breaks.last().unwrap();
        let pieces = breaks
            .windows(2)
            .map(|w| combine(0.5 * (w[0] + w[1]), w[0]))
            .collect();
        let left = combine(first - 1.0, first);
        let right = combine(last + 1.0, last);
        Self {
            breakpoints: breaks,
            pieces,
            left_tail: left,
            right_tail: right,
        }
    }

    /// Smallest closed interval outside which the function vanishes
    /// identically, or `None` for the zero function. Unbounded when a tail is
    /// nonzero.
    pub fn support(&self) -> Option<(f64, f64)> {
        let lo = if !poly::is_zero(&self.left_tail) {
            f64::NEG_INFINITY
        } else {
            let j = self.pieces.iter().position(|c| !poly::is_zero(c))?;
            self.breakpoints[j]
        };
        let hi = if !poly::is_zero(&self.right_tail) {
            f64::INFINITY
        } else {
            match self.pieces.iter().rposition(|c| !poly::is_zero(c)) {
                Some(j) => self.breakpoints[j + 1],
                None => return Some((lo, lo)),
            }
        };
        Some((lo, hi))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("finite coefficients always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| TraceError::InvalidInput(e.to_string()))
    }

    /// One-sided derivative values `(left, right)` of the given order at
    /// breakpoint `j`. Tails supply the outer sides.
    pub(crate) fn one_sided(&self, j: usize, order: usize) -> (f64, f64) {
        let left = if j == 0 {
            poly::derivative_at(&self.left_tail, order, 0.0)
        } else {
            poly::derivative_at(&self.pieces[j - 1], order, self.piece_width(j - 1))
        };
        let right = if j == self.pieces.len() {
            poly::derivative_at(&self.right_tail, order, 0.0)
        } else {
            poly::derivative_at(&self.pieces[j], order, 0.0)
        };
        (left, right)
    }
}

/// Largest `r` such that derivatives of orders `0..=r` agree from both sides
/// at every breakpoint (the joins with the tails included), within
/// `tol * (1 + local magnitude)`. `None` when the function itself jumps.
pub fn smoothness_order(f: &PiecewisePolynomial, tol: f64) -> Option<usize> {
    let max_order = f.degree();
    let mut smooth = None;
    for order in 0..=max_order {
        let ok = (0..f.breakpoints.len()).all(|j| {
            let (l, r) = f.one_sided(j, order);
            (l - r).abs() <= tol * (1.0 + l.abs().max(r.abs()))
        });
        if !ok {
            break;
        }
        smooth = Some(order);
    }
    smooth
}
