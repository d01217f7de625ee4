use serde::Serialize;

use crate::divided_differences::SampledFunction;
use crate::{Result, TraceError};

/// Closed truncation window `[lo, hi]` for the unbounded gaps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Window {
    pub lo: f64,
    pub hi: f64,
}

impl Window {
    /// `[min E - pad, max E + pad]`.
    pub fn around(points: &[f64], pad: f64) -> Self {
        Self {
            lo: points[0] - pad,
            hi: points[points.len() - 1] + pad,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }
}

/// A complementary interval of `E`; unbounded ends are `±∞`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Gap {
    pub start: f64,
    pub end: f64,
}

impl Gap {
    pub fn length(&self) -> f64 {
        self.end - self.start
    }

    pub fn is_bounded(&self) -> bool {
        self.start.is_finite() && self.end.is_finite()
    }
}

/// The gaps of `E`, the long ones (`|J| > 4`), and the lattice `G` placed in
/// them.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapLattice {
    pub gaps: Vec<Gap>,
    pub long_gaps: Vec<Gap>,
    /// Sorted coordinates of `G`.
    pub lattice_points: Vec<f64>,
    pub window: Window,
}

impl GapLattice {
    pub fn contains_lattice_point(&self, x: f64) -> bool {
        self.lattice_points
            .binary_search_by(|v| v.total_cmp(&x))
            .is_ok()
    }
}

/// Places lattice points in every gap of `E` longer than 4.
///
/// A bounded gap `(a, b)` gets `n_J = ⌊|J| / 2⌋` equal steps of length
/// `ℓ(J) = |J| / n_J ∈ [2, 3]` and the interior points `a + ℓ(J) n`,
/// `n = 1..n_J - 1`. The unbounded gaps get points at spacing 2 from the
/// extreme points of `E` outwards, kept while inside `window`.
pub fn build_gap_lattice(points: &[f64], window: Window) -> Result<GapLattice> {
    if points.is_empty() {
        return Err(TraceError::InvalidInput("the point set is empty".into()));
    }
    if !(window.lo <= points[0] && window.hi >= points[points.len() - 1]) {
        return Err(TraceError::InvalidParameter(
            "the truncation window must contain every point".into(),
        ));
    }
    let first = points[0];
    let last = points[points.len() - 1];
    let mut gaps = vec![Gap { start: f64::NEG_INFINITY, end: first }];
    gaps.extend(points.windows(2).map(|w| Gap { start: w[0], end: w[1] }));
    gaps.push(Gap { start: last, end: f64::INFINITY });

    let long_gaps: Vec<Gap> = gaps.iter().copied().filter(|g| g.length() > 4.0).collect();

    let mut lattice = Vec::new();
    let mut n = 1;
    while first - 2.0 * n as f64 >= window.lo {
        lattice.push(first - 2.0 * n as f64);
        n += 1;
    }
    lattice.reverse();
    for gap in long_gaps.iter().filter(|g| g.is_bounded()) {
        let len = gap.length();
        let steps = (len / 2.0).floor() as usize;
        let step = len / steps as f64;
        lattice.extend((1..steps).map(|n| gap.start + step * n as f64));
    }
    let mut n = 1;
    while last + 2.0 * n as f64 <= window.hi {
        lattice.push(last + 2.0 * n as f64);
        n += 1;
    }
    Ok(GapLattice { gaps, long_gaps, lattice_points: lattice, window })
}

/// Which set a knot of `Ẽ = E ∪ G` came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum KnotOrigin {
    Data,
    Lattice,
}

/// `f` extended by zero to `Ẽ = E ∪ G`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZeroExtension {
    pub function: SampledFunction,
    pub origin: Vec<KnotOrigin>,
}

pub fn zero_extend(s: &SampledFunction, lattice: &GapLattice) -> Result<ZeroExtension> {
    let mut merged: Vec<(f64, f64, KnotOrigin)> = s
        .points()
        .iter()
        .zip(s.values())
        .map(|(&x, &v)| (x, v, KnotOrigin::Data))
        .chain(lattice.lattice_points.iter().map(|&y| (y, 0.0, KnotOrigin::Lattice)))
        .collect();
    merged.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (points, values): (Vec<f64>, Vec<f64>) = merged.iter().map(|t| (t.0, t.1)).unzip();
    let function = SampledFunction::new(points, values).map_err(|e| {
        TraceError::Numerical(format!("lattice collides with the data points: {e}"))
    })?;
    Ok(ZeroExtension {
        function,
        origin: merged.iter().map(|t| t.2).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interior_gap_of_ten() {
        let pts = [0.0, 10.0];
        let lat = build_gap_lattice(&pts, Window { lo: 0.0, hi: 10.0 }).unwrap();
        assert_eq!(lat.lattice_points, vec![2.0, 4.0, 6.0, 8.0]);
        assert_eq!(lat.long_gaps.len(), 3);
    }

    #[test]
    fn short_gap_gets_nothing() {
        let lat = build_gap_lattice(&[0.0, 3.0], Window { lo: 0.0, hi: 3.0 }).unwrap();
        assert!(lat.lattice_points.is_empty());
    }

    #[test]
    fn unbounded_gaps_are_truncated() {
        let lat = build_gap_lattice(&[0.0], Window::around(&[0.0], 9.0)).unwrap();
        assert_eq!(lat.lattice_points, vec![-8.0, -6.0, -4.0, -2.0, 2.0, 4.0, 6.0, 8.0]);
    }

    #[test]
    fn zero_fill_example() {
        let s = SampledFunction::new(vec![0.0, 10.0], vec![1.0, 1.0]).unwrap();
        let lat = build_gap_lattice(s.points(), Window { lo: 0.0, hi: 10.0 }).unwrap();
        let z = zero_extend(&s, &lat).unwrap();
        assert_eq!(z.function.points(), &[0.0, 2.0, 4.0, 6.0, 8.0, 10.0]);
        assert_eq!(z.function.values(), &[1.0, 0.0, 0.0, 0.0, 0.0, 1.0]);
        assert_eq!(z.origin[0], KnotOrigin::Data);
        assert_eq!(z.origin[1], KnotOrigin::Lattice);
        assert_eq!(z.function.len(), s.len() + lat.lattice_points.len());
    }

    #[test]
    fn window_must_cover_points() {
        assert!(build_gap_lattice(&[0.0, 5.0], Window { lo: 1.0, hi: 5.0 }).is_err());
    }
}
