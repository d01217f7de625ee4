//! Gaussian elimination with partial pivoting for band matrices.
//!
//! The matrix is held densely but elimination only touches the band
//! `[row - lower, row + lower + upper]`, which is where pivoting can move
//! fill-in.

use crate::{Result, TraceError};

pub(crate) struct BandedSystem {
    n: usize,
    a: Vec<f64>,
    rhs: Vec<f64>,
}

impl BandedSystem {
    pub(crate) fn new(n: usize) -> Self {
        Self {
            n,
            a: vec![0.0; n * n],
            rhs: vec![0.0; n],
        }
    }

    pub(crate) fn set(&mut self, row: usize, col: usize, value: f64) {
        self.a[row * self.n + col] = value;
    }

    pub(crate) fn set_rhs(&mut self, row: usize, value: f64) {
        self.rhs[row] = value;
    }

    fn bandwidths(&self) -> (usize, usize) {
        let (mut lower, mut upper) = (0, 0);
        for r in 0..self.n {
            let row = &self.a[r * self.n..(r + 1) * self.n];
            if let Some(first) = row.iter().position(|&v| v != 0.0) {
                lower = lower.max(r.saturating_sub(first));
            }
            if let Some(last) = row.iter().rposition(|&v| v != 0.0) {
                upper = upper.max(last.saturating_sub(r));
            }
        }
        (lower, upper)
    }

    pub(crate) fn solve(mut self) -> Result<Vec<f64>> {
        let n = self.n;
        let (lower, upper) = self.bandwidths();
        let reach = lower + upper;
        let scale = self.a.iter().fold(0.0f64, |s, v| s.max(v.abs()));
        let tiny = scale * 1e-14 * n as f64;
        for k in 0..n {
            let last_row = (k + lower).min(n - 1);
            let last_col = (k + reach).min(n - 1);
            let pivot_row = (k..=last_row)
                .max_by(|&i, &j| self.a[i * n + k].abs().total_cmp(&self.a[j * n + k].abs()))
                .unwrap();
            let pivot = self.a[pivot_row * n + k];
            if pivot.abs() <= tiny || !pivot.is_finite() {
                return Err(TraceError::Numerical(format!(
                    "singular spline system at column {k}"
                )));
            }
            if pivot_row != k {
                for c in k..=last_col {
                    self.a.swap(k * n + c, pivot_row * n + c);
                }
                self.rhs.swap(k, pivot_row);
            }
            for i in (k + 1)..=last_row {
                let factor = self.a[i * n + k] / pivot;
                if factor == 0.0 {
                    continue;
                }
                self.a[i * n + k] = 0.0;
                for c in (k + 1)..=last_col {
                    self.a[i * n + c] -= factor * self.a[k * n + c];
                }
                self.rhs[i] -= factor * self.rhs[k];
            }
        }
        let mut x = vec![0.0; n];
        for k in (0..n).rev() {
            let last_col = (k + reach).min(n - 1);
            let mut acc = self.rhs[k];
            for c in (k + 1)..=last_col {
                acc -= self.a[k * n + c] * x[c];
            }
            x[k] = acc / self.a[k * n + k];
        }
        Ok(x)
    }
}
