use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::poly;
use super::PiecewisePolynomial;
use crate::trace_functionals::{abs_pow, Exponent};
use crate::{Result, TraceError};

const MAX_RULE: usize = 64;
const ADAPTIVE_RULE: usize = 10;
const MAX_DEPTH: u32 = 30;

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    fn compute(n: usize) -> Self {
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    /// Rule with `n` points, `1 <= n <= 64`; exact for degree `2n - 1`.
    pub fn get(n: usize) -> &'static GaussRule {
        static RULES: OnceLock<Vec<GaussRule>> = OnceLock::new();
        let rules = RULES.get_or_init(|| (1..=MAX_RULE).map(GaussRule::compute).collect());
        &rules[n.clamp(1, MAX_RULE) - 1]
    }

    /// Integral of `f` over `[a, b]`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, a: f64, b: f64, f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Bisects until the two-half estimate agrees with the parent to `eps`,
/// an absolute error budget that is split between the halves.
fn adaptive<F: Fn(f64) -> f64 + Copy>(f: F, a: f64, b: f64, whole: f64, eps: f64, depth: u32) -> f64 {
    let rule = GaussRule::get(ADAPTIVE_RULE);
    let mid = 0.5 * (a + b);
    let left = rule.integrate(a, mid, f);
    let right = rule.integrate(mid, b, f);
    let halves = left + right;
    if depth == 0 || (halves - whole).abs() <= eps {
        return halves;
    }
    adaptive(f, a, mid, left, 0.5 * eps, depth - 1) + adaptive(f, mid, b, right, 0.5 * eps, depth - 1)
}

fn is_even_integer(p: f64) -> bool {
    p.fract() == 0.0 && (p as i64) % 2 == 0
}

/// `∫_0^h |c(u)|^p du`.
fn piece_integral(c: &[f64], h: f64, p: f64, quad_tol: f64) -> f64 {
    let Some(deg) = poly::effective_degree(c) else {
        return 0.0;
    };
    let c = &c[..=deg];
    let f = |u: f64| abs_pow(poly::horner(c, u), p);
    if is_even_integer(p) {
        let n = ((deg as f64 * p + 1.0) / 2.0).ceil() as usize;
        return GaussRule::get(n.max(1)).integrate(0.0, h, f);
    }
    // |c|^p is only finitely smooth at sign changes: split there.
    let mut nodes = vec![0.0];
    nodes.extend(poly::real_roots(c, h));
    nodes.extend(poly::critical_points(c, h));
    nodes.push(h);
    nodes.sort_by(|a, b| a.total_cmp(b));
    nodes.dedup();
    let rule = GaussRule::get(ADAPTIVE_RULE);
    let segments: Vec<(f64, f64, f64)> = nodes
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| (w[0], w[1], rule.integrate(w[0], w[1], f)))
        .collect();
    // The error budget is shared across the piece in proportion to length, so
    // slivers next to a double root do not chase a vanishing target.
    // Relative tolerances below a few ulps cannot be met through rounding.
    let total: f64 = segments.iter().map(|s| s.2.abs()).sum();
    let density = quad_tol.max(64.0 * f64::EPSILON) * total / h;
    segments
        .into_iter()
        .map(|(a, b, whole)| {
            let eps = (density * (b - a)).max(f64::MIN_POSITIVE);
            adaptive(f, a, b, whole, eps, MAX_DEPTH)
        })
        .sum()
}

fn tail_sup(c: &[f64], side: &str) -> Result<f64> {
    match poly::effective_degree(c) {
        None => Ok(0.0),
        Some(0) => Ok(c[0].abs()),
        Some(_) => Err(TraceError::Domain(format!("{side} tail is unbounded"))),
    }
}

/// `L^p(R)` norm of a piecewise polynomial.
///
/// Even integer `p` uses a Gauss rule of sufficient order, so the result is
/// exact up to rounding. Other finite `p` split each piece at roots and
/// critical points and refine adaptively to relative `quad_tol`. `p = ∞`
/// scans endpoints and critical points, which gives the exact maximum.
pub fn lp_norm(f: &PiecewisePolynomial, p: Exponent, quad_tol: f64) -> Result<f64> {
    match p {
        Exponent::Infinite => {
            let mut best = tail_sup(f.left_tail(), "left")?.max(tail_sup(f.right_tail(), "right")?);
            for (j, c) in f.pieces().iter().enumerate() {
                let h = f.piece_width(j);
                let candidates = poly::critical_points(c, h);
                for u in [0.0, h].into_iter().chain(candidates) {
                    best = best.max(poly::horner(c, u).abs());
                }
            }
            Ok(best)
        }
        Exponent::Finite(p) => Ok(abs_pow(integral_of_power(f, p, quad_tol)?, 1.0 / p)),
    }
}

/// `∫_R |F|^p` for finite `p >= 1`, without the final root.
pub(crate) fn integral_of_power(f: &PiecewisePolynomial, p: f64, quad_tol: f64) -> Result<f64> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(TraceError::InvalidParameter(format!(
            "L^p norm needs finite p >= 1, got {p}"
        )));
    }
    if !f.has_zero_tails() {
        return Err(TraceError::Domain(
            "nonzero polynomial tail is not p-integrable".into(),
        ));
    }
    Ok(f.pieces()
        .iter()
        .enumerate()
        .map(|(j, c)| piece_integral(c, f.piece_width(j), p, quad_tol))
        .sum())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormReport {
    /// `‖F^(k)‖_p` for `k = 0..=m`.
    pub lp_norms: Vec<f64>,
    /// `Σ_k ‖F^(k)‖_p`, the `W^m_p` norm.
    pub w_norm: f64,
    /// `‖F^(m)‖_p`, the homogeneous `L^m_p` seminorm.
    pub l_homog: f64,
}

pub fn sobolev_norm(
    f: &PiecewisePolynomial,
    m: usize,
    p: Exponent,
    quad_tol: f64,
) -> Result<NormReport> {
    let mut lp_norms = Vec::with_capacity(m + 1);
    let mut d = f.clone();
    for k in 0..=m {
        if k > 0 {
            d = d.differentiate();
        }
        lp_norms.push(lp_norm(&d, p, quad_tol)?);
    }
    Ok(NormReport {
        w_norm: lp_norms.iter().sum(),
        l_homog: lp_norms[m],
        lp_norms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bump(coeffs: Vec<f64>) -> PiecewisePolynomial {
        PiecewisePolynomial::new(vec![0.0, 1.0], vec![coeffs], vec![0.0], vec![0.0]).unwrap()
    }

    #[test]
    fn gauss_rules_are_exact() {
        for n in 1..20 {
            let rule = GaussRule::get(n);
            assert!((rule.weights.iter().sum::<f64>() - 2.0).abs() < 1e-13);
            let deg = 2 * n - 1;
            let got = rule.integrate(0.0, 1.0, |x| x.powi(deg as i32));
            assert!((got - 1.0 / (deg as f64 + 1.0)).abs() < 1e-13, "n={n}");
        }
    }

    #[test]
    fn identity_on_unit_interval() {
        let f = bump(vec![0.0, 1.0]);
        let n2 = lp_norm(&f, Exponent::Finite(2.0), 1e-12).unwrap();
        assert!((n2 - (1.0f64 / 3.0).sqrt()).abs() < 1e-15);
        // ∫ x^1.5 = 1/2.5
        let n15 = lp_norm(&f, Exponent::Finite(1.5), 1e-12).unwrap();
        assert!((n15 - 0.4f64.powf(1.0 / 1.5)).abs() < 1e-12);
    }

    #[test]
    fn sup_norm_uses_critical_points() {
        let f = bump(vec![0.0, 1.0, -1.0]);
        assert_eq!(lp_norm(&f, Exponent::Infinite, 0.0).unwrap(), 0.25);
    }

    #[test]
    fn fractional_power_across_a_root() {
        // ∫_0^1 |x - 1/2|^1.5 = 2 * (1/2)^2.5 / 2.5
        let f = bump(vec![-0.5, 1.0]);
        let exact = 2.0 * 0.5f64.powf(2.5) / 2.5;
        let got = lp_norm(&f, Exponent::Finite(1.5), 1e-12).unwrap().powf(1.5);
        assert!((got - exact).abs() < 1e-12 * exact);
    }

    #[test]
    fn nonzero_tails_are_not_integrable() {
        let f = PiecewisePolynomial::from_polynomial(vec![1.0], 0.0, 1.0).unwrap();
        assert!(matches!(
            lp_norm(&f, Exponent::Finite(2.0), 1e-10),
            Err(TraceError::Domain(_))
        ));
        assert_eq!(lp_norm(&f, Exponent::Infinite, 0.0).unwrap(), 1.0);
        let g = PiecewisePolynomial::from_polynomial(vec![0.0, 1.0], 0.0, 1.0).unwrap();
        assert!(lp_norm(&g, Exponent::Infinite, 0.0).is_err());
    }

    #[test]
    fn sobolev_norm_of_identity_piece() {
        let f = bump(vec![0.0, 1.0]);
        let r = sobolev_norm(&f, 1, Exponent::Finite(2.0), 1e-12).unwrap();
        assert!((r.w_norm - ((1.0f64 / 3.0).sqrt() + 1.0)).abs() < 1e-14);
        assert_eq!(r.l_homog, r.lp_norms[1]);
        let z = sobolev_norm(&bump(vec![0.0]), 2, Exponent::Finite(3.0), 1e-12).unwrap();
        assert_eq!(z.lp_norms, vec![0.0; 3]);
    }

    #[test]
    fn gauss_matches_closed_form_square() {
        let c = vec![0.3, -1.2, 0.7, 2.5, -0.4, 0.05];
        let h = 1.7;
        let f = PiecewisePolynomial::new(vec![0.0, h], vec![c.clone()], vec![0.0], vec![0.0]).unwrap();
        let got = lp_norm(&f, Exponent::Finite(2.0), 0.0).unwrap().powi(2);
        let exact = poly::integral_of_square(&c, h);
        assert!((got - exact).abs() <= 1e-12 * exact);
    }
}
