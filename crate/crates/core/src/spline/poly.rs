//! Dense monomial helpers. Coefficients are stored lowest degree first,
//! in a local variable `u = x - center`.

pub(crate) fn horner(coeffs: &[f64], u: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * u + c)
}

pub(crate) fn derivative(coeffs: &[f64]) -> Vec<f64> {
    if coeffs.len() <= 1 {
        return vec![0.0];
    }
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| k as f64 * c)
        .collect()
}

/// Value of the `order`-th derivative at `u`.
pub(crate) fn derivative_at(coeffs: &[f64], order: usize, u: f64) -> f64 {
    if order >= coeffs.len() {
        return 0.0;
    }
    let mut acc = 0.0;
    for k in (order..coeffs.len()).rev() {
        acc = acc * u + coeffs[k] * falling_factorial(k, order);
    }
    acc
}

/// `k (k-1) ... (k-j+1)`.
pub(crate) fn falling_factorial(k: usize, j: usize) -> f64 {
    ((k + 1 - j)..=k).fold(1.0, |acc, t| acc * t as f64)
}

pub(crate) fn factorial(k: usize) -> f64 {
    (1..=k).fold(1.0, |acc, t| acc * t as f64)
}

/// Re-centres a polynomial: returns `q` with `q(v) = p(v + delta)`.
pub(crate) fn taylor_shift(coeffs: &[f64], delta: f64) -> Vec<f64> {
    let mut c = coeffs.to_vec();
    if delta == 0.0 {
        return c;
    }
    let n = c.len();
    for i in 0..n {
        for j in (i..n.saturating_sub(1)).rev() {
            c[j] += delta * c[j + 1];
        }
    }
    c
}

/// Multiplies by `(u - root)` in place.
pub(crate) fn mul_linear(coeffs: &mut Vec<f64>, root: f64) {
    coeffs.push(0.0);
    for k in (0..coeffs.len()).rev() {
        let lower = if k > 0 { coeffs[k - 1] } else { 0.0 };
        coeffs[k] = lower - root * coeffs[k];
    }
}

pub(crate) fn is_zero(coeffs: &[f64]) -> bool {
    coeffs.iter().all(|&c| c == 0.0)
}

/// Effective degree ignoring trailing zero coefficients; `None` for the zero polynomial.
pub(crate) fn effective_degree(coeffs: &[f64]) -> Option<usize> {
    coeffs.iter().rposition(|&c| c != 0.0)
}

/// Integral of `p(u)^2` over `[0, h]` in closed form.
#[cfg(test)]
pub(crate) fn integral_of_square(coeffs: &[f64], h: f64) -> f64 {
    let mut total = 0.0;
    for (i, &a) in coeffs.iter().enumerate() {
        for (j, &b) in coeffs.iter().enumerate() {
            let e = (i + j + 1) as i32;
            total += a * b * h.powi(e) / e as f64;
        }
    }
    total
}

/// Real roots of `p` in `[0, h]`, sorted. Roots of the derivative split the
/// interval into monotone segments, and each sign change is refined by
/// bisection. Touching (even multiplicity) roots show up as critical points.
pub(crate) fn real_roots(coeffs: &[f64], h: f64) -> Vec<f64> {
    let Some(deg) = effective_degree(coeffs) else {
        return Vec::new();
    };
    if deg == 0 {
        return Vec::new();
    }
    if deg == 1 {
        let r = -coeffs[0] / coeffs[1];
        return if (0.0..=h).contains(&r) { vec![r] } else { Vec::new() };
    }
    let mut nodes = vec![0.0];
    nodes.extend(real_roots(&derivative(&coeffs[..=deg]), h));
    nodes.push(h);
    nodes.dedup();
    let mut roots = Vec::new();
    for w in nodes.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (fa, fb) = (horner(coeffs, a), horner(coeffs, b));
        if fa == 0.0 {
            roots.push(a);
            continue;
        }
        if fa.signum() != fb.signum() && fb != 0.0 {
            roots.push(bisect(coeffs, a, b, fa));
        }
    }
    if horner(coeffs, h) == 0.0 {
        roots.push(h);
    }
    roots.dedup();
    roots
}

/// Critical points of `p` in the open interval `(0, h)`.
pub(crate) fn critical_points(coeffs: &[f64], h: f64) -> Vec<f64> {
    real_roots(&derivative(coeffs), h)
        .into_iter()
        .filter(|&u| u > 0.0 && u < h)
        .collect()
}

fn bisect(coeffs: &[f64], mut a: f64, mut b: f64, mut fa: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let fm = horner(coeffs, mid);
        if fm == 0.0 {
            return mid;
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}
