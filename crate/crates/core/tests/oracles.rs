//! Functionals and splines checked against independent reference
//! computations written out here.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sobolev_trace::{
    extend, homogeneous_sequence_functional, homogeneous_variational_functional, lp_norm,
    natural_spline_min_energy, sharp_profile, sharp_value, smoothness_order, sobolev_norm,
    variational_functional, wmf_functional, Backend, Exponent, ExtensionConfig, GridSpec,
    PiecewisePolynomial, SampledFunction,
};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_sample(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> SampledFunction {
    loop {
        let mut xs: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..scale)).collect();
        xs.sort_by(f64::total_cmp);
        if xs.windows(2).all(|w| w[1] - w[0] >= 1e-2) {
            let vs = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            return SampledFunction::new(xs, vs).unwrap();
        }
    }
}

fn pow(x: f64, p: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        (p * x.abs().ln()).exp()
    }
}

/// Consecutive-window divided differences, overwriting `row` in place.
fn next_order(x: &[f64], row: &mut [f64], k: usize) {
    for i in 0..(x.len() - k) {
        row[i] = (row[i + 1] - row[i]) / (x[i + k] - x[i]);
    }
}

fn sequence_sum(x: &[f64], v: &[f64], m: usize, p: f64) -> f64 {
    let len = x.len();
    let mut row = v.to_vec();
    let mut sum = 0.0;
    for k in 0..=m.min(len - 1) {
        if k > 0 {
            next_order(x, &mut row, k);
        }
        for i in 0..(len - k) {
            let w = if i + m < len { (x[i + m] - x[i]).min(1.0) } else { 1.0 };
            sum += w * pow(row[i], p);
        }
    }
    sum
}

fn homogeneous_sum(x: &[f64], v: &[f64], m: usize, p: f64) -> f64 {
    let mut row = v.to_vec();
    for k in 1..=m {
        next_order(x, &mut row, k);
    }
    (0..x.len() - m).map(|i| (x[i + m] - x[i]) * pow(row[i], p)).sum()
}

fn top_difference(x: &[f64], v: &[f64]) -> f64 {
    let mut row = v.to_vec();
    for k in 1..x.len() {
        next_order(x, &mut row, k);
    }
    row[0]
}

/// Visits every increasing subsequence by include/exclude recursion.
fn subsequences(s: &SampledFunction, visit: &mut dyn FnMut(&[f64], &[f64])) {
    fn go(
        s: &SampledFunction,
        i: usize,
        xs: &mut Vec<f64>,
        vs: &mut Vec<f64>,
        visit: &mut dyn FnMut(&[f64], &[f64]),
    ) {
        if i == s.len() {
            if !xs.is_empty() {
                visit(xs, vs);
            }
            return;
        }
        go(s, i + 1, xs, vs, visit);
        xs.push(s.points()[i]);
        vs.push(s.values()[i]);
        go(s, i + 1, xs, vs, visit);
        xs.pop();
        vs.pop();
    }
    go(s, 0, &mut Vec::new(), &mut Vec::new(), visit);
}

fn oracle_variational(s: &SampledFunction, m: usize, p: Exponent) -> f64 {
    let mut best = 0.0f64;
    subsequences(s, &mut |x, v| match p {
        Exponent::Finite(q) if x.len() > m => best = best.max(pow(sequence_sum(x, v, m, q), 1.0 / q)),
        Exponent::Infinite if x.len() <= m + 1 => best = best.max(top_difference(x, v).abs()),
        _ => {}
    });
    best
}

fn oracle_homogeneous_variational(s: &SampledFunction, m: usize, p: Exponent) -> f64 {
    let mut best = 0.0f64;
    subsequences(s, &mut |x, v| match p {
        Exponent::Finite(q) if x.len() > m => best = best.max(pow(homogeneous_sum(x, v, m, q), 1.0 / q)),
        Exponent::Infinite if x.len() == m + 1 => best = best.max(top_difference(x, v).abs()),
        _ => {}
    });
    best
}

#[test]
fn variational_matches_recursive_enumeration_bit_for_bit() {
    let mut rng = rng(11);
    let exponents = [Exponent::Finite(1.5), Exponent::Finite(2.0), Exponent::Finite(3.7), Exponent::Infinite];
    for t in 0..120 {
        let m = 1 + t % 3;
        let n = rng.random_range(m + 1..=9);
        let s = random_sample(&mut rng, n, [2.0, 10.0][t % 2]);
        let p = exponents[(t / 3) % 4];
        let got = variational_functional(&s, m, p).unwrap().value;
        assert_eq!(got.to_bits(), oracle_variational(&s, m, p).to_bits(), "t={t}");
        let got = homogeneous_variational_functional(&s, m, p).unwrap().value;
        assert_eq!(got.to_bits(), oracle_homogeneous_variational(&s, m, p).to_bits(), "t={t}");
    }
}

#[test]
fn first_order_homogeneous_functionals_coincide() {
    let mut rng = rng(12);
    for t in 0..100 {
        let n = rng.random_range(2..=8);
        let s = random_sample(&mut rng, n, 5.0);
        let p = Exponent::Finite([1.5, 2.0, 4.0][t % 3]);
        let seq = homogeneous_sequence_functional(&s, 1, p).unwrap().value;
        let var = homogeneous_variational_functional(&s, 1, p).unwrap().value;
        assert!((var - seq).abs() <= 1e-12 * seq.max(1e-300), "t={t}: {var} vs {seq}");
    }
}

#[test]
fn natural_spline_hand_instance() {
    let s = SampledFunction::new(vec![0.0, 1.0, 3.0], vec![0.0, 1.0, 1.0]).unwrap();
    let (f, energy) = natural_spline_min_energy(&s, 1).unwrap();
    assert!((energy - 1.0).abs() < 1e-14);
    assert!((f.evaluate(0.5) - 0.5).abs() < 1e-14);
    assert!((f.evaluate(2.0) - 1.0).abs() < 1e-14);
}

/// `((x - a)(b - x))^m` on `[a, b]`, zero elsewhere: `C^{m-1}`, vanishing
/// outside `(a, b)`.
fn bump(a: f64, b: f64, m: usize) -> PiecewisePolynomial {
    let w = b - a;
    let mut coeffs = vec![0.0; 2 * m + 1];
    let mut binom = 1.0;
    for j in 0..=m {
        coeffs[m + j] = binom * w.powi((m - j) as i32) * if j % 2 == 0 { 1.0 } else { -1.0 };
        binom = binom * (m - j) as f64 / (j + 1) as f64;
    }
    PiecewisePolynomial::new(vec![a, b], vec![coeffs], vec![0.0], vec![0.0]).unwrap()
}

fn energy(f: &PiecewisePolynomial, m: usize) -> f64 {
    lp_norm(&f.nth_derivative(m), Exponent::Finite(2.0), 0.0).unwrap().powi(2)
}

#[test]
fn natural_spline_is_stationary_under_bumps() {
    let mut rng = rng(13);
    for t in 0..20 {
        let m = 1 + t % 3;
        let n = rng.random_range(m + 2..=9);
        let s = random_sample(&mut rng, n, 8.0);
        let (f, e) = natural_spline_min_energy(&s, m).unwrap();
        assert!((energy(&f, m) - e).abs() <= 1e-10 * e);
        let gap = rng.random_range(0..n - 1);
        let (x0, x1) = (s.points()[gap], s.points()[gap + 1]);
        let a = x0 + (x1 - x0) * rng.random_range(0.0..0.4);
        let b = x1 - (x1 - x0) * rng.random_range(0.0..0.4);
        let g = bump(a, b, m);
        assert!(s.points().iter().all(|&x| g.evaluate(x) == 0.0));
        let eps = 1e-3 * (e / energy(&g, m)).sqrt();
        let plus = energy(&f.linear_combination(1.0, &g, eps), m);
        let minus = energy(&f.linear_combination(1.0, &g, -eps), m);
        assert!(plus >= e * (1.0 - 1e-8) && minus >= e * (1.0 - 1e-8), "t={t}");
        // (E(F + eB) - E(F - eB)) / 4e is the cross term, zero at the minimum.
        let cross = (plus - minus) / (4.0 * eps);
        let scale = (e * energy(&g, m)).sqrt();
        assert!(cross.abs() <= 1e-8 * scale, "t={t}: cross {cross:e} vs {scale:e}");
    }
}

#[test]
fn natural_spline_is_smooth_and_quadratic() {
    let mut rng = rng(14);
    for t in 0..30 {
        let m = 1 + t % 3;
        let n = rng.random_range(m + 1..=10);
        let s = random_sample(&mut rng, n, 10.0);
        let g = SampledFunction::new(s.points().to_vec(), (0..n).map(|_| rng.random_range(-1.0..1.0)).collect())
            .unwrap();
        let (f, e) = natural_spline_min_energy(&s, m).unwrap();
        assert!(smoothness_order(&f, 1e-7).unwrap() >= 2 * m - 2, "t={t}");
        let (_, e_scaled) = natural_spline_min_energy(&s.scaled(-3.0), m).unwrap();
        assert!((e_scaled - 9.0 * e).abs() <= 1e-9 * e_scaled.max(1e-300));
        let (_, e_g) = natural_spline_min_energy(&g, m).unwrap();
        let (_, e_sum) = natural_spline_min_energy(&s.combine(1.0, &g, 1.0).unwrap(), m).unwrap();
        assert!(e_sum.sqrt() <= (e.sqrt() + e_g.sqrt()) * (1.0 + 1e-10));
    }
}

#[test]
fn natural_spline_reproduces_low_degree_polynomials() {
    let xs = vec![-1.0, 0.3, 0.9, 2.5, 4.0];
    for m in 1..=3 {
        let s = SampledFunction::from_fn(xs.clone(), |x| (0..m).map(|j| (j as f64 + 1.0) * x.powi(j as i32)).sum())
            .unwrap();
        let (f, e) = natural_spline_min_energy(&s, m).unwrap();
        assert!(e.abs() < 1e-18, "m={m}: {e}");
        for x in [-3.0f64, 0.0, 1.7, 6.0] {
            let exact: f64 = (0..m).map(|j| (j as f64 + 1.0) * x.powi(j as i32)).sum();
            assert!((f.evaluate(x) - exact).abs() < 1e-9 * (1.0 + exact.abs()), "m={m} x={x}");
        }
    }
}

#[test]
fn derivatives_match_central_differences() {
    let mut rng = rng(15);
    let h = 1e-5;
    for t in 0..20 {
        let m = 1 + t % 3;
        let s = random_sample(&mut rng, 6, 12.0);
        let backend = if t % 2 == 0 { Backend::Hermite } else { Backend::Natural2 };
        let f = extend(&s, &ExtensionConfig::new(m, Exponent::Finite(2.0)).with_backend(backend)).unwrap();
        let breaks = f.breakpoints().to_vec();
        let df = f.differentiate();
        for j in 0..breaks.len() - 1 {
            let (a, b) = (breaks[j], breaks[j + 1]);
            if b - a < 4.0 * h {
                continue;
            }
            let x = a + (b - a) * rng.random_range(0.1..0.9);
            let fd = (f.evaluate(x + h) - f.evaluate(x - h)) / (2.0 * h);
            let exact = df.evaluate(x);
            let scale = exact.abs().max(f.evaluate(x).abs()).max(1e-3);
            assert!((fd - exact).abs() <= 1e-6 * scale, "t={t}: {fd} vs {exact}");
            if m >= 2 {
                let fd2 = (f.evaluate(x + 1e-4) - 2.0 * f.evaluate(x) + f.evaluate(x - 1e-4)) / 1e-8;
                let exact2 = df.differentiate().evaluate(x);
                assert!((fd2 - exact2).abs() <= 1e-4 * exact2.abs().max(1.0), "t={t}: {fd2} vs {exact2}");
            }
        }
    }
}

#[test]
fn sobolev_norm_of_identity_on_unit_interval() {
    let f = PiecewisePolynomial::from_polynomial(vec![0.0, 1.0], 0.0, 1.0).unwrap();
    let f = PiecewisePolynomial::new(f.breakpoints().to_vec(), f.pieces().to_vec(), vec![0.0], vec![0.0]).unwrap();
    let r = sobolev_norm(&f, 1, Exponent::Finite(2.0), 1e-12).unwrap();
    assert!((r.w_norm - ((1.0f64 / 3.0).sqrt() + 1.0)).abs() < 1e-14);
    assert!(r.w_norm >= r.l_homog);
}

#[test]
fn sharp_profiles_are_constant_away_from_nodes() {
    let mut rng = rng(16);
    for t in 0..10 {
        let m = 1 + t % 2;
        let s = random_sample(&mut rng, 5, 6.0);
        let mut nodes: Vec<f64> = s.points().iter().flat_map(|&e| [e - 1.0, e, e + 1.0]).collect();
        nodes.sort_by(f64::total_cmp);
        for k in 0..m {
            let profile = sharp_profile(&s, m, k, GridSpec::with_h(0.05)).unwrap();
            for (w, v) in profile.grid.windows(2).zip(profile.values.windows(2)) {
                let crosses = nodes.iter().any(|&n| n > w[0] && n < w[1]);
                let at_node = nodes.contains(&w[0]) || nodes.contains(&w[1]);
                if !crosses && !at_node {
                    assert_eq!(v[0], v[1], "t={t} k={k} at {}", w[0]);
                }
            }
            assert!(profile.values.iter().all(|&v| v >= 0.0));
        }
    }
}

/// Lagrange interpolant of `s` at `x`, evaluated directly from the basis.
fn lagrange_at(s: &SampledFunction, x: f64) -> f64 {
    let xs = s.points();
    (0..xs.len())
        .map(|i| {
            let basis: f64 = (0..xs.len()).filter(|&j| j != i).map(|j| (x - xs[j]) / (xs[i] - xs[j])).product();
            s.values()[i] * basis
        })
        .sum()
}

#[test]
fn sharp_values_grow_with_the_point_set() {
    let mut rng = rng(17);
    for t in 0..30 {
        let m = 1 + t % 3;
        let s = random_sample(&mut rng, 4, 4.0);
        let extra = rng.random_range(-1.0..5.0);
        if s.points().iter().any(|&x| (x - extra).abs() < 1e-2) {
            continue;
        }
        let mut pts = s.points().to_vec();
        pts.push(extra);
        pts.sort_by(f64::total_cmp);
        let bigger = SampledFunction::from_fn(pts, |x| {
            s.points().iter().position(|&p| p == x).map_or_else(|| lagrange_at(&s, x), |i| s.values()[i])
        })
        .unwrap();
        for k in 0..=m {
            for _ in 0..5 {
                let x = rng.random_range(-2.0..6.0);
                let before = sharp_value(&s, m, k, x).unwrap();
                let after = sharp_value(&bigger, m, k, x).unwrap();
                assert!(after >= before, "t={t} k={k} x={x}: {after} < {before}");
            }
        }
    }
}

#[test]
fn sharp_quadrature_is_stable_under_refinement() {
    let mut rng = rng(18);
    for t in 0..10 {
        let m = 1 + t % 2;
        let s = SampledFunction::from_fn(
            {
                let r = random_sample(&mut rng, 6, 5.0);
                r.points().to_vec()
            },
            |x| (1.3 * x).sin() + 0.2 * x * x,
        )
        .unwrap();
        let p = Exponent::Finite(2.0);
        let coarse = wmf_functional(&s, m, p, GridSpec::with_h(0.1)).unwrap().value;
        let fine = wmf_functional(&s, m, p, GridSpec::with_h(0.05)).unwrap().value;
        assert!((coarse - fine).abs() <= 0.05 * fine, "t={t}: {coarse} vs {fine}");
    }
}

/// Frozen range of `energy^{1/2} / homogeneous functional` for `m = 2`,
/// `p = 2` on the fixed instances below.
const SECOND_ORDER_BAND: (f64, f64) = (1.643205565016798, 2.2392658516483532);

#[test]
fn second_order_energy_band() {
    let mut rng = rng(19);
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for t in 0..100 {
        let n = rng.random_range(3..=12);
        let s = random_sample(&mut rng, n, [2.0, 10.0, 50.0][t % 3]);
        let (_, e) = natural_spline_min_energy(&s, 2).unwrap();
        let h = homogeneous_sequence_functional(&s, 2, Exponent::Finite(2.0)).unwrap().value;
        let r = e.sqrt() / h;
        lo = lo.min(r);
        hi = hi.max(r);
    }
    println!("second-order band [{lo:.12}, {hi:.12}]");
    assert!((lo - SECOND_ORDER_BAND.0).abs() <= 1e-6 && (hi - SECOND_ORDER_BAND.1).abs() <= 1e-6, "[{lo}, {hi}]");
}
