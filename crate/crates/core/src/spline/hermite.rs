use super::banded::BandedSystem;
use super::poly::{factorial, falling_factorial};
use crate::Result;

/// The unique polynomial of degree `<= 2m - 1` on `[0, h]` whose derivatives
/// of orders `0..m` match `left` at `0` and `right` at `h`.
///
/// The system is solved on `[0, 1]` with jets rescaled by `h^k`, so its
/// matrix depends on `m` only.
pub(crate) fn two_point_hermite(left: &[f64], right: &[f64], h: f64) -> Result<Vec<f64>> {
    let m = left.len();
    debug_assert_eq!(m, right.len());
    let mut e = vec![0.0; 2 * m];
    let mut hk = 1.0;
    let mut right_scaled = vec![0.0; m];
    for k in 0..m {
        e[k] = left[k] * hk / factorial(k);
        right_scaled[k] = right[k] * hk;
        hk *= h;
    }
    let mut sys = BandedSystem::new(m);
    for r in 0..m {
        for k in m..2 * m {
            sys.set(r, k - m, falling_factorial(k, r));
        }
        let known: f64 = (r..m).map(|k| e[k] * falling_factorial(k, r)).sum();
        sys.set_rhs(r, right_scaled[r] - known);
    }
    let upper = sys.solve()?;
    e[m..].copy_from_slice(&upper);
    let mut scale = 1.0;
    for c in e.iter_mut() {
        *c /= scale;
        scale *= h;
    }
    Ok(e)
}
