//! Piecewise polynomials: evaluation, smoothness checks, `L^p` and Sobolev
//! norms, two-point Hermite pieces and natural splines.

mod banded;
mod hermite;
mod natural;
mod piecewise;
pub(crate) mod poly;
mod quadrature;

pub(crate) use hermite::two_point_hermite;
pub(crate) use natural::{interpolating_spline, EndCondition};
pub use natural::natural_spline_min_energy;
pub use piecewise::{smoothness_order, PiecewisePolynomial};
pub use quadrature::{lp_norm, sobolev_norm, GaussRule, NormReport};
