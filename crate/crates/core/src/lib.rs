//! Trace-norm functionals for `W^m_p(R)` restricted to finite subsets of the
//! line, and a linear `C^{m-1}` spline extension operator.
//!
//! * [`divided_differences`]: sampled functions and divided-difference tables.
//! * [`trace_functionals`]: sequence, variational and homogeneous functionals.
//! * [`sharp_maximal`]: local sharp maximal functions and their `L^p` criterion.
//! * [`spline`]: piecewise polynomials, norm quadrature and natural splines.
//! * [`extension`]: gap lattice, zero fill, extension and the necessity check.
//! * [`corpus`]: seeded random instances for the CLI and the test suites.
//!
//! Subset enumeration and grid sweeps run on rayon when the `parallel`
//! feature is enabled and fall back to plain iterators otherwise. Reductions
//! have a fixed order, so both paths return bit-identical results.

pub mod corpus;
pub mod divided_differences;
mod error;
pub mod exec;
pub mod extension;
pub mod sharp_maximal;
pub mod spline;
pub mod trace_functionals;

pub use divided_differences::{
    build_table, convex_hull_check, divdiff_recursive, divdiff_sum, lagrange_polynomial,
    reduce_wide_difference, DividedDifferenceTable, ExtendedGap, SampledFunction,
    WideDifferenceCertificate,
};
pub use error::{Result, TraceError};
pub use exec::Execution;
pub use extension::{
    build_gap_lattice, extend, verify_necessity, zero_extend, Backend, ExtensionConfig, GapLattice,
    NecessityReport, Window,
};
pub use sharp_maximal::{sharp_profile, sharp_value, wmf_functional, GridSpec, MaximalProfile};
pub use spline::{
    lp_norm, natural_spline_min_energy, smoothness_order, sobolev_norm, NormReport,
    PiecewisePolynomial,
};
pub use trace_functionals::{
    homogeneous_sequence_functional, homogeneous_variational_functional, pad_small_set,
    sequence_functional, small_set_functional, variational_functional, Exponent, FunctionalKind,
    FunctionalReport,
};
