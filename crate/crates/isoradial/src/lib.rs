//! Stationary curves, isoperimetric diagnostics and symmetrization for
//! radially symmetric measures `C e^{σ v(|x|)} dx` in the plane.
//!
//! The crate is `no_std` (it needs `alloc`). Modules, bottom-up:
//!
//! - [`quad`], [`roots`], [`special`]: adaptive Gauss–Kronrod quadrature,
//!   bracketing root finders, incomplete gamma functions.
//! - [`density`]: the weights and their ball measures.
//! - [`stationary`]: the linear equation for `u = r² f'/√(1 + r² f'²)` and the
//!   singular quadrature giving the polar angle `f(r)` of a stationary curve.
//! - [`analysis`]: curve taxonomy, region measure and weighted perimeter.
//! - [`shooting`]: smooth-closure search in `λ`, families of candidates,
//!   empirical profiles and critical exponents of the power laws.
//! - [`symmetrize`]: circular symmetrization of ring-discretized sets.
//! - [`logconvex`]: lower bounds and certificates for log-convex weights,
//!   and the one-dimensional model measure with its monotone transport.
#![no_std]
// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod analysis;
pub mod density;
pub mod error;
pub mod logconvex;
pub mod quad;
pub mod roots;
pub mod shooting;
pub mod special;
pub mod stationary;
pub mod symmetrize;

pub use analysis::{
    ball_comparison, classify, region_measure, region_perimeter, summarize, CurveClass, RegionSummary, Side,
};
pub use density::{power_law_normalization, Family, RadialDensity, RealFn, Sign};
pub use error::{Error, Result};
pub use logconvex::{
    axial_measure, axial_perimeter, ball_bound_is_minimal, ball_ratio_check, ball_ratio_check_set,
    bigballs_certificate, bigballs_report, divergence_lower_bound, interval_profile_1d, model_profile_1d,
    monotone_transport_1d, AxialRegion, BigBallCertificate, ModelMeasure1D, TargetPotential, TransportMap,
    TransportOptions,
};
pub use shooting::{
    estimate_alpha_thresholds, find_a_for_measure, find_lambda_smooth, profile_point, AlphaThresholds,
    CandidateFamily, ProfilePoint, ShootingResult,
};
pub use stationary::{
    existence_interval, full_rotation, integrate_f, solve_curve, solve_u, CurveOptions, CurveSample, CurveSolution,
    Existence, Interval, Rotation, Start, StationaryParams, StopRule, USolution,
};
pub use symmetrize::{perimeter_report, set_measure, set_perimeter, symmetrize_set, AngularSet, Ring};
