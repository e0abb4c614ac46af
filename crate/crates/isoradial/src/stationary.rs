//! Stationary curves of the weighted perimeter.
//!
//! A curve `θ = ±f(r)` bounds a stationary region of `ρ = C e^{-w(r)}` iff
//! `u = r² f'/√(1 + r² f'²)` solves the linear equation `u' - w' u = -a r`,
//! whose general solution is
//!
//! ```text
//! u(r) = a e^{w(r)} ∫_r^∞ s e^{-w(s)} ds + λ e^{w(r)}      (finite-mass laws)
//! u(r) = e^{w(r)} (λ - a ∫_0^r s e^{-w(s)} ds)            (all other laws)
//! ```
//!
//! The angle is recovered from `f' = u / (r √(r² - u²))`, integrated over the
//! maximal interval where `|u| ≤ r`. At an endpoint with `|u(r_e)| = r_e` the
//! integrand has an inverse square-root singularity; it is removed by the
//! substitution `r = r_e ± τ²` together with a first-order expansion of
//! `r² - u²` at the endpoint.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, LN_10};
#[allow(unused_imports)] // inherent float methods shadow it when std is linked
use num_traits::Float;

use crate::density::{Family, RadialDensity, RealFn};
use crate::error::{Error, Result};
use crate::quad::{integrate, integrate_to_infinity, Tolerance};
use crate::roots::{bisect_predicate, golden_max, RootOptions};
use crate::special;

/// Largest radius any scan or tail integration reaches.
pub const RADIUS_CAP: f64 = 1e12;
/// Points in the initial log-spaced existence scan.
pub const SCAN_POINTS: usize = 4096;
/// Lower end of the existence scan.
pub const SCAN_START: f64 = 1e-6;
/// Remaining-rotation tolerance for unbounded curves.
pub const TAIL_TOL: f64 = 1e-10;

/// Relative distance to a touching endpoint below which `r² - u²` is
/// replaced by its linear expansion.
const TAYLOR_GUARD: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Start {
    /// Starts at `r0 > 0` with `f(r0) = 0`.
    InnerTouch,
    /// Starts at the origin with `f(0) = π/2`.
    Origin,
}

#[derive(Debug, Clone)]
pub struct StationaryParams {
    pub law: RadialDensity,
    pub a: f64,
    pub lambda: f64,
    pub start: Start,
}

impl StationaryParams {
    pub fn new(law: RadialDensity, a: f64, lambda: f64) -> Result<Self> {
        Self::check(&law, a, lambda)?;
        Ok(Self { law, a, lambda, start: Start::InnerTouch })
    }

    /// Curve through the origin; `λ` is fixed by `u(0) = 0`.
    pub fn origin(law: RadialDensity, a: f64) -> Result<Self> {
        let lambda = origin_lambda(&law, a)?;
        Self::check(&law, a, lambda)?;
        Ok(Self { law, a, lambda, start: Start::Origin })
    }

    fn check(law: &RadialDensity, a: f64, lambda: f64) -> Result<()> {
        if law.dimension() != 2 {
            return Err(Error::Domain(format!("curves need a planar law, got d = {}", law.dimension())));
        }
        if !a.is_finite() || !lambda.is_finite() {
            return Err(Error::Domain(format!("parameters must be finite: a={a}, lambda={lambda}")));
        }
        Ok(())
    }

    /// The constant `c = -a` of the equation `u' - w' u = c r`.
    pub fn c(&self) -> f64 {
        -self.a
    }
}

/// The `λ` that makes `u(0) = 0`.
pub fn origin_lambda(law: &RadialDensity, a: f64) -> Result<f64> {
    if a == 0.0 {
        return Ok(0.0);
    }
    if !law.has_finite_mass() {
        return Ok(0.0);
    }
    let i0 = match law.family() {
        Family::PowerLaw { alpha } => special::gamma(2.0 / alpha) / alpha,
        Family::Gaussian => 1.0,
        _ => {
            let end = law.domain_radius();
            let w0 = law.w(0.0).min(law.w(1e-300));
            if end.is_finite() {
                integrate(|s| s * (w0 - law.w(s)).exp(), 0.0, end, Tolerance::new(1e-15, 1e-13))?.value
                    * (-w0).exp()
            } else {
                integrate_to_infinity(|s| s * (w0 - law.w(s)).exp(), 0.0, Tolerance::new(1e-15, 1e-13))?.value
                    * (-w0).exp()
            }
        }
    };
    Ok(-a * i0)
}

#[derive(Clone)]
enum Form {
    /// `a e^x Γ(2/α, x)/α + λ e^x`, `x = r^α`.
    Power { alpha: f64 },
    /// `-a e^x γ(2/α, x)/α`.
    PowerOrigin { alpha: f64 },
    /// `a + λ e^{r²/2}`.
    Gaussian,
    /// `-a (e^{r²/2} - 1)`.
    GaussianOrigin,
    /// `λ - a r²/2`.
    Lebesgue,
    /// `λ r - a r²`.
    InverseR,
    /// Finite-mass representation, by quadrature.
    Decaying,
    /// Origin-anchored representation, by quadrature.
    Anchored,
    /// A user-supplied function, not tied to the equation.
    Explicit { u: RealFn, du: RealFn },
}

/// A solution `u(r)` of the linear equation.
#[derive(Clone)]
pub struct USolution {
    law: RadialDensity,
    a: f64,
    lambda: f64,
    form: Form,
}

impl core::fmt::Debug for USolution {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("USolution")
            .field("law", &self.law.label())
            .field("a", &self.a)
            .field("lambda", &self.lambda)
            .field("closed_form", &self.closed_form())
            .finish()
    }
}

/// `sign(λ) e^{ln|λ| + x}` without overflowing on the way.
fn lam_exp(lambda: f64, x: f64) -> f64 {
    if lambda == 0.0 {
        0.0
    } else {
        lambda.signum() * (lambda.abs().ln() + x).exp()
    }
}

/// Solves the linear equation for the given parameters, preferring closed forms.
pub fn solve_u(params: &StationaryParams) -> Result<USolution> {
    let law = &params.law;
    let origin = params.start == Start::Origin;
    if origin {
        let want = origin_lambda(law, params.a)?;
        if (params.lambda - want).abs() > 1e-9 * want.abs().max(1.0) {
            return Err(Error::Domain(format!(
                "origin-starting curves need lambda = {want}, got {}",
                params.lambda
            )));
        }
    }
    let form = match law.family() {
        Family::PowerLaw { alpha } if origin => Form::PowerOrigin { alpha },
        Family::PowerLaw { alpha } => Form::Power { alpha },
        Family::Gaussian if law.dimension() == 2 && origin => Form::GaussianOrigin,
        Family::Gaussian if law.dimension() == 2 => Form::Gaussian,
        Family::Lebesgue => Form::Lebesgue,
        Family::InverseR => Form::InverseR,
        _ if law.has_finite_mass() && !origin => Form::Decaying,
        _ => Form::Anchored,
    };
    Ok(USolution { law: law.clone(), a: params.a, lambda: params.lambda, form })
}

/// The same solution through the generic quadrature representation, for
/// cross-checking the closed forms.
pub fn solve_u_quadrature(params: &StationaryParams) -> Result<USolution> {
    let mut u = solve_u(params)?;
    u.form = if params.start == Start::InnerTouch && params.law.has_finite_mass() {
        Form::Decaying
    } else {
        Form::Anchored
    };
    if matches!(u.form, Form::Anchored) && params.law.has_finite_mass() {
        // Anchored form carries u(0) as its constant; that is 0 at the origin start.
        u.lambda = 0.0;
    }
    Ok(u)
}

impl USolution {
    /// A prescribed `u` (and derivative) that need not solve the equation,
    /// e.g. the pure power `a r^{2-α}` used for the rotation heuristic.
    pub fn explicit(law: RadialDensity, u: RealFn, du: RealFn) -> Self {
        Self { law, a: f64::NAN, lambda: f64::NAN, form: Form::Explicit { u, du } }
    }

    pub fn law(&self) -> &RadialDensity {
        &self.law
    }
    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// True for the analytic formulas (power laws, Gaussian, Lebesgue, `dx/r`).
    pub fn closed_form(&self) -> bool {
        !matches!(self.form, Form::Decaying | Form::Anchored)
    }

    /// Whether the solution is tied to the equation (not an explicit override).
    pub fn is_stationary(&self) -> bool {
        !matches!(self.form, Form::Explicit { .. })
    }

    pub fn evaluate(&self, r: f64) -> f64 {
        let (a, lambda) = (self.a, self.lambda);
        match &self.form {
            Form::Power { alpha } => {
                let x = r.powf(*alpha);
                a * special::upper_gamma_scaled(2.0 / alpha, x) / alpha + lam_exp(lambda, x)
            }
            Form::PowerOrigin { alpha } => {
                let x = r.powf(*alpha);
                -a * special::lower_gamma_scaled(2.0 / alpha, x) / alpha
            }
            Form::Gaussian => a + lam_exp(lambda, 0.5 * r * r),
            Form::GaussianOrigin => -a * (0.5 * r * r).exp_m1(),
            Form::Lebesgue => lambda - 0.5 * a * r * r,
            Form::InverseR => lambda * r - a * r * r,
            Form::Decaying => {
                let law = &self.law;
                let wr = law.w(r);
                let part = if a == 0.0 {
                    0.0
                } else if law.domain_radius().is_finite() {
                    integrate(
                        |s| s * (wr - law.w(s)).exp(),
                        r,
                        law.domain_radius().max(r),
                        Tolerance::new(0.0, 1e-14),
                    )
                    .map(|q| q.value)
                    .unwrap_or(f64::NAN)
                } else {
                    integrate_to_infinity(|t| (r + t) * (wr - law.w(r + t)).exp(), 0.0, Tolerance::new(0.0, 1e-14))
                        .map(|q| q.value)
                        .unwrap_or(f64::NAN)
                };
                a * part + lam_exp(lambda, wr)
            }
            Form::Anchored => {
                let law = &self.law;
                let wr = law.w(r);
                let part = if a == 0.0 || r == 0.0 {
                    0.0
                } else {
                    integrate(|s| s * (wr - law.w(s)).exp(), 0.0, r, Tolerance::new(0.0, 1e-14))
                        .map(|q| q.value)
                        .unwrap_or(f64::NAN)
                };
                lam_exp(lambda, wr) - a * part
            }
            Form::Explicit { u, .. } => u(r),
        }
    }

    /// `u'(r)`, from the equation itself (`w' u - a r`) unless explicit.
    pub fn evaluate_deriv(&self, r: f64) -> f64 {
        match &self.form {
            Form::Explicit { du, .. } => du(r),
            Form::Lebesgue => -self.a * r,
            Form::InverseR => self.lambda - 2.0 * self.a * r,
            _ => self.law.dw(r) * self.evaluate(r) - self.a * r,
        }
    }

    /// `u(r)/r`.
    pub fn q(&self, r: f64) -> f64 {
        self.evaluate(r) / r
    }

    /// `u' - w' u + a r` with `u'` from a central difference; zero up to
    /// discretization error for true solutions.
    pub fn ode_residual(&self, r: f64) -> f64 {
        let h = 1e-5 * r.max(1e-3);
        let du = (self.evaluate(r + h) - self.evaluate(r - h)) / (2.0 * h);
        du - self.law.dw(r) * self.evaluate(r) + self.a * r
    }

    fn inside(&self, r: f64) -> bool {
        let u = self.evaluate(r);
        u.is_finite() && u.abs() <= r
    }
}

/// Maximal interval where `|u| ≤ r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub r0: f64,
    /// `None` when no upper crossing exists (unbounded curve).
    pub r1: Option<f64>,
    /// Largest radius examined by the scan.
    pub scan_radius: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Existence {
    Empty,
    /// `u` touches `±r` without crossing, e.g. the centered circle limit.
    Tangent { r: f64 },
    Interval(Interval),
}

impl Existence {
    pub fn interval(&self) -> Result<Interval> {
        match self {
            Existence::Interval(i) => Ok(*i),
            Existence::Empty => Err(Error::EmptyInterval),
            Existence::Tangent { r } => Err(Error::Domain(format!("degenerate tangency at r = {r}"))),
        }
    }
}

fn log_grid(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(move |i| {
        if i + 1 == n {
            hi
        } else {
            (a + (b - a) * i as f64 / (n - 1) as f64).exp()
        }
    })
}

/// Radius at which `|λ| e^{w}` overtakes `4r`, when it ever does.
fn homogeneous_crossing(u: &USolution) -> Option<f64> {
    if !u.is_stationary() || u.lambda == 0.0 {
        return None;
    }
    let law = &u.law;
    let excess = |r: f64| u.lambda.abs().ln() + law.w(r) - (4.0 * r).ln();
    let mut r = 1.0;
    while r < RADIUS_CAP {
        if excess(r) > 0.0 {
            return Some(r);
        }
        r *= 2.0;
    }
    None
}

fn boundary(u: &USolution, outside: f64, inside: f64) -> f64 {
    let opts = RootOptions { xtol_abs: 0.0, xtol_rel: 0.0, ..RootOptions::default() };
    match bisect_predicate(|r| u.inside(r), outside, inside, opts) {
        Ok((_, t)) => t,
        Err(_) => inside,
    }
}

/// Locates the maximal existence interval by a log-spaced sign scan of
/// `r - |u(r)|` followed by bisection to full precision.
pub fn existence_interval(u: &USolution) -> Result<Existence> {
    let law = &u.law;
    let dom = law.domain_radius();
    let mut hint: f64 = 10.0;
    if law.is_probability() {
        hint = hint.max(law.truncation_radius());
    }
    if let Some(rc) = homogeneous_crossing(u) {
        hint = hint.max(1.5 * rc);
    }
    let mut radius = hint.min(dom).min(RADIUS_CAP);

    let mut rs: Vec<f64> = log_grid(SCAN_START, radius, SCAN_POINTS).collect();
    let mut gap: Vec<f64> = rs.iter().map(|&r| r - u.evaluate(r).abs()).collect();
    let ok = |g: f64| g.is_finite() && g >= 0.0;
    let mut start: Option<usize> = None;
    let mut idx = 0;
    loop {
        while idx < rs.len() {
            let inside = ok(gap[idx]);
            match start {
                None if inside => start = Some(idx),
                Some(s) if !inside => {
                    let r0 = if s == 0 { 0.0 } else { boundary(u, rs[s - 1], rs[s]) };
                    let r1 = boundary(u, rs[idx], rs[idx - 1]);
                    return Ok(Existence::Interval(Interval { r0, r1: Some(r1), scan_radius: radius }));
                }
                _ => {}
            }
            idx += 1;
        }
        // Scan exhausted: decide whether to look further out.
        let n = rs.len();
        let (rp, rl) = (rs[n - 2], rs[n - 1]);
        let grows = {
            let qp = u.evaluate(rp).abs() / rp;
            let ql = u.evaluate(rl).abs() / rl;
            !(ql <= qp)
        };
        let homogeneous_wins =
            u.is_stationary() && u.lambda != 0.0 && (law.w(2.0 * rl) - (2.0 * rl).ln() > law.w(rl) - rl.ln());
        // Inside so far: look further while an exit is still possible.
        // Never inside: only a decaying |u|/r can still come inside.
        let extend = match start {
            Some(_) => grows || homogeneous_wins,
            None => !grows && !homogeneous_wins,
        };
        if extend && radius < RADIUS_CAP && radius < dom {
            let next = (8.0 * radius).min(RADIUS_CAP).min(dom);
            for r in log_grid(radius, next, 513).skip(1) {
                rs.push(r);
                gap.push(r - u.evaluate(r).abs());
            }
            radius = next;
            continue;
        }
        break;
    }
    match start {
        Some(s) => {
            let r0 = if s == 0 { 0.0 } else { boundary(u, rs[s - 1], rs[s]) };
            Ok(Existence::Interval(Interval { r0, r1: None, scan_radius: radius }))
        }
        None => {
            // Closest approach of r - |u| to zero.
            let (k, _) = gap
                .iter()
                .enumerate()
                .filter(|(_, g)| g.is_finite())
                .fold((0, f64::NEG_INFINITY), |acc, (i, &g)| if g / rs[i] > acc.1 { (i, g / rs[i]) } else { acc });
            let lo = rs[k.saturating_sub(1)];
            let hi = rs[(k + 1).min(rs.len() - 1)];
            let (rt, gt) = golden_max(|r| r - u.evaluate(r).abs(), lo, hi, 1e-14 * hi, 300);
            if gt >= 0.0 {
                // A sliver narrower than the grid spacing.
                let r0 = boundary(u, lo, rt);
                let r1 = boundary(u, hi, rt);
                if r1 > r0 {
                    return Ok(Existence::Interval(Interval { r0, r1: Some(r1), scan_radius: radius }));
                }
                return Ok(Existence::Tangent { r: rt });
            }
            if gt >= -1e-9 * rt {
                return Ok(Existence::Tangent { r: rt });
            }
            Ok(Existence::Empty)
        }
    }
}

/// Why the rotation integral stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopRule {
    /// Bounded interval integrated to its upper end.
    Endpoint,
    /// Estimated remaining rotation fell below the tail tolerance.
    TailBelowTolerance,
    /// Reached the radius cap; the power-law tail estimate was added.
    CapExtrapolated,
    /// The tail does not decay: the rotation is infinite.
    Divergent,
}

/// Signed rotation `f(r1) - f(r0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation {
    pub value: f64,
    pub stop: StopRule,
    /// Extrapolated tail included in `value` (0 for bounded curves).
    pub tail: f64,
    /// Radius where numerical integration ended.
    pub radius: f64,
    /// Quadrature error estimate of the integrated part.
    pub error: f64,
}

impl Rotation {
    /// `Δ_f = |f(r1) - f(r0)|`, possibly infinite.
    pub fn delta(&self) -> f64 {
        self.value.abs()
    }
    pub fn is_infinite(&self) -> bool {
        !self.value.is_finite()
    }
}

/// A touching endpoint `|u(r_e)| = r_e`.
#[derive(Debug, Clone, Copy)]
struct End {
    /// Secant slope of `r² - u²` over `[r_e, r_e ± guard]`; close to the
    /// derivative at the end, and matching the direct formula at the guard.
    slope: f64,
    guard: f64,
}

/// Integrands of the curve written in the substitution variables.
struct Kernel<'a> {
    u: &'a USolution,
    lo: Option<End>,
    hi: Option<End>,
}

impl<'a> Kernel<'a> {
    fn new(u: &'a USolution, iv: &Interval) -> Result<Self> {
        let span = iv.r1.map_or(f64::INFINITY, |r1| r1 - iv.r0);
        let end = |r: f64, inward: f64| -> Result<End> {
            let ue = u.evaluate(r);
            let sigma = ue.signum();
            let slope = (2.0 * r * (1.0 - sigma * u.evaluate_deriv(r))).abs();
            if !(slope > 1e-300) || !slope.is_finite() {
                return Err(Error::Domain(format!("tangential endpoint at r = {r}")));
            }
            let guard = (TAYLOR_GUARD * r).min(0.25 * span);
            let rg = r + inward * guard;
            let ug = u.evaluate(rg).abs();
            let gap = (rg - ug) * (rg + ug);
            let secant = gap / guard;
            let slope = if secant > 0.0 && secant.is_finite() { secant } else { slope };
            Ok(End { slope, guard })
        };
        let lo = if iv.r0 > 0.0 { Some(end(iv.r0, 1.0)?) } else { None };
        let hi = match iv.r1 {
            Some(r1) => Some(end(r1, -1.0)?),
            None => None,
        };
        Ok(Self { u, lo, hi })
    }

    /// `(f'(r), r/√(r² - u²))` at `r`, where `delta` is the exact distance to
    /// the nearest touching end `near` (if any).
    fn eval(&self, r: f64, near: Option<(End, f64)>) -> (f64, f64) {
        let u = self.u.evaluate(r);
        if let Some((e, delta)) = near {
            if delta < e.guard {
                let sd = (e.slope * delta).sqrt();
                return (u / (r * sd), r / sd);
            }
        }
        if r == 0.0 {
            return (0.0, 1.0);
        }
        let q = u / r;
        let aq = q.abs().min(1.0);
        let s = ((1.0 - aq) * (1.0 + aq)).sqrt();
        (q / (r * s), 1.0 / s)
    }
}

/// Parametrizations of the existence interval with integrable endpoint behaviour.
#[derive(Debug, Clone, Copy)]
enum Chart {
    /// `r = r0 + L h(t)` with `h = t²(3 - 2t)`, `t ∈ [0, 1]`, for bounded intervals.
    Smoothstep { r0: f64, r1: f64 },
    /// `r = r0 + L t²`, `t ∈ [0, 1]`.
    Lower { r0: f64, len: f64 },
    /// `r = e^y`.
    Log,
}

impl Chart {
    /// `(r, dr/dt, distance to touching end, which end: true = upper)`.
    fn map(&self, t: f64) -> (f64, f64, f64, bool) {
        match *self {
            Chart::Smoothstep { r0, r1 } => {
                let l = r1 - r0;
                let j = 6.0 * l * t * (1.0 - t);
                if t <= 0.5 {
                    let d = l * t * t * (3.0 - 2.0 * t);
                    (r0 + d, j, d, false)
                } else {
                    let s = 1.0 - t;
                    let d = l * s * s * (1.0 + 2.0 * t);
                    (r1 - d, j, d, true)
                }
            }
            Chart::Lower { r0, len } => {
                let d = len * t * t;
                (r0 + d, 2.0 * len * t, d, false)
            }
            Chart::Log => {
                let r = t.exp();
                (r, r, f64::INFINITY, true)
            }
        }
    }
}

impl<'a> Kernel<'a> {
    /// Integrand in chart coordinates: `(f' dr/dt, (r/√(r²-u²)) dr/dt, r)`.
    fn chart_eval(&self, chart: &Chart, t: f64) -> (f64, f64, f64) {
        let (r, jac, d, upper) = chart.map(t);
        let near = if upper { self.hi.map(|e| (e, d)) } else { self.lo.map(|e| (e, d)) };
        let (fp, len) = self.eval(r, near);
        (fp * jac, len * jac, r)
    }
}

fn tol_f() -> Tolerance {
    Tolerance::new(1e-12, 1e-12)
}

/// Running integration of the curve over the pieces of its charts.
struct Pieces {
    charts: Vec<(Chart, f64, f64)>,
}

fn pieces_for(iv: &Interval, upto: f64) -> Pieces {
    let mut charts = Vec::new();
    match iv.r1 {
        Some(r1) => charts.push((Chart::Smoothstep { r0: iv.r0, r1 }, 0.0, 1.0)),
        None => {
            let len = iv.r0.max(1.0);
            charts.push((Chart::Lower { r0: iv.r0, len }, 0.0, 1.0));
            let rb = iv.r0 + len;
            if upto > rb {
                charts.push((Chart::Log, rb.ln(), upto.ln()));
            }
        }
    }
    Pieces { charts }
}

/// Power-law tail estimate `arcsin(q)/β` of the rotation beyond `r`, where
/// `β = -d ln|q| / d ln r`. Returns `None` when `q` does not decay.
fn tail_estimate(u: &USolution, r: f64) -> Option<f64> {
    let q = u.q(r);
    if q == 0.0 {
        return Some(0.0);
    }
    let rp = r / 10f64.sqrt();
    let qp = u.q(rp);
    if qp == 0.0 || !q.is_finite() || !qp.is_finite() {
        return None;
    }
    let beta = -(q.abs().ln() - qp.abs().ln()) / (0.5 * LN_10);
    if !(beta > 1e-6) {
        return None;
    }
    let t = q.signum() * q.abs().min(1.0).asin() / beta;
    if t.abs() > 1e3 {
        None
    } else {
        Some(t)
    }
}

/// Rounding floor accepted for rotations of nearly degenerate intervals.
pub const ROTATION_ACCEPT: f64 = 1e-6;

/// One rotation quadrature; results above the requested tolerance are kept
/// when their error is below [`ROTATION_ACCEPT`].
fn rotation_piece<F: FnMut(f64) -> f64>(f: F, a: f64, b: f64, err: &mut f64) -> Result<f64> {
    match integrate(f, a, b, tol_f()) {
        Ok(q) => {
            *err += q.error;
            Ok(q.value)
        }
        Err(Error::NotConverged { estimate, error }) if error <= ROTATION_ACCEPT => {
            *err += error;
            Ok(estimate)
        }
        Err(e) => Err(e),
    }
}

/// Total rotation `f(r1) - f(r0)` over the existence interval.
pub fn full_rotation(u: &USolution, iv: &Interval) -> Result<Rotation> {
    let k = Kernel::new(u, iv)?;
    if let Some(r1) = iv.r1 {
        let chart = Chart::Smoothstep { r0: iv.r0, r1 };
        let mut error = 0.0;
        let a = rotation_piece(|t| k.chart_eval(&chart, t).0, 0.0, 0.5, &mut error)?;
        let b = rotation_piece(|t| k.chart_eval(&chart, t).0, 0.5, 1.0, &mut error)?;
        return Ok(Rotation { value: a + b, stop: StopRule::Endpoint, tail: 0.0, radius: r1, error });
    }
    let len = iv.r0.max(1.0);
    let lower = Chart::Lower { r0: iv.r0, len };
    let mut error = 0.0;
    let mut total = rotation_piece(|t| k.chart_eval(&lower, t).0, 0.0, 1.0, &mut error)?;
    let mut r = iv.r0 + len;
    let cap = RADIUS_CAP.min(u.law.domain_radius());
    loop {
        if let Some(t) = tail_estimate(u, r) {
            if t.abs() < TAIL_TOL {
                return Ok(Rotation { value: total + t, stop: StopRule::TailBelowTolerance, tail: t, radius: r, error });
            }
        }
        if r >= cap {
            return Ok(match tail_estimate(u, r) {
                Some(t) if u.law.domain_radius().is_infinite() => {
                    Rotation { value: total + t, stop: StopRule::CapExtrapolated, tail: t, radius: r, error }
                }
                Some(_) => Rotation { value: total, stop: StopRule::Endpoint, tail: 0.0, radius: r, error },
                None => Rotation {
                    value: if total >= 0.0 { f64::INFINITY } else { f64::NEG_INFINITY },
                    stop: StopRule::Divergent,
                    tail: f64::INFINITY,
                    radius: r,
                    error,
                },
            });
        }
        let next = (10.0 * r).min(cap);
        total += rotation_piece(|y| k.chart_eval(&Chart::Log, y).0, r.ln(), next.ln(), &mut error)?;
        r = next;
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveSample {
    pub r: f64,
    pub f: f64,
    /// `f'(r)`; infinite at touching endpoints.
    pub fp: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveOptions {
    pub samples: usize,
    /// Largest sampled radius of unbounded curves; default is the larger of
    /// the law's truncation radius and `10 max(r0, 1)`.
    pub sample_radius: Option<f64>,
}

impl Default for CurveOptions {
    fn default() -> Self {
        Self { samples: 513, sample_radius: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Shape {
    Graph,
    /// The centered circle `|x| = radius`, a singular stationary set.
    Circle { radius: f64 },
}

/// A sampled stationary curve.
#[derive(Debug, Clone)]
pub struct CurveSolution {
    pub params: StationaryParams,
    pub u: USolution,
    pub r0: f64,
    /// `None` for unbounded curves.
    pub r1: Option<f64>,
    pub samples: Vec<CurveSample>,
    pub end_slope_infinite: bool,
    pub unbounded: bool,
    pub rotation: Rotation,
    /// `f(r0)`: 0, or `π/2` for origin-starting curves.
    pub f_start: f64,
    pub sample_radius: f64,
    /// Upper radius of the existence scan.
    pub scan_radius: f64,
    shape: Shape,
}

impl CurveSolution {
    pub fn start(&self) -> Start {
        self.params.start
    }

    pub fn interval(&self) -> Interval {
        Interval { r0: self.r0, r1: self.r1, scan_radius: self.scan_radius }
    }

    /// `f(r1)`, or the limit at infinity.
    pub fn f_end(&self) -> f64 {
        self.f_start + self.rotation.value
    }

    /// The centered circle of radius `radius`, treated as a degenerate curve
    /// (its enclosed region is the ball).
    pub fn centered_circle(law: RadialDensity, radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::Domain(format!("circle radius must be positive, got {radius}")));
        }
        let params = StationaryParams::new(law, 0.0, 0.0)?;
        let u = solve_u(&params)?;
        Ok(Self {
            params,
            u,
            r0: radius,
            r1: Some(radius),
            samples: Vec::new(),
            end_slope_infinite: true,
            unbounded: false,
            rotation: Rotation { value: core::f64::consts::PI, stop: StopRule::Endpoint, tail: 0.0, radius, error: 0.0 },
            f_start: 0.0,
            sample_radius: radius,
            scan_radius: radius,
            shape: Shape::Circle { radius },
        })
    }

    /// Radius of the centered circle, when this is one.
    pub fn circle_radius(&self) -> Option<f64> {
        match self.shape {
            Shape::Circle { radius } => Some(radius),
            Shape::Graph => None,
        }
    }

    /// `f` at an arbitrary radius of the interval.
    pub fn angle_at(&self, r: f64) -> Result<f64> {
        if self.circle_radius().is_some() {
            return Err(Error::Domain("a centered circle is not a graph over r".into()));
        }
        let hi = self.r1.unwrap_or(f64::INFINITY);
        if !(r >= self.r0 && r <= hi) {
            return Err(Error::Domain(format!("r = {r} outside [{}, {hi}]", self.r0)));
        }
        let iv = self.interval();
        let k = Kernel::new(&self.u, &iv)?;
        let mid = match self.r1 {
            Some(r1) => 0.5 * (self.r0 + r1),
            None => f64::INFINITY,
        };
        if r <= mid {
            let chart = Chart::Lower { r0: self.r0, len: r - self.r0 };
            Ok(self.f_start + integrate(|t| k.chart_eval(&chart, t).0, 0.0, 1.0, tol_f())?.value)
        } else {
            let r1 = self.r1.unwrap_or(r);
            let len = r1 - r;
            // upper chart r = r1 - len τ²
            let g = |t: f64| {
                let d = len * t * t;
                let (fp, _) = k.eval(r1 - d, k.hi.map(|e| (e, d)));
                fp * 2.0 * len * t
            };
            Ok(self.f_end() - integrate(g, 0.0, 1.0, tol_f())?.value)
        }
    }

    /// Integral over the existence interval of `weight(r) · g(f', r/√(r²-u²))`
    /// in chart coordinates, up to radius `upto` for unbounded curves.
    pub(crate) fn integrate_curve<G: Fn(f64, f64, f64) -> f64>(&self, upto: f64, g: G, tol: Tolerance) -> Result<f64> {
        let iv = self.interval();
        let k = Kernel::new(&self.u, &iv)?;
        let mut total = 0.0;
        let pieces = pieces_for(&iv, upto);
        for (chart, a, b) in pieces.charts.iter() {
            let f = |t: f64| {
                let (fp, len, r) = k.chart_eval(chart, t);
                g(r, fp, len)
            };
            if let Chart::Smoothstep { .. } = chart {
                total += integrate(&f, *a, 0.5, tol)?.value;
                total += integrate(&f, 0.5, *b, tol)?.value;
            } else if let Chart::Log = chart {
                // decades keep panels well scaled
                let mut y = *a;
                while y < *b {
                    let yn = (y + LN_10).min(*b);
                    total += integrate(&f, y, yn, tol)?.value;
                    y = yn;
                }
            } else {
                total += integrate(&f, *a, *b, tol)?.value;
            }
        }
        Ok(total)
    }
}

/// Integrates `f` over the interval and samples it.
pub fn integrate_f(u: &USolution, iv: &Interval, params: &StationaryParams, opts: CurveOptions) -> Result<CurveSolution> {
    let start = params.start;
    if let Some(r1) = iv.r1 {
        if !(r1 > iv.r0) {
            return Err(Error::EmptyInterval);
        }
    }
    if iv.r0 == 0.0 {
        // Near the origin f' ≈ q/r: integrable only if q → 0.
        let q = u.q(1e-12).abs().max(u.q(1e-10).abs());
        if !(q <= 1e-6) {
            return Err(Error::Divergent(format!(
                "u(r)/r tends to {} at the origin; the angle integral diverges",
                u.q(1e-12)
            )));
        }
    } else if start == Start::Origin {
        return Err(Error::Domain(format!("origin start needs r0 = 0, interval starts at {}", iv.r0)));
    }
    let f_start = if start == Start::Origin { FRAC_PI_2 } else { 0.0 };
    let rotation = full_rotation(u, iv)?;
    let k = Kernel::new(u, iv)?;
    let n = opts.samples.max(8);
    let mut samples = Vec::with_capacity(n);
    let sample_radius;
    match iv.r1 {
        Some(r1) => {
            sample_radius = r1;
            let chart = Chart::Smoothstep { r0: iv.r0, r1 };
            let mut f = f_start;
            let mut tp = 0.0;
            for i in 0..n {
                let t = i as f64 / (n - 1) as f64;
                if i > 0 {
                    f += integrate(|s| k.chart_eval(&chart, s).0, tp, t, tol_f())?.value;
                }
                tp = t;
                let (r, _, _, _) = chart.map(t);
                samples.push(CurveSample { r, f, fp: 0.0 });
            }
            // Pin the end to the rotation integral so both agree exactly.
            if let Some(last) = samples.last_mut() {
                last.f = f_start + rotation.value;
                last.r = r1;
            }
            samples[0].r = iv.r0;
        }
        None => {
            let len = iv.r0.max(1.0);
            let default_radius = u.law.truncation_radius().min(RADIUS_CAP).max(10.0 * iv.r0.max(1.0));
            let rs = opts.sample_radius.unwrap_or(default_radius).max(iv.r0 + 2.0 * len);
            sample_radius = rs;
            let n_lo = n / 4;
            let lower = Chart::Lower { r0: iv.r0, len };
            let mut f = f_start;
            let mut tp = 0.0;
            for i in 0..n_lo {
                let t = i as f64 / (n_lo - 1) as f64;
                if i > 0 {
                    f += integrate(|s| k.chart_eval(&lower, s).0, tp, t, tol_f())?.value;
                }
                tp = t;
                samples.push(CurveSample { r: lower.map(t).0, f, fp: 0.0 });
            }
            let (ya, yb) = ((iv.r0 + len).ln(), rs.ln());
            let n_hi = n - n_lo;
            let mut yp = ya;
            for i in 1..=n_hi {
                let y = ya + (yb - ya) * i as f64 / n_hi as f64;
                f += integrate(|s| k.chart_eval(&Chart::Log, s).0, yp, y, tol_f())?.value;
                yp = y;
                samples.push(CurveSample { r: y.exp(), f, fp: 0.0 });
            }
            samples[0].r = iv.r0;
        }
    }
    let last = samples.len() - 1;
    for (i, s) in samples.iter_mut().enumerate() {
        let touching = (i == 0 && iv.r0 > 0.0) || (i == last && iv.r1.is_some());
        s.fp = if touching {
            if u.evaluate(s.r) >= 0.0 {
                f64::INFINITY
            } else {
                f64::NEG_INFINITY
            }
        } else {
            k.eval(s.r, None).0
        };
    }
    Ok(CurveSolution {
        params: params.clone(),
        u: u.clone(),
        r0: iv.r0,
        r1: iv.r1,
        samples,
        end_slope_infinite: iv.r1.is_some(),
        unbounded: iv.r1.is_none(),
        rotation,
        f_start,
        sample_radius,
        scan_radius: iv.scan_radius,
        shape: Shape::Graph,
    })
}

/// `solve_u`, `existence_interval` and `integrate_f` in one call.
pub fn solve_curve(params: &StationaryParams, opts: CurveOptions) -> Result<CurveSolution> {
    let u = solve_u(params)?;
    let iv = existence_interval(&u)?.interval()?;
    integrate_f(&u, &iv, params, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    fn power(alpha: f64, a: f64, lambda: f64) -> USolution {
        solve_u(&StationaryParams::new(RadialDensity::power_law(alpha).unwrap(), a, lambda).unwrap()).unwrap()
    }

    #[test]
    fn exponential_law_closed_form() {
        let u = power(1.0, 0.5, 0.0);
        for &r in &[0.1, 1.0, 3.0, 20.0] {
            assert!((u.evaluate(r) - 0.5 * (1.0 + r)).abs() < 1e-14 * (1.0 + r));
        }
        assert!(u.closed_form());
    }

    #[test]
    fn quadratic_law_constant() {
        let u = power(2.0, 1.0, 0.0);
        let v0 = u.evaluate(0.3);
        for &r in &[0.7, 1.5, 4.0] {
            assert!((u.evaluate(r) - v0).abs() < 1e-13);
        }
    }

    #[test]
    fn zero_parameters_give_zero() {
        let p = StationaryParams::origin(RadialDensity::power_law(3.0).unwrap(), 0.0).unwrap();
        let u = solve_u(&p).unwrap();
        assert_eq!(u.evaluate(2.0), 0.0);
    }

    #[test]
    fn existence_examples() {
        let iv = existence_interval(&power(1.0, 0.5, 0.0)).unwrap().interval().unwrap();
        assert!((iv.r0 - 1.0).abs() < 1e-12);
        assert_eq!(iv.r1, None);
        assert_eq!(existence_interval(&power(1.0, 1.5, 0.0)).unwrap(), Existence::Empty);
    }

    #[test]
    fn residual_of_closed_forms() {
        for &(al, a, l) in &[(1.0, 0.5, 1e-3), (1.5, 0.3, -0.01), (3.0, 0.5, 0.0)] {
            let u = power(al, a, l);
            for &r in &[0.4, 1.0, 1.7] {
                assert!(u.ode_residual(r).abs() < 1e-7, "alpha={al} r={r}: {}", u.ode_residual(r));
            }
        }
    }

    #[test]
    fn half_line_rotation() {
        // u ≡ 1: f = arccos(1/r), total rotation π/2
        let law = RadialDensity::gaussian();
        let p = StationaryParams::new(law, 1.0, 0.0).unwrap();
        let c = solve_curve(&p, CurveOptions::default()).unwrap();
        assert!((c.rotation.value - FRAC_PI_2).abs() < 1e-9);
        assert!((c.angle_at(2.0).unwrap() - PI / 3.0).abs() < 1e-12);
    }
}
