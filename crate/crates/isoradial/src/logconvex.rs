//! Log-convex weights `e^{v(|x|)}` with `v` convex and increasing.
//!
//! - lower bounds for the weighted perimeter from the divergence theorem,
//!   checked on centered balls and axially symmetric regions;
//! - certificates that big centered balls are minimizers;
//! - the ratio of a region's perimeter to that of the ball of equal measure;
//! - the one-dimensional model `ν_A = dx / cos(Ax)` and the monotone
//!   transport from `ν_A` to a more convex even weight.
//!
//! Laws with infinite mass are used with an explicit domain radius; regions
//! must lie inside it.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)] // inherent float methods shadow it when std is linked
use num_traits::Float;

use crate::density::{RadialDensity, RealFn, Sign};
use crate::error::{Error, Result};
use crate::quad::{integrate, Tolerance};
use crate::roots::{illinois, RootOptions};
use crate::symmetrize::{set_measure, set_perimeter, AngularSet};

fn tol() -> Tolerance {
    Tolerance::new(1e-12, 1e-12)
}

/// Planar regions symmetric about the positive x-axis, described by their
/// angular half-width `h(r)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AxialRegion {
    Ball { radius: f64 },
    Annulus { inner: f64, outer: f64 },
    /// `{inner < r < outer, |θ| < half_angle}`.
    AnnularSector { inner: f64, outer: f64, half_angle: f64 },
    /// Sector with `h(r) = h0 + amplitude sin(waves (r − inner))`.
    WavySector { inner: f64, outer: f64, h0: f64, amplitude: f64, waves: f64 },
    /// Disk of radius `radius` centered at `(center, 0)`.
    OffsetDisk { center: f64, radius: f64 },
}

impl AxialRegion {
    /// Largest radius reached.
    pub fn outer_radius(&self) -> f64 {
        match *self {
            AxialRegion::Ball { radius } => radius,
            AxialRegion::Annulus { outer, .. }
            | AxialRegion::AnnularSector { outer, .. }
            | AxialRegion::WavySector { outer, .. } => outer,
            AxialRegion::OffsetDisk { center, radius } => center.abs() + radius,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Domain(m));
        match *self {
            AxialRegion::Ball { radius } if !(radius > 0.0) => bad(format!("ball radius {radius}")),
            AxialRegion::Annulus { inner, outer } | AxialRegion::AnnularSector { inner, outer, .. }
                if !(inner >= 0.0 && outer > inner) =>
            {
                bad(format!("radii ({inner}, {outer})"))
            }
            AxialRegion::AnnularSector { half_angle, .. } if !(half_angle > 0.0 && half_angle <= PI) => {
                bad(format!("half angle {half_angle}"))
            }
            AxialRegion::WavySector { inner, outer, h0, amplitude, .. } => {
                if !(inner >= 0.0 && outer > inner) {
                    bad(format!("radii ({inner}, {outer})"))
                } else if !(h0 - amplitude.abs() > 0.0 && h0 + amplitude.abs() <= PI) {
                    bad(format!("half-width {h0} ± {amplitude} leaves (0, π]"))
                } else {
                    Ok(())
                }
            }
            AxialRegion::OffsetDisk { center, radius } if !(radius > 0.0 && center >= 0.0) => {
                bad(format!("offset disk ({center}, {radius})"))
            }
            _ => Ok(()),
        }
    }

    /// Radial range and half-width function; `h` may be `π` on part of it.
    fn profile(&self) -> (f64, f64, impl Fn(f64) -> f64 + '_) {
        let (lo, hi) = match *self {
            AxialRegion::Ball { radius } => (0.0, radius),
            AxialRegion::Annulus { inner, outer }
            | AxialRegion::AnnularSector { inner, outer, .. }
            | AxialRegion::WavySector { inner, outer, .. } => (inner, outer),
            AxialRegion::OffsetDisk { center, radius } => ((center - radius).max(0.0), center + radius),
        };
        let h = move |r: f64| match *self {
            AxialRegion::Ball { .. } | AxialRegion::Annulus { .. } => PI,
            AxialRegion::AnnularSector { half_angle, .. } => half_angle,
            AxialRegion::WavySector { inner, h0, amplitude, waves, .. } => h0 + amplitude * (waves * (r - inner)).sin(),
            AxialRegion::OffsetDisk { center, radius } => {
                if r <= radius - center {
                    PI
                } else {
                    let c = (r * r + center * center - radius * radius) / (2.0 * r * center);
                    c.clamp(-1.0, 1.0).acos()
                }
            }
        };
        (lo, hi, h)
    }

    /// Points where `h` has a kink, to split quadratures.
    fn breaks(&self) -> Vec<f64> {
        match *self {
            AxialRegion::OffsetDisk { center, radius } if radius > center => alloc::vec![radius - center],
            _ => Vec::new(),
        }
    }
}

fn planar(law: &RadialDensity) -> Result<()> {
    if law.dimension() != 2 {
        return Err(Error::Domain(format!("axial regions are planar, law has d = {}", law.dimension())));
    }
    Ok(())
}

fn inside_domain(law: &RadialDensity, region: &AxialRegion) -> Result<()> {
    region.validate()?;
    let r = region.outer_radius();
    if r > law.domain_radius() {
        return Err(Error::Range(format!("region reaches r = {r} beyond the domain radius {}", law.domain_radius())));
    }
    Ok(())
}

fn integrate_split<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, breaks: &[f64]) -> Result<f64> {
    let mut pts = alloc::vec![lo];
    pts.extend(breaks.iter().copied().filter(|&b| b > lo && b < hi));
    pts.push(hi);
    let mut s = 0.0;
    for w in pts.windows(2) {
        // sqrt-type behaviour at both ends of each piece
        let (a, b) = (w[0], w[1]);
        let l = b - a;
        let g = |t: f64| {
            let r = a + l * t * t * (3.0 - 2.0 * t);
            f(r) * 6.0 * l * t * (1.0 - t)
        };
        s += integrate(g, 0.0, 0.5, tol())?.value + integrate(g, 0.5, 1.0, tol())?.value;
    }
    Ok(s)
}

/// `∫_A F(|x|) dμ`.
pub fn region_integral<F: Fn(f64) -> f64>(law: &RadialDensity, region: &AxialRegion, weight: F) -> Result<f64> {
    planar(law)?;
    inside_domain(law, region)?;
    let (lo, hi, h) = region.profile();
    integrate_split(|r| 2.0 * h(r) * weight(r) * law.density(r) * r, lo, hi, &region.breaks())
}

/// `μ(A)`.
pub fn axial_measure(law: &RadialDensity, region: &AxialRegion) -> Result<f64> {
    if let AxialRegion::Ball { radius } = *region {
        inside_domain(law, region)?;
        planar(law)?;
        return law.mass_within(radius);
    }
    region_integral(law, region, |_| 1.0)
}

/// `μ⁺(∂A)`.
pub fn axial_perimeter(law: &RadialDensity, region: &AxialRegion) -> Result<f64> {
    planar(law)?;
    inside_domain(law, region)?;
    let arc = |r: f64, h: f64| if r > 0.0 { 2.0 * h * r * law.density(r) } else { 0.0 };
    match *region {
        AxialRegion::Ball { radius } => law.ball_perimeter(radius),
        AxialRegion::Annulus { inner, outer } => Ok(arc(inner, PI) + arc(outer, PI)),
        AxialRegion::AnnularSector { inner, outer, half_angle } => {
            let sides = if half_angle < PI {
                2.0 * integrate(|r| law.density(r), inner, outer, tol())?.value
            } else {
                0.0
            };
            Ok(sides + arc(inner, half_angle) + arc(outer, half_angle))
        }
        AxialRegion::WavySector { inner, outer, h0, amplitude, waves } => {
            let h = |r: f64| h0 + amplitude * (waves * (r - inner)).sin();
            let dh = |r: f64| amplitude * waves * (waves * (r - inner)).cos();
            let len = |r: f64| law.density(r) * (1.0 + r * r * dh(r) * dh(r)).sqrt();
            let sides = 2.0 * integrate(len, inner, outer, tol())?.value;
            Ok(sides + arc(inner, h(inner)) + arc(outer, h(outer)))
        }
        AxialRegion::OffsetDisk { center, radius } => {
            let g = |phi: f64| {
                let (x, y) = (center + radius * phi.cos(), radius * phi.sin());
                law.density((x * x + y * y).sqrt())
            };
            // even in φ
            Ok(2.0 * radius * integrate(g, 0.0, PI, tol())?.value)
        }
    }
}

fn require_plus(law: &RadialDensity) -> Result<()> {
    if law.sign() != Sign::Plus {
        return Err(Error::Precondition("the bound needs a weight e^{+v}".into()));
    }
    Ok(())
}

/// `∫_A ((d − 1)/r + v'(r)) dμ`, a lower bound for `μ⁺(∂A)` when `v' ≥ 0`.
/// Centered balls are allowed in any dimension.
pub fn divergence_lower_bound(law: &RadialDensity, region: &AxialRegion) -> Result<f64> {
    require_plus(law)?;
    let d1 = law.dimension() as f64 - 1.0;
    if let AxialRegion::Ball { radius } = *region {
        region.validate()?;
        if radius > law.domain_radius() {
            return Err(Error::Range(format!("ball radius {radius} beyond the domain")));
        }
        // (d−1)/r · shell density is integrable at 0 for d ≥ 2 and vanishes for d = 1
        let f = |r: f64| {
            let k = if r > 0.0 { d1 / r } else { 0.0 };
            (k + law.dv(r)) * law.shell_density(r)
        };
        return Ok(integrate(f, 0.0, radius, tol())?.value);
    }
    region_integral(law, region, |r| 1.0 / r + law.dv(r))
}

/// Whether `v'` vanishes somewhere on the radial range of the region, which
/// makes `∇V/|∇V|` undefined there (the bound stays valid).
pub fn divergence_bound_degenerate(law: &RadialDensity, region: &AxialRegion) -> bool {
    let (lo, hi, _) = region.profile();
    (0..=256).any(|i| law.dv(lo + (hi - lo) * i as f64 / 256.0) <= 0.0)
}

/// `∫_{B_{r(m)}} F dμ` with `μ(B_{r(m)}) = m`; for nondecreasing `F` it
/// bounds `∫_A F dμ` from below over all sets of measure `m`.
pub fn ball_bound_is_minimal<F: Fn(f64) -> f64>(law: &RadialDensity, weight: F, m: f64) -> Result<f64> {
    let r = law.radius_for_measure(m)?;
    Ok(integrate(|s| weight(s) * law.shell_density(s), 0.0, r, tol())?.value)
}

/// Outcome of the big-ball test, condition by condition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BigBallCertificate {
    pub holds: bool,
    /// `|f| ≤ 1` on the grid.
    pub bounded: bool,
    /// `f(r0) = 1`.
    pub endpoint: bool,
    /// `F = f' + f (v' + (d − 1)/r)` nondecreasing.
    pub monotone: bool,
    /// Smallest secant slope of `F` on the checked pairs, after crediting
    /// rounding error.
    pub worst_slope: f64,
}

/// Uniform grid points of the certificate check.
pub const CERTIFICATE_GRID: usize = 20_000;
/// Slope tolerance of the monotonicity check, on top of the rounding credit.
pub const CERTIFICATE_SLOPE_TOL: f64 = 1e-9;

/// Checks the three conditions of the big-ball criterion for `B_{r0}` with
/// the test function `f` (and its derivative `df`) on a dense grid of
/// `(0, 4 max(r0, 1) + 4]`, plus secants from `r0` down to `1e-8 r0`.
pub fn bigballs_report<F: Fn(f64) -> f64, G: Fn(f64) -> f64>(
    law: &RadialDensity,
    f: F,
    df: G,
    r0: f64,
) -> Result<BigBallCertificate> {
    require_plus(law)?;
    if !(r0 > 0.0) {
        return Err(Error::Domain(format!("r0 must be positive, got {r0}")));
    }
    let d1 = law.dimension() as f64 - 1.0;
    let top = 4.0 * r0.max(1.0) + 4.0;
    let mut bounded = true;
    let mut eval = |r: f64| -> Result<f64> {
        let (fr, dfr) = (f(r), df(r));
        if !fr.is_finite() || !dfr.is_finite() {
            return Err(Error::Domain(format!("test function undefined at r = {r}")));
        }
        if fr.abs() > 1.0 + 1e-12 {
            bounded = false;
        }
        Ok(dfr + fr * (law.dv(r) + d1 / r))
    };
    // secant slope of F, credited with the rounding error of the difference
    let slope = |(r1, f1): (f64, f64), (r2, f2): (f64, f64)| {
        ((f2 - f1) + 4.0 * f64::EPSILON * (f1.abs() + f2.abs())) / (r2 - r1)
    };
    let n = CERTIFICATE_GRID;
    let mut worst = f64::INFINITY;
    let mut prev: Option<(f64, f64)> = None;
    for i in 1..=n {
        let r = top * i as f64 / n as f64;
        let here = (r, eval(r)?);
        if let Some(p) = prev {
            worst = worst.min(slope(p, here));
        }
        prev = Some(here);
    }
    // the test functions of interest have a kink at r0, where a decrease of F
    // can hide between uniform points; add secants from r0 at shrinking scales
    let at = (r0, eval(r0)?);
    for k in 8..=64 {
        let delta = r0 * 10f64.powf(-(k as f64) / 8.0);
        if r0 - delta > 0.0 {
            worst = worst.min(slope((r0 - delta, eval(r0 - delta)?), at));
        }
        if r0 + delta <= top {
            worst = worst.min(slope(at, (r0 + delta, eval(r0 + delta)?)));
        }
    }
    let endpoint = (f(r0) - 1.0).abs() <= 1e-15;
    let monotone = worst >= -CERTIFICATE_SLOPE_TOL;
    Ok(BigBallCertificate { holds: bounded && endpoint && monotone, bounded, endpoint, monotone, worst_slope: worst })
}

/// [`bigballs_report`] reduced to its verdict.
pub fn bigballs_certificate<F: Fn(f64) -> f64, G: Fn(f64) -> f64>(
    law: &RadialDensity,
    f: F,
    df: G,
    r0: f64,
) -> Result<bool> {
    Ok(bigballs_report(law, f, df, r0)?.holds)
}

/// The cubic test function `f = (3/(2s))(r − r³/(3s²))` on `[0, s]`, `1` beyond,
/// with its derivative.
pub fn cubic_test_function(s: f64) -> (impl Fn(f64) -> f64, impl Fn(f64) -> f64) {
    let f = move |r: f64| if r < s { 1.5 / s * (r - r * r * r / (3.0 * s * s)) } else { 1.0 };
    let df = move |r: f64| if r < s { 1.5 / s * (1.0 - r * r / (s * s)) } else { 0.0 };
    (f, df)
}

/// `e^{r^{a+1}/(a+1)}` in dimension `d`, the weight with `v' = r^a`.
pub fn power_derivative_law(a: f64, d: u32) -> Result<RadialDensity> {
    if !(a > 0.0) {
        return Err(Error::Domain(format!("need a > 0, got {a}")));
    }
    RadialDensity::custom(
        Sign::Plus,
        alloc::sync::Arc::new(move |r: f64| r.powf(a + 1.0) / (a + 1.0)),
        alloc::sync::Arc::new(move |r: f64| r.powf(a)),
        d,
        1.0,
        false,
    )
}

/// Radius above which the cubic certifies balls for `v' = r^a`:
/// `((d + 2)/a)^{1/(a+1)}`.
pub fn bigball_threshold(a: f64, d: u32) -> f64 {
    ((d as f64 + 2.0) / a).powf(1.0 / (a + 1.0))
}

/// Samples `v'' ≥ −1e-10` and `v' ≥ 0` on the domain (or `[0, 50]`).
pub fn check_log_convex(law: &RadialDensity) -> Result<()> {
    require_plus(law)?;
    let top = law.domain_radius().min(50.0);
    let n = 2000;
    for i in 1..n {
        let r = top * i as f64 / n as f64;
        let h = 1e-5 * r.max(1e-3);
        let v2 = (law.dv(r + h) - law.dv(r - h)) / (2.0 * h);
        if law.dv(r) < 0.0 || v2 < -1e-10 * (1.0 + law.dv(r).abs() / h) {
            return Err(Error::Precondition(format!("potential is not convex and increasing at r = {r}")));
        }
    }
    Ok(())
}

/// `μ⁺(∂A) / μ⁺(∂B_r)` with `μ(B_r) = μ(A)`, for a log-convex law.
pub fn ball_ratio_check(law: &RadialDensity, region: &AxialRegion) -> Result<f64> {
    check_log_convex(law)?;
    let m = axial_measure(law, region)?;
    let r = law.radius_for_measure(m)?;
    Ok(axial_perimeter(law, region)? / law.ball_perimeter(r)?)
}

/// [`ball_ratio_check`] for a ring-discretized set.
pub fn ball_ratio_check_set(set: &AngularSet) -> Result<f64> {
    let law = set.law();
    check_log_convex(law)?;
    let r = law.radius_for_measure(set_measure(set))?;
    Ok(set_perimeter(set) / law.ball_perimeter(r)?)
}

/// The lower bound `1/√(1 + π²)` for the ratio.
pub fn ratio_lower_bound() -> f64 {
    1.0 / (1.0 + PI * PI).sqrt()
}

// ---------------------------------------------------------------------------
// one-dimensional model

/// `ν_A = dx / cos(Ax)` on `(−π/(2A), π/(2A))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelMeasure1D {
    a: f64,
}

impl ModelMeasure1D {
    pub fn new(a: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::Domain(format!("A must be positive, got {a}")));
        }
        Ok(Self { a })
    }
    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn half_width(&self) -> f64 {
        PI / (2.0 * self.a)
    }
    /// `V(x) = −ln cos(Ax)`.
    pub fn potential(&self, x: f64) -> f64 {
        -(self.a * x).cos().ln()
    }
    pub fn density(&self, x: f64) -> f64 {
        1.0 / (self.a * x).cos()
    }
    /// `ν_A((0, x))` in closed form, `artanh(sin Ax)/A`.
    pub fn cdf_from_zero(&self, x: f64) -> f64 {
        (self.a * x).sin().atanh() / self.a
    }
}

/// `e^{At/2} + e^{−At/2}`.
pub fn model_profile_1d(a: f64, t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("t must be nonnegative, got {t}")));
    }
    ModelMeasure1D::new(a)?;
    Ok(2.0 * (0.5 * a * t).cosh())
}

/// Boundary weight `2/cos(Ax)` of the symmetric interval `(−x, x)` with
/// `ν_A`-measure `t`, with `x` found by root-finding on the quadrature of the
/// density. The unknown is the gap `y = π/(2A) − x`, so the weight
/// `2/sin(Ay)` keeps full precision near the end of the domain.
pub fn interval_profile_1d(a: f64, t: f64) -> Result<f64> {
    let nu = ModelMeasure1D::new(a)?;
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("t must be nonnegative, got {t}")));
    }
    if t == 0.0 {
        return Ok(2.0);
    }
    let hw = nu.half_width();
    // ν((−x, x)) = 2 ∫_y^{hw} csc(As) ds, integrated in log s
    let mass = |y: f64| -> f64 {
        let g = |z: f64| {
            let s = z.exp();
            s / (a * s).sin()
        };
        integrate(g, y.ln(), hw.ln(), Tolerance::new(1e-15, 1e-14)).map(|q| 2.0 * q.value).unwrap_or(f64::NAN)
    };
    let mut lo = hw * (-0.5 * a * t).exp() * 0.25;
    let mut guard = 0;
    while !(mass(lo) > t) {
        lo *= 1e-3;
        guard += 1;
        if guard > 100 {
            return Err(Error::Range(format!("measure {t} not reached")));
        }
    }
    let opts = RootOptions { xtol_abs: 0.0, xtol_rel: 1e-15, ftol: 0.0, max_iter: 300 };
    let root = illinois(|y| mass(y) - t, lo, hw, opts)?;
    Ok(2.0 / (a * root.x).sin())
}

// ---------------------------------------------------------------------------
// transport

/// Even target potential `W` with `W(0) = 0`, on `(−half_width, half_width)`.
/// The target measure is `e^{W} dx`.
#[derive(Clone)]
pub struct TargetPotential {
    pub w: RealFn,
    pub half_width: f64,
    pub label: String,
}

impl core::fmt::Debug for TargetPotential {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("TargetPotential").field("label", &self.label).field("half_width", &self.half_width).finish()
    }
}

impl TargetPotential {
    pub fn new(w: RealFn, half_width: f64, label: &str) -> Self {
        Self { w, half_width, label: label.into() }
    }
    /// `W(x) = −ln cos(Bx)`, the potential of `ν_B`.
    pub fn model(b: f64) -> Result<Self> {
        let nu = ModelMeasure1D::new(b)?;
        Ok(Self::new(alloc::sync::Arc::new(move |x: f64| -(b * x).cos().ln()), nu.half_width(), &format!("model:{b}")))
    }
    /// `W ≡ 0` on `(−half_width, half_width)`.
    pub fn flat(half_width: f64) -> Self {
        Self::new(alloc::sync::Arc::new(|_| 0.0), half_width, "flat")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransportOptions {
    /// Grid points on `x ≥ 0`.
    pub grid: usize,
    /// Build the map even when the hypotheses fail.
    pub force: bool,
}

impl Default for TransportOptions {
    fn default() -> Self {
        Self { grid: 10_000, force: false }
    }
}

/// Monotone map `T` pushing `ν_A` forward to `e^{W} dx`.
#[derive(Debug, Clone)]
pub struct TransportMap {
    pub source: ModelMeasure1D,
    pub target: TargetPotential,
    /// `(x, T(x))`, increasing in `x`, covering `[−x_max, x_max]`.
    pub samples: Vec<(f64, f64)>,
    /// Largest centered finite-difference slope.
    pub lipschitz_estimate: f64,
    /// Smallest centered finite-difference slope.
    pub min_slope: f64,
    /// `sup |ν_A((0, x)) − μ((0, T(x)))|` with both sides recomputed.
    pub pushforward_residual: f64,
    /// Whether the hypotheses on `W` held on the check grid.
    pub hypotheses_hold: bool,
}

/// Checks evenness, `W(0) = 0`, convexity and `W'' e^{−2W} ≥ A²` (relative
/// 1e-6) on 0.95 of the target domain, with central differences of step
/// `1e-4` of the checked width.
pub fn check_transport_hypotheses(a: f64, target: &TargetPotential) -> Result<()> {
    let w = &target.w;
    if !((w)(0.0).abs() <= 1e-12) {
        return Err(Error::Precondition(format!("W(0) = {} is not 0", (w)(0.0))));
    }
    let width = if target.half_width.is_finite() { 0.95 * target.half_width } else { 10.0 * PI / (2.0 * a) };
    let h = 1e-4 * width;
    let n = 2000;
    for i in 0..=n {
        let x = width * i as f64 / n as f64;
        let (wx, wm) = ((w)(x), (w)(-x));
        if !((wx - wm).abs() <= 1e-10 * (1.0 + wx.abs())) {
            return Err(Error::Precondition(format!("W is not even at x = {x}")));
        }
        let x = x.min(width - h);
        let w2 = ((w)(x + h) - 2.0 * (w)(x) + (w)(x - h)) / (h * h);
        if w2 < 0.0 {
            return Err(Error::Precondition(format!("W is not convex at x = {x}")));
        }
        if w2 * (-2.0 * (w)(x)).exp() < a * a * (1.0 - 1e-6) {
            return Err(Error::Precondition(format!("W'' e^(-2W) < A² at x = {x}")));
        }
    }
    Ok(())
}

/// Builds `T = Q⁻¹ ∘ S` with `S(x) = ν_A((0, x))` and `Q(y) = ∫_0^y e^{W}`,
/// both by adaptive quadrature, on `[0, 0.95 π/(2A)]`, and reflects it.
pub fn monotone_transport_1d(a: f64, target: TargetPotential, opts: TransportOptions) -> Result<TransportMap> {
    let source = ModelMeasure1D::new(a)?;
    let hypotheses_hold = match check_transport_hypotheses(a, &target) {
        Ok(()) => true,
        Err(e) if !opts.force => return Err(e),
        Err(_) => false,
    };
    if opts.grid < 3 {
        return Err(Error::Domain("transport grid needs at least 3 points".into()));
    }
    let w = target.w.clone();
    let q_density = |y: f64| (w)(y).exp();
    let qt = Tolerance::new(1e-15, 1e-14);
    let x_max = 0.95 * source.half_width();
    let n = opts.grid;
    let h = x_max / (n - 1) as f64;
    let mut pos: Vec<(f64, f64)> = Vec::with_capacity(n);
    pos.push((0.0, 0.0));
    let (mut s, mut y, mut q) = (0.0f64, 0.0f64, 0.0f64);
    let mut step = h;
    for i in 1..n {
        let x0 = (i - 1) as f64 * h;
        let x1 = i as f64 * h;
        s += integrate(|t| source.density(t), x0, x1, qt)?.value;
        // bracket the next y by doubling steps from the previous one
        let need = s - q;
        let mut hi = y + step;
        let mut q_hi;
        loop {
            if hi >= target.half_width {
                hi = y + 0.5 * (target.half_width - y);
            }
            q_hi = integrate(&q_density, y, hi, qt)?.value;
            if q_hi >= need {
                break;
            }
            if target.half_width - hi < 1e-300 {
                return Err(Error::Range("target mass exhausted before the source".into()));
            }
            step *= 2.0;
            hi = y + step;
        }
        let root = illinois(
            |z| integrate(&q_density, y, z, qt).map(|r| r.value).unwrap_or(f64::NAN) - need,
            y,
            hi,
            RootOptions { xtol_abs: 0.0, xtol_rel: 1e-16, ftol: 0.0, max_iter: 200 },
        )?;
        let y1 = root.x;
        q += integrate(&q_density, y, y1, qt)?.value;
        step = (y1 - y).max(1e-300) * 1.5;
        y = y1;
        pos.push((x1, y1));
    }

    // pushforward residual, both CDFs recomputed from 0
    let mut residual: f64 = 0.0;
    for &(x, t) in pos.iter().step_by((n / 200).max(1)) {
        let sx = integrate(|u| source.density(u), 0.0, x, qt)?.value;
        let qy = integrate(&q_density, 0.0, t, qt)?.value;
        residual = residual.max((sx - qy).abs());
    }

    let mut samples: Vec<(f64, f64)> = pos.iter().skip(1).rev().map(|&(x, t)| (-x, -t)).collect();
    samples.extend(pos.iter().copied());
    let (mut lip, mut min_slope) = (f64::NEG_INFINITY, f64::INFINITY);
    for w in samples.windows(3) {
        let slope = (w[2].1 - w[0].1) / (w[2].0 - w[0].0);
        lip = lip.max(slope);
        min_slope = min_slope.min(slope);
    }
    Ok(TransportMap {
        source,
        target,
        samples,
        lipschitz_estimate: lip,
        min_slope,
        pushforward_residual: residual,
        hypotheses_hold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exp_r(cut: f64) -> RadialDensity {
        RadialDensity::exp_r(2).with_domain_radius(cut).unwrap()
    }

    #[test]
    fn divergence_equality_on_balls() {
        for &r in &[0.5, 1.0, 2.0] {
            let b = divergence_lower_bound(&exp_r(10.0), &AxialRegion::Ball { radius: r }).unwrap();
            assert!((b - 2.0 * PI * r * r.exp()).abs() < 1e-9 * b);
        }
    }

    #[test]
    fn ball_region_ratio_is_one() {
        let law = exp_r(5.0);
        let r = ball_ratio_check(&law, &AxialRegion::Ball { radius: 1.7 }).unwrap();
        assert!((r - 1.0).abs() < 1e-9);
    }

    #[test]
    fn offset_disk_through_origin_matches_ball() {
        let law = RadialDensity::lebesgue(2);
        let d = AxialRegion::OffsetDisk { center: 0.3, radius: 1.0 };
        assert!((axial_measure(&law, &d).unwrap() - PI).abs() < 1e-9);
        assert!((axial_perimeter(&law, &d).unwrap() - 2.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn constant_weight_gives_measure() {
        let law = exp_r(6.0);
        let m = axial_measure(&law, &AxialRegion::Ball { radius: 2.0 }).unwrap();
        let v = ball_bound_is_minimal(&law, |_| 1.0, m).unwrap();
        assert!((v - m).abs() < 1e-9 * m);
    }

    #[test]
    fn corollary_examples() {
        let law = power_derivative_law(1.0, 2).unwrap();
        let (f, df) = cubic_test_function(2.0);
        assert!(bigballs_certificate(&law, &f, &df, 2.0).unwrap());
        let rep = bigballs_report(&law, &f, &df, 1.0).unwrap();
        assert!(!rep.holds && !rep.endpoint);
    }

    #[test]
    fn model_profile_values() {
        assert_eq!(model_profile_1d(1.0, 0.0).unwrap(), 2.0);
        assert!((model_profile_1d(2.0, 1.0).unwrap() - 3.086161269630488).abs() < 1e-12);
        for &(a, t) in &[(1.0, 0.3), (2.0, 10.0), (0.5, 7.0)] {
            let p = interval_profile_1d(a, t).unwrap();
            assert!((p - model_profile_1d(a, t).unwrap()).abs() < 1e-8, "{a} {t} {p}");
        }
    }

    #[test]
    fn flat_target_fails_hypotheses() {
        let r = monotone_transport_1d(1.0, TargetPotential::flat(10.0), TransportOptions::default());
        assert!(matches!(r, Err(Error::Precondition(_))));
    }

    #[test]
    fn identity_transport() {
        let m = monotone_transport_1d(1.0, TargetPotential::model(1.0).unwrap(), TransportOptions { grid: 2000, force: false })
            .unwrap();
        assert!((m.lipschitz_estimate - 1.0).abs() < 1e-10 && (m.min_slope - 1.0).abs() < 1e-10);
        assert!(m.pushforward_residual < 1e-8);
    }
}
