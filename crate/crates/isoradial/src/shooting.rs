//! Shooting in `(a, λ)` for candidate isoperimetric curves of the
//! exponential power laws, empirical profiles, and the critical exponents.
//!
//! The closure defect `g(λ) = π − |f(r1(λ))|` is negative for small `λ > 0`
//! (the curve turns by more than π) and grows as the homogeneous part closes
//! the curve earlier. A smooth closed curve is a zero of `g`.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)] // inherent float methods shadow it when std is linked
use num_traits::Float;

use crate::analysis::{classify, summarize, CurveClass, RegionSummary, DEFAULT_TOL};
use crate::density::RadialDensity;
use crate::error::{Error, Result};
use crate::roots::{bisect, bisect_predicate, illinois, RootOptions};
use crate::stationary::{
    existence_interval, full_rotation, solve_curve, solve_u, CurveOptions, CurveSolution, Existence, Rotation,
    StationaryParams, USolution,
};

/// Closure tolerance on `|f(r1)| − π`.
pub const CLOSURE_TOL: f64 = 1e-8;
/// Tolerance on the measure in family searches.
pub const MEASURE_TOL: f64 = 1e-6;
/// Points of the log-spaced `λ` scan.
pub const LAMBDA_GRID: usize = 64;
/// Lower end of the default `λ` scan, relative to the largest admissible `λ`.
/// Below it smooth closures are not representable anyway.
pub const LAMBDA_SPAN: f64 = 1e-250;
/// Upper end of the default scan, relative to the largest admissible `λ`.
/// At `λ_max` the curve degenerates to a centered circle, where `g → 0`
/// without a smooth closure, so the scan stays clear of it.
pub const LAMBDA_TOP: f64 = 1.0 - 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CandidateFamily {
    /// `λ = 0` curves with rotation below π.
    NonCompact,
    /// Smooth closed curves `λ = λ*(a)`.
    CompactSmooth,
    /// Centered balls.
    Ball,
    /// The half-plane through the origin (measure 1/2 only).
    HalfPlane,
}

impl CandidateFamily {
    pub fn name(&self) -> &'static str {
        match self {
            CandidateFamily::NonCompact => "NonCompact",
            CandidateFamily::CompactSmooth => "CompactSmooth",
            CandidateFamily::Ball => "Ball",
            CandidateFamily::HalfPlane => "HalfPlane",
        }
    }
}

impl core::fmt::Display for CandidateFamily {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone)]
pub struct ShootingResult {
    pub a: f64,
    pub lambda: f64,
    pub curve: CurveSolution,
    pub curve_class: CurveClass,
    pub summary: RegionSummary,
    /// `|f(r1)| − π`; zero for balls and half-planes.
    pub residual: f64,
    pub iterations: usize,
    /// The candidate set is the complement of the region in `summary`.
    pub complement: bool,
    /// Whether `g` was nondecreasing on the `λ` scan up to the bracketing
    /// sign change and positive beyond it.
    pub monotone_on_grid: bool,
}

impl ShootingResult {
    /// Measure of the candidate set (accounting for `complement`).
    pub fn candidate_measure(&self) -> f64 {
        if self.complement {
            self.summary.complement_measure.unwrap_or(f64::NAN)
        } else {
            self.summary.measure
        }
    }
}

fn power_law(alpha: f64) -> Result<RadialDensity> {
    RadialDensity::power_law(alpha)
}

fn u_for(law: &RadialDensity, a: f64, lambda: f64) -> Result<USolution> {
    solve_u(&StationaryParams::new(law.clone(), a, lambda)?)
}

/// Rotation of the `(a, λ)` curve over its existence interval.
pub fn rotation_at(law: &RadialDensity, a: f64, lambda: f64) -> Result<(Rotation, bool)> {
    let u = u_for(law, a, lambda)?;
    let iv = existence_interval(&u)?.interval()?;
    Ok((full_rotation(&u, &iv)?, iv.r1.is_none()))
}

/// `g(λ) = π − |f(r1)|`; `−∞` for unbounded or divergent curves.
pub fn closure_defect(law: &RadialDensity, a: f64, lambda: f64) -> Result<f64> {
    closure_defect_with_error(law, a, lambda).map(|(g, _)| g)
}

/// [`closure_defect`] and the quadrature error estimate behind it.
pub fn closure_defect_with_error(law: &RadialDensity, a: f64, lambda: f64) -> Result<(f64, f64)> {
    let (rot, unbounded) = rotation_at(law, a, lambda)?;
    if unbounded || rot.is_infinite() {
        return Ok((f64::NEG_INFINITY, 0.0));
    }
    Ok((PI - rot.value.abs(), rot.error))
}

fn nonempty(law: &RadialDensity, a: f64, lambda: f64) -> bool {
    matches!(u_for(law, a, lambda).and_then(|u| existence_interval(&u)), Ok(Existence::Interval(_)))
}

/// Largest `λ > 0` with a non-empty existence interval.
pub fn lambda_max(law: &RadialDensity, a: f64) -> Result<f64> {
    let mut hi = 1.0;
    let mut n = 0;
    while nonempty(law, a, hi) {
        hi *= 16.0;
        n += 1;
        if n > 40 {
            return Err(Error::Domain(format!("existence interval never closes for a = {a}")));
        }
    }
    let mut lo = hi / 16.0;
    let mut m = 0;
    while !nonempty(law, a, lo) {
        lo *= 1e-8;
        m += 1;
        if m > 40 {
            return Err(Error::EmptyInterval);
        }
    }
    let opts = RootOptions { xtol_abs: 0.0, xtol_rel: 1e-13, ..RootOptions::default() };
    let (last, _) = bisect_predicate(|y| !nonempty(law, a, y.exp()), lo.ln(), hi.ln(), opts)?;
    Ok(last.exp())
}

fn log_points(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
}

fn finish(law: &RadialDensity, a: f64, lambda: f64, iterations: usize, monotone: bool) -> Result<ShootingResult> {
    let params = StationaryParams::new(law.clone(), a, lambda)?;
    let curve = solve_curve(&params, CurveOptions::default())?;
    let curve_class = classify(&curve, DEFAULT_TOL)?;
    let summary = summarize(&curve)?;
    let residual = if curve.unbounded { f64::NAN } else { curve.f_end().abs() - PI };
    Ok(ShootingResult {
        a,
        lambda,
        curve,
        curve_class,
        summary,
        residual,
        iterations,
        complement: false,
        monotone_on_grid: monotone,
    })
}

/// Refines a `λ` bracket `[lo, hi]` of the defect (negative at `lo`).
fn refine_lambda(law: &RadialDensity, a: f64, lo: f64, hi: f64) -> Result<(f64, usize)> {
    let mut failure = None;
    let mut g = |y: f64| match closure_defect(law, a, y.exp()) {
        Ok(v) if v == f64::NEG_INFINITY => -PI,
        Ok(v) => v,
        Err(e) => {
            failure.get_or_insert(e);
            f64::NAN
        }
    };
    let opts = RootOptions { xtol_abs: 1e-15, xtol_rel: 0.0, ftol: 0.0, max_iter: 300 };
    let root = illinois(&mut g, lo.ln(), hi.ln(), opts);
    if let Some(e) = failure {
        return Err(e);
    }
    let root = root?;
    if !(root.fx.abs() <= CLOSURE_TOL) {
        return Err(Error::NotConverged { estimate: root.x.exp(), error: root.fx.abs() });
    }
    Ok((root.x.exp(), root.iterations))
}

/// Smooth closure `λ*(a)` for a general law; `bracket` defaults to
/// `[λ_max·10⁻²⁵⁰, λ_max·(1 − 10⁻³)]`.
pub fn find_lambda_smooth_in(law: &RadialDensity, a: f64, bracket: Option<(f64, f64)>) -> Result<ShootingResult> {
    if !(a > 0.0) {
        return Err(Error::Domain(format!("a must be positive, got {a}")));
    }
    let (lo, hi) = match bracket {
        Some((lo, hi)) if lo > 0.0 && hi > lo => (lo, hi),
        Some((lo, hi)) => return Err(Error::Domain(format!("bad bracket ({lo}, {hi})"))),
        None => {
            let lm = lambda_max(law, a)?;
            (lm * LAMBDA_SPAN, lm * LAMBDA_TOP)
        }
    };
    let grid = log_points(lo, hi, LAMBDA_GRID);
    let mut values = Vec::with_capacity(grid.len());
    let mut any = false;
    for &l in &grid {
        let g = match closure_defect_with_error(law, a, l) {
            Ok((v, err)) => {
                any = true;
                // a sign buried in quadrature noise is not used
                if v.abs() <= 10.0 * err {
                    f64::NAN
                } else {
                    v
                }
            }
            Err(Error::EmptyInterval) | Err(Error::Domain(_)) | Err(Error::NotConverged { .. }) => f64::NAN,
            Err(e) => return Err(e),
        };
        values.push(g);
    }
    if !any {
        return Err(Error::EmptyInterval);
    }
    // g rises to a positive maximum and falls back to 0+ at λ_max, so the
    // recorded property is: nondecreasing up to the crossing, positive after
    let single_crossing = |i: usize| {
        let before: Vec<f64> = values[..=i].iter().copied().filter(|v| !v.is_nan()).collect();
        before.windows(2).all(|w| w[1] >= w[0] - 1e-9) && values[i..].iter().all(|v| v.is_nan() || *v > 0.0)
    };
    for i in 1..grid.len() {
        let (g0, g1) = (values[i - 1], values[i]);
        if g0 < 0.0 && g1 >= 0.0 {
            let monotone = single_crossing(i);
            if g1 == 0.0 {
                return finish(law, a, grid[i], 0, monotone);
            }
            let (lambda, it) = refine_lambda(law, a, grid[i - 1], grid[i])?;
            return finish(law, a, lambda, it, monotone);
        }
    }
    Err(Error::NoSolution(format!(
        "closure defect has no sign change for a = {a} on [{lo:e}, {hi:e}]"
    )))
}

/// Smooth closure `λ*(a)` for the power law `C_α e^{−r^α}`.
pub fn find_lambda_smooth(alpha: f64, a: f64, bracket: Option<(f64, f64)>) -> Result<ShootingResult> {
    find_lambda_smooth_in(&power_law(alpha)?, a, bracket)
}

/// Smooth closure on the negative side `λ ∈ (−λ_neg, 0)`. Such curves turn
/// back through the axis and are reported, never used as candidates.
pub fn find_lambda_negative_in(law: &RadialDensity, a: f64, depth: f64) -> Result<ShootingResult> {
    let grid = log_points(depth * LAMBDA_SPAN, depth, LAMBDA_GRID);
    let mut prev: Option<(f64, f64)> = None;
    for &l in &grid {
        let g = match closure_defect(law, a, -l) {
            Ok(v) => v,
            Err(Error::EmptyInterval) | Err(Error::Domain(_)) => continue,
            Err(e) => return Err(e),
        };
        if let Some((lp, gp)) = prev {
            if gp < 0.0 && g >= 0.0 {
                let opts = RootOptions { xtol_abs: 1e-15, xtol_rel: 0.0, ftol: 0.0, max_iter: 300 };
                let root = illinois(
                    |y| closure_defect(law, a, -y.exp()).map(|v| v.max(-PI)).unwrap_or(f64::NAN),
                    lp.ln(),
                    l.ln(),
                    opts,
                )?;
                return finish(law, a, -root.x.exp(), root.iterations, false);
            }
        }
        prev = Some((l, g));
    }
    Err(Error::NoSolution(format!("no negative-λ closure for a = {a}")))
}

// ---------------------------------------------------------------------------
// families at prescribed measure

fn require_probability(law: &RadialDensity, m: f64) -> Result<()> {
    if !law.is_probability() {
        return Err(Error::Domain("family searches need a probability law".into()));
    }
    if !(m > 0.0 && m < 1.0) {
        return Err(Error::NoSolution(format!("target measure {m} outside (0, 1)")));
    }
    Ok(())
}

fn half_plane(law: &RadialDensity) -> Result<ShootingResult> {
    let params = StationaryParams::origin(law.clone(), 0.0)?;
    let curve = solve_curve(&params, CurveOptions::default())?;
    let summary = summarize(&curve)?;
    Ok(ShootingResult {
        a: 0.0,
        lambda: 0.0,
        curve_class: classify(&curve, DEFAULT_TOL)?,
        curve,
        summary,
        residual: 0.0,
        iterations: 0,
        complement: false,
        monotone_on_grid: true,
    })
}

fn ball(law: &RadialDensity, m: f64, complement: bool) -> Result<ShootingResult> {
    let r = law.radius_for_measure(if complement { 1.0 - m } else { m })?;
    let curve = CurveSolution::centered_circle(law.clone(), r)?;
    let summary = summarize(&curve)?;
    Ok(ShootingResult {
        a: 0.0,
        lambda: 0.0,
        curve_class: CurveClass::CompactClosedSmooth,
        curve,
        summary,
        residual: 0.0,
        iterations: 0,
        complement,
        monotone_on_grid: true,
    })
}

/// `a`-grid of the non-compact family.
fn noncompact_grid() -> Vec<f64> {
    log_points(1e-4, 1e2, 49)
}

/// Measure of the `λ = 0` region when the curve is simple and non-compact.
fn noncompact_measure(law: &RadialDensity, a: f64) -> Option<f64> {
    let p = StationaryParams::new(law.clone(), a, 0.0).ok()?;
    let c = solve_curve(&p, CurveOptions { samples: 65, sample_radius: None }).ok()?;
    if classify(&c, DEFAULT_TOL).ok()? != CurveClass::NonCompactSimple {
        return None;
    }
    crate::analysis::region_measure(&c).ok()
}

/// Finds the first bracket of `h` on `(x, h(x))` samples and refines it.
fn solve_on_grid<H: FnMut(f64) -> Option<f64>>(
    mut h: H,
    samples: &[(f64, Option<f64>)],
    target: f64,
) -> Option<Result<(f64, usize)>> {
    for w in samples.windows(2) {
        let ((x0, v0), (x1, v1)) = (w[0], w[1]);
        let (Some(v0), Some(v1)) = (v0, v1) else { continue };
        if (v0 - target) * (v1 - target) <= 0.0 {
            let opts = RootOptions { xtol_abs: 0.0, xtol_rel: 1e-12, ftol: 0.1 * MEASURE_TOL, max_iter: 200 };
            let root = illinois(|y| h(y.exp()).map(|v| v - target).unwrap_or(f64::NAN), x0.ln(), x1.ln(), opts);
            return Some(root.map(|r| (r.x.exp(), r.iterations)));
        }
    }
    None
}

fn noncompact(law: &RadialDensity, m: f64) -> Result<ShootingResult> {
    let (target, complement) = if m > 0.5 { (1.0 - m, true) } else { (m, false) };
    let samples: Vec<(f64, Option<f64>)> =
        noncompact_grid().into_iter().map(|a| (a, noncompact_measure(law, a))).collect();
    match solve_on_grid(|a| noncompact_measure(law, a), &samples, target) {
        Some(Ok((a, it))) => {
            let mut r = finish(law, a, 0.0, it, true)?;
            r.residual = 0.0;
            r.complement = complement;
            check_measure(&r, m)?;
            Ok(r)
        }
        Some(Err(e)) => Err(e),
        None if m == 0.5 => half_plane(law),
        None => Err(Error::NoSolution(format!("measure {m} not reached by the non-compact family"))),
    }
}

fn check_measure(r: &ShootingResult, m: f64) -> Result<()> {
    let got = r.candidate_measure();
    if (got - m).abs() <= MEASURE_TOL {
        Ok(())
    } else {
        Err(Error::NotConverged { estimate: got, error: (got - m).abs() })
    }
}

/// `a`-grid of the compact family; the upper end is extended while closures
/// keep appearing.
fn compact_grid() -> Vec<f64> {
    (0..=18).map(|i| 0.05 + 0.05 * i as f64).collect()
}

/// Compact-side measure of the smooth closed curve at `a`.
fn compact_measure(law: &RadialDensity, a: f64) -> Option<f64> {
    let r = find_lambda_smooth_in(law, a, None).ok()?;
    (r.curve_class == CurveClass::CompactClosedSmooth).then_some(r.summary.measure)
}

/// Compact-family member whose compact side (or, with `complement`, the
/// unbounded side) has measure `m`.
fn compact_side(law: &RadialDensity, m: f64, complement: bool) -> Result<ShootingResult> {
    let target = if complement { 1.0 - m } else { m };
    let samples: Vec<(f64, Option<f64>)> = compact_grid().into_iter().map(|a| (a, compact_measure(law, a))).collect();
    if samples.iter().all(|s| s.1.is_none()) {
        return Err(Error::NoSolution(format!("no smooth closed curve for {}", law.label())));
    }
    match solve_on_grid(|a| compact_measure(law, a), &samples, target) {
        Some(Ok((a, it))) => {
            let mut r = find_lambda_smooth_in(law, a, None)?;
            r.iterations += it;
            r.complement = complement;
            check_measure(&r, m)?;
            Ok(r)
        }
        Some(Err(e)) => Err(e),
        None => Err(Error::NoSolution(format!("measure {m} not reached by the compact family"))),
    }
}

/// Compact side first, then the complement.
fn compact(law: &RadialDensity, m: f64) -> Result<ShootingResult> {
    match compact_side(law, m, false) {
        Err(Error::NoSolution(_)) => compact_side(law, m, true),
        other => other,
    }
}

/// Candidate of measure `target_m` within one family of a probability law.
pub fn find_a_for_measure_in(law: &RadialDensity, target_m: f64, family: CandidateFamily) -> Result<ShootingResult> {
    require_probability(law, target_m)?;
    match family {
        CandidateFamily::NonCompact => noncompact(law, target_m),
        CandidateFamily::CompactSmooth => compact(law, target_m),
        CandidateFamily::Ball => ball(law, target_m, false),
        CandidateFamily::HalfPlane if target_m == 0.5 => half_plane(law),
        CandidateFamily::HalfPlane => Err(Error::NoSolution("half-planes through the origin have measure 1/2".into())),
    }
}

pub fn find_a_for_measure(alpha: f64, target_m: f64, family: CandidateFamily) -> Result<ShootingResult> {
    find_a_for_measure_in(&power_law(alpha)?, target_m, family)
}

// ---------------------------------------------------------------------------
// profile

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Competitor {
    pub family: CandidateFamily,
    /// The candidate is the complement of the family member of measure `1 − m`.
    pub complement: bool,
    pub perimeter: f64,
    pub a: f64,
    pub lambda: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProfilePoint {
    pub target_measure: f64,
    pub best_family: CandidateFamily,
    pub best_complement: bool,
    pub perimeter: f64,
    pub competitors: Vec<Competitor>,
}

impl ProfilePoint {
    /// Perimeter of the best competitor of a family, if it was found.
    pub fn family_perimeter(&self, family: CandidateFamily) -> Option<f64> {
        self.competitors
            .iter()
            .filter(|c| c.family == family)
            .map(|c| c.perimeter)
            .fold(None, |m: Option<f64>, p| Some(m.map_or(p, |m| m.min(p))))
    }
}

fn competitor(r: &ShootingResult, family: CandidateFamily, complement: bool) -> Competitor {
    Competitor { family, complement, perimeter: r.summary.perimeter, a: r.a, lambda: r.lambda }
}

/// Best candidate of measure `m` among the families.
pub fn profile_point_in(law: &RadialDensity, m: f64) -> Result<ProfilePoint> {
    require_probability(law, m)?;
    let mut comps = Vec::new();
    let half = (m - 0.5).abs() < 1e-12;
    if let Ok(r) = ball(law, m, false) {
        comps.push(competitor(&r, CandidateFamily::Ball, false));
    }
    if let Ok(r) = ball(law, m, true) {
        comps.push(competitor(&r, CandidateFamily::Ball, true));
    }
    if half {
        if let Ok(r) = half_plane(law) {
            comps.push(competitor(&r, CandidateFamily::HalfPlane, false));
        }
    }
    if let Ok(r) = noncompact(law, m) {
        // the a = 0 limit is the half-plane itself
        if r.a > 0.0 {
            comps.push(competitor(&r, CandidateFamily::NonCompact, r.complement));
        }
    }
    if let Ok(r) = compact_side(law, m, false) {
        comps.push(competitor(&r, CandidateFamily::CompactSmooth, false));
    }
    if let Ok(r) = compact_side(law, m, true) {
        comps.push(competitor(&r, CandidateFamily::CompactSmooth, true));
    }
    let best = pick_best(&comps).ok_or_else(|| Error::NoSolution(format!("no family reaches measure {m}")))?;
    Ok(ProfilePoint {
        target_measure: m,
        best_family: best.family,
        best_complement: best.complement,
        perimeter: best.perimeter,
        competitors: comps,
    })
}

/// Minimum perimeter; within a relative 1e-9 the half-plane wins.
fn pick_best(comps: &[Competitor]) -> Option<Competitor> {
    let min = comps.iter().map(|c| c.perimeter).fold(f64::INFINITY, f64::min);
    if !min.is_finite() {
        return None;
    }
    let close = |c: &&Competitor| c.perimeter <= min * (1.0 + 1e-9);
    comps
        .iter()
        .filter(close)
        .find(|c| c.family == CandidateFamily::HalfPlane)
        .or_else(|| comps.iter().find(|c| c.perimeter == min))
        .copied()
}

pub fn profile_point(alpha: f64, target_m: f64) -> Result<ProfilePoint> {
    profile_point_in(&power_law(alpha)?, target_m)
}

// ---------------------------------------------------------------------------
// critical exponents

/// Per-exponent data behind the threshold estimates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdSample {
    pub alpha: f64,
    /// `a` at which the `λ = 0` curve turns by exactly π.
    pub a1: Option<f64>,
    /// Measure of the region of that curve.
    pub m1: Option<f64>,
    /// Largest `λ = 0` rotation over the `a`-grid.
    pub sup_rotation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlphaThresholds {
    /// Exponent where `m1(α)` crosses 1/2.
    pub alpha0: f64,
    /// Exponent beyond which no `λ = 0` curve turns by π for any scanned `a`.
    pub alpha1: Option<f64>,
    /// Crossing of π by the rotation of `u = a r^{2−α}`.
    pub heuristic_alpha: f64,
    /// `a`-range scanned for the rotation supremum.
    pub a_range: (f64, f64),
    pub samples: Vec<ThresholdSample>,
}

/// `λ = 0` rotation `Δ_f(a)`; infinite for divergent or failing curves.
fn rotation_lambda0(law: &RadialDensity, a: f64) -> f64 {
    match rotation_at(law, a, 0.0) {
        Ok((r, _)) => r.delta(),
        Err(Error::Divergent(_)) => f64::INFINITY,
        Err(_) => f64::NAN,
    }
}

fn threshold_a_grid() -> Vec<f64> {
    log_points(1e-4, 1e2, 61)
}

/// `a1(α)`: first `a` on the grid where the rotation reaches π, refined.
pub fn a1_for(alpha: f64) -> Result<f64> {
    let law = power_law(alpha)?;
    let grid = threshold_a_grid();
    let mut prev: Option<(f64, f64)> = None;
    for &a in &grid {
        let d = rotation_lambda0(&law, a);
        if d.is_nan() {
            continue;
        }
        if let Some((ap, dp)) = prev {
            if dp < PI && d >= PI {
                let opts = RootOptions { xtol_abs: 0.0, xtol_rel: 1e-12, ftol: 0.0, max_iter: 200 };
                let root = illinois(
                    |y| {
                        let d = rotation_lambda0(&law, y.exp());
                        if d.is_infinite() {
                            PI
                        } else {
                            d - PI
                        }
                    },
                    ap.ln(),
                    a.ln(),
                    opts,
                )?;
                return Ok(root.x.exp());
            }
        }
        prev = Some((a, d));
    }
    Err(Error::NoSolution(format!("λ = 0 rotation stays below π for α = {alpha}")))
}

/// `(a1, m1)`: the measure of the region cut out by the critical `λ = 0` curve.
pub fn a1_m1(alpha: f64) -> Result<(f64, f64)> {
    let law = power_law(alpha)?;
    let a1 = a1_for(alpha)?;
    let c = solve_curve(&StationaryParams::new(law, a1, 0.0)?, CurveOptions { samples: 65, sample_radius: None })?;
    Ok((a1, crate::analysis::region_measure(&c)?))
}

/// `sup_a Δ_f(a, λ = 0)` over the scan grid.
pub fn sup_rotation(alpha: f64) -> Result<f64> {
    let law = power_law(alpha)?;
    Ok(threshold_a_grid()
        .into_iter()
        .map(|a| rotation_lambda0(&law, a))
        .filter(|d| !d.is_nan())
        .fold(f64::NEG_INFINITY, f64::max))
}

/// Rotation of the pure power `u = a r^{2−α}` (unbounded above
/// `r = a^{1/(α−1)}`).
pub fn heuristic_rotation(alpha: f64, a: f64) -> Result<f64> {
    if !(alpha > 1.0 && a > 0.0) {
        return Err(Error::Domain(format!("need α > 1 and a > 0, got α = {alpha}, a = {a}")));
    }
    let law = power_law(alpha)?;
    let p = 2.0 - alpha;
    let u = USolution::explicit(
        law,
        alloc::sync::Arc::new(move |r: f64| a * r.powf(p)),
        alloc::sync::Arc::new(move |r: f64| a * p * r.powf(p - 1.0)),
    );
    let iv = existence_interval(&u)?.interval()?;
    Ok(full_rotation(&u, &iv)?.delta())
}

/// `sup_a` of [`heuristic_rotation`] over `a_grid`.
pub fn heuristic_sup_rotation(alpha: f64, a_grid: &[f64]) -> Result<f64> {
    let mut best = f64::NEG_INFINITY;
    for &a in a_grid {
        best = best.max(heuristic_rotation(alpha, a)?);
    }
    Ok(best)
}

/// Exponent in `[lo, hi]` where the heuristic supremum crosses π.
pub fn heuristic_crossing(lo: f64, hi: f64, a_grid: &[f64]) -> Result<f64> {
    let opts = RootOptions { xtol_abs: 1e-7, xtol_rel: 0.0, ftol: 0.0, max_iter: 100 };
    let mut failure = None;
    let root = bisect(
        |al| match heuristic_sup_rotation(al, a_grid) {
            Ok(v) => v - PI,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        },
        lo,
        hi,
        opts,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    root.map(|r| r.x).map_err(|_| Error::Inconclusive(format!("heuristic does not cross π on [{lo}, {hi}]")))
}

/// Estimates `α0` and `α1` from a grid in `(1, 2)` refined by bisection.
pub fn estimate_alpha_thresholds(grid: &[f64]) -> Result<AlphaThresholds> {
    if grid.len() < 8 {
        return Err(Error::Domain(format!("need at least 8 exponents, got {}", grid.len())));
    }
    if grid.iter().any(|&a| !(a > 1.0 && a < 2.0)) || grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Domain("exponents must increase strictly within (1, 2)".into()));
    }
    let mut samples = Vec::with_capacity(grid.len());
    for &alpha in grid {
        let (a1, m1) = match a1_m1(alpha) {
            Ok((a, m)) => (Some(a), Some(m)),
            Err(Error::NoSolution(_)) => (None, None),
            Err(e) => return Err(e),
        };
        samples.push(ThresholdSample { alpha, a1, m1, sup_rotation: sup_rotation(alpha)? });
    }

    let alpha0 = {
        let br = samples.windows(2).find_map(|w| match (w[0].m1, w[1].m1) {
            (Some(x), Some(y)) if (x - 0.5) * (y - 0.5) <= 0.0 => Some((w[0].alpha, w[1].alpha)),
            _ => None,
        });
        let (lo, hi) = br.ok_or_else(|| Error::Inconclusive("m1(α) − 1/2 does not change sign on the grid".into()))?;
        let opts = RootOptions { xtol_abs: 1e-5, xtol_rel: 0.0, ftol: 0.0, max_iter: 60 };
        bisect(|al| a1_m1(al).map(|(_, m)| m - 0.5).unwrap_or(f64::NAN), lo, hi, opts)?.x
    };

    let alpha1 = samples
        .windows(2)
        .find(|w| w[0].sup_rotation >= PI && w[1].sup_rotation < PI)
        .map(|w| {
            let opts = RootOptions { xtol_abs: 1e-4, xtol_rel: 0.0, ftol: 0.0, max_iter: 60 };
            bisect(|al| sup_rotation(al).map(|s| s - PI).unwrap_or(f64::NAN), w[0].alpha, w[1].alpha, opts)
                .map(|r| r.x)
        })
        .transpose()?;

    let a_grid = log_points(1e-2, 1e2, 9);
    let heuristic_alpha = heuristic_crossing(1.4, 1.6, &a_grid)?;
    Ok(AlphaThresholds { alpha0, alpha1, heuristic_alpha, a_range: (1e-4, 1e2), samples })
}
