//! Taxonomy of stationary curves and the measure and weighted perimeter of
//! the regions they bound.
//!
//! The region of a curve `θ = ±f(r)` is `{|θ| < f(r)}` over the existence
//! interval. For closed smooth curves the reported `measure` is instead the
//! bounded side (it contains the origin), and `complement_measure` the
//! unbounded non-convex side.
//!
//! Measures are computed by parts, `(1/π)[f T]_{ends} + (1/π) ∫ T f' dr`
//! with `T(r) = μ(|x| > r)`, so the endpoint singularity of `f'` is handled by
//! the same substitution as the angle itself.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)] // inherent float methods shadow it when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::quad::Tolerance;
use crate::stationary::{CurveSolution, Start};

/// Closure tolerance used when an operation needs to know whether a curve
/// is closed and no tolerance is given.
pub const DEFAULT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CurveClass {
    NonCompactSimple,
    SelfIntersecting,
    CompactNonClosed,
    CompactClosedSmooth,
    OriginStarting,
}

impl CurveClass {
    pub fn name(&self) -> &'static str {
        match self {
            CurveClass::NonCompactSimple => "NonCompactSimple",
            CurveClass::SelfIntersecting => "SelfIntersecting",
            CurveClass::CompactNonClosed => "CompactNonClosed",
            CurveClass::CompactClosedSmooth => "CompactClosedSmooth",
            CurveClass::OriginStarting => "OriginStarting",
        }
    }
}

impl core::fmt::Display for CurveClass {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

/// Assigns the taxonomy tag.
pub fn classify(curve: &CurveSolution, tol: f64) -> Result<CurveClass> {
    if curve.circle_radius().is_some() {
        return Ok(CurveClass::CompactClosedSmooth);
    }
    if curve.start() == Start::Origin {
        return Ok(CurveClass::OriginStarting);
    }
    let s = &curve.samples;
    if s.len() < 2 {
        return Err(Error::Domain("curve has no samples".into()));
    }
    let interior_end = if curve.unbounded { s.len() } else { s.len() - 1 };
    let mut first_sign = 0.0;
    for p in &s[1..interior_end] {
        if p.f.abs() >= PI + tol {
            return Ok(CurveClass::SelfIntersecting);
        }
        if p.f.abs() > tol {
            if first_sign == 0.0 {
                first_sign = p.f.signum();
            } else if p.f.signum() != first_sign {
                // the branches ±f cross on the positive axis
                return Ok(CurveClass::SelfIntersecting);
            }
        }
    }
    let end = curve.f_end().abs();
    if curve.unbounded {
        return Ok(if end.is_finite() && end <= PI - tol {
            CurveClass::NonCompactSimple
        } else {
            CurveClass::SelfIntersecting
        });
    }
    Ok(if (end - PI).abs() <= tol {
        CurveClass::CompactClosedSmooth
    } else if end < PI - tol {
        CurveClass::CompactNonClosed
    } else {
        CurveClass::SelfIntersecting
    })
}

/// Which set `RegionSummary::measure` refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `{|θ| < f(r)}`.
    Angular,
    /// Bounded side of a closed curve.
    Interior,
    /// The centered ball of a circle.
    Ball,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionSummary {
    pub measure: f64,
    /// `None` when the law has infinite mass.
    pub complement_measure: Option<f64>,
    pub perimeter: f64,
    /// `Δ_f`, possibly infinite.
    pub rotation: f64,
    pub compact: bool,
    pub ball_radius_equal_measure: Option<f64>,
    pub side: Side,
    /// Bound on the mass and length neglected beyond the truncation radius.
    pub tail_bound: f64,
    /// Convexity of the sampled bounded side (closed curves only); a
    /// diagnostic, not a certified property.
    pub convex_sampled: Option<bool>,
}

fn is_closed(curve: &CurveSolution) -> bool {
    !curve.unbounded && (curve.f_end().abs() - PI).abs() <= DEFAULT_TOL
}

fn integration_radius(curve: &CurveSolution) -> Result<f64> {
    if !curve.unbounded {
        return Ok(curve.r1.unwrap_or(curve.r0));
    }
    let law = &curve.params.law;
    if law.has_finite_mass() {
        Ok(law.truncation_radius().max(curve.r0 * 2.0).min(law.domain_radius()))
    } else {
        Err(Error::Range(format!(
            "unbounded region under {} has infinite measure",
            law.label()
        )))
    }
}

fn tol() -> Tolerance {
    Tolerance::new(1e-11, 1e-10)
}

/// Measure of `{|θ| < s f(r)}` with the orientation `s = ±1`, and for closed
/// curves the measure with `f` continued by `±π` beyond `r1`.
fn angular_measure(curve: &CurveSolution, s: f64) -> Result<(f64, f64)> {
    let law = &curve.params.law;
    let upto = integration_radius(curve)?;
    let f0 = s * curve.f_start;
    let f1 = s * curve.f_end();
    if law.has_finite_mass() {
        let t = |r: f64| law.mass_beyond(r).unwrap_or(f64::NAN);
        let j = s * curve.integrate_curve(upto, |r, fp, _| if fp == 0.0 { 0.0 } else { t(r) * fp }, tol())?;
        let t0 = t(curve.r0);
        let base = (f0 * t0 + j) / PI;
        if curve.unbounded {
            Ok((base, base))
        } else {
            let t1 = t(upto);
            Ok((base - f1 * t1 / PI, base))
        }
    } else {
        let m = |r: f64| law.mass_within(r).unwrap_or(f64::NAN);
        let j = s * curve.integrate_curve(upto, |r, fp, _| if fp == 0.0 { 0.0 } else { m(r) * fp }, tol())?;
        let v = (f1 * m(upto) - f0 * m(curve.r0) - j) / PI;
        Ok((v, f64::INFINITY))
    }
}

fn orientation(curve: &CurveSolution) -> f64 {
    let e = curve.f_end();
    if e < 0.0 {
        -1.0
    } else {
        1.0
    }
}

/// `μ(A)` for the region bounded by the curve (see module docs for the side).
pub fn region_measure(curve: &CurveSolution) -> Result<f64> {
    let law = &curve.params.law;
    if let Some(r) = curve.circle_radius() {
        return law.mass_within(r);
    }
    if is_closed(curve) {
        let s = orientation(curve);
        let r1 = curve.r1.unwrap_or(curve.r0);
        return if law.has_finite_mass() {
            let (_, extended) = angular_measure(curve, s)?;
            let total = law.total_mass().unwrap_or(f64::NAN);
            Ok(total - extended)
        } else {
            let (inside, _) = angular_measure(curve, s)?;
            Ok(law.mass_within(r1)? - inside)
        };
    }
    Ok(angular_measure(curve, 1.0)?.0)
}

/// `μ⁺(∂A) = 2 ∫ ρ √(1 + r² f'²) dr`.
pub fn region_perimeter(curve: &CurveSolution) -> Result<f64> {
    let law = &curve.params.law;
    if let Some(r) = curve.circle_radius() {
        return law.ball_perimeter(r);
    }
    let upto = integration_radius(curve)?;
    let v = curve.integrate_curve(upto, |r, _, len| if len == 0.0 { 0.0 } else { law.density(r) * len }, tol())?;
    Ok(2.0 * v)
}

/// `μ⁺(∂A) / μ⁺(∂B_r)` with `μ(B_r) = μ(A)`; below 1 when the region beats
/// the centered ball of equal measure.
pub fn ball_comparison(curve: &CurveSolution) -> Result<f64> {
    let law = &curve.params.law;
    let m = region_measure(curve)?;
    let r = law.radius_for_measure(m)?;
    Ok(region_perimeter(curve)? / law.ball_perimeter(r)?)
}

/// Upper branch `(r cos f, r sin f)` of the sampled curve.
pub fn upper_branch(curve: &CurveSolution) -> Vec<(f64, f64)> {
    if let Some(r) = curve.circle_radius() {
        return (0..=256)
            .map(|i| {
                let t = PI * i as f64 / 256.0;
                (r * t.cos(), r * t.sin())
            })
            .collect();
    }
    curve.samples.iter().map(|p| (p.r * p.f.cos(), p.r * p.f.sin())).collect()
}

/// Convexity of the closed polygon formed by both sampled branches.
pub fn sampled_convexity(curve: &CurveSolution) -> Option<bool> {
    if !(is_closed(curve) || curve.circle_radius().is_some()) {
        return None;
    }
    let up = upper_branch(curve);
    let mut poly: Vec<(f64, f64)> = up.clone();
    poly.extend(up.iter().rev().skip(1).take(up.len().saturating_sub(2)).map(|&(x, y)| (x, -y)));
    let n = poly.len();
    if n < 4 {
        return None;
    }
    let scale = poly.iter().fold(0.0f64, |m, &(x, y)| m.max(x.abs()).max(y.abs()));
    let mut sign = 0.0;
    for i in 0..n {
        let (a, b, c) = (poly[i], poly[(i + 1) % n], poly[(i + 2) % n]);
        let cross = (b.0 - a.0) * (c.1 - b.1) - (b.1 - a.1) * (c.0 - b.0);
        if cross.abs() <= 1e-12 * scale * scale {
            continue;
        }
        if sign == 0.0 {
            sign = cross.signum();
        } else if cross.signum() != sign {
            return Some(false);
        }
    }
    Some(true)
}

/// Measure, perimeter, rotation and orientation in one record.
pub fn summarize(curve: &CurveSolution) -> Result<RegionSummary> {
    let law = &curve.params.law;
    let measure = region_measure(curve)?;
    let perimeter = region_perimeter(curve)?;
    let total = law.total_mass();
    let side = if curve.circle_radius().is_some() {
        Side::Ball
    } else if is_closed(curve) {
        Side::Interior
    } else {
        Side::Angular
    };
    let tail_bound = if curve.unbounded && law.has_finite_mass() {
        let r = integration_radius(curve)?;
        law.mass_beyond(r).unwrap_or(f64::NAN) + 2.0 * law.density(r) * r
    } else {
        0.0
    };
    let ball = if measure > 0.0 { law.radius_for_measure(measure).ok() } else { None };
    Ok(RegionSummary {
        measure,
        complement_measure: total.map(|t| t - measure),
        perimeter,
        rotation: if curve.circle_radius().is_some() { PI } else { curve.rotation.delta() },
        compact: !curve.unbounded,
        ball_radius_equal_measure: ball,
        side,
        tail_bound,
        convex_sampled: sampled_convexity(curve),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::RadialDensity;
    use crate::stationary::{solve_curve, CurveOptions, StationaryParams};

    fn curve(alpha: f64, a: f64, lambda: f64) -> CurveSolution {
        let p = StationaryParams::new(RadialDensity::power_law(alpha).unwrap(), a, lambda).unwrap();
        solve_curve(&p, CurveOptions::default()).unwrap()
    }

    #[test]
    fn regime_examples() {
        assert_eq!(classify(&curve(3.0, 0.5, 0.0), DEFAULT_TOL).unwrap(), CurveClass::NonCompactSimple);
        assert_eq!(classify(&curve(1.0, 0.5, 0.0), DEFAULT_TOL).unwrap(), CurveClass::SelfIntersecting);
        assert_eq!(classify(&curve(1.0, 0.5, -0.1), DEFAULT_TOL).unwrap(), CurveClass::CompactNonClosed);
    }

    #[test]
    fn half_plane_measure_and_perimeter() {
        let law = RadialDensity::gaussian();
        let p = StationaryParams::origin(law, 0.0).unwrap();
        let c = solve_curve(&p, CurveOptions::default()).unwrap();
        assert_eq!(classify(&c, DEFAULT_TOL).unwrap(), CurveClass::OriginStarting);
        assert!((region_measure(&c).unwrap() - 0.5).abs() < 1e-10);
        let want = 1.0 / (2.0 * PI).sqrt();
        assert!((region_perimeter(&c).unwrap() - want).abs() < 1e-10);
    }

    #[test]
    fn circle_is_its_own_ball() {
        let law = RadialDensity::power_law(1.0).unwrap();
        let c = CurveSolution::centered_circle(law.clone(), 1.3).unwrap();
        assert!((ball_comparison(&c).unwrap() - 1.0).abs() < 1e-12);
        assert!((region_perimeter(&c).unwrap() - law.ball_perimeter(1.3).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn empty_region() {
        // u ≡ 0 with an inner-touch start: f ≡ 0
        let law = RadialDensity::power_law(2.0).unwrap();
        let c = solve_curve(&StationaryParams::new(law, 0.0, 0.0).unwrap(), CurveOptions::default()).unwrap();
        assert_eq!(region_measure(&c).unwrap(), 0.0);
    }
}
