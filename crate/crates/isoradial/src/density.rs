//! Radially symmetric weights `ρ(r) = C e^{σ v(r)}` on `R^d`.
//!
//! `σ = -1` covers the probability laws `C_α e^{-r^α}`, `σ = +1` the
//! log-convex weights `e^{v}`. The sign is kept separate from `v` so that both
//! kinds enter the stationary equation through the same code path, written for
//! `ρ = C e^{-w}` with `w = -σ v`.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use core::f64::consts::PI;
use core::fmt;
#[allow(unused_imports)] // inherent float methods shadow it when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::quad::{integrate, integrate_to_infinity, Tolerance};
use crate::roots::{illinois, RootOptions};
use crate::special;

pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Tail mass left out when an infinite domain is truncated.
pub const TAIL_MASS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// Built-in families get closed forms; `Custom` always goes through quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    /// `C_α e^{-r^α}` in the plane, normalized to mass 1.
    PowerLaw { alpha: f64 },
    /// Standard Gaussian `(2π)^{-d/2} e^{-r²/2}`.
    Gaussian,
    Lebesgue,
    /// `dx / r` in the plane.
    InverseR,
    /// `e^{r}`.
    ExpR,
    /// `e^{r^α}`.
    ExpRAlpha { alpha: f64 },
    Custom,
}

#[derive(Clone)]
pub struct RadialDensity {
    sign: Sign,
    potential: RealFn,
    potential_deriv: RealFn,
    dimension: u32,
    domain_radius: f64,
    normalization: f64,
    family: Family,
    probability: bool,
}

impl fmt::Debug for RadialDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialDensity")
            .field("family", &self.family)
            .field("sign", &self.sign)
            .field("dimension", &self.dimension)
            .field("domain_radius", &self.domain_radius)
            .field("normalization", &self.normalization)
            .field("probability", &self.probability)
            .finish()
    }
}

/// Surface area of the unit sphere in `R^d`.
pub fn sphere_area(d: u32) -> f64 {
    let h = d as f64 / 2.0;
    2.0 * PI.powf(h) / special::gamma(h)
}

/// `C_α` with `2π C_α ∫_0^∞ r e^{-r^α} dr = 1`.
pub fn power_law_normalization(alpha: f64) -> Result<f64> {
    if !(alpha >= 1.0) || !alpha.is_finite() {
        return Err(Error::Domain(format!("power law needs alpha >= 1, got {alpha}")));
    }
    Ok(alpha / (2.0 * PI * special::gamma(2.0 / alpha)))
}

fn arc<F: Fn(f64) -> f64 + Send + Sync + 'static>(f: F) -> RealFn {
    Arc::new(f)
}

impl RadialDensity {
    pub fn power_law(alpha: f64) -> Result<Self> {
        let c = power_law_normalization(alpha)?;
        Ok(Self {
            sign: Sign::Minus,
            potential: arc(move |r| r.powf(alpha)),
            potential_deriv: arc(move |r| alpha * r.powf(alpha - 1.0)),
            dimension: 2,
            domain_radius: f64::INFINITY,
            normalization: c,
            family: Family::PowerLaw { alpha },
            probability: true,
        })
    }

    /// Standard planar Gaussian.
    pub fn gaussian() -> Self {
        Self::gaussian_in(2)
    }

    pub fn gaussian_in(d: u32) -> Self {
        Self {
            sign: Sign::Minus,
            potential: arc(|r| 0.5 * r * r),
            potential_deriv: arc(|r| r),
            dimension: d.max(1),
            domain_radius: f64::INFINITY,
            normalization: (2.0 * PI).powf(-(d.max(1) as f64) / 2.0),
            family: Family::Gaussian,
            probability: true,
        }
    }

    pub fn lebesgue(d: u32) -> Self {
        Self {
            sign: Sign::Minus,
            potential: arc(|_| 0.0),
            potential_deriv: arc(|_| 0.0),
            dimension: d.max(1),
            domain_radius: f64::INFINITY,
            normalization: 1.0,
            family: Family::Lebesgue,
            probability: false,
        }
    }

    /// `dx / r` in the plane, written as `e^{-ln r}`.
    pub fn inverse_r() -> Self {
        Self {
            sign: Sign::Minus,
            potential: arc(|r| r.ln()),
            potential_deriv: arc(|r| 1.0 / r),
            dimension: 2,
            domain_radius: f64::INFINITY,
            normalization: 1.0,
            family: Family::InverseR,
            probability: false,
        }
    }

    pub fn exp_r(d: u32) -> Self {
        Self {
            sign: Sign::Plus,
            potential: arc(|r| r),
            potential_deriv: arc(|_| 1.0),
            dimension: d.max(1),
            domain_radius: f64::INFINITY,
            normalization: 1.0,
            family: Family::ExpR,
            probability: false,
        }
    }

    pub fn exp_r_alpha(alpha: f64, d: u32) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::Domain(format!("exp_r_alpha needs alpha > 0, got {alpha}")));
        }
        Ok(Self {
            sign: Sign::Plus,
            potential: arc(move |r| r.powf(alpha)),
            potential_deriv: arc(move |r| alpha * r.powf(alpha - 1.0)),
            dimension: d.max(1),
            domain_radius: f64::INFINITY,
            normalization: 1.0,
            family: Family::ExpRAlpha { alpha },
            probability: false,
        })
    }

    /// User-supplied potential. The derivative is checked against central
    /// differences, and a declared probability law must integrate to 1.
    pub fn custom(
        sign: Sign,
        potential: RealFn,
        potential_deriv: RealFn,
        dimension: u32,
        normalization: f64,
        probability: bool,
    ) -> Result<Self> {
        if dimension < 1 {
            return Err(Error::Domain("dimension must be positive".into()));
        }
        if !(normalization > 0.0) || !normalization.is_finite() {
            return Err(Error::Domain(format!("normalization must be positive, got {normalization}")));
        }
        let d = Self {
            sign,
            potential,
            potential_deriv,
            dimension,
            domain_radius: f64::INFINITY,
            normalization,
            family: Family::Custom,
            probability,
        };
        d.validate()?;
        Ok(d)
    }

    pub fn with_domain_radius(mut self, radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::Domain(format!("domain radius must be positive, got {radius}")));
        }
        self.domain_radius = radius;
        Ok(self)
    }

    /// Checks the derivative against central differences (relative 1e-6) on
    /// an interior grid and, for probability laws, the total mass.
    pub fn validate(&self) -> Result<()> {
        let hi = if self.domain_radius.is_finite() { self.domain_radius } else { 5.0 };
        for i in 1..64 {
            let r = hi * i as f64 / 64.0;
            let h = 1e-5 * r.max(1e-3);
            let fd = (self.v(r + h) - self.v(r - h)) / (2.0 * h);
            let dv = self.dv(r);
            let scale = dv.abs().max(self.v(r).abs() / r.max(1.0)).max(1.0);
            if !((fd - dv).abs() <= 1e-6 * scale) {
                return Err(Error::Domain(format!(
                    "potential derivative disagrees with finite difference at r={r}: {dv} vs {fd}"
                )));
            }
        }
        if self.probability {
            let m = self.total_mass_by_quadrature()?;
            if (m - 1.0).abs() > 1e-8 {
                return Err(Error::Domain(format!("declared probability law has mass {m}")));
            }
        }
        Ok(())
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }
    pub fn dimension(&self) -> u32 {
        self.dimension
    }
    pub fn domain_radius(&self) -> f64 {
        self.domain_radius
    }
    pub fn normalization(&self) -> f64 {
        self.normalization
    }
    pub fn family(&self) -> Family {
        self.family
    }
    pub fn is_probability(&self) -> bool {
        self.probability
    }

    pub fn v(&self, r: f64) -> f64 {
        (self.potential)(r)
    }
    pub fn dv(&self, r: f64) -> f64 {
        (self.potential_deriv)(r)
    }
    /// `w = -σ v`, so that `ρ = C e^{-w}`.
    pub fn w(&self, r: f64) -> f64 {
        -self.sign.value() * self.v(r)
    }
    pub fn dw(&self, r: f64) -> f64 {
        -self.sign.value() * self.dv(r)
    }

    pub fn density(&self, r: f64) -> f64 {
        self.normalization * (self.sign.value() * self.v(r)).exp()
    }

    /// `ω_{d-1} r^{d-1} ρ(r)`: mass per unit radius.
    pub fn shell_density(&self, r: f64) -> f64 {
        sphere_area(self.dimension) * r.powi(self.dimension as i32 - 1) * self.density(r)
    }

    /// Short label such as `power:1.5`.
    pub fn label(&self) -> String {
        let base = match self.family {
            Family::PowerLaw { alpha } => format!("power:{alpha}"),
            Family::Gaussian => "gaussian".into(),
            Family::Lebesgue => "lebesgue".into(),
            Family::InverseR => "inverse_r".into(),
            Family::ExpR => "exp_r".into(),
            Family::ExpRAlpha { alpha } => format!("exp_r_alpha:{alpha}"),
            Family::Custom => "custom".into(),
        };
        if self.domain_radius.is_finite() {
            format!("{base}@R={}", self.domain_radius)
        } else {
            base
        }
    }

    /// Whether `∫_0^∞ s e^{-w(s)} ds` is finite, i.e. whether the particular
    /// solution of the stationary equation can be anchored at infinity.
    pub fn has_finite_mass(&self) -> bool {
        self.probability || self.domain_radius.is_finite()
    }

    fn check_radius(&self, r: f64) -> Result<()> {
        if !(r >= 0.0) || r > self.domain_radius * (1.0 + 1e-15) {
            return Err(Error::Domain(format!(
                "radius {r} outside [0, {}]",
                self.domain_radius
            )));
        }
        Ok(())
    }

    /// `μ(B_r)` by adaptive quadrature (absolute tolerance 1e-10).
    pub fn ball_measure(&self, r: f64) -> Result<f64> {
        self.check_radius(r)?;
        if r == 0.0 {
            return Ok(0.0);
        }
        let q = integrate(|s| self.shell_density(s), 0.0, r, Tolerance::new(1e-10, 1e-14)).map_err(|e| match e {
            Error::NonFinite { at } => Error::Domain(format!("integrand not finite at r={at}")),
            Error::NotConverged { .. } => Error::Domain("density not integrable near the origin".into()),
            other => other,
        })?;
        Ok(q.value)
    }

    /// `μ^+(∂B_r) = ω_{d-1} r^{d-1} ρ(r)`.
    pub fn ball_perimeter(&self, r: f64) -> Result<f64> {
        if !(r > 0.0) {
            return Err(Error::Domain(format!("ball perimeter needs r > 0, got {r}")));
        }
        self.check_radius(r)?;
        Ok(self.shell_density(r))
    }

    fn closed_mass_within(&self, r: f64) -> Option<f64> {
        let d = self.dimension;
        let om = sphere_area(d);
        match self.family {
            Family::PowerLaw { alpha } => Some(special::gamma_p(2.0 / alpha, r.powf(alpha))),
            Family::Gaussian => Some(special::gamma_p(d as f64 / 2.0, 0.5 * r * r)),
            Family::Lebesgue => Some(om * r.powi(d as i32) / d as f64),
            Family::InverseR => Some(2.0 * PI * r),
            Family::ExpR if d == 2 => {
                // e^r (r - 1) + 1 = Σ_{n≥2} (n-1) r^n / n!
                let g = if r < 0.1 {
                    let mut term = r;
                    let mut sum = 0.0;
                    for n in 2..30 {
                        term *= r / n as f64;
                        sum += (n - 1) as f64 * term;
                    }
                    sum
                } else {
                    r.exp() * (r - 1.0) + 1.0
                };
                Some(2.0 * PI * g)
            }
            _ => None,
        }
    }

    fn closed_mass_beyond(&self, r: f64) -> Option<f64> {
        match self.family {
            Family::PowerLaw { alpha } => Some(special::gamma_q(2.0 / alpha, r.powf(alpha))),
            Family::Gaussian => Some(special::gamma_q(self.dimension as f64 / 2.0, 0.5 * r * r)),
            _ => None,
        }
    }

    /// `μ(B_r)` using closed forms where the family has one, quadrature otherwise.
    pub fn mass_within(&self, r: f64) -> Result<f64> {
        self.check_radius(r)?;
        match self.closed_mass_within(r) {
            Some(m) => Ok(m),
            None => self.ball_measure(r),
        }
    }

    /// `μ(R^d \ B_r)`; infinite for laws with infinite mass.
    pub fn mass_beyond(&self, r: f64) -> Result<f64> {
        if let Some(t) = self.closed_mass_beyond(r) {
            return Ok(t);
        }
        if self.domain_radius.is_finite() {
            let rr = r.min(self.domain_radius);
            let q = integrate(|s| self.shell_density(s), rr, self.domain_radius, Tolerance::new(1e-14, 1e-13))?;
            return Ok(q.value);
        }
        if !self.probability {
            return Ok(f64::INFINITY);
        }
        Ok(integrate_to_infinity(|s| self.shell_density(s), r, Tolerance::new(1e-15, 1e-12))?.value)
    }

    fn total_mass_by_quadrature(&self) -> Result<f64> {
        if self.domain_radius.is_finite() {
            return self.ball_measure(self.domain_radius);
        }
        Ok(integrate_to_infinity(|s| self.shell_density(s), 0.0, Tolerance::new(1e-13, 1e-12))?.value)
    }

    /// Total mass, `None` when infinite.
    pub fn total_mass(&self) -> Option<f64> {
        if self.probability {
            Some(1.0)
        } else if self.domain_radius.is_finite() {
            self.mass_within(self.domain_radius).ok()
        } else {
            None
        }
    }

    /// Radius beyond which the neglected mass is below [`TAIL_MASS`]; the
    /// domain radius for laws with infinite mass.
    pub fn truncation_radius(&self) -> f64 {
        if !self.probability {
            return self.domain_radius;
        }
        let mut hi = 1.0;
        while self.mass_beyond(hi).unwrap_or(0.0) > TAIL_MASS && hi < 1e6 {
            hi *= 2.0;
        }
        let lo = 0.5 * hi;
        illinois(
            |r| self.mass_beyond(r).unwrap_or(0.0) - TAIL_MASS,
            lo.min(hi),
            hi,
            RootOptions { xtol_rel: 1e-10, ..RootOptions::default() },
        )
        .map(|r| r.hi)
        .unwrap_or(hi)
        .min(self.domain_radius)
    }

    /// Inverse of `ball_measure`.
    pub fn radius_for_measure(&self, m: f64) -> Result<f64> {
        let total = self.total_mass().unwrap_or(f64::INFINITY);
        if !(m > 0.0 && m < total) {
            return Err(Error::Range(format!("measure {m} not in (0, {total})")));
        }
        let mut hi: f64 = 1.0_f64.min(self.domain_radius);
        while self.mass_within(hi)? < m {
            if hi >= self.domain_radius {
                return Err(Error::Range(format!("measure {m} exceeds the mass of the domain")));
            }
            hi = (2.0 * hi).min(self.domain_radius);
            if hi > 1e12 {
                return Err(Error::Range(format!("measure {m} not attained")));
            }
        }
        // Use the tail for large targets so precision follows the smaller side.
        let use_tail = self.probability && m > 0.5;
        let root = illinois(
            |r| {
                if use_tail {
                    (1.0 - m) - self.mass_beyond(r).unwrap_or(f64::NAN)
                } else {
                    self.mass_within(r).unwrap_or(f64::NAN) - m
                }
            },
            0.0,
            hi,
            RootOptions::default(),
        )?;
        Ok(root.x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn gaussian_ball_measure() {
        let g = RadialDensity::gaussian();
        assert!(close(g.ball_measure(1.0).unwrap(), 1.0 - (-0.5f64).exp(), 1e-10));
        assert!(close(g.ball_measure(1.0).unwrap(), 0.393469, 1e-6));
        assert_eq!(g.ball_measure(0.0).unwrap(), 0.0);
    }

    #[test]
    fn exp_r_ball_measure() {
        let e = RadialDensity::exp_r(2);
        assert!(close(e.ball_measure(1.0).unwrap(), 2.0 * PI, 1e-9));
        // brute-force midpoint sum
        let n = 200_000;
        let h = 1.0 / n as f64;
        let riemann: f64 = (0..n).map(|i| {
            let s = (i as f64 + 0.5) * h;
            2.0 * PI * s * s.exp() * h
        }).sum();
        assert!(close(riemann, 2.0 * PI, 1e-8));
    }

    #[test]
    fn ball_perimeters() {
        assert!(close(RadialDensity::gaussian().ball_perimeter(1.0).unwrap(), (-0.5f64).exp(), 1e-15));
        assert!(close(RadialDensity::lebesgue(2).ball_perimeter(2.0).unwrap(), 4.0 * PI, 1e-13));
        assert!(close(RadialDensity::exp_r(2).ball_perimeter(1.0).unwrap(), 2.0 * PI * 1f64.exp(), 1e-13));
        assert!(RadialDensity::gaussian().ball_perimeter(0.0).is_err());
    }

    #[test]
    fn radius_inversion() {
        let g = RadialDensity::gaussian();
        assert!(close(g.radius_for_measure(1.0 - (-0.5f64).exp()).unwrap(), 1.0, 1e-10));
        assert!(close(g.radius_for_measure(0.5).unwrap(), (2.0 * 2f64.ln()).sqrt(), 1e-10));
        assert!(close(RadialDensity::lebesgue(2).radius_for_measure(PI).unwrap(), 1.0, 1e-12));
        assert!(matches!(g.radius_for_measure(1.0), Err(Error::Range(_))));
        assert!(matches!(g.radius_for_measure(0.0), Err(Error::Range(_))));
    }

    #[test]
    fn normalizations() {
        assert!(close(power_law_normalization(1.0).unwrap(), 1.0 / (2.0 * PI), 1e-15));
        assert!(close(power_law_normalization(2.0).unwrap(), 1.0 / PI, 1e-15));
        // α = 3 against quadrature of ∫ r e^{-r^3}
        let q = integrate_to_infinity(|r| r * (-r * r * r).exp(), 0.0, Tolerance::new(1e-15, 1e-14)).unwrap().value;
        assert!(close(q, special::gamma(2.0 / 3.0) / 3.0, 1e-13));
        assert!(close(power_law_normalization(3.0).unwrap(), 1.0 / (2.0 * PI * q), 1e-12));
        assert!(power_law_normalization(0.5).is_err());
    }

    #[test]
    fn closed_forms_match_quadrature() {
        let laws = [
            RadialDensity::gaussian(),
            RadialDensity::lebesgue(2),
            RadialDensity::lebesgue(3),
            RadialDensity::exp_r(2),
            RadialDensity::inverse_r(),
            RadialDensity::power_law(1.0).unwrap(),
            RadialDensity::power_law(3.0).unwrap(),
            RadialDensity::gaussian_in(3),
        ];
        for law in &laws {
            for &r in &[0.05, 0.5, 1.0, 2.0, 3.5] {
                let a = law.mass_within(r).unwrap();
                let b = law.ball_measure(r).unwrap();
                assert!((a - b).abs() <= 1e-9 * a.max(1.0), "{law:?} r={r}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn tails_and_truncation() {
        let p = RadialDensity::power_law(1.0).unwrap();
        let r = 3.0;
        assert!(close(p.mass_beyond(r).unwrap(), (1.0 + r) * (-r).exp(), 1e-15));
        let rt = p.truncation_radius();
        assert!(close(p.mass_beyond(rt).unwrap(), TAIL_MASS, 1e-15));
        assert_eq!(RadialDensity::lebesgue(2).mass_beyond(1.0).unwrap(), f64::INFINITY);
    }

    #[test]
    fn custom_rejects_bad_derivative() {
        let bad = RadialDensity::custom(Sign::Plus, arc(|r| r * r), arc(|r| r), 2, 1.0, false);
        assert!(matches!(bad, Err(Error::Domain(_))));
        let ok = RadialDensity::custom(Sign::Plus, arc(|r| r * r), arc(|r| 2.0 * r), 2, 1.0, false);
        assert!(ok.is_ok());
    }

    #[test]
    fn singular_density_is_domain_error() {
        // ρ = r^{-3}: r ρ(r) not integrable at 0
        let d = RadialDensity::custom(Sign::Minus, arc(|r| 3.0 * r.ln()), arc(|r| 3.0 / r), 2, 1.0, false).unwrap();
        assert!(matches!(d.ball_measure(1.0), Err(Error::Domain(_))));
    }
}
