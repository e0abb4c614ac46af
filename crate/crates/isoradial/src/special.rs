//! Incomplete gamma functions in the scaled forms needed by power-law
//! potentials: `e^x Γ(s, x)` and `e^x γ(s, x)` stay finite where the unscaled
//! values underflow.

#[allow(unused_imports)] // inherent float methods shadow it when std is linked
use num_traits::Float;

const EPS: f64 = 1e-17;
const TINY: f64 = 1e-300;

pub fn gamma(s: f64) -> f64 {
    libm::tgamma(s)
}

/// `Σ x^n / (s (s+1) ... (s+n))`, so that `γ(s,x) = x^s e^{-x} Σ`.
fn lower_series(s: f64, x: f64) -> f64 {
    let mut term = 1.0 / s;
    let mut sum = term;
    let mut n = 1.0;
    loop {
        term *= x / (s + n);
        sum += term;
        if term.abs() < sum.abs() * EPS || n > 10_000.0 {
            return sum;
        }
        n += 1.0;
    }
}

/// Continued fraction `h` with `Γ(s,x) = e^{-x} x^s h`, valid for `x > s + 1`.
fn upper_fraction(s: f64, x: f64) -> f64 {
    let mut b = x + 1.0 - s;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    let mut i = 1.0;
    loop {
        let an = -i * (i - s);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS || i > 10_000.0 {
            return h;
        }
        i += 1.0;
    }
}

/// `e^x Γ(s, x)` for `s > 0`, `x >= 0`.
pub fn upper_gamma_scaled(s: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return gamma(s);
    }
    if x < s + 1.0 {
        x.exp() * gamma(s) - x.powf(s) * lower_series(s, x)
    } else {
        x.powf(s) * upper_fraction(s, x)
    }
}

/// `e^x γ(s, x)` for `s > 0`, `x >= 0`.
pub fn lower_gamma_scaled(s: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x < s + 1.0 {
        x.powf(s) * lower_series(s, x)
    } else {
        x.exp() * gamma(s) - x.powf(s) * upper_fraction(s, x)
    }
}

/// Regularized upper incomplete gamma `Q(s, x) = Γ(s,x)/Γ(s)`.
pub fn gamma_q(s: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    if x < s + 1.0 {
        1.0 - gamma_p(s, x)
    } else {
        (s * x.ln() - x - libm::lgamma(s)).exp() * upper_fraction(s, x)
    }
}

/// Regularized lower incomplete gamma `P(s, x) = γ(s,x)/Γ(s)`.
pub fn gamma_p(s: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x < s + 1.0 {
        (s * x.ln() - x - libm::lgamma(s)).exp() * lower_series(s, x)
    } else {
        1.0 - gamma_q(s, x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{integrate_to_infinity, Tolerance};

    #[test]
    fn integer_order_closed_forms() {
        for &x in &[0.0, 0.3, 1.0, 2.5, 7.0, 40.0, 900.0] {
            assert!((upper_gamma_scaled(1.0, x) - 1.0).abs() < 1e-14);
            let rel = (upper_gamma_scaled(2.0, x) - (x + 1.0)).abs() / (x + 1.0);
            assert!(rel < 1e-14, "x={x} rel={rel}");
        }
    }

    #[test]
    fn half_order_matches_erfc() {
        for &x in &[0.1f64, 0.9, 2.0, 5.0] {
            let want = core::f64::consts::PI.sqrt() * libm::erfc(x.sqrt()) * x.exp();
            assert!((upper_gamma_scaled(0.5, x) - want).abs() < 1e-13 * want);
        }
    }

    #[test]
    fn fractional_order_against_quadrature() {
        // e^x Γ(s,x) = ∫_0^∞ (x+t)^{s-1} e^{-t} dt
        for &s in &[2.0 / 3.0, 2.0 / 1.5, 2.0 / 1.1, 0.4] {
            for &x in &[0.05, 0.7, 1.6, 3.0, 12.0] {
                let q = integrate_to_infinity(|t| (x + t).powf(s - 1.0) * (-t).exp(), 0.0, Tolerance::new(1e-15, 1e-14))
                    .unwrap()
                    .value;
                let v = upper_gamma_scaled(s, x);
                assert!((v - q).abs() < 1e-12 * q, "s={s} x={x} {v} {q}");
            }
        }
    }

    #[test]
    fn lower_plus_upper_is_complete() {
        for &s in &[0.5, 1.0, 4.0 / 3.0, 2.0] {
            for &x in &[0.2, 1.0, 3.0, 10.0] {
                let sum = lower_gamma_scaled(s, x) + upper_gamma_scaled(s, x);
                let want = x.exp() * gamma(s);
                assert!((sum - want).abs() < 1e-13 * want);
                assert!((gamma_p(s, x) + gamma_q(s, x) - 1.0).abs() < 1e-14);
            }
        }
    }
}
