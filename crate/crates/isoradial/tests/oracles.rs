#![allow(clippy::needless_range_loop)]

use std::f64::consts::PI;

use isoradial::analysis::{classify, region_measure, region_perimeter, CurveClass, DEFAULT_TOL};
use isoradial::stationary::{
    existence_interval, full_rotation, solve_curve, solve_u, solve_u_quadrature, CurveOptions, StationaryParams,
};
use isoradial::{Error, RadialDensity};
use proptest::prelude::*;

fn gaussian_tail(x: f64) -> f64 {
    0.5 * libm::erfc(x / 2f64.sqrt())
}

#[test]
fn gaussian_half_plane() {
    let p = StationaryParams::new(RadialDensity::gaussian(), 1.0, 0.0).unwrap();
    let c = solve_curve(&p, CurveOptions { samples: 2001, sample_radius: Some(10.0) }).unwrap();
    let mut worst: f64 = 0.0;
    for i in 0..=1000 {
        let r = 1.0 + 1e-6 + (9.0 - 1e-6) * i as f64 / 1000.0;
        worst = worst.max((c.angle_at(r).unwrap() - (1.0 / r).acos()).abs());
    }
    assert!(worst <= 1e-8, "sup error {worst}");
    assert!((region_measure(&c).unwrap() - gaussian_tail(1.0)).abs() < 1e-6);
    let edge = (-0.5f64).exp() / (2.0 * PI).sqrt();
    assert!((region_perimeter(&c).unwrap() - edge).abs() < 1e-6);
}

/// Algebraic least-squares circle through the points: center and radius.
fn fit_circle(pts: &[(f64, f64)]) -> ((f64, f64), f64) {
    // x² + y² + D x + E y + F = 0 via the normal equations
    let mut m = [[0.0f64; 3]; 3];
    let mut b = [0.0f64; 3];
    for &(x, y) in pts {
        let row = [x, y, 1.0];
        let rhs = -(x * x + y * y);
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] += row[i] * row[j];
            }
            b[i] += row[i] * rhs;
        }
    }
    for k in 0..3 {
        let p = (k..3).max_by(|&i, &j| m[i][k].abs().total_cmp(&m[j][k].abs())).unwrap();
        m.swap(k, p);
        b.swap(k, p);
        for i in k + 1..3 {
            let t = m[i][k] / m[k][k];
            for j in k..3 {
                m[i][j] -= t * m[k][j];
            }
            b[i] -= t * b[k];
        }
    }
    let mut s = [0.0f64; 3];
    for k in (0..3).rev() {
        let acc: f64 = (k + 1..3).map(|j| m[k][j] * s[j]).sum();
        s[k] = (b[k] - acc) / m[k][k];
    }
    let (cx, cy) = (-s[0] / 2.0, -s[1] / 2.0);
    ((cx, cy), (cx * cx + cy * cy - s[2]).sqrt())
}

fn lebesgue_curve(r0: f64, r1: f64) -> isoradial::CurveSolution {
    // u = (r² + r0 r1)/(r0 + r1) = λ − a r²/2
    let (a, lambda) = (-2.0 / (r0 + r1), r0 * r1 / (r0 + r1));
    let p = StationaryParams::new(RadialDensity::lebesgue(2), a, lambda).unwrap();
    solve_curve(&p, CurveOptions::default()).unwrap()
}

fn check_circle(c: &isoradial::CurveSolution, center: f64, radius: f64) {
    let pts: Vec<(f64, f64)> = c.samples.iter().map(|s| (s.r * s.f.cos(), s.r * s.f.sin())).collect();
    let ((cx, cy), rad) = fit_circle(&pts);
    assert!((cx - center).abs() < 1e-6 && cy.abs() < 1e-6 && (rad - radius).abs() < 1e-6, "{cx} {cy} {rad}");
    let resid = pts
        .iter()
        .map(|&(x, y)| (((x - center).powi(2) + y * y).sqrt() - radius).abs())
        .fold(0.0, f64::max);
    assert!(resid < 1e-6, "{resid}");
}

#[test]
fn lebesgue_circle_through_both_half_axes() {
    // f(r1) = π: the ball meets the axis at x = 1 and x = −3
    let c = lebesgue_curve(1.0, 3.0);
    assert!((c.r0 - 1.0).abs() < 1e-12 && (c.r1.unwrap() - 3.0).abs() < 1e-12);
    check_circle(&c, -1.0, 2.0);
    assert_eq!(classify(&c, DEFAULT_TOL).unwrap(), CurveClass::CompactClosedSmooth);
}

#[test]
fn lebesgue_circle_on_positive_axis() {
    // signed end r1 = −3: the ball meets the axis on [1, 3]
    let c = lebesgue_curve(1.0, -3.0);
    assert!((c.r0 - 1.0).abs() < 1e-12 && (c.r1.unwrap() - 3.0).abs() < 1e-12);
    check_circle(&c, 2.0, 1.0);
    assert!(c.f_end().abs() < 1e-9);
}

#[test]
fn inverse_r_rotation() {
    for &lambda in &[1.5f64, 2.0, 3.0] {
        let p = StationaryParams::new(RadialDensity::inverse_r(), 1.0, lambda).unwrap();
        let u = solve_u(&p).unwrap();
        let iv = existence_interval(&u).unwrap().interval().unwrap();
        let rot = full_rotation(&u, &iv).unwrap();
        let want = PI * (1.0 - lambda / (lambda * lambda - 1.0).sqrt());
        assert!((rot.value.abs() - want.abs()).abs() < 1e-6, "lambda={lambda}: {} vs {want}", rot.value);
    }
    for &lambda in &[0.25, 0.5, 1.0] {
        let p = StationaryParams::new(RadialDensity::inverse_r(), 1.0, lambda).unwrap();
        let r = solve_curve(&p, CurveOptions::default());
        assert!(matches!(r, Err(Error::Divergent(_))), "lambda={lambda}: {r:?}");
    }
}

#[test]
fn closed_forms_match_quadrature() {
    for &alpha in &[1.0, 2.0, 3.0] {
        for &(a, lambda) in &[(0.5, 0.0), (0.3, 1e-3), (0.8, -0.02)] {
            let p = StationaryParams::new(RadialDensity::power_law(alpha).unwrap(), a, lambda).unwrap();
            let exact = solve_u(&p).unwrap();
            let quad = solve_u_quadrature(&p).unwrap();
            assert!(exact.closed_form() && !quad.closed_form());
            for &r in &[0.2, 0.7, 1.3, 2.5, 4.0] {
                let (x, y) = (exact.evaluate(r), quad.evaluate(r));
                assert!((x - y).abs() <= 1e-10 * (1.0 + x.abs()), "alpha={alpha} r={r}: {x} vs {y}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn radius_for_measure_round_trip(alpha in 1.0f64..4.0, m in 1e-6f64..0.999_999) {
        let law = RadialDensity::power_law(alpha).unwrap();
        let r = law.radius_for_measure(m).unwrap();
        let back = law.ball_measure(r).unwrap();
        prop_assert!((back - m).abs() <= 1e-10, "alpha={} m={} got {}", alpha, m, back);
    }

    #[test]
    fn linear_equation_residual(alpha in 1.0f64..3.5, a in -1.0f64..1.0, lambda in -0.1f64..0.1, r in 0.3f64..3.0) {
        let p = StationaryParams::new(RadialDensity::power_law(alpha).unwrap(), a, lambda).unwrap();
        let u = solve_u(&p).unwrap();
        let scale = 1.0 + u.evaluate(r).abs() + u.evaluate_deriv(r).abs();
        prop_assert!(u.ode_residual(r).abs() <= 1e-6 * scale, "residual {}", u.ode_residual(r));
    }

    #[test]
    fn ball_measure_is_monotone(alpha in 1.0f64..4.0, r in 0.01f64..5.0) {
        let law = RadialDensity::power_law(alpha).unwrap();
        prop_assert!(law.mass_within(r * 1.01).unwrap() >= law.mass_within(r).unwrap());
        prop_assert!((law.ball_measure(r).unwrap() - law.mass_within(r).unwrap()).abs() <= 1e-10);
        prop_assert!(law.ball_perimeter(r).unwrap() > 0.0);
    }
}
