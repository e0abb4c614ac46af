use std::f64::consts::PI;

use isoradial::logconvex::{
    axial_measure, axial_perimeter, ball_bound_is_minimal, ball_ratio_check, bigball_threshold, bigballs_report,
    cubic_test_function, divergence_lower_bound, interval_profile_1d, model_profile_1d, monotone_transport_1d,
    power_derivative_law, ratio_lower_bound, region_integral, AxialRegion, ModelMeasure1D, TargetPotential,
    TransportOptions,
};
use isoradial::{Error, RadialDensity};
use proptest::prelude::*;

const CUT: f64 = 6.0;

fn laws() -> Vec<RadialDensity> {
    vec![
        RadialDensity::exp_r(2).with_domain_radius(CUT).unwrap(),
        RadialDensity::exp_r_alpha(2.0, 2).unwrap().with_domain_radius(CUT).unwrap(),
        power_derivative_law(0.5, 2).unwrap().with_domain_radius(CUT).unwrap(),
    ]
}

fn region() -> impl Strategy<Value = AxialRegion> {
    let radii = (0.0..CUT * 0.8, 0.05..CUT * 0.2).prop_map(|(a, w)| (a, a + w));
    prop_oneof![
        (0.05..CUT).prop_map(|radius| AxialRegion::Ball { radius }),
        radii.clone().prop_map(|(inner, outer)| AxialRegion::Annulus { inner, outer }),
        (radii.clone(), 0.05..PI).prop_map(|((inner, outer), half_angle)| AxialRegion::AnnularSector {
            inner,
            outer,
            half_angle
        }),
        (radii, 0.2..2.9f64, 0.0..1.0f64, 0.0..8.0f64).prop_map(|((inner, outer), h0, t, waves)| {
            let room = h0.min(PI - h0) * 0.95;
            AxialRegion::WavySector { inner, outer, h0, amplitude: room * t, waves }
        }),
        (0.0..CUT * 0.5, 0.05..CUT * 0.5).prop_map(|(center, radius)| AxialRegion::OffsetDisk { center, radius }),
    ]
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, failure_persistence: None, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config(96))]

    #[test]
    fn divergence_bound_below_perimeter(i in 0usize..3, reg in region()) {
        let law = &laws()[i];
        let bound = divergence_lower_bound(law, &reg).unwrap();
        let per = axial_perimeter(law, &reg).unwrap();
        prop_assert!(per - bound >= -1e-8 * per.max(1.0), "{:?}: {} < {}", reg, per, bound);
    }

    #[test]
    fn cheeger_form_for_exp_r(reg in region()) {
        let law = &laws()[0];
        let m = axial_measure(law, &reg).unwrap();
        let bound = divergence_lower_bound(law, &reg).unwrap();
        prop_assert!(axial_perimeter(law, &reg).unwrap() >= bound - 1e-8 * bound && bound >= m * (1.0 - 1e-12));
    }

    #[test]
    fn ratio_bound(i in 0usize..2, reg in region()) {
        let law = &laws()[i];
        let ratio = ball_ratio_check(law, &reg).unwrap();
        prop_assert!(ratio >= ratio_lower_bound() - 1e-6, "{:?}: {}", reg, ratio);
        if i == 1 {
            // e^{r²}: balls minimize
            prop_assert!(ratio >= 1.0 - 1e-6, "{:?}: {}", reg, ratio);
        }
    }

    #[test]
    fn balls_minimize_increasing_weights(i in 0usize..3, inner in 0.0..3.0f64, h in 0.1..PI, m in 0.1..50.0f64) {
        // a sector of measure m: (h/π)(M(outer) − M(inner)) = m
        let law = &laws()[i];
        let base = law.mass_within(inner).unwrap();
        let top = law.total_mass().unwrap();
        let want = base + PI * m / h;
        prop_assume!(want < top * 0.999 && m < top * 0.999);
        let outer = law.radius_for_measure(want).unwrap();
        let reg = AxialRegion::AnnularSector { inner, outer, half_angle: h };
        let weight = |r: f64| law.dv(r);
        let got = region_integral(law, &reg, weight).unwrap();
        let measure = axial_measure(law, &reg).unwrap();
        prop_assert!((measure - m).abs() <= 1e-7 * m);
        let ball = ball_bound_is_minimal(law, weight, m).unwrap();
        prop_assert!(got >= ball - 1e-8 * ball, "{} < {}", got, ball);
    }

    #[test]
    fn model_potential_is_extremal(a in 0.2..3.0f64, s in -0.95..0.95f64) {
        let nu = ModelMeasure1D::new(a).unwrap();
        let x = s * nu.half_width();
        let h = 1e-4 / a;
        let v2 = (nu.potential(x + h) - 2.0 * nu.potential(x) + nu.potential(x - h)) / (h * h);
        // the central difference carries an O(h²) error
        prop_assert!((v2 * (-2.0 * nu.potential(x)).exp() / (a * a) - 1.0).abs() < 1e-5);
    }
}

#[test]
fn divergence_bound_is_exact_on_balls() {
    let law = &laws()[0];
    for &r in &[0.5, 1.0, 2.0] {
        let b = divergence_lower_bound(law, &AxialRegion::Ball { radius: r }).unwrap();
        assert!((b - 2.0 * PI * r * r.exp()).abs() <= 1e-9 * b);
        assert!((axial_perimeter(law, &AxialRegion::Ball { radius: r }).unwrap() - b).abs() <= 1e-9 * b);
    }
}

#[test]
fn profile_remark_bound() {
    // I(t) ≥ ∫_{B_r(t)} v' dμ for e^{r^α}
    let law = RadialDensity::exp_r_alpha(1.5, 2).unwrap().with_domain_radius(CUT).unwrap();
    for &m in &[1.0, 10.0, 100.0] {
        let r = law.radius_for_measure(m).unwrap();
        let lower = ball_bound_is_minimal(&law, |s| law.dv(s), m).unwrap();
        assert!(law.ball_perimeter(r).unwrap() >= lower);
    }
}

/// Smallest `r0` accepted by the certificate, by bisection on `[lo, hi]`.
fn flip<P: Fn(f64) -> bool>(holds: P, mut lo: f64, mut hi: f64) -> f64 {
    assert!(!holds(lo) && holds(hi));
    while hi - lo > 1e-8 {
        let mid = 0.5 * (lo + hi);
        if holds(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

#[test]
fn big_ball_thresholds() {
    for &d in &[2u32, 3] {
        for &a in &[0.5, 1.0] {
            let law = power_derivative_law(a, d).unwrap();
            let t = bigball_threshold(a, d);
            // s = r0: the monotonicity of F decides
            let adaptive = |r0: f64| {
                let (f, df) = cubic_test_function(r0);
                bigballs_report(&law, f, df, r0).unwrap().holds
            };
            let got = flip(adaptive, 0.5 * t, 1.5 * t);
            assert!((got - t).abs() <= 1e-6, "d={d} a={a}: {got} vs {t}");
            // s fixed at the threshold: f(r0) = 1 decides
            let (f, df) = cubic_test_function(t);
            let fixed = |r0: f64| bigballs_report(&law, &f, &df, r0).unwrap().holds;
            let got = flip(fixed, 0.5 * t, 1.5 * t);
            assert!((got - t).abs() <= 1e-6, "d={d} a={a} fixed: {got} vs {t}");
        }
    }
    assert!((bigball_threshold(1.0, 2) - 2.0).abs() < 1e-15);
    assert!((bigball_threshold(1.0, 3) - 5f64.sqrt()).abs() < 1e-15);
}

#[test]
fn certificate_rejects_gaussian_weight() {
    let r = bigballs_report(&RadialDensity::gaussian(), |_| 1.0, |_| 0.0, 1.0);
    assert!(matches!(r, Err(Error::Precondition(_))));
}

#[test]
fn interval_profile_matches_formula() {
    for &a in &[0.5, 1.0, 2.0] {
        for i in 0..=20 {
            let t = 0.5 * i as f64;
            let (p, q) = (interval_profile_1d(a, t).unwrap(), model_profile_1d(a, t).unwrap());
            assert!((p - q).abs() <= 1e-8, "A={a} t={t}: {p} vs {q}");
        }
    }
    // A = 1: t = 2 artanh(sin x) and 2 cosh(t/2) = 2 sec x
    for &x in &[0.1, 0.7, 1.3] {
        let t = 2.0 * f64::sin(x).atanh();
        assert!((model_profile_1d(1.0, t).unwrap() - 2.0 / x.cos()).abs() < 1e-9);
    }
}

#[test]
fn transport_to_more_convex_model() {
    for &(a, b) in &[(1.0, 1.0), (1.0, 1.5), (0.5, 2.0)] {
        let map = monotone_transport_1d(a, TargetPotential::model(b).unwrap(), TransportOptions::default()).unwrap();
        assert!(map.hypotheses_hold);
        assert!(map.lipschitz_estimate <= 1.0 + 1e-4, "A={a} B={b}: {}", map.lipschitz_estimate);
        assert!(map.min_slope > 0.0);
        assert!(map.pushforward_residual <= 1e-8, "A={a} B={b}: {}", map.pushforward_residual);
        let n = map.samples.len();
        for i in 0..n {
            let (x, t) = map.samples[i];
            let (xr, tr) = map.samples[n - 1 - i];
            assert!(x == -xr && t == -tr);
        }
        // closed-form oracle: artanh(sin Bt)/B = artanh(sin Ax)/A
        for &(x, t) in map.samples.iter().step_by(97) {
            let s = (a * x).sin().atanh() / a;
            let want = (b * s).tanh().asin() / b;
            assert!((t - want).abs() <= 1e-9, "x={x}: {t} vs {want}");
        }
    }
}

#[test]
fn transport_hypotheses_enforced() {
    let flat = TargetPotential::flat(10.0);
    assert!(matches!(
        monotone_transport_1d(1.0, flat.clone(), TransportOptions::default()),
        Err(Error::Precondition(_))
    ));
    let forced = monotone_transport_1d(1.0, flat, TransportOptions { force: true, ..TransportOptions::default() }).unwrap();
    assert!(!forced.hypotheses_hold);
    // ν_B with B < A fails the curvature bound
    assert!(matches!(
        monotone_transport_1d(2.0, TargetPotential::model(1.0).unwrap(), TransportOptions::default()),
        Err(Error::Precondition(_))
    ));
}
