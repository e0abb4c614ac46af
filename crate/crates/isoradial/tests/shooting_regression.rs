use isoradial::analysis::CurveClass;
use isoradial::shooting::{
    closure_defect, find_a_for_measure, find_lambda_smooth, lambda_max, profile_point, CandidateFamily, CLOSURE_TOL,
    LAMBDA_GRID,
};
use isoradial::{Error, RadialDensity};

// λ*(a) for α = 1, frozen from release runs.
const GOLDEN: [(f64, f64); 3] = [(0.3, 3.789e-25), (0.5, 2.3591e-4), (0.6, 5.099e-3)];

#[test]
fn smooth_closure_values() {
    for &(a, want) in &GOLDEN {
        let r = find_lambda_smooth(1.0, a, None).unwrap();
        assert_eq!(r.curve_class, CurveClass::CompactClosedSmooth, "a={a}");
        assert!(r.residual.abs() <= CLOSURE_TOL, "a={a}: residual {}", r.residual);
        assert!((r.lambda / want - 1.0).abs() < 1e-3, "a={a}: {} vs {want}", r.lambda);
        assert!(r.monotone_on_grid, "a={a}");
    }
}

#[test]
fn closure_is_unique_in_lambda() {
    for &(a, _) in &GOLDEN {
        let star = find_lambda_smooth(1.0, a, None).unwrap().lambda;
        let narrow = find_lambda_smooth(1.0, a, Some((star * 0.5, star * 1.7))).unwrap().lambda;
        assert!((narrow / star - 1.0).abs() < 1e-8, "a={a}: {narrow} vs {star}");
        // no second closure on either side of λ*
        let top = lambda_max(&RadialDensity::power_law(1.0).unwrap(), a).unwrap() * 0.999;
        let below = find_lambda_smooth(1.0, a, Some((star * 1e-30, star * 0.9)));
        let above = find_lambda_smooth(1.0, a, Some((star * 1.1, top)));
        assert!(matches!(below, Err(Error::NoSolution(_))), "a={a}: {below:?}");
        assert!(matches!(above, Err(Error::NoSolution(_))), "a={a}: {above:?}");
    }
}

#[test]
fn no_closure_beyond_degenerate_family() {
    assert!(matches!(find_lambda_smooth(1.0, 0.7, None), Err(Error::NoSolution(_))));
    assert!(matches!(find_lambda_smooth(3.0, 0.5, None), Err(Error::NoSolution(_))));
}

#[test]
fn defect_crosses_zero_once_on_grid() {
    // nondecreasing up to λ*, positive from there to λ_max
    let law = RadialDensity::power_law(1.0).unwrap();
    for &(a, _) in &GOLDEN[1..] {
        let star = find_lambda_smooth(1.0, a, None).unwrap().lambda;
        let top = lambda_max(&law, a).unwrap();
        let (lo, hi) = ((top * 1e-12).ln(), (top * 0.99).ln());
        let mut prev = f64::NEG_INFINITY;
        for i in 0..LAMBDA_GRID {
            let l = (lo + (hi - lo) * i as f64 / (LAMBDA_GRID - 1) as f64).exp();
            let g = closure_defect(&law, a, l).unwrap();
            if l < star {
                assert!(g < 0.0 && g >= prev - 1e-9, "a={a} lambda={l:e}: {g} after {prev}");
            } else {
                assert!(g > 0.0, "a={a} lambda={l:e}: {g}");
            }
            prev = g;
        }
    }
}

#[test]
fn gaussian_half_planes_are_optimal() {
    for &m in &[0.2, 0.35] {
        let r = find_a_for_measure(2.0, m, CandidateFamily::NonCompact).unwrap();
        assert!((r.candidate_measure() - m).abs() <= 1e-6);
        // μ = e^{−r²}/π: marginal e^{−x²}/√π, so Φ̄-type tail erfc(q)/2
        let q = {
            let (mut lo, mut hi) = (-10.0f64, 10.0f64);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if 0.5 * libm::erfc(mid) > m {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            0.5 * (lo + hi)
        };
        let want = (-q * q).exp() / std::f64::consts::PI.sqrt();
        assert!((r.summary.perimeter - want).abs() < 1e-6, "m={m}: {} vs {want}", r.summary.perimeter);
    }
}

#[test]
fn degenerate_targets() {
    for &m in &[0.0, 1.0] {
        assert!(find_a_for_measure(1.0, m, CandidateFamily::CompactSmooth).is_err());
    }
}

#[test]
fn profile_sanity() {
    for &(alpha, m, best) in &[(1.0, 0.5, CandidateFamily::CompactSmooth), (3.0, 0.5, CandidateFamily::HalfPlane)] {
        let p = profile_point(alpha, m).unwrap();
        assert_eq!(p.best_family, best, "alpha={alpha}");
        let min = p.competitors.iter().map(|c| c.perimeter).fold(f64::INFINITY, f64::min);
        assert_eq!(p.perimeter, min);
        let law = RadialDensity::power_law(alpha).unwrap();
        let ball = law.ball_perimeter(law.radius_for_measure(m).unwrap()).unwrap();
        assert!(p.perimeter <= ball);
    }
}

#[test]
fn complement_has_equal_perimeter() {
    let r = find_lambda_smooth(1.0, 0.5, None).unwrap();
    let m = r.summary.measure;
    let other = r.summary.complement_measure.unwrap();
    assert!((m + other - 1.0).abs() < 1e-9);
    let c = find_a_for_measure(1.0, other, CandidateFamily::CompactSmooth).unwrap();
    assert!((c.candidate_measure() - other).abs() <= 1e-6);
    assert!(c.complement);
    assert!((c.summary.perimeter - r.summary.perimeter).abs() < 1e-6);
}
