//! Bracketing root finders. Nothing here uses derivatives.

use crate::error::{Error, Result};
use alloc::format;
#[allow(unused_imports)] // inherent float methods shadow it when std is linked
use num_traits::Float;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootOptions {
    pub xtol_abs: f64,
    pub xtol_rel: f64,
    /// Stop as soon as `|f(x)| <= ftol`.
    pub ftol: f64,
    pub max_iter: usize,
}

impl Default for RootOptions {
    fn default() -> Self {
        Self { xtol_abs: 0.0, xtol_rel: 4.0 * f64::EPSILON, ftol: 0.0, max_iter: 200 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    pub fx: f64,
    pub iterations: usize,
    /// Final bracket, ordered.
    pub lo: f64,
    pub hi: f64,
}

fn converged(lo: f64, hi: f64, o: &RootOptions) -> bool {
    let mid = 0.5 * (lo + hi);
    (hi - lo).abs() <= o.xtol_abs.max(o.xtol_rel * mid.abs()) || !(mid > lo.min(hi) && mid < lo.max(hi))
}

fn check_bracket(flo: f64, fhi: f64, lo: f64, hi: f64) -> Result<()> {
    if flo.is_nan() || fhi.is_nan() {
        return Err(Error::NonFinite { at: if flo.is_nan() { lo } else { hi } });
    }
    if flo * fhi > 0.0 {
        return Err(Error::NoSolution(format!(
            "no sign change on [{lo}, {hi}]: f = {flo}, {fhi}"
        )));
    }
    Ok(())
}

/// Plain bisection.
pub fn bisect<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, o: RootOptions) -> Result<Root> {
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut fa = f(a);
    let fb = f(b);
    check_bracket(fa, fb, a, b)?;
    if fa == 0.0 {
        return Ok(Root { x: a, fx: 0.0, iterations: 0, lo: a, hi: a });
    }
    if fb == 0.0 {
        return Ok(Root { x: b, fx: 0.0, iterations: 0, lo: b, hi: b });
    }
    let mut best = if fa.abs() < fb.abs() { (a, fa) } else { (b, fb) };
    for it in 1..=o.max_iter {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm.is_nan() {
            return Err(Error::NonFinite { at: m });
        }
        if fm.abs() < best.1.abs() {
            best = (m, fm);
        }
        if fm == 0.0 || fm.abs() <= o.ftol {
            return Ok(Root { x: m, fx: fm, iterations: it, lo: a, hi: b });
        }
        if (fa < 0.0) == (fm < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
        if converged(a, b, &o) {
            return Ok(Root { x: best.0, fx: best.1, iterations: it, lo: a, hi: b });
        }
    }
    Ok(Root { x: best.0, fx: best.1, iterations: o.max_iter, lo: a, hi: b })
}

/// Regula falsi with the Illinois modification; falls back to bisection
/// whenever the secant step would shrink the bracket too slowly.
pub fn illinois<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, o: RootOptions) -> Result<Root> {
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut fa = f(a);
    let mut fb = f(b);
    check_bracket(fa, fb, a, b)?;
    if fa == 0.0 {
        return Ok(Root { x: a, fx: 0.0, iterations: 0, lo: a, hi: a });
    }
    if fb == 0.0 {
        return Ok(Root { x: b, fx: 0.0, iterations: 0, lo: b, hi: b });
    }
    let mut side = 0i8;
    let mut width = b - a;
    for it in 1..=o.max_iter {
        let mut x = (a * fb - b * fa) / (fb - fa);
        if !(x > a && x < b) {
            x = 0.5 * (a + b);
        }
        let fx = f(x);
        if fx.is_nan() {
            return Err(Error::NonFinite { at: x });
        }
        if fx == 0.0 || fx.abs() <= o.ftol {
            return Ok(Root { x, fx, iterations: it, lo: a, hi: b });
        }
        if (fx < 0.0) == (fa < 0.0) {
            a = x;
            fa = fx;
            if side == -1 {
                fb *= 0.5;
            }
            side = -1;
        } else {
            b = x;
            fb = fx;
            if side == 1 {
                fa *= 0.5;
            }
            side = 1;
        }
        if converged(a, b, &o) {
            let (x, fx) = if fa.abs() < fb.abs() { (a, fa) } else { (b, fb) };
            return Ok(Root { x, fx, iterations: it, lo: a, hi: b });
        }
        // Force a bisection when the bracket has not halved over two steps.
        if it % 2 == 0 {
            if b - a > 0.5 * width {
                let m = 0.5 * (a + b);
                let fm = f(m);
                if fm.is_nan() {
                    return Err(Error::NonFinite { at: m });
                }
                if fm == 0.0 {
                    return Ok(Root { x: m, fx: 0.0, iterations: it, lo: a, hi: b });
                }
                if (fm < 0.0) == (fa < 0.0) {
                    a = m;
                    fa = fm;
                } else {
                    b = m;
                    fb = fm;
                }
                side = 0;
            }
            width = b - a;
        }
    }
    let (x, fx) = if fa.abs() < fb.abs() { (a, fa) } else { (b, fb) };
    Ok(Root { x, fx, iterations: o.max_iter, lo: a, hi: b })
}

/// Locates the switch point of a predicate that is `false` at `lo` and `true`
/// at `hi` (or the reverse); returns the final bracket `(last_false, first_true)`
/// in the orientation given.
pub fn bisect_predicate<P: FnMut(f64) -> bool>(mut p: P, lo: f64, hi: f64, o: RootOptions) -> Result<(f64, f64)> {
    let plo = p(lo);
    let phi = p(hi);
    if plo == phi {
        return Err(Error::NoSolution(format!("predicate does not switch on [{lo}, {hi}]")));
    }
    let (mut f, mut t) = if plo { (hi, lo) } else { (lo, hi) };
    for _ in 0..o.max_iter {
        let m = 0.5 * (f + t);
        if !(m > f.min(t) && m < f.max(t)) {
            break;
        }
        if p(m) {
            t = m;
        } else {
            f = m;
        }
        if (t - f).abs() <= o.xtol_abs.max(o.xtol_rel * m.abs()) {
            break;
        }
    }
    Ok((f, t))
}

/// Golden-section search for a maximum of a unimodal function on `[a, b]`.
pub fn golden_max<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, xtol: f64, max_iter: usize) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (a, b);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..max_iter {
        if (b - a).abs() <= xtol {
            break;
        }
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    if fc > fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisect_sqrt2() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, RootOptions::default()).unwrap();
        assert!((r.x - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn illinois_cubic() {
        let r = illinois(|x| x * x * x - x - 1.0, 1.0, 2.0, RootOptions::default()).unwrap();
        assert!((r.x - 1.324_717_957_244_746).abs() < 1e-14);
        assert!(r.iterations < 40);
    }

    #[test]
    fn no_sign_change() {
        assert!(matches!(
            bisect(|x| x * x + 1.0, -1.0, 1.0, RootOptions::default()),
            Err(Error::NoSolution(_))
        ));
    }

    #[test]
    fn predicate_switch() {
        let (f, t) = bisect_predicate(|x| x >= 0.3, 0.0, 1.0, RootOptions::default()).unwrap();
        assert!(f < 0.3 && t >= 0.3 && t - f < 1e-15);
    }

    #[test]
    fn golden_finds_peak() {
        let (x, _) = golden_max(|x| -(x - 0.7) * (x - 0.7), 0.0, 2.0, 1e-10, 200);
        assert!((x - 0.7).abs() < 1e-8);
    }
}
