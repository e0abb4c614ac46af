//! Circular symmetrization of planar sets discretized on rings.
//!
//! A set is stored as its angular slices on the circles `|x| = r_i`, with
//! `r_i` on a uniform grid of spacing `Δr`; ring `i` stands for the annulus
//! `[r_i − Δr/2, r_i + Δr/2]`. Angles live in `(−π, π]`, and an arc crossing
//! the seam is stored as two intervals touching `−π` and `π`.
//!
//! The weighted perimeter follows the boundary graphs between consecutive
//! rings: boundary angles of equal count are paired and joined by segments;
//! where the count changes the two rings are joined by a cap arc along the
//! mid-circle plus radial half-steps from each endpoint.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt::Write as _;
#[allow(unused_imports)] // inherent float methods shadow it when std is linked
use num_traits::Float;

use crate::density::RadialDensity;
use crate::error::{Error, Result};

const TAU: f64 = 2.0 * PI;

#[derive(Debug, Clone, PartialEq)]
pub struct Ring {
    pub r: f64,
    /// Disjoint, sorted, positive-length intervals in `(−π, π]`.
    pub intervals: Vec<(f64, f64)>,
}

impl Ring {
    /// Total angular length.
    pub fn length(&self) -> f64 {
        self.intervals.iter().map(|(lo, hi)| hi - lo).sum()
    }

    fn wraps(&self) -> bool {
        match (self.intervals.first(), self.intervals.last()) {
            (Some(f), Some(l)) => f.0 == -PI && l.1 == PI,
            _ => false,
        }
    }

    /// Boundary angles, alternating lower and upper ends starting with a
    /// lower one; seam endpoints of an arc through `±π` are interior.
    fn boundary(&self) -> Vec<f64> {
        let seam = self.wraps();
        let mut out = Vec::with_capacity(2 * self.intervals.len());
        for &(lo, hi) in &self.intervals {
            if !(seam && lo == -PI) {
                out.push(lo);
            }
            if !(seam && hi == PI) {
                out.push(hi);
            }
        }
        if seam && !out.is_empty() {
            // the upper end of the wrapped arc comes first
            out.rotate_left(1);
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct AngularSet {
    law: RadialDensity,
    rings: Vec<Ring>,
    dr: f64,
}

/// Wraps an angle into `(−π, π]`.
pub fn wrap_angle(t: f64) -> f64 {
    let mut x = t % TAU;
    if x <= -PI {
        x += TAU;
    } else if x > PI {
        x -= TAU;
    }
    x
}

/// Sorts and merges arbitrary intervals inside `[−π, π]`.
fn normalize(mut v: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    v.retain(|(lo, hi)| hi > lo);
    v.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(v.len());
    for (lo, hi) in v {
        match out.last_mut() {
            Some(last) if lo <= last.1 => last.1 = last.1.max(hi),
            _ => out.push((lo, hi)),
        }
    }
    if out.len() == 1 && out[0].0 <= -PI && out[0].1 >= PI {
        out[0] = (-PI, PI);
    }
    out
}

impl AngularSet {
    pub fn new(law: RadialDensity, rings: Vec<(f64, Vec<(f64, f64)>)>, dr: f64) -> Result<Self> {
        let set = Self { law, rings: rings.into_iter().map(|(r, intervals)| Ring { r, intervals }).collect(), dr };
        set.validate()?;
        Ok(set)
    }

    /// Builds rings from arcs `(start, length)`; arcs are wrapped, split at
    /// the seam and merged where they overlap.
    pub fn from_arcs(law: RadialDensity, rings: Vec<(f64, Vec<(f64, f64)>)>, dr: f64) -> Result<Self> {
        let mut out = Vec::with_capacity(rings.len());
        for (r, arcs) in rings {
            let mut pieces = Vec::new();
            for (start, len) in arcs {
                if !(len > 0.0) {
                    continue;
                }
                if len >= TAU {
                    pieces.push((-PI, PI));
                    continue;
                }
                let lo = wrap_angle(start);
                let hi = lo + len;
                if hi <= PI {
                    pieces.push((lo, hi));
                } else {
                    pieces.push((lo, PI));
                    pieces.push((-PI, hi - TAU));
                }
            }
            out.push((r, normalize(pieces)));
        }
        Self::new(law, out, dr)
    }

    /// `n` rings at `r_i = (i + 1/2) Δr`, `Δr = r_max / n`, each given by `slice(r)`.
    pub fn from_fn<F: FnMut(f64) -> Vec<(f64, f64)>>(law: RadialDensity, r_max: f64, n: usize, mut slice: F) -> Result<Self> {
        if !(r_max > 0.0) || n == 0 {
            return Err(Error::Domain(format!("need r_max > 0 and n > 0, got {r_max}, {n}")));
        }
        let dr = r_max / n as f64;
        let rings = (0..n)
            .map(|i| {
                let r = (i as f64 + 0.5) * dr;
                (r, slice(r))
            })
            .collect();
        Self::new(law, rings, dr)
    }

    /// Centered disk of radius `radius` on `n` rings.
    pub fn disk(law: RadialDensity, radius: f64, n: usize) -> Result<Self> {
        Self::from_fn(law, radius, n, |_| alloc::vec![(-PI, PI)])
    }

    pub fn validate(&self) -> Result<()> {
        if self.law.dimension() != 2 {
            return Err(Error::Domain("angular sets need a planar law".into()));
        }
        if !(self.dr > 0.0 && self.dr.is_finite()) {
            return Err(Error::Domain(format!("ring spacing must be positive, got {}", self.dr)));
        }
        for (i, ring) in self.rings.iter().enumerate() {
            if !(ring.r > 0.0 && ring.r.is_finite()) {
                return Err(Error::Domain(format!("ring {i}: radius {} must be positive", ring.r)));
            }
            if i > 0 {
                let step = ring.r - self.rings[i - 1].r;
                if !((step - self.dr).abs() <= 1e-9 * self.dr.max(ring.r)) {
                    return Err(Error::Domain(format!("ring {i}: spacing {step} differs from {}", self.dr)));
                }
            }
            let mut prev = f64::NEG_INFINITY;
            for &(lo, hi) in &ring.intervals {
                if !(lo >= -PI && hi <= PI && hi > lo) {
                    return Err(Error::Domain(format!("ring {i}: bad interval ({lo}, {hi})")));
                }
                if !(lo > prev) {
                    return Err(Error::Domain(format!("ring {i}: intervals overlap or are unsorted at {lo}")));
                }
                prev = hi;
            }
        }
        Ok(())
    }

    pub fn law(&self) -> &RadialDensity {
        &self.law
    }
    pub fn rings(&self) -> &[Ring] {
        &self.rings
    }
    pub fn dr(&self) -> f64 {
        self.dr
    }

    /// One line per ring, `r;lo,hi;lo,hi;…`, preceded by a `# dr=` line.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# dr={:e}", self.dr);
        for ring in &self.rings {
            let _ = write!(s, "{:e}", ring.r);
            for (lo, hi) in &ring.intervals {
                let _ = write!(s, ";{lo:e},{hi:e}");
            }
            s.push('\n');
        }
        s
    }

    /// Parses [`to_text`](Self::to_text). Without a `# dr=` line the spacing
    /// is taken from the first two rings.
    pub fn from_text(law: RadialDensity, text: &str) -> Result<Self> {
        let mut dr = None;
        let mut rings = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(c) = line.strip_prefix('#') {
                if let Some(v) = c.trim().strip_prefix("dr=") {
                    dr = Some(parse(v.trim(), n)?);
                }
                continue;
            }
            let mut parts = line.split(';');
            let r = parse(parts.next().unwrap_or("").trim(), n)?;
            let mut iv = Vec::new();
            for p in parts {
                let p = p.trim();
                if p.is_empty() {
                    continue;
                }
                let (lo, hi) =
                    p.split_once(',').ok_or_else(|| Error::Domain(format!("line {}: expected lo,hi", n + 1)))?;
                iv.push((parse(lo.trim(), n)?, parse(hi.trim(), n)?));
            }
            rings.push((r, iv));
        }
        let dr = match dr {
            Some(d) => d,
            None if rings.len() >= 2 => rings[1].0 - rings[0].0,
            None => return Err(Error::Domain("cannot infer ring spacing; add a '# dr=' line".into())),
        };
        Self::new(law, rings, dr)
    }
}

fn parse(s: &str, line: usize) -> Result<f64> {
    s.parse::<f64>().map_err(|_| Error::Domain(format!("line {}: cannot parse '{s}'", line + 1)))
}

/// Replaces every ring by the centered arc of the same length.
pub fn symmetrize_set(set: &AngularSet) -> AngularSet {
    let rings = set
        .rings
        .iter()
        .map(|ring| {
            let l = ring.length();
            let intervals = if ring.intervals.is_empty() {
                Vec::new()
            } else if l >= TAU {
                alloc::vec![(-PI, PI)]
            } else {
                alloc::vec![(-0.5 * l, 0.5 * l)]
            };
            Ring { r: ring.r, intervals }
        })
        .collect();
    AngularSet { law: set.law.clone(), rings, dr: set.dr }
}

/// `Σ ρ(r_i) r_i L_i Δr`.
pub fn set_measure(set: &AngularSet) -> f64 {
    set.rings.iter().map(|ring| set.law.density(ring.r) * ring.r * ring.length() * set.dr).sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerimeterReport {
    pub value: f64,
    /// Steps joined by paired boundary segments.
    pub paired_steps: usize,
    /// Steps where the boundary count changes (cap rule applied).
    pub topology_changes: usize,
}

/// Angular measure of the intersection of two sorted interval lists.
fn overlap(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    let (mut i, mut j, mut s) = (0, 0, 0.0);
    while i < a.len() && j < b.len() {
        let lo = a[i].0.max(b[j].0);
        let hi = a[i].1.min(b[j].1);
        if hi > lo {
            s += hi - lo;
        }
        if a[i].1 < b[j].1 {
            i += 1;
        } else {
            j += 1;
        }
    }
    s
}

/// Displacements for the even cyclic shift `s`: wrapped differences, with
/// the fewest and cheapest `±2π` corrections that make upper-minus-lower
/// displacement equal the length change `dl`. Without them an endpoint
/// could jump across the complement through `±π`.
fn shifted(b0: &[f64], b1: &[f64], s: usize, dl: f64) -> Vec<f64> {
    let k = b0.len();
    // even positions are lower ends
    let sign = |j: usize| if j.is_multiple_of(2) { -1.0 } else { 1.0 };
    let mut d: Vec<f64> = (0..k).map(|j| wrap_angle(b1[(j + s) % k] - b0[j])).collect();
    let implied: f64 = (0..k).map(|j| sign(j) * d[j]).sum();
    let turns = ((dl - implied) / TAU).round();
    if turns != 0.0 {
        let step = turns.signum() * TAU;
        // moving d_j by sign(j)·step changes the implied length by step
        let mut order: Vec<usize> = (0..k).collect();
        let extra = |j: usize| (d[j] + sign(j) * step).abs() - d[j].abs();
        order.sort_by(|&x, &y| extra(x).total_cmp(&extra(y)));
        for &j in order.iter().take(turns.abs() as usize) {
            d[j] += sign(j) * step;
        }
    }
    d
}

/// Best even cyclic pairing of two equal-size boundary lists; returns the
/// angle differences.
fn pair(b0: &[f64], b1: &[f64], dl: f64) -> Vec<f64> {
    let k = b0.len();
    let mut best: Option<(f64, Vec<f64>)> = None;
    for s in (0..k).step_by(2) {
        let d = shifted(b0, b1, s, dl);
        let cost: f64 = d.iter().map(|x| x.abs()).sum();
        if best.as_ref().is_none_or(|(c, _)| cost < *c) {
            best = Some((cost, d));
        }
    }
    best.map_or_else(Vec::new, |b| b.1)
}

/// Discretized weighted perimeter with its step diagnostics.
pub fn perimeter_report(set: &AngularSet) -> PerimeterReport {
    let law = &set.law;
    let dr = set.dr;
    let rho = |r: f64| if r > 0.0 { law.density(r) } else { 0.0 };
    let mut value = 0.0;
    let mut paired_steps = 0;
    let mut topology_changes = 0;

    // cap between a ring and an empty neighbour at distance dr/2
    let edge = |ring: &Ring, r_cap: f64, toward: f64| -> f64 {
        let pts = ring.boundary().len() as f64;
        let cap = if r_cap > 0.0 { rho(r_cap) * r_cap * ring.length() } else { 0.0 };
        cap + pts * 0.5 * dr * rho(ring.r + 0.25 * dr * toward)
    };

    if let Some(first) = set.rings.first() {
        value += edge(first, first.r - 0.5 * dr, -1.0);
    }
    if let Some(last) = set.rings.last() {
        value += edge(last, last.r + 0.5 * dr, 1.0);
    }
    for w in set.rings.windows(2) {
        let (s0, s1) = (&w[0], &w[1]);
        let rm = 0.5 * (s0.r + s1.r);
        let (b0, b1) = (s0.boundary(), s1.boundary());
        if b0.len() == b1.len() {
            if b0.is_empty() {
                // both empty or both full: no boundary crosses the step
                let sd = s0.length() + s1.length() - 2.0 * overlap(&s0.intervals, &s1.intervals);
                value += rho(rm) * rm * sd;
                continue;
            }
            paired_steps += 1;
            for d in pair(&b0, &b1, s1.length() - s0.length()) {
                value += (dr * dr + rm * rm * d * d).sqrt() * rho(rm);
            }
        } else {
            topology_changes += 1;
            let sd = s0.length() + s1.length() - 2.0 * overlap(&s0.intervals, &s1.intervals);
            value += rho(rm) * rm * sd.max(0.0);
            value += b0.len() as f64 * 0.5 * dr * rho(s0.r + 0.25 * dr);
            value += b1.len() as f64 * 0.5 * dr * rho(s1.r - 0.25 * dr);
        }
    }
    PerimeterReport { value, paired_steps, topology_changes }
}

/// Discretized weighted perimeter.
pub fn set_perimeter(set: &AngularSet) -> f64 {
    perimeter_report(set).value
}

#[cfg(test)]
mod tests {
    use super::*;

    fn leb() -> RadialDensity {
        RadialDensity::lebesgue(2)
    }

    #[test]
    fn ring_example() {
        let s = AngularSet::new(leb(), alloc::vec![(1.0, alloc::vec![(0.1, 0.4), (1.0, 1.2)])], 0.1).unwrap();
        let t = symmetrize_set(&s);
        let (lo, hi) = t.rings()[0].intervals[0];
        assert!((lo + 0.25).abs() < 1e-15 && (hi - 0.25).abs() < 1e-15);
    }

    #[test]
    fn disk_is_fixed_and_exact() {
        let d = AngularSet::disk(leb(), 2.0, 400).unwrap();
        let s = symmetrize_set(&d);
        assert_eq!(s.rings(), d.rings());
        assert!((set_perimeter(&d) - 4.0 * PI).abs() < 1e-12);
        assert!((set_measure(&d) - 4.0 * PI).abs() < 1e-4);
    }

    #[test]
    fn wedge_matches_centered_wedge() {
        let law = RadialDensity::gaussian();
        let w = AngularSet::from_arcs(
            law.clone(),
            (0..300).map(|i| ((i as f64 + 0.5) * 0.02, alloc::vec![(2.5, 1.3)])).collect(),
            0.02,
        )
        .unwrap();
        let s = symmetrize_set(&w);
        assert_eq!(set_measure(&w), set_measure(&s));
        assert!((set_perimeter(&w) - set_perimeter(&s)).abs() < 1e-12);
    }

    #[test]
    fn gaussian_half_plane() {
        let h = AngularSet::from_fn(RadialDensity::gaussian(), 12.0, 4096, |_| alloc::vec![(-PI / 2.0, PI / 2.0)])
            .unwrap();
        assert!((set_perimeter(&h) - 1.0 / (2.0 * PI).sqrt()).abs() < 1e-6);
        assert!((set_measure(&h) - 0.5).abs() < 1e-6);
    }

    #[test]
    fn text_round_trip() {
        let s = AngularSet::from_arcs(
            leb(),
            alloc::vec![(0.5, alloc::vec![(3.0, 0.5)]), (1.5, alloc::vec![(0.0, 1.0), (2.0, 0.1)])],
            1.0,
        )
        .unwrap();
        let t = AngularSet::from_text(leb(), &s.to_text()).unwrap();
        assert_eq!(s.rings(), t.rings());
        assert_eq!(s.dr(), t.dr());
    }

    #[test]
    fn shrinking_arc_does_not_jump_through_the_seam() {
        // the wide arc ends while a thin arc near its lower end continues
        let s = AngularSet::new(leb(), alloc::vec![(1.0, alloc::vec![(-2.1, 2.2)]), (1.1, alloc::vec![(-2.1, -2.05)])], 0.1)
            .unwrap();
        let p = set_perimeter(&s);
        assert!(p >= 1.05 * 4.25, "{p}");
        assert!(p >= set_perimeter(&symmetrize_set(&s)) - 1e-12);
    }

    #[test]
    fn invalid_sets_are_rejected() {
        assert!(AngularSet::new(leb(), alloc::vec![(1.0, alloc::vec![(0.5, 0.2)])], 0.1).is_err());
        assert!(AngularSet::new(leb(), alloc::vec![(1.0, alloc::vec![(0.0, 0.5), (0.4, 0.6)])], 0.1).is_err());
        assert!(AngularSet::new(leb(), alloc::vec![(1.0, alloc::vec![]), (1.3, alloc::vec![])], 0.1).is_err());
    }
}
