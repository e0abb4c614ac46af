//! Seeded random test sets.
//!
//! Trial `i` of a batch draws from the ChaCha8 stream `i` of the master
//! seed, so batches are reproducible and can run in any order.

use std::f64::consts::PI;

use isoradial::logconvex::AxialRegion;
use isoradial::symmetrize::AngularSet;
use isoradial::RadialDensity;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn trial_rng(master: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(trial);
    rng
}

/// Union of up to three angular blobs whose centers and widths move
/// smoothly with `r`, each alive on a random radial range, on `rings` rings
/// of `(0, r_max)`.
pub fn random_angular_set<R: Rng>(rng: &mut R, law: RadialDensity, r_max: f64, rings: usize) -> isoradial::Result<AngularSet> {
    struct Blob {
        center: f64,
        drift: f64,
        freq: f64,
        width: f64,
        wobble: f64,
        lo: f64,
        hi: f64,
    }
    let count = rng.gen_range(1..=3);
    let blobs: Vec<Blob> = (0..count)
        .map(|_| {
            let lo = rng.gen_range(0.0..0.6);
            Blob {
                center: rng.gen_range(-PI..PI),
                drift: rng.gen_range(0.0..1.5),
                freq: rng.gen_range(0.2..3.0),
                width: rng.gen_range(0.05..2.5),
                wobble: rng.gen_range(0.0..0.9),
                lo,
                hi: (lo + rng.gen_range(0.05..1.0f64)).min(1.0),
            }
        })
        .collect();
    let dr = r_max / rings as f64;
    let data = (0..rings)
        .map(|i| {
            let r = (i as f64 + 0.5) * dr;
            let x = r / r_max;
            let arcs = blobs
                .iter()
                .filter(|b| x >= b.lo && x <= b.hi)
                .map(|b| {
                    let w = b.width * (1.0 + b.wobble * (7.0 * b.freq * x).cos());
                    (b.center + b.drift * (5.0 * b.freq * x).sin() - 0.5 * w, w)
                })
                .collect();
            (r, arcs)
        })
        .collect();
    AngularSet::from_arcs(law, data, dr)
}

/// An axially symmetric region inside the ball of radius `cut`.
pub fn random_axial_region<R: Rng>(rng: &mut R, cut: f64) -> AxialRegion {
    let radii = |rng: &mut R| {
        let inner = rng.gen_range(0.0..0.8 * cut);
        (inner, (inner + rng.gen_range(0.05..0.5) * cut).min(cut))
    };
    match rng.gen_range(0..5) {
        0 => AxialRegion::Ball { radius: rng.gen_range(0.02..1.0) * cut },
        1 => {
            let (inner, outer) = radii(rng);
            AxialRegion::Annulus { inner, outer }
        }
        2 => {
            let (inner, outer) = radii(rng);
            AxialRegion::AnnularSector { inner, outer, half_angle: rng.gen_range(0.02..PI) }
        }
        3 => {
            let (inner, outer) = radii(rng);
            let h0 = rng.gen_range(0.1..PI - 0.1);
            let amplitude = rng.gen_range(0.0..0.95) * h0.min(PI - h0);
            AxialRegion::WavySector { inner, outer, h0, amplitude, waves: rng.gen_range(0.0..10.0) }
        }
        _ => {
            let radius = rng.gen_range(0.02..0.5) * cut;
            AxialRegion::OffsetDisk { center: rng.gen_range(0.0..(cut - radius)), radius }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: f64 = trial_rng(1, 5).gen();
        let b: f64 = trial_rng(1, 5).gen();
        let c: f64 = trial_rng(1, 6).gen();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn regions_are_valid() {
        for i in 0..200 {
            let r = random_axial_region(&mut trial_rng(3, i), 6.0);
            r.validate().unwrap();
            assert!(r.outer_radius() <= 6.0 + 1e-12);
        }
    }

    #[test]
    fn sets_are_valid() {
        for i in 0..20 {
            let s = random_angular_set(&mut trial_rng(4, i), RadialDensity::lebesgue(2), 2.0, 256).unwrap();
            assert_eq!(s.rings().len(), 256);
        }
    }
}
