//! Randomized property batches.
//!
//! Each suite evaluates one inequality per trial and reports the slack
//! `value − bound` (negative means violated beyond the tolerance already
//! folded into `bound`). Trials run in parallel and are collected in trial
//! order, so reports do not depend on the thread count.

use std::f64::consts::PI;

use isoradial::logconvex::{
    axial_measure, axial_perimeter, ball_bound_is_minimal, ball_ratio_check, bigball_threshold, bigballs_report,
    cubic_test_function, divergence_lower_bound, power_derivative_law, ratio_lower_bound, region_integral, AxialRegion,
};
use isoradial::symmetrize::{set_measure, set_perimeter, symmetrize_set};
use isoradial::RadialDensity;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::LawSpec;
use crate::error::LabError;
use crate::generators::{random_angular_set, random_axial_region, trial_rng};
use crate::io::{num, Csv};

pub const SUITES: [&str; 7] = ["symmetrization", "divergence", "cheeger", "ratio", "borell", "minimal", "bigballs"];

/// Law a suite runs under when none is given.
pub fn default_law(suite: &str) -> &'static str {
    match suite {
        "symmetrization" => "gaussian",
        "borell" => "exp_r_alpha:2",
        "bigballs" => "vprime_power:1",
        _ => "exp_r",
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial: u64,
    /// What was generated, e.g. `annulus:r1:r2`.
    pub case: String,
    pub value: f64,
    pub bound: f64,
    pub slack: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub law: String,
    pub trials: usize,
    pub failures: usize,
    pub passed: bool,
    /// Smallest slack over all trials.
    pub worst_slack: f64,
    pub worst_trial: Option<u64>,
    /// Smallest `value` over all trials (the minimum ratio for ratio suites).
    pub min_value: f64,
    #[serde(skip)]
    pub records: Vec<TrialRecord>,
}

impl SuiteReport {
    fn collect(suite: &str, law: &str, records: Vec<TrialRecord>) -> Self {
        let failures = records.iter().filter(|r| !r.pass).count();
        let worst = records
            .iter()
            .filter(|r| !r.slack.is_nan())
            .min_by(|a, b| a.slack.total_cmp(&b.slack));
        // a NaN slack is a failed trial and already counted
        Self {
            suite: suite.into(),
            law: law.into(),
            trials: records.len(),
            failures,
            passed: failures == 0,
            worst_slack: worst.map_or(f64::NAN, |r| r.slack),
            worst_trial: worst.map(|r| r.trial),
            min_value: records.iter().map(|r| r.value).fold(f64::INFINITY, f64::min),
            records,
        }
    }

    pub fn csv(&self) -> Csv {
        let mut c = Csv::new(&["trial", "case", "value", "bound", "slack", "pass"]);
        for r in &self.records {
            c.push(vec![r.trial.to_string(), r.case.clone(), num(r.value), num(r.bound), num(r.slack), r.pass.to_string()]);
        }
        c
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub suite: String,
    pub law: LawSpec,
    pub law_text: String,
    pub trials: usize,
    pub seed: u64,
    /// Radius cutoff for infinite-mass laws.
    pub cutoff: f64,
    /// Outer radius of random angular sets.
    pub r_max: f64,
    /// Rings of random angular sets.
    pub rings: usize,
}

pub fn region_label(r: &AxialRegion) -> String {
    match *r {
        AxialRegion::Ball { radius } => format!("ball:{}", num(radius)),
        AxialRegion::Annulus { inner, outer } => format!("annulus:{}:{}", num(inner), num(outer)),
        AxialRegion::AnnularSector { inner, outer, half_angle } => {
            format!("sector:{}:{}:{}", num(inner), num(outer), num(half_angle))
        }
        AxialRegion::WavySector { inner, outer, h0, amplitude, waves } => {
            format!("wavy:{}:{}:{}:{}:{}", num(inner), num(outer), num(h0), num(amplitude), num(waves))
        }
        AxialRegion::OffsetDisk { center, radius } => format!("disk:{}:{}", num(center), num(radius)),
    }
}

fn record(trial: u64, case: String, value: f64, bound: f64) -> TrialRecord {
    let slack = value - bound;
    TrialRecord { trial, case, value, bound, slack, pass: slack >= 0.0 }
}

fn failed(trial: u64, case: String, e: impl std::fmt::Display) -> TrialRecord {
    TrialRecord { trial, case: format!("{case} error={e}"), value: f64::NAN, bound: f64::NAN, slack: f64::NAN, pass: false }
}

fn par_trials<F>(cfg: &SuiteConfig, run: F) -> Vec<TrialRecord>
where
    F: Fn(u64) -> TrialRecord + Sync,
{
    (0..cfg.trials as u64).into_par_iter().map(&run).collect()
}

fn region_trials<F>(cfg: &SuiteConfig, law: &RadialDensity, check: F) -> Vec<TrialRecord>
where
    F: Fn(&RadialDensity, &AxialRegion) -> isoradial::Result<(f64, f64)> + Sync,
{
    par_trials(cfg, |t| {
        let region = random_axial_region(&mut trial_rng(cfg.seed, t), cfg.cutoff);
        let case = region_label(&region);
        match check(law, &region) {
            Ok((value, bound)) => record(t, case, value, bound),
            Err(e) => failed(t, case, e),
        }
    })
}

pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteReport, LabError> {
    let records = match cfg.suite.as_str() {
        "symmetrization" => symmetrization(cfg)?,
        "divergence" => {
            let law = log_convex_law(cfg)?;
            region_trials(cfg, &law, |law, reg| {
                let per = axial_perimeter(law, reg)?;
                Ok((per, divergence_lower_bound(law, reg)? - 1e-8 * per.max(1.0)))
            })
        }
        "cheeger" => {
            if cfg.law != LawSpec::ExpR {
                return Err(LabError::config("the cheeger suite needs law exp_r, where v' = 1"));
            }
            let law = log_convex_law(cfg)?;
            // perimeter ≥ divergence bound ≥ measure
            region_trials(cfg, &law, |law, reg| {
                let per = axial_perimeter(law, reg)?;
                let bound = divergence_lower_bound(law, reg)?;
                let m = axial_measure(law, reg)?;
                Ok((per.min(bound + 1e-8 * bound), m * (1.0 - 1e-12)))
            })
        }
        "ratio" | "borell" => {
            let law = log_convex_law(cfg)?;
            let floor = if cfg.suite == "ratio" { ratio_lower_bound() } else { 1.0 };
            region_trials(cfg, &law, |law, reg| Ok((ball_ratio_check(law, reg)?, floor - 1e-6)))
        }
        "minimal" => {
            let law = log_convex_law(cfg)?;
            minimal(cfg, &law)
        }
        "bigballs" => bigballs(cfg)?,
        other => return Err(LabError::config(format!("unknown suite {other:?}; expected one of {}", SUITES.join(", ")))),
    };
    Ok(SuiteReport::collect(&cfg.suite, &cfg.law_text, records))
}

fn log_convex_law(cfg: &SuiteConfig) -> Result<RadialDensity, LabError> {
    if !cfg.law.log_convex() {
        return Err(LabError::config(format!("suite {} needs a log-convex law, got {}", cfg.suite, cfg.law_text)));
    }
    if !(cfg.cutoff > 0.0) {
        return Err(LabError::config("cutoff must be positive"));
    }
    cfg.law.build(Some(cfg.cutoff))
}

/// Exact measure, exact idempotence, and perimeter non-increase with
/// slack `10 Δr`.
fn symmetrization(cfg: &SuiteConfig) -> Result<Vec<TrialRecord>, LabError> {
    let law = cfg.law.build(None)?;
    if !(cfg.r_max > 0.0) || cfg.rings < 2 {
        return Err(LabError::config("symmetrization needs r_max > 0 and at least 2 rings"));
    }
    Ok(par_trials(cfg, |t| {
        let set = match random_angular_set(&mut trial_rng(cfg.seed, t), law.clone(), cfg.r_max, cfg.rings) {
            Ok(s) => s,
            Err(e) => return failed(t, "set".into(), e),
        };
        let sym = symmetrize_set(&set);
        let exact = set_measure(&sym) == set_measure(&set) && symmetrize_set(&sym).rings() == sym.rings();
        let (p, ps) = (set_perimeter(&set), set_perimeter(&sym));
        let mut r = record(t, format!("rings:{}", cfg.rings), p + 10.0 * set.dr(), ps);
        if !exact {
            r.case.push_str(" measure-or-idempotence-mismatch");
            r.pass = false;
        }
        r
    }))
}

/// A random annular sector of measure `m` against the centered ball of the
/// same measure, for the increasing weight `v'`.
fn minimal(cfg: &SuiteConfig, law: &RadialDensity) -> Vec<TrialRecord> {
    let top = law.total_mass().unwrap_or(f64::INFINITY);
    par_trials(cfg, |t| {
        let mut rng = trial_rng(cfg.seed, t);
        let inner = rng.gen_range(0.0..0.5) * cfg.cutoff;
        let h = rng.gen_range(0.1..PI);
        let base = match law.mass_within(inner) {
            Ok(b) => b,
            Err(e) => return failed(t, "sector".into(), e),
        };
        let m = rng.gen_range(0.01..0.9) * (top - base) * h / PI;
        let case = format!("sector:{}:{}:m={}", num(inner), num(h), num(m));
        let run = || -> isoradial::Result<(f64, f64)> {
            let outer = law.radius_for_measure(base + PI * m / h)?;
            let reg = AxialRegion::AnnularSector { inner, outer, half_angle: h };
            let weight = |r: f64| law.dv(r);
            let got = region_integral(law, &reg, weight)?;
            let ball = ball_bound_is_minimal(law, weight, axial_measure(law, &reg)?)?;
            Ok((got, ball - 1e-8 * ball))
        };
        match run() {
            Ok((v, b)) => record(t, case, v, b),
            Err(e) => failed(t, case, e),
        }
    })
}

/// Smallest certified `r0` in `[lo, hi]`, by bisection to `1e-8`.
pub fn certificate_flip<P: Fn(f64) -> isoradial::Result<bool>>(holds: P, mut lo: f64, mut hi: f64) -> isoradial::Result<f64> {
    if holds(lo)? || !holds(hi)? {
        return Err(isoradial::Error::NoSolution(format!("certificate does not flip on [{lo}, {hi}]")));
    }
    while hi - lo > 1e-8 {
        let mid = 0.5 * (lo + hi);
        if holds(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Flip points of the big-ball certificate against the closed form, for
/// `d ∈ {2, 3}`, with `s = r0` and with `s` fixed at the threshold. The
/// `value` is `1e-6 − |flip − threshold|`.
fn bigballs(cfg: &SuiteConfig) -> Result<Vec<TrialRecord>, LabError> {
    let LawSpec::VPrimePower(a) = cfg.law else {
        return Err(LabError::config("the bigballs suite needs law vprime_power:a"));
    };
    if !(a > 0.0 && a <= 1.0) {
        return Err(LabError::config("the cubic test function certifies vprime_power:a only for 0 < a <= 1"));
    }
    let cases: Vec<(u32, bool)> = vec![(2, true), (2, false), (3, true), (3, false)];
    let out = cases
        .par_iter()
        .enumerate()
        .map(|(i, &(d, adaptive))| {
            let t = bigball_threshold(a, d);
            let case = format!("d={d}:{}", if adaptive { "s=r0" } else { "s=threshold" });
            let flip = power_derivative_law(a, d).and_then(|law| {
                if adaptive {
                    certificate_flip(
                        |r0| {
                            let (f, df) = cubic_test_function(r0);
                            Ok(bigballs_report(&law, f, df, r0)?.holds)
                        },
                        0.5 * t,
                        1.5 * t,
                    )
                } else {
                    let (f, df) = cubic_test_function(t);
                    certificate_flip(|r0| Ok(bigballs_report(&law, &f, &df, r0)?.holds), 0.5 * t, 1.5 * t)
                }
            });
            match flip {
                Ok(r) => record(i as u64, format!("{case}:flip={}:threshold={}", num(r), num(t)), 1e-6 - (r - t).abs(), 0.0),
                Err(e) => failed(i as u64, case, e),
            }
        })
        .collect();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(suite: &str, law: &str, trials: usize) -> SuiteConfig {
        SuiteConfig {
            suite: suite.into(),
            law: LawSpec::parse(law).unwrap(),
            law_text: law.into(),
            trials,
            seed: 9,
            cutoff: 6.0,
            r_max: 2.0,
            rings: 256,
        }
    }

    #[test]
    fn reports_are_reproducible() {
        let a = run_suite(&cfg("ratio", "exp_r", 6)).unwrap();
        let b = run_suite(&cfg("ratio", "exp_r", 6)).unwrap();
        assert_eq!(a, b);
        assert!(a.passed, "{a:?}");
        assert_eq!(a.records.iter().map(|r| r.trial).collect::<Vec<_>>(), (0..6).collect::<Vec<_>>());
    }

    #[test]
    fn suites_check_their_law() {
        assert!(run_suite(&cfg("ratio", "gaussian", 1)).is_err());
        assert!(run_suite(&cfg("cheeger", "exp_r_alpha:2", 1)).is_err());
        assert!(run_suite(&cfg("bigballs", "exp_r", 1)).is_err());
        assert!(run_suite(&cfg("nope", "exp_r", 1)).is_err());
    }

    #[test]
    fn small_batches_pass() {
        for s in ["symmetrization", "divergence", "cheeger", "minimal"] {
            let rep = run_suite(&cfg(s, default_law(s), 4)).unwrap();
            assert!(rep.passed, "{rep:?}");
        }
    }
}
