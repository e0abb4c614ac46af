//! The subcommands. Each reads its settings, writes its artifacts into the
//! output directory and returns a JSON summary that echoes the resolved
//! settings.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use isoradial::analysis::DEFAULT_TOL;
use isoradial::logconvex::{monotone_transport_1d, TargetPotential, TransportOptions};
use isoradial::shooting::{estimate_alpha_thresholds, profile_point_in};
use isoradial::stationary::{solve_curve, CurveOptions, CurveSolution, StationaryParams};
use isoradial::symmetrize::{perimeter_report, set_measure, symmetrize_set, AngularSet};
use isoradial::{ball_comparison, classify, summarize, RadialDensity};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{LawSpec, Settings};
use crate::error::LabError;
use crate::io::{curve_svg, json_num, num, opt_num, write_atomic, Csv};
use crate::suites::{default_law, run_suite, SuiteConfig, SUITES};

pub const COMMANDS: [&str; 7] = ["solve", "classify", "sweep", "thresholds", "symmetrize", "bounds", "transport"];

/// Default exponent grid of the threshold search.
pub const ALPHA_GRID: &str = "1.02,1.05,1.08,1.11,1.14,1.17,1.2,1.3,1.4,1.5,1.6,1.7,1.8,1.9";

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub summary: Value,
    /// Artifacts written, including the summary file.
    pub files: Vec<PathBuf>,
    /// False when a property suite reported a violation.
    pub ok: bool,
}

struct Out<'a> {
    dir: &'a Path,
    files: Vec<PathBuf>,
}

impl Out<'_> {
    fn write(&mut self, name: &str, text: &str) -> Result<String, LabError> {
        let p = self.dir.join(name);
        write_atomic(&p, text.as_bytes())?;
        self.files.push(p);
        Ok(name.to_string())
    }
}

/// Runs `command`, then writes `<command>.json` with the summary.
pub fn run(command: &str, mut settings: Settings, out_dir: &Path) -> Result<Outcome, LabError> {
    let mut out = Out { dir: out_dir, files: Vec::new() };
    let s = &mut settings;
    let (mut summary, ok) = match command {
        "solve" => (solve(s, &mut out)?, true),
        "classify" => (classify_grid(s, &mut out)?, true),
        "sweep" => (sweep(s, &mut out)?, true),
        "thresholds" => (thresholds(s, &mut out)?, true),
        "symmetrize" => (symmetrize(s, &mut out)?, true),
        "bounds" => bounds(s, &mut out)?,
        "transport" => (transport(s, &mut out)?, true),
        other => return Err(LabError::config(format!("unknown command {other:?}"))),
    };
    let names: Vec<String> = out.files.iter().filter_map(|p| p.file_name()).map(|n| n.to_string_lossy().into_owned()).collect();
    let map = summary.as_object_mut().expect("summaries are objects");
    map.insert("command".into(), json!(command));
    map.insert("config".into(), json!(settings.resolved()));
    map.insert("files".into(), json!(names));
    let name = format!("{command}.json");
    let text = serde_json::to_string_pretty(&summary).map_err(|e| LabError::io(e.to_string()))? + "\n";
    out.write(&name, &text)?;
    Ok(Outcome { summary, files: out.files, ok })
}

/// The law named by `law` (default `default`), truncated at `cutoff`
/// unless that is `none`.
fn law_setting(s: &mut Settings, default: &str) -> Result<(LawSpec, RadialDensity), LabError> {
    let spec = LawSpec::parse(&s.string("law", Some(default))?)?;
    let cutoff = match s.string("cutoff", Some("none"))?.as_str() {
        "none" => None,
        _ => Some(s.f64("cutoff", None)?),
    };
    let law = spec.build(cutoff)?;
    Ok((spec, law))
}

fn clean(msg: impl std::fmt::Display) -> String {
    msg.to_string().replace('\n', " ")
}

fn solve(s: &mut Settings, out: &mut Out) -> Result<Value, LabError> {
    let (_, law) = law_setting(s, "power:1")?;
    let a = s.f64("a", None)?;
    let samples = s.usize("samples", Some(CurveOptions::default().samples))?;
    let tol = s.f64("tol", Some(DEFAULT_TOL))?;
    if samples < 2 || !(tol > 0.0) {
        return Err(LabError::config("samples must be at least 2 and tol positive"));
    }
    let params = match s.string("start", Some("inner"))?.as_str() {
        "inner" => StationaryParams::new(law.clone(), a, s.f64("lambda", None)?)?,
        "origin" => StationaryParams::origin(law.clone(), a)?,
        other => return Err(LabError::config(format!("start must be inner or origin, got {other:?}"))),
    };
    let curve = solve_curve(&params, CurveOptions { samples, sample_radius: None })?;
    let class = classify(&curve, tol)?;

    let mut csv = Csv::new(&["r", "f", "fp"]);
    for p in &curve.samples {
        csv.push(vec![num(p.r), num(p.f), num(p.fp)]);
    }
    out.write("solve.csv", &csv.render())?;

    let mut summary = json!({
        "class": class.name(),
        "a": json_num(a),
        "c": json_num(params.c()),
        "lambda": json_num(params.lambda),
        "law": law.label(),
        "r0": json_num(curve.r0),
        "r1": curve.r1.map(json_num),
        "unbounded": curve.unbounded,
        "f_end": json_num(curve.f_end()),
        "rotation": json_num(curve.rotation.delta()),
        "rotation_stop": format!("{:?}", curve.rotation.stop),
    });
    let map = summary.as_object_mut().expect("object");
    let mut ball = None;
    match summarize(&curve) {
        Ok(sum) => {
            ball = sum.ball_radius_equal_measure;
            map.insert("measure".into(), json_num(sum.measure));
            map.insert("complement_measure".into(), sum.complement_measure.map(json_num).into());
            map.insert("perimeter".into(), json_num(sum.perimeter));
            map.insert("measure_side".into(), json!(format!("{:?}", sum.side)));
            map.insert("ball_radius_equal_measure".into(), sum.ball_radius_equal_measure.map(json_num).into());
            map.insert("tail_bound".into(), json_num(sum.tail_bound));
        }
        Err(e) => {
            map.insert("summary_error".into(), json!(e.to_string()));
        }
    }
    map.insert("ball_ratio".into(), ball_comparison(&curve).ok().map(json_num).into());
    out.write("solve.svg", &curve_svg(&curve, ball))?;
    Ok(summary)
}

fn curve_row(curve: &CurveSolution) -> (String, String, String) {
    (num(curve.rotation.delta()), num(curve.r0), opt_num(curve.r1))
}

fn classify_grid(s: &mut Settings, out: &mut Out) -> Result<Value, LabError> {
    let (_, law) = law_setting(s, "power:1")?;
    let a_grid = s.grid("a_grid", Some("0.1,0.3,0.5,0.7,0.9"))?;
    let l_grid = s.grid("lambda_grid", Some("-0.1,0,1e-4,1e-2"))?;
    let tol = s.f64("tol", Some(DEFAULT_TOL))?;
    let cells: Vec<(f64, f64)> = a_grid.iter().flat_map(|&a| l_grid.iter().map(move |&l| (a, l))).collect();
    // (class, rotation, r0, r1) or the error message
    type Cell = (f64, f64, Result<(String, String, String, String), String>);
    let rows: Vec<Cell> = cells
        .par_iter()
        .map(|&(a, l)| {
            let res = StationaryParams::new(law.clone(), a, l)
                .and_then(|p| solve_curve(&p, CurveOptions::default()))
                .and_then(|c| {
                    let class = classify(&c, tol)?;
                    let (rot, r0, r1) = curve_row(&c);
                    Ok((class.name().to_string(), rot, r0, r1))
                })
                .map_err(clean);
            (a, l, res)
        })
        .collect();
    let mut csv = Csv::new(&["a", "lambda", "class", "rotation", "r0", "r1", "error"]);
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for (a, l, res) in rows {
        let row = match res {
            Ok((class, rot, r0, r1)) => {
                *counts.entry(class.clone()).or_default() += 1;
                vec![num(a), num(l), class, rot, r0, r1, String::new()]
            }
            Err(e) => {
                *counts.entry("error".into()).or_default() += 1;
                vec![num(a), num(l), "error".into(), String::new(), String::new(), String::new(), e]
            }
        };
        csv.push(row);
    }
    out.write("classify.csv", &csv.render())?;
    Ok(json!({ "cells": csv.len(), "counts": counts }))
}

fn sweep(s: &mut Settings, out: &mut Out) -> Result<Value, LabError> {
    let (_, law) = law_setting(s, "power:1")?;
    let measures = s.grid("measures", Some("0.1,0.3,0.5,0.7,0.9"))?;
    if measures.iter().any(|m| !(*m > 0.0)) {
        return Err(LabError::config("measures must be positive"));
    }
    let points: Vec<_> = measures.par_iter().map(|&m| (m, profile_point_in(&law, m))).collect();
    let mut csv = Csv::new(&["measure", "family", "complement", "a", "lambda", "perimeter", "best", "error"]);
    let mut profile = Vec::new();
    for (m, p) in points {
        match p {
            Ok(p) => {
                for c in &p.competitors {
                    let best = c.family == p.best_family && c.complement == p.best_complement;
                    csv.push(vec![
                        num(m),
                        c.family.name().into(),
                        c.complement.to_string(),
                        num(c.a),
                        num(c.lambda),
                        num(c.perimeter),
                        best.to_string(),
                        String::new(),
                    ]);
                }
                profile.push(json!({
                    "measure": json_num(m),
                    "best_family": p.best_family.name(),
                    "complement": p.best_complement,
                    "perimeter": json_num(p.perimeter),
                }));
            }
            Err(e) => {
                let empty = String::new;
                csv.push(vec![num(m), "error".into(), empty(), empty(), empty(), empty(), empty(), clean(&e)]);
                profile.push(json!({ "measure": json_num(m), "error": e.to_string() }));
            }
        }
    }
    out.write("sweep.csv", &csv.render())?;
    Ok(json!({ "law": law.label(), "profile": profile }))
}

fn thresholds(s: &mut Settings, out: &mut Out) -> Result<Value, LabError> {
    let grid = s.grid("alpha_grid", Some(ALPHA_GRID))?;
    let t = estimate_alpha_thresholds(&grid)?;
    let mut csv = Csv::new(&["alpha", "a1", "m1", "sup_rotation"]);
    for x in &t.samples {
        csv.push(vec![num(x.alpha), opt_num(x.a1), opt_num(x.m1), num(x.sup_rotation)]);
    }
    out.write("thresholds.csv", &csv.render())?;
    Ok(json!({
        "alpha0": json_num(t.alpha0),
        "alpha1": t.alpha1.map(json_num),
        "heuristic_alpha": json_num(t.heuristic_alpha),
        "heuristic_in_band": t.heuristic_alpha > 1.4 && t.heuristic_alpha < 1.6,
        "a_range": [json_num(t.a_range.0), json_num(t.a_range.1)],
    }))
}

fn symmetrize(s: &mut Settings, out: &mut Out) -> Result<Value, LabError> {
    let (_, law) = law_setting(s, "lebesgue")?;
    let input = s.string("input", None)?;
    let output = s.string("output", Some("symmetrized.txt"))?;
    let text = std::fs::read_to_string(&input).map_err(|e| LabError::io(format!("cannot read {input}: {e}")))?;
    let set = AngularSet::from_text(law, &text)?;
    let sym = symmetrize_set(&set);
    let name = Path::new(&output)
        .file_name()
        .ok_or_else(|| LabError::config(format!("output must be a file name, got {output:?}")))?
        .to_string_lossy()
        .into_owned();
    out.write(&name, &sym.to_text())?;
    let side = |x: &AngularSet| {
        let p = perimeter_report(x);
        json!({
            "measure": json_num(set_measure(x)),
            "perimeter": json_num(p.value),
            "paired_steps": p.paired_steps,
            "topology_changes": p.topology_changes,
        })
    };
    Ok(json!({ "rings": set.rings().len(), "dr": json_num(set.dr()), "before": side(&set), "after": side(&sym) }))
}

fn bounds(s: &mut Settings, out: &mut Out) -> Result<(Value, bool), LabError> {
    let which = s.string("suite", Some("all"))?;
    let suites: Vec<String> = if which == "all" {
        SUITES.iter().map(|x| x.to_string()).collect()
    } else {
        which.split(',').map(|x| x.trim().to_string()).collect()
    };
    let law_override = s.optional("law");
    let trials = s.usize("trials", Some(100))?;
    let seed = s.u64("seed", Some(0))?;
    let cutoff = s.f64("cutoff", Some(6.0))?;
    let r_max = s.f64("r_max", Some(2.0))?;
    let rings = s.usize("rings", Some(2048))?;
    let mut reports = Vec::new();
    for suite in &suites {
        let law_text = law_override.clone().unwrap_or_else(|| default_law(suite).to_string());
        let cfg = SuiteConfig {
            suite: suite.clone(),
            law: LawSpec::parse(&law_text)?,
            law_text,
            trials,
            seed,
            cutoff,
            r_max,
            rings,
        };
        let rep = run_suite(&cfg)?;
        out.write(&format!("bounds_{suite}.csv"), &rep.csv().render())?;
        reports.push(rep);
    }
    let ok = reports.iter().all(|r| r.passed);
    let reports: Vec<Value> = reports
        .iter()
        .map(|r| {
            json!({
                "suite": r.suite,
                "law": r.law,
                "trials": r.trials,
                "failures": r.failures,
                "passed": r.passed,
                "worst_slack": json_num(r.worst_slack),
                "worst_trial": r.worst_trial,
                "min_value": json_num(r.min_value),
            })
        })
        .collect();
    Ok((json!({ "passed": ok, "suites": reports }), ok))
}

fn transport(s: &mut Settings, out: &mut Out) -> Result<Value, LabError> {
    let a = match LawSpec::parse(&s.string("law", Some("model_1d:1"))?)? {
        LawSpec::Model1D(a) => a,
        _ => return Err(LabError::config("transport needs law model_1d:A as its source")),
    };
    let target_text = s.string("target", Some(&format!("model:{a}")))?;
    let target = match target_text.split_once(':') {
        Some(("model", b)) => {
            TargetPotential::model(b.parse().map_err(|_| LabError::config(format!("bad target {target_text:?}")))?)?
        }
        Some(("flat", w)) => {
            let w: f64 = w.parse().map_err(|_| LabError::config(format!("bad target {target_text:?}")))?;
            if !(w > 0.0) {
                return Err(LabError::config("flat target needs a positive half width"));
            }
            TargetPotential::flat(w)
        }
        _ => return Err(LabError::config(format!("target must be model:B or flat:W, got {target_text:?}"))),
    };
    let opts = TransportOptions { grid: s.usize("grid", Some(10_000))?, force: s.bool("force", false)? };
    let map = monotone_transport_1d(a, target, opts)?;
    let mut csv = Csv::new(&["x", "t"]);
    for &(x, t) in &map.samples {
        csv.push(vec![num(x), num(t)]);
    }
    out.write("transport.csv", &csv.render())?;
    Ok(json!({
        "source": format!("model_1d:{a}"),
        "target": map.target.label,
        "lipschitz_estimate": json_num(map.lipschitz_estimate),
        "min_slope": json_num(map.min_slope),
        "pushforward_residual": json_num(map.pushforward_residual),
        "hypotheses_hold": map.hypotheses_hold,
        "samples": map.samples.len(),
    }))
}
