//! Run configuration: `key=value` files overlaid by command-line flags.
//!
//! Every value a command reads is recorded, defaults included, so the
//! resolved map can be echoed into the JSON summary.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use isoradial::logconvex::power_derivative_law;
use isoradial::{RadialDensity, Sign};

use crate::error::LabError;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

impl Settings {
    pub fn new() -> Self {
        Self::default()
    }

    /// Parses `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, LabError> {
        let mut values = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| LabError::config(format!("line {}: expected key=value, got {raw:?}", n + 1)))?;
            let key = k.trim().replace('-', "_");
            if key.is_empty() {
                return Err(LabError::config(format!("line {}: empty key", n + 1)));
            }
            values.insert(key, v.trim().to_string());
        }
        Ok(Self { values })
    }

    pub fn from_file(path: &Path) -> Result<Self, LabError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| LabError::io(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Flags win over the file.
    pub fn set(&mut self, key: &str, value: Option<String>) {
        if let Some(v) = value {
            self.values.insert(key.to_string(), v);
        }
    }

    pub fn resolved(&self) -> &BTreeMap<String, String> {
        &self.values
    }

    fn raw(&mut self, key: &str, default: Option<&str>) -> Result<String, LabError> {
        match self.values.get(key) {
            Some(v) => Ok(v.clone()),
            None => match default {
                Some(d) => {
                    self.values.insert(key.to_string(), d.to_string());
                    Ok(d.to_string())
                }
                None => Err(LabError::config(format!("missing required setting `{key}`"))),
            },
        }
    }

    pub fn string(&mut self, key: &str, default: Option<&str>) -> Result<String, LabError> {
        self.raw(key, default)
    }

    pub fn optional(&self, key: &str) -> Option<String> {
        self.values.get(key).cloned()
    }

    pub fn f64(&mut self, key: &str, default: Option<f64>) -> Result<f64, LabError> {
        let d = default.map(|x| x.to_string());
        let s = self.raw(key, d.as_deref())?;
        let x: f64 = s.parse().map_err(|_| LabError::config(format!("`{key}`: not a number: {s:?}")))?;
        if !x.is_finite() {
            return Err(LabError::config(format!("`{key}` must be finite")));
        }
        Ok(x)
    }

    pub fn usize(&mut self, key: &str, default: Option<usize>) -> Result<usize, LabError> {
        let d = default.map(|x| x.to_string());
        let s = self.raw(key, d.as_deref())?;
        s.parse().map_err(|_| LabError::config(format!("`{key}`: not a non-negative integer: {s:?}")))
    }

    pub fn u64(&mut self, key: &str, default: Option<u64>) -> Result<u64, LabError> {
        let d = default.map(|x| x.to_string());
        let s = self.raw(key, d.as_deref())?;
        s.parse().map_err(|_| LabError::config(format!("`{key}`: not a non-negative integer: {s:?}")))
    }

    pub fn bool(&mut self, key: &str, default: bool) -> Result<bool, LabError> {
        let s = self.raw(key, Some(if default { "true" } else { "false" }))?;
        match s.as_str() {
            "true" | "1" | "yes" => Ok(true),
            "false" | "0" | "no" => Ok(false),
            _ => Err(LabError::config(format!("`{key}`: expected true/false, got {s:?}"))),
        }
    }

    pub fn grid(&mut self, key: &str, default: Option<&str>) -> Result<Vec<f64>, LabError> {
        let s = self.raw(key, default)?;
        parse_grid(&s).map_err(|m| LabError::config(format!("`{key}`: {m}")))
    }
}

/// `x1,x2,...`, `lin:lo:hi:n` or `log:lo:hi:n`.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, String> {
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("not a number: {t:?}"));
    let spaced = |rest: &str, log: bool| -> Result<Vec<f64>, String> {
        let parts: Vec<&str> = rest.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("expected lo:hi:n, got {rest:?}"));
        }
        let (lo, hi) = (num(parts[0])?, num(parts[1])?);
        let n: usize = parts[2].trim().parse().map_err(|_| format!("bad count {:?}", parts[2]))?;
        if n < 2 {
            return Err("a spaced grid needs at least 2 points".into());
        }
        if log && !(lo > 0.0 && hi > 0.0) {
            return Err("log grids need positive ends".into());
        }
        Ok((0..n)
            .map(|i| {
                let t = i as f64 / (n - 1) as f64;
                if log {
                    (lo.ln() + (hi.ln() - lo.ln()) * t).exp()
                } else {
                    lo + (hi - lo) * t
                }
            })
            .collect())
    };
    let out = if let Some(rest) = s.strip_prefix("lin:") {
        spaced(rest, false)?
    } else if let Some(rest) = s.strip_prefix("log:") {
        spaced(rest, true)?
    } else {
        s.split(',').filter(|t| !t.trim().is_empty()).map(num).collect::<Result<Vec<_>, _>>()?
    };
    if out.is_empty() {
        return Err("empty grid".into());
    }
    if out.iter().any(|x| !x.is_finite()) {
        return Err("grid values must be finite".into());
    }
    Ok(out)
}

/// A weight named on the command line.
#[derive(Debug, Clone, PartialEq)]
pub enum LawSpec {
    /// `C_α e^{−r^α}`.
    Power(f64),
    Gaussian,
    Lebesgue,
    InverseR,
    ExpR,
    ExpRAlpha(f64),
    /// The one-dimensional model `dx/cos(Ax)`; only the transport command uses it.
    Model1D(f64),
    /// Custom: `v' = r^a`, weight `e^{r^{a+1}/(a+1)}`.
    VPrimePower(f64),
    /// Custom: `e^{σ Σ c_k r^k}` (`k ≥ 1`).
    Poly { sign: Sign, coeffs: Vec<f64> },
}

impl LawSpec {
    pub fn parse(s: &str) -> Result<Self, LabError> {
        let bad = |m: &str| LabError::config(format!("law {s:?}: {m}"));
        let param = |rest: &str| rest.parse::<f64>().map_err(|_| bad("parameter is not a number"));
        let (head, rest) = s.split_once(':').unwrap_or((s, ""));
        let spec = match head {
            "power" => LawSpec::Power(param(rest)?),
            "gaussian" => LawSpec::Gaussian,
            "lebesgue" => LawSpec::Lebesgue,
            "inverse_r" => LawSpec::InverseR,
            "exp_r" => LawSpec::ExpR,
            "exp_r_alpha" => LawSpec::ExpRAlpha(param(rest)?),
            "model_1d" => LawSpec::Model1D(param(rest)?),
            "vprime_power" => LawSpec::VPrimePower(param(rest)?),
            "poly" => {
                let (sign, coeffs) = rest.split_once(':').ok_or_else(|| bad("expected poly:+|-:c1,c2,..."))?;
                let sign = match sign {
                    "+" => Sign::Plus,
                    "-" => Sign::Minus,
                    _ => return Err(bad("sign must be + or -")),
                };
                let coeffs = parse_grid(coeffs).map_err(|m| bad(&m))?;
                LawSpec::Poly { sign, coeffs }
            }
            _ => return Err(bad("unknown law")),
        };
        let needs_rest = matches!(head, "power" | "exp_r_alpha" | "model_1d" | "vprime_power" | "poly");
        if !needs_rest && !rest.is_empty() {
            return Err(bad("this law takes no parameter"));
        }
        Ok(spec)
    }

    /// Infinite-mass weights that need a cutoff radius for region tests.
    pub fn log_convex(&self) -> bool {
        matches!(self, LawSpec::ExpR | LawSpec::ExpRAlpha(_) | LawSpec::VPrimePower(_))
            || matches!(self, LawSpec::Poly { sign: Sign::Plus, .. })
    }

    /// The planar law, truncated at `cutoff` when given. Parameters the
    /// constructors reject are configuration errors.
    pub fn build(&self, cutoff: Option<f64>) -> Result<RadialDensity, LabError> {
        self.build_law(cutoff).map_err(|e| match e {
            LabError::Numeric(e) => LabError::config(format!("law: {e}")),
            other => other,
        })
    }

    fn build_law(&self, cutoff: Option<f64>) -> Result<RadialDensity, LabError> {
        let law = match self {
            LawSpec::Power(alpha) => RadialDensity::power_law(*alpha)?,
            LawSpec::Gaussian => RadialDensity::gaussian(),
            LawSpec::Lebesgue => RadialDensity::lebesgue(2),
            LawSpec::InverseR => RadialDensity::inverse_r(),
            LawSpec::ExpR => RadialDensity::exp_r(2),
            LawSpec::ExpRAlpha(alpha) => RadialDensity::exp_r_alpha(*alpha, 2)?,
            LawSpec::VPrimePower(a) => power_derivative_law(*a, 2)?,
            LawSpec::Model1D(_) => {
                return Err(LabError::config("model_1d is a one-dimensional measure; use it with `transport`"))
            }
            LawSpec::Poly { sign, coeffs } => {
                let c = coeffs.clone();
                let dc = coeffs.clone();
                let v = Arc::new(move |r: f64| c.iter().enumerate().map(|(k, ck)| ck * r.powi(k as i32 + 1)).sum());
                let dv = Arc::new(move |r: f64| {
                    dc.iter().enumerate().map(|(k, ck)| ck * (k as f64 + 1.0) * r.powi(k as i32)).sum()
                });
                RadialDensity::custom(*sign, v, dv, 2, 1.0, false)?
            }
        };
        match cutoff {
            Some(r) => Ok(law.with_domain_radius(r)?),
            None => Ok(law),
        }
    }
}
