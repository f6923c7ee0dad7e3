//! Run configuration: strict JSON schema, defaults, overrides, validation.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::admm::AdmmParams;
use crate::error::{Error, Result};
use crate::sensor::SensorConfig;
use crate::solver::{InterfaceFlux, ProblemKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RegularizationMode {
    #[serde(rename = "none")]
    None,
    #[serde(rename = "l1")]
    L1,
    #[serde(rename = "l1-mc")]
    L1MassCorrected,
}

impl RegularizationMode {
    pub const NAMES: [&'static str; 3] = ["none", "l1", "l1-mc"];

    pub fn name(self) -> &'static str {
        match self {
            RegularizationMode::None => "none",
            RegularizationMode::L1 => "l1",
            RegularizationMode::L1MassCorrected => "l1-mc",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        match s {
            "none" => Some(Self::None),
            "l1" => Some(Self::L1),
            "l1-mc" => Some(Self::L1MassCorrected),
            _ => None,
        }
    }
}

/// ADMM settings shared by all elements; `mu` is set per element from the sensor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdmmConfig {
    pub outer_iters: usize,
    pub beta: f64,
    pub alpha: f64,
    pub tol: f64,
    pub inner_max: usize,
}

impl Default for AdmmConfig {
    fn default() -> Self {
        Self {
            outer_iters: 400,
            beta: 20.0,
            alpha: 1e-4,
            tol: 1e-3,
            inner_max: 50,
        }
    }
}

impl AdmmConfig {
    pub fn params(&self, lambda: f64) -> AdmmParams {
        AdmmParams {
            mu: 2.0 / lambda,
            beta: self.beta,
            alpha: self.alpha,
            tol: self.tol,
            outer_iters: self.outer_iters,
            inner_max: self.inner_max,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sweep {
    pub p: Vec<usize>,
    pub elements: Vec<usize>,
    pub modes: Vec<RegularizationMode>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub problem: ProblemKind,
    pub p: usize,
    pub elements: usize,
    pub domain: [f64; 2],
    pub t_end: f64,
    pub cfl: f64,
    pub mode: RegularizationMode,
    pub sensor: SensorConfig,
    pub admm: AdmmConfig,
    pub flux: InterfaceFlux,
    pub apply_every: usize,
    pub output_dir: PathBuf,
    pub precision: usize,
    pub max_steps: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<Sweep>,
}

impl RunConfig {
    /// Default configuration for a problem.
    pub fn new(problem: ProblemKind, p: usize, elements: usize) -> Self {
        let (t_end, kappa, flux) = match problem {
            ProblemKind::Burgers => (0.345, 0.8, InterfaceFlux::LocalLaxFriedrichs),
            ProblemKind::Advection => (2.0, 0.8, InterfaceFlux::LocalLaxFriedrichs),
            ProblemKind::PcSystem => (0.25, 0.9, InterfaceFlux::EntropyStable),
        };
        Self {
            problem,
            p,
            elements,
            domain: [0.0, 2.0],
            t_end,
            cfl: 0.5,
            mode: RegularizationMode::None,
            sensor: SensorConfig {
                kappa,
                ..SensorConfig::default()
            },
            admm: AdmmConfig::default(),
            flux,
            apply_every: 1,
            output_dir: PathBuf::from("output"),
            precision: 17,
            max_steps: 1_000_000,
            sweep: None,
        }
    }

    pub fn with_mode(mut self, mode: RegularizationMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |field: &str, msg: String| Err(Error::Config(format!("field `{field}`: {msg}")));
        if self.p < 1 {
            return bad("p", format!("must be >= 1, got {}", self.p));
        }
        if self.elements < 1 {
            return bad("elements", "must be >= 1".into());
        }
        if !(self.domain[0] < self.domain[1]) {
            return bad("domain", "left end must be below right end".into());
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return bad("t_end", format!("must be positive, got {}", self.t_end));
        }
        if !(self.cfl > 0.0 && self.cfl.is_finite()) {
            return bad("cfl", format!("must be positive, got {}", self.cfl));
        }
        if self.apply_every < 1 {
            return bad("apply_every", "must be >= 1".into());
        }
        if !(1..=17).contains(&self.precision) {
            return bad(
                "precision",
                format!("must lie in 1..=17, got {}", self.precision),
            );
        }
        if self.max_steps < 1 {
            return bad("max_steps", "must be >= 1".into());
        }
        if self.problem != ProblemKind::PcSystem && self.flux != InterfaceFlux::LocalLaxFriedrichs {
            return bad(
                "flux",
                format!("scalar problems use `llf`, got `{}`", self.flux.name()),
            );
        }
        let degrees: Vec<usize> = match &self.sweep {
            Some(s) => s.p.clone(),
            None => vec![self.p],
        };
        let modes: Vec<RegularizationMode> = match &self.sweep {
            Some(s) => s.modes.clone(),
            None => vec![self.mode],
        };
        if let Some(s) = &self.sweep {
            if s.p.is_empty() || s.elements.is_empty() || s.modes.is_empty() {
                return bad("sweep", "every sweep list must be non-empty".into());
            }
            if s.p.contains(&0) {
                return bad("sweep.p", "degrees must be >= 1".into());
            }
            if s.elements.contains(&0) {
                return bad("sweep.elements", "element counts must be >= 1".into());
            }
        }
        let regularized = modes.iter().any(|m| *m != RegularizationMode::None);
        for &p in &degrees {
            if regularized {
                self.sensor
                    .validate(p)
                    .map_err(|m| Error::Config(format!("field `sensor`: {m}")))?;
            }
        }
        let admm = self.admm.params(self.sensor.lambda_max);
        if admm.validate().is_err() || self.admm.outer_iters < 1 {
            return bad("admm", "all ADMM parameters must be positive".into());
        }
        Ok(())
    }

    /// Expands a sweep into single-run configurations (p, then elements, then mode).
    pub fn expand(&self) -> Vec<RunConfig> {
        match &self.sweep {
            None => vec![self.clone()],
            Some(s) => {
                let mut out = Vec::new();
                for &p in &s.p {
                    for &i in &s.elements {
                        for &m in &s.modes {
                            let mut c = self.clone();
                            c.sweep = None;
                            c.p = p;
                            c.elements = i;
                            c.mode = m;
                            out.push(c);
                        }
                    }
                }
                out
            }
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSensor {
    kappa: Option<f64>,
    lambda_max: Option<f64>,
    order_low: Option<usize>,
    order_high: Option<usize>,
    s1_floor: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAdmm {
    outer_iters: Option<usize>,
    beta: Option<f64>,
    alpha: Option<f64>,
    tol: Option<f64>,
    inner_max: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    p: Vec<usize>,
    elements: Vec<usize>,
    modes: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    problem: Option<String>,
    p: Option<usize>,
    elements: Option<usize>,
    domain: Option<[f64; 2]>,
    t_end: Option<f64>,
    cfl: Option<f64>,
    mode: Option<String>,
    #[serde(default)]
    sensor: RawSensor,
    #[serde(default)]
    admm: RawAdmm,
    flux: Option<String>,
    apply_every: Option<usize>,
    output_dir: Option<PathBuf>,
    precision: Option<usize>,
    max_steps: Option<usize>,
    sweep: Option<RawSweep>,
}

fn suggest(field: &str, got: &str, options: &[&str]) -> Error {
    let best = options
        .iter()
        .min_by_key(|o| strsim::levenshtein(got, o))
        .copied()
        .unwrap_or_default();
    Error::Config(format!(
        "field `{field}`: unknown value `{got}`; did you mean `{best}`? (expected one of {})",
        options.join(", ")
    ))
}

fn parse_enum<T>(
    field: &str,
    value: &str,
    options: &[&str],
    parse: impl Fn(&str) -> Option<T>,
) -> Result<T> {
    parse(value).ok_or_else(|| suggest(field, value, options))
}

fn parse_problem(s: &str) -> Option<ProblemKind> {
    match s {
        "burgers" => Some(ProblemKind::Burgers),
        "advection" => Some(ProblemKind::Advection),
        "pc-system" => Some(ProblemKind::PcSystem),
        _ => None,
    }
}

fn parse_flux(s: &str) -> Option<InterfaceFlux> {
    match s {
        "llf" => Some(InterfaceFlux::LocalLaxFriedrichs),
        "entropy-conservative" => Some(InterfaceFlux::EntropyConservative),
        "entropy-stable" => Some(InterfaceFlux::EntropyStable),
        _ => None,
    }
}

fn resolve(raw: RawConfig) -> Result<RunConfig> {
    let problem = match &raw.problem {
        Some(s) => parse_enum("problem", s, &ProblemKind::NAMES, parse_problem)?,
        None => {
            return Err(Error::Config(
                "field `problem`: missing required field".into(),
            ))
        }
    };
    let mode = match &raw.mode {
        Some(s) => parse_enum(
            "mode",
            s,
            &RegularizationMode::NAMES,
            RegularizationMode::parse,
        )?,
        None => RegularizationMode::None,
    };
    let sweep = match raw.sweep {
        Some(s) => {
            let modes = s
                .modes
                .iter()
                .map(|m| {
                    parse_enum(
                        "sweep.modes",
                        m,
                        &RegularizationMode::NAMES,
                        RegularizationMode::parse,
                    )
                })
                .collect::<Result<Vec<_>>>()?;
            Some(Sweep {
                p: s.p,
                elements: s.elements,
                modes,
            })
        }
        None => None,
    };
    let (p, elements) = match (&sweep, raw.p, raw.elements) {
        (_, Some(p), Some(i)) => (p, i),
        (Some(s), p, i) => (
            p.unwrap_or_else(|| s.p.first().copied().unwrap_or(0)),
            i.unwrap_or_else(|| s.elements.first().copied().unwrap_or(0)),
        ),
        (None, None, _) => return Err(Error::Config("field `p`: missing required field".into())),
        (None, _, None) => {
            return Err(Error::Config(
                "field `elements`: missing required field".into(),
            ))
        }
    };
    let mut cfg = RunConfig::new(problem, p, elements);
    cfg.mode = mode;
    cfg.sweep = sweep;
    if let Some(d) = raw.domain {
        cfg.domain = d;
    }
    if let Some(t) = raw.t_end {
        cfg.t_end = t;
    }
    if let Some(c) = raw.cfl {
        cfg.cfl = c;
    }
    if let Some(f) = &raw.flux {
        cfg.flux = parse_enum("flux", f, &InterfaceFlux::NAMES, parse_flux)?;
    }
    let s = raw.sensor;
    cfg.sensor.kappa = s.kappa.unwrap_or(cfg.sensor.kappa);
    cfg.sensor.lambda_max = s.lambda_max.unwrap_or(cfg.sensor.lambda_max);
    cfg.sensor.order_low = s.order_low.unwrap_or(cfg.sensor.order_low);
    cfg.sensor.order_high = s.order_high.unwrap_or(cfg.sensor.order_high);
    cfg.sensor.s1_floor = s.s1_floor.unwrap_or(cfg.sensor.s1_floor);
    let a = raw.admm;
    cfg.admm.outer_iters = a.outer_iters.unwrap_or(cfg.admm.outer_iters);
    cfg.admm.beta = a.beta.unwrap_or(cfg.admm.beta);
    cfg.admm.alpha = a.alpha.unwrap_or(cfg.admm.alpha);
    cfg.admm.tol = a.tol.unwrap_or(cfg.admm.tol);
    cfg.admm.inner_max = a.inner_max.unwrap_or(cfg.admm.inner_max);
    if let Some(k) = raw.apply_every {
        cfg.apply_every = k;
    }
    if let Some(o) = raw.output_dir {
        cfg.output_dir = o;
    }
    if let Some(pr) = raw.precision {
        cfg.precision = pr;
    }
    if let Some(m) = raw.max_steps {
        cfg.max_steps = m;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Config(format!("{e}"))
}

/// Parses and validates a JSON config document.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let raw: RawConfig = serde_json::from_str(text).map_err(json_error)?;
    resolve(raw)
}

/// Parses a config document after applying `key.path=value` overrides.
pub fn parse_config_with_overrides(text: &str, overrides: &[String]) -> Result<RunConfig> {
    if overrides.is_empty() {
        return parse_config(text);
    }
    let mut doc: Value = serde_json::from_str(text).map_err(json_error)?;
    for ov in overrides {
        apply_override(&mut doc, ov)?;
    }
    let raw: RawConfig = serde_json::from_value(doc).map_err(json_error)?;
    resolve(raw)
}

/// Sets a dotted key in a JSON object. The value is read as JSON when it
/// parses, else taken as a string.
pub fn apply_override(doc: &mut Value, spec: &str) -> Result<()> {
    let (key, raw_value) = spec
        .split_once('=')
        .ok_or_else(|| Error::Config(format!("override `{spec}` is not of the form KEY=VALUE")))?;
    if key.is_empty() {
        return Err(Error::Config(format!("override `{spec}` has an empty key")));
    }
    let value = serde_json::from_str::<Value>(raw_value)
        .unwrap_or_else(|_| Value::String(raw_value.into()));
    let mut cursor = doc;
    let parts: Vec<&str> = key.split('.').collect();
    for (n, part) in parts.iter().enumerate() {
        let obj = cursor.as_object_mut().ok_or_else(|| {
            Error::Config(format!(
                "override `{key}`: `{part}` has a non-object parent"
            ))
        })?;
        if n + 1 == parts.len() {
            obj.insert((*part).to_string(), value);
            return Ok(());
        }
        cursor = obj
            .entry((*part).to_string())
            .or_insert_with(|| Value::Object(Default::default()));
    }
    Ok(())
}
