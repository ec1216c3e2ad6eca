//! Scenario documents: TOML parsing, validation and serialisation.
//!
//! ```toml
//! name = "fig2"
//!
//! [params]
//! gS1 = "1"
//! gA1 = 2.0
//! kappaS = "-10+0.5i"
//!
//! [inputs.S1]
//! xi = "2i"
//!
//! [inputs.V1]
//! n_ch = 0.1
//!
//! [run]
//! z_max = 10.0
//! z_steps = 501
//! n_max = 64   # optional
//! k_max = 5    # optional
//!
//! [observables]
//! entries = ["moments:S1,A1", "squeeze:S1V1"]
//! ```

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Deserialize;
use toml::Spanned;

use crate::error::{CouplerError, Result};
use crate::mode::{ModeId, ModeSelection};
use crate::model::{validate_params, CouplerParams, InputSpec, Mismatches};

pub const DEFAULT_N_MAX: usize = 64;
pub const DEFAULT_K_MAX: usize = 5;
pub const MAX_Z_STEPS: usize = 1_000_000;

/// Parse a complex literal such as `1`, `-2.5`, `2i`, `-i`, `1-2i` or `1e-3+4e2i`.
pub fn parse_complex(text: &str) -> Result<Complex64> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || CouplerError::parse(format!("malformed complex literal `{text}`"));
    let real = |t: &str| -> Result<f64> {
        // reject the textual forms inf/nan that f64::from_str accepts
        if t.is_empty() || t.chars().any(|c| c.is_ascii_alphabetic() && !matches!(c, 'e' | 'E')) {
            return Err(bad());
        }
        let v: f64 = t.parse().map_err(|_| bad())?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(bad())
        }
    };
    if s.is_empty() {
        return Err(bad());
    }
    let Some(body) = s.strip_suffix('i') else {
        return Ok(Complex64::new(real(&s)?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re_part, im_part) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("", body),
    };
    let im = match im_part {
        "" | "+" => 1.0,
        "-" => -1.0,
        t => real(t)?,
    };
    let re = if re_part.is_empty() { 0.0 } else { real(re_part)? };
    Ok(Complex64::new(re, im))
}

/// Shortest round-trip text form `a+bi`.
pub fn format_complex(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{:?}{}{:?}i", z.re, sign, z.im.abs())
}

/// Statistic family requested for a mode selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Quantity {
    Moments,
    Variance,
    Squeeze,
    Quadrature,
    Pn,
    All,
}

impl Quantity {
    pub const EACH: [Quantity; 5] = [
        Quantity::Moments,
        Quantity::Variance,
        Quantity::Squeeze,
        Quantity::Quadrature,
        Quantity::Pn,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Quantity::Moments => "moments",
            Quantity::Variance => "variance",
            Quantity::Squeeze => "squeeze",
            Quantity::Quadrature => "quadrature",
            Quantity::Pn => "pn",
            Quantity::All => "all",
        }
    }

    /// The concrete families this tag stands for.
    pub fn expand(self) -> Vec<Quantity> {
        match self {
            Quantity::All => Quantity::EACH.to_vec(),
            q => vec![q],
        }
    }
}

impl FromStr for Quantity {
    type Err = CouplerError;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        Quantity::EACH
            .iter()
            .chain(&[Quantity::All])
            .copied()
            .find(|q| q.tag().eq_ignore_ascii_case(t))
            .ok_or_else(|| CouplerError::parse(format!("unknown quantity `{s}`")))
    }
}

/// One requested observable, e.g. `moments:S1,A1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Observable {
    pub quantity: Quantity,
    pub selection: ModeSelection,
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.quantity.tag(), self.selection)
    }
}

pub fn parse_observable(text: &str) -> Result<Observable> {
    let (q, sel) = text
        .split_once(':')
        .ok_or_else(|| CouplerError::parse(format!("observable `{text}` must look like `quantity:modes`")))?;
    Ok(Observable {
        quantity: q.parse()?,
        selection: sel.parse()?,
    })
}

impl FromStr for Observable {
    type Err = CouplerError;
    fn from_str(s: &str) -> Result<Self> {
        parse_observable(s)
    }
}

/// A complete run description.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub name: Option<String>,
    pub params: CouplerParams,
    pub inputs: [InputSpec; 6],
    pub z_max: f64,
    pub z_steps: usize,
    pub n_max: usize,
    pub k_max: usize,
    pub observables: Vec<Observable>,
}

/// `all` for each of the six single modes.
pub fn default_observables() -> Vec<Observable> {
    ModeId::ALL
        .iter()
        .map(|&m| Observable {
            quantity: Quantity::All,
            selection: ModeSelection::Single(m),
        })
        .collect()
}

impl ScenarioConfig {
    /// Propagation lengths `z_k = z_max k / (z_steps - 1)`.
    pub fn grid(&self) -> Vec<f64> {
        let last = (self.z_steps - 1) as f64;
        (0..self.z_steps).map(|k| self.z_max * k as f64 / last).collect()
    }

    pub fn validate(&self) -> Result<()> {
        validate_params(&self.params)?;
        for inp in &self.inputs {
            inp.validate()?;
        }
        if !(self.z_max.is_finite() && self.z_max > 0.0) {
            return Err(CouplerError::Validation(format!(
                "z_max = {} must be positive",
                self.z_max
            )));
        }
        if !(2..=MAX_Z_STEPS).contains(&self.z_steps) {
            return Err(CouplerError::Validation(format!(
                "z_steps = {} outside 2..={MAX_Z_STEPS}",
                self.z_steps
            )));
        }
        crate::gaussian_stats::check_limits(self.k_max, self.n_max)
    }

    /// Concrete (selection, quantity) pairs in request order, without duplicates.
    pub fn requested(&self) -> Vec<(ModeSelection, Quantity)> {
        let mut out: Vec<(ModeSelection, Quantity)> = Vec::new();
        for o in &self.observables {
            for q in o.quantity.expand() {
                if !out.contains(&(o.selection, q)) {
                    out.push((o.selection, q));
                }
            }
        }
        out
    }

    /// TOML text that parses back to this configuration.
    pub fn to_toml(&self) -> String {
        let mut s = String::new();
        if let Some(name) = &self.name {
            s.push_str(&format!("name = {}\n\n", toml_string(name)));
        }
        s.push_str("[params]\n");
        for (key, v) in self.params.couplings() {
            s.push_str(&format!("{key} = \"{}\"\n", format_complex(v)));
        }
        for (key, v) in self.params.mismatch.as_array() {
            if v != 0.0 {
                s.push_str(&format!("{key} = {v:?}\n"));
            }
        }
        for (m, inp) in ModeId::ALL.iter().zip(&self.inputs) {
            if *inp == InputSpec::default() {
                continue;
            }
            s.push_str(&format!(
                "\n[inputs.{m}]\nxi = \"{}\"\nr = {:?}\ntheta = {:?}\nn_ch = {:?}\n",
                format_complex(inp.xi),
                inp.r,
                inp.theta,
                inp.n_ch
            ));
        }
        s.push_str(&format!(
            "\n[run]\nz_max = {:?}\nz_steps = {}\nn_max = {}\nk_max = {}\n",
            self.z_max, self.z_steps, self.n_max, self.k_max
        ));
        let entries: Vec<String> = self.observables.iter().map(|o| toml_string(&o.to_string())).collect();
        s.push_str(&format!("\n[observables]\nentries = [{}]\n", entries.join(", ")));
        s
    }
}

fn toml_string(s: &str) -> String {
    toml::Value::String(s.to_string()).to_string()
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    name: Option<String>,
    params: Option<RawParams>,
    #[serde(default)]
    inputs: RawInputs,
    run: Option<RawRun>,
    observables: Option<RawObservables>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawParams {
    #[serde(rename = "gS1")]
    g_s1: Option<Spanned<toml::Value>>,
    #[serde(rename = "gA1")]
    g_a1: Option<Spanned<toml::Value>>,
    #[serde(rename = "gS2")]
    g_s2: Option<Spanned<toml::Value>>,
    #[serde(rename = "gA2")]
    g_a2: Option<Spanned<toml::Value>>,
    #[serde(rename = "kappaS")]
    kappa_s: Option<Spanned<toml::Value>>,
    #[serde(rename = "kappaA")]
    kappa_a: Option<Spanned<toml::Value>>,
    #[serde(rename = "dkS1", default)]
    dk_s1: f64,
    #[serde(rename = "dkA1", default)]
    dk_a1: f64,
    #[serde(rename = "dkS2", default)]
    dk_s2: f64,
    #[serde(rename = "dkA2", default)]
    dk_a2: f64,
    #[serde(rename = "dKS", default)]
    dkk_s: f64,
    #[serde(rename = "dKA", default)]
    dkk_a: f64,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawInputs {
    #[serde(rename = "S1")]
    s1: Option<RawInput>,
    #[serde(rename = "A1")]
    a1: Option<RawInput>,
    #[serde(rename = "V1")]
    v1: Option<RawInput>,
    #[serde(rename = "S2")]
    s2: Option<RawInput>,
    #[serde(rename = "A2")]
    a2: Option<RawInput>,
    #[serde(rename = "V2")]
    v2: Option<RawInput>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInput {
    xi: Option<Spanned<toml::Value>>,
    #[serde(default)]
    r: f64,
    #[serde(default)]
    theta: f64,
    #[serde(default)]
    n_ch: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRun {
    z_max: f64,
    z_steps: usize,
    n_max: Option<usize>,
    k_max: Option<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawObservables {
    #[serde(default)]
    entries: Vec<Spanned<String>>,
}

fn line_of(text: &str, offset: usize) -> usize {
    text.as_bytes()[..offset.min(text.len())]
        .iter()
        .filter(|&&b| b == b'\n')
        .count()
        + 1
}

/// Best-effort key name from a serde message such as "unknown field `foo`".
fn key_in_message(msg: &str) -> Option<String> {
    let start = msg.find('`')? + 1;
    let len = msg[start..].find('`')?;
    Some(msg[start..start + len].to_string())
}

fn complex_value(text: &str, key: &str, v: &Option<Spanned<toml::Value>>) -> Result<Complex64> {
    let Some(v) = v else {
        return Ok(Complex64::new(0.0, 0.0));
    };
    let line = Some(line_of(text, v.span().start));
    let out = match v.get_ref() {
        toml::Value::String(s) => parse_complex(s).map_err(|e| match e {
            CouplerError::Parse { message, .. } => CouplerError::parse_at(line, key, message),
            other => other,
        })?,
        toml::Value::Float(f) => Complex64::new(*f, 0.0),
        toml::Value::Integer(i) => Complex64::new(*i as f64, 0.0),
        other => {
            return Err(CouplerError::parse_at(
                line,
                key,
                format!("expected a number or complex string, found {}", other.type_str()),
            ))
        }
    };
    if !(out.re.is_finite() && out.im.is_finite()) {
        return Err(CouplerError::parse_at(line, key, "value is not finite"));
    }
    Ok(out)
}

pub fn parse_scenario(text: &str) -> Result<ScenarioConfig> {
    let raw: RawScenario = toml::from_str(text).map_err(|e| {
        let line = e.span().map(|s| line_of(text, s.start));
        let message = e.message().to_string();
        CouplerError::Parse {
            line,
            key: key_in_message(&message),
            message,
        }
    })?;
    let p = raw
        .params
        .ok_or_else(|| CouplerError::parse_at(None, "params", "missing [params] section"))?;
    let run = raw
        .run
        .ok_or_else(|| CouplerError::parse_at(None, "run", "missing [run] section"))?;
    let params = CouplerParams {
        g_s1: complex_value(text, "params.gS1", &p.g_s1)?,
        g_a1: complex_value(text, "params.gA1", &p.g_a1)?,
        g_s2: complex_value(text, "params.gS2", &p.g_s2)?,
        g_a2: complex_value(text, "params.gA2", &p.g_a2)?,
        kappa_s: complex_value(text, "params.kappaS", &p.kappa_s)?,
        kappa_a: complex_value(text, "params.kappaA", &p.kappa_a)?,
        mismatch: Mismatches {
            dk_s1: p.dk_s1,
            dk_a1: p.dk_a1,
            dk_s2: p.dk_s2,
            dk_a2: p.dk_a2,
            dkk_s: p.dkk_s,
            dkk_a: p.dkk_a,
        },
    };
    let mut inputs = [InputSpec::default(); 6];
    let raw_inputs = [
        raw.inputs.s1,
        raw.inputs.a1,
        raw.inputs.v1,
        raw.inputs.s2,
        raw.inputs.a2,
        raw.inputs.v2,
    ];
    for ((m, slot), ri) in ModeId::ALL.iter().zip(inputs.iter_mut()).zip(raw_inputs) {
        if let Some(ri) = ri {
            *slot = InputSpec {
                xi: complex_value(text, &format!("inputs.{m}.xi"), &ri.xi)?,
                r: ri.r,
                theta: ri.theta,
                n_ch: ri.n_ch,
            };
        }
    }
    let mut observables = Vec::new();
    for e in raw.observables.map(|o| o.entries).unwrap_or_default() {
        let line = Some(line_of(text, e.span().start));
        let obs = parse_observable(e.get_ref()).map_err(|err| match err {
            CouplerError::Parse { message, .. } => CouplerError::parse_at(line, "observables.entries", message),
            other => other,
        })?;
        observables.push(obs);
    }
    if observables.is_empty() {
        observables = default_observables();
    }
    let cfg = ScenarioConfig {
        name: raw.name,
        params,
        inputs,
        z_max: run.z_max,
        z_steps: run.z_steps,
        n_max: run.n_max.unwrap_or(DEFAULT_N_MAX),
        k_max: run.k_max.unwrap_or(DEFAULT_K_MAX),
        observables,
    };
    cfg.validate()?;
    Ok(cfg)
}

/// Read and parse a scenario file.
pub fn load_scenario(path: &std::path::Path) -> Result<ScenarioConfig> {
    let text = std::fs::read_to_string(path).map_err(|source| CouplerError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_scenario(&text)
}
