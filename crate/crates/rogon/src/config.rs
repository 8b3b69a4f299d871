//! Scenario configuration: line-based `key = value` text with `#` comments
//! and dot-namespaced keys, parsed into a fully validated [`ScenarioConfig`],
//! plus canonical serialization and ordered `--set key=value` overrides.

use std::fmt;

use crate::bs::BsParams;
use crate::error::ConfigError;
use crate::grid::SpaceTimeGrid;
use crate::params::MarketParams;
use crate::rogons::SolutionKind;

/// What a configuration asks the tool to do.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioKind {
    /// Evaluate the analytic plane wave on a grid.
    Plane,
    /// Evaluate the analytic one-rogon field on a grid.
    Rogon1,
    /// Evaluate the analytic two-rogon field on a grid.
    Rogon2,
    /// Propagate initial data with the split-step integrator.
    Simulate,
    /// Run the modulation-instability scenario.
    Mi,
    /// Price with the linear baseline and certify its PDE residual.
    Bs,
}

impl ScenarioKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ScenarioKind::Plane => "plane",
            ScenarioKind::Rogon1 => "rogon1",
            ScenarioKind::Rogon2 => "rogon2",
            ScenarioKind::Simulate => "simulate",
            ScenarioKind::Mi => "mi",
            ScenarioKind::Bs => "bs",
        }
    }

    /// The analytic solution this scenario evaluates or references, when it
    /// is one of the field-evaluation kinds.
    pub fn solution(&self) -> Option<SolutionKind> {
        match self {
            ScenarioKind::Plane => Some(SolutionKind::Plane),
            ScenarioKind::Rogon1 => Some(SolutionKind::Rogon1),
            ScenarioKind::Rogon2 => Some(SolutionKind::Rogon2),
            _ => None,
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for ScenarioKind {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "plane" => ScenarioKind::Plane,
            "rogon1" => ScenarioKind::Rogon1,
            "rogon2" => ScenarioKind::Rogon2,
            "simulate" => ScenarioKind::Simulate,
            "mi" => ScenarioKind::Mi,
            "bs" => ScenarioKind::Bs,
            _ => return Err(()),
        })
    }
}

/// Intensity-to-gray mapping for heatmap rendering.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Normalization {
    /// Map the field's own min/max intensity to 0/255.
    GlobalMinMax,
    /// Map the fixed range `[lo, hi]` to 0/255, clamping outside values.
    Fixed { lo: f64, hi: f64 },
}

impl fmt::Display for Normalization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Normalization::GlobalMinMax => f.write_str("global-minmax"),
            Normalization::Fixed { lo, hi } => write!(f, "fixed({lo},{hi})"),
        }
    }
}

/// Settings specific to `solution = simulate`.
#[derive(Debug, Clone, PartialEq)]
pub struct SimSettings {
    /// Integrator step.
    pub dt: f64,
    /// Analytic solution to track the pointwise error against, if any.
    pub reference: Option<SolutionKind>,
}

/// Settings specific to `solution = mi`.
#[derive(Debug, Clone, PartialEq)]
pub struct MiSettings {
    /// Periodic domain length.
    pub l: f64,
    /// Spatial resolution (power of two).
    pub n_s: usize,
    /// Relative seed amplitude.
    pub eps: f64,
    /// Seeded mode index.
    pub m_pert: usize,
    /// Horizon.
    pub t_end: f64,
    /// Integrator step.
    pub dt: f64,
    /// Recorded seed (the scenario itself is deterministic).
    pub rng_seed: u64,
}

/// Settings specific to `solution = bs`.
#[derive(Debug, Clone, PartialEq)]
pub struct BsSettings {
    /// Contract and market data.
    pub params: BsParams,
    /// Price-curve grid: `n_points` equally spaced spots in
    /// `[s_min, s_max]`, endpoints included.
    pub s_min: f64,
    pub s_max: f64,
    pub n_points: usize,
    /// Relative bump for the residual stencils.
    pub bump: f64,
}

impl BsSettings {
    /// The inclusive, equally spaced spot grid.
    pub fn s_grid(&self) -> Vec<f64> {
        let step = (self.s_max - self.s_min) / (self.n_points - 1) as f64;
        (0..self.n_points).map(|i| self.s_min + i as f64 * step).collect()
    }
}

/// A fully validated scenario: every field needed by its [`ScenarioKind`]
/// is present and internally consistent.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub kind: ScenarioKind,
    /// Model parameters (all kinds except `bs`).
    pub params: Option<MarketParams>,
    /// Evaluation grid (field kinds), or domain + record schedule
    /// (`simulate`: the time axis gives the snapshot times).
    pub grid: Option<SpaceTimeGrid>,
    pub sim: Option<SimSettings>,
    pub mi: Option<MiSettings>,
    pub bs: Option<BsSettings>,
    /// Heatmap normalization (field kinds and `simulate`).
    pub normalization: Normalization,
    /// Artifact directory; the CLI's `--output` flag overrides it.
    pub output_dir: Option<String>,
}

impl ScenarioConfig {
    /// Model parameters, for kinds that guarantee them.
    pub fn params(&self) -> &MarketParams {
        self.params.as_ref().expect("validated: this kind carries params")
    }

    /// Grid, for kinds that guarantee one.
    pub fn grid(&self) -> &SpaceTimeGrid {
        self.grid.as_ref().expect("validated: this kind carries a grid")
    }
}

/// Value syntax expected for a key.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ValueKind {
    Real,
    Count,
    Seed,
    Solution,
    Reference,
    Normalization,
    Text,
}

/// The complete key vocabulary, in canonical (serialization) order.
const VOCABULARY: &[(&str, ValueKind)] = &[
    ("solution", ValueKind::Solution),
    ("params.sigma", ValueKind::Real),
    ("params.beta", ValueKind::Real),
    ("params.alpha", ValueKind::Real),
    ("params.k", ValueKind::Real),
    ("grid.s_min", ValueKind::Real),
    ("grid.s_max", ValueKind::Real),
    ("grid.n_s", ValueKind::Count),
    ("grid.t_min", ValueKind::Real),
    ("grid.t_max", ValueKind::Real),
    ("grid.n_t", ValueKind::Count),
    ("sim.dt", ValueKind::Real),
    ("sim.reference", ValueKind::Reference),
    ("mi.l", ValueKind::Real),
    ("mi.n_s", ValueKind::Count),
    ("mi.eps", ValueKind::Real),
    ("mi.m_pert", ValueKind::Count),
    ("mi.t_end", ValueKind::Real),
    ("mi.dt", ValueKind::Real),
    ("mi.rng_seed", ValueKind::Seed),
    ("bs.r", ValueKind::Real),
    ("bs.sigma_bs", ValueKind::Real),
    ("bs.strike", ValueKind::Real),
    ("bs.maturity", ValueKind::Real),
    ("bs.s_min", ValueKind::Real),
    ("bs.s_max", ValueKind::Real),
    ("bs.n_points", ValueKind::Count),
    ("bs.bump", ValueKind::Real),
    ("render.normalization", ValueKind::Normalization),
    ("output.dir", ValueKind::Text),
];

fn vocabulary_kind(key: &str) -> Option<ValueKind> {
    VOCABULARY.iter().find(|(k, _)| *k == key).map(|(_, v)| *v)
}

const PARAM_KEYS: &[&str] = &["params.sigma", "params.beta", "params.alpha", "params.k"];
const GRID_KEYS: &[&str] =
    &["grid.s_min", "grid.s_max", "grid.n_s", "grid.t_min", "grid.t_max", "grid.n_t"];
const SIM_KEYS: &[&str] = &["sim.dt"];
const MI_KEYS: &[&str] = &["mi.l", "mi.n_s", "mi.eps", "mi.m_pert", "mi.t_end", "mi.dt"];
const BS_KEYS: &[&str] =
    &["bs.r", "bs.sigma_bs", "bs.strike", "bs.maturity", "bs.s_min", "bs.s_max", "bs.n_points"];

/// Required keys for a scenario kind (beyond `solution` itself).
fn required_keys(kind: ScenarioKind) -> Vec<&'static str> {
    match kind {
        ScenarioKind::Plane | ScenarioKind::Rogon1 | ScenarioKind::Rogon2 => {
            [PARAM_KEYS, GRID_KEYS].concat()
        }
        ScenarioKind::Simulate => [PARAM_KEYS, GRID_KEYS, SIM_KEYS].concat(),
        ScenarioKind::Mi => [PARAM_KEYS, MI_KEYS].concat(),
        ScenarioKind::Bs => BS_KEYS.to_vec(),
    }
}

/// Optional keys for a scenario kind.
fn optional_keys(kind: ScenarioKind) -> Vec<&'static str> {
    let mut keys = vec!["output.dir"];
    match kind {
        ScenarioKind::Plane | ScenarioKind::Rogon1 | ScenarioKind::Rogon2 => {
            keys.push("render.normalization");
        }
        ScenarioKind::Simulate => {
            keys.push("render.normalization");
            keys.push("sim.reference");
        }
        ScenarioKind::Mi => keys.push("mi.rng_seed"),
        ScenarioKind::Bs => keys.push("bs.bump"),
    }
    keys
}

/// One `key = value` assignment surviving lexing (line is 1-based; overrides
/// get line 0).
#[derive(Debug, Clone)]
struct Entry {
    key: String,
    value: String,
}

/// Lexes config text: comments stripped, blank lines skipped, `key = value`
/// shape enforced, keys checked against the vocabulary, duplicates rejected.
fn lex(text: &str) -> Result<Vec<Entry>, ConfigError> {
    let mut entries: Vec<Entry> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((lhs, rhs)) = content.split_once('=') else {
            return Err(ConfigError::Syntax { line, text: content.to_string() });
        };
        let key = lhs.trim();
        let value = rhs.trim();
        if key.is_empty() || value.is_empty() {
            return Err(ConfigError::Syntax { line, text: content.to_string() });
        }
        if vocabulary_kind(key).is_none() {
            return Err(ConfigError::UnknownKey { line, key: key.to_string() });
        }
        if entries.iter().any(|e| e.key == key) {
            return Err(ConfigError::DuplicateKey { line, key: key.to_string() });
        }
        entries.push(Entry { key: key.to_string(), value: value.to_string() });
    }
    Ok(entries)
}

/// Applies `--set key=value` overrides in order; last write wins.
fn apply_overrides(entries: &mut Vec<Entry>, sets: &[String]) -> Result<(), ConfigError> {
    for arg in sets {
        let Some((lhs, rhs)) = arg.split_once('=') else {
            return Err(ConfigError::BadOverride { arg: arg.clone() });
        };
        let key = lhs.trim();
        let value = rhs.trim();
        if key.is_empty() || value.is_empty() {
            return Err(ConfigError::BadOverride { arg: arg.clone() });
        }
        if vocabulary_kind(key).is_none() {
            return Err(ConfigError::UnknownOverrideKey { key: key.to_string() });
        }
        match entries.iter_mut().find(|e| e.key == key) {
            Some(entry) => entry.value = value.to_string(),
            None => entries.push(Entry { key: key.to_string(), value: value.to_string() }),
        }
    }
    Ok(())
}

struct Entries(Vec<Entry>);

impl Entries {
    fn get(&self, key: &str) -> Option<&str> {
        self.0.iter().find(|e| e.key == key).map(|e| e.value.as_str())
    }

    fn real(&self, key: &str) -> Result<f64, ConfigError> {
        let raw = self.get(key).expect("presence checked before typing");
        let v: f64 = raw.parse().map_err(|_| ConfigError::BadValue {
            key: key.to_string(),
            msg: format!("expected a number, got `{raw}`"),
        })?;
        if !v.is_finite() {
            return Err(ConfigError::BadValue {
                key: key.to_string(),
                msg: format!("must be finite, got `{raw}`"),
            });
        }
        Ok(v)
    }

    fn count(&self, key: &str) -> Result<usize, ConfigError> {
        let raw = self.get(key).expect("presence checked before typing");
        raw.parse().map_err(|_| ConfigError::BadValue {
            key: key.to_string(),
            msg: format!("expected a nonnegative integer, got `{raw}`"),
        })
    }

    fn seed(&self, key: &str) -> Result<u64, ConfigError> {
        let raw = self.get(key).expect("presence checked before typing");
        raw.parse().map_err(|_| ConfigError::BadValue {
            key: key.to_string(),
            msg: format!("expected a nonnegative integer, got `{raw}`"),
        })
    }
}

fn inconsistent(msg: impl Into<String>) -> ConfigError {
    ConfigError::Inconsistent { msg: msg.into() }
}

/// Semantic pass: required/irrelevant key checks, typed conversion, domain
/// construction, and cross-field consistency.
fn build(entries: Entries) -> Result<ScenarioConfig, ConfigError> {
    let Some(kind_raw) = entries.get("solution") else {
        return Err(ConfigError::MissingKeys { keys: vec!["solution".to_string()] });
    };
    let kind: ScenarioKind = kind_raw.parse().map_err(|_| ConfigError::BadValue {
        key: "solution".to_string(),
        msg: format!("expected one of plane|rogon1|rogon2|simulate|mi|bs, got `{kind_raw}`"),
    })?;

    let required = required_keys(kind);
    let optional = optional_keys(kind);
    for entry in &entries.0 {
        if entry.key != "solution"
            && !required.contains(&entry.key.as_str())
            && !optional.contains(&entry.key.as_str())
        {
            return Err(ConfigError::IrrelevantKey {
                key: entry.key.clone(),
                kind: kind.to_string(),
            });
        }
    }
    let missing: Vec<String> = required
        .iter()
        .filter(|&&k| entries.get(k).is_none())
        .map(|&k| k.to_string())
        .collect();
    if !missing.is_empty() {
        return Err(ConfigError::MissingKeys { keys: missing });
    }

    let params = if kind == ScenarioKind::Bs {
        None
    } else {
        Some(MarketParams::new(
            entries.real("params.sigma")?,
            entries.real("params.beta")?,
            entries.real("params.alpha")?,
            entries.real("params.k")?,
        )?)
    };

    let grid = match kind {
        ScenarioKind::Plane
        | ScenarioKind::Rogon1
        | ScenarioKind::Rogon2
        | ScenarioKind::Simulate => Some(SpaceTimeGrid::new(
            entries.real("grid.s_min")?,
            entries.real("grid.s_max")?,
            entries.count("grid.n_s")?,
            entries.real("grid.t_min")?,
            entries.real("grid.t_max")?,
            entries.count("grid.n_t")?,
        )?),
        _ => None,
    };

    let sim = if kind == ScenarioKind::Simulate {
        let dt = entries.real("sim.dt")?;
        if dt <= 0.0 {
            return Err(ConfigError::BadValue {
                key: "sim.dt".to_string(),
                msg: format!("must be positive, got {dt}"),
            });
        }
        let reference = match entries.get("sim.reference") {
            None | Some("none") => None,
            Some(raw) => Some(raw.parse::<SolutionKind>().map_err(|_| {
                ConfigError::BadValue {
                    key: "sim.reference".to_string(),
                    msg: format!("expected none|plane|rogon1|rogon2, got `{raw}`"),
                }
            })?),
        };
        let g = grid.as_ref().expect("simulate has a grid");
        let p = params.as_ref().expect("simulate has params");
        if !g.n_s().is_power_of_two() || g.n_s() < 8 {
            return Err(inconsistent(format!(
                "simulate needs grid.n_s to be a power of two and at least 8, got {}",
                g.n_s()
            )));
        }
        if g.s_min() != -g.s_max() {
            return Err(inconsistent(format!(
                "simulate requires a centered periodic domain: grid.s_min must equal \
                 -grid.s_max, got {} and {}",
                g.s_min(),
                g.s_max()
            )));
        }
        let l = g.domain_length();
        let mode = p.k() * l / (2.0 * std::f64::consts::PI);
        if (mode - mode.round()).abs() > 1e-9 {
            let nearest = 2.0 * std::f64::consts::PI * mode.round() / l;
            return Err(inconsistent(format!(
                "params.k = {} is not periodic on the domain (length {}): k must be an \
                 integer multiple of 2*pi/L; nearest admissible value is {}",
                p.k(),
                l,
                nearest
            )));
        }
        let span_ratio = (g.t_max() - g.t_min()) / dt;
        if (span_ratio - span_ratio.round()).abs() > 1e-9 {
            return Err(inconsistent(format!(
                "the run length (grid.t_max - grid.t_min = {}) is not an integer number \
                 of steps of sim.dt = {dt}",
                g.t_max() - g.t_min()
            )));
        }
        if g.n_t() >= 2 {
            let snap_ratio = g.dt() / dt;
            if (snap_ratio - snap_ratio.round()).abs() > 1e-9 || snap_ratio.round() < 1.0 {
                return Err(inconsistent(format!(
                    "snapshot spacing (grid gives {}) must be a positive integer \
                     multiple of sim.dt = {dt}",
                    g.dt()
                )));
            }
        }
        Some(SimSettings { dt, reference })
    } else {
        None
    };

    let mi = if kind == ScenarioKind::Mi {
        let l = entries.real("mi.l")?;
        if l <= 0.0 {
            return Err(ConfigError::BadValue {
                key: "mi.l".to_string(),
                msg: format!("must be positive, got {l}"),
            });
        }
        let dt = entries.real("mi.dt")?;
        if dt <= 0.0 {
            return Err(ConfigError::BadValue {
                key: "mi.dt".to_string(),
                msg: format!("must be positive, got {dt}"),
            });
        }
        let t_end = entries.real("mi.t_end")?;
        if t_end <= 0.0 {
            return Err(ConfigError::BadValue {
                key: "mi.t_end".to_string(),
                msg: format!("must be positive, got {t_end}"),
            });
        }
        let eps = entries.real("mi.eps")?;
        if eps < 0.0 {
            return Err(ConfigError::BadValue {
                key: "mi.eps".to_string(),
                msg: format!("must be nonnegative, got {eps}"),
            });
        }
        let rng_seed =
            if entries.get("mi.rng_seed").is_some() { entries.seed("mi.rng_seed")? } else { 0 };
        let n_s = entries.count("mi.n_s")?;
        if !n_s.is_power_of_two() || n_s < 8 {
            return Err(ConfigError::BadValue {
                key: "mi.n_s".to_string(),
                msg: format!("must be a power of two and at least 8, got {n_s}"),
            });
        }
        let m_pert = entries.count("mi.m_pert")?;
        if m_pert == 0 || m_pert >= n_s / 2 {
            return Err(ConfigError::BadValue {
                key: "mi.m_pert".to_string(),
                msg: format!("must satisfy 1 <= m_pert < n_s/2 = {}, got {m_pert}", n_s / 2),
            });
        }
        Some(MiSettings { l, n_s, eps, m_pert, t_end, dt, rng_seed })
    } else {
        None
    };

    let bs = if kind == ScenarioKind::Bs {
        let bp = BsParams::new(
            entries.real("bs.r")?,
            entries.real("bs.sigma_bs")?,
            entries.real("bs.strike")?,
            entries.real("bs.maturity")?,
        )?;
        let s_min = entries.real("bs.s_min")?;
        let s_max = entries.real("bs.s_max")?;
        let n_points = entries.count("bs.n_points")?;
        if !(s_min > 0.0) || s_min >= s_max {
            return Err(inconsistent(format!(
                "the spot grid needs 0 < bs.s_min < bs.s_max, got [{s_min}, {s_max}]"
            )));
        }
        if n_points < 2 {
            return Err(ConfigError::BadValue {
                key: "bs.n_points".to_string(),
                msg: format!("need at least 2 grid points, got {n_points}"),
            });
        }
        let bump = if entries.get("bs.bump").is_some() { entries.real("bs.bump")? } else { 1e-3 };
        if bump <= 0.0 || bump > crate::bs::MAX_RESIDUAL_BUMP {
            return Err(ConfigError::BadValue {
                key: "bs.bump".to_string(),
                msg: format!(
                    "must lie in (0, {}], got {bump}",
                    crate::bs::MAX_RESIDUAL_BUMP
                ),
            });
        }
        Some(BsSettings { params: bp, s_min, s_max, n_points, bump })
    } else {
        None
    };

    let normalization = match entries.get("render.normalization") {
        None => Normalization::GlobalMinMax,
        Some(raw) => parse_normalization(raw)?,
    };

    let output_dir = entries.get("output.dir").map(|s| s.to_string());

    Ok(ScenarioConfig { kind, params, grid, sim, mi, bs, normalization, output_dir })
}

fn parse_normalization(raw: &str) -> Result<Normalization, ConfigError> {
    let bad = |msg: String| ConfigError::BadValue { key: "render.normalization".to_string(), msg };
    if raw == "global-minmax" {
        return Ok(Normalization::GlobalMinMax);
    }
    let Some(inner) = raw.strip_prefix("fixed(").and_then(|r| r.strip_suffix(')')) else {
        return Err(bad(format!(
            "expected `global-minmax` or `fixed(lo,hi)`, got `{raw}`"
        )));
    };
    let Some((lo_raw, hi_raw)) = inner.split_once(',') else {
        return Err(bad(format!("expected two comma-separated bounds, got `{raw}`")));
    };
    let parse_bound = |s: &str| -> Result<f64, ConfigError> {
        let v: f64 = s
            .trim()
            .parse()
            .map_err(|_| bad(format!("expected a number in the range, got `{s}`")))?;
        if !v.is_finite() {
            return Err(bad(format!("range bound must be finite, got `{s}`")));
        }
        Ok(v)
    };
    let lo = parse_bound(lo_raw)?;
    let hi = parse_bound(hi_raw)?;
    if hi <= lo {
        return Err(bad(format!("range needs hi > lo, got fixed({lo},{hi})")));
    }
    Ok(Normalization::Fixed { lo, hi })
}

/// Parses config text into a validated [`ScenarioConfig`].
pub fn parse_config(text: &str) -> Result<ScenarioConfig, ConfigError> {
    build(Entries(lex(text)?))
}

/// Parses config text, then applies `--set key=value` overrides in order
/// (last write wins) before validation.
pub fn parse_config_with_overrides(
    text: &str,
    sets: &[String],
) -> Result<ScenarioConfig, ConfigError> {
    let mut entries = lex(text)?;
    apply_overrides(&mut entries, sets)?;
    build(Entries(entries))
}

/// Canonical serialization: keys in vocabulary order, shortest round-trip
/// numbers, LF endings. `parse_config(serialize_config(c))` reconstructs an
/// identical config.
pub fn serialize_config(cfg: &ScenarioConfig) -> String {
    let mut out = String::new();
    let mut push = |key: &str, value: String| {
        out.push_str(key);
        out.push_str(" = ");
        out.push_str(&value);
        out.push('\n');
    };
    push("solution", cfg.kind.to_string());
    if let Some(p) = &cfg.params {
        push("params.sigma", p.sigma().to_string());
        push("params.beta", p.beta().to_string());
        push("params.alpha", p.alpha().to_string());
        push("params.k", p.k().to_string());
    }
    if let Some(g) = &cfg.grid {
        push("grid.s_min", g.s_min().to_string());
        push("grid.s_max", g.s_max().to_string());
        push("grid.n_s", g.n_s().to_string());
        push("grid.t_min", g.t_min().to_string());
        push("grid.t_max", g.t_max().to_string());
        push("grid.n_t", g.n_t().to_string());
    }
    if let Some(sim) = &cfg.sim {
        push("sim.dt", sim.dt.to_string());
        push(
            "sim.reference",
            sim.reference.map_or_else(|| "none".to_string(), |r| r.to_string()),
        );
    }
    if let Some(mi) = &cfg.mi {
        push("mi.l", mi.l.to_string());
        push("mi.n_s", mi.n_s.to_string());
        push("mi.eps", mi.eps.to_string());
        push("mi.m_pert", mi.m_pert.to_string());
        push("mi.t_end", mi.t_end.to_string());
        push("mi.dt", mi.dt.to_string());
        push("mi.rng_seed", mi.rng_seed.to_string());
    }
    if let Some(bs) = &cfg.bs {
        push("bs.r", bs.params.r().to_string());
        push("bs.sigma_bs", bs.params.sigma_bs().to_string());
        push("bs.strike", bs.params.strike().to_string());
        push("bs.maturity", bs.params.maturity().to_string());
        push("bs.s_min", bs.s_min.to_string());
        push("bs.s_max", bs.s_max.to_string());
        push("bs.n_points", bs.n_points.to_string());
        push("bs.bump", bs.bump.to_string());
    }
    match cfg.kind {
        ScenarioKind::Plane
        | ScenarioKind::Rogon1
        | ScenarioKind::Rogon2
        | ScenarioKind::Simulate => push("render.normalization", cfg.normalization.to_string()),
        _ => {}
    }
    if let Some(dir) = &cfg.output_dir {
        push("output.dir", dir.clone());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG1A: &str = "\
# one-rogon showcase scenario
solution = rogon1
params.sigma = 0.3
params.beta = 0.03
params.alpha = 2
params.k = 0
grid.s_min = -20
grid.s_max = 20
grid.n_s = 256
grid.t_min = -3
grid.t_max = 3
grid.n_t = 121
render.normalization = fixed(0,180)
";

    const SIM: &str = "\
solution = simulate
params.sigma = 0.3
params.beta = 0.03
params.alpha = 2
params.k = 0
grid.s_min = -60
grid.s_max = 60
grid.n_s = 4096
grid.t_min = -3
grid.t_max = 3
grid.n_t = 7
sim.dt = 0.001
sim.reference = rogon1
";

    const MI: &str = "\
solution = mi
params.sigma = 0.3
params.beta = 0.03
params.alpha = 2
params.k = 0
mi.l = 50.26548245743669
mi.n_s = 256
mi.eps = 0.00001
mi.m_pert = 16
mi.t_end = 25
mi.dt = 0.002
";

    const BS: &str = "\
solution = bs
bs.r = 0.05
bs.sigma_bs = 0.2
bs.strike = 100
bs.maturity = 1
bs.s_min = 50
bs.s_max = 150
bs.n_points = 21
";

    #[test]
    fn parses_the_showcase_scenario() {
        let cfg = parse_config(FIG1A).unwrap();
        assert_eq!(cfg.kind, ScenarioKind::Rogon1);
        let p = cfg.params();
        assert_eq!((p.sigma(), p.beta(), p.alpha(), p.k()), (0.3, 0.03, 2.0, 0.0));
        let g = cfg.grid();
        assert_eq!((g.s_min(), g.s_max(), g.n_s()), (-20.0, 20.0, 256));
        assert_eq!((g.t_min(), g.t_max(), g.n_t()), (-3.0, 3.0, 121));
        assert_eq!(cfg.normalization, Normalization::Fixed { lo: 0.0, hi: 180.0 });
        assert_eq!(cfg.output_dir, None);
        assert!(cfg.sim.is_none() && cfg.mi.is_none() && cfg.bs.is_none());
    }

    #[test]
    fn empty_input_lists_the_required_key() {
        match parse_config("").unwrap_err() {
            ConfigError::MissingKeys { keys } => assert_eq!(keys, vec!["solution"]),
            other => panic!("unexpected error {other:?}"),
        }
        // Comment-only input behaves like empty input.
        assert!(matches!(
            parse_config("# nothing here\n\n").unwrap_err(),
            ConfigError::MissingKeys { .. }
        ));
    }

    #[test]
    fn missing_keys_are_reported_all_at_once() {
        let text = "solution = rogon1\nparams.sigma = 0.3\ngrid.n_s = 64\n";
        match parse_config(text).unwrap_err() {
            ConfigError::MissingKeys { keys } => {
                assert_eq!(
                    keys,
                    vec![
                        "params.beta",
                        "params.alpha",
                        "params.k",
                        "grid.s_min",
                        "grid.s_max",
                        "grid.t_min",
                        "grid.t_max",
                        "grid.n_t",
                    ]
                );
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn syntax_and_key_errors_carry_line_numbers() {
        match parse_config("solution = rogon1\nparams.sigma 0.3\n").unwrap_err() {
            ConfigError::Syntax { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other:?}"),
        }
        match parse_config("solution = rogon1\n\n# c\nfoo.bar = 1\n").unwrap_err() {
            ConfigError::UnknownKey { line, key } => {
                assert_eq!(line, 4);
                assert_eq!(key, "foo.bar");
            }
            other => panic!("unexpected error {other:?}"),
        }
        match parse_config("solution = rogon1\nparams.sigma = 1\nparams.sigma = 2\n").unwrap_err()
        {
            ConfigError::DuplicateKey { line, key } => {
                assert_eq!(line, 3);
                assert_eq!(key, "params.sigma");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn comments_and_whitespace_are_ignored() {
        let text = "  solution = rogon1   # trailing comment\n\
                    params.sigma=0.3\n\
                    params.beta =\t0.03\n\
                    params.alpha = 2\n\
                    params.k = 0\n\
                    grid.s_min = -20\ngrid.s_max = 20\ngrid.n_s = 64\n\
                    grid.t_min = -3\ngrid.t_max = 3\ngrid.n_t = 11\n";
        let cfg = parse_config(text).unwrap();
        assert_eq!(cfg.kind, ScenarioKind::Rogon1);
        assert_eq!(cfg.params().beta(), 0.03);
    }

    #[test]
    fn nonfocusing_parameters_are_a_validation_error() {
        let text = FIG1A.replace("params.beta = 0.03", "params.beta = -0.03");
        let err = parse_config(&text).unwrap_err();
        assert!(matches!(err, ConfigError::Param(_)));
        let msg = err.to_string();
        assert!(msg.contains("sigma*beta"), "message should cite the product: {msg}");
    }

    #[test]
    fn keys_from_other_scenarios_are_rejected() {
        let text = format!("{BS}params.sigma = 0.3\n");
        match parse_config(&text).unwrap_err() {
            ConfigError::IrrelevantKey { key, kind } => {
                assert_eq!(key, "params.sigma");
                assert_eq!(kind, "bs");
            }
            other => panic!("unexpected error {other:?}"),
        }
        let text = format!("{FIG1A}sim.dt = 0.001\n");
        assert!(matches!(parse_config(&text).unwrap_err(), ConfigError::IrrelevantKey { .. }));
    }

    #[test]
    fn simulate_cross_checks() {
        let cfg = parse_config(SIM).unwrap();
        assert_eq!(cfg.sim.as_ref().unwrap().dt, 1e-3);
        assert_eq!(cfg.sim.as_ref().unwrap().reference, Some(SolutionKind::Rogon1));

        let off_center = SIM.replace("grid.s_min = -60", "grid.s_min = -50");
        let err = parse_config(&off_center).unwrap_err();
        assert!(matches!(err, ConfigError::Inconsistent { .. }));
        assert!(err.to_string().contains("centered"));

        let bad_k = SIM.replace("params.k = 0", "params.k = 0.1");
        let err = parse_config(&bad_k).unwrap_err();
        assert!(err.to_string().contains("2*pi/L"), "got: {err}");

        // k equal to an exact grid harmonic passes.
        let k_adm = 2.0 * std::f64::consts::PI * 19.0 / 120.0;
        let good_k = SIM.replace("params.k = 0", &format!("params.k = {k_adm}"));
        assert!(parse_config(&good_k).is_ok());

        let bad_span = SIM.replace("sim.dt = 0.001", "sim.dt = 0.0007");
        assert!(matches!(parse_config(&bad_span).unwrap_err(), ConfigError::Inconsistent { .. }));

        // Snapshot spacing 1.0 not divisible by dt = 0.0003.
        let bad_snap = SIM.replace("sim.dt = 0.001", "sim.dt = 0.0003");
        assert!(matches!(parse_config(&bad_snap).unwrap_err(), ConfigError::Inconsistent { .. }));
    }

    #[test]
    fn mi_and_bs_defaults() {
        let mi = parse_config(MI).unwrap().mi.unwrap();
        assert_eq!(mi.rng_seed, 0);
        assert_eq!(mi.m_pert, 16);
        let with_seed = format!("{MI}mi.rng_seed = 42\n");
        assert_eq!(parse_config(&with_seed).unwrap().mi.unwrap().rng_seed, 42);

        let bs = parse_config(BS).unwrap().bs.unwrap();
        assert_eq!(bs.bump, 1e-3);
        assert_eq!(bs.s_grid().len(), 21);
        assert_eq!(bs.s_grid()[0], 50.0);
        assert_eq!(*bs.s_grid().last().unwrap(), 150.0);
        let with_bump = format!("{BS}bs.bump = 0.003\n");
        assert_eq!(parse_config(&with_bump).unwrap().bs.unwrap().bump, 0.003);
        let bad_bump = format!("{BS}bs.bump = 0.5\n");
        assert!(matches!(parse_config(&bad_bump).unwrap_err(), ConfigError::BadValue { .. }));
    }

    #[test]
    fn overrides_apply_in_order_with_validation() {
        let cfg = parse_config_with_overrides(
            FIG1A,
            &["params.alpha=1".to_string(), "params.alpha=0.8".to_string()],
        )
        .unwrap();
        assert_eq!(cfg.params().alpha(), 0.8);

        let err = parse_config_with_overrides(FIG1A, &["params.beta=-1".to_string()]).unwrap_err();
        assert!(matches!(err, ConfigError::Param(_)));

        assert!(matches!(
            parse_config_with_overrides(FIG1A, &["nope=3".to_string()]).unwrap_err(),
            ConfigError::UnknownOverrideKey { .. }
        ));
        assert!(matches!(
            parse_config_with_overrides(FIG1A, &["params.alpha".to_string()]).unwrap_err(),
            ConfigError::BadOverride { .. }
        ));
        // Overrides can add keys that were absent from the file.
        let cfg = parse_config_with_overrides(FIG1A, &["output.dir=out".to_string()]).unwrap();
        assert_eq!(cfg.output_dir.as_deref(), Some("out"));
    }

    #[test]
    fn parse_serialize_parse_is_identity() {
        for text in [FIG1A, SIM, MI, BS] {
            let first = parse_config(text).unwrap();
            let serialized = serialize_config(&first);
            let second = parse_config(&serialized).unwrap();
            assert_eq!(first, second, "round-trip failed for:\n{serialized}");
            // Serialization is canonical: a second round is byte-identical.
            assert_eq!(serialized, serialize_config(&second));
        }
    }

    #[test]
    fn normalization_forms() {
        assert_eq!(parse_normalization("global-minmax").unwrap(), Normalization::GlobalMinMax);
        assert_eq!(
            parse_normalization("fixed(0,180)").unwrap(),
            Normalization::Fixed { lo: 0.0, hi: 180.0 }
        );
        assert_eq!(
            parse_normalization("fixed(-1.5, 2.5)").unwrap(),
            Normalization::Fixed { lo: -1.5, hi: 2.5 }
        );
        assert!(parse_normalization("fixed(5,5)").is_err());
        assert!(parse_normalization("fixed(7,2)").is_err());
        assert!(parse_normalization("minmax").is_err());
        assert!(parse_normalization("fixed(a,b)").is_err());
    }

    #[test]
    fn count_values_must_be_integers() {
        let text = FIG1A.replace("grid.n_s = 256", "grid.n_s = 256.5");
        match parse_config(&text).unwrap_err() {
            ConfigError::BadValue { key, .. } => assert_eq!(key, "grid.n_s"),
            other => panic!("unexpected error {other:?}"),
        }
        let text = FIG1A.replace("grid.n_s = 256", "grid.n_s = -4");
        assert!(matches!(parse_config(&text).unwrap_err(), ConfigError::BadValue { .. }));
    }
}
