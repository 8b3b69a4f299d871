//! Error types for every module of the crate.
//!
//! Each functional area has its own small enum; [`Error`] is the crate-wide
//! umbrella used by callers (such as the CLI) that route everything through
//! one `Result`. [`Error::is_numerical`] separates numerical failures
//! (blow-up, non-finite data) from input-validation failures, which is the
//! distinction the CLI maps onto exit codes.

use thiserror::Error;

/// Rejected model parameters.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("sigma*beta must be strictly positive, got sigma={sigma}, beta={beta} (sigma*beta={})", sigma*beta)]
    NonFocusing { sigma: f64, beta: f64 },
    #[error("alpha must be nonzero (a zero scaling collapses the solutions to the zero field)")]
    ZeroAlpha,
    #[error("parameter `{name}` must be finite, got {value}")]
    NonFinite { name: &'static str, value: f64 },
}

/// Rejected grid geometry.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GridError {
    #[error("stock-price bounds must satisfy s_min < s_max, got [{s_min}, {s_max}]")]
    InvertedSpaceBounds { s_min: f64, s_max: f64 },
    #[error("time bounds must satisfy t_min <= t_max, got [{t_min}, {t_max}]")]
    InvertedTimeBounds { t_min: f64, t_max: f64 },
    #[error("sample count `{name}` must be at least 1")]
    ZeroCount { name: &'static str },
    #[error("grid bound `{name}` must be finite, got {value}")]
    NonFinite { name: &'static str, value: f64 },
}

/// Rejected or corrupted wave-field data.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FieldError {
    #[error("sample count {got} does not match grid size {expected}")]
    CountMismatch { expected: usize, got: usize },
    #[error("non-finite sample at flat index {index}")]
    NonFiniteSample { index: usize },
    #[error("field has no samples")]
    Empty,
}

/// Failures while evaluating the closed-form solutions.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum RogonError {
    #[error(
        "two-rogon denominator R2 = {r2:e} is degenerate at (S={s}, t={t}); \
         this is unexpected for valid parameters and should be reported"
    )]
    DegenerateDenominator { s: f64, t: f64, r2: f64 },
}

/// Failures in the spectral residual verifier.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error("spectral verification requires n_s to be a power of two and at least 8, got {n_s}")]
    BadSpectralSize { n_s: usize },
    #[error("dt_probe must be positive and finite, got {dt_probe}")]
    BadProbeStep { dt_probe: f64 },
    #[error("convergence study needs at least 2 probe steps, got {got}")]
    TooFewProbes { got: usize },
    #[error("convergence study probe steps must be strictly decreasing")]
    ProbesNotDecreasing,
    #[error(transparent)]
    Rogon(#[from] RogonError),
}

/// Failures in the split-step propagator.
#[derive(Debug, Error)]
pub enum SimError {
    #[error("simulation domain length must be positive and finite, got {l}")]
    BadDomainLength { l: f64 },
    #[error("propagation requires n_s to be a power of two and at least 8, got {n_s}")]
    BadSpectralSize { n_s: usize },
    #[error("time step must be nonzero and finite, got {dt}")]
    BadTimeStep { dt: f64 },
    #[error(
        "(t_end - t_start)/dt = {ratio} is not within 1e-9 of a nonnegative integer; \
         adjust dt or t_end so the horizon is a whole number of steps"
    )]
    StepCountMismatch { ratio: f64 },
    #[error("snapshot time {t} does not lie on a step boundary of the run")]
    SnapshotOffStep { t: f64 },
    #[error("field blew up (non-finite sample) at t={t}; partial report retained")]
    BlowUp {
        t: f64,
        partial: Box<crate::dynamics::SimulationReport>,
    },
    #[error("non-finite sample produced by a propagation step at t={t}")]
    NonFiniteState { t: f64 },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Failures in the modulation-instability scenario.
#[derive(Debug, Error)]
pub enum MiError {
    #[error("perturbation amplitude eps must be nonnegative and finite, got {eps}")]
    BadEps { eps: f64 },
    #[error("eps = {eps} exceeds the linear-regime cap 1e-3*|A| = {cap:e}")]
    EpsTooLarge { eps: f64, cap: f64 },
    #[error("perturbation mode m_pert must satisfy 1 <= m_pert < n_s/2, got {m_pert} with n_s={n_s}")]
    BadMode { m_pert: usize, n_s: usize },
    #[error(
        "growth-fit window not found: the seeded mode saturates immediately \
         (10x its initial amplitude already exceeds the linear-window ceiling); reduce eps"
    )]
    FitWindowSaturated,
    #[error("scenario horizon must be positive, got t_end={t_end}")]
    BadHorizon { t_end: f64 },
    #[error(transparent)]
    Sim(#[from] SimError),
}

/// Failures in the Black-Scholes baseline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum BsError {
    #[error("volatility must be positive and finite, got {value}")]
    BadVolatility { value: f64 },
    #[error("strike must be positive and finite, got {value}")]
    BadStrike { value: f64 },
    #[error("maturity must be nonnegative and finite, got {value}")]
    BadMaturity { value: f64 },
    #[error("rate must be finite, got {value}")]
    BadRate { value: f64 },
    #[error("spot price must be positive and finite, got {value}")]
    BadSpot { value: f64 },
    #[error("residual grid must be non-empty with strictly positive entries")]
    BadResidualGrid,
    #[error("residual check requires a positive maturity (derivatives are bumped relative to it)")]
    ZeroMaturityResidual,
    #[error("bump must be positive, got {bump}")]
    NonPositiveBump { bump: f64 },
    #[error("bump = {bump} too large: relative bumps above {max} void the finite-difference accuracy model")]
    BumpTooLarge { bump: f64, max: f64 },
}

/// Failures while parsing or validating a scenario configuration.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`, got `{text}`")]
    Syntax { line: usize, text: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: duplicate key `{key}`")]
    DuplicateKey { line: usize, key: String },
    #[error("key `{key}`: {msg}")]
    BadValue { key: String, msg: String },
    #[error("override `{arg}` is not of the form key=value")]
    BadOverride { arg: String },
    #[error("unknown key `{key}` in override")]
    UnknownOverrideKey { key: String },
    #[error("missing required keys: {}", keys.join(", "))]
    MissingKeys { keys: Vec<String> },
    #[error("key `{key}` is not used when solution = {kind}")]
    IrrelevantKey { key: String, kind: String },
    #[error("{msg}")]
    Inconsistent { msg: String },
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Bs(#[from] BsError),
}

/// Failures while exporting CSV or heatmap artifacts.
#[derive(Debug, Error)]
pub enum ExportError {
    #[error("cannot export an empty field")]
    EmptyField,
    #[error("heatmap rendering requires a 2-D field (n_t >= 2), got n_t = {n_t}")]
    NotTwoDimensional { n_t: usize },
    #[error(
        "degenerate normalization range [{lo}, {hi}] (hi <= lo): the field has no intensity spread; \
         use a fixed range instead, e.g. render.normalization = fixed(0,1)"
    )]
    DegenerateRange { lo: f64, hi: f64 },
    #[error("destination unwritable: {0}")]
    Io(#[from] std::io::Error),
}

/// Crate-wide umbrella error.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Rogon(#[from] RogonError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Mi(#[from] MiError),
    #[error(transparent)]
    Bs(#[from] BsError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Export(#[from] ExportError),
}

impl Error {
    /// True for failures of the numerics themselves (blow-up, non-finite
    /// data) as opposed to rejected inputs. The CLI maps numerical failures
    /// to exit code 2 and validation failures to exit code 1.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::Sim(SimError::BlowUp { .. }) => true,
            Error::Sim(SimError::NonFiniteState { .. }) => true,
            Error::Mi(MiError::Sim(SimError::BlowUp { .. })) => true,
            Error::Mi(MiError::FitWindowSaturated) => true,
            Error::Field(FieldError::NonFiniteSample { .. }) => true,
            Error::Rogon(RogonError::DegenerateDenominator { .. }) => true,
            _ => false,
        }
    }
}
