//! Rogue-wave ("rogon") solutions and dynamics of the Ivancevic
//! option-pricing equation, with a Black-Scholes baseline for contrast.
//!
//! The model is a cubic focusing nonlinear Schrödinger equation for an
//! option-price wave function `psi(S, t)` over stock price `S`:
//!
//! ```text
//! i psi_t + (sigma/2) psi_SS + beta |psi|^2 psi = 0,      sigma beta > 0,
//! ```
//!
//! whose `|psi|^2` is interpreted as the option-value intensity. The crate
//! provides:
//!
//! - [`params`] / [`grid`]: validated model parameters ([`MarketParams`]),
//!   space-time grids, and sampled fields ([`WaveField`]);
//! - [`rogons`]: the analytic plane-wave, first-order, and second-order
//!   rational rogue-wave ("rogon") solutions, plus field evaluation and peak
//!   statistics;
//! - [`verify`]: independent certification that sampled fields satisfy the
//!   equation, via spectral space derivatives (with a seam correction for
//!   non-periodic analytic data) and high-order time stencils;
//! - [`dynamics`]: a second-order split-step pseudospectral propagator with
//!   conserved-quantity tracking and self-validation against the analytic
//!   solutions;
//! - [`mi`]: the modulation-instability scenario — seeded plane-wave runs
//!   fitted against the independently derived linear-stability gain law;
//! - [`bs`]: the linear Black-Scholes baseline (closed form, quadrature
//!   cross-check, PDE residual);
//! - [`config`] / [`export`]: scenario configuration files, CSV export, and
//!   P5 heatmap rendering for the command-line tool.
//!
//! # Conventions
//!
//! Space grids are periodic (the right endpoint is excluded); time grids
//! are inclusive. Fields are stored time-major. All floating-point output
//! uses shortest round-trip formatting. Internal parallelism (field
//! evaluation, residual scans) is deterministic: results are bitwise
//! identical regardless of worker count.

pub mod bs;
pub mod config;
pub mod dynamics;
pub mod error;
pub mod export;
pub mod grid;
pub mod mi;
pub mod params;
pub mod rogons;
pub mod spectral;
pub mod verify;

pub use bs::{
    bs_call_price, bs_closed_form_residual, bs_pde_residual, bs_put_price, norm_cdf,
    put_call_parity_gap, BsParams,
};
pub use config::{
    parse_config, parse_config_with_overrides, serialize_config, BsSettings, MiSettings,
    Normalization, ScenarioConfig, ScenarioKind, SimSettings,
};
pub use dynamics::{
    conserved_hamiltonian, conserved_mass, simulate, strang_step, Propagator, SimState,
    SimulationReport,
};
pub use error::Error;
pub use export::{render_heatmap, render_heatmap_file, write_csv, write_csv_file};
pub use grid::{SpaceTimeGrid, WaveField};
pub use mi::{mi_cutoff, mi_growth_rate, mi_peak_rate, mi_scenario, MiReport, ModeFit};
pub use params::MarketParams;
pub use rogons::{eval_field, peak_statistics, PolynomialTriple, SolutionKind};
pub use verify::{convergence_study, residual_at, time_shift_check, ResidualReport};
