//! Closed-form solutions: plane-wave background, one-rogon, and two-rogon
//! ("financial rogue wave") fields, plus grid evaluation and peak statistics.
//!
//! All three solutions share the carrier `exp{i [k S + (sigma/2)(alpha^2 - k^2) t]}`
//! and the background amplitude `A = alpha sqrt(sigma/(2 beta))`. The rogon
//! envelopes depend on `(S, t)` only through the comoving variable
//! `xi = S - sigma k t` and `t` itself.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, RogonError};
use crate::grid::{SpaceTimeGrid, WaveField};
use crate::params::MarketParams;

/// Values of the two-rogon numerator/denominator polynomials at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolynomialTriple {
    pub p2: f64,
    pub q2: f64,
    pub r2: f64,
}

/// Which closed-form solution to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolutionKind {
    Plane,
    Rogon1,
    Rogon2,
}

impl SolutionKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SolutionKind::Plane => "plane",
            SolutionKind::Rogon1 => "rogon1",
            SolutionKind::Rogon2 => "rogon2",
        }
    }

    /// Pointwise evaluation; only the two-rogon can fail (degenerate R2).
    pub fn sample(&self, p: &MarketParams, s: f64, t: f64) -> Result<Complex64, RogonError> {
        match self {
            SolutionKind::Plane => Ok(plane_wave(p, s, t)),
            SolutionKind::Rogon1 => Ok(rogon1(p, s, t)),
            SolutionKind::Rogon2 => rogon2(p, s, t),
        }
    }

    /// Infallible sampler closure for the verifier and propagator.
    ///
    /// The two-rogon denominator `R2` has no real zeros anywhere the test
    /// suite has scanned; a degenerate value would indicate a genuine
    /// mathematical finding and panics with a report-worthy message.
    pub fn sampler<'p>(&self, p: &'p MarketParams) -> impl Fn(f64, f64) -> Complex64 + Sync + 'p {
        let kind = *self;
        move |s, t| {
            kind.sample(p, s, t)
                .expect("two-rogon denominator R2 vanished; please report this parameter set")
        }
    }
}

impl std::str::FromStr for SolutionKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "plane" => Ok(SolutionKind::Plane),
            "rogon1" => Ok(SolutionKind::Rogon1),
            "rogon2" => Ok(SolutionKind::Rogon2),
            other => Err(format!("unknown solution `{other}` (expected plane, rogon1 or rogon2)")),
        }
    }
}

impl std::fmt::Display for SolutionKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Carrier phase `k S + (sigma/2)(alpha^2 - k^2) t` shared by all solutions.
pub fn carrier_phase(p: &MarketParams, s: f64, t: f64) -> f64 {
    p.k() * s + 0.5 * p.sigma() * (p.alpha() * p.alpha() - p.k() * p.k()) * t
}

/// Plane-wave background `A exp(i * carrier_phase)`; the `|S| -> inf` limit
/// of both rogons.
pub fn plane_wave(p: &MarketParams, s: f64, t: f64) -> Complex64 {
    p.background_amplitude() * Complex64::from_polar(1.0, carrier_phase(p, s, t))
}

/// One-rogon solution
/// `A [1 - 4(1 + i sigma alpha^2 t) / (1 + 2 alpha^2 xi^2 + sigma^2 alpha^4 t^2)] exp(i phi)`.
///
/// The denominator is `>= 1` for all real inputs, so this never fails.
pub fn rogon1(p: &MarketParams, s: f64, t: f64) -> Complex64 {
    let alpha2 = p.alpha() * p.alpha();
    let xi = s - p.sigma() * p.k() * t;
    let st = p.sigma() * alpha2 * t;
    let denom = 1.0 + 2.0 * alpha2 * xi * xi + st * st;
    let bracket = Complex64::new(1.0 - 4.0 / denom, -4.0 * st / denom);
    p.background_amplitude() * bracket * Complex64::from_polar(1.0, carrier_phase(p, s, t))
}

/// The polynomials `P2, Q2, R2` of the two-rogon solution, evaluated in the
/// comoving variable `xi = S - sigma k t`.
///
/// With `u = alpha^2 xi^2` and `v = sigma^2 alpha^4 t^2` the printed forms
/// collapse to polynomials in `(u, v)`, evaluated here in Horner-style
/// nesting to limit cancellation:
///
/// ```text
/// P2 = 3/8 - u^2/2 - (3/2) u v - (5/8) v^2 - (3/2) u - (9/4) v
/// Q2 = -(1/2) sigma alpha^2 t [ u^2 + u v + v^2/4 - 3 u + v/2 - 15/4 ]
/// R2 = 3/32 + u^3/12 + u^2 v/8 + u v^2/16 + v^3/96
///      + u^2/8 - (3/8) u v + (9/32) v^2 + (9/16) u + (33/32) v
/// ```
pub fn rogon2_polynomials(p: &MarketParams, s: f64, t: f64) -> PolynomialTriple {
    let alpha2 = p.alpha() * p.alpha();
    let xi = s - p.sigma() * p.k() * t;
    let u = alpha2 * xi * xi;
    let st = p.sigma() * alpha2 * t;
    let v = st * st;

    let p2 = (0.375 - v * (2.25 + 0.625 * v)) - u * (1.5 + 1.5 * v) - 0.5 * u * u;
    let q2 = -0.5 * st * ((-3.75 + v * (0.5 + 0.25 * v)) + u * (v - 3.0) + u * u);
    let r2 = (0.09375 + v * (1.03125 + v * (0.28125 + v / 96.0)))
        + u * (0.5625 + v * (-0.375 + 0.0625 * v))
        + u * u * (0.125 + 0.125 * v)
        + u * u * u / 12.0;
    PolynomialTriple { p2, q2, r2 }
}

/// Two-rogon solution `A [1 + (P2 + i Q2)/R2] exp(i phi)`.
///
/// Fails only if `|R2|` degenerates below `1e-300`, which no scanned
/// parameter set produces; a zero would be a mathematical finding.
pub fn rogon2(p: &MarketParams, s: f64, t: f64) -> Result<Complex64, RogonError> {
    let PolynomialTriple { p2, q2, r2 } = rogon2_polynomials(p, s, t);
    if r2.abs() < 1e-300 {
        return Err(RogonError::DegenerateDenominator { s, t, r2 });
    }
    let bracket = Complex64::new(1.0 + p2 / r2, q2 / r2);
    Ok(p.background_amplitude() * bracket * Complex64::from_polar(1.0, carrier_phase(p, s, t)))
}

/// Evaluates a closed-form solution on every grid point.
///
/// Rows (time slices) are evaluated in parallel; each sample depends only on
/// its own `(S, t)`, so results are bitwise identical for any worker count.
pub fn eval_field(
    which: SolutionKind,
    p: &MarketParams,
    g: &SpaceTimeGrid,
) -> Result<WaveField, Error> {
    let rows: Result<Vec<Vec<Complex64>>, RogonError> = (0..g.n_t())
        .into_par_iter()
        .map(|i| {
            let t = g.t_at(i);
            (0..g.n_s()).map(|j| which.sample(p, g.s_at(j), t)).collect()
        })
        .collect();
    let samples = rows?.concat();
    Ok(WaveField::new(*g, *p, which.as_str(), samples)?)
}

/// Grid argmax of the intensity `|psi|^2`.
///
/// Returns `(max_intensity, s_at, t_at)`. Ties are broken toward the
/// smallest `t`, then the smallest `S` (the scan order of the time-major
/// layout with a strict `>` comparison). A `WaveField` is never empty by
/// construction, so this cannot fail.
pub fn peak_statistics(f: &WaveField) -> (f64, f64, f64) {
    let g = f.grid();
    let mut best = f64::NEG_INFINITY;
    let mut at = (0usize, 0usize);
    for i in 0..g.n_t() {
        for j in 0..g.n_s() {
            let v = f.intensity(i, j);
            if v > best {
                best = v;
                at = (i, j);
            }
        }
    }
    (best, g.s_at(at.1), g.t_at(at.0))
}
