//! Space-time discretization and sampled complex fields.

use num_complex::Complex64;

use crate::error::{FieldError, GridError};
use crate::params::MarketParams;

/// Uniform discretization of an `(S, t)` rectangle.
///
/// The stock-price axis uses the periodic convention: `n_s` samples
/// `S_j = s_min + j * dS` with `dS = (s_max - s_min) / n_s`, so `s_max`
/// itself is excluded. This makes the same grid usable for plotting,
/// spectral differentiation, and split-step propagation.
///
/// The time axis is inclusive: `n_t` samples with
/// `dt = (t_max - t_min) / max(n_t - 1, 1)`, so `t_max` is the last sample
/// whenever `n_t > 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceTimeGrid {
    s_min: f64,
    s_max: f64,
    n_s: usize,
    t_min: f64,
    t_max: f64,
    n_t: usize,
}

impl SpaceTimeGrid {
    pub fn new(
        s_min: f64,
        s_max: f64,
        n_s: usize,
        t_min: f64,
        t_max: f64,
        n_t: usize,
    ) -> Result<Self, GridError> {
        for (name, value) in [
            ("s_min", s_min),
            ("s_max", s_max),
            ("t_min", t_min),
            ("t_max", t_max),
        ] {
            if !value.is_finite() {
                return Err(GridError::NonFinite { name, value });
            }
        }
        if !(s_min < s_max) {
            return Err(GridError::InvertedSpaceBounds { s_min, s_max });
        }
        if !(t_min <= t_max) {
            return Err(GridError::InvertedTimeBounds { t_min, t_max });
        }
        if n_s == 0 {
            return Err(GridError::ZeroCount { name: "n_s" });
        }
        if n_t == 0 {
            return Err(GridError::ZeroCount { name: "n_t" });
        }
        Ok(Self { s_min, s_max, n_s, t_min, t_max, n_t })
    }

    pub fn s_min(&self) -> f64 {
        self.s_min
    }

    pub fn s_max(&self) -> f64 {
        self.s_max
    }

    pub fn n_s(&self) -> usize {
        self.n_s
    }

    pub fn t_min(&self) -> f64 {
        self.t_min
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn n_t(&self) -> usize {
        self.n_t
    }

    /// Domain length of the periodic stock-price axis.
    pub fn domain_length(&self) -> f64 {
        self.s_max - self.s_min
    }

    /// Stock-price spacing `dS = (s_max - s_min) / n_s`.
    pub fn ds(&self) -> f64 {
        (self.s_max - self.s_min) / self.n_s as f64
    }

    /// Time spacing `dt = (t_max - t_min) / max(n_t - 1, 1)`.
    pub fn dt(&self) -> f64 {
        (self.t_max - self.t_min) / (self.n_t.saturating_sub(1)).max(1) as f64
    }

    /// `S_j`, computed as `s_min + j * dS` (one multiplication, no
    /// accumulated drift; exactly reproducible for a given grid).
    pub fn s_at(&self, j: usize) -> f64 {
        self.s_min + j as f64 * self.ds()
    }

    /// `t_i`, computed as `t_min + i * dt`.
    pub fn t_at(&self, i: usize) -> f64 {
        self.t_min + i as f64 * self.dt()
    }

    pub fn s_values(&self) -> Vec<f64> {
        (0..self.n_s).map(|j| self.s_at(j)).collect()
    }

    pub fn t_values(&self) -> Vec<f64> {
        (0..self.n_t).map(|i| self.t_at(i)).collect()
    }

    /// Total number of samples of a field on this grid.
    pub fn len(&self) -> usize {
        self.n_s * self.n_t
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Grid restricted to the single time `t` (one row).
    pub fn at_single_time(&self, t: f64) -> SpaceTimeGrid {
        SpaceTimeGrid {
            s_min: self.s_min,
            s_max: self.s_max,
            n_s: self.n_s,
            t_min: t,
            t_max: t,
            n_t: 1,
        }
    }
}

/// Complex field samples on a [`SpaceTimeGrid`], row-major and time-major:
/// the sample at time index `i` and space index `j` sits at `i * n_s + j`.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveField {
    grid: SpaceTimeGrid,
    params: MarketParams,
    label: String,
    samples: Vec<Complex64>,
}

impl WaveField {
    pub fn new(
        grid: SpaceTimeGrid,
        params: MarketParams,
        label: impl Into<String>,
        samples: Vec<Complex64>,
    ) -> Result<Self, FieldError> {
        if samples.is_empty() {
            return Err(FieldError::Empty);
        }
        if samples.len() != grid.len() {
            return Err(FieldError::CountMismatch { expected: grid.len(), got: samples.len() });
        }
        if let Some(index) = samples.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(FieldError::NonFiniteSample { index });
        }
        Ok(Self { grid, params, label: label.into(), samples })
    }

    pub fn grid(&self) -> &SpaceTimeGrid {
        &self.grid
    }

    pub fn params(&self) -> &MarketParams {
        &self.params
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    /// Sample at time index `i`, space index `j`.
    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.samples[i * self.grid.n_s() + j]
    }

    /// One time row of samples.
    pub fn row(&self, i: usize) -> &[Complex64] {
        let n = self.grid.n_s();
        &self.samples[i * n..(i + 1) * n]
    }

    /// Intensity `|psi|^2` at time index `i`, space index `j`.
    pub fn intensity(&self, i: usize, j: usize) -> f64 {
        self.at(i, j).norm_sqr()
    }
}
