//! Validated model parameters and derived scalar quantities.

use crate::error::ParamError;

/// Parameters of the nonlinear option-pricing equation
/// `i psi_t = -(sigma/2) psi_SS - beta |psi|^2 psi` and of its closed-form
/// rogue-wave solutions.
///
/// Fields are private so every value in circulation has passed validation:
/// `sigma * beta > 0` (strictly), `alpha != 0`, and all entries finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarketParams {
    sigma: f64,
    beta: f64,
    alpha: f64,
    k: f64,
}

impl MarketParams {
    /// Validates and constructs a parameter set.
    ///
    /// * `sigma` — volatility (dispersion coefficient)
    /// * `beta`  — adaptive-market potential (nonlinearity coefficient)
    /// * `alpha` — dimensionless scaling of the background amplitude
    /// * `k`     — gauge/wavenumber of the carrier
    pub fn new(sigma: f64, beta: f64, alpha: f64, k: f64) -> Result<Self, ParamError> {
        for (name, value) in [("sigma", sigma), ("beta", beta), ("alpha", alpha), ("k", k)] {
            if !value.is_finite() {
                return Err(ParamError::NonFinite { name, value });
            }
        }
        if !(sigma * beta > 0.0) {
            return Err(ParamError::NonFocusing { sigma, beta });
        }
        if alpha == 0.0 {
            return Err(ParamError::ZeroAlpha);
        }
        Ok(Self { sigma, beta, alpha, k })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    /// Same parameters with the gauge replaced by `k`.
    pub fn with_k(&self, k: f64) -> Result<Self, ParamError> {
        Self::new(self.sigma, self.beta, self.alpha, k)
    }

    /// Background (plane-wave) amplitude `A = alpha * sqrt(sigma / (2 beta))`.
    ///
    /// The sign of `alpha` is kept: a negative `alpha` flips the sign of the
    /// whole field and leaves `|psi|` unchanged. `sigma/(2 beta)` is positive
    /// for every validated parameter set, including the double-negative case.
    pub fn background_amplitude(&self) -> f64 {
        self.alpha * (self.sigma / (2.0 * self.beta)).sqrt()
    }
}
