//! Discrete-Fourier differentiation on the periodic stock-price axis.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

/// Cached forward/inverse FFT plans for one transform length.
pub struct SpectralPlans {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl SpectralPlans {
    /// Plans FFTs of length `n` (callers guarantee `n` is a power of two).
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        Self { n, forward, inverse }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    /// In-place unnormalized forward transform.
    pub fn forward(&self, buf: &mut [Complex64]) {
        debug_assert_eq!(buf.len(), self.n);
        self.forward.process(buf);
    }

    /// In-place unnormalized inverse transform (normalize by `1/n` yourself;
    /// the propagator folds the factor into its phase multipliers so each
    /// mode sees a single rounding).
    pub fn inverse(&self, buf: &mut [Complex64]) {
        debug_assert_eq!(buf.len(), self.n);
        self.inverse.process(buf);
    }
}

/// Standard periodic wavenumbers `kappa_m = (2 pi / l) * m~` with
/// `m~ = m` for `m < n/2` and `m - n` otherwise (the Nyquist mode carries
/// `-n/2`).
pub fn wavenumbers(n: usize, l: f64) -> Vec<f64> {
    let base = 2.0 * std::f64::consts::PI / l;
    (0..n)
        .map(|m| {
            let m_signed = if m < n / 2 { m as isize } else { m as isize - n as isize };
            base * m_signed as f64
        })
        .collect()
}

/// Spectral second derivative of one periodic row: `IFFT(-kappa^2 FFT(f))/n`.
pub fn second_derivative(plans: &SpectralPlans, row: &[Complex64], l: f64) -> Vec<Complex64> {
    let n = row.len();
    debug_assert_eq!(n, plans.len());
    let kappa = wavenumbers(n, l);
    let mut buf = row.to_vec();
    plans.forward(&mut buf);
    let inv_n = 1.0 / n as f64;
    for (b, k) in buf.iter_mut().zip(&kappa) {
        *b *= -k * k * inv_n;
    }
    plans.inverse(&mut buf);
    buf
}

/// Spectral first derivative of one periodic row: `IFFT(i kappa FFT(f))/n`.
///
/// The Nyquist multiplier is zeroed so the operator stays skew-adjoint on
/// the sample space (the usual convention for odd-order spectral
/// derivatives).
pub fn first_derivative(plans: &SpectralPlans, row: &[Complex64], l: f64) -> Vec<Complex64> {
    let n = row.len();
    debug_assert_eq!(n, plans.len());
    let kappa = wavenumbers(n, l);
    let mut buf = row.to_vec();
    plans.forward(&mut buf);
    let inv_n = 1.0 / n as f64;
    for (m, b) in buf.iter_mut().enumerate() {
        let k = if n % 2 == 0 && m == n / 2 { 0.0 } else { kappa[m] };
        *b = Complex64::new(0.0, k * inv_n) * *b;
    }
    plans.inverse(&mut buf);
    buf
}
