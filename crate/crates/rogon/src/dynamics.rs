//! Second-order Strang split-step pseudospectral propagator for the model
//! PDE, with discrete conserved-quantity tracking.
//!
//! One step of size `dt` alternates the two exactly solvable subflows of
//! `i psi_t + (sigma/2) psi_SS + beta |psi|^2 psi = 0`:
//!
//! 1. half nonlinear step — pointwise phase rotation
//!    `psi <- psi * exp(i beta |psi|^2 dt/2)` (`|psi|` is invariant under the
//!    nonlinear flow, so this is its exact solution, not an approximation);
//! 2. full linear step in Fourier space —
//!    `psi_m <- psi_m * exp(-i (sigma/2) kappa_m^2 dt)`;
//! 3. half nonlinear step again.
//!
//! Both substeps are phase rotations (pointwise or per Fourier mode), so the
//! discrete mass `dS sum |psi|^2` is conserved to roundoff by construction,
//! and every step is exactly invertible by the step of size `-dt`.
//!
//! The simulation domain is the centered periodic interval `[-l/2, l/2)`.

use num_complex::Complex64;

use crate::error::SimError;
use crate::grid::{SpaceTimeGrid, WaveField};
use crate::params::MarketParams;
use crate::spectral::{first_derivative, wavenumbers, SpectralPlans};

/// Discrete field state at one time.
#[derive(Debug, Clone)]
pub struct SimState {
    samples: Vec<Complex64>,
    t_now: f64,
    p: MarketParams,
    l: f64,
}

impl SimState {
    /// Builds a state by sampling `psi0(S, t0)` on the periodic grid.
    pub fn from_sampler<F>(
        p: &MarketParams,
        l: f64,
        n_s: usize,
        t0: f64,
        psi0: F,
    ) -> Result<Self, SimError>
    where
        F: Fn(f64, f64) -> Complex64,
    {
        let ds = validate_domain(l, n_s)?;
        let samples: Vec<Complex64> =
            (0..n_s).map(|j| psi0(-0.5 * l + j as f64 * ds, t0)).collect();
        Self::from_samples(p, l, t0, samples)
    }

    /// Wraps existing samples (length must be a power of two, all finite).
    pub fn from_samples(
        p: &MarketParams,
        l: f64,
        t_now: f64,
        samples: Vec<Complex64>,
    ) -> Result<Self, SimError> {
        validate_domain(l, samples.len())?;
        if let Some(index) = samples.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(crate::error::FieldError::NonFiniteSample { index }.into());
        }
        Ok(Self { samples, t_now, p: *p, l })
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn t_now(&self) -> f64 {
        self.t_now
    }

    pub fn params(&self) -> &MarketParams {
        &self.p
    }

    /// Periodic domain length.
    pub fn l(&self) -> f64 {
        self.l
    }

    pub fn n_s(&self) -> usize {
        self.samples.len()
    }

    pub fn ds(&self) -> f64 {
        self.l / self.samples.len() as f64
    }

    /// `S_j = -l/2 + j dS`.
    pub fn s_at(&self, j: usize) -> f64 {
        -0.5 * self.l + j as f64 * self.ds()
    }

    /// Single-time view of this state as a [`WaveField`].
    pub fn to_field(&self, label: &str) -> WaveField {
        let grid = SpaceTimeGrid::new(-0.5 * self.l, 0.5 * self.l, self.n_s(), self.t_now, self.t_now, 1)
            .expect("valid by construction");
        WaveField::new(grid, self.p, label, self.samples.clone()).expect("finite by construction")
    }

    fn is_finite(&self) -> bool {
        self.samples.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

fn validate_domain(l: f64, n_s: usize) -> Result<f64, SimError> {
    if !(l > 0.0) || !l.is_finite() {
        return Err(SimError::BadDomainLength { l });
    }
    if n_s < 8 || !n_s.is_power_of_two() {
        return Err(SimError::BadSpectralSize { n_s });
    }
    Ok(l / n_s as f64)
}

/// Per-step traces and requested snapshots of one simulation.
#[derive(Debug, Clone)]
pub struct SimulationReport {
    /// Record times `t_0, t_0 + dt, ..., t_end` (one entry per step boundary).
    pub times: Vec<f64>,
    /// `max_j |psi_j - reference(S_j, t)|` per record, when a reference
    /// sampler was designated.
    pub error_linf_vs_analytic: Option<Vec<f64>>,
    /// Discrete mass `dS sum |psi|^2` per record.
    pub mass_trace: Vec<f64>,
    /// Discrete Hamiltonian `dS sum [(sigma/2)|psi_S|^2 - (beta/2)|psi|^4]`
    /// per record (spectral `psi_S`).
    pub hamiltonian_trace: Vec<f64>,
    /// Fields captured at the requested snapshot times, in request order.
    pub snapshots: Vec<WaveField>,
}

impl SimulationReport {
    /// Largest relative deviation of a trace from its first entry.
    pub fn relative_drift(trace: &[f64]) -> f64 {
        let first = trace.first().copied().unwrap_or(0.0);
        let scale = first.abs().max(f64::MIN_POSITIVE);
        trace.iter().fold(0.0f64, |acc, &v| acc.max((v - first).abs() / scale))
    }
}

/// Cached-plan Strang stepper for one `(params, l, n_s)` combination.
pub struct Propagator {
    p: MarketParams,
    plans: SpectralPlans,
    kappa_sq: Vec<f64>,
    /// Linear-substep multipliers `exp(-i (sigma/2) kappa^2 dt) / n` for the
    /// most recent `dt`; the `1/n` inverse-FFT normalization is folded in so
    /// each mode takes a single rounding per step.
    cached: Option<(f64, Vec<Complex64>)>,
}

impl Propagator {
    pub fn new(p: &MarketParams, l: f64, n_s: usize) -> Result<Self, SimError> {
        validate_domain(l, n_s)?;
        let kappa_sq = wavenumbers(n_s, l).into_iter().map(|k| k * k).collect();
        Ok(Self { p: *p, plans: SpectralPlans::new(n_s), kappa_sq, cached: None })
    }

    fn linear_multipliers(&mut self, dt: f64) -> &[Complex64] {
        let needs_rebuild = match &self.cached {
            Some((cached_dt, _)) => *cached_dt != dt,
            None => true,
        };
        if needs_rebuild {
            let n = self.kappa_sq.len() as f64;
            let half_sigma_dt = 0.5 * self.p.sigma() * dt;
            let mult = self
                .kappa_sq
                .iter()
                .map(|&k2| Complex64::from_polar(1.0, -half_sigma_dt * k2) / n)
                .collect();
            self.cached = Some((dt, mult));
        }
        &self.cached.as_ref().unwrap().1
    }

    /// Advances `state` by one Strang step of size `dt` (negative `dt`
    /// integrates backward).
    pub fn step(&mut self, state: &mut SimState, dt: f64) -> Result<(), SimError> {
        if dt == 0.0 || !dt.is_finite() {
            return Err(SimError::BadTimeStep { dt });
        }
        let half_beta_dt = 0.5 * self.p.beta() * dt;
        for z in state.samples.iter_mut() {
            *z *= Complex64::from_polar(1.0, half_beta_dt * z.norm_sqr());
        }
        self.plans.forward(&mut state.samples);
        for (z, m) in state.samples.iter_mut().zip(self.linear_multipliers(dt)) {
            *z *= m;
        }
        self.plans.inverse(&mut state.samples);
        for z in state.samples.iter_mut() {
            *z *= Complex64::from_polar(1.0, half_beta_dt * z.norm_sqr());
        }
        state.t_now += dt;
        if !state.is_finite() {
            return Err(SimError::NonFiniteState { t: state.t_now });
        }
        Ok(())
    }

    /// Cached-plan variant of [`conserved_hamiltonian`] for per-step
    /// recording loops.
    pub fn hamiltonian(&self, state: &SimState) -> f64 {
        hamiltonian_with_plans(&self.plans, state)
    }
}

/// One Strang split step as a pure function (plans are built per call; use
/// [`Propagator`] or [`simulate`] for long runs).
pub fn strang_step(state: &SimState, dt: f64) -> Result<SimState, SimError> {
    let mut prop = Propagator::new(&state.p, state.l, state.n_s())?;
    let mut next = state.clone();
    prop.step(&mut next, dt)?;
    Ok(next)
}

/// Discrete mass `dS sum |psi_j|^2`.
pub fn conserved_mass(state: &SimState) -> f64 {
    state.ds() * state.samples.iter().map(|z| z.norm_sqr()).sum::<f64>()
}

/// Discrete Hamiltonian `dS sum [(sigma/2)|psi_S|^2 - (beta/2)|psi|^4]` with
/// a spectral first derivative.
pub fn conserved_hamiltonian(state: &SimState) -> f64 {
    hamiltonian_with_plans(&SpectralPlans::new(state.n_s()), state)
}

fn hamiltonian_with_plans(plans: &SpectralPlans, state: &SimState) -> f64 {
    let psi_s = first_derivative(plans, &state.samples, state.l);
    let half_sigma = 0.5 * state.p.sigma();
    let half_beta = 0.5 * state.p.beta();
    let sum: f64 = state
        .samples
        .iter()
        .zip(&psi_s)
        .map(|(z, dz)| {
            let i2 = z.norm_sqr();
            half_sigma * dz.norm_sqr() - half_beta * i2 * i2
        })
        .sum();
    state.ds() * sum
}

/// Optional pointwise reference for error tracking during a run.
pub type Reference<'a> = &'a (dyn Fn(f64, f64) -> Complex64 + Sync);

/// Marches `initial` to `t_end` with constant step `dt`, recording mass,
/// Hamiltonian, and (when `reference` is given) the pointwise linf error at
/// every step boundary, plus snapshots at the requested times.
///
/// `(t_end - t_now)/dt` must be within `1e-9` of a nonnegative integer, and
/// every snapshot time must lie on a step boundary. A blow-up aborts with
/// [`SimError::BlowUp`] carrying the partial report.
pub fn simulate(
    initial: &SimState,
    t_end: f64,
    dt: f64,
    reference: Option<Reference<'_>>,
    snapshot_times: &[f64],
) -> Result<SimulationReport, SimError> {
    if dt == 0.0 || !dt.is_finite() {
        return Err(SimError::BadTimeStep { dt });
    }
    let t0 = initial.t_now;
    let ratio = (t_end - t0) / dt;
    if !ratio.is_finite() || ratio < -1e-9 || (ratio - ratio.round()).abs() > 1e-9 {
        return Err(SimError::StepCountMismatch { ratio });
    }
    let n_steps = ratio.round().max(0.0) as u64;

    let mut snapshot_steps: Vec<(u64, f64)> = Vec::with_capacity(snapshot_times.len());
    for &ts in snapshot_times {
        let r = (ts - t0) / dt;
        if !r.is_finite() || (r - r.round()).abs() > 1e-9 || r.round() < 0.0 || r.round() > n_steps as f64 {
            return Err(SimError::SnapshotOffStep { t: ts });
        }
        snapshot_steps.push((r.round() as u64, ts));
    }

    let mut prop = Propagator::new(&initial.p, initial.l, initial.n_s())?;
    let mut state = initial.clone();
    let mut report = SimulationReport {
        times: Vec::with_capacity(n_steps as usize + 1),
        error_linf_vs_analytic: reference.map(|_| Vec::with_capacity(n_steps as usize + 1)),
        mass_trace: Vec::with_capacity(n_steps as usize + 1),
        hamiltonian_trace: Vec::with_capacity(n_steps as usize + 1),
        snapshots: Vec::with_capacity(snapshot_steps.len()),
    };

    for i in 0..=n_steps {
        // Record times are recomputed from the step index so they carry no
        // accumulated summation drift.
        let t_i = t0 + i as f64 * dt;
        state.t_now = t_i;
        report.times.push(t_i);
        report.mass_trace.push(conserved_mass(&state));
        report.hamiltonian_trace.push(prop.hamiltonian(&state));
        if let (Some(errors), Some(reference)) = (report.error_linf_vs_analytic.as_mut(), reference)
        {
            let mut worst = 0.0f64;
            for (j, z) in state.samples.iter().enumerate() {
                worst = worst.max((z - reference(state.s_at(j), t_i)).norm());
            }
            errors.push(worst);
        }
        for &(step, ts) in &snapshot_steps {
            if step == i {
                let mut snap = state.clone();
                snap.t_now = ts;
                report.snapshots.push(snap.to_field("snapshot"));
            }
        }
        if i < n_steps {
            match prop.step(&mut state, dt) {
                Ok(()) => {}
                Err(SimError::NonFiniteState { t }) => {
                    return Err(SimError::BlowUp { t, partial: Box::new(report) });
                }
                Err(other) => return Err(other),
            }
        }
    }
    Ok(report)
}
