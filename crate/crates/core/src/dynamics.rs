//! Time-domain integration of the linearized network dynamics
//!
//! ```text
//! δθ̇ = v,    v̇ = (δω(t) − D·v − L·δθ) / M(t)
//! ```
//!
//! with classical fixed-step fourth-order Runge–Kutta and a sample-and-hold
//! inertia policy: M(t) is re-sampled every `control_period` (an integer
//! multiple of `dt`) and held constant between samples. The system starts at
//! rest; an impulse disturbance of amplitude `a` along direction `dir` is
//! realized as the initial condition v(0) = a·dir, matching the analytic
//! mode convention η̇_k(0) = γ_k. A sine-coupled variant validates the
//! linearization near synchrony.
//!
//! Everything here is deterministic: identical inputs produce bitwise
//! identical trajectories.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::controller::{adaptive_inertia, ControllerConfig, ControllerState};
use crate::error::{Error, Result};
use crate::netgen::{LaplacianMatrix, Network};
use crate::spectral::{decompose, Spectrum};

/// Divergence guard on ‖δθ‖∞.
const THETA_GUARD: f64 = 1e6;

/// Integration and sampling parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimParams {
    /// Damping coefficient D.
    #[serde(alias = "D")]
    pub damping: f64,
    /// Coupling strength K (used when building Laplacians and by the
    /// nonlinear path).
    #[serde(alias = "K")]
    pub coupling: f64,
    /// Integrator step (s).
    pub dt: f64,
    /// Horizon (s); must be an integer multiple of `dt`.
    pub t_end: f64,
    /// Controller sample-and-hold interval (s); integer multiple of `dt`.
    pub control_period: f64,
}

impl SimParams {
    /// Reported reference settings: D = 0.8, K = 1, dt = 1 ms, horizon 10 s,
    /// controller sampling 10 ms.
    pub fn default_reference() -> Self {
        SimParams {
            damping: 0.8,
            coupling: 1.0,
            dt: 1e-3,
            t_end: 10.0,
            control_period: 0.01,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::invalid(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(Error::invalid(format!("t_end must be positive, got {}", self.t_end)));
        }
        let damping_ok = self.damping.is_finite() && self.damping > 0.0;
        if !damping_ok {
            return Err(Error::invalid(format!("damping must be positive, got {}", self.damping)));
        }
        if !(self.coupling >= 0.0 && self.coupling.is_finite()) {
            return Err(Error::invalid(format!("coupling must be non-negative, got {}", self.coupling)));
        }
        self.steps()?;
        self.control_steps()?;
        Ok(())
    }

    /// Number of integrator steps; `t_end` must sit on the grid.
    pub fn steps(&self) -> Result<usize> {
        let ratio = self.t_end / self.dt;
        let steps = ratio.round();
        if (ratio - steps).abs() > 1e-6 {
            return Err(Error::invalid(format!(
                "t_end = {} is not an integer multiple of dt = {}",
                self.t_end, self.dt
            )));
        }
        Ok(steps as usize)
    }

    /// Controller period in integrator steps.
    pub fn control_steps(&self) -> Result<usize> {
        let ratio = self.control_period / self.dt;
        let steps = ratio.round();
        if steps < 1.0 || (ratio - steps).abs() > 1e-6 {
            return Err(Error::invalid(format!(
                "control_period = {} must be a positive integer multiple of dt = {}",
                self.control_period, self.dt
            )));
        }
        Ok(steps as usize)
    }
}

/// Disturbance time profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DisturbanceKind {
    /// δω(t) = a·δ(t): realized as the initial condition v(0) = a·dir.
    Impulse,
    /// δω(t) = a·e^{−t}·u(t).
    MonotonicDecay,
    /// δω(t) = a·e^{−t}·sin(2πt)·u(t).
    OscillatoryDecay,
}

impl DisturbanceKind {
    pub fn label(&self) -> &'static str {
        match self {
            DisturbanceKind::Impulse => "impulse",
            DisturbanceKind::MonotonicDecay => "monotonic_decay",
            DisturbanceKind::OscillatoryDecay => "oscillatory_decay",
        }
    }

    /// Scalar time factor of the forcing (zero for impulses, which act
    /// through the initial condition instead).
    pub fn time_factor(&self, t: f64) -> f64 {
        match self {
            DisturbanceKind::Impulse => 0.0,
            DisturbanceKind::MonotonicDecay => (-t).exp(),
            DisturbanceKind::OscillatoryDecay => {
                (-t).exp() * (2.0 * std::f64::consts::PI * t).sin()
            }
        }
    }
}

/// Spatial direction of the disturbance.
#[derive(Debug, Clone, PartialEq)]
pub enum DisturbanceDirection {
    /// Eigenvector of λ_max (the default).
    PrincipalEigenvector,
    /// Normalized constant vector (excites only the rigid-body mode).
    Uniform,
    /// Unit vector at one node.
    SingleNode(usize),
    /// Caller-supplied vector, used as given.
    Explicit(DVector<f64>),
}

/// Disturbance class, amplitude and spatial direction.
#[derive(Debug, Clone, PartialEq)]
pub struct DisturbanceSpec {
    pub kind: DisturbanceKind,
    pub amplitude: f64,
    pub direction: DisturbanceDirection,
}

impl DisturbanceSpec {
    pub fn new(kind: DisturbanceKind, amplitude: f64, direction: DisturbanceDirection) -> Result<Self> {
        if !amplitude.is_finite() {
            return Err(Error::invalid("disturbance amplitude must be finite"));
        }
        Ok(DisturbanceSpec {
            kind,
            amplitude,
            direction,
        })
    }

    /// Impulse of amplitude `a` along the principal eigenvector.
    pub fn impulse(a: f64) -> Self {
        DisturbanceSpec {
            kind: DisturbanceKind::Impulse,
            amplitude: a,
            direction: DisturbanceDirection::PrincipalEigenvector,
        }
    }

    /// Resolve the spatial direction against a spectrum.
    pub fn direction_vector(&self, spectrum: &Spectrum) -> Result<DVector<f64>> {
        let n = spectrum.n();
        match &self.direction {
            DisturbanceDirection::PrincipalEigenvector => Ok(spectrum.eigenvector(n - 1)),
            DisturbanceDirection::Uniform => {
                Ok(DVector::from_element(n, 1.0 / (n as f64).sqrt()))
            }
            DisturbanceDirection::SingleNode(i) => {
                if *i >= n {
                    return Err(Error::invalid(format!("node {i} out of range for n={n}")));
                }
                let mut v = DVector::zeros(n);
                v[*i] = 1.0;
                Ok(v)
            }
            DisturbanceDirection::Explicit(v) => {
                if v.len() != n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        got: v.len(),
                    });
                }
                Ok(v.clone())
            }
        }
    }

    /// Frequency forcing vector δω(t) at time t.
    pub fn signal(&self, spectrum: &Spectrum, t: f64) -> Result<DVector<f64>> {
        let dir = self.direction_vector(spectrum)?;
        Ok(dir * (self.amplitude * self.kind.time_factor(t)))
    }
}

/// Inertia supplied to the integrator, sampled at control boundaries.
pub trait InertiaPolicy {
    /// Sample M at time `t` given the measured per-mode |η_k|.
    fn sample(&mut self, t: f64, eta_abs: &[f64]) -> Result<f64>;
    fn label(&self) -> &str;
}

/// Fixed inertia.
#[derive(Debug, Clone)]
pub struct ConstantInertia {
    value: f64,
}

impl ConstantInertia {
    pub fn new(value: f64) -> Result<Self> {
        if !(value > 0.0 && value.is_finite()) {
            return Err(Error::invalid(format!("inertia must be positive, got {value}")));
        }
        Ok(ConstantInertia { value })
    }

    pub fn value(&self) -> f64 {
        self.value
    }
}

impl InertiaPolicy for ConstantInertia {
    fn sample(&mut self, _t: f64, _eta_abs: &[f64]) -> Result<f64> {
        Ok(self.value)
    }

    fn label(&self) -> &str {
        "constant"
    }
}

/// The adaptive law wrapped as a policy; owns its per-run state.
#[derive(Debug, Clone)]
pub struct AdaptiveInertia {
    cfg: ControllerConfig,
    state: ControllerState,
}

impl AdaptiveInertia {
    pub fn new(cfg: ControllerConfig) -> Result<Self> {
        cfg.validate()?;
        let state = ControllerState::new(&cfg);
        Ok(AdaptiveInertia { cfg, state })
    }

    pub fn config(&self) -> &ControllerConfig {
        &self.cfg
    }
}

impl InertiaPolicy for AdaptiveInertia {
    fn sample(&mut self, t: f64, eta_abs: &[f64]) -> Result<f64> {
        adaptive_inertia(&self.cfg, &mut self.state, eta_abs, t)
    }

    fn label(&self) -> &str {
        "adaptive"
    }
}

/// Simulation output on the uniform time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    times: Vec<f64>,
    theta_dev: Vec<DVector<f64>>,
    theta_dev_dot: Vec<DVector<f64>>,
    eta: Vec<DVector<f64>>,
    inertia: Vec<f64>,
    h_cumulative: Vec<f64>,
}

impl Trajectory {
    /// Assemble a trajectory from recorded state series; the running
    /// fragility integral is recomputed from the modal series.
    pub fn from_parts(
        times: Vec<f64>,
        theta_dev: Vec<DVector<f64>>,
        theta_dev_dot: Vec<DVector<f64>>,
        eta: Vec<DVector<f64>>,
        inertia: Vec<f64>,
    ) -> Result<Self> {
        let len = times.len();
        if len == 0
            || theta_dev.len() != len
            || theta_dev_dot.len() != len
            || eta.len() != len
            || inertia.len() != len
        {
            return Err(Error::invalid("trajectory arrays must share one nonzero length"));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid("trajectory times must be strictly increasing"));
        }
        let mut h_cumulative = Vec::with_capacity(len);
        let mut h = 0.0;
        let mut prev = elastic_energy(&eta[0]);
        h_cumulative.push(0.0);
        for i in 1..len {
            let cur = elastic_energy(&eta[i]);
            h += 0.5 * (times[i] - times[i - 1]) * (prev + cur);
            h_cumulative.push(h);
            prev = cur;
        }
        Ok(Trajectory {
            times,
            theta_dev,
            theta_dev_dot,
            eta,
            inertia,
            h_cumulative,
        })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn t_end(&self) -> f64 {
        *self.times.last().expect("non-empty trajectory")
    }

    pub fn theta_dev(&self) -> &[DVector<f64>] {
        &self.theta_dev
    }

    pub fn theta_dev_dot(&self) -> &[DVector<f64>] {
        &self.theta_dev_dot
    }

    pub fn eta(&self) -> &[DVector<f64>] {
        &self.eta
    }

    /// Modal trace of one mode (0-based spectrum index).
    pub fn eta_mode(&self, k: usize) -> Vec<f64> {
        self.eta.iter().map(|e| e[k]).collect()
    }

    pub fn inertia(&self) -> &[f64] {
        &self.inertia
    }

    pub fn h_cumulative(&self) -> &[f64] {
        &self.h_cumulative
    }

    /// Σ_{k≥2} η_k² at step i (the rigid-body mode is excluded).
    pub fn elastic_energy_at(&self, i: usize) -> f64 {
        elastic_energy(&self.eta[i])
    }

    /// Observed [min, max] of M(t).
    pub fn inertia_range(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &m in &self.inertia {
            lo = lo.min(m);
            hi = hi.max(m);
        }
        (lo, hi)
    }

    /// Linear interpolation of M(t) at an arbitrary probe time.
    pub fn inertia_at(&self, t: f64) -> Option<f64> {
        interp(&self.times, &self.inertia, t)
    }

    /// Linear interpolation of the running H(t).
    pub fn h_at(&self, t: f64) -> Option<f64> {
        interp(&self.times, &self.h_cumulative, t)
    }

    /// CSV with columns `t,M,H_cum` plus the modal traces of the `top_m`
    /// largest-eigenvalue modes (modes ascend with the spectrum index, so
    /// these are the last `top_m` columns of η).
    pub fn to_csv(&self, top_m: usize) -> String {
        let n = self.eta[0].len();
        let m = top_m.min(n.saturating_sub(1));
        let modes: Vec<usize> = (0..m).map(|i| n - 1 - i).collect();
        let mut out = String::from("t,M,H_cum");
        for &k in &modes {
            out.push_str(&format!(",eta_{}", k + 1));
        }
        out.push('\n');
        for i in 0..self.len() {
            out.push_str(&format!(
                "{},{},{}",
                self.times[i], self.inertia[i], self.h_cumulative[i]
            ));
            for &k in &modes {
                out.push_str(&format!(",{}", self.eta[i][k]));
            }
            out.push('\n');
        }
        out
    }

    /// Full-state dump: every modal coordinate plus node phases and rates.
    pub fn to_csv_full(&self) -> String {
        let n = self.eta[0].len();
        let mut out = String::from("t,M,H_cum");
        for k in 1..=n {
            out.push_str(&format!(",eta_{k}"));
        }
        for i in 0..n {
            out.push_str(&format!(",theta_{i}"));
        }
        for i in 0..n {
            out.push_str(&format!(",v_{i}"));
        }
        out.push('\n');
        for i in 0..self.len() {
            out.push_str(&format!(
                "{},{},{}",
                self.times[i], self.inertia[i], self.h_cumulative[i]
            ));
            for x in self.eta[i].iter() {
                out.push_str(&format!(",{x}"));
            }
            for x in self.theta_dev[i].iter() {
                out.push_str(&format!(",{x}"));
            }
            for x in self.theta_dev_dot[i].iter() {
                out.push_str(&format!(",{x}"));
            }
            out.push('\n');
        }
        out
    }
}

fn elastic_energy(eta: &DVector<f64>) -> f64 {
    eta.iter().skip(1).map(|x| x * x).sum()
}

fn interp(xs: &[f64], ys: &[f64], x: f64) -> Option<f64> {
    if x < xs[0] || x > *xs.last()? {
        return None;
    }
    let idx = xs.partition_point(|&t| t < x);
    if idx == 0 {
        return Some(ys[0]);
    }
    if idx >= xs.len() {
        return Some(*ys.last()?);
    }
    let (x0, x1) = (xs[idx - 1], xs[idx]);
    let (y0, y1) = (ys[idx - 1], ys[idx]);
    if x1 == x0 {
        return Some(y0);
    }
    Some(y0 + (y1 - y0) * (x - x0) / (x1 - x0))
}

/// Integrate the linearized dynamics; decomposes the Laplacian internally.
pub fn simulate(
    l: &LaplacianMatrix,
    disturbance: &DisturbanceSpec,
    params: &SimParams,
    policy: &mut dyn InertiaPolicy,
) -> Result<Trajectory> {
    let spectrum = decompose(l)?;
    simulate_with_spectrum(l, &spectrum, disturbance, params, policy)
}

/// Integrate with a precomputed spectrum (what the experiment runner uses).
pub fn simulate_with_spectrum(
    l: &LaplacianMatrix,
    spectrum: &Spectrum,
    disturbance: &DisturbanceSpec,
    params: &SimParams,
    policy: &mut dyn InertiaPolicy,
) -> Result<Trajectory> {
    params.validate()?;
    let n = l.n();
    if spectrum.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: spectrum.n(),
        });
    }
    let steps = params.steps()?;
    let control_every = params.control_steps()?;
    let dt = params.dt;
    let damping = params.damping;
    let dir = disturbance.direction_vector(spectrum)?;

    let mut theta = DVector::<f64>::zeros(n);
    let mut v = match disturbance.kind {
        DisturbanceKind::Impulse => &dir * disturbance.amplitude,
        _ => DVector::zeros(n),
    };

    let forcing = |t: f64| -> f64 { disturbance.amplitude * disturbance.kind.time_factor(t) };

    let mut times = Vec::with_capacity(steps + 1);
    let mut theta_hist = Vec::with_capacity(steps + 1);
    let mut v_hist = Vec::with_capacity(steps + 1);
    let mut eta_hist = Vec::with_capacity(steps + 1);
    let mut inertia_hist = Vec::with_capacity(steps + 1);
    let mut h_hist = Vec::with_capacity(steps + 1);

    let mut m_held = f64::NAN;
    let mut h = 0.0;
    let mut prev_energy = 0.0;
    let mut eta_abs = vec![0.0; n];

    // RK4 scratch.
    let mut l_theta = DVector::<f64>::zeros(n);
    let mut k_theta = [DVector::<f64>::zeros(n), DVector::zeros(n), DVector::zeros(n), DVector::zeros(n)];
    let mut k_v = [DVector::<f64>::zeros(n), DVector::zeros(n), DVector::zeros(n), DVector::zeros(n)];
    let mut stage_theta = DVector::<f64>::zeros(n);
    let mut stage_v = DVector::<f64>::zeros(n);

    for step in 0..=steps {
        let t = step as f64 * dt;
        if !theta.iter().chain(v.iter()).all(|x| x.is_finite()) || theta.amax() > THETA_GUARD {
            return Err(Error::Diverged { step, time: t });
        }
        let eta = spectrum.project(&theta)?;

        if step % control_every == 0 {
            for (dst, src) in eta_abs.iter_mut().zip(eta.iter()) {
                *dst = src.abs();
            }
            m_held = policy.sample(t, &eta_abs)?;
            if !(m_held > 0.0 && m_held.is_finite()) {
                return Err(Error::invalid(format!(
                    "inertia policy returned a non-positive value ({m_held}) at t={t}"
                )));
            }
        }

        let energy = elastic_energy(&eta);
        if step > 0 {
            h += 0.5 * dt * (prev_energy + energy);
        }
        prev_energy = energy;

        times.push(t);
        theta_hist.push(theta.clone());
        v_hist.push(v.clone());
        eta_hist.push(eta);
        inertia_hist.push(m_held);
        h_hist.push(h);

        if step == steps {
            break;
        }

        // Classical RK4 on (θ, v) with M held over the step.
        let stage_offsets = [0.0, 0.5, 0.5, 1.0];
        for s in 0..4 {
            if s == 0 {
                stage_theta.copy_from(&theta);
                stage_v.copy_from(&v);
            } else {
                let scale = stage_offsets[s] * dt;
                stage_theta.copy_from(&theta);
                stage_theta.axpy(scale, &k_theta[s - 1], 1.0);
                stage_v.copy_from(&v);
                stage_v.axpy(scale, &k_v[s - 1], 1.0);
            }
            let ts = t + stage_offsets[s] * dt;
            l.values().mul_to(&stage_theta, &mut l_theta);
            let f = forcing(ts);
            // k_v = (f·dir − D·v_s − L·θ_s)/m
            for i in 0..n {
                k_v[s][i] = (f * dir[i] - damping * stage_v[i] - l_theta[i]) / m_held;
            }
            k_theta[s].copy_from(&stage_v);
        }
        for i in 0..n {
            theta[i] += dt / 6.0
                * (k_theta[0][i] + 2.0 * k_theta[1][i] + 2.0 * k_theta[2][i] + k_theta[3][i]);
            v[i] += dt / 6.0 * (k_v[0][i] + 2.0 * k_v[1][i] + 2.0 * k_v[2][i] + k_v[3][i]);
        }
    }

    Ok(Trajectory {
        times,
        theta_dev: theta_hist,
        theta_dev_dot: v_hist,
        eta: eta_hist,
        inertia: inertia_hist,
        h_cumulative: h_hist,
    })
}

/// Full sine-coupled integration of the inertial oscillator network; used to
/// validate the linearization near synchrony. Records raw phases in the
/// `theta_dev` slot and their modal projection in `eta`.
pub fn simulate_nonlinear(
    net: &Network,
    natural_freqs: &DVector<f64>,
    params: &SimParams,
    policy: &mut dyn InertiaPolicy,
    initial_phases: &DVector<f64>,
    initial_rates: &DVector<f64>,
) -> Result<Trajectory> {
    params.validate()?;
    let n = net.n();
    if natural_freqs.len() != n || initial_phases.len() != n || initial_rates.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: natural_freqs.len().min(initial_phases.len()).min(initial_rates.len()),
        });
    }
    // The projection basis does not depend on K (eigenvectors of K(Deg−A)
    // are K-invariant), so a unit-coupling Laplacian serves when K = 0.
    let basis_coupling = if params.coupling > 0.0 { params.coupling } else { 1.0 };
    let l = crate::netgen::laplacian(net, basis_coupling)?;
    let spectrum = decompose(&l)?;
    let steps = params.steps()?;
    let control_every = params.control_steps()?;
    let dt = params.dt;
    let damping = params.damping;
    let coupling = params.coupling;
    let adj = net.adjacency();

    let mut theta = initial_phases.clone();
    let mut v = initial_rates.clone();

    let mut times = Vec::with_capacity(steps + 1);
    let mut theta_hist = Vec::with_capacity(steps + 1);
    let mut v_hist = Vec::with_capacity(steps + 1);
    let mut eta_hist = Vec::with_capacity(steps + 1);
    let mut inertia_hist = Vec::with_capacity(steps + 1);
    let mut h_hist = Vec::with_capacity(steps + 1);

    let mut m_held = f64::NAN;
    let mut h = 0.0;
    let mut prev_energy = 0.0;
    let mut eta_abs = vec![0.0; n];

    let coupling_accel = |theta_s: &DVector<f64>, out: &mut DVector<f64>| {
        for i in 0..n {
            let mut acc = 0.0;
            for j in 0..n {
                let a = adj[(i, j)];
                if a != 0.0 {
                    acc += a * (theta_s[j] - theta_s[i]).sin();
                }
            }
            out[i] = coupling * acc;
        }
    };

    let mut sin_sum = DVector::<f64>::zeros(n);
    let mut k_theta = [DVector::<f64>::zeros(n), DVector::zeros(n), DVector::zeros(n), DVector::zeros(n)];
    let mut k_v = [DVector::<f64>::zeros(n), DVector::zeros(n), DVector::zeros(n), DVector::zeros(n)];
    let mut stage_theta = DVector::<f64>::zeros(n);
    let mut stage_v = DVector::<f64>::zeros(n);

    for step in 0..=steps {
        let t = step as f64 * dt;
        if !theta.iter().chain(v.iter()).all(|x| x.is_finite()) || theta.amax() > THETA_GUARD {
            return Err(Error::Diverged { step, time: t });
        }
        let eta = spectrum.project(&theta)?;

        if step % control_every == 0 {
            for (dst, src) in eta_abs.iter_mut().zip(eta.iter()) {
                *dst = src.abs();
            }
            m_held = policy.sample(t, &eta_abs)?;
            if !(m_held > 0.0 && m_held.is_finite()) {
                return Err(Error::invalid(format!(
                    "inertia policy returned a non-positive value ({m_held}) at t={t}"
                )));
            }
        }

        let energy = elastic_energy(&eta);
        if step > 0 {
            h += 0.5 * dt * (prev_energy + energy);
        }
        prev_energy = energy;

        times.push(t);
        theta_hist.push(theta.clone());
        v_hist.push(v.clone());
        eta_hist.push(eta);
        inertia_hist.push(m_held);
        h_hist.push(h);

        if step == steps {
            break;
        }

        let stage_offsets = [0.0, 0.5, 0.5, 1.0];
        for s in 0..4 {
            if s == 0 {
                stage_theta.copy_from(&theta);
                stage_v.copy_from(&v);
            } else {
                let scale = stage_offsets[s] * dt;
                stage_theta.copy_from(&theta);
                stage_theta.axpy(scale, &k_theta[s - 1], 1.0);
                stage_v.copy_from(&v);
                stage_v.axpy(scale, &k_v[s - 1], 1.0);
            }
            coupling_accel(&stage_theta, &mut sin_sum);
            for i in 0..n {
                k_v[s][i] = (natural_freqs[i] - damping * stage_v[i] + sin_sum[i]) / m_held;
            }
            k_theta[s].copy_from(&stage_v);
        }
        for i in 0..n {
            theta[i] += dt / 6.0
                * (k_theta[0][i] + 2.0 * k_theta[1][i] + 2.0 * k_theta[2][i] + k_theta[3][i]);
            v[i] += dt / 6.0 * (k_v[0][i] + 2.0 * k_v[1][i] + 2.0 * k_v[2][i] + k_v[3][i]);
        }
    }

    Ok(Trajectory {
        times,
        theta_dev: theta_hist,
        theta_dev_dot: v_hist,
        eta: eta_hist,
        inertia: inertia_hist,
        h_cumulative: h_hist,
    })
}
