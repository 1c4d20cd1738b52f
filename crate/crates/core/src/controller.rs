//! The adaptive inertia law and its gain-tuning calculators.
//!
//! The controller holds the inertia at a baseline M₀ = D²/(4λ_max) — the
//! value that critically damps the dominant mode — and adds an
//! eigenvalue-weighted feedback term driven by the measured modal response
//! magnitudes:
//!
//! ```text
//! M(t) = M₀ + k · Σ w_k · |η_k(t)|,   w_k = λ_k/λ_max by default
//! ```
//!
//! Raw measurements pass through a first-order low-pass filter (cutoff f_c),
//! the output is rate-limited to `rate_limit` per second and clamped into
//! [M_min, M_max]. Gain upper bounds come from the clamp ceiling and the
//! rate budget; `tune_gain` applies a safety factor to the tighter one.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::netgen::NetworkKind;
use crate::spectral::Spectrum;

/// Baseline inertia M₀ = D²/(4λ_max): the dominant mode is critically
/// damped there, so the response decays without overshoot.
pub fn baseline_inertia(damping: f64, lambda_max: f64) -> f64 {
    assert!(damping > 0.0 && lambda_max > 0.0, "positive parameters required");
    damping * damping / (4.0 * lambda_max)
}

/// Fully resolved controller parameters for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct ControllerConfig {
    /// Baseline inertia M₀.
    pub m0: f64,
    /// Feedback gain k (inertia per rad of modal response).
    pub gain: f64,
    /// Spectrum indices (0-based) of the modes used in feedback; ordered by
    /// descending eigenvalue. Index 0 (rigid body) is never included.
    pub mode_set: Vec<usize>,
    /// Per-mode weights aligned with `mode_set`, each in (0, 1].
    pub weights: Vec<f64>,
    /// Lower clamp (margin·M₀).
    pub m_min: f64,
    /// Upper clamp.
    pub m_max: f64,
    /// Maximum |dM/dt| in inertia units per second.
    pub rate_limit: f64,
    /// Low-pass cutoff on |η| measurements in Hz; `f64::INFINITY` disables
    /// filtering.
    pub filter_cutoff_hz: f64,
}

impl ControllerConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.m_min > 0.0 && self.m_min <= self.m0 && self.m0 <= self.m_max) {
            return Err(Error::invalid(format!(
                "clamps must satisfy 0 < M_min <= M0 <= M_max, got [{}, {}] around {}",
                self.m_min, self.m_max, self.m0
            )));
        }
        if self.gain < 0.0 || !self.gain.is_finite() {
            return Err(Error::invalid(format!("gain must be >= 0, got {}", self.gain)));
        }
        if self.mode_set.len() != self.weights.len() {
            return Err(Error::invalid("mode_set and weights must have equal length"));
        }
        if self.mode_set.contains(&0) {
            return Err(Error::invalid("rigid-body mode cannot be in the feedback set"));
        }
        if self.weights.iter().any(|&w| !(w > 0.0 && w <= 1.0)) {
            return Err(Error::invalid("weights must lie in (0, 1]"));
        }
        if self.rate_limit <= 0.0 {
            return Err(Error::invalid("rate limit must be positive"));
        }
        if self.filter_cutoff_hz <= 0.0 {
            return Err(Error::invalid("filter cutoff must be positive"));
        }
        Ok(())
    }
}

/// Mutable per-run controller memory.
#[derive(Debug, Clone)]
pub struct ControllerState {
    /// Low-pass filtered |η_k|, aligned with `mode_set`.
    filtered: Vec<f64>,
    /// Previous output (rate-limit anchor).
    last_m: f64,
    /// Previous sample time; `None` until the first sample arrives.
    last_time: Option<f64>,
}

impl ControllerState {
    pub fn new(cfg: &ControllerConfig) -> Self {
        ControllerState {
            filtered: vec![0.0; cfg.mode_set.len()],
            last_m: cfg.m0.clamp(cfg.m_min, cfg.m_max),
            last_time: None,
        }
    }

    pub fn last_inertia(&self) -> f64 {
        self.last_m
    }

    pub fn filtered(&self) -> &[f64] {
        &self.filtered
    }
}

/// One controller update. `eta_abs` holds |η_k| for every spectrum index;
/// the configured mode set picks out the entries that matter.
///
/// The first call seeds the filter with the raw measurement and returns the
/// baseline (there is no interval to rate-limit against yet); subsequent
/// calls must carry strictly increasing timestamps.
pub fn adaptive_inertia(
    cfg: &ControllerConfig,
    state: &mut ControllerState,
    eta_abs: &[f64],
    now: f64,
) -> Result<f64> {
    if let Some(&max_mode) = cfg.mode_set.iter().max() {
        if eta_abs.len() <= max_mode {
            return Err(Error::DimensionMismatch {
                expected: max_mode + 1,
                got: eta_abs.len(),
            });
        }
    }

    match state.last_time {
        None => {
            for (slot, &mode) in cfg.mode_set.iter().enumerate() {
                state.filtered[slot] = eta_abs[mode];
            }
            state.last_time = Some(now);
            Ok(state.last_m)
        }
        Some(last) => {
            if now <= last {
                return Err(Error::NonMonotoneTime { now, last });
            }
            let dt = now - last;
            // Discrete first-order RC filter: y += α(x − y),
            // α = Δt/(Δt + 1/(2π f_c)). Infinite cutoff passes through.
            let alpha = if cfg.filter_cutoff_hz.is_infinite() {
                1.0
            } else {
                let tau = 1.0 / (2.0 * std::f64::consts::PI * cfg.filter_cutoff_hz);
                dt / (dt + tau)
            };
            let mut feedback = 0.0;
            for (slot, &mode) in cfg.mode_set.iter().enumerate() {
                state.filtered[slot] += alpha * (eta_abs[mode] - state.filtered[slot]);
                feedback += cfg.weights[slot] * state.filtered[slot];
            }
            let raw = cfg.m0 + cfg.gain * feedback;
            let max_step = cfg.rate_limit * dt;
            let limited = raw.clamp(state.last_m - max_step, state.last_m + max_step);
            let out = limited.clamp(cfg.m_min, cfg.m_max);
            state.last_m = out;
            state.last_time = Some(now);
            Ok(out)
        }
    }
}

/// Gain ceiling from the clamp band: k ≤ (M_max − M₀)/Σ w_k·|η_k|_max.
/// Feedback only raises M above M₀, so the binding constraint is the upper
/// clamp. A zero response bound means the gain is unconstrained (+∞).
pub fn gain_bound_stability(m_max: f64, m0: f64, weights: &[f64], eta_abs_max: &[f64]) -> f64 {
    assert_eq!(weights.len(), eta_abs_max.len());
    let denom: f64 = weights.iter().zip(eta_abs_max).map(|(w, e)| w * e).sum();
    if denom <= 0.0 {
        f64::INFINITY
    } else {
        (m_max - m0) / denom
    }
}

/// Gain ceiling from the actuator rate budget:
/// k ≤ rate_limit/Σ w_k·|η̇_k|_max.
pub fn gain_bound_rate(rate_limit: f64, weights: &[f64], eta_dot_abs_max: &[f64]) -> f64 {
    assert_eq!(weights.len(), eta_dot_abs_max.len());
    let denom: f64 = weights.iter().zip(eta_dot_abs_max).map(|(w, e)| w * e).sum();
    if denom <= 0.0 {
        f64::INFINITY
    } else {
        rate_limit / denom
    }
}

/// k = safety_factor · min(bounds). Both bounds infinite means nothing
/// constrains the gain and an explicit config value is required.
pub fn tune_gain(stability_bound: f64, rate_bound: f64, safety_factor: f64) -> Result<f64> {
    if !(safety_factor > 0.0 && safety_factor <= 1.0) {
        return Err(Error::invalid(format!(
            "safety factor must be in (0, 1], got {safety_factor}"
        )));
    }
    if stability_bound <= 0.0 || rate_bound <= 0.0 {
        return Err(Error::invalid("gain bounds must be positive"));
    }
    let bound = stability_bound.min(rate_bound);
    if bound.is_infinite() {
        return Err(Error::invalid(
            "both gain bounds are unbounded; an explicit gain value is required",
        ));
    }
    Ok(safety_factor * bound)
}

/// Default safety factor applied to the gain bound.
pub const DEFAULT_GAIN_SAFETY: f64 = 0.75;

/// Indices of the `count` largest-eigenvalue elastic modes, descending by
/// eigenvalue with ties broken by index order.
pub fn dominant_mode_set(spectrum: &Spectrum, count: usize) -> Result<Vec<usize>> {
    let n = spectrum.n();
    if count == 0 || count > n - 1 {
        return Err(Error::invalid(format!(
            "dominant mode count must be in 1..={}, got {count}",
            n - 1
        )));
    }
    let mut idx: Vec<usize> = (1..n).collect();
    idx.sort_by(|&a, &b| {
        spectrum
            .eigenvalue(b)
            .partial_cmp(&spectrum.eigenvalue(a))
            .expect("finite eigenvalues")
            .then(a.cmp(&b))
    });
    idx.truncate(count);
    Ok(idx)
}

/// Eigenvalue-ratio weights λ_k/λ_max for a mode set.
pub fn eigenvalue_weights(spectrum: &Spectrum, mode_set: &[usize]) -> Vec<f64> {
    mode_set
        .iter()
        .map(|&k| spectrum.eigenvalue(k) / spectrum.lambda_max())
        .collect()
}

/// How the baseline inertia of a preset is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum M0Mode {
    /// M₀ = D²/(4λ_max) from the decomposed spectrum.
    Formula,
    /// M₀ taken verbatim from the preset (`M0_value`).
    Explicit,
}

/// Serializable controller preset; the schema used in config files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControllerPreset {
    #[serde(rename = "M0_mode", default = "default_m0_mode")]
    pub m0_mode: M0Mode,
    #[serde(rename = "M0_value", default, skip_serializing_if = "Option::is_none")]
    pub m0_value: Option<f64>,
    pub gain: f64,
    pub mode_count: usize,
    /// Explicit weights aligned with the dominant-mode order (largest
    /// eigenvalue first); omit to use λ_k/λ_max.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
    #[serde(default = "default_filter_cutoff")]
    pub filter_cutoff_hz: f64,
    /// Max |dM/dt| as a fraction of M₀ per second.
    #[serde(default = "default_rate_limit_frac")]
    pub rate_limit_frac: f64,
    /// M_min = margin·M₀.
    #[serde(default = "default_margin")]
    pub margin: f64,
    /// M_max = M_max_frac·M₀.
    #[serde(rename = "M_max_frac", default = "default_m_max_frac")]
    pub m_max_frac: f64,
}

fn default_m0_mode() -> M0Mode {
    M0Mode::Formula
}
fn default_filter_cutoff() -> f64 {
    5.0
}
fn default_rate_limit_frac() -> f64 {
    0.5
}
fn default_margin() -> f64 {
    0.85
}
fn default_m_max_frac() -> f64 {
    2.0
}

impl ControllerPreset {
    /// Resolve against a concrete spectrum into runnable parameters.
    pub fn resolve(&self, spectrum: &Spectrum, damping: f64) -> Result<ControllerConfig> {
        let m0 = match self.m0_mode {
            M0Mode::Formula => baseline_inertia(damping, spectrum.lambda_max()),
            M0Mode::Explicit => self.m0_value.ok_or_else(|| {
                Error::invalid("M0_mode = explicit requires M0_value")
            })?,
        };
        let mode_set = dominant_mode_set(spectrum, self.mode_count)?;
        let weights = match &self.weights {
            Some(w) => {
                if w.len() != mode_set.len() {
                    return Err(Error::invalid(format!(
                        "{} weights given for {} modes",
                        w.len(),
                        mode_set.len()
                    )));
                }
                w.clone()
            }
            None => eigenvalue_weights(spectrum, &mode_set),
        };
        let cfg = ControllerConfig {
            m0,
            gain: self.gain,
            mode_set,
            weights,
            m_min: self.margin * m0,
            m_max: self.m_max_frac * m0,
            rate_limit: self.rate_limit_frac * m0,
            filter_cutoff_hz: self.filter_cutoff_hz,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Per-topology presets with the reported impulse-scenario structures:
    /// dominant-mode counts, explicit weight ladders and gains. These are
    /// reported values, not derived ones.
    pub fn reported(kind: NetworkKind) -> Self {
        let (gain, mode_count, weights) = match kind {
            NetworkKind::RingRegular => (0.10, 2, Some(vec![1.0, 0.8])),
            NetworkKind::ErdosRenyi => (0.10, 3, None),
            NetworkKind::WattsStrogatz => (0.05, 2, Some(vec![1.0, 0.7])),
            NetworkKind::ScaleFree => (0.15, 1, Some(vec![1.0])),
            NetworkKind::SpiderWeb => (0.20, 1, Some(vec![1.0])),
        };
        ControllerPreset {
            m0_mode: M0Mode::Formula,
            m0_value: None,
            gain,
            mode_count,
            weights,
            filter_cutoff_hz: default_filter_cutoff(),
            rate_limit_frac: default_rate_limit_frac(),
            margin: default_margin(),
            m_max_frac: default_m_max_frac(),
        }
    }

    /// Reported baseline inertia values (impulse tables); available for
    /// discrepancy studies via `M0_mode = explicit`.
    pub fn reported_m0_value(kind: NetworkKind) -> f64 {
        match kind {
            NetworkKind::RingRegular => 0.250,
            NetworkKind::ErdosRenyi => 0.320,
            NetworkKind::WattsStrogatz => 0.357,
            NetworkKind::ScaleFree => 0.178,
            NetworkKind::SpiderWeb => 0.100,
        }
    }
}
