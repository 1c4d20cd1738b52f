//! Closed-form single-mode responses.
//!
//! Each elastic mode of the decoupled network obeys
//!
//! ```text
//! M·η̈ + D·η̇ + λ·η = 0,   η(0) = 0,   η̇(0) = γ
//! ```
//!
//! where γ is the disturbance projection onto the mode and an impulse
//! disturbance is realized as the initial rate η̇(0) = γ. These analytic
//! solutions are the oracle the numerical integrator is validated against,
//! and the source of the design-time response bounds used for gain tuning.
//!
//! Useful exact identities (all damping regimes):
//! - the response energy ∫₀^∞ η² dt equals γ²M²/(2λD), so it scales as M²;
//! - |η̇(t)| ≤ |γ| for all t ≥ 0, because ½Mη̇² + ½λη² only dissipates.

use nalgebra::Complex;

use crate::error::{Error, Result};

/// Relative tolerance on the discriminant that classifies a mode as
/// critically damped; inside it the confluent limit form is used instead of
/// the catastrophically cancelling (e^{ρ₁t} − e^{ρ₂t})/(ρ₁ − ρ₂).
const CRITICAL_TOL: f64 = 1e-12;

/// Parameters of one decoupled mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeParams {
    /// Inertia coefficient M > 0.
    pub inertia: f64,
    /// Damping coefficient D > 0.
    pub damping: f64,
    /// Mode eigenvalue λ > 0.
    pub lambda: f64,
    /// Disturbance projection coefficient γ.
    pub gamma: f64,
}

impl ModeParams {
    pub fn new(inertia: f64, damping: f64, lambda: f64, gamma: f64) -> Result<Self> {
        if !(inertia > 0.0 && inertia.is_finite()) {
            return Err(Error::invalid(format!("inertia must be positive, got {inertia}")));
        }
        if !(damping > 0.0 && damping.is_finite()) {
            return Err(Error::invalid(format!("damping must be positive, got {damping}")));
        }
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::invalid(format!("lambda must be positive, got {lambda}")));
        }
        if !gamma.is_finite() {
            return Err(Error::invalid("gamma must be finite"));
        }
        Ok(ModeParams {
            inertia,
            damping,
            lambda,
            gamma,
        })
    }

    /// Discriminant Δ = D² − 4Mλ of the characteristic polynomial.
    pub fn discriminant(&self) -> f64 {
        self.damping * self.damping - 4.0 * self.inertia * self.lambda
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DampingRegime {
    Overdamped,
    Critical,
    Underdamped,
}

/// Roots of Mρ² + Dρ + λ = 0 with the regime classification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharRoots {
    pub rho1: Complex<f64>,
    pub rho2: Complex<f64>,
    pub discriminant: f64,
    pub regime: DampingRegime,
}

impl CharRoots {
    /// Largest real part over both roots.
    pub fn max_real_part(&self) -> f64 {
        self.rho1.re.max(self.rho2.re)
    }
}

/// Characteristic roots ρ = (−D ± √(D² − 4Mλ))/(2M).
pub fn characteristic_roots(p: &ModeParams) -> CharRoots {
    let delta = p.discriminant();
    let two_m = 2.0 * p.inertia;
    if delta.abs() < CRITICAL_TOL * p.damping * p.damping {
        let rho = Complex::new(-p.damping / two_m, 0.0);
        CharRoots {
            rho1: rho,
            rho2: rho,
            discriminant: delta,
            regime: DampingRegime::Critical,
        }
    } else if delta > 0.0 {
        let sqrt_delta = delta.sqrt();
        CharRoots {
            rho1: Complex::new((-p.damping + sqrt_delta) / two_m, 0.0),
            rho2: Complex::new((-p.damping - sqrt_delta) / two_m, 0.0),
            discriminant: delta,
            regime: DampingRegime::Overdamped,
        }
    } else {
        let omega_d = (-delta).sqrt() / two_m;
        CharRoots {
            rho1: Complex::new(-p.damping / two_m, omega_d),
            rho2: Complex::new(-p.damping / two_m, -omega_d),
            discriminant: delta,
            regime: DampingRegime::Underdamped,
        }
    }
}

/// Exact impulse response η(t) = γ(e^{ρ₁t} − e^{ρ₂t})/(ρ₁ − ρ₂), evaluated
/// in the real-valued form of the active regime (damped sine when the roots
/// are conjugate, confluent γ·t·e^{−Dt/(2M)} at the double root).
pub fn impulse_response_exact(p: &ModeParams, t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    let roots = characteristic_roots(p);
    match roots.regime {
        DampingRegime::Overdamped => {
            let r1 = roots.rho1.re;
            let r2 = roots.rho2.re;
            p.gamma * ((r1 * t).exp() - (r2 * t).exp()) / (r1 - r2)
        }
        DampingRegime::Critical => {
            let sigma = roots.rho1.re;
            p.gamma * t * (sigma * t).exp()
        }
        DampingRegime::Underdamped => {
            let sigma = roots.rho1.re;
            let omega = roots.rho1.im;
            p.gamma / omega * (sigma * t).exp() * (omega * t).sin()
        }
    }
}

/// Time derivative η̇(t) of the exact impulse response.
pub fn impulse_response_rate(p: &ModeParams, t: f64) -> f64 {
    if t < 0.0 {
        return 0.0;
    }
    let roots = characteristic_roots(p);
    match roots.regime {
        DampingRegime::Overdamped => {
            let r1 = roots.rho1.re;
            let r2 = roots.rho2.re;
            p.gamma * (r1 * (r1 * t).exp() - r2 * (r2 * t).exp()) / (r1 - r2)
        }
        DampingRegime::Critical => {
            let sigma = roots.rho1.re;
            p.gamma * (1.0 + sigma * t) * (sigma * t).exp()
        }
        DampingRegime::Underdamped => {
            let sigma = roots.rho1.re;
            let omega = roots.rho1.im;
            p.gamma * (sigma * t).exp() * ((omega * t).cos() + sigma / omega * (omega * t).sin())
        }
    }
}

/// Small-inertia approximation η(t) ≈ γM/√(D² − 4Mλ) · e^{−λt/D}: the slow
/// pole survives, the fast e^{−Dt/M} transient is dropped.
///
/// Valid only in the overdamped regime 4Mλ/D² < 1; callers outside it get an
/// error rather than a silently meaningless number.
pub fn impulse_response_small_inertia(p: &ModeParams, t: f64) -> Result<f64> {
    let ratio = 4.0 * p.inertia * p.lambda / (p.damping * p.damping);
    if ratio >= 1.0 {
        return Err(Error::invalid(format!(
            "small-inertia approximation needs 4Mλ/D² < 1, got {ratio:.3}"
        )));
    }
    if t < 0.0 {
        return Ok(0.0);
    }
    let delta = p.discriminant();
    Ok(p.gamma * p.inertia / delta.sqrt() * (-p.lambda * t / p.damping).exp())
}

/// ∫₀ᵀ e^{at} dt for a < 0; `t_end` may be infinite.
fn exp_integral(a: f64, t_end: f64) -> f64 {
    debug_assert!(a < 0.0);
    if t_end.is_infinite() {
        -1.0 / a
    } else {
        ((a * t_end).exp() - 1.0) / a
    }
}

/// ∫₀ᵀ t²e^{at} dt for a < 0; `t_end` may be infinite.
fn t2_exp_integral(a: f64, t_end: f64) -> f64 {
    debug_assert!(a < 0.0);
    let tail = -2.0 / (a * a * a);
    if t_end.is_infinite() {
        tail
    } else {
        let e = (a * t_end).exp();
        e * (t_end * t_end / a - 2.0 * t_end / (a * a) + 2.0 / (a * a * a)) + tail
    }
}

/// Closed-form mode energy ∫₀ᵀ η²(t) dt of the exact impulse response.
/// `t_end` may be `f64::INFINITY`, where the integral equals γ²M²/(2λD).
pub fn mode_energy_integral(p: &ModeParams, t_end: f64) -> f64 {
    if p.gamma == 0.0 || t_end <= 0.0 {
        return 0.0;
    }
    let roots = characteristic_roots(p);
    match roots.regime {
        DampingRegime::Overdamped => {
            let r1 = roots.rho1.re;
            let r2 = roots.rho2.re;
            let c = p.gamma / (r1 - r2);
            c * c
                * (exp_integral(2.0 * r1, t_end) - 2.0 * exp_integral(r1 + r2, t_end)
                    + exp_integral(2.0 * r2, t_end))
        }
        DampingRegime::Critical => {
            let sigma = roots.rho1.re;
            p.gamma * p.gamma * t2_exp_integral(2.0 * sigma, t_end)
        }
        DampingRegime::Underdamped => {
            // η² = (γ/ω)² e^{2σt} (1 − cos 2ωt)/2
            let sigma = roots.rho1.re;
            let omega = roots.rho1.im;
            let a = 2.0 * sigma;
            let w = 2.0 * omega;
            let cos_part = if t_end.is_infinite() {
                -a / (a * a + w * w)
            } else {
                let e = (a * t_end).exp();
                (e * (a * (w * t_end).cos() + w * (w * t_end).sin()) - a) / (a * a + w * w)
            };
            let amp = p.gamma / omega;
            0.5 * amp * amp * (exp_integral(a, t_end) - cos_part)
        }
    }
}

/// Peak of the impulse response: `(t_peak, η(t_peak))`. The first extremum
/// is the global one because the envelope only decays.
pub fn impulse_peak(p: &ModeParams) -> (f64, f64) {
    let roots = characteristic_roots(p);
    let t_peak = match roots.regime {
        DampingRegime::Overdamped => {
            let r1 = roots.rho1.re;
            let r2 = roots.rho2.re;
            (r2 / r1).ln() / (r1 - r2)
        }
        DampingRegime::Critical => -1.0 / roots.rho1.re,
        DampingRegime::Underdamped => {
            // First zero of η̇: tan(ωt) = −ω/σ = ω·2M/D.
            let omega = roots.rho1.im;
            (omega * 2.0 * p.inertia / p.damping).atan() / omega
        }
    };
    (t_peak, impulse_response_exact(p, t_peak))
}

/// Largest |η̇| over t ≥ 0. Equal to |γ| exactly: the mode energy
/// ½Mη̇² + ½λη² starts at ½Mγ² and never increases, so |η̇| ≤ |γ| with
/// equality at t = 0.
pub fn max_abs_response_rate(p: &ModeParams) -> f64 {
    p.gamma.abs()
}
