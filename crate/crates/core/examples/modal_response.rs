//! Closed-form single-mode impulse responses across the damping regimes,
//! with the small-inertia approximation error and the M² energy law.
//!
//! ```text
//! cargo run --example modal_response
//! ```

use swingnet::modal::{
    characteristic_roots, impulse_peak, impulse_response_exact, impulse_response_small_inertia,
    mode_energy_integral, ModeParams,
};

fn main() -> swingnet::Result<()> {
    println!("regime       M        D     lambda   roots                         peak(t, eta)");
    for &(m, d, lambda) in &[
        (1.0, 3.0, 2.0),   // overdamped: (s+1)(s+2)
        (0.08, 0.8, 2.0),  // critical: M = D^2/(4 lambda)
        (1.0, 0.2, 4.0),   // underdamped
    ] {
        let p = ModeParams::new(m, d, lambda, 1.0)?;
        let roots = characteristic_roots(&p);
        let (t_peak, peak) = impulse_peak(&p);
        println!(
            "{:?}  {:<6} {:<5} {:<7} rho1 = {:.3}{:+.3}i, rho2 = {:.3}{:+.3}i  ({:.3}, {:.4})",
            roots.regime,
            m,
            d,
            lambda,
            roots.rho1.re,
            roots.rho1.im,
            roots.rho2.re,
            roots.rho2.im,
            t_peak,
            peak
        );
    }

    // Small-inertia approximation quality across 4Mλ/D².
    println!("\n4M*lambda/D^2   rel error of the slow-pole approximation at t = D/lambda");
    let d = 0.8;
    let lambda = 4.0;
    for &ratio in &[0.2, 0.1, 0.05, 0.01] {
        let m = ratio * d * d / (4.0 * lambda);
        let p = ModeParams::new(m, d, lambda, 1.0)?;
        let t = d / lambda;
        let exact = impulse_response_exact(&p, t);
        let approx = impulse_response_small_inertia(&p, t)?;
        println!(
            "{ratio:<13}   {:.3}%",
            ((approx - exact) / exact).abs() * 100.0
        );
    }

    // Mode energy is exactly gamma^2 M^2/(2 lambda D): doubling M quadruples it.
    println!("\nM          integral of eta^2 over [0, inf)");
    for &m in &[0.001, 0.002, 0.004] {
        let p = ModeParams::new(m, d, lambda, 1.0)?;
        println!("{m:<9}  {:.6e}", mode_energy_integral(&p, f64::INFINITY));
    }
    Ok(())
}
