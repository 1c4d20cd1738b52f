//! Constant vs adaptive inertia on the star network under an impulse along
//! the principal eigenvector; writes both trajectories for plotting.
//!
//! ```text
//! cargo run --example simulate_adaptive
//! ```

use swingnet::controller::{baseline_inertia, ControllerPreset};
use swingnet::dynamics::{
    simulate_with_spectrum, AdaptiveInertia, ConstantInertia, DisturbanceSpec, InertiaPolicy,
    SimParams,
};
use swingnet::metrics::{balanced_fragility, fragility, relaxation_time};
use swingnet::netgen::{gen_spider_web, laplacian};
use swingnet::spectral::decompose;

fn main() -> swingnet::Result<()> {
    let net = gen_spider_web(100)?;
    let lap = laplacian(&net, 1.0)?;
    let spectrum = decompose(&lap)?;
    let sim = SimParams::default_reference();
    let disturbance = DisturbanceSpec::impulse(5.0);

    let m0 = baseline_inertia(sim.damping, spectrum.lambda_max());
    let preset = ControllerPreset::reported(net.kind());
    let adaptive_cfg = preset.resolve(&spectrum, sim.damping)?;

    let mut arms: Vec<(&str, Box<dyn InertiaPolicy>)> = vec![
        ("constant", Box::new(ConstantInertia::new(m0)?)),
        ("adaptive", Box::new(AdaptiveInertia::new(adaptive_cfg)?)),
    ];

    std::fs::create_dir_all("out/trajectories")?;
    let mut h_by_arm = Vec::new();
    for (label, policy) in arms.iter_mut() {
        let traj = simulate_with_spectrum(&lap, &spectrum, &disturbance, &sim, policy.as_mut())?;
        let h_t = fragility(&traj, 5.0)?;
        let h_inf = balanced_fragility(&traj)?;
        let tau = relaxation_time(&traj, h_inf)?;
        let (m_lo, m_hi) = traj.inertia_range();
        println!(
            "{label:<9} H(5s) = {h_t:.6e}, H_inf = {h_inf:.6e}, tau = {tau:.4} s, M in [{m_lo:.5}, {m_hi:.5}]"
        );
        let path = format!("out/trajectories/star-impulse-{label}.csv");
        std::fs::write(&path, traj.to_csv(5))?;
        println!("          -> {path}");
        h_by_arm.push(h_t);
    }

    let reduction = (h_by_arm[0] - h_by_arm[1]) / h_by_arm[0];
    println!(
        "adaptive H(T) change vs constant baseline: {:+.3}% (negative means the adaptive arm accumulated more)",
        reduction * 100.0
    );
    Ok(())
}
