//! Acceptance suite: one test per criterion, each printing a pass line with
//! the measured quantity so the run log doubles as a report.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use swingnet::controller::{
    adaptive_inertia, baseline_inertia, ControllerConfig, ControllerPreset, ControllerState,
};
use swingnet::dynamics::{
    simulate, simulate_with_spectrum, AdaptiveInertia, ConstantInertia, DisturbanceDirection,
    DisturbanceKind, DisturbanceSpec, SimParams,
};
use swingnet::metrics::{balanced_fragility, stability_scan, DEFAULT_STABILITY_THRESHOLD};
use swingnet::modal::{
    characteristic_roots, impulse_response_exact, impulse_response_small_inertia, ModeParams,
};
use swingnet::netgen::{gen_ring_regular, gen_spider_web, laplacian, NetworkKind};
use swingnet::spectral::decompose;
use swingnet::xplab::config::ExperimentConfig;
use swingnet::xplab::runner::run_matrix_to_dir;
use swingnet::xplab::tables::write_artifacts;

fn pass(criterion: usize, detail: &str) {
    println!("criterion {criterion}: PASS - {detail}");
}

/// Two-node path: single elastic mode with eigenvalue 2K.
fn single_mode_system(lambda: f64) -> swingnet::netgen::LaplacianMatrix {
    let net = gen_spider_web(2).unwrap();
    laplacian(&net, lambda / 2.0).unwrap()
}

#[test]
fn criterion_01_spectral_correctness() {
    let started = Instant::now();

    let star = gen_spider_web(100).unwrap();
    let l = laplacian(&star, 1.0).unwrap();
    let spec = decompose(&l).unwrap();
    assert!(spec.eigenvalue(0).abs() < 1e-8);
    for k in 1..99 {
        assert!((spec.eigenvalue(k) - 1.0).abs() < 1e-8, "star lambda_{k}");
    }
    assert!((spec.eigenvalue(99) - 100.0).abs() < 1e-8);

    let cycle = gen_ring_regular(8, 2, 0).unwrap();
    let spec8 = decompose(&laplacian(&cycle, 1.0).unwrap()).unwrap();
    let mut expected: Vec<f64> = (0..8)
        .map(|j| 2.0 * (1.0 - (2.0 * std::f64::consts::PI * j as f64 / 8.0).cos()))
        .collect();
    expected.sort_by(|a, b| a.partial_cmp(b).unwrap());
    for (k, e) in expected.iter().enumerate() {
        assert!((spec8.eigenvalue(k) - e).abs() < 1e-10, "cycle lambda_{k}");
    }

    let v = spec.eigenvectors();
    let gram = v.transpose() * v;
    let diag = v.transpose() * l.values() * v;
    for i in 0..100 {
        for j in 0..100 {
            let id = if i == j { 1.0 } else { 0.0 };
            assert!((gram[(i, j)] - id).abs() < 1e-10, "VtV[{i},{j}]");
            if i != j {
                assert!(diag[(i, j)].abs() < 1e-8, "VtLV[{i},{j}]");
            }
        }
    }

    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    pass(1, &format!("star/cycle spectra and orthonormality in {elapsed:?}"));
}

#[test]
fn criterion_02_analytic_vs_numeric_oracle() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst: f64 = 0.0;
    for i in 0..20 {
        let damping = rng.gen_range(0.4..1.5);
        let lambda = rng.gen_range(0.5..8.0);
        let critical = damping * damping / (4.0 * lambda);
        let inertia = match i % 3 {
            0 => rng.gen_range(0.2..0.7) * critical,
            1 => critical,
            _ => rng.gen_range(1.5..4.0) * critical,
        };
        let gamma = rng.gen_range(0.3..2.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };

        let p = ModeParams::new(inertia, damping, lambda, gamma).unwrap();
        let slow = characteristic_roots(&p).max_real_part();
        let dt = 1e-4;
        let steps = ((6.0 / slow.abs()).clamp(1.0, 20.0) / dt).ceil() as usize;
        let sim = SimParams {
            damping,
            coupling: lambda / 2.0,
            dt,
            t_end: steps as f64 * dt,
            control_period: dt,
        };
        let l = single_mode_system(lambda);
        let dist = DisturbanceSpec {
            kind: DisturbanceKind::Impulse,
            amplitude: gamma,
            direction: DisturbanceDirection::PrincipalEigenvector,
        };
        let mut policy = ConstantInertia::new(inertia).unwrap();
        let traj = simulate(&l, &dist, &sim, &mut policy).unwrap();
        for (j, &t) in traj.times().iter().enumerate() {
            let err = (traj.eta()[j][1] - impulse_response_exact(&p, t)).abs();
            worst = worst.max(err);
        }
        assert!(
            worst < 1e-6,
            "triple {i} (M={inertia:.3e}, D={damping:.3}, lambda={lambda:.3}): err {worst:.2e}"
        );
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "took {elapsed:?}");
    pass(2, &format!("20 triples, max abs error {worst:.2e} in {elapsed:?}"));
}

#[test]
fn criterion_03_small_inertia_approximation() {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for i in 0..50 {
        let damping = 0.4 + 0.03 * i as f64;
        let lambda = 0.8 + 0.35 * i as f64;
        let ratio = 0.005 + 0.044 * ((i % 10) as f64 + 1.0) / 10.0; // 4Mλ/D² < 0.05
        let inertia = ratio * damping * damping / (4.0 * lambda);
        assert!(4.0 * inertia * lambda / (damping * damping) < 0.05);
        let p = ModeParams::new(inertia, damping, lambda, 1.0).unwrap();
        // Evaluate across the decay window, past the fast transient.
        for frac in [0.5, 1.0, 2.0, 3.0] {
            let t = frac * damping / lambda;
            let exact = impulse_response_exact(&p, t);
            let approx = impulse_response_small_inertia(&p, t).unwrap();
            let rel = ((approx - exact) / exact).abs();
            worst = worst.max(rel);
            assert!(rel < 0.05, "triple {i} at t={t:.3}: rel err {rel:.4}");
        }
        count += 1;
    }
    assert_eq!(count, 50);
    pass(3, &format!("50-triple sweep, worst relative error {:.2}%", worst * 100.0));
}

#[test]
fn criterion_04_energy_scales_as_m_squared() {
    // Impulse runs on the single-mode system across M ∈ [1e−3, 1e−2]·critical.
    let damping = 0.8;
    let lambda = 2.0;
    let critical = damping * damping / (4.0 * lambda);
    let ms: Vec<f64> = [1e-3, 2.15e-3, 4.64e-3, 1e-2]
        .iter()
        .map(|f| f * critical)
        .collect();
    let l = single_mode_system(lambda);
    let mut points = Vec::new();
    for &m in &ms {
        let sim = SimParams {
            damping,
            coupling: lambda / 2.0,
            dt: 1e-5,
            t_end: 4.0,
            control_period: 1e-5,
        };
        let dist = DisturbanceSpec::impulse(1.0);
        let mut policy = ConstantInertia::new(m).unwrap();
        let traj = simulate(&l, &dist, &sim, &mut policy).unwrap();
        let h_inf = balanced_fragility(&traj).unwrap();
        points.push((m.ln(), h_inf.ln()));
    }
    let n = points.len() as f64;
    let sx: f64 = points.iter().map(|p| p.0).sum();
    let sy: f64 = points.iter().map(|p| p.1).sum();
    let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    assert!((slope - 2.0).abs() <= 0.05, "log-log slope {slope}");
    pass(4, &format!("H(inf) vs M log-log slope {slope:.4}"));
}

#[test]
fn criterion_05_critical_damping_at_baseline() {
    // Direct formula pairs plus a measured spectrum.
    for &(damping, lambda_max) in &[(0.8, 16.0), (0.8, 100.0), (1.3, 6.25), (2.0, 1.0)] {
        let m0 = baseline_inertia(damping, lambda_max);
        let delta = damping * damping - 4.0 * m0 * lambda_max;
        assert!(
            delta.abs() <= 1e-9 * damping * damping,
            "D={damping}, lambda={lambda_max}: delta {delta:.2e}"
        );
    }
    let star = gen_spider_web(100).unwrap();
    let spec = decompose(&laplacian(&star, 1.0).unwrap()).unwrap();
    let m0 = baseline_inertia(0.8, spec.lambda_max());
    let delta = 0.8 * 0.8 - 4.0 * m0 * spec.lambda_max();
    assert!(delta.abs() <= 1e-9 * 0.64);
    pass(5, "dominant-mode discriminant vanishes at M0 = D^2/(4*lambda_max)");
}

#[test]
fn criterion_06_controller_contracts() {
    // (a) Bounds and rate limit under adversarial sequences.
    let mut rng = ChaCha8Rng::seed_from_u64(66);
    for _ in 0..200 {
        let m0 = rng.gen_range(0.01..10.0);
        let cfg = ControllerConfig {
            m0,
            gain: rng.gen_range(0.0..100.0),
            mode_set: vec![1],
            weights: vec![1.0],
            m_min: 0.85 * m0,
            m_max: 2.0 * m0,
            rate_limit: 0.5 * m0,
            filter_cutoff_hz: 5.0,
        };
        let mut state = ControllerState::new(&cfg);
        let mut t = 0.0;
        let mut prev: Option<f64> = None;
        for _ in 0..rng.gen_range(2..200) {
            let dt = rng.gen_range(1e-4..0.3);
            t += dt;
            let eta = [0.0, rng.gen_range(0.0..1e9_f64)];
            let m = adaptive_inertia(&cfg, &mut state, &eta, t).unwrap();
            assert!(m >= cfg.m_min && m <= cfg.m_max, "clamp violated: {m}");
            if let Some(p) = prev {
                assert!(
                    (m - p).abs() <= 0.5 * m0 * dt + 1e-12,
                    "rate limit violated: |{m} - {p}| over {dt}"
                );
            }
            prev = Some(m);
        }
    }

    // (b) gain = 0 reproduces the constant-M trajectory bitwise.
    let star = gen_spider_web(40).unwrap();
    let l = laplacian(&star, 1.0).unwrap();
    let spectrum = decompose(&l).unwrap();
    let m0 = baseline_inertia(0.8, spectrum.lambda_max());
    let mut zero_gain_preset = ControllerPreset::reported(NetworkKind::SpiderWeb);
    zero_gain_preset.gain = 0.0;
    let ctrl_cfg = zero_gain_preset.resolve(&spectrum, 0.8).unwrap();
    assert_eq!(ctrl_cfg.m0, m0);
    let sim = SimParams {
        damping: 0.8,
        coupling: 1.0,
        dt: 1e-3,
        t_end: 3.0,
        control_period: 0.01,
    };
    let dist = DisturbanceSpec::impulse(1.0);
    let mut adaptive = AdaptiveInertia::new(ctrl_cfg).unwrap();
    let a = simulate_with_spectrum(&l, &spectrum, &dist, &sim, &mut adaptive).unwrap();
    let mut constant = ConstantInertia::new(m0).unwrap();
    let b = simulate_with_spectrum(&l, &spectrum, &dist, &sim, &mut constant).unwrap();
    assert_eq!(a.len(), b.len());
    for i in 0..a.len() {
        assert_eq!(a.inertia()[i].to_bits(), b.inertia()[i].to_bits(), "M at {i}");
        for k in 0..40 {
            assert_eq!(
                a.theta_dev()[i][k].to_bits(),
                b.theta_dev()[i][k].to_bits(),
                "theta[{k}] at step {i}"
            );
            assert_eq!(
                a.eta()[i][k].to_bits(),
                b.eta()[i][k].to_bits(),
                "eta[{k}] at step {i}"
            );
        }
    }
    pass(6, "clamps/rate limit over 200 adversarial sequences; zero gain bitwise-identical to constant");
}

#[test]
fn criterion_07_negative_real_parts_and_threshold_scan() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..10_000 {
        let p = ModeParams::new(
            10f64.powf(rng.gen_range(-5.0..2.0)),
            10f64.powf(rng.gen_range(-3.0..2.0)),
            10f64.powf(rng.gen_range(-3.0..3.0)),
            1.0,
        )
        .unwrap();
        let roots = characteristic_roots(&p);
        assert!(roots.rho1.re < 0.0 && roots.rho2.re < 0.0, "unstable root for {p:?}");
    }

    // Star preset clears the −0.25 s⁻¹ threshold.
    let star = gen_spider_web(100).unwrap();
    let spec = decompose(&laplacian(&star, 1.0).unwrap()).unwrap();
    let m0 = baseline_inertia(0.8, spec.lambda_max());
    let scan = stability_scan(&spec, 0.8, &[0.85 * m0, m0, 2.0 * m0], DEFAULT_STABILITY_THRESHOLD)
        .unwrap();
    assert!(scan.pass, "star scan failed: {scan:?}");

    // Ring preset misses it at λ₂ — a reported finding, not a failure.
    let ring = gen_ring_regular(100, 4, 0).unwrap();
    let rspec = decompose(&laplacian(&ring, 1.0).unwrap()).unwrap();
    let rm0 = baseline_inertia(0.8, rspec.lambda_max());
    let rscan = stability_scan(&rspec, 0.8, &[rm0], DEFAULT_STABILITY_THRESHOLD).unwrap();
    assert!(!rscan.pass, "ring unexpectedly met the blanket threshold");
    assert!(rscan.max_real_part < 0.0, "ring must still be strictly stable");
    pass(
        7,
        &format!(
            "10^4 random triples stable; star worst root {:.3}; ring finding {:.4} (> {:.2}, reported)",
            scan.max_real_part, rscan.max_real_part, DEFAULT_STABILITY_THRESHOLD
        ),
    );
}

#[test]
fn criterion_08_quiescent_return() {
    let star = gen_spider_web(100).unwrap();
    let l = laplacian(&star, 1.0).unwrap();
    let spectrum = decompose(&l).unwrap();
    let preset = ControllerPreset::reported(NetworkKind::SpiderWeb);
    let cfg = preset.resolve(&spectrum, 0.8).unwrap();
    let m0 = cfg.m0;
    let sim = SimParams {
        damping: 0.8,
        coupling: 1.0,
        dt: 1e-3,
        t_end: 10.0,
        control_period: 0.01,
    };
    let dist = DisturbanceSpec::impulse(5.0);
    let mut policy = AdaptiveInertia::new(cfg).unwrap();
    let traj = simulate_with_spectrum(&l, &spectrum, &dist, &sim, &mut policy).unwrap();

    // The controller must have actually moved.
    let (lo, hi) = traj.inertia_range();
    assert!(hi > m0 * 1.01, "controller never engaged: [{lo}, {hi}]");

    // Find the time the elastic energy settles below 1e−6 for good.
    let mut settle_idx = None;
    for i in (0..traj.len()).rev() {
        if traj.elastic_energy_at(i) >= 1e-6 {
            settle_idx = Some(i + 1);
            break;
        }
    }
    let settle_idx = settle_idx.expect("disturbance must exceed the threshold initially");
    assert!(traj.elastic_energy_at(0) < 1e-6); // starts at rest
    assert!(settle_idx < traj.len(), "energy never settled below 1e-6");
    let settle_t = traj.times()[settle_idx];

    let m_end = *traj.inertia().last().unwrap();
    assert!(
        (m_end - m0).abs() <= 1e-3 * m0,
        "M(10 s) = {m_end} vs M0 = {m0}"
    );
    pass(
        8,
        &format!(
            "energy < 1e-6 from t = {settle_t:.3} s; M(10 s) within {:.4}% of M0",
            (m_end - m0).abs() / m0 * 100.0
        ),
    );
}

#[test]
fn criterion_09_protocol_reproduction() {
    let started = Instant::now();
    let mut cfg = ExperimentConfig::reference();
    cfg.threads = 1;
    let dir_a = tempfile::tempdir().unwrap();
    let outcome_a = run_matrix_to_dir(&cfg, dir_a.path()).unwrap();
    write_artifacts(&outcome_a, dir_a.path()).unwrap();

    cfg.threads = 8;
    let dir_b = tempfile::tempdir().unwrap();
    let outcome_b = run_matrix_to_dir(&cfg, dir_b.path()).unwrap();
    write_artifacts(&outcome_b, dir_b.path()).unwrap();

    assert!(outcome_a.all_cells_completed(), "failures: {:?}", outcome_a.failures);
    assert_eq!(outcome_a.records.len(), 30);
    assert_eq!(outcome_a.comparisons.len(), 15);

    // Byte-identical artifacts across thread counts.
    let files_a = collect_files(dir_a.path());
    let files_b = collect_files(dir_b.path());
    assert_eq!(files_a.keys().collect::<Vec<_>>(), files_b.keys().collect::<Vec<_>>());
    for (rel, bytes_a) in &files_a {
        assert_eq!(
            Some(bytes_a),
            files_b.get(rel),
            "artifact {rel} differs between thread counts"
        );
    }

    // Repeat determinism with the same thread count.
    let dir_c = tempfile::tempdir().unwrap();
    let outcome_c = run_matrix_to_dir(&cfg, dir_c.path()).unwrap();
    write_artifacts(&outcome_c, dir_c.path()).unwrap();
    assert_eq!(outcome_b.records, outcome_c.records);

    // Every comparison row carries a reduction rate; report the soft target.
    let mut in_band = 0;
    let mut negative = 0;
    for c in &outcome_a.comparisons {
        assert!(c.h_reduction.is_finite());
        if (0.19..=0.25).contains(&c.h_reduction) {
            in_band += 1;
        }
        if c.h_reduction < 0.0 {
            negative += 1;
        }
    }
    // Sign disagreements must surface as findings with the config hash.
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir_a.path().join("summary.json")).unwrap())
            .unwrap();
    let findings = summary["findings"].as_array().unwrap();
    if negative > 0 {
        let tagged = findings
            .iter()
            .filter(|f| {
                let s = f.as_str().unwrap();
                s.contains("discrepancy") && s.contains(&outcome_a.config_hash)
            })
            .count();
        assert!(tagged >= negative, "negative reductions must be flagged findings");
    }

    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 300.0, "matrix took {elapsed:?}");
    println!(
        "criterion 9 soft target (reported, not asserted): {in_band}/15 H reductions inside the 19-25% band; {negative} negative (flagged in summary.json)"
    );
    for line in summary["networks"].as_array().unwrap() {
        println!(
            "  {}: avg H reduction {:.2}%",
            line["network"].as_str().unwrap(),
            line["avg_H_reduction_pct"].as_f64().unwrap()
        );
    }
    pass(
        9,
        &format!("30 runs, 15 comparisons, byte-identical across threads/repeats, 3 tables, in {elapsed:?}"),
    );
}

fn collect_files(root: &std::path::Path) -> std::collections::BTreeMap<String, Vec<u8>> {
    let mut out = std::collections::BTreeMap::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for entry in std::fs::read_dir(&dir).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                let rel = path.strip_prefix(root).unwrap().to_string_lossy().into_owned();
                out.insert(rel, std::fs::read(&path).unwrap());
            }
        }
    }
    out
}

/// Large-grid smoke test on the same code path (500-node random network);
/// not part of the default run for runtime reasons: `--ignored` opts in.
#[test]
#[ignore]
fn large_grid_500_nodes_same_code_path() {
    let net = swingnet::netgen::gen_erdos_renyi(500, 0.05, 1).unwrap();
    let l = laplacian(&net, 1.0).unwrap();
    let spectrum = decompose(&l).unwrap();
    assert!(spectrum.eigenvalue(1) > 0.0);
    let preset = ControllerPreset::reported(NetworkKind::ErdosRenyi);
    let cfg = preset.resolve(&spectrum, 0.8).unwrap();
    let sim = SimParams {
        damping: 0.8,
        coupling: 1.0,
        dt: 1e-3,
        t_end: 5.0,
        control_period: 0.01,
    };
    let mut policy = AdaptiveInertia::new(cfg).unwrap();
    let traj = simulate_with_spectrum(
        &l,
        &spectrum,
        &DisturbanceSpec::impulse(1.0),
        &sim,
        &mut policy,
    )
    .unwrap();
    let h_inf = balanced_fragility(&traj).unwrap();
    assert!(h_inf > 0.0 && h_inf.is_finite());
    let scan = stability_scan(
        &spectrum,
        0.8,
        &[traj.inertia_range().0, traj.inertia_range().1],
        DEFAULT_STABILITY_THRESHOLD,
    )
    .unwrap();
    assert!(scan.max_real_part < 0.0);
    println!(
        "500-node grid: H_inf = {h_inf:.3e}, worst root {:.4} s^-1, threshold verdict {}",
        scan.max_real_part,
        if scan.pass { "pass" } else { "finding" }
    );
}

#[test]
fn criterion_10_performance() {
    // Single run n=100, t_end=10 s, dt=1 ms under 5 s.
    let star = gen_spider_web(100).unwrap();
    let l = laplacian(&star, 1.0).unwrap();
    let spectrum = decompose(&l).unwrap();
    let m0 = baseline_inertia(0.8, spectrum.lambda_max());
    let sim = SimParams {
        damping: 0.8,
        coupling: 1.0,
        dt: 1e-3,
        t_end: 10.0,
        control_period: 0.01,
    };
    let dist = DisturbanceSpec::impulse(1.0);
    let mut policy = ConstantInertia::new(m0).unwrap();
    let started = Instant::now();
    let traj = simulate_with_spectrum(&l, &spectrum, &dist, &sim, &mut policy).unwrap();
    let run_time = started.elapsed();
    assert_eq!(traj.len(), 10_001);
    assert!(run_time.as_secs_f64() < 5.0, "single run took {run_time:?}");

    // Controller update under 0.1 ms per call with every elastic mode fed
    // back at n=100.
    let mode_set: Vec<usize> = (1..100).collect();
    let weights = swingnet::controller::eigenvalue_weights(&spectrum, &mode_set);
    let cfg = ControllerConfig {
        m0,
        gain: 0.1,
        mode_set,
        weights,
        m_min: 0.85 * m0,
        m_max: 2.0 * m0,
        rate_limit: 0.5 * m0,
        filter_cutoff_hz: 5.0,
    };
    let mut state = ControllerState::new(&cfg);
    let eta: Vec<f64> = (0..100).map(|k| (k as f64 * 0.37).sin().abs() * 1e-3).collect();
    let calls = 10_000;
    let started = Instant::now();
    let mut t = 0.0;
    for _ in 0..calls {
        t += 0.01;
        let _ = adaptive_inertia(&cfg, &mut state, &eta, t).unwrap();
    }
    let per_call = started.elapsed().as_secs_f64() / calls as f64;
    assert!(per_call < 1e-4, "controller update {per_call:.2e} s per call");
    pass(
        10,
        &format!(
            "single run {run_time:?}; controller update {:.2} us per call",
            per_call * 1e6
        ),
    );
}
