//! Command-line interface. The binary is a thin wrapper over this function;
//! every subcommand composes documented library operations.
//!
//! Exit codes: 0 success, 1 validation/runtime failure, 2 usage error.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::controller::{
    gain_bound_rate, gain_bound_stability, tune_gain, ControllerPreset, DEFAULT_GAIN_SAFETY,
};
use crate::dynamics::DisturbanceKind;
use crate::error::{Error, Result};
use crate::metrics::NetworkMeta;
use crate::modal::{impulse_peak, max_abs_response_rate, ModeParams};
use crate::netgen::{laplacian, NetworkKind};
use crate::spectral::decompose;
use crate::xplab::config::{
    ControllerChoice, DirectionConfig, DisturbanceConfig, ExperimentConfig, NetworkSpecConfig,
};
use crate::xplab::runner::{comparisons_from_records, run_matrix_to_dir, run_single};
use crate::xplab::tables::{load_records, write_artifacts};

#[derive(Parser, Debug)]
#[command(
    name = "swingnet",
    version,
    about = "Adaptive inertia control on oscillator networks: generators, spectra, simulations, experiment matrices"
)]
struct Cli {
    /// Experiment config TOML (defaults to the built-in reference experiment).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Override the seed list with a single seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory (default: config's output_dir, "out").
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Parallelism degree for matrix runs.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Integrator step override (s).
    #[arg(long, global = true)]
    dt: Option<f64>,
    /// Horizon override (s).
    #[arg(long = "t-end", global = true)]
    t_end: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a network and write its canonical JSON.
    Generate(NetworkArgs),
    /// Write the Laplacian eigenvalue CSV of a network.
    Spectrum {
        #[command(flatten)]
        network: NetworkArgs,
        /// Also dump the full eigenvector matrix (n×n payload).
        #[arg(long)]
        eigenvectors: bool,
    },
    /// Single run: trajectory CSV plus report JSON.
    Simulate {
        #[command(flatten)]
        network: NetworkArgs,
        #[arg(long, value_enum, default_value_t = DisturbanceArg::Impulse)]
        disturbance: DisturbanceArg,
        #[arg(long, value_enum, default_value_t = ControllerArg::Constant)]
        controller: ControllerArg,
        #[arg(long, default_value_t = 1.0)]
        amplitude: f64,
        /// principal | uniform | node:<i>
        #[arg(long, default_value = "principal")]
        direction: String,
        /// Number of largest-eigenvalue modal traces in the trajectory CSV.
        #[arg(long, default_value_t = 5)]
        top_modes: usize,
        /// Dump every modal coordinate and node state.
        #[arg(long)]
        full_state: bool,
    },
    /// Print M0, both gain bounds and the tuned gain for a network.
    Tune {
        #[command(flatten)]
        network: NetworkArgs,
        #[arg(long, default_value_t = DEFAULT_GAIN_SAFETY)]
        safety: f64,
    },
    /// Run the full experiment matrix and emit all artifacts.
    Matrix {
        /// Use the reported per-topology M0 values instead of D²/(4λ_max).
        #[arg(long)]
        reported_m0: bool,
    },
    /// Re-render tables from stored run records.
    Report,
}

#[derive(Args, Debug, Clone)]
struct NetworkArgs {
    /// ring | er | sw | sf | star
    #[arg(long, value_enum, default_value_t = NetworkArg::Star)]
    network: NetworkArg,
    #[arg(long, default_value_t = 100)]
    n: usize,
    /// Lattice degree (ring, sw).
    #[arg(long, default_value_t = 4)]
    degree: usize,
    /// Edge probability (er).
    #[arg(long, default_value_t = 0.1)]
    p: f64,
    /// Rewiring probability (sw).
    #[arg(long, default_value_t = 0.05)]
    p_rewire: f64,
    /// Attachment count (sf).
    #[arg(long, default_value_t = 2)]
    m_attach: usize,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum NetworkArg {
    Ring,
    Er,
    Sw,
    Sf,
    Star,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum DisturbanceArg {
    Impulse,
    Monotonic,
    Oscillatory,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum ControllerArg {
    Constant,
    Adaptive,
}

impl NetworkArgs {
    fn to_spec(&self) -> NetworkSpecConfig {
        let kind = match self.network {
            NetworkArg::Ring => NetworkKind::RingRegular,
            NetworkArg::Er => NetworkKind::ErdosRenyi,
            NetworkArg::Sw => NetworkKind::WattsStrogatz,
            NetworkArg::Sf => NetworkKind::ScaleFree,
            NetworkArg::Star => NetworkKind::SpiderWeb,
        };
        let mut spec = NetworkSpecConfig::of_kind(kind);
        spec.n = self.n;
        match kind {
            NetworkKind::RingRegular => spec.d = Some(self.degree),
            NetworkKind::ErdosRenyi => spec.p = Some(self.p),
            NetworkKind::WattsStrogatz => {
                spec.d = Some(self.degree);
                spec.p_rewire = Some(self.p_rewire);
            }
            NetworkKind::ScaleFree => spec.m = Some(self.m_attach),
            NetworkKind::SpiderWeb => {}
        }
        spec
    }
}

fn parse_direction(text: &str) -> Result<DirectionConfig> {
    match text {
        "principal" => Ok(DirectionConfig::Principal),
        "uniform" => Ok(DirectionConfig::Uniform),
        other => {
            if let Some(node) = other.strip_prefix("node:") {
                let i: usize = node
                    .parse()
                    .map_err(|_| Error::invalid(format!("bad node index in `{other}`")))?;
                Ok(DirectionConfig::Node(i))
            } else {
                Err(Error::invalid(format!(
                    "direction must be principal, uniform or node:<i>, got `{other}`"
                )))
            }
        }
    }
}

/// Entry point shared by the binary and the CLI tests.
pub fn cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let parsed = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    match run(parsed) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::reference(),
    };
    if let Some(seed) = cli.seed {
        cfg.seeds = vec![seed];
    }
    if let Some(threads) = cli.threads {
        cfg.threads = threads;
    }
    if let Some(dt) = cli.dt {
        cfg.sim.dt = dt;
    }
    if let Some(t_end) = cli.t_end {
        cfg.sim.t_end = t_end;
        // A shortened horizon drags the metric window with it.
        cfg.horizon_t = cfg.horizon_t.min(t_end);
    }
    if let Some(out) = &cli.out {
        cfg.output_dir = out.to_string_lossy().into_owned();
    }
    let out_dir = PathBuf::from(&cfg.output_dir);
    let seed = cfg.seeds.first().copied().unwrap_or(1);

    match cli.command {
        Command::Generate(args) => {
            let net = args.to_spec().build(seed)?;
            let label = NetworkMeta::of(&net).label();
            let dir = out_dir.join("networks");
            std::fs::create_dir_all(&dir)?;
            let path = dir.join(format!("{label}.json"));
            std::fs::write(&path, net.to_json())?;
            println!(
                "{label}: {} nodes, {} edges -> {}",
                net.n(),
                net.edge_count(),
                path.display()
            );
            Ok(())
        }
        Command::Spectrum {
            network,
            eigenvectors,
        } => {
            let net = network.to_spec().build(seed)?;
            let label = NetworkMeta::of(&net).label();
            let spectrum = decompose(&laplacian(&net, cfg.sim.coupling)?)?;
            let dir = out_dir.join("spectra");
            std::fs::create_dir_all(&dir)?;
            let path = dir.join(format!("{label}.csv"));
            std::fs::write(&path, spectrum.to_csv())?;
            if eigenvectors {
                let vec_path = dir.join(format!("{label}-eigenvectors.csv"));
                std::fs::write(&vec_path, spectrum.eigenvectors_csv())?;
            }
            println!(
                "{label}: lambda_2 = {}, lambda_max = {} -> {}",
                spectrum.eigenvalue(1),
                spectrum.lambda_max(),
                path.display()
            );
            Ok(())
        }
        Command::Simulate {
            network,
            disturbance,
            controller,
            amplitude,
            direction,
            top_modes,
            full_state,
        } => {
            cfg.networks = vec![network.to_spec()];
            cfg.disturbances = vec![DisturbanceConfig {
                kind: match disturbance {
                    DisturbanceArg::Impulse => DisturbanceKind::Impulse,
                    DisturbanceArg::Monotonic => DisturbanceKind::MonotonicDecay,
                    DisturbanceArg::Oscillatory => DisturbanceKind::OscillatoryDecay,
                },
                amplitude,
                direction: parse_direction(&direction)?,
            }];
            cfg.controllers = match controller {
                ControllerArg::Constant => vec![ControllerChoice::constant()],
                ControllerArg::Adaptive => {
                    // run_single needs no baseline pairing; keep one arm.
                    let mut adaptive = ControllerChoice::adaptive();
                    adaptive.name = "adaptive".into();
                    vec![ControllerChoice::constant(), adaptive]
                }
            };
            let controller_index = match controller {
                ControllerArg::Constant => 0,
                ControllerArg::Adaptive => 1,
            };
            let (record, traj) = run_single(&cfg, 0, 0, controller_index, seed)?;
            let runs_dir = out_dir.join("runs");
            let traj_dir = out_dir.join("trajectories");
            std::fs::create_dir_all(&runs_dir)?;
            std::fs::create_dir_all(&traj_dir)?;
            let report_path = runs_dir.join(format!("{}.json", record.cell));
            std::fs::write(&report_path, serde_json::to_string_pretty(&record)?)?;
            let csv = if full_state {
                traj.to_csv_full()
            } else {
                traj.to_csv(top_modes)
            };
            std::fs::write(traj_dir.join(format!("{}.csv", record.cell)), csv)?;
            println!(
                "{}: H(T={}) = {}, H_inf = {}, tau = {} s, max Re(rho) = {} -> {}",
                record.cell,
                record.report.horizon_t,
                record.report.h_t,
                record.report.h_inf,
                record.report.tau,
                record.report.max_real_part,
                report_path.display()
            );
            Ok(())
        }
        Command::Tune { network, safety } => {
            let net = network.to_spec().build(seed)?;
            let label = NetworkMeta::of(&net).label();
            let spectrum = decompose(&laplacian(&net, cfg.sim.coupling)?)?;
            let preset = ControllerPreset::reported(net.kind());
            let ctrl = preset.resolve(&spectrum, cfg.sim.damping)?;
            // Design-time response bounds from the analytic mode forms for a
            // unit impulse along the principal eigenvector.
            let principal = spectrum.n() - 1;
            let mut eta_max = Vec::new();
            let mut eta_dot_max = Vec::new();
            for &mode in &ctrl.mode_set {
                let gamma = if mode == principal { 1.0 } else { 0.0 };
                if gamma == 0.0 {
                    eta_max.push(0.0);
                    eta_dot_max.push(0.0);
                    continue;
                }
                let p = ModeParams::new(ctrl.m0, cfg.sim.damping, spectrum.eigenvalue(mode), gamma)?;
                eta_max.push(impulse_peak(&p).1.abs());
                eta_dot_max.push(max_abs_response_rate(&p));
            }
            let stab = gain_bound_stability(ctrl.m_max, ctrl.m0, &ctrl.weights, &eta_max);
            let rate = gain_bound_rate(ctrl.rate_limit, &ctrl.weights, &eta_dot_max);
            println!("network: {label}");
            println!("lambda_max: {}", spectrum.lambda_max());
            println!("M0: {}", ctrl.m0);
            println!("M_range: [{}, {}]", ctrl.m_min, ctrl.m_max);
            println!("stability_gain_bound: {stab}");
            println!("rate_gain_bound: {rate}");
            match tune_gain(stab, rate, safety) {
                Ok(k) => println!("tuned_gain: {k}"),
                Err(_) => println!("tuned_gain: unbounded (set an explicit gain)"),
            }
            Ok(())
        }
        Command::Matrix { reported_m0 } => {
            if reported_m0 {
                cfg.use_reported_m0 = true;
            }
            let outcome = run_matrix_to_dir(&cfg, &out_dir)?;
            write_artifacts(&outcome, &out_dir)?;
            outcome.print_summary();
            if !outcome.all_cells_completed() {
                return Err(Error::invalid(format!(
                    "{} of {} cells failed; see summary.json",
                    outcome.failures.len(),
                    outcome.expected_cells
                )));
            }
            Ok(())
        }
        Command::Report => {
            let mut records = load_records(&out_dir)?;
            if records.is_empty() {
                return Err(Error::invalid(format!(
                    "no run records under {}",
                    out_dir.join("runs").display()
                )));
            }
            let config_hash = records[0].config_hash.clone();
            let comparisons = comparisons_from_records(&mut records)?;
            let tables_dir = out_dir.join("tables");
            std::fs::create_dir_all(&tables_dir)?;
            std::fs::write(
                tables_dir.join("inertia.csv"),
                crate::xplab::tables::emit_inertia_table(&records, &config_hash)?.emit()?,
            )?;
            std::fs::write(
                tables_dir.join("comparison.csv"),
                crate::xplab::tables::emit_comparison_table(&comparisons, &config_hash)?.emit()?,
            )?;
            std::fs::write(
                tables_dir.join("summary.csv"),
                crate::xplab::tables::emit_summary_table(&comparisons, &config_hash)?.emit()?,
            )?;
            println!(
                "re-rendered tables for {} records -> {}",
                records.len(),
                tables_dir.display()
            );
            Ok(())
        }
    }
}
