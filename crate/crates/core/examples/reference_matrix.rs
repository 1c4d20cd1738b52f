//! The full reference experiment: five topologies × three disturbances ×
//! {constant, adaptive}, with all tables and per-run artifacts emitted to
//! `out/reference-matrix/`.
//!
//! ```text
//! cargo run --release --example reference_matrix
//! ```

use swingnet::xplab::config::ExperimentConfig;
use swingnet::xplab::runner::run_matrix_to_dir;
use swingnet::xplab::tables::write_artifacts;

fn main() -> swingnet::Result<()> {
    let mut cfg = ExperimentConfig::reference();
    cfg.threads = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    let out = std::path::Path::new("out/reference-matrix");
    let outcome = run_matrix_to_dir(&cfg, out)?;
    write_artifacts(&outcome, out)?;
    outcome.print_summary();
    println!(
        "tables -> {}, per-run records -> {}",
        out.join("tables").display(),
        out.join("runs").display()
    );
    if !outcome.all_cells_completed() {
        return Err(swingnet::Error::InvalidParam(format!(
            "{} cells failed",
            outcome.failures.len()
        )));
    }
    Ok(())
}
