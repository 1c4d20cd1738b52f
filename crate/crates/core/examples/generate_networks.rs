//! Build the five benchmark topologies and write their canonical JSON.
//!
//! ```text
//! cargo run --example generate_networks
//! ```

use swingnet::netgen::{
    gen_erdos_renyi, gen_ring_regular, gen_scale_free, gen_spider_web, gen_watts_strogatz,
    laplacian, Network,
};
use swingnet::spectral::decompose;

fn describe(net: &Network) -> swingnet::Result<()> {
    let degrees = net.degrees();
    let mean = degrees.iter().sum::<usize>() as f64 / net.n() as f64;
    let spectrum = decompose(&laplacian(net, 1.0)?)?;
    println!(
        "{}: n={}, edges={}, degree min/mean/max = {}/{:.1}/{}, lambda_2 = {:.4}, lambda_max = {:.4}",
        net.kind(),
        net.n(),
        net.edge_count(),
        degrees.iter().min().unwrap(),
        mean,
        degrees.iter().max().unwrap(),
        spectrum.eigenvalue(1),
        spectrum.lambda_max(),
    );
    let dir = std::path::Path::new("out/networks");
    std::fs::create_dir_all(dir)?;
    let path = dir.join(format!("{}-n{}-s{}.json", net.kind(), net.n(), net.seed()));
    std::fs::write(&path, net.to_json())?;
    println!("  -> {}", path.display());
    Ok(())
}

fn main() -> swingnet::Result<()> {
    let seed = 1;
    describe(&gen_ring_regular(100, 4, seed)?)?;
    describe(&gen_erdos_renyi(100, 0.1, seed)?)?;
    describe(&gen_watts_strogatz(100, 4, 0.05, seed)?)?;
    describe(&gen_scale_free(100, 2, seed)?)?;
    describe(&gen_spider_web(100)?)?;
    Ok(())
}
