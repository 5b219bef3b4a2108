//! At strong coupling the total block entanglement grows logarithmically
//! with block size; fit the slope of total vs ln N_b.
//!
//! Run with: cargo run --release --example area_law

use harmonic_chain::chain_model::{build_correlations, ChainSpec};
use harmonic_chain::fit::fit_line;
use harmonic_chain::{analyze_block, BlockPartition};

fn main() -> harmonic_chain::Result<()> {
    let spec = ChainSpec::from_xi(2048, 12.0)?;
    let table = build_correlations(&spec);

    let mut xs = Vec::new();
    let mut ys = Vec::new();
    println!("{:>6} {:>14}", "N_b", "total");
    for nb in [8usize, 16, 32, 64, 128, 256] {
        let part = BlockPartition::new(spec.n, 0, nb)?;
        let report = analyze_block(&table, &part)?;
        println!("{:>6} {:>14.8}", nb, report.total);
        xs.push((nb as f64).ln());
        ys.push(report.total);
    }

    let fit = fit_line(&xs, &ys)?;
    println!(
        "\ntotal = {:.4} * ln N_b + {:.4}   (expected slope ~ 1/3 at strong coupling)",
        fit.slope, fit.intercept
    );
    Ok(())
}
