//! Tabulate the ground-state correlators of a circular chain and compare
//! them with the infinite-chain closed forms.
//!
//! Run with: cargo run --release --example correlations

use harmonic_chain::chain_model::{build_correlations, g_infinite, h_infinite, ChainSpec};

fn main() -> harmonic_chain::Result<()> {
    let spec = ChainSpec::from_xi(256, 3.0)?;
    let table = build_correlations(&spec);

    println!(
        "chain: N = {}, xi = {}, z = tanh xi = {:.6}, alpha = tanh 2xi = {:.6}",
        spec.n, spec.xi, spec.z, spec.alpha
    );
    println!("purity defect max |(G H)_l - (I/4)_l| = {:.3e}\n", table.purity_defect());

    println!("{:>4} {:>24} {:>24} {:>24} {:>24}", "l", "g_l (N=256)", "g_l (infinite)", "h_l (N=256)", "h_l (infinite)");
    for l in (0..=32).step_by(4) {
        let gi = g_infinite(l, &spec)?;
        let hi = h_infinite(l, &spec)?;
        println!(
            "{:>4} {:>24.16e} {:>24.16e} {:>24.16e} {:>24.16e}",
            l,
            table.g(l),
            gi,
            table.h(l),
            hi
        );
    }

    let scales = spec.regime_scales();
    println!(
        "\nscales: correlation length l_c = {:.3}, N_t = {:.3}, N_c = {:.3}, regime = {:?}",
        scales.l_c,
        scales.n_t,
        scales.n_c,
        spec.regime()
    );
    Ok(())
}
