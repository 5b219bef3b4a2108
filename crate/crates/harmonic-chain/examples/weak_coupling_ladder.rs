//! At weak coupling the block modes organize into near-degenerate even/odd
//! pairs whose entanglement falls off exponentially with the depth of the
//! mode's turning point inside the block. Near-vacuum eigenvalues sit far
//! below f64 resolution, so the spectrum is computed in multi-precision
//! arithmetic and compared with the closed-form ladder.
//!
//! Run with: cargo run --release --example weak_coupling_ladder

use harmonic_chain::analytics::weak_mode_entropy;
use harmonic_chain::precise::{block_spectrum, entropy, HpChain};

fn main() -> harmonic_chain::Result<()> {
    let z: f64 = 0.1;
    let xi = z.atanh();
    let chain = HpChain::build(500, xi, 384)?;
    let modes = block_spectrum(&chain, 0, 12)?;

    println!("N = 500, N_b = 12, z = {z}\n");
    println!(
        "{:>4} {:>6} {:>16} {:>16} {:>10}",
        "m", "depth", "entropy", "ladder formula", "rel err"
    );
    for (m, mode) in modes.iter().enumerate().take(6) {
        // Depth of the m-th rung: modes come in even/odd pairs.
        let d = m / 2 + 1;
        let e = entropy(&mode.lambda);
        let fml = weak_mode_entropy(d, z);
        println!(
            "{:>4} {:>6} {:>16.6e} {:>16.6e} {:>10.4}",
            m + 1,
            d,
            e,
            fml,
            (e - fml).abs() / e
        );
    }
    println!(
        "\nEach rung is a factor (z/4)^4 weaker than the one above; the pair\n\
         splitting within a rung is below 1e-3 relative."
    );
    Ok(())
}
