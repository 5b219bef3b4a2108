//! Residual-mode scaling: at strong coupling, the per-mode entanglement
//! profile ln E_m / N_b approaches a function of m/N_b alone, predicted by a
//! WKB-style quantization of the mode's turning point (zeta = 0.45).
//!
//! Run with: cargo run --release --example scaling_collapse

use harmonic_chain::analytics::{quantize_residual, ResidualModel};
use harmonic_chain::precise::{block_spectrum, ln_entropy, HpChain};

fn main() -> harmonic_chain::Result<()> {
    let chain = HpChain::build(1024, 10.0, 16 * 64 + 256)?;
    println!("N = 1024, xi = 10, zeta = 0.45\n");
    println!(
        "{:>4} {:>4} {:>8} {:>14} {:>14} {:>10}",
        "N_b", "m", "m/N_b", "ln E_m / N_b", "model", "rel err"
    );
    for nb in [16usize, 32, 64] {
        let modes = block_spectrum(&chain, 0, nb)?;
        let model = ResidualModel::new(0.45, nb)?;
        for m in 2..=nb {
            let mu = m as f64 / nb as f64;
            if !(0.1..=0.9).contains(&mu) || m % (nb / 8) != 0 {
                continue;
            }
            let y = ln_entropy(&modes[m - 1].lambda) / nb as f64;
            let q = quantize_residual(m, &model)?;
            println!(
                "{:>4} {:>4} {:>8.4} {:>14.6} {:>14.6} {:>10.4}",
                nb,
                m,
                mu,
                y,
                q.ln_e_over_nb,
                (y - q.ln_e_over_nb).abs() / q.ln_e_over_nb.abs()
            );
        }
        println!();
    }
    println!(
        "The model is asymptotic in N_b: deviations shrink toward the large-m\n\
         end and as N_b grows, but remain large at the strongly entangled end\n\
         for these block sizes."
    );
    Ok(())
}
