//! The dominant block mode at strong coupling is a collective, center-of-mass
//! style excitation; its symplectic eigenvalue follows sqrt(N_b g_0 h_chi)
//! with h_chi given by a digamma closed form.
//!
//! Run with: cargo run --release --example collective_mode

use harmonic_chain::analytics::{collective_lambda, h_chi};
use harmonic_chain::chain_model::{build_correlations, ChainSpec};
use harmonic_chain::gaussian::{extract_block, symplectic_spectrum};
use harmonic_chain::BlockPartition;

fn main() -> harmonic_chain::Result<()> {
    let spec = ChainSpec::from_xi(2048, 10.0)?;
    let table = build_correlations(&spec);

    println!("N = {}, xi = {}\n", spec.n, spec.xi);
    println!(
        "{:>5} {:>16} {:>16} {:>10}",
        "N_b", "top lambda", "sqrt(Nb g0 hX)", "rel err"
    );
    for nb in [8usize, 16, 32, 64] {
        let part = BlockPartition::new(spec.n, 0, nb)?;
        let cov = extract_block(&table, &part);
        let spectrum = symplectic_spectrum(&cov)?;
        let top = spectrum
            .lambdas
            .iter()
            .cloned()
            .fold(f64::MIN, f64::max);
        let est = collective_lambda(nb, table.g(0));
        println!(
            "{:>5} {:>16.6} {:>16.6} {:>10.4e}",
            nb,
            top,
            est,
            (top - est).abs() / top
        );
    }
    println!("\nh_chi(N_b = 3) = {:.5} (closed form)", h_chi(3));
    Ok(())
}
