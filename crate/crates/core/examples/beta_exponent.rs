//! The exponent β with r(P(β)) = 1, per-component radii, and the
//! positive-eigenvector criterion.

use wordrank::figures;
use wordrank::spectral::{analyze_beta, powered_radius, SpectralConfig};

fn main() -> wordrank::Result<()> {
    let cfg = SpectralConfig::default();
    for (name, spec) in [
        ("shared_vertex", figures::shared_vertex()),
        ("coupled_pairs", figures::coupled_pairs()),
    ] {
        let a = analyze_beta(&spec, &cfg)?;
        println!(
            "{name}: beta = {:.12}, 1/beta = {:.6}",
            a.beta,
            1.0 / a.beta
        );
        for c in &a.components {
            println!(
                "  component {:?}: r(P_H(beta)) = {:.12}{}",
                c.states,
                c.radius,
                if c.critical { " (critical)" } else { "" }
            );
        }
        println!(
            "  strictly positive left eigenvector: {:?}",
            a.positive_left_eigenvector
        );
        if let Some(y) = &a.eigenvector {
            println!("  eigenvector {y:?}");
        }
    }

    let p = figures::shared_vertex().transient_block();
    println!("r(P(psi)) for the loop-plus-two-cycle chain:");
    for k in 0..=10 {
        let psi = k as f64 / 10.0;
        println!(
            "  psi = {psi:.1}  r = {:.9}",
            powered_radius(&p, psi, &cfg)?
        );
    }
    Ok(())
}
