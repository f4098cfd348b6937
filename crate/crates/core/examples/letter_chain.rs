//! Independent letters: every row of the matrix is the letter distribution,
//! and β solves Σ p_i^β = 1 over the non-space letters.

use wordrank::chain::from_letter_probabilities;
use wordrank::spectral::solve_beta;

fn main() -> wordrank::Result<()> {
    for p in [
        vec![0.2, 0.4, 0.4],
        vec![0.18, 0.3, 0.25, 0.15, 0.12],
        vec![0.5, 0.5],
    ] {
        let spec = from_letter_probabilities(&p)?;
        match solve_beta(&spec.transient_block()) {
            Ok(beta) => {
                let check: f64 = p[1..].iter().map(|x| x.powf(beta)).sum();
                println!("{p:?}: beta = {beta:.12}, sum p_i^beta = {check:.12}");
            }
            Err(e) => println!("{p:?}: {e}"),
        }
    }
    Ok(())
}
