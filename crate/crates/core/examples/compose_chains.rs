//! Build chains from smaller ones and watch the regime change.

use wordrank::chain::{compose_parallel, compose_sequential, Redirect};
use wordrank::{classify, figures, AnalysisConfig};

fn main() -> wordrank::Result<()> {
    let cfg = AnalysisConfig::default();
    let lp = figures::loop_chain();

    let side_by_side = compose_parallel(&[lp.clone(), lp.clone()], &[0.5, 0.5])?;
    println!(
        "two loops in parallel: {}",
        classify(&side_by_side, &cfg)?.regime.name()
    );

    let in_series = compose_sequential(
        &lp,
        &lp,
        &[Redirect {
            from: 1,
            to: 1,
            fraction: 1.0,
        }],
    )?;
    println!(
        "two loops in series:   {}",
        classify(&in_series, &cfg)?.regime.name()
    );

    let b = figures::shared_vertex();
    let chained = compose_sequential(
        &b,
        &b,
        &[Redirect {
            from: 2,
            to: 1,
            fraction: 0.5,
        }],
    )?;
    println!(
        "power chain twice in series:\n{}",
        classify(&chained, &cfg)?
    );

    let mixed = compose_parallel(&[b, figures::coupled_pairs()], &[0.5, 0.5])?;
    println!("power chains in parallel:\n{}", classify(&mixed, &cfg)?);
    Ok(())
}
