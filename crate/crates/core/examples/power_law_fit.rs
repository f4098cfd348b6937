//! Enumerate the loop-plus-two-cycle chain and fit the log-log slope of p(t).
//!
//! ```text
//! cargo run --release --example power_law_fit -- [T] [series.csv]
//! ```

use std::fs::File;
use std::io::BufWriter;
use std::time::Instant;

use wordrank::asymptotics::{
    emit_series, fit_power_exponent, rank_series, PowerOverlay, SeriesFormat, WindowPolicy,
};
use wordrank::enumerate::DEFAULT_EXPANSION_CAP;
use wordrank::figures;
use wordrank::spectral::solve_beta;

fn main() -> wordrank::Result<()> {
    let mut args = std::env::args().skip(1);
    let top: usize = args
        .next()
        .map(|s| s.parse().expect("T must be an integer"))
        .unwrap_or(1_000_000);
    let out = args.next();

    let spec = figures::shared_vertex();
    let beta = solve_beta(&spec.transient_block())?;
    let started = Instant::now();
    let series = rank_series(&spec, top, DEFAULT_EXPANSION_CAP)?;
    let elapsed = started.elapsed();
    let fit = fit_power_exponent(&series, &WindowPolicy::default())?;

    println!("beta          {beta:.10}");
    println!("-1/beta       {:.6}", -1.0 / beta);
    println!("fitted slope  {:.6}", fit.slope);
    println!(
        "window        [{}, {}] with {} samples",
        fit.window.0, fit.window.1, fit.samples
    );
    println!("residual      {:.3e}", fit.residual);
    println!("enumerated    {} words in {:.2?}", series.len(), elapsed);

    if let Some(path) = out {
        let overlay = PowerOverlay::fit(&series, beta)?;
        emit_series(
            &series,
            BufWriter::new(File::create(&path)?),
            SeriesFormat::Csv,
            Some(&overlay),
        )?;
        println!("series        {path}");
    }
    Ok(())
}
