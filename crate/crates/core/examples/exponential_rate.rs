//! Exponential decay: theoretical ν against the fitted rate, and the
//! offsets Q(e^{-νx}) − x.

use wordrank::asymptotics::{fit_exponential_rate, q_offsets, rank_series, WindowPolicy};
use wordrank::enumerate::DEFAULT_EXPANSION_CAP;
use wordrank::{classify, figures, AnalysisConfig, Regime};

fn main() -> wordrank::Result<()> {
    let chains = [
        ("parallel_loops", figures::parallel_loops()),
        ("two_cycle", figures::two_cycle()),
        (
            "two_cycle with a = (1, 0)",
            figures::two_cycle().with_initial(vec![1.0, 0.0])?,
        ),
    ];
    for (name, spec) in chains {
        let report = classify(&spec, &AnalysisConfig::default())?;
        let Regime::Exponential { nu, .. } = report.regime else {
            unreachable!("{name} is exponential")
        };
        let rates = report.rates.expect("exponential regime carries rates");
        let series = rank_series(&spec, 10_000, DEFAULT_EXPANSION_CAP)?;
        let fit = fit_exponential_rate(&series, &WindowPolicy::default())?;
        println!("{name}");
        for c in &rates.cycles {
            println!("  cycle {:?} weight {} k {}", c.states, c.weight, c.k);
        }
        println!(
            "  nu = {nu:.10}, fitted = {:.10}, relative error {:.2e}",
            fit.estimate(),
            (fit.estimate() - nu).abs() / nu
        );
        let xs: Vec<f64> = (1..=8).map(|k| 5.0 * k as f64).collect();
        let offsets: Vec<String> = q_offsets(&spec, nu, &xs)?
            .iter()
            .map(|q| format!("{:+.1}", q.offset))
            .collect();
        println!("  Q(e^-nu x) - x for x = 5..40: {}", offsets.join(" "));
    }
    Ok(())
}
