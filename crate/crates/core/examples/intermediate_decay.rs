//! Two loops on one path: p(t) decays faster than any power and slower
//! than any exponential.

use wordrank::asymptotics::{intermediate_diagnostics, rank_series};
use wordrank::enumerate::DEFAULT_EXPANSION_CAP;
use wordrank::figures;

fn main() -> wordrank::Result<()> {
    let top: usize = std::env::args()
        .nth(1)
        .map(|s| s.parse().expect("T"))
        .unwrap_or(100_000);
    let series = rank_series(&figures::loops_in_series(), top, DEFAULT_EXPANSION_CAP)?;
    let d = intermediate_diagnostics(&series)?;
    println!("window [{}, {}]", d.window.0, d.window.1);
    for l in &d.lambda_trends {
        println!(
            "t^{} p(t): slope {:+.3} decreasing {}",
            l.lambda, l.slope, l.decreasing
        );
    }
    println!(
        "sup ln(1/p)/sqrt(t) = {:.4}, growth exponent {:+.4}",
        d.sup_ratio, d.ratio_growth
    );
    println!("shape {:?}", d.shape);
    Ok(())
}
