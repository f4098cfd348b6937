//! Classify every bundled chain and print the regime with its witnesses.

use wordrank::{classify, figures, AnalysisConfig};

fn main() -> wordrank::Result<()> {
    let cfg = AnalysisConfig::default();
    for (name, spec) in figures::bundled() {
        let report = classify(&spec, &cfg)?;
        println!("== {name}");
        print!("{report}");
    }
    Ok(())
}
