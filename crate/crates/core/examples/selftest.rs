//! Property suites over seeded random chains.
//!
//! ```text
//! cargo run --release --example selftest -- [seed] [chains]
//! ```

use wordrank::selftest::{run_selftest, SelftestConfig};

fn main() {
    let mut args = std::env::args().skip(1);
    let seed = args.next().map(|s| s.parse().expect("seed")).unwrap_or(0);
    let chains = args
        .next()
        .map(|s| s.parse().expect("chains"))
        .unwrap_or(100);
    let report = run_selftest(&SelftestConfig {
        seed,
        chains,
        ..Default::default()
    });
    print!("{report}");
    if !report.passed() {
        std::process::exit(2);
    }
}
