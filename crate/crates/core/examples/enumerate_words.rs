//! Print the most probable words of a chain file, then Q(q) at a few thresholds.
//!
//! ```text
//! cargo run --example enumerate_words -- chains/two_cycle.json 12
//! ```

use wordrank::enumerate::{count_q, enumerate_words, DEFAULT_EXPANSION_CAP};
use wordrank::ChainSpec;

fn main() -> wordrank::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = args
        .next()
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/chains/two_cycle.json").into());
    let top: usize = args.next().map(|s| s.parse().expect("count")).unwrap_or(12);

    let spec = ChainSpec::load(&path)?;
    spec.ensure_valid()?;
    let words = enumerate_words(&spec, top, DEFAULT_EXPANSION_CAP).map_err(|p| p.error)?;
    for w in &words {
        println!(
            "{:>4}  {:.6e}  {}",
            w.rank,
            w.prob(),
            spec.format_word(&w.word.states)
        );
    }
    for q in [0.25, 0.1, 0.01, 0.001] {
        println!("Q({q}) = {}", count_q(&spec, q)?);
    }
    Ok(())
}
