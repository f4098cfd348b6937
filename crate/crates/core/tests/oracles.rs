use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wordrank::chain::{from_letter_probabilities, word_probability};
use wordrank::enumerate::{brute_force_words, enumerate_words, DEFAULT_EXPANSION_CAP};
use wordrank::figures;
use wordrank::selftest::{compare_with_oracle, random_chain, random_letter_distribution};
use wordrank::spectral::solve_beta;

#[test]
fn enumeration_agrees_with_exhaustive_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for i in 0..40 {
        let spec = random_chain(&mut rng, 5);
        let c = compare_with_oracle(&spec, 800, 2e5).unwrap();
        assert_eq!(c.mismatch, None, "chain {i}: {}", spec.to_json());
        assert!(c.compared > 0, "chain {i}");
    }
}

#[test]
fn alternating_cycle_words() {
    let spec = figures::two_cycle().with_initial(vec![1.0, 0.0]).unwrap();
    let words = enumerate_words(&spec, 20, DEFAULT_EXPANSION_CAP).unwrap();
    for (t, w) in words.iter().enumerate() {
        let len = t + 1;
        let mut expected: Vec<usize> = (0..len).map(|i| 1 + i % 2).collect();
        expected.push(0);
        assert_eq!(w.word.states, expected);
        assert_eq!(w.prob(), 2f64.powi(-(len as i32)));
        assert_eq!(word_probability(&spec, &w.word.states).unwrap(), w.prob());
    }
}

#[test]
fn finite_chain_is_fully_listed() {
    let spec = figures::acyclic();
    let bf = brute_force_words(&spec, spec.n(), 10_000).unwrap();
    let words = enumerate_words(&spec, 10_000, DEFAULT_EXPANSION_CAP).unwrap();
    assert_eq!(words, bf.words);
    let mass: f64 = words.iter().map(|w| w.prob()).sum();
    assert!((mass - 1.0).abs() < 1e-12);
}

/// Root of `Σ p_i^β = 1` by plain bisection on the scalar equation.
fn scalar_beta(letters: &[f64]) -> f64 {
    let f = |b: f64| letters.iter().map(|p| p.powf(b)).sum::<f64>() - 1.0;
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn letter_chain_beta_matches_scalar_root() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..25 {
        let p = random_letter_distribution(&mut rng, 10);
        let spec = from_letter_probabilities(&p).unwrap();
        let beta = solve_beta(&spec.transient_block()).unwrap();
        assert!((beta - scalar_beta(&p[1..])).abs() < 1e-9, "{p:?}");
    }
}
