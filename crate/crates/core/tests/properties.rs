use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wordrank::chain::{compose_parallel, from_letter_probabilities};
use wordrank::enumerate::{count_q_log, enumerate_words, DEFAULT_EXPANSION_CAP, TIE_BAND};
use wordrank::graph::{vertex_on_two_cycles, GraphAnalysis};
use wordrank::selftest::{permute_states, random_chain, random_letter_distribution};
use wordrank::spectral::{
    critical_components, powered_radius, reachable_block, solve_beta, SpectralConfig,
};
use wordrank::{classify, figures, AnalysisConfig, ChainSpec, Regime};

fn chain_from(seed: u64) -> ChainSpec {
    random_chain(&mut ChaCha8Rng::seed_from_u64(seed), 6)
}

fn nu_of(spec: &ChainSpec) -> Option<f64> {
    match classify(spec, &AnalysisConfig::default()).ok()?.regime {
        Regime::Exponential { nu, .. } => Some(nu),
        _ => None,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn letter_chains_are_valid(seed in any::<u64>()) {
        let p = random_letter_distribution(&mut ChaCha8Rng::seed_from_u64(seed), 8);
        let spec = from_letter_probabilities(&p).unwrap();
        prop_assert!(spec.validate().is_ok());
        prop_assert_eq!(spec.n(), p.len() - 1);
    }

    #[test]
    fn parallel_composition_is_valid(a in any::<u64>(), b in any::<u64>(), w in 0.05f64..0.95) {
        let spec = compose_parallel(&[chain_from(a), chain_from(b)], &[w, 1.0 - w]).unwrap();
        prop_assert!(spec.validate().is_ok());
    }

    #[test]
    fn emission_is_monotone_with_bounded_mass(seed in any::<u64>()) {
        let spec = chain_from(seed);
        let words = enumerate_words(&spec, 300, DEFAULT_EXPANSION_CAP).unwrap();
        let mut mass = 0.0;
        for (i, w) in words.iter().enumerate() {
            prop_assert_eq!(w.rank, i as u64 + 1);
            mass += w.prob();
            prop_assert!(mass <= 1.0 + 1e-12);
            if i > 0 {
                prop_assert!(w.log_prob() <= words[i - 1].log_prob() + TIE_BAND);
            }
        }
    }

    #[test]
    fn spectral_radius_decreases_in_psi(seed in any::<u64>()) {
        let spec = chain_from(seed);
        let (p, _) = reachable_block(&spec);
        let cfg = SpectralConfig::default();
        let radii: Vec<f64> = (0..=10)
            .map(|k| powered_radius(&p, k as f64 / 10.0, &cfg).unwrap())
            .collect();
        for pair in radii.windows(2) {
            prop_assert!(pair[1] <= pair[0] + 1e-12, "{:?}", radii);
        }
        prop_assert!(radii[10] <= 1.0 + 1e-12);
    }

    #[test]
    fn beta_is_bracketed_and_positive_iff_two_cycles(seed in any::<u64>()) {
        let spec = chain_from(seed);
        let (p, _) = reachable_block(&spec);
        let analysis = GraphAnalysis::new(&spec);
        let beta = match solve_beta(&p) {
            Err(wordrank::Error::Acyclic) => {
                prop_assert!(!analysis.condensation.tags.iter().any(|t| t.has_cycle()));
                return Ok(());
            }
            r => r.unwrap(),
        };
        let two = vertex_on_two_cycles(&analysis.transient, &analysis.condensation).is_some();
        prop_assert_eq!(beta > 0.0, two);
        prop_assert!((0.0..=1.0).contains(&beta));
        if two {
            let r = powered_radius(&p, beta, &SpectralConfig::default()).unwrap();
            prop_assert!((r - 1.0).abs() < 1e-9, "r(P(beta)) = {}", r);
        }
    }

    #[test]
    fn classification_ignores_state_order(seed in any::<u64>(), shuffle in any::<u64>()) {
        use rand::seq::SliceRandom;
        let spec = chain_from(seed);
        let mut perm: Vec<usize> = (1..=spec.n()).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(shuffle));
        let cfg = AnalysisConfig::default();
        let a = classify(&spec, &cfg).unwrap().regime;
        let b = classify(&permute_states(&spec, &perm), &cfg).unwrap().regime;
        match (&a, &b) {
            (Regime::Power { beta: x, exact_order: e }, Regime::Power { beta: y, exact_order: f }) => {
                prop_assert!((x - y).abs() < 1e-10);
                prop_assert_eq!(e, f);
            }
            (Regime::Exponential { nu: x, .. }, Regime::Exponential { nu: y, .. }) => {
                prop_assert!((x - y).abs() < 1e-12 * x.max(1.0));
            }
            _ => prop_assert_eq!(a.name(), b.name()),
        }
    }

    #[test]
    fn single_critical_component_gives_exact_order(seed in any::<u64>()) {
        let spec = chain_from(seed);
        let report = classify(&spec, &AnalysisConfig::default()).unwrap();
        if let Regime::Power { beta, exact_order } = report.regime {
            let (p, _) = reachable_block(&spec);
            let set = critical_components(&p, beta, &SpectralConfig::default()).unwrap();
            prop_assert!(!set.critical.is_empty());
            if set.critical.len() == 1 {
                prop_assert!(exact_order);
            }
        }
    }

    #[test]
    fn rates_add_under_parallel_composition(a in any::<u64>(), b in any::<u64>()) {
        let (x, y) = (chain_from(a), chain_from(b));
        if let (Some(nx), Some(ny)) = (nu_of(&x), nu_of(&y)) {
            let joint = compose_parallel(&[x, y], &[0.5, 0.5]).unwrap();
            let nj = nu_of(&joint).expect("exponential");
            let expected = 1.0 / (1.0 / nx + 1.0 / ny);
            prop_assert!((nj - expected).abs() < 1e-12 * expected, "{} vs {}", nj, expected);
        }
    }

    #[test]
    fn counting_is_dual_to_ranking(seed in any::<u64>()) {
        let spec = chain_from(seed);
        let words = enumerate_words(&spec, 200, DEFAULT_EXPANSION_CAP).unwrap();
        for w in words.iter().step_by(7) {
            let at = count_q_log(&spec, w.log_prob() - 2.0 * TIE_BAND).unwrap();
            prop_assert!(at >= w.rank);
            let raised = w.log_prob() + 3.0 * TIE_BAND;
            if raised <= 0.0 {
                prop_assert!(count_q_log(&spec, raised).unwrap() < w.rank);
            }
        }
    }
}

#[test]
fn uniform_letter_mass_is_exact() {
    let spec = from_letter_probabilities(&[0.5, 0.5]).unwrap();
    let words = enumerate_words(&spec, 40, DEFAULT_EXPANSION_CAP).unwrap();
    let mut mass = 0.0;
    for w in &words {
        mass += w.prob();
        assert_eq!(mass, 1.0 - 2f64.powi(-(w.rank as i32)));
    }
}

#[test]
fn support_changes_rate_but_not_exponent() {
    let full = figures::two_cycle();
    let half = figures::two_cycle().with_initial(vec![1.0, 0.0]).unwrap();
    assert!((nu_of(&full).unwrap() - 2f64.ln() / 2.0).abs() < 1e-12);
    assert!((nu_of(&half).unwrap() - 2f64.ln()).abs() < 1e-12);
    let bf = solve_beta(&reachable_block(&full).0).unwrap();
    let bh = solve_beta(&reachable_block(&half).0).unwrap();
    assert_eq!(bf, bh);
}
