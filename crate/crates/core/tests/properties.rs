use proptest::prelude::*;

use seqbayes::{
    enumerate, generate, log_likelihood, map_hypothesis, posterior, replay, Hypothesis, LikelihoodParams, NoiseMode,
    NoiseSpec, PriorModel, Sequence, SpaceConfig,
};

fn default_space() -> SpaceConfig {
    SpaceConfig::default()
}

fn any_hypothesis() -> impl Strategy<Value = Hypothesis> {
    let all = enumerate(&default_space());
    (0..all.len()).prop_map(move |i| all[i])
}

fn increasing_sequence() -> impl Strategy<Value = Vec<u64>> {
    (1u64..500, prop::collection::vec(1u64..2000, 1..8)).prop_map(|(x1, steps)| {
        let mut v = vec![x1];
        for s in steps {
            v.push(v.last().unwrap() + s);
        }
        v
    })
}

fn space_config() -> impl Strategy<Value = SpaceConfig> {
    (
        prop::collection::btree_set(1u64..40, 1..12),
        prop::collection::btree_set(2u64..8, 1..4),
    )
        .prop_map(|(offsets, factors)| SpaceConfig::new(offsets, factors, 99_999).unwrap())
}

proptest! {
    #[test]
    fn enumerate_count_and_order(cfg in space_config()) {
        let hyps = enumerate(&cfg);
        let (n_a, n_p) = (cfg.n_additive(), cfg.n_multiplicative());
        prop_assert_eq!(hyps.len(), n_a + n_p + n_a * n_p);
        prop_assert!(hyps.windows(2).all(|w| w[0] < w[1]));
        prop_assert_eq!(hyps.iter().filter(|h| h.is_compound()).count(), n_a * n_p);
    }

    #[test]
    fn apply_strictly_increases_and_is_monotone(h in any_hypothesis(), x in 1u64..30_000, d in 1u64..1000) {
        if let (Ok(a), Ok(b)) = (h.apply(x, 1 << 40), h.apply(x + d, 1 << 40)) {
            prop_assert!(a > x);
            prop_assert!(b > a);
        }
    }

    #[test]
    fn labels_round_trip(h in any_hypothesis()) {
        let label = h.to_string();
        prop_assert_eq!(label.parse::<Hypothesis>().unwrap(), h);
    }

    #[test]
    fn prior_sums_to_one(cfg in space_config(), beta in 0.0f64..=1.0) {
        let model = PriorModel::for_space(beta, &cfg).unwrap();
        let sum: f64 = enumerate(&cfg).iter().map(|h| model.prior(h)).sum();
        prop_assert!((sum - 1.0).abs() < 1e-12);
    }

    #[test]
    fn posterior_is_normalized_and_sorted(values in increasing_sequence(), beta in 0.0f64..=1.0, sigma2 in 0.1f64..5.0) {
        let seq = Sequence::new(values).unwrap();
        let table = posterior(&seq, &default_space(), beta, &LikelihoodParams::with_sigma2(sigma2)).unwrap();
        let sum: f64 = table.entries.iter().map(|e| e.probability).sum();
        prop_assert!((sum - 1.0).abs() < 1e-12);
        prop_assert!(table.entries.iter().all(|e| (0.0..=1.0).contains(&e.probability)));
        for w in table.entries.windows(2) {
            prop_assert!(
                w[0].probability > w[1].probability
                    || (w[0].probability == w[1].probability && w[0].hypothesis < w[1].hypothesis)
            );
        }
    }

    #[test]
    fn first_element_constant_is_irrelevant(values in increasing_sequence(), beta in 0.0f64..=1.0, k in -50.0f64..50.0) {
        let seq = Sequence::new(values).unwrap();
        let base = LikelihoodParams::with_sigma2(0.8);
        let shifted = LikelihoodParams { first_element_log_weight: k, ..base };
        let a = posterior(&seq, &default_space(), beta, &base).unwrap();
        let b = posterior(&seq, &default_space(), beta, &shifted).unwrap();
        let pa: Vec<(Hypothesis, u64)> = a.entries.iter().map(|e| (e.hypothesis, e.probability.to_bits())).collect();
        let pb: Vec<(Hypothesis, u64)> = b.entries.iter().map(|e| (e.hypothesis, e.probability.to_bits())).collect();
        prop_assert_eq!(pa, pb);
    }

    #[test]
    fn ranking_follows_unnormalized_score(values in increasing_sequence(), beta in 1e-6f64..=1.0, sigma2 in 0.1f64..5.0) {
        let seq = Sequence::new(values).unwrap();
        let space = default_space();
        let params = LikelihoodParams::with_sigma2(sigma2);
        let model = PriorModel::for_space(beta, &space).unwrap();
        let table = posterior(&seq, &space, beta, &params).unwrap();
        let score = |h: &Hypothesis| model.log_prior(h) + log_likelihood(&seq, h, &params).unwrap();
        for w in table.entries.windows(2) {
            if w[0].probability != w[1].probability {
                prop_assert!(score(&w[0].hypothesis) > score(&w[1].hypothesis));
            }
        }
    }

    #[test]
    fn compound_odds_grow_with_beta(values in increasing_sequence(), lo in 1e-6f64..1.0, hi in 1e-6f64..=1.0) {
        let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
        let seq = Sequence::new(values).unwrap();
        let space = default_space();
        let params = LikelihoodParams::default();
        let log_odds = |beta: f64| {
            let t = posterior(&seq, &space, beta, &params).unwrap();
            let compound = t.entries.iter().filter(|e| e.hypothesis.is_compound()).map(|e| e.log_score).fold(f64::NEG_INFINITY, f64::max);
            let primitive = t.entries.iter().filter(|e| !e.hypothesis.is_compound()).map(|e| e.log_score).fold(f64::NEG_INFINITY, f64::max);
            compound - primitive
        };
        prop_assert!(log_odds(hi) >= log_odds(lo) - 1e-9);
    }

    #[test]
    fn progressive_samples_replay_exactly(h in any_hypothesis(), x1 in 1u64..50, length in 2usize..8, sigma in 0.2f64..3.0, seed in any::<u64>()) {
        let noise = NoiseSpec::new(NoiseMode::Progressive, sigma, seed).unwrap();
        if let Ok(sample) = generate(&h, x1, length, &noise, 99_999) {
            prop_assert!(sample.values.windows(2).all(|w| w[1] > w[0]));
            let trace = sample.noise_trace.clone().unwrap();
            prop_assert_eq!(trace.len(), length - 1);
            for (j, w) in sample.values.windows(2).enumerate() {
                prop_assert_eq!(w[1] as i128, h.step(w[0]) as i128 + trace[j] as i128);
            }
            prop_assert_eq!(replay(&h, x1, &trace).unwrap().values, sample.values.clone());
            prop_assert_eq!(generate(&h, x1, length, &noise, 99_999).unwrap(), sample);
        }
    }

    #[test]
    fn stationary_samples_are_increasing(h in any_hypothesis(), x1 in 1u64..50, length in 2usize..8, seed in any::<u64>()) {
        let noise = NoiseSpec::new(NoiseMode::Stationary, 0.8, seed).unwrap();
        if let Ok(sample) = generate(&h, x1, length, &noise, 99_999) {
            prop_assert!(sample.values.windows(2).all(|w| w[1] > w[0]));
            prop_assert_eq!(sample.noise_trace.as_ref().unwrap().len(), length);
            prop_assert_eq!(generate(&h, x1, length, &noise, 99_999).unwrap(), sample);
        }
    }
}

#[test]
fn noiseless_sequences_identify_their_rule() {
    let space = default_space();
    let mut checked = 0;
    for h in enumerate(&space) {
        for x1 in 2..=10 {
            for length in 5..=7 {
                let Ok(sample) = generate(&h, x1, length, &NoiseSpec::none(), space.n_max()) else {
                    continue;
                };
                let seq = sample.sequence().unwrap();
                let table = posterior(&seq, &space, 1.0, &LikelihoodParams::default()).unwrap();
                assert_eq!(map_hypothesis(&table).unwrap(), h, "{seq}");
                checked += 1;
            }
        }
    }
    assert!(checked > 800, "only {checked} sequences stayed in range");
}
