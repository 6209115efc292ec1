mod common;

use approx::assert_abs_diff_eq;
use eqm_core::inference::{
    credibility_set, effects_equal, infer, mle, posterior_repeated, posterior_single_shot, PosteriorDistribution,
};
use eqm_core::measure::{likelihood_effect, resolution_from_evariable, sample_data, DensityOperator, StatisticalModel};
use eqm_core::spin::{question_answer_state, Direction, HalfInt, SpinSystem};
use eqm_core::Error;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn pm() -> Vec<String> {
    vec!["+".into(), "-".into()]
}

#[test]
fn repeated_plus_matches_closed_form() {
    let model = StatisticalModel::symmetric_noise(pm(), 0.1).unwrap();
    let prior = PosteriorDistribution::uniform(pm()).unwrap();
    let post = posterior_repeated(&prior, &model, &["+"; 10]).unwrap();
    let expected = 0.9f64.powi(10) / (0.9f64.powi(10) + 0.1f64.powi(10));
    assert_abs_diff_eq!(post.weight("+").unwrap(), expected, epsilon = 1e-12);
}

#[test]
fn mle_is_consistent_across_seeds() {
    let q = SpinSystem::new(1).unwrap();
    let z = resolution_from_evariable(&q, &Direction::z_axis()).unwrap().resolution;
    let up = DensityOperator::pure(&question_answer_state(&q, &Direction::z_axis(), HalfInt::from_doubled(1)).unwrap());
    let model = StatisticalModel::symmetric_noise(z.labels().to_vec(), 0.1).unwrap();
    let correct = (0..100u64)
        .filter(|&seed| mle(&model, &sample_data(&up, &model, &z, 10_000, seed).unwrap()).unwrap() == "+1/2")
        .count();
    assert!(correct >= 99, "{correct}/100");
}

#[test]
fn contradictory_delta_data_is_rejected() {
    let model = StatisticalModel::noiseless(pm()).unwrap();
    let prior = PosteriorDistribution::new(pm(), vec![1.0, 0.0]).unwrap();
    assert!(matches!(posterior_repeated(&prior, &model, &["-"]), Err(Error::InconsistentData)));
    assert!(matches!(mle(&model, &["+", "-"]), Err(Error::InconsistentData)));
    assert!(mle(&model, &["?"]).is_err());
}

#[test]
fn empty_data_echoes_the_prior() {
    let prior = PosteriorDistribution::new(pm(), vec![0.25, 0.75]).unwrap();
    let model = StatisticalModel::symmetric_noise(pm(), 0.2).unwrap();
    let report = infer(&prior, &model, &Vec::<String>::new(), 0.9).unwrap();
    assert_eq!(report.posterior, prior.canonical());
    assert_eq!(report.mle, None);
}

#[test]
fn credibility_examples() {
    let post = PosteriorDistribution::new(
        vec!["a".into(), "b".into(), "c".into()],
        vec![0.5, 0.3, 0.2],
    )
    .unwrap();
    assert_eq!(credibility_set(&post, 0.5).unwrap().labels, vec!["a"]);
    assert_eq!(credibility_set(&post, 0.8).unwrap().labels, vec!["a", "b"]);
    assert_eq!(credibility_set(&post, 1.0).unwrap().labels, vec!["a", "b", "c"]);
    assert!(credibility_set(&post, 0.0).is_err());
    let tie = PosteriorDistribution::new(vec!["y".into(), "x".into()], vec![0.5, 0.5]).unwrap();
    assert_eq!(credibility_set(&tie, 0.5).unwrap().labels, vec!["x"]);
}

#[test]
fn different_models_give_different_effects() {
    let q = SpinSystem::new(1).unwrap();
    let z = resolution_from_evariable(&q, &Direction::z_axis()).unwrap().resolution;
    let e1 = likelihood_effect(&StatisticalModel::symmetric_noise(z.labels().to_vec(), 0.1).unwrap(), &z).unwrap();
    let e2 = likelihood_effect(&StatisticalModel::symmetric_noise(z.labels().to_vec(), 0.2).unwrap(), &z).unwrap();
    assert!(effects_equal(&e1, &e1, 0.0).unwrap());
    assert!(!effects_equal(&e1, &e2, 1e-3).unwrap());
}

proptest! {
    /// Bayes' rule written out by hand on random resolutions and states.
    #[test]
    fn single_shot_posterior_matches_direct_bayes(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dim = rng.gen_range(2..=5);
        let m = rng.gen_range(1..=dim);
        let res = common::random_resolution(&mut rng, dim, m);
        let model = common::random_model(&mut rng, res.labels(), 3);
        let rank = rng.gen_range(1..=dim);
        let rho = common::random_density(&mut rng, dim, rank);
        let effect = likelihood_effect(&model, &res).unwrap();
        let prior: Vec<f64> = res.projectors().iter().map(|g| rho.expectation(g.entries()).re).collect();
        for (xi, x) in model.alphabet().iter().enumerate() {
            let evidence: f64 = (0..m).map(|j| model.q(j, xi) * prior[j]).sum();
            if evidence < 1e-9 {
                continue;
            }
            let post = posterior_single_shot(&rho, &effect, &res, x).unwrap();
            for j in 0..m {
                prop_assert!((post.weights()[j] - model.q(j, xi) * prior[j] / evidence).abs() < 1e-9);
            }
            // The same update through the repeated-data route.
            let via_prior = posterior_repeated(&PosteriorDistribution::from_state(&rho, &res).unwrap(), &model, &[x]).unwrap();
            for j in 0..m {
                prop_assert!((post.weights()[j] - via_prior.weights()[j]).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn posterior_is_normalized_and_order_free(seed in any::<u64>(), n in 1usize..40) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let answers: Vec<String> = (0..3).map(|j| format!("v{j}")).collect();
        let model = common::random_model(&mut rng, &answers, 3);
        let data: Vec<String> = (0..n).map(|_| format!("x{}", rng.gen_range(0..3))).collect();
        let prior = PosteriorDistribution::uniform(answers).unwrap();
        let Ok(a) = posterior_repeated(&prior, &model, &data) else { return Ok(()); };
        let mut shuffled = data.clone();
        shuffled.reverse();
        let b = posterior_repeated(&prior, &model, &shuffled).unwrap();
        prop_assert!((a.weights().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert_eq!(a, b);
    }
}
