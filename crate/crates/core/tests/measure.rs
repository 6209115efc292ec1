mod common;

use approx::assert_abs_diff_eq;
use eqm_core::measure::{
    born_probability, density_from_distribution, likelihood_effect, lueders_update, outcome_probabilities,
    povm_element, resolution_from_evariable, sample_data, DensityOperator, StatisticalModel,
};
use eqm_core::operator::{max_abs, CMatrix, Ket};
use eqm_core::spin::{question_answer_state, Direction, HalfInt, SpinSystem};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

fn identity_residual(sum: CMatrix) -> f64 {
    let d = sum.nrows();
    max_abs(&(sum - CMatrix::identity(d, d)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn random_triples(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dim = rng.gen_range(1..=5);
        let m = rng.gen_range(1..=dim);
        let res = common::random_resolution(&mut rng, dim, m);
        let p = common::random_distribution(&mut rng, m, 0.0);
        let n_data = rng.gen_range(1..=4);
        let model = common::random_model(&mut rng, res.labels(), n_data);

        prop_assert!(identity_residual(res.projectors().iter().map(|g| g.entries()).sum()) < 1e-10);
        let effect = likelihood_effect(&model, &res).unwrap();
        prop_assert!(effect.completeness_residual() < 1e-10);

        let rho = density_from_distribution(&res, &p).unwrap();
        let probs = outcome_probabilities(&rho, &effect).unwrap();
        prop_assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e-9);

        let ideal = likelihood_effect(&StatisticalModel::noiseless(res.labels().to_vec()).unwrap(), &res).unwrap();
        for (j, gamma) in res.projectors().iter().enumerate() {
            let direct = rho.expectation(gamma.entries()).re;
            prop_assert!((born_probability(&rho, &ideal.operators()[j]).unwrap() - direct).abs() < 1e-12);
        }

        // Any one-to-one relabeling of answers and data.
        let answers: Vec<String> = res.labels().iter().map(|l| format!("answer<{l}>")).collect();
        let alphabet: Vec<String> = model.alphabet().iter().map(|x| format!("{x}'")).collect();
        let relabeled_res = res.relabel(answers.clone()).unwrap();
        let relabeled_model = StatisticalModel::new(answers, alphabet, model.table().to_vec()).unwrap();
        let rho2 = density_from_distribution(&relabeled_res, &p).unwrap();
        let probs2 = outcome_probabilities(&rho2, &likelihood_effect(&relabeled_model, &relabeled_res).unwrap()).unwrap();
        prop_assert_eq!(
            probs.iter().map(|x| x.to_bits()).collect::<Vec<_>>(),
            probs2.iter().map(|x| x.to_bits()).collect::<Vec<_>>()
        );
    }

    #[test]
    fn marginals_add_up(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dim = rng.gen_range(2..=5);
        let res = common::random_resolution(&mut rng, dim, dim);
        let model = common::random_model(&mut rng, res.labels(), 4);
        let effect = likelihood_effect(&model, &res).unwrap();
        let rank = rng.gen_range(1..=dim);
        let rho = common::random_density(&mut rng, dim, rank);
        let probs = outcome_probabilities(&rho, &effect).unwrap();
        let subset = ["x0", "x2", "x2"];
        let joint = born_probability(&rho, &povm_element(&effect, &subset).unwrap()).unwrap();
        prop_assert!((joint - probs[0] - probs[2]).abs() < 1e-12);
        let everything = povm_element(&effect, model.alphabet()).unwrap();
        prop_assert!(identity_residual(everything) < 1e-10);
    }

    #[test]
    fn focused_likelihood_picks_out_the_answer(seed in any::<u64>()) {
        // A model concentrated on one answer gives L(x) = Γ_j.
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dim = rng.gen_range(1..=5);
        let res = common::random_resolution(&mut rng, dim, dim);
        let effect = likelihood_effect(&StatisticalModel::noiseless(res.labels().to_vec()).unwrap(), &res).unwrap();
        for (l, g) in effect.operators().iter().zip(res.projectors()) {
            prop_assert!(max_abs(&(l - g.entries())) < 1e-15);
        }
    }

    #[test]
    fn lueders_update_is_a_state_supported_on_the_projector(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dim = rng.gen_range(2..=5);
        let res = common::random_resolution(&mut rng, dim, 2);
        let rho = common::random_density(&mut rng, dim, dim);
        let gamma = &res.projectors()[0];
        let post = lueders_update(&rho, gamma).unwrap();
        prop_assert!((post.expectation(gamma.entries()).re - 1.0).abs() < 1e-10);
    }
}

#[test]
fn density_from_distribution_examples() {
    let q = SpinSystem::new(1).unwrap();
    let z = resolution_from_evariable(&q, &Direction::z_axis()).unwrap().resolution;
    let mixed = density_from_distribution(&z, &[0.5, 0.5]).unwrap();
    assert!(mixed.approx_eq(&DensityOperator::maximally_mixed(2), 0.0));
    assert!(density_from_distribution(&z, &[0.7, 0.4]).is_err());
    assert!(density_from_distribution(&z, &[1.0]).is_err());
}

#[test]
fn noisy_born_probability_on_spin_up() {
    let q = SpinSystem::new(1).unwrap();
    let z = resolution_from_evariable(&q, &Direction::z_axis()).unwrap().resolution;
    let up = DensityOperator::pure(&question_answer_state(&q, &Direction::z_axis(), HalfInt::from_doubled(1)).unwrap());
    let model = StatisticalModel::symmetric_noise(z.labels().to_vec(), 0.1).unwrap();
    let probs = outcome_probabilities(&up, &likelihood_effect(&model, &z).unwrap()).unwrap();
    assert_abs_diff_eq!(probs[0], 0.9, epsilon = 1e-12);
    assert_abs_diff_eq!(probs[1], 0.1, epsilon = 1e-12);
}

#[test]
fn mismatched_shapes_and_zero_probability_conditioning_fail() {
    let q = SpinSystem::new(1).unwrap();
    let z = resolution_from_evariable(&q, &Direction::z_axis()).unwrap().resolution;
    let up = DensityOperator::pure(&Ket::basis(2, 0));
    assert!(lueders_update(&up, &z.projectors()[1]).is_err());
    assert!(born_probability(&up, &CMatrix::identity(3, 3)).is_err());
    let bad = StatisticalModel::noiseless(vec!["a".into(), "b".into()]).unwrap();
    assert!(likelihood_effect(&bad, &z).is_err());
}

/// Pearson statistic for the sampled counts against `tr(ρ L(x))`.
#[test]
fn sampling_passes_chi_square() {
    let n = 100_000;
    let alpha = 0.001;
    let mut failures = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for seed in 0..50u64 {
        let res = common::random_resolution(&mut rng, 3, 3);
        let rho = common::random_density(&mut rng, 3, 2);
        let model = common::random_model(&mut rng, res.labels(), 4);
        let probs = outcome_probabilities(&rho, &likelihood_effect(&model, &res).unwrap()).unwrap();
        let data = sample_data(&rho, &model, &res, n, seed).unwrap();
        let mut counts = vec![0usize; probs.len()];
        for x in &data {
            counts[model.datum_index(x).unwrap()] += 1;
        }
        let cells: Vec<(f64, usize)> = probs.iter().copied().zip(counts).filter(|(p, _)| *p > 0.0).collect();
        let stat: f64 = cells
            .iter()
            .map(|&(p, c)| {
                let e = p * n as f64;
                (c as f64 - e).powi(2) / e
            })
            .sum();
        let critical = ChiSquared::new((cells.len() - 1) as f64).unwrap().inverse_cdf(1.0 - alpha);
        if stat > critical {
            failures += 1;
        }
    }
    // Under the null, more than two rejections in 50 tests at α = 0.001 has
    // probability about 2e-5.
    assert!(failures <= 2, "{failures} of 50 seeds rejected");
}

#[test]
fn sampling_is_reproducible_and_rejects_empty_requests() {
    let q = SpinSystem::new(1).unwrap();
    let x = resolution_from_evariable(&q, &Direction::x_axis()).unwrap().resolution;
    let rho = DensityOperator::pure(&Ket::basis(2, 0));
    let model = StatisticalModel::noiseless(x.labels().to_vec()).unwrap();
    let a = sample_data(&rho, &model, &x, 500, 77).unwrap();
    assert_eq!(a, sample_data(&rho, &model, &x, 500, 77).unwrap());
    assert_ne!(a, sample_data(&rho, &model, &x, 500, 78).unwrap());
    assert!(sample_data(&rho, &model, &x, 0, 1).is_err());
}
