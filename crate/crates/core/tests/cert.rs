mod common;

use common::*;
use itertools::Itertools;
use proptest::prelude::*;
use spcert_core::cert::{
    basis_pursuit, counterexample_from_witness, decode_planted, l0_oracle, max_certified_k,
    recovery_experiment, strict_k_balanced, support_balance, support_balance_all_signs,
    ExperimentMode, Partition,
};
use spcert_core::gen::{gen_gaussian, gen_id_hadamard};
use spcert_core::width::gamma_width;
use spcert_core::{null_space_basis, DenseMatrix, NullSpaceBasis, DEFAULT_RANK_TOL};

fn basis(a: &DenseMatrix) -> NullSpaceBasis {
    null_space_basis(a, DEFAULT_RANK_TOL).unwrap()
}

#[test]
fn mu_matches_vertex_oracle() {
    for seed in 1..=6 {
        let b = basis(&gen_gaussian(3, 7, seed, false).unwrap());
        for k in 1..=3 {
            for s in (0..7).combinations(k).step_by(3) {
                let mu = support_balance(&b, &Partition::new(7, &s).unwrap())
                    .unwrap()
                    .mu;
                let oracle = mu_oracle(&b, &s);
                assert!(
                    (mu - oracle).abs() <= 1e-8,
                    "seed {seed} S {s:?}: {mu} vs {oracle}"
                );
            }
        }
    }
}

#[test]
fn singleton_mu_is_reciprocal_width() {
    for seed in 1..=5 {
        let b = basis(&gen_gaussian(4, 8, seed, false).unwrap());
        let max_mu = (0..8)
            .map(|i| {
                support_balance(&b, &Partition::new(8, &[i]).unwrap())
                    .unwrap()
                    .mu
            })
            .fold(0.0f64, f64::max);
        let gamma = gamma_width(&b).unwrap().gamma;
        assert!((max_mu - 1.0 / gamma).abs() <= 1e-8);
    }
}

#[test]
fn half_and_full_sign_enumeration_agree() {
    let b = basis(&gen_gaussian(4, 8, 5, false).unwrap());
    for s in (0..8).combinations(2) {
        let part = Partition::new(8, &s).unwrap();
        let half = support_balance(&b, &part).unwrap().mu;
        let full = support_balance_all_signs(&b, &part).unwrap().mu;
        assert!((half - full).abs() <= 1e-10);
    }
}

#[test]
fn hadamard_balancedness_profile() {
    let a = gen_id_hadamard(4).unwrap();
    let b = basis(&a);
    let level1 = strict_k_balanced(&b, 1).unwrap();
    assert!(level1.holds);
    assert!((level1.worst_mu - 1.0 / 3.0).abs() <= 1e-9);

    let rep = max_certified_k(&b, 3).unwrap();
    assert_eq!(rep.k_star, 1);
    assert!(rep.failure_found);
    assert!((rep.worst_mu - 0.5).abs() <= 1e-9);

    let cex = counterexample_from_witness(&b, rep.worst_partition.as_ref().unwrap(), rep.worst_mu)
        .unwrap();
    assert!(!cex.success);
    assert!(cex.l1_decoded <= cex.l1_planted + 1e-8);
}

#[test]
fn gaussian_seed_three_counterexample() {
    let a = gen_gaussian(4, 8, 3, false).unwrap();
    let b = basis(&a);
    let rep = max_certified_k(&b, 7).unwrap();
    assert!(rep.failure_found);
    let part = rep.worst_partition.as_ref().unwrap();
    assert_eq!(part.size(), rep.k_star + 1);
    let cex = counterexample_from_witness(&b, part, rep.worst_mu).unwrap();
    assert!(!cex.success);
    let resid = a
        .mul_vec(&cex.planted)
        .unwrap()
        .iter()
        .zip(a.mul_vec(&cex.decoded).unwrap())
        .fold(0.0f64, |e, (x, y)| e.max((x - y).abs()));
    assert!(resid <= 1e-8);

    if rep.k_star >= 1 {
        let out = recovery_experiment(&a, rep.k_star, ExperimentMode::Exhaustive, 1, 3).unwrap();
        assert_eq!(out.success_rate, 1.0);
    }
}

#[test]
fn k_star_dominates_k1_on_small_instances() {
    for seed in 1..=8 {
        let a = gen_gaussian(3, 7, seed, true).unwrap();
        let b = basis(&a);
        let k1 = gamma_width(&b).unwrap().k1;
        let rep = max_certified_k(&b, 6).unwrap();
        assert!(k1 <= rep.k_star, "seed {seed}: k1 {k1}, k* {}", rep.k_star);
    }
}

#[test]
fn l0_and_basis_pursuit_agree_on_hadamard() {
    let a = gen_id_hadamard(4).unwrap();
    let mut x = vec![0.0; 8];
    x[4] = 1.0;
    let y = a.mul_vec(&x).unwrap();
    let sols = l0_oracle(&a, &y, 1).unwrap();
    let unique = sols.unique().unwrap();
    let bp = basis_pursuit(&a, &y).unwrap();
    assert!(unique.iter().zip(&bp).all(|(u, v)| (u - v).abs() <= 1e-6));

    let ones = DenseMatrix::from_rows(&[[1.0, 1.0, 1.0]]).unwrap();
    let sols = l0_oracle(&ones, &[1.0], 1).unwrap();
    assert_eq!(sols.solutions.len(), 3);
    assert!(sols.unique().is_none());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn mu_is_monotone_in_the_support(seed in any::<u64>(), extra in 0usize..8) {
        let b = basis(&gen_gaussian(4, 8, seed, false).unwrap());
        let small = [1usize, 5];
        let mut big = small.to_vec();
        if !big.contains(&extra) {
            big.push(extra);
            big.sort_unstable();
        }
        let mu_s = support_balance(&b, &Partition::new(8, &small).unwrap()).unwrap().mu;
        let mu_b = support_balance(&b, &Partition::new(8, &big).unwrap()).unwrap().mu;
        prop_assert!(mu_s <= mu_b + 1e-9);
    }

    #[test]
    fn recovery_holds_up_to_k_star(seed in 0u64..500) {
        let a = gen_gaussian(3, 6, seed, true).unwrap();
        let rep = max_certified_k(&basis(&a), 5).unwrap();
        for k in 1..=rep.k_star {
            let out = recovery_experiment(&a, k, ExperimentMode::Random, 20, seed).unwrap();
            prop_assert_eq!(out.successes, out.trials);
        }
        if rep.k_star == 0 {
            // nothing certified: the singleton witness must already fail
            let part = rep.worst_partition.unwrap();
            let cex = counterexample_from_witness(&basis(&a), &part, rep.worst_mu).unwrap();
            prop_assert!(!cex.success);
        }
    }

    #[test]
    fn decoded_vectors_are_consistent(seed in any::<u64>()) {
        let a = gen_gaussian(4, 8, seed, false).unwrap();
        let mut x = vec![0.0; 8];
        x[(seed % 8) as usize] = 1.5;
        let res = decode_planted(&a, x).unwrap();
        prop_assert!(res.l1_decoded <= res.l1_planted + 1e-8);
        let y = a.mul_vec(&res.planted).unwrap();
        let yd = a.mul_vec(&res.decoded).unwrap();
        prop_assert!(y.iter().zip(&yd).all(|(u, v)| (u - v).abs() <= 1e-8));
    }
}
