mod common;

use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rkeig_core::{
    build_chain, count_all_roots, count_roots, deflate_with, eigenvalue_error, interlacing_bounds,
    jacobi_evd, locate_by_inertia, locate_rank2, locate_rank_k, orthonormality_error,
    perturbation_update, random_instance, random_instance_with_signs, reconstruction_error,
    secular_coefficients, transform_update, update_decomposition, update_eigenvalues,
    DeflationPairing, JacobiConfig, LocationVector, LowRankUpdate, ShiftKind, Sign,
    SpectralDecomposition, SymmetricDense,
};

use common::{coefficients, contour_weight, det_secular, edge, oracle_eigenvalues};

fn signs_strategy(max_k: usize) -> impl Strategy<Value = Vec<Sign>> {
    prop::collection::vec(prop_oneof![Just(Sign::Plus), Just(Sign::Minus)], 1..=max_k)
}

fn rank2_signs() -> impl Strategy<Value = Vec<Sign>> {
    prop_oneof![
        Just(vec![Sign::Plus, Sign::Plus]),
        Just(vec![Sign::Minus, Sign::Minus]),
        Just(vec![Sign::Plus, Sign::Minus]),
        Just(vec![Sign::Minus, Sign::Plus]),
    ]
}

fn instance(
    n: usize,
    norm: f64,
    seed: u64,
    signs: Vec<Sign>,
) -> (SpectralDecomposition, LowRankUpdate) {
    random_instance_with_signs(n, norm, seed, signs).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn secular_function_equals_determinant(
        n in 3usize..20, seed in any::<u64>(), norm in 0.05f64..3.0, signs in signs_strategy(4),
        t in 0.0f64..1.0,
    ) {
        prop_assume!(signs.len() <= n);
        let (d, u) = instance(n, norm, seed, signs);
        let tu = transform_update(&d, &u).unwrap();
        let c = secular_coefficients(d.eigenvalues(), &tu).unwrap();
        let j: Vec<f64> = tu.signs().iter().map(|s| s.value()).collect();
        let l = d.eigenvalues();
        // A point inside a random interval, away from both poles.
        let i = ((t * (n - 1) as f64) as usize).min(n - 2);
        let x = l[i] + (0.25 + 0.5 * t) * (l[i + 1] - l[i]);
        let f = c.eval(x).unwrap();
        let g = det_secular(l, tu.u(), &j, x);
        let mag = 1.0 + c.poles().iter().zip(c.weights()).map(|(p, w)| (w / (x - p)).abs()).sum::<f64>();
        prop_assert!((f - g).abs() <= 1e-9 * mag, "f = {f}, det = {g}, mag = {mag}");
    }

    #[test]
    fn weights_are_residues_of_the_determinant(
        n in 2usize..12, seed in any::<u64>(), norm in 0.1f64..2.0, signs in signs_strategy(3),
    ) {
        prop_assume!(signs.len() <= n);
        let (d, u) = instance(n, norm, seed, signs);
        let tu = transform_update(&d, &u).unwrap();
        let j: Vec<f64> = tu.signs().iter().map(|s| s.value()).collect();
        let l = d.eigenvalues();
        let c = secular_coefficients(l, &tu).unwrap();
        let total: f64 = c.weights().iter().map(|w| w.abs()).sum();
        for (i, &li) in l.iter().enumerate() {
            let r = contour_weight(l, tu.u(), &j, i);
            let a = c.poles().iter().position(|&p| p == li).map_or(0.0, |m| c.weights()[m]);
            prop_assert!((a - r).abs() <= 1e-9 * (1.0 + total), "pole {i}: weight {a}, residue {r}");
        }
    }

    #[test]
    fn rank_one_weights_are_signed_squares(n in 1usize..30, seed in any::<u64>(), neg in any::<bool>()) {
        let s = if neg { Sign::Minus } else { Sign::Plus };
        let (d, u) = instance(n, 1.0, seed, vec![s]);
        let tu = transform_update(&d, &u).unwrap();
        let c = secular_coefficients(d.eigenvalues(), &tu).unwrap();
        let mut m = 0;
        for i in 0..n {
            let w = s.value() * tu.u()[(i, 0)].powi(2);
            if w != 0.0 {
                prop_assert!((c.weights()[m] - w).abs() <= 1e-15 * w.abs().max(1e-300) * 4.0);
                m += 1;
            }
        }
    }

    #[test]
    fn first_chain_step_is_the_derivative(
        n in 2usize..10, seed in any::<u64>(), signs in signs_strategy(3), t in 0.05f64..0.95,
    ) {
        prop_assume!(signs.len() <= n);
        let (d, u) = instance(n, 1.0, seed, signs);
        let c = coefficients(&d, &u);
        prop_assume!(c.len() >= 2);
        let chain = build_chain(&c);
        let (p0, p1) = (&chain.steps[0], &chain.steps[1]);
        let l = c.poles();
        let x = l[0] + t * (l[l.len() - 1] - l[0]);
        let h = 1e-5 * (1.0 + x.abs());
        let fd = (p0.value_at(x + h) - p0.value_at(x - h)) / (2.0 * h);
        let got = p1.scale * p1.value_at(x);
        let size = p0.value_at(x).abs().max(fd.abs()).max(got.abs()).max(1e-300);
        prop_assert!((got - fd).abs() <= 1e-5 * size, "p1 = {got}, fd = {fd}");
    }

    #[test]
    fn chain_steps_satisfy_the_division_identity(
        n in 3usize..12, seed in any::<u64>(), signs in signs_strategy(3), t in 0.0f64..1.0,
    ) {
        prop_assume!(signs.len() <= n);
        let (d, u) = instance(n, 1.0, seed, signs);
        let c = coefficients(&d, &u);
        let chain = build_chain(&c);
        let l = c.poles();
        let xs = [l[0] - 0.5, l[0] + t * (l[l.len() - 1] - l[0]), l[l.len() - 1] + 0.5];
        for m in 2..chain.len() {
            let (s2, s1, s) = (&chain.steps[m - 2], &chain.steps[m - 1], &chain.steps[m]);
            let a = s2.c / s1.c;
            let b = s1.dropped.unwrap() + s2.weights.iter().sum::<f64>() / s2.c
                - s1.weights.iter().sum::<f64>() / s1.c;
            for &x in &xs {
                let lhs = s.scale * s.value_at(x);
                let rhs = -s2.value_at(x) + a * (x - b) * s1.value_at(x);
                let size = s2.value_at(x).abs() + (a * (x - b) * s1.value_at(x)).abs();
                prop_assert!((lhs - rhs).abs() <= 1e-8 * size.max(1e-300), "step {m} at {x}: {lhs} vs {rhs}");
            }
        }
    }

    #[test]
    fn deflation_keeps_the_remaining_roots(
        n in 3usize..16, seed in any::<u64>(), signs in signs_strategy(3), take in 1usize..3,
        nearest in any::<bool>(),
    ) {
        prop_assume!(signs.len() <= n);
        let (d, u) = instance(n, 1.0, seed, signs);
        let c = coefficients(&d, &u);
        prop_assume!(c.len() == n);
        let mut roots = update_eigenvalues(&d, &u, 1e-14).unwrap();
        let removed: Vec<f64> = roots.drain(..take.min(n - 1)).collect();
        let pairing = if nearest { DeflationPairing::Nearest } else { DeflationPairing::Leading };
        let g = deflate_with(&c, &removed, pairing).unwrap();
        prop_assert_eq!(g.len(), n - removed.len());
        let census = count_all_roots(&g).unwrap();
        prop_assert_eq!(census.total(), g.len());
        for &r in &roots {
            let v = g.eval(r).unwrap_or(0.0);
            let mag = g.leading().abs() + g.poles().iter().zip(g.weights()).map(|(p, w)| (w / (r - p)).abs()).sum::<f64>();
            prop_assert!(v.abs() <= 1e-8 * mag, "remaining root {r}: g = {v} (mag {mag})");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sturm_census_matches_oracle(n in 2usize..31, seed in any::<u64>(), norm in 0.05f64..2.0, signs in signs_strategy(4)) {
        prop_assume!(signs.len() <= n);
        let (d, u) = instance(n, norm, seed, signs);
        let c = coefficients(&d, &u);
        let truth = LocationVector::classify(c.poles(), &oracle_eigenvalues(&d, &u));
        prop_assume!(truth.iter().sum::<usize>() == c.len());
        let census = count_all_roots(&c).unwrap();
        prop_assert_eq!(&census.counts, &truth);
        let chain = build_chain(&c);
        if chain.complete {
            let all = count_roots(&chain, f64::NEG_INFINITY, f64::INFINITY).unwrap();
            prop_assert_eq!(all.count, c.len());
        }
    }

    #[test]
    fn inertia_location_matches_oracle(n in 2usize..40, seed in any::<u64>(), norm in 0.05f64..5.0, signs in signs_strategy(5)) {
        prop_assume!(signs.len() <= n);
        let (d, u) = instance(n, norm, seed, signs);
        let tu = transform_update(&d, &u).unwrap();
        let c = coefficients(&d, &u);
        let l = d.eigenvalues();
        let active: Vec<usize> = c.poles().iter().map(|p| l.iter().position(|x| x == p).unwrap()).collect();
        let j: Vec<f64> = tu.signs().iter().map(|s| s.value()).collect();
        let truth = LocationVector::classify(c.poles(), &oracle_eigenvalues(&d, &u));
        prop_assume!(truth.iter().sum::<usize>() == c.len());
        let got = locate_by_inertia(l, tu.u(), &j, &active).unwrap();
        prop_assert_eq!(got.counts(), &truth[..]);
    }

    #[test]
    fn large_updates_of_high_rank_are_solved(n in 5usize..60, seed in any::<u64>(), norm in 3.0f64..10.0, k in 3usize..6) {
        prop_assume!(k <= n);
        let (d, u) = random_instance_with_signs(n, norm, seed, Sign::alternating(k)).unwrap();
        let target = rkeig_core::apply_update(&d.reconstruct(), &u).unwrap();
        let scale = 1.0 + target.frobenius_norm();
        let r = update_decomposition(&d, &u, 1e-14).unwrap();
        let err = eigenvalue_error(r.decomposition.eigenvalues(), &oracle_eigenvalues(&d, &u));
        prop_assert!(err <= 1e-8 * scale, "eigenvalue error {err}");
        prop_assert!(r.residual_fro <= 1e-8 * scale, "residual {}", r.residual_fro);
    }

    #[test]
    fn truncated_chains_never_overcount(n in 3usize..31, seed in any::<u64>(), signs in signs_strategy(3)) {
        prop_assume!(signs.len() <= n);
        let (d, u) = instance(n, 1.0, seed, signs);
        let c = coefficients(&d, &u);
        let truth = LocationVector::classify(c.poles(), &oracle_eigenvalues(&d, &u));
        prop_assume!(truth.iter().sum::<usize>() == c.len());
        let chain = build_chain(&c);
        let p = c.poles();
        for len in 2..chain.len() {
            let part = rkeig_core::SturmChain { steps: chain.steps[..len].to_vec(), complete: false };
            for i in 0..=p.len() {
                let got = count_roots(&part, edge(p, i), edge(p, i + 1)).unwrap();
                prop_assert!(!got.exact);
                prop_assert!(got.count <= truth[i], "prefix {len}, interval {i}: {} > {}", got.count, truth[i]);
            }
        }
    }

    #[test]
    fn rank2_locations_agree_with_census(n in 2usize..40, seed in any::<u64>(), norm in 0.05f64..3.0, signs in rank2_signs()) {
        let (d, u) = instance(n, norm, seed, signs.clone());
        let c = coefficients(&d, &u);
        let kind = ShiftKind::from_signs(&signs).unwrap();
        let fast = locate_rank2(c.weights(), kind).unwrap();
        let truth = LocationVector::classify(c.poles(), &oracle_eigenvalues(&d, &u));
        prop_assume!(truth.iter().sum::<usize>() == c.len());
        prop_assert_eq!(fast.counts(), &truth[..]);
        let census = locate_rank_k(&c).unwrap();
        prop_assert_eq!(census.counts(), &truth[..]);
    }

    #[test]
    fn new_eigenvalues_interlace(n in 2usize..40, seed in any::<u64>(), norm in 0.05f64..3.0, signs in signs_strategy(4)) {
        prop_assume!(signs.len() <= n);
        let (d, u) = instance(n, norm, seed, signs.clone());
        let new = update_eigenvalues(&d, &u, 1e-14).unwrap();
        let slack = 1e-12 * (1.0 + norm * norm);
        for (i, &x) in new.iter().enumerate() {
            let (lo, hi) = interlacing_bounds(i + 1, d.eigenvalues(), signs.len(), &signs).unwrap();
            prop_assert!(x >= lo - slack && x <= hi + slack, "{}: {x} outside [{lo}, {hi}]", i + 1);
        }
    }

    #[test]
    fn eigenpairs_have_small_residuals(n in 1usize..40, seed in any::<u64>(), norm in 0.01f64..3.0, k in 1usize..6) {
        prop_assume!(k <= n);
        let (d, u) = random_instance_with_signs(n, norm, seed, Sign::alternating(k)).unwrap();
        let target = rkeig_core::apply_update(&d.reconstruct(), &u).unwrap();
        let r = update_decomposition(&d, &u, 1e-14).unwrap();
        let a = target.as_matrix();
        let scale = target.frobenius_norm().max(1.0);
        let q = r.decomposition.q();
        for (i, &l) in r.decomposition.eigenvalues().iter().enumerate() {
            let v: DVector<f64> = q.column(i).into_owned();
            let res = (a * &v - &v * l).norm();
            prop_assert!(res <= 1e-9 * scale, "pair {i}: residual {res}");
        }
        prop_assert!(r.ortho_err <= 1e-9);
        // Q' Q'^T is the identity projector, so the new basis spans everything.
        let p = q * q.transpose();
        prop_assert!((p - DMatrix::<f64>::identity(n, n)).amax() <= 1e-9);
        prop_assert!(reconstruction_error(&r.decomposition, &target) <= 1e-9 * scale);
    }

    #[test]
    fn jacobi_reconstructs_random_symmetric_matrices(n in 1usize..30, seed in any::<u64>()) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let m = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
        let a = SymmetricDense::new(&m + m.transpose()).unwrap();
        let e = jacobi_evd(&a, JacobiConfig::default()).unwrap();
        prop_assert!(orthonormality_error(e.q()) <= 1e-12);
        prop_assert!(reconstruction_error(&e, &a) <= 1e-11 * a.frobenius_norm().max(1.0));
        prop_assert!(e.eigenvalues().windows(2).all(|w| w[0] <= w[1]));
    }
}

/// First-order perturbation drops terms of order `||K||^4`, so halving the
/// update norm cuts its eigenvalue error about sixteen-fold.
#[test]
fn perturbation_error_is_fourth_order() {
    for seed in 0..4 {
        let errs: Vec<f64> = [0.02, 0.01]
            .iter()
            .map(|&norm| {
                let (d, u) = random_instance(20, 2, norm, seed).unwrap();
                let p = perturbation_update(&d, &u).unwrap();
                rkeig_core::eigenvalue_error(p.eigenvalues(), &oracle_eigenvalues(&d, &u))
            })
            .collect();
        let ratio = errs[0] / errs[1];
        assert!(
            (8.0..=32.0).contains(&ratio),
            "seed {seed}: ratio {ratio} ({errs:?})"
        );
    }
}
