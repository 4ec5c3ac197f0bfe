mod common;

use common::*;
use pdmd_core::dmd::model_error;
use pdmd_core::faer::{c64, Mat};
use pdmd_core::{exact_dmd, qb_decompose, randomized_dmd, Error, QbConfig};
use proptest::prelude::*;

fn residual(s: &Mat<f64>, cfg: &QbConfig) -> f64 {
    let qb = qb_decompose(s.as_ref(), cfg).unwrap();
    (s - &qb.q_basis * &qb.small).norm_l2() / s.norm_l2()
}

#[test]
fn exact_low_rank_is_captured() {
    let s = &gaussian(200, 5, 1) * gaussian(100, 5, 2).transpose();
    let cfg = QbConfig { target_rank: 5, oversample: 10, power_iters: 2, seed: 3 };
    assert!(residual(&s, &cfg) <= 1e-10);
}

#[test]
fn identity_full_rank() {
    let s = Mat::<f64>::identity(8, 8);
    let cfg = QbConfig { target_rank: 8, oversample: 0, power_iters: 0, seed: 1 };
    let qb = qb_decompose(s.as_ref(), &cfg).unwrap();
    assert!(max_abs_diff(&(qb.q_basis.transpose() * &qb.q_basis), &Mat::identity(8, 8)) < 1e-13);
    assert!(residual(&s, &cfg) < 1e-14);
}

#[test]
fn fixed_seed_is_bit_identical() {
    let s = gaussian(40, 30, 8);
    let cfg = QbConfig { target_rank: 6, oversample: 5, power_iters: 1, seed: 77 };
    let a = qb_decompose(s.as_ref(), &cfg).unwrap();
    let b = qb_decompose(s.as_ref(), &cfg).unwrap();
    for j in 0..6 {
        for i in 0..40 {
            assert_eq!(a.q_basis[(i, j)].to_bits(), b.q_basis[(i, j)].to_bits());
        }
    }
    for j in 0..30 {
        for i in 0..6 {
            assert_eq!(a.small[(i, j)].to_bits(), b.small[(i, j)].to_bits());
        }
    }
}

#[test]
fn zero_matrix_is_degenerate() {
    let z = Mat::<f64>::zeros(5, 4);
    assert!(matches!(qb_decompose(z.as_ref(), &QbConfig::new(2)), Err(Error::Degenerate(_))));
    assert!(matches!(qb_decompose(z.as_ref(), &QbConfig::new(5)), Err(Error::Parameter(_))));
}

#[test]
fn oversampling_is_clamped_to_columns() {
    let s = gaussian(50, 6, 4);
    let cfg = QbConfig { target_rank: 6, oversample: 10, power_iters: 2, seed: 0 };
    assert!(residual(&s, &cfg) < 1e-13);
}

#[test]
fn power_iterations_help_on_decaying_spectrum() {
    let n = 60;
    let u = orthogonal(n, 100);
    let v = orthogonal(n, 101);
    let sig = Mat::from_fn(n, n, |i, j| if i == j { 2f64.powi(-(i as i32 + 1)) } else { 0.0 });
    let s = &u * sig * v.transpose();
    let mean = |q: usize| {
        (1..=20u64)
            .map(|seed| residual(&s, &QbConfig { target_rank: 5, oversample: 2, power_iters: q, seed }))
            .sum::<f64>()
            / 20.0
    };
    assert!(mean(2) <= mean(0));
}

#[test]
fn diagonal_recursion_eigenvalues() {
    let data = Mat::from_fn(2, 11, |i, k| [0.9_f64, 0.5][i].powi(k as i32));
    let s = snapshots(data);
    let cfg = QbConfig { target_rank: 2, oversample: 5, power_iters: 1, seed: 5 };
    let model = randomized_dmd(s.full_view(), &cfg, 0.0).unwrap();
    let expected = [c64::new(0.9, 0.0), c64::new(0.5, 0.0)];
    assert!(spectrum_distance(&expected, &model.eigvals) < 1e-8);
}

#[test]
fn low_rank_at_column_count_minus_one() {
    let (a, _) = rotation_system(&random_pairs(21, 3), 22);
    let x0: Vec<f64> = (0..6).map(|i| (i as f64).cos()).collect();
    let lift = gaussian(80, 6, 23);
    let data = &lift * orbit(&a, &x0, 11);
    let s = snapshots(data);
    let cfg = QbConfig { target_rank: 11, oversample: 5, power_iters: 2, seed: 1 };
    let model = randomized_dmd(s.full_view(), &cfg, 0.0).unwrap();
    assert!(model_error(&model, s.data()).unwrap().frob <= 1e-8);
}

#[test]
fn agrees_with_exact_dmd() {
    let (a, _) = rotation_system(&random_pairs(31, 4), 32);
    let x0: Vec<f64> = gaussian(8, 1, 33).col(0).iter().copied().collect();
    let s = snapshots(orbit(&a, &x0, 40));
    let exact = exact_dmd(s.full_view(), 8, 0.0).unwrap();
    let cfg = QbConfig { target_rank: 8, oversample: 10, power_iters: 2, seed: 34 };
    let rand = randomized_dmd(s.full_view(), &cfg, 0.0).unwrap();
    assert!(spectrum_distance(&exact.eigvals, &rand.eigvals) < 1e-6);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn orthonormal_basis_and_projection(seed in 0u64..10_000, rows in 5usize..60, cols in 2usize..40, r in 1usize..8, q in 0usize..3) {
        let r = r.min(rows).min(cols);
        let s = gaussian(rows, cols, seed);
        let cfg = QbConfig { target_rank: r, oversample: 5, power_iters: q, seed };
        let qb = qb_decompose(s.as_ref(), &cfg).unwrap();
        let g = qb.q_basis.transpose() * &qb.q_basis;
        prop_assert!(max_abs_diff(&g, &Mat::identity(r, r)) <= 1e-10);
        let proj = qb.q_basis.transpose() * &s;
        prop_assert!(max_abs_diff(&proj, &qb.small) <= 1e-12 * s.norm_l2().max(1.0));
    }
}
