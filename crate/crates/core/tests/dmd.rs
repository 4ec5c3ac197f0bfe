mod common;

use common::*;
use pdmd_core::dmd::{complex_power, model_error, split_lr, truncated_svd};
use pdmd_core::faer::{c64, Mat};
use pdmd_core::{exact_dmd, frob_error, reconstruct, Error};
use proptest::prelude::*;

fn diag_recursion() -> Mat<f64> {
    Mat::from_fn(2, 11, |i, k| [0.9_f64, 0.5][i].powi(k as i32))
}

#[test]
fn split_shifts_by_one_column() {
    let s = Mat::from_fn(2, 3, |i, j| (10 * i + j) as f64);
    let pair = split_lr(s.as_ref()).unwrap();
    assert_eq!(pair.left.ncols(), 2);
    assert_eq!(pair.left[(1, 1)], 11.0);
    assert_eq!(pair.right[(1, 0)], 11.0);
    let two = Mat::from_fn(3, 2, |i, j| (i + j) as f64);
    let pair = split_lr(two.as_ref()).unwrap();
    assert_eq!((pair.left.ncols(), pair.right.ncols()), (1, 1));
    assert!(split_lr(Mat::<f64>::zeros(3, 1).as_ref()).is_err());
    let big = Mat::<f64>::zeros(4, 6000);
    assert_eq!(split_lr(big.as_ref()).unwrap().left.ncols(), 5999);
}

#[test]
fn truncated_svd_examples() {
    let id = Mat::<f64>::identity(3, 3);
    let t = truncated_svd(id.as_ref(), 3, 0.0).unwrap();
    assert!(t.singular.iter().all(|&s| (s - 1.0).abs() < 1e-15));

    let d = Mat::from_fn(3, 3, |i, j| if i == j { [3.0, 2.0, 1.0][i] } else { 0.0 });
    let t = truncated_svd(d.as_ref(), 2, 0.0).unwrap();
    assert!((t.singular[0] - 3.0).abs() < 1e-14 && (t.singular[1] - 2.0).abs() < 1e-14);

    let x = gaussian(20, 2, 1);
    let y = gaussian(20, 2, 2);
    let m = &x * y.transpose();
    let t = truncated_svd(m.as_ref(), 5, 1e-12).unwrap();
    assert_eq!(t.rank(), 2);
    let sig = Mat::from_fn(2, 2, |i, j| if i == j { t.singular[i] } else { 0.0 });
    let back = &t.modes_left * sig * t.modes_right.transpose();
    assert!(max_abs_diff(&back, &m) <= 1e-10 * t.singular[0]);

    assert!(matches!(truncated_svd(id.as_ref(), 4, 0.0), Err(Error::Parameter(_))));
    assert!(matches!(truncated_svd(id.as_ref(), 0, 0.0), Err(Error::Parameter(_))));
    assert!(matches!(
        truncated_svd(Mat::<f64>::zeros(3, 3).as_ref(), 1, 0.0),
        Err(Error::Degenerate(_))
    ));
}

#[test]
fn truncated_factors_are_orthonormal() {
    let m = gaussian(30, 12, 9);
    let t = truncated_svd(m.as_ref(), 7, 0.0).unwrap();
    for g in [t.modes_left.transpose() * &t.modes_left, t.modes_right.transpose() * &t.modes_right] {
        assert!(max_abs_diff(&g, &Mat::identity(7, 7)) < 1e-10);
    }
    assert!(t.singular.windows(2).all(|w| w[0] >= w[1]));
}

#[test]
fn diagonal_recursion() {
    let s = snapshots(diag_recursion());
    let model = exact_dmd(s.full_view(), 2, 0.0).unwrap();
    let expected = [c64::new(0.9, 0.0), c64::new(0.5, 0.0)];
    assert!(spectrum_distance(&expected, &model.eigvals) < 1e-12);
    assert!((model.eigvals[0].re - 0.9).abs() < 1e-12, "sorted by modulus");
    let rec = reconstruct(&model, 0..11).unwrap();
    assert!(frob_error(s.data(), rec.data.as_ref()).unwrap() <= 1e-12);
    let k3 = reconstruct(&model, 3..4).unwrap();
    assert!((k3.data[(0, 0)] - 0.729).abs() < 1e-12);
    assert!((k3.data[(1, 0)] - 0.125).abs() < 1e-12);
}

#[test]
fn scalar_growth() {
    let s = snapshots(Mat::from_fn(1, 8, |_, k| 2f64.powi(k as i32)));
    let model = exact_dmd(s.full_view(), 1, 0.0).unwrap();
    assert!((model.eigvals[0] - c64::new(2.0, 0.0)).norm() < 1e-13);
    let b0 = model.modes[(0, 0)] * model.amps[0];
    assert!((b0 - c64::new(1.0, 0.0)).norm() < 1e-13);
}

#[test]
fn reconstruction_at_zero_is_phi_b() {
    let s = snapshots(gaussian(6, 9, 4));
    let model = exact_dmd(s.full_view(), 5, 0.0).unwrap();
    let rec = reconstruct(&model, 0..1).unwrap();
    for i in 0..6 {
        let mut acc = c64::new(0.0, 0.0);
        for j in 0..model.rank {
            acc += model.modes[(i, j)] * model.amps[j];
        }
        assert!((rec.data[(i, 0)] - acc.re).abs() < 1e-12);
    }
}

#[test]
fn fixed_point_model() {
    let x0 = [1.0, -2.0, 0.5];
    let model = pdmd_core::DmdModel {
        modes: Mat::from_fn(3, 1, |i, _| c64::new(x0[i], 0.0)),
        eigvals: vec![c64::new(1.0, 0.0)],
        amps: vec![c64::new(1.0, 0.0)],
        rank: 1,
        grid: pdmd_core::TimeGrid::new(0.0, 1.0, 5).unwrap(),
        window: pdmd_core::ColumnWindow { start: 0, len: 5 },
        fit_residual: 0.0,
    };
    let rec = reconstruct(&model, 0..5).unwrap();
    for k in 0..5 {
        for i in 0..3 {
            assert_eq!(rec.data[(i, k)], x0[i]);
        }
    }
    assert!(reconstruct(&model, 0..6).is_err());
}

#[test]
fn overflow_names_the_eigenvalue() {
    let model = pdmd_core::DmdModel {
        modes: Mat::from_fn(1, 1, |_, _| c64::new(1.0, 0.0)),
        eigvals: vec![c64::new(1e200, 0.0)],
        amps: vec![c64::new(1.0, 0.0)],
        rank: 1,
        grid: pdmd_core::TimeGrid::new(0.0, 1.0, 5).unwrap(),
        window: pdmd_core::ColumnWindow { start: 0, len: 5 },
        fit_residual: 0.0,
    };
    match reconstruct(&model, 0..5) {
        Err(Error::PowerOverflow { re, k, .. }) => {
            assert_eq!(re, 1e200);
            assert_eq!(k, 2);
        }
        other => panic!("expected overflow, got {other:?}"),
    }
}

#[test]
fn complex_power_matches_repeated_product() {
    let z = c64::new(0.6, -0.7);
    let mut acc = c64::new(1.0, 0.0);
    for k in 0..40 {
        assert!((complex_power(z, k) - acc).norm() < 1e-13);
        acc *= z;
    }
    assert_eq!(complex_power(c64::new(0.0, 0.0), 0), c64::new(1.0, 0.0));
    assert_eq!(complex_power(c64::new(0.0, 0.0), 3), c64::new(0.0, 0.0));
}

#[test]
fn frob_error_examples() {
    let i2 = Mat::<f64>::identity(2, 2);
    assert_eq!(frob_error(i2.as_ref(), i2.as_ref()).unwrap(), 0.0);
    assert_eq!(frob_error(i2.as_ref(), Mat::<f64>::zeros(2, 2).as_ref()).unwrap(), 1.0);
    assert!(matches!(
        frob_error(Mat::<f64>::zeros(2, 2).as_ref(), i2.as_ref()),
        Err(Error::ZeroNorm(_))
    ));
}

#[test]
fn constant_rank_one_data() {
    let s = snapshots(Mat::from_fn(5, 12, |i, _| 1.0 + i as f64));
    let model = exact_dmd(s.full_view(), 1, 0.0).unwrap();
    assert!((model.eigvals[0] - c64::new(1.0, 0.0)).norm() < 1e-12);
    let err = model_error(&model, s.data()).unwrap();
    assert!(err.frob <= 1e-12);
}

#[test]
fn streaming_error_matches_materialized() {
    let s = snapshots(gaussian(7, 600, 12));
    let model = exact_dmd(s.full_view(), 6, 0.0).unwrap();
    let rec = reconstruct(&model, 0..600).unwrap();
    let direct = frob_error(s.data(), rec.data.as_ref()).unwrap();
    let streamed = model_error(&model, s.data()).unwrap();
    assert!((direct - streamed.frob).abs() <= 1e-12 * direct.max(1.0));
    assert_eq!(rec.max_imag, streamed.max_imag);
}

#[test]
fn shift_property_of_modes() {
    let (a, _) = rotation_system(&random_pairs(5, 3), 6);
    let x0: Vec<f64> = (0..6).map(|i| 1.0 + 0.1 * i as f64).collect();
    let data = orbit(&a, &x0, 20);
    let pair = split_lr(data.as_ref()).unwrap();
    let svd = truncated_svd(pair.left, 6, 0.0).unwrap();
    let s = snapshots(data.clone());
    let model = exact_dmd(s.full_view(), 6, 0.0).unwrap();
    let v_scaled = Mat::from_fn(svd.modes_right.nrows(), 6, |i, j| svd.modes_right[(i, j)] / svd.singular[j]);
    let op = pair.right * &v_scaled * svd.modes_left.transpose();
    let op_c = Mat::from_fn(6, 6, |i, j| c64::new(op[(i, j)], 0.0));
    let lhs = &op_c * &model.modes;
    for j in 0..model.rank {
        for i in 0..6 {
            let rhs = model.modes[(i, j)] * model.eigvals[j];
            assert!((lhs[(i, j)] - rhs).norm() < 1e-8);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn linear_system_oracle(seed in 0u64..1_000_000, pairs in 2usize..8) {
        let (a, eig) = rotation_system(&random_pairs(seed, pairs), seed ^ 0xabc);
        let n = 2 * pairs;
        let x0: Vec<f64> = gaussian(n, 1, seed + 1).col(0).iter().copied().collect();
        let data = orbit(&a, &x0, 60);
        let s = snapshots(data);
        let model = exact_dmd(s.full_view(), n, 0.0).unwrap();
        prop_assert!(spectrum_distance(&eig, &model.eigvals) < 1e-8);
        let err = model_error(&model, s.data()).unwrap();
        prop_assert!(err.frob <= 1e-8);
    }

    #[test]
    fn frob_error_scale_invariant(seed in 0u64..1000, c in prop::sample::select(vec![-3.5, 1e-3, 2.0, 1e4])) {
        let s = gaussian(5, 7, seed);
        let t = gaussian(5, 7, seed + 99);
        let base = frob_error(s.as_ref(), t.as_ref()).unwrap();
        let scaled = frob_error((&s * faer_scale(c)).as_ref(), (&t * faer_scale(c)).as_ref()).unwrap();
        prop_assert!((base - scaled).abs() <= 1e-14 * base.max(1.0));
    }
}

fn faer_scale(c: f64) -> pdmd_core::faer::Scale<f64> {
    pdmd_core::faer::Scale(c)
}
