mod oracles;

use proptest::prelude::*;
use sagnac_wigner::field::{make_gaussian, make_hermite_gauss, make_partially_coherent_pair, Ensemble, Grid1D, Mode};
use sagnac_wigner::wigner::{
    arange, covariance_moments, linspace, marginal_k, marginal_x, wigner_map, wigner_point, wigner_point_complex,
    WignerMap,
};

fn grid() -> Grid1D {
    Grid1D::centered(512, 0.0625).unwrap()
}

#[test]
fn sampled_kernel_matches_continuous_quadrature() {
    let (x_c, a, k_c, c) = (0.3, 0.9, 1.2, 0.15);
    let e = Ensemble::coherent(make_gaussian(grid(), x_c, a, k_c, c).unwrap());
    let field = |x: f64| oracles::gaussian_field(x, x_c, a, k_c, c);
    for &(x, k) in &[(0.0, 0.0), (0.3125, -1.2), (0.5, -1.0), (-0.25, 0.7)] {
        let q = oracles::quadrature_wigner(field, x, k, 12.0, 8000);
        assert!((wigner_point(&e, x, k).unwrap() - q).abs() < 1e-8, "({x}, {k})");
    }
}

#[test]
fn gaussian_map_values_and_marginals() {
    let e = Ensemble::coherent(make_gaussian(grid(), 0.0, 1.0, 0.0, 0.0).unwrap());
    let axis = linspace(-6.0, 6.0, 97);
    let map = wigner_map(&e, &axis, &axis).unwrap();
    for (ix, &x) in axis.iter().enumerate().step_by(7) {
        for (ik, &k) in axis.iter().enumerate().step_by(5) {
            assert!((map.get(ix, ik) - oracles::gaussian_wigner(x, k, 1.0)).abs() < 1e-10);
        }
    }
    // ∫W dk = |E(x)|², ∫W dx = |Ẽ(k)|²
    let mx = marginal_x(&map).unwrap();
    let mk = marginal_k(&map).unwrap();
    for (i, &x) in axis.iter().enumerate() {
        let inten = (-x * x).exp() / std::f64::consts::PI.sqrt();
        assert!((mx[i] - inten).abs() < 1e-8);
        assert!((mk[i] - inten).abs() < 1e-8);
    }
    let m = covariance_moments(&map).unwrap();
    assert!((m.var_x - 0.5).abs() < 1e-6 && (m.var_k - 0.5).abs() < 1e-6);
}

#[test]
fn hermite_gauss_origin_values() {
    for n in 0..=5 {
        let e = Ensemble::coherent(make_hermite_gauss(grid(), n, 1.0).unwrap());
        assert!((wigner_point(&e, 0.0, 0.0).unwrap() - oracles::hermite_gauss_origin(n as u32)).abs() < 1e-8);
    }
}

#[test]
fn off_grid_points_are_rejected() {
    let e = Ensemble::coherent(make_gaussian(grid(), 0.0, 1.0, 0.0, 0.0).unwrap());
    assert!(wigner_point(&e, 0.01, 0.0).is_err());
    assert!(arange(1.0, 0.0, 0.1).is_err());
}

#[test]
fn map_csv_round_trip() {
    let e = Ensemble::coherent(make_hermite_gauss(grid(), 1, 1.0).unwrap());
    let xs = arange(-1.0, 1.0, 0.25).unwrap();
    let map = wigner_map(&e, &xs, &xs).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let files = map.save(dir.path(), "m").unwrap();
    let back = WignerMap::load(&files[0]).unwrap();
    assert_eq!(back.x_axis(), map.x_axis());
    assert!(back.max_abs_diff(&map) < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn wigner_is_real_and_bounded(ix in -32i32..32, ik in -40i32..40, mu in -1.0f64..1.0) {
        let (x, k) = (ix as f64 * 0.0625, ik as f64 * 0.1);
        let u1 = make_gaussian(grid(), -1.0, 1.0, 2.0, 0.0).unwrap();
        let u2 = make_gaussian(grid(), 1.0, 0.8, -1.0, 0.1).unwrap();
        let p = make_partially_coherent_pair(&u1, &u2, mu).unwrap();
        let w = wigner_point_complex(&p, x, k).unwrap();
        prop_assert!(w.im.abs() < 1e-12);
        prop_assert!(w.re.abs() <= 1.0 / std::f64::consts::PI + 1e-12);
    }

    #[test]
    fn wigner_is_linear_in_mode_weights(w1 in 0.0f64..2.0, w2 in 0.0f64..2.0, ix in -16i32..16, ik in -30i32..30) {
        prop_assume!(w1 + w2 > 1e-3);
        let (x, k) = (ix as f64 * 0.125, ik as f64 * 0.1);
        let f1 = make_hermite_gauss(grid(), 1, 1.0).unwrap();
        let f2 = make_gaussian(grid(), 0.5, 0.7, 1.0, 0.0).unwrap();
        let mix = Ensemble::new(vec![Mode { weight: w1, field: f1.clone() }, Mode { weight: w2, field: f2.clone() }]).unwrap();
        let a = wigner_point(&Ensemble::coherent(f1), x, k).unwrap();
        let b = wigner_point(&Ensemble::coherent(f2), x, k).unwrap();
        prop_assert!((wigner_point(&mix, x, k).unwrap() - (w1 * a + w2 * b)).abs() < 1e-12);
    }
}
