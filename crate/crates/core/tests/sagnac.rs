mod oracles;

use std::f64::consts::PI;

use proptest::prelude::*;
use sagnac_wigner::field::{make_gaussian, make_hermite_gauss, total_power, wedge_beam, Ensemble, Grid1D};
use sagnac_wigner::sagnac::{
    parity, port_intensities, rectangular_settings, reconstruct_wigner, replica_overlap, run_scan, steer,
    InterferometerConfig, MirrorSetting, ReconstructionMethod, ScanResult,
};
use sagnac_wigner::wigner::{arange, wigner_map, wigner_point};
use sagnac_wigner::Error;

fn grid() -> Grid1D {
    Grid1D::centered(512, 0.0625).unwrap()
}

#[test]
fn gaussian_ports_follow_overlap() {
    let e = Ensemble::coherent(make_gaussian(grid(), 0.0, 1.0, 0.0, 0.0).unwrap());
    let cfg = InterferometerConfig::default();
    for &(x, k) in &[(0.0, 0.0), (0.5, 0.0), (0.25, 1.0), (-1.0, -0.5)] {
        let (b, d) = port_intensities(&e, MirrorSetting::new(x, k), &cfg).unwrap();
        assert!((b + d - 1.0).abs() < 1e-12);
        assert!(((b - d) / PI - oracles::gaussian_wigner(x, k, 1.0)).abs() < 1e-10);
    }
}

#[test]
fn analog_scan_equals_oracle() {
    let e = wedge_beam(grid(), 3.0, -3.0, 1.0, 0.2, 0.0, -9.0).unwrap();
    let xs = arange(-1.5, 1.5, 0.125).unwrap();
    let ks = arange(-4.0, 4.0, 0.5).unwrap();
    let scan = run_scan(&e, &rectangular_settings(&xs, &ks), &InterferometerConfig::default()).unwrap();
    let oracle = wigner_map(&e, &xs, &ks).unwrap();
    for method in [ReconstructionMethod::TwoPort, ReconstructionMethod::SinglePortPedestal] {
        assert!(reconstruct_wigner(&scan, method).unwrap().max_abs_diff(&oracle) < 1e-10);
    }
}

#[test]
fn phase_offset_rescales_and_null_fails() {
    let e = Ensemble::coherent(make_hermite_gauss(grid(), 2, 1.0).unwrap());
    let xs = arange(-0.5, 0.5, 0.25).unwrap();
    let settings = rectangular_settings(&xs, &xs);
    let cfg = InterferometerConfig::with_phase(0.7);
    let rec = reconstruct_wigner(&run_scan(&e, &settings, &cfg).unwrap(), ReconstructionMethod::TwoPort).unwrap();
    assert!(rec.max_abs_diff(&wigner_map(&e, &xs, &xs).unwrap()) < 1e-10);
    let null = run_scan(&e, &settings, &InterferometerConfig::with_phase(PI / 2.0)).unwrap();
    assert!(matches!(reconstruct_wigner(&null, ReconstructionMethod::TwoPort), Err(Error::PhaseNull { .. })));
}

#[test]
fn clipping_is_reported_with_setting() {
    let e = Ensemble::coherent(make_gaussian(grid(), 0.0, 1.0, 0.0, 0.0).unwrap());
    let err = port_intensities(&e, MirrorSetting::new(14.0, 0.0), &InterferometerConfig::default()).unwrap_err();
    assert!(matches!(err, Error::ClippedBeam { x, .. } if x == 14.0));
    assert_eq!(err.exit_code(), 3);
}

#[test]
fn invalid_config_is_rejected() {
    let bad = InterferometerConfig { split_imbalance: 0.7, ..Default::default() };
    assert!(bad.validate().is_err());
    let bad = InterferometerConfig { phase_jitter_sigma: -0.1, ..Default::default() };
    assert!(bad.validate().is_err());
}

#[test]
fn imbalance_biases_reconstruction() {
    let e = Ensemble::coherent(make_gaussian(grid(), 0.0, 1.0, 0.0, 0.0).unwrap());
    let xs = arange(-0.5, 0.5, 0.25).unwrap();
    let settings = rectangular_settings(&xs, &xs);
    let cfg = InterferometerConfig { split_imbalance: 0.05, ..Default::default() };
    let rec = reconstruct_wigner(&run_scan(&e, &settings, &cfg).unwrap(), ReconstructionMethod::TwoPort).unwrap();
    let err = rec.max_abs_diff(&wigner_map(&e, &xs, &xs).unwrap());
    assert!(err > 1e-4 && err < 0.1, "{err}");
}

#[test]
fn scan_record_round_trip() {
    let e = Ensemble::coherent(make_gaussian(grid(), 0.0, 1.0, 0.0, 0.0).unwrap());
    let xs = arange(-0.5, 0.5, 0.25).unwrap();
    let cfg = InterferometerConfig { phase_jitter_sigma: 0.1, seed: 9, ..Default::default() };
    let scan = run_scan(&e, &rectangular_settings(&xs, &xs), &cfg).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scan.csv");
    scan.save(&path).unwrap();
    let back = ScanResult::load(&path).unwrap();
    assert_eq!(back.settings, scan.settings);
    for (a, b) in back.bright.iter().zip(&scan.bright) {
        assert!((a - b).abs() <= 1e-15 * a.abs().max(1.0));
    }
    // same seed, same noise
    assert_eq!(run_scan(&e, &scan.settings, &cfg).unwrap(), scan);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn steering_preserves_power_and_parity_is_involution(ix in -40i64..40, k in -4.0f64..4.0) {
        let f = make_hermite_gauss(grid(), 1, 1.0).unwrap();
        let s = steer(&f, MirrorSetting::new(ix as f64 * 0.0625, k)).unwrap();
        prop_assert!((s.power() - f.power()).abs() < 1e-10);
        prop_assert_eq!(parity(&parity(&s)), s.clone());
        prop_assert!((parity(&s).power() - s.power()).abs() < 1e-10);
    }

    #[test]
    fn overlap_equals_pi_wigner(ix in -24i64..24, k in -4.0f64..4.0) {
        let x = ix as f64 * 0.0625;
        let e = wedge_beam(grid(), 2.0, -2.0, 1.0, 0.0, 0.0, -6.0).unwrap();
        let o: f64 = e
            .modes()
            .iter()
            .map(|m| m.weight * replica_overlap(&steer(&m.field, MirrorSetting::new(x, k)).unwrap()).re)
            .sum();
        prop_assert!((o - PI * wigner_point(&e, x, k).unwrap()).abs() < 1e-10);
        let (b, d) = port_intensities(&e, MirrorSetting::new(x, k), &InterferometerConfig::default()).unwrap();
        prop_assert!((b + d - total_power(&e)).abs() < 1e-12);
        prop_assert!(b >= -1e-15 && d >= -1e-15);
    }
}
