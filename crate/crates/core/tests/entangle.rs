mod oracles;

use proptest::prelude::*;
use sagnac_wigner::entangle::{
    chsh, chsh_report, coincidence_probabilities, joint_wigner_point, make_epr, parity_correlation,
    parity_correlation_via_ports, ChshSettings, JointField, Photon,
};
use sagnac_wigner::field::{make_gaussian, make_hermite_gauss, Grid1D};
use sagnac_wigner::sagnac::MirrorSetting;
use sagnac_wigner::wigner::wigner_point;
use sagnac_wigner::Error;

const SM: f64 = 0.5;
const SP: f64 = 2.0;

fn grid() -> Grid1D {
    Grid1D::centered(128, 0.125).unwrap()
}

fn epr() -> JointField {
    make_epr(grid(), grid(), SM, SP).unwrap()
}

#[test]
fn epr_joint_wigner_matches_closed_form() {
    let psi = epr();
    let pi2 = std::f64::consts::PI.powi(2);
    for &(x1, k1, x2, k2) in &[(0.0, 0.0, 0.0, 0.0), (0.5, 0.25, 0.25, -0.5), (-1.0, 0.5, 1.0, 0.5), (0.75, -1.0, 0.5, 0.25)] {
        let w = joint_wigner_point(&psi, x1, k1, x2, k2).unwrap();
        assert!((pi2 * w - oracles::epr_parity(x1, k1, x2, k2, SM, SP)).abs() < 1e-8, "({x1},{k1},{x2},{k2})");
    }
}

#[test]
fn joint_wigner_integrates_to_one() {
    let g = Grid1D::centered(64, 0.25).unwrap();
    let psi = make_epr(g, g, 0.7, 1.5).unwrap();
    let xs: Vec<f64> = (-12..=12).map(|i| i as f64 * 0.5).collect();
    let ks: Vec<f64> = (-8..=8).map(|i| i as f64 * 0.5).collect();
    let mut total = 0.0;
    for &x1 in &xs {
        for &x2 in &xs {
            for &k1 in &ks {
                for &k2 in &ks {
                    total += joint_wigner_point(&psi, x1, k1, x2, k2).unwrap();
                }
            }
        }
    }
    total *= 0.5f64.powi(4);
    assert!((total - 1.0).abs() < 1e-3, "{total}");
}

#[test]
fn chsh_scan_matches_frozen_table() {
    let psi = epr();
    let o = MirrorSetting::origin();
    for &(d, b) in &oracles::CHSH_SCAN_EPR {
        let got = chsh(&psi, o, MirrorSetting::new(d, 0.0), o, MirrorSetting::new(-d, 0.0)).unwrap();
        assert!((got - b).abs() < 1e-8, "d = {d}: {got} vs {b}");
        assert!((oracles::chsh_displaced(d, SM, SP) - b).abs() < 1e-12);
    }
    let (d, best) = oracles::CHSH_BEST;
    let got = chsh(&psi, o, MirrorSetting::new(d, 0.0), o, MirrorSetting::new(-d, 0.0)).unwrap();
    assert!(got > 2.0 && (got - best).abs() < 1e-8);
}

#[test]
fn product_state_respects_local_bound() {
    let u = make_hermite_gauss(grid(), 1, 1.0).unwrap();
    let v = make_gaussian(grid(), 0.25, 0.8, 0.5, 0.0).unwrap();
    let psi = JointField::product(&u, &v).unwrap();
    let o = MirrorSetting::origin();
    let s = ChshSettings { a: o, a_prime: o, b: o, b_prime: o };
    // E = (−1) · exp(−x_c²/a² − a²k_c²) at the origin, and B = 2E
    let e = -(-(0.25f64 * 0.25) / 0.64 - 0.64 * 0.25).exp();
    assert!((chsh_report(&psi, &s).unwrap().value - 2.0 * e).abs() < 1e-10);
    for step in 1..=12 {
        let d = 0.125 * step as f64;
        let b = chsh(&psi, o, MirrorSetting::new(d, 0.3), MirrorSetting::new(0.0, 0.1), MirrorSetting::new(-d, 0.0)).unwrap();
        assert!(b.abs() <= 2.0 + 1e-12, "{b}");
    }
}

#[test]
fn separable_state_factorizes() {
    let u = make_gaussian(grid(), 0.5, 1.0, 1.0, 0.0).unwrap();
    let v = make_hermite_gauss(grid(), 2, 0.9).unwrap();
    let psi = JointField::product(&u, &v).unwrap();
    let r1 = psi.reduced(Photon::First).unwrap();
    let r2 = psi.reduced(Photon::Second).unwrap();
    for &(x1, k1, x2, k2) in &[(0.5, -1.0, 0.0, 0.0), (0.25, 0.5, -0.5, 0.75)] {
        let joint = joint_wigner_point(&psi, x1, k1, x2, k2).unwrap();
        let prod = wigner_point(&r1, x1, k1).unwrap() * wigner_point(&r2, x2, k2).unwrap();
        assert!((joint - prod).abs() < 1e-12);
    }
}

#[test]
fn narrow_grid_and_clipping() {
    let g = Grid1D::centered(64, 0.125).unwrap();
    assert!(matches!(make_epr(g, g, SM, SP), Err(Error::GridTooNarrow { .. })));
    let err = coincidence_probabilities(&epr(), MirrorSetting::new(7.5, 0.0), MirrorSetting::origin(), 0.0, 0.0).unwrap_err();
    assert!(matches!(err, Error::ClippedBeam { .. }));
}

#[test]
fn joint_field_csv_round_trip() {
    let psi = epr();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("psi.csv");
    psi.save(&path).unwrap();
    let back = JointField::load(&path).unwrap();
    let err = back.samples().iter().zip(psi.samples()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    assert!(err < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn correlations_are_bounded_and_routes_agree(
        i1 in -8i64..8, k1 in -1.5f64..1.5, i2 in -8i64..8, k2 in -1.5f64..1.5,
    ) {
        let psi = epr();
        let s1 = MirrorSetting::new(i1 as f64 * 0.125, k1);
        let s2 = MirrorSetting::new(i2 as f64 * 0.125, k2);
        let e = parity_correlation(&psi, s1, s2).unwrap();
        prop_assert!(e.abs() <= 1.0 + 1e-12);
        prop_assert!((parity_correlation_via_ports(&psi, s1, s2).unwrap() - e).abs() < 1e-10);
        let c = coincidence_probabilities(&psi, s1, s2, 0.0, 0.0).unwrap();
        prop_assert!((c.sum() - 1.0).abs() < 1e-10);
        prop_assert!(c.bb >= -1e-15 && c.bd >= -1e-15 && c.db >= -1e-15 && c.dd >= -1e-15);
    }
}
