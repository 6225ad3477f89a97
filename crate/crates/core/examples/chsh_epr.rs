//! Displaced-parity CHSH test on a two-photon EPR state.

use sagnac_wigner::entangle::{chsh, joint_wigner_point, make_epr, parity_correlation_via_ports, JointField};
use sagnac_wigner::field::{make_gaussian, Grid1D};
use sagnac_wigner::sagnac::MirrorSetting;
use sagnac_wigner::Result;

pub fn run_example() -> Result<()> {
    let grid = Grid1D::centered(128, 0.125)?;
    let epr = make_epr(grid, grid, 0.5, 2.0)?;
    let o = MirrorSetting::origin();
    println!("W2(0,0,0,0) = {:.6}", joint_wigner_point(&epr, 0.0, 0.0, 0.0, 0.0)?);
    println!("E(0,0) via ports = {:.6}", parity_correlation_via_ports(&epr, o, o)?);

    let mut best = (0.0, f64::MIN);
    for step in 1..=8 {
        let d = 0.125 * step as f64;
        let b = chsh(&epr, o, MirrorSetting::new(d, 0.0), o, MirrorSetting::new(-d, 0.0))?;
        println!("d = {d:.3}: B = {b:.6}");
        if b > best.1 {
            best = (d, b);
        }
    }
    println!("best B = {:.6} at d = {} (local bound 2)", best.1, best.0);

    let g = make_gaussian(grid, 0.0, 1.0, 0.0, 0.0)?;
    let product = JointField::product(&g, &g)?;
    let d = MirrorSetting::new(0.375, 0.0);
    println!("product state B = {:.6}", chsh(&product, o, d, o, MirrorSetting::new(-0.375, 0.0))?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
