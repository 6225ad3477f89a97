//! Propagation shears the map; undoing the shear recovers the source.

use sagnac_wigner::field::{make_gaussian, propagate_fresnel, Ensemble, Grid1D};
use sagnac_wigner::sagnac::{rectangular_settings, reconstruct_wigner, run_scan, InterferometerConfig, ReconstructionMethod};
use sagnac_wigner::wigner::{arange, covariance_moments, shear_compensate, wigner_map};
use sagnac_wigner::Result;

pub fn run_example() -> Result<()> {
    let grid = Grid1D::centered(512, 0.0625)?;
    let source = make_gaussian(grid, 0.0, 1.0, 0.0, 0.0)?;
    let (z, k0) = (10.0, 10.0);
    let far = Ensemble::coherent(propagate_fresnel(&source, z, k0)?);

    let xs = arange(-6.0, 6.0, 0.0625)?;
    let ks = arange(-3.0, 3.0, 0.25)?;
    let scan = run_scan(&far, &rectangular_settings(&xs, &ks), &InterferometerConfig::default())?;
    let measured = reconstruct_wigner(&scan, ReconstructionMethod::TwoPort)?;
    let m = covariance_moments(&measured)?;
    println!("measured: var_x {:.3}, var_k {:.3}, cov {:.3}", m.var_x, m.var_k, m.cov_xk);

    let back = shear_compensate(&measured, z, k0)?;
    let oracle = wigner_map(&Ensemble::coherent(source), &xs, &ks)?;
    println!(
        "compensated error {:.2e}, uncompensated {:.2e}",
        back.max_abs_diff(&oracle),
        measured.max_abs_diff(&oracle)
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
