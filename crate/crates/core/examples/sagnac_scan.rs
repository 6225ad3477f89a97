//! Scan the Sagnac apparatus across phase space and rebuild the map from the
//! two output ports.

use sagnac_wigner::field::{make_hermite_gauss, Ensemble, Grid1D};
use sagnac_wigner::sagnac::{
    port_intensities, rectangular_settings, reconstruct_wigner, run_scan, InterferometerConfig, MirrorSetting,
    ReconstructionMethod,
};
use sagnac_wigner::wigner::{arange, wigner_map};
use sagnac_wigner::Result;

pub fn run_example() -> Result<()> {
    let grid = Grid1D::centered(512, 0.0625)?;
    let beam = Ensemble::coherent(make_hermite_gauss(grid, 1, 1.0)?);
    let config = InterferometerConfig::default();

    let (bright, dark) = port_intensities(&beam, MirrorSetting::origin(), &config)?;
    println!("HG1 at origin: bright {bright:.6}, dark {dark:.6}");

    let xs = arange(-2.0, 2.0, 0.25)?;
    let ks = arange(-2.0, 2.0, 0.25)?;
    let scan = run_scan(&beam, &rectangular_settings(&xs, &ks), &config)?;
    let two_port = reconstruct_wigner(&scan, ReconstructionMethod::TwoPort)?;
    let pedestal = reconstruct_wigner(&scan, ReconstructionMethod::SinglePortPedestal)?;
    let oracle = wigner_map(&beam, &xs, &ks)?;
    println!(
        "{} settings: two-port error {:.2e}, single-port error {:.2e}",
        scan.settings.len(),
        two_port.max_abs_diff(&oracle),
        pedestal.max_abs_diff(&oracle)
    );

    let noisy = InterferometerConfig { phase_jitter_sigma: 0.2, seed: 3, ..config };
    let blurred = reconstruct_wigner(&run_scan(&beam, &scan.settings, &noisy)?, ReconstructionMethod::TwoPort)?;
    println!("with 0.2 rad phase jitter: error {:.2e}", blurred.max_abs_diff(&oracle));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
