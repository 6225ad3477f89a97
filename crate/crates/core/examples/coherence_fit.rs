//! Fit the two-beam model to maps of partially coherent pairs and read back
//! the degree of coherence.

use sagnac_wigner::analysis::{fit_two_beam, initial_guess};
use sagnac_wigner::field::{make_gaussian, make_partially_coherent_pair, Grid1D};
use sagnac_wigner::wigner::{arange, wigner_map};
use sagnac_wigner::Result;

pub fn run_example() -> Result<()> {
    let grid = Grid1D::centered(512, 0.0625)?;
    let u1 = make_gaussian(grid, 0.0, 1.0, 3.0, 0.0)?;
    let u2 = make_gaussian(grid, 0.0, 1.0, -3.0, 0.0)?;
    let xs = arange(-2.5, 2.5, 0.125)?;
    let ks = arange(-5.0, 5.0, 0.25)?;

    for mu in [0.25, 0.5, 1.0] {
        let pair = make_partially_coherent_pair(&u1, &u2, mu)?;
        let map = wigner_map(&pair, &xs, &ks)?;
        let fit = fit_two_beam(&map, &initial_guess(&map)?)?;
        println!(
            "mu = {mu:.2}: fitted {:.6} +/- {:.1e}, rms {:.1e}, {} iterations",
            fit.model.mu,
            fit.mu_stderr(),
            fit.rms_residual,
            fit.iterations
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
