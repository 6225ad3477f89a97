//! Sampled Wigner function of a Gaussian beam against its closed form.

use std::f64::consts::PI;

use sagnac_wigner::field::{make_gaussian, make_hermite_gauss, Ensemble, Grid1D};
use sagnac_wigner::wigner::{arange, wigner_map, wigner_point};
use sagnac_wigner::Result;

pub fn run_example() -> Result<()> {
    let grid = Grid1D::centered(512, 0.0625)?;
    let a = 1.0;
    let beam = Ensemble::coherent(make_gaussian(grid, 0.0, a, 0.0, 0.0)?);

    let axis = arange(-2.0, 2.0, 0.5)?;
    let map = wigner_map(&beam, &axis, &axis)?;
    let mut worst = 0.0f64;
    for (ix, &x) in axis.iter().enumerate() {
        for (ik, &k) in axis.iter().enumerate() {
            let exact = (-(x * x) / (a * a) - a * a * k * k).exp() / PI;
            worst = worst.max((map.get(ix, ik) - exact).abs());
        }
    }
    println!("gaussian: W(0,0) = {:.12} (1/pi = {:.12}), max error {worst:.2e}", map.get(4, 4), 1.0 / PI);
    assert!(worst < 1e-8);

    // W_n(0, 0) = (−1)^n / π
    for n in 0..4 {
        let hg = Ensemble::coherent(make_hermite_gauss(grid, n, 1.0)?);
        println!("HG{n}: W(0,0) = {:+.6}", wigner_point(&hg, 0.0, 0.0)?);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
