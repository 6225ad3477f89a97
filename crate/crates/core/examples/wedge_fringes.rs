//! Two-lobe map of a wedged beam: fringes between the lobes and ripples on a
//! lobe when a weak third component is present.

use sagnac_wigner::analysis::fringe_frequency;
use sagnac_wigner::field::{wedge_beam, Grid1D};
use sagnac_wigner::wigner::{arange, wigner_map};
use sagnac_wigner::Result;

pub fn run_example() -> Result<()> {
    let grid = Grid1D::centered(512, 0.0625)?;
    let (k1, k2) = (3.0, -3.0);
    let xs = arange(-8.0, 8.0, 0.0625)?;
    let ks = arange(-4.0, 4.0, 0.25)?;

    let beam = wedge_beam(grid, k1, k2, 1.0, 0.0, 0.1, 2.0 * k2 - k1)?;
    let map = wigner_map(&beam, &xs, &ks)?;
    map.save_pgm(&std::env::temp_dir(), "wedge_fringes")?;

    let mid = fringe_frequency(&map, 0.0)?;
    let lobe = fringe_frequency(&map, -k2)?;
    println!("midpoint fringes {:.3} (|k1 - k2| = {})", mid.frequency, (k1 - k2).abs());
    println!("lobe ripple      {:.3} (resolution {:.3})", lobe.frequency, lobe.resolution);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
