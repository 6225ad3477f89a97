//! Shot-noise-limited estimates at one setting, and a photon-counted map.

use sagnac_wigner::field::{wedge_beam, Grid1D};
use sagnac_wigner::photon::{click_probability, estimate_wigner, sample_counts, sample_scan};
use sagnac_wigner::sagnac::{rectangular_settings, MirrorSetting};
use sagnac_wigner::wigner::{arange, wigner_point};
use sagnac_wigner::Result;

pub fn run_example() -> Result<()> {
    let grid = Grid1D::centered(512, 0.0625)?;
    let beam = wedge_beam(grid, 3.0, -3.0, 1.0, 0.0, 0.0, -9.0)?;
    let at = MirrorSetting::new(0.25, 0.0);
    let (p, _) = click_probability(&beam, at, 0.0)?;
    let exact = wigner_point(&beam, at.x, at.k)?;
    println!("p_bright {p:.4}, W {exact:.5}");

    for n in [100u64, 1_000, 10_000] {
        let reps = 200;
        let est: Vec<f64> = (0..reps)
            .map(|seed| {
                let r = sample_counts(&beam, at, n, 0.0, seed)?;
                Ok(estimate_wigner(&[r], 1.0, 0.0)?.get(0, 0))
            })
            .collect::<Result<_>>()?;
        let mean = est.iter().sum::<f64>() / reps as f64;
        let sd = (est.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (reps - 1) as f64).sqrt();
        println!("n = {n:>6}: mean {mean:+.5}, sd {sd:.2e}");
    }

    let xs = arange(-1.0, 1.0, 0.25)?;
    let ks = arange(-4.0, 4.0, 0.5)?;
    let counts = sample_scan(&beam, &rectangular_settings(&xs, &ks), 10_000, 0.0, 7)?;
    let map = estimate_wigner(&counts, 1.0, 0.0)?;
    println!("counted map {} x {}, peak {:.4}", map.nx(), map.nk(), map.values().iter().cloned().fold(f64::MIN, f64::max));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
