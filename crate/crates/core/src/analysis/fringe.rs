use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::wigner::WignerMap;

/// Dominant fringe frequency along x of one k slice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FringeEstimate {
    /// Angular spatial frequency: `cos(f x)` fringes give `f`.
    pub frequency: f64,
    /// Spectral bin width `2π / (n dx)`.
    pub resolution: f64,
    pub peak: f64,
    pub floor: f64,
}

/// Spectral peak of the slice at `k_slice`, refined by a 3-point parabola.
///
/// Only bins with at least 4 periods across the slice are searched. The noise
/// floor is the median spectral magnitude, raised to `1e-12` of the largest
/// magnitude so round-off ripple never counts as a peak.
pub fn fringe_frequency(map: &WignerMap, k_slice: f64) -> Result<FringeEstimate> {
    let ks = map.k_axis();
    let ik = ks
        .iter()
        .position(|&k| (k - k_slice).abs() <= 1e-9 * k_slice.abs().max(1.0))
        .ok_or_else(|| Error::invalid("k_slice", format!("no map row at k = {k_slice}")))?;
    let xs = map.x_axis();
    let n = xs.len();
    if n < 16 {
        return Err(Error::invalid("x_axis", format!("{n} samples are too few for a spectrum")));
    }
    let dx = (xs[n - 1] - xs[0]) / (n - 1) as f64;
    if xs.windows(2).any(|w| ((w[1] - w[0]) - dx).abs() > 1e-9 * dx) {
        return Err(Error::invalid("x_axis", "fringe analysis needs a uniform x axis"));
    }

    let mut buf: Vec<Complex64> = map.column(ik).into_iter().map(|v| Complex64::new(v, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let mag: Vec<f64> = buf[..=n / 2].iter().map(|c| c.norm()).collect();

    let mut sorted = mag[1..].to_vec();
    sorted.sort_by(f64::total_cmp);
    let top = sorted.last().copied().unwrap_or(0.0).max(mag[0]);
    let floor = sorted[sorted.len() / 2].max(1e-12 * top);

    let best = (4..mag.len() - 1)
        .filter(|&i| mag[i] > mag[i - 1] && mag[i] >= mag[i + 1])
        .max_by(|&a, &b| mag[a].total_cmp(&mag[b]));
    let peak = best.map_or(0.0, |i| mag[i]);
    let i = match best {
        Some(i) if peak >= 3.0 * floor => i,
        _ => return Err(Error::NoPeak { peak, floor }),
    };

    let (l, c, r) = (mag[i - 1], mag[i], mag[i + 1]);
    let denom = l - 2.0 * c + r;
    let delta = if denom != 0.0 { (0.5 * (l - r) / denom).clamp(-0.5, 0.5) } else { 0.0 };
    let resolution = 2.0 * PI / (n as f64 * dx);
    Ok(FringeEstimate { frequency: (i as f64 + delta) * resolution, resolution, peak, floor })
}
