//! Direct-summation Wigner oracle and phase-space diagnostics.
//!
//! The one-dimensional Wigner function of an ensemble is
//!
//! ```text
//! W(x, k) = (1/π) ∫ dξ exp(2ikξ) ⟨E*(x − ξ) E(x + ξ)⟩
//! ```
//!
//! with prefactor `1/π`, so a unit-power beam integrates to one over phase
//! space. With this kernel a carrier `exp(i k_c x)` puts the Wigner lobe at
//! `k = −k_c`, and a chirp `exp(i c x²)` shears the map to `W₀(x, k + 2cx)`.
//!
//! The `ξ` integral is a plain Riemann sum over mirror pairs of grid samples,
//! with the field taken as zero off the grid. `x` may sit on a sample or
//! halfway between two samples; `k` is arbitrary.

mod map;
mod phase_space;

pub use map::{MapMeta, WignerMap};
pub use phase_space::{covariance_moments, marginal_k, marginal_x, shear_compensate, Moments};

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::field::Ensemble;

/// Mirror-pair correlation `⟨E*(x − ξ) E(x + ξ)⟩` about one phase-space column.
#[derive(Debug, Clone)]
pub(crate) struct PairCorrelation {
    /// `(ξ, ⟨E*_i E_j⟩)` for every pair `i + j = 2p` inside the grid.
    terms: Vec<(f64, Complex64)>,
    dx: f64,
}

impl PairCorrelation {
    pub(crate) fn new(ensemble: &Ensemble, x: f64) -> Result<Self> {
        let grid = ensemble.grid();
        let n = grid.n() as i64;
        let t = grid.doubled_index(x)?;
        let lo = (t - (n - 1)).max(0);
        let hi = t.min(n - 1);
        let mut terms = Vec::with_capacity((hi - lo + 1).max(0) as usize);
        for i in lo..=hi {
            let j = t - i;
            let xi = (j - i) as f64 * grid.dx() * 0.5;
            terms.push((xi, ensemble.coherence(i as usize, j as usize)));
        }
        Ok(Self { terms, dx: grid.dx() })
    }

    /// Raw `(1/π) Σ exp(2ikξ) ⟨…⟩ dξ`, before the imaginary residue is dropped.
    pub(crate) fn evaluate(&self, k: f64) -> Complex64 {
        let s: Complex64 = self.terms.iter().map(|&(xi, c)| Complex64::from_polar(1.0, 2.0 * k * xi) * c).sum();
        s * (self.dx / PI)
    }
}

/// Complex value of the Wigner sum; the imaginary part is round-off only.
pub fn wigner_point_complex(ensemble: &Ensemble, x: f64, k: f64) -> Result<Complex64> {
    Ok(PairCorrelation::new(ensemble, x)?.evaluate(k))
}

/// `W(x, k)` by direct summation.
pub fn wigner_point(ensemble: &Ensemble, x: f64, k: f64) -> Result<f64> {
    Ok(wigner_point_complex(ensemble, x, k)?.re)
}

/// Oracle map on the given axes. Each x column's pair correlation is built
/// once and reused for every k, so entries equal [`wigner_point`] exactly.
pub fn wigner_map(ensemble: &Ensemble, x_axis: &[f64], k_axis: &[f64]) -> Result<WignerMap> {
    let mut values = Vec::with_capacity(x_axis.len() * k_axis.len());
    for &x in x_axis {
        let corr = PairCorrelation::new(ensemble, x)?;
        values.extend(k_axis.iter().map(|&k| corr.evaluate(k).re));
    }
    WignerMap::new(x_axis.to_vec(), k_axis.to_vec(), values, oracle_meta(ensemble, "oracle"))
}

pub(crate) fn oracle_meta(ensemble: &Ensemble, method: &str) -> MapMeta {
    let h = ensemble.support_half_width();
    let hq = ensemble.spectral_half_width();
    MapMeta {
        method: method.to_string(),
        source_hash: Some(ensemble.fingerprint()),
        k_step_max: (h > 0.0).then(|| PI / h),
        x_step_max: (hq > 0.0).then(|| PI / hq),
        ..Default::default()
    }
}

/// Uniform axis from `min` to `max` inclusive with `count` points.
pub fn linspace(min: f64, max: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![min];
    }
    let step = (max - min) / (count - 1) as f64;
    (0..count).map(|i| min + i as f64 * step).collect()
}

/// Uniform axis `min, min + step, …` up to `max` (inclusive within 1e-9 steps).
pub fn arange(min: f64, max: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !(max >= min) {
        return Err(Error::invalid("step", format!("need step > 0 and max >= min, got [{min}, {max}] / {step}")));
    }
    let count = ((max - min) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| min + i as f64 * step).collect())
}
