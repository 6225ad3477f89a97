//! One-dimensional transverse fields and partially coherent ensembles.
//!
//! Lengths are in dimensionless beam units and frequencies in their inverse.
//! A field's power is `Σ |E_j|² dx`.

mod beams;
mod grid;
pub mod io;
mod propagate;

pub use beams::{make_gaussian, make_hermite_gauss, wedge_beam};
pub use grid::Grid1D;
pub use propagate::propagate_fresnel;
#[cfg(test)]
pub(crate) use propagate::spectrum;

use fnv::FnvHasher;
use num_complex::Complex64;
use std::hash::Hasher;

use crate::error::{Error, Result};

/// Edge amplitude, relative to the peak, above which a grid is considered too narrow.
pub const EDGE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct Field1D {
    grid: Grid1D,
    samples: Vec<Complex64>,
}

impl Field1D {
    pub fn new(grid: Grid1D, samples: Vec<Complex64>) -> Result<Self> {
        if samples.len() != grid.n() {
            return Err(Error::LengthMismatch { left: samples.len(), right: grid.n() });
        }
        if samples.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::invalid("samples", "non-finite amplitude"));
        }
        Ok(Self { grid, samples })
    }

    pub fn zeros(grid: Grid1D) -> Self {
        Self { grid, samples: vec![Complex64::new(0.0, 0.0); grid.n()] }
    }

    /// Samples `f(x_j)` on the grid.
    pub fn from_fn(grid: Grid1D, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        Self::new(grid, (0..grid.n()).map(|j| f(grid.x(j))).collect())
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    pub fn power(&self) -> f64 {
        self.samples.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.grid.dx()
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self { grid: self.grid, samples: self.samples.iter().map(|z| z * c).collect() }
    }

    /// `⟨self|other⟩ = Σ conj(self) other dx`.
    pub fn inner(&self, other: &Field1D) -> Result<Complex64> {
        if !self.grid.same_as(&other.grid) {
            return Err(Error::GridMismatch);
        }
        let s: Complex64 = self.samples.iter().zip(&other.samples).map(|(a, b)| a.conj() * b).sum();
        Ok(s * self.grid.dx())
    }

    /// Largest edge amplitude relative to the peak; zero for a zero field.
    pub fn edge_ratio(&self) -> f64 {
        let peak = self.samples.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if peak == 0.0 {
            return 0.0;
        }
        let n = self.samples.len();
        self.samples[0].norm().max(self.samples[n - 1].norm()) / peak
    }

    pub(crate) fn check_edges(&self) -> Result<()> {
        let edge = self.edge_ratio();
        if edge >= EDGE_TOL {
            return Err(Error::GridTooNarrow { edge });
        }
        Ok(())
    }
}

/// Pointwise `Σ cᵢ Eᵢ`, without renormalisation.
pub fn superpose(fields: &[Field1D], coeffs: &[Complex64]) -> Result<Field1D> {
    if fields.len() != coeffs.len() {
        return Err(Error::LengthMismatch { left: fields.len(), right: coeffs.len() });
    }
    let first = fields.first().ok_or_else(|| Error::invalid("fields", "empty list"))?;
    let grid = *first.grid();
    if fields.iter().any(|f| !f.grid.same_as(&grid)) {
        return Err(Error::GridMismatch);
    }
    let mut out = vec![Complex64::new(0.0, 0.0); grid.n()];
    for (f, c) in fields.iter().zip(coeffs) {
        for (o, e) in out.iter_mut().zip(&f.samples) {
            *o += c * e;
        }
    }
    Field1D::new(grid, out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mode {
    pub weight: f64,
    pub field: Field1D,
}

/// Incoherent mixture of coherent modes sharing one grid.
///
/// The mutual coherence is `Γ(x₁, x₂) = Σᵢ wᵢ Eᵢ*(x₁) Eᵢ(x₂)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    modes: Vec<Mode>,
}

impl Ensemble {
    pub fn new(modes: Vec<Mode>) -> Result<Self> {
        let first = modes.first().ok_or_else(|| Error::invalid("modes", "ensemble needs at least one mode"))?;
        let grid = *first.field.grid();
        for m in &modes {
            if !(m.weight >= 0.0 && m.weight.is_finite()) {
                return Err(Error::invalid("weight", format!("weights must be finite and nonnegative, got {}", m.weight)));
            }
            if !m.field.grid.same_as(&grid) {
                return Err(Error::GridMismatch);
            }
        }
        Ok(Self { modes })
    }

    pub fn coherent(field: Field1D) -> Self {
        Self { modes: vec![Mode { weight: 1.0, field }] }
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn grid(&self) -> &Grid1D {
        self.modes[0].field.grid()
    }

    /// `Γ(x_i, x_j)`.
    pub fn coherence(&self, i: usize, j: usize) -> Complex64 {
        self.modes
            .iter()
            .map(|m| m.field.samples[i].conj() * m.field.samples[j] * m.weight)
            .sum()
    }

    /// Full `n × n` coherence matrix, row-major.
    pub fn coherence_matrix(&self) -> Vec<Complex64> {
        let n = self.grid().n();
        let mut g = vec![Complex64::new(0.0, 0.0); n * n];
        for m in &self.modes {
            let e = &m.field.samples;
            for i in 0..n {
                let a = e[i].conj() * m.weight;
                for j in 0..n {
                    g[i * n + j] += a * e[j];
                }
            }
        }
        g
    }

    /// `⟨|E(x_j)|²⟩` per grid point.
    pub fn intensity(&self) -> Vec<f64> {
        let n = self.grid().n();
        (0..n).map(|j| self.modes.iter().map(|m| m.weight * m.field.samples[j].norm_sqr()).sum()).collect()
    }

    pub fn map_fields(&self, mut f: impl FnMut(&Field1D) -> Result<Field1D>) -> Result<Self> {
        let modes = self
            .modes
            .iter()
            .map(|m| Ok(Mode { weight: m.weight, field: f(&m.field)? }))
            .collect::<Result<Vec<_>>>()?;
        Ensemble::new(modes)
    }

    /// Stable 64-bit fingerprint of grid, weights and samples, as hex.
    pub fn fingerprint(&self) -> String {
        let mut h = FnvHasher::default();
        let g = self.grid();
        h.write_u64(g.n() as u64);
        h.write_u64(g.dx().to_bits());
        h.write_u64(g.x_center().to_bits());
        for m in &self.modes {
            h.write_u64(m.weight.to_bits());
            for z in &m.field.samples {
                h.write_u64(z.re.to_bits());
                h.write_u64(z.im.to_bits());
            }
        }
        format!("{:016x}", h.finish())
    }

    /// Half-extent of the intensity support (amplitude above `EDGE_TOL` of the peak).
    pub fn support_half_width(&self) -> f64 {
        let inten = self.intensity();
        support_half_width(&inten, self.grid().dx())
    }

    /// Half-extent of the power-spectrum support in angular frequency.
    pub fn spectral_half_width(&self) -> f64 {
        let grid = *self.grid();
        let n = grid.n();
        let mut spec = vec![0.0; n];
        for m in &self.modes {
            let s = propagate::spectrum(&m.field);
            for (acc, z) in spec.iter_mut().zip(s) {
                *acc += m.weight * z.norm_sqr();
            }
        }
        // FFT order -> ascending frequency
        spec.rotate_left(n / 2);
        support_half_width(&spec, grid.natural_dk() * 2.0)
    }
}

fn support_half_width(profile: &[f64], step: f64) -> f64 {
    let peak = profile.iter().cloned().fold(0.0, f64::max);
    if peak == 0.0 {
        return 0.0;
    }
    let thr = peak * EDGE_TOL * EDGE_TOL;
    let lo = profile.iter().position(|&v| v > thr).unwrap_or(0);
    let hi = profile.iter().rposition(|&v| v > thr).unwrap_or(0);
    0.5 * (hi - lo) as f64 * step
}

/// Sum of `wᵢ · power(Eᵢ)`.
pub fn total_power(ensemble: &Ensemble) -> f64 {
    ensemble.modes.iter().map(|m| m.weight * m.field.power()).sum()
}

/// Two beams with degree of coherence `mu`, as a two-mode ensemble.
///
/// Modes are `(u1 ± u2)/√2` with weights `(1 ± mu)/2`, which gives
/// `Γ = ½[u1*u1 + u2*u2] + (mu/2)[u1*(x₁)u2(x₂) + u2*(x₁)u1(x₂)]`.
pub fn make_partially_coherent_pair(u1: &Field1D, u2: &Field1D, mu: f64) -> Result<Ensemble> {
    if !(mu.abs() <= 1.0) {
        return Err(Error::invalid("mu", format!("degree of coherence must lie in [-1, 1], got {mu}")));
    }
    let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let plus = superpose(&[u1.clone(), u2.clone()], &[s, s])?;
    let minus = superpose(&[u1.clone(), u2.clone()], &[s, -s])?;
    Ensemble::new(vec![
        Mode { weight: 0.5 * (1.0 + mu), field: plus },
        Mode { weight: 0.5 * (1.0 - mu), field: minus },
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> Grid1D {
        Grid1D::centered(256, 0.0625).unwrap()
    }

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn superpose_identity_and_cancellation() {
        let g = make_gaussian(grid(), 0.0, 1.0, 0.5, 0.0).unwrap();
        let same = superpose(std::slice::from_ref(&g), &[c(1.0)]).unwrap();
        assert_eq!(same, g);
        let zero = superpose(&[g.clone(), g.clone()], &[c(1.0), c(-1.0)]).unwrap();
        assert_eq!(zero.power(), 0.0);
    }

    #[test]
    fn superpose_tilted_pair_power() {
        let up = make_gaussian(grid(), 0.0, 1.0, 3.0, 0.0).unwrap();
        let dn = make_gaussian(grid(), 0.0, 1.0, -3.0, 0.0).unwrap();
        let s = c(std::f64::consts::FRAC_1_SQRT_2);
        let sum = superpose(&[up, dn], &[s, s]).unwrap();
        // ⟨g₊|g₋⟩ = exp(-a²(k₁-k₂)²/4) = e^{-9}
        assert!((sum.power() - (1.0 + (-9.0f64).exp())).abs() < 1e-9);
    }

    #[test]
    fn superpose_errors() {
        let g = make_gaussian(grid(), 0.0, 1.0, 0.0, 0.0).unwrap();
        assert!(matches!(superpose(std::slice::from_ref(&g), &[c(1.0), c(1.0)]), Err(Error::LengthMismatch { .. })));
        let other = make_gaussian(Grid1D::centered(128, 0.125).unwrap(), 0.0, 1.0, 0.0, 0.0).unwrap();
        assert!(matches!(superpose(&[g, other], &[c(1.0), c(1.0)]), Err(Error::GridMismatch)));
    }

    #[test]
    fn total_power_cases() {
        let g = make_gaussian(grid(), 0.0, 1.0, 0.0, 0.0).unwrap();
        assert!((total_power(&Ensemble::coherent(g.clone())) - 1.0).abs() < 1e-12);
        let h = make_hermite_gauss(grid(), 1, 1.0).unwrap();
        let mix = Ensemble::new(vec![Mode { weight: 0.3, field: g }, Mode { weight: 0.7, field: h }]).unwrap();
        assert!((total_power(&mix) - 1.0).abs() < 1e-12);
        assert_eq!(total_power(&Ensemble::coherent(Field1D::zeros(grid()))), 0.0);
    }

    #[test]
    fn pair_coherence_structure() {
        let u1 = make_hermite_gauss(grid(), 0, 1.0).unwrap();
        let u2 = make_hermite_gauss(grid(), 1, 1.0).unwrap();
        let full = make_partially_coherent_pair(&u1, &u2, 1.0).unwrap();
        assert_eq!(full.modes()[1].weight, 0.0);

        let inc = make_partially_coherent_pair(&u1, &u2, 0.0).unwrap();
        let (a, b) = (u1.samples(), u2.samples());
        for i in (0..256).step_by(7) {
            for j in (0..256).step_by(5) {
                let expect = (a[i].conj() * a[j] + b[i].conj() * b[j]) * 0.5;
                assert!((inc.coherence(i, j) - expect).norm() < 1e-12);
            }
        }
        assert!(make_partially_coherent_pair(&u1, &u2, 1.5).is_err());
    }

    #[test]
    fn coherence_is_weighted_sum_of_modes() {
        let u1 = make_gaussian(grid(), -1.0, 1.0, 2.0, 0.1).unwrap();
        let u2 = make_gaussian(grid(), 1.0, 0.8, -1.0, 0.0).unwrap();
        let ens = make_partially_coherent_pair(&u1, &u2, 0.3).unwrap();
        let full = ens.coherence_matrix();
        let n = 256;
        for i in (0..n).step_by(11) {
            for j in (0..n).step_by(13) {
                let per_mode: Complex64 = ens
                    .modes()
                    .iter()
                    .map(|m| m.field.samples()[i].conj() * m.field.samples()[j] * m.weight)
                    .sum();
                assert!((full[i * n + j] - per_mode).norm() < 1e-12);
                // Hermitian
                assert!((full[i * n + j] - full[j * n + i].conj()).norm() < 1e-15);
            }
        }
    }
}
