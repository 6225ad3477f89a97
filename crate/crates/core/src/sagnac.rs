//! Rotated-replica Sagnac interferometer with area-integrated two-port detection.
//!
//! The steering mirror displaces the input by `x` and tilts it by `k`, giving
//! `A(ξ) = exp(ikξ) E(x + ξ)`. The beam splitter sends two replicas around the
//! loop; the Dove prism leaves them mirror images of each other, so the
//! recombined ports see `A` interfering with `A(−ξ)`. With
//! `O = Re ∫ A*(−ξ) A(ξ) dξ = π W(x, k)` and an ideal 50:50 splitter,
//!
//! ```text
//! bright = S/2 + (cos φ / 2) O
//! dark   = S/2 − (cos φ / 2) O
//! ```
//!
//! where `S` is the input power and `φ` the relative replica phase.

use num_complex::Complex64;
use rand_distr::{Distribution, StandardNormal};
use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::field::{total_power, Ensemble, Field1D};
use crate::io::{fields, parse_err, parse_f64, parse_u64, read_text, write_text, KeyValues};
use crate::rng::point_rng;
use crate::wigner::{MapMeta, WignerMap};

/// Relative power loss above which a steered beam counts as clipped.
pub const CLIP_TOL: f64 = 1e-6;

/// Smallest `|cos φ|` accepted when dividing out the interference sign.
pub const MIN_COS_PHASE: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MirrorSetting {
    /// Displacement, quantised to the field grid.
    pub x: f64,
    /// Tilt, continuous.
    pub k: f64,
}

impl MirrorSetting {
    pub fn new(x: f64, k: f64) -> Self {
        Self { x, k }
    }

    pub fn origin() -> Self {
        Self { x: 0.0, k: 0.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterferometerConfig {
    pub phase: f64,
    /// Standard deviation of independent per-point phase noise.
    pub phase_jitter_sigma: f64,
    /// Splitter deviation from 50:50: `t² = ½ + ε`, `r² = ½ − ε`.
    pub split_imbalance: f64,
    pub seed: u64,
}

impl Default for InterferometerConfig {
    fn default() -> Self {
        Self { phase: 0.0, phase_jitter_sigma: 0.0, split_imbalance: 0.0, seed: 0 }
    }
}

impl InterferometerConfig {
    pub fn with_phase(phase: f64) -> Self {
        Self { phase, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.phase.is_finite() {
            return Err(Error::invalid("phase", "must be finite"));
        }
        if !(self.phase_jitter_sigma >= 0.0 && self.phase_jitter_sigma.is_finite()) {
            return Err(Error::invalid("phase_jitter_sigma", "must be finite and nonnegative"));
        }
        if !(self.split_imbalance.abs() <= 0.1) {
            return Err(Error::invalid("split_imbalance", format!("must lie in [-0.1, 0.1], got {}", self.split_imbalance)));
        }
        Ok(())
    }

    fn draw_phase(&self, index: u64) -> f64 {
        let noise: f64 = StandardNormal.sample(&mut point_rng(self.seed, index));
        self.phase + self.phase_jitter_sigma * noise
    }
}

/// `E'(ξ) = exp(ikξ) E(x + ξ)`, with `ξ` measured from the grid pivot.
/// Samples shifted in from beyond the grid are zero.
pub fn steer(field: &Field1D, setting: MirrorSetting) -> Result<Field1D> {
    let steered = shift_and_tilt(field, setting)?;
    let (p0, p1) = (field.power(), steered.power());
    if p0 > 0.0 && (p0 - p1) > CLIP_TOL * p0 {
        return Err(Error::ClippedBeam { x: setting.x, k: setting.k, lost: (p0 - p1) / p0 });
    }
    Ok(steered)
}

fn shift_and_tilt(field: &Field1D, setting: MirrorSetting) -> Result<Field1D> {
    let grid = *field.grid();
    let shift = grid.steps_from_pivot(setting.x)?;
    let n = grid.n() as i64;
    let src = field.samples();
    let out = (0..n)
        .map(|j| {
            let from = j + shift;
            if (0..n).contains(&from) {
                src[from as usize] * Complex64::from_polar(1.0, setting.k * grid.offset(j as usize))
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    Field1D::new(grid, out)
}

/// Mirror image `E(−ξ)` about the grid pivot: sample `j` ↔ `n − j`, with the
/// unpaired index 0 left in place.
pub fn parity(field: &Field1D) -> Field1D {
    let s = field.samples();
    let n = s.len();
    let out: Vec<Complex64> = (0..n).map(|j| if j == 0 { s[0] } else { s[n - j] }).collect();
    Field1D::new(*field.grid(), out).expect("same grid and finite samples")
}

/// `∫ A*(−ξ) A(ξ) dξ`, the overlap of a beam with its own mirror image.
pub fn replica_overlap(field: &Field1D) -> Complex64 {
    let mirrored = parity(field);
    let s: Complex64 = mirrored.samples().iter().zip(field.samples()).map(|(m, a)| m.conj() * a).sum();
    s * field.grid().dx()
}

/// Ensemble-averaged `Re ∫ A*(−ξ) A(ξ) dξ` after steering.
pub(crate) fn steered_overlap(ensemble: &Ensemble, setting: MirrorSetting) -> Result<f64> {
    let mut overlap = 0.0;
    let mut kept = 0.0;
    for m in ensemble.modes() {
        let a = shift_and_tilt(&m.field, setting)?;
        kept += m.weight * a.power();
        overlap += m.weight * replica_overlap(&a).re;
    }
    let s = total_power(ensemble);
    if s > 0.0 && (s - kept) > CLIP_TOL * s {
        return Err(Error::ClippedBeam { x: setting.x, k: setting.k, lost: (s - kept) / s });
    }
    Ok(overlap)
}

/// Bright/dark port powers for a known replica phase.
///
/// With `t² = ½ + ε` and `r² = ½ − ε` the bright port carries the `tt` and
/// `rr` paths and the dark port the two `tr` paths, so
/// `bright = (t⁴ + r⁴) S + 2t²r² cos φ O` and `dark = 2t²r² (S − cos φ O)`.
pub(crate) fn ports_from_overlap(s: f64, overlap: f64, phase: f64, imbalance: f64) -> (f64, f64) {
    let t2 = 0.5 + imbalance;
    let r2 = 0.5 - imbalance;
    let cross = 2.0 * t2 * r2;
    let c = phase.cos();
    let bright = (t2 * t2 + r2 * r2) * s + cross * c * overlap;
    let dark = cross * (s - c * overlap);
    (bright.max(0.0), dark.max(0.0))
}

fn ports_at(ensemble: &Ensemble, setting: MirrorSetting, config: &InterferometerConfig, index: u64) -> Result<(f64, f64)> {
    let s = total_power(ensemble);
    let overlap = steered_overlap(ensemble, setting)?;
    Ok(ports_from_overlap(s, overlap, config.draw_phase(index), config.split_imbalance))
}

/// Detector powers at both output ports for one mirror setting.
pub fn port_intensities(ensemble: &Ensemble, setting: MirrorSetting, config: &InterferometerConfig) -> Result<(f64, f64)> {
    config.validate()?;
    ports_at(ensemble, setting, config, 0)
}

/// Raw detector record of a mirror scan.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanResult {
    pub settings: Vec<MirrorSetting>,
    pub bright: Vec<f64>,
    pub dark: Vec<f64>,
    pub total_power: f64,
    pub config: InterferometerConfig,
}

/// Settings for a rectangular scan, x as the slow index.
pub fn rectangular_settings(x_axis: &[f64], k_axis: &[f64]) -> Vec<MirrorSetting> {
    x_axis.iter().flat_map(|&x| k_axis.iter().map(move |&k| MirrorSetting { x, k })).collect()
}

/// Runs every setting; point `i` draws its phase noise from substream `i`.
pub fn run_scan(ensemble: &Ensemble, settings: &[MirrorSetting], config: &InterferometerConfig) -> Result<ScanResult> {
    config.validate()?;
    let mut bright = Vec::with_capacity(settings.len());
    let mut dark = Vec::with_capacity(settings.len());
    for (i, &st) in settings.iter().enumerate() {
        let (b, d) = ports_at(ensemble, st, config, i as u64)?;
        bright.push(b);
        dark.push(d);
    }
    Ok(ScanResult { settings: settings.to_vec(), bright, dark, total_power: total_power(ensemble), config: *config })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReconstructionMethod {
    /// `W = (bright − S/2) · 2 / (π cos φ)`.
    SinglePortPedestal,
    /// `W = (bright − dark) / (π cos φ)`.
    TwoPort,
}

impl ReconstructionMethod {
    pub fn tag(self) -> &'static str {
        match self {
            ReconstructionMethod::SinglePortPedestal => "single_port_pedestal",
            ReconstructionMethod::TwoPort => "two_port",
        }
    }

    pub fn from_tag(s: &str) -> Option<Self> {
        match s {
            "single_port_pedestal" => Some(ReconstructionMethod::SinglePortPedestal),
            "two_port" => Some(ReconstructionMethod::TwoPort),
            _ => None,
        }
    }
}

/// Axis values and the setting index of each `(ix, ik)` cell.
pub(crate) struct GridLayout {
    pub x_axis: Vec<f64>,
    pub k_axis: Vec<f64>,
    /// `cell[ix * nk + ik]` is the index into the settings list.
    pub cell: Vec<usize>,
}

fn sorted_unique(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| a.partial_cmp(b).expect("finite settings"));
    v.dedup();
    v
}

pub(crate) fn grid_layout(settings: &[MirrorSetting]) -> Result<GridLayout> {
    if settings.iter().any(|s| !s.x.is_finite() || !s.k.is_finite()) {
        return Err(Error::NonRectangularScan);
    }
    let x_axis = sorted_unique(settings.iter().map(|s| s.x).collect());
    let k_axis = sorted_unique(settings.iter().map(|s| s.k).collect());
    let nk = k_axis.len();
    if x_axis.len() * nk != settings.len() || settings.is_empty() {
        return Err(Error::NonRectangularScan);
    }
    let xi: HashMap<u64, usize> = x_axis.iter().enumerate().map(|(i, x)| (x.to_bits(), i)).collect();
    let ki: HashMap<u64, usize> = k_axis.iter().enumerate().map(|(i, k)| (k.to_bits(), i)).collect();
    let mut cell = vec![usize::MAX; settings.len()];
    for (n, s) in settings.iter().enumerate() {
        let c = xi[&s.x.to_bits()] * nk + ki[&s.k.to_bits()];
        if cell[c] != usize::MAX {
            return Err(Error::NonRectangularScan);
        }
        cell[c] = n;
    }
    Ok(GridLayout { x_axis, k_axis, cell })
}

pub(crate) fn check_phase(phase: f64) -> Result<f64> {
    let c = phase.cos();
    if c.abs() <= MIN_COS_PHASE {
        return Err(Error::PhaseNull { cos: c });
    }
    Ok(c)
}

/// Wigner map from detector powers, undoing the declared `cos φ` factor.
pub fn reconstruct_wigner(scan: &ScanResult, method: ReconstructionMethod) -> Result<WignerMap> {
    let c = check_phase(scan.config.phase)?;
    let layout = grid_layout(&scan.settings)?;
    let s = scan.total_power;
    let values = layout
        .cell
        .iter()
        .map(|&i| match method {
            ReconstructionMethod::SinglePortPedestal => (scan.bright[i] - 0.5 * s) * 2.0 / (PI * c),
            ReconstructionMethod::TwoPort => (scan.bright[i] - scan.dark[i]) / (PI * c),
        })
        .collect();
    let meta = MapMeta { method: method.tag().to_string(), phase: Some(scan.config.phase), ..Default::default() };
    WignerMap::new(layout.x_axis, layout.k_axis, values, meta)
}

impl ScanResult {
    pub fn to_csv(&self) -> String {
        let c = &self.config;
        let mut s = String::new();
        writeln!(s, "# S = {}", self.total_power).unwrap();
        writeln!(s, "# phase = {}", c.phase).unwrap();
        writeln!(s, "# phase_jitter_sigma = {}", c.phase_jitter_sigma).unwrap();
        writeln!(s, "# split_imbalance = {}", c.split_imbalance).unwrap();
        writeln!(s, "# seed = {}", c.seed).unwrap();
        writeln!(s, "x,k,bright,dark").unwrap();
        for (i, st) in self.settings.iter().enumerate() {
            writeln!(s, "{},{},{},{}", st.x, st.k, self.bright[i], self.dark[i]).unwrap();
        }
        s
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        write_text(path, &self.to_csv())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = read_text(path)?;
        let mut header = KeyValues::default();
        let (mut settings, mut bright, mut dark) = (Vec::new(), Vec::new(), Vec::new());
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with("x,") {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                if let Some((k, v)) = rest.split_once('=') {
                    header.push(k.trim(), v.trim());
                }
                continue;
            }
            let p = fields(path, i + 1, line, 4)?;
            settings.push(MirrorSetting { x: parse_f64(path, i + 1, p[0])?, k: parse_f64(path, i + 1, p[1])? });
            bright.push(parse_f64(path, i + 1, p[2])?);
            dark.push(parse_f64(path, i + 1, p[3])?);
        }
        let num = |key: &str| -> Result<f64> {
            let v = header.get(key).ok_or_else(|| parse_err(path, 1, format!("missing `# {key} =` header")))?;
            parse_f64(path, 1, v)
        };
        let seed = header.get("seed").map(|v| parse_u64(path, 1, v)).transpose()?.unwrap_or(0);
        let config = InterferometerConfig {
            phase: num("phase")?,
            phase_jitter_sigma: num("phase_jitter_sigma").unwrap_or(0.0),
            split_imbalance: num("split_imbalance").unwrap_or(0.0),
            seed,
        };
        Ok(ScanResult { settings, bright, dark, total_power: num("S")?, config })
    }
}
