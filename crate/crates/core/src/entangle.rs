//! Two-photon spatial states, their joint Wigner function, and a CHSH test
//! built from joint parity correlations.
//!
//! Each photon goes through its own interferometer. At zero phase the joint
//! parity correlation `E = Σ s₁s₂ p(s₁, s₂)` over the four detector pairs is
//! `π² W₂(x₁, k₁, x₂, k₂)`, so a Bell test only needs four joint Wigner
//! values.

use num_complex::Complex64;
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::field::{Ensemble, Field1D, Grid1D, Mode, EDGE_TOL};
use crate::io::{fields, parse_err, parse_f64, parse_u64, read_text, write_text, KeyValues};
use crate::sagnac::{MirrorSetting, CLIP_TOL};

/// Two-photon amplitude `ψ(x₁, x₂)`, row-major with `x₁` as the slow index.
#[derive(Debug, Clone, PartialEq)]
pub struct JointField {
    grid1: Grid1D,
    grid2: Grid1D,
    samples: Vec<Complex64>,
}

impl JointField {
    /// Normalizes `samples` to `Σ|ψ|² dx₁ dx₂ = 1`.
    pub fn new(grid1: Grid1D, grid2: Grid1D, mut samples: Vec<Complex64>) -> Result<Self> {
        let len = grid1.n() * grid2.n();
        if samples.len() != len {
            return Err(Error::LengthMismatch { left: samples.len(), right: len });
        }
        if samples.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::invalid("samples", "non-finite amplitude"));
        }
        let norm: f64 = samples.iter().map(|z| z.norm_sqr()).sum::<f64>() * grid1.dx() * grid2.dx();
        if !(norm > 0.0) {
            return Err(Error::ZeroPower);
        }
        let s = norm.sqrt().recip();
        samples.iter_mut().for_each(|z| *z *= s);
        Ok(Self { grid1, grid2, samples })
    }

    pub fn from_fn(grid1: Grid1D, grid2: Grid1D, f: impl Fn(f64, f64) -> Complex64) -> Result<Self> {
        let samples = (0..grid1.n()).flat_map(|i| (0..grid2.n()).map(move |j| (i, j))).map(|(i, j)| f(grid1.x(i), grid2.x(j)));
        Self::new(grid1, grid2, samples.collect())
    }

    /// `ψ = u₁(x₁) u₂(x₂)`.
    pub fn product(u1: &Field1D, u2: &Field1D) -> Result<Self> {
        let (a, b) = (u1.samples(), u2.samples());
        let samples = a.iter().flat_map(|&p| b.iter().map(move |&q| p * q)).collect();
        Self::new(*u1.grid(), *u2.grid(), samples)
    }

    pub fn grid1(&self) -> &Grid1D {
        &self.grid1
    }

    pub fn grid2(&self) -> &Grid1D {
        &self.grid2
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn get(&self, i1: usize, i2: usize) -> Complex64 {
        self.samples[i1 * self.grid2.n() + i2]
    }

    pub fn norm(&self) -> f64 {
        self.samples.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.grid1.dx() * self.grid2.dx()
    }

    /// Largest amplitude on the boundary relative to the peak.
    pub fn edge_ratio(&self) -> f64 {
        let (n1, n2) = (self.grid1.n(), self.grid2.n());
        let peak = self.samples.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let mut edge = 0.0f64;
        for i in 0..n1 {
            for j in [0, n2 - 1] {
                edge = edge.max(self.get(i, j).norm());
            }
        }
        for j in 0..n2 {
            for i in [0, n1 - 1] {
                edge = edge.max(self.get(i, j).norm());
            }
        }
        if peak > 0.0 { edge / peak } else { 0.0 }
    }

    /// Reduced single-photon state as an ensemble whose modes are the slices
    /// of `ψ` at each sample of the other photon.
    pub fn reduced(&self, photon: Photon) -> Result<Ensemble> {
        let (n1, n2) = (self.grid1.n(), self.grid2.n());
        let modes = match photon {
            Photon::First => (0..n2)
                .map(|j| {
                    let col = (0..n1).map(|i| self.get(i, j)).collect();
                    Ok(Mode { weight: self.grid2.dx(), field: Field1D::new(self.grid1, col)? })
                })
                .collect::<Result<Vec<_>>>()?,
            Photon::Second => (0..n1)
                .map(|i| {
                    let row = self.samples[i * n2..(i + 1) * n2].to_vec();
                    Ok(Mode { weight: self.grid1.dx(), field: Field1D::new(self.grid2, row)? })
                })
                .collect::<Result<Vec<_>>>()?,
        };
        Ensemble::new(modes)
    }

    /// CSV with `# grid1 = n,dx,x_center` and `# grid2 = ...` headers, then
    /// `i1,i2,re,im` rows.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for (name, g) in [("grid1", &self.grid1), ("grid2", &self.grid2)] {
            writeln!(s, "# {name} = {},{},{}", g.n(), g.dx(), g.x_center()).unwrap();
        }
        writeln!(s, "i1,i2,re,im").unwrap();
        for i in 0..self.grid1.n() {
            for j in 0..self.grid2.n() {
                let z = self.get(i, j);
                writeln!(s, "{i},{j},{},{}", z.re, z.im).unwrap();
            }
        }
        s
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        write_text(path, &self.to_csv())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = read_text(path)?;
        let mut header = KeyValues::default();
        let mut rows = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with("i1,") {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                if let Some((k, v)) = rest.split_once('=') {
                    header.push(k.trim(), v.trim());
                }
                continue;
            }
            rows.push((i + 1, line));
        }
        let grid = |name: &str| -> Result<Grid1D> {
            let v = header.get(name).ok_or_else(|| parse_err(path, 1, format!("missing `# {name} =` header")))?;
            let p = fields(path, 1, v, 3)?;
            Grid1D::new(parse_u64(path, 1, p[0])? as usize, parse_f64(path, 1, p[1])?, parse_f64(path, 1, p[2])?)
                .map_err(|e| parse_err(path, 1, e.to_string()))
        };
        let (g1, g2) = (grid("grid1")?, grid("grid2")?);
        let mut samples = vec![Complex64::new(0.0, 0.0); g1.n() * g2.n()];
        for (ln, line) in rows {
            let p = fields(path, ln, line, 4)?;
            let (i, j) = (parse_u64(path, ln, p[0])? as usize, parse_u64(path, ln, p[1])? as usize);
            if i >= g1.n() || j >= g2.n() {
                return Err(parse_err(path, ln, format!("index ({i}, {j}) outside the grids")));
            }
            samples[i * g2.n() + j] = Complex64::new(parse_f64(path, ln, p[2])?, parse_f64(path, ln, p[3])?);
        }
        Self::new(g1, g2, samples)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Photon {
    First,
    Second,
}

/// `ψ ∝ exp(−(x₁ − x₂)²/(4σ₋²) − (x₁ + x₂)²/(4σ₊²))`.
///
/// `σ₋ ≪ σ₊` correlates the positions; `σ₋ = σ₊` is a product of two
/// Gaussians of width `a = σ`. The position correlation coefficient is
/// `(σ₊² − σ₋²)/(σ₊² + σ₋²)`.
pub fn make_epr(grid1: Grid1D, grid2: Grid1D, sigma_minus: f64, sigma_plus: f64) -> Result<JointField> {
    for (name, s) in [("sigma_minus", sigma_minus), ("sigma_plus", sigma_plus)] {
        if !(s > 0.0 && s.is_finite()) {
            return Err(Error::invalid(name, format!("width must be positive, got {s}")));
        }
    }
    let (xc1, xc2) = (grid1.x_center(), grid2.x_center());
    let psi = JointField::from_fn(grid1, grid2, |x1, x2| {
        let (u, v) = (x1 - xc1, x2 - xc2);
        let d = u - v;
        let s = u + v;
        Complex64::new((-d * d / (4.0 * sigma_minus * sigma_minus) - s * s / (4.0 * sigma_plus * sigma_plus)).exp(), 0.0)
    })?;
    let edge = psi.edge_ratio();
    if edge >= EDGE_TOL {
        return Err(Error::GridTooNarrow { edge });
    }
    Ok(psi)
}

/// `(1/π²) Re ΣΣ exp(2ik₁ξ₁ + 2ik₂ξ₂) ψ*(x₁ − ξ₁, x₂ − ξ₂) ψ(x₁ + ξ₁, x₂ + ξ₂) dξ₁ dξ₂`
/// over mirror pairs of samples, as in the one-photon oracle.
pub fn joint_wigner_point(psi: &JointField, x1: f64, k1: f64, x2: f64, k2: f64) -> Result<f64> {
    let pairs1 = mirror_pairs(&psi.grid1, x1, k1)?;
    let pairs2 = mirror_pairs(&psi.grid2, x2, k2)?;
    let mut rows = Vec::with_capacity(pairs1.len());
    for &(i1, j1, ph1) in &pairs1 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &(i2, j2, ph2) in &pairs2 {
            acc += ph2 * psi.get(i1, i2).conj() * psi.get(j1, j2);
        }
        rows.push((ph1 * acc).re);
    }
    Ok(crate::analysis::pairwise_sum(&rows) * psi.grid1.dx() * psi.grid2.dx() / (PI * PI))
}

/// `(i, j, exp(2ikξ))` for every pair `i + j` fixed by `x`.
fn mirror_pairs(grid: &Grid1D, x: f64, k: f64) -> Result<Vec<(usize, usize, Complex64)>> {
    let n = grid.n() as i64;
    let t = grid.doubled_index(x)?;
    let (lo, hi) = ((t - (n - 1)).max(0), t.min(n - 1));
    Ok((lo..=hi)
        .map(|i| {
            let j = t - i;
            let xi = (j - i) as f64 * grid.dx() * 0.5;
            (i as usize, j as usize, Complex64::from_polar(1.0, 2.0 * k * xi))
        })
        .collect())
}

/// Parity correlation `π² W₂` at the two mirror settings.
pub fn parity_correlation(psi: &JointField, s1: MirrorSetting, s2: MirrorSetting) -> Result<f64> {
    Ok(PI * PI * joint_wigner_point(psi, s1.x, s1.k, s2.x, s2.k)?)
}

/// The same correlation assembled from detector statistics at zero phase:
/// `p_bb − p_bd − p_db + p_dd`.
pub fn parity_correlation_via_ports(psi: &JointField, s1: MirrorSetting, s2: MirrorSetting) -> Result<f64> {
    let p = coincidence_probabilities(psi, s1, s2, 0.0, 0.0)?;
    Ok(p.bb - p.bd - p.db + p.dd)
}

/// Joint detection probabilities, bright (`b`) or dark (`d`) for each photon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coincidences {
    pub bb: f64,
    pub bd: f64,
    pub db: f64,
    pub dd: f64,
}

impl Coincidences {
    pub fn sum(&self) -> f64 {
        self.bb + self.bd + self.db + self.dd
    }
}

/// Born-rule probabilities for the photon pair in two interferometers.
///
/// Each photon's beam is steered as in the one-photon apparatus and the
/// port amplitudes are `(A ± e^{iφ} P A)/2` with `P` the parity about the
/// pivot, applied on each photon's axis.
pub fn coincidence_probabilities(
    psi: &JointField,
    s1: MirrorSetting,
    s2: MirrorSetting,
    phi1: f64,
    phi2: f64,
) -> Result<Coincidences> {
    let a = steer_joint(psi, s1, s2)?;
    let (n1, n2) = (psi.grid1.n(), psi.grid2.n());
    let mirror = |j: usize, n: usize| if j == 0 { 0 } else { n - j };
    let (e1, e2) = (Complex64::from_polar(1.0, phi1), Complex64::from_polar(1.0, phi2));
    let mut acc = [0.0f64; 4];
    for i in 0..n1 {
        let mi = mirror(i, n1);
        for j in 0..n2 {
            let mj = mirror(j, n2);
            let (p0, p1, p2, p12) = (a[i * n2 + j], e1 * a[mi * n2 + j], e2 * a[i * n2 + mj], e1 * e2 * a[mi * n2 + mj]);
            for (slot, (t1, t2)) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)].into_iter().enumerate() {
                acc[slot] += ((p0 + t1 * p1 + t2 * p2 + t1 * t2 * p12) * 0.25).norm_sqr();
            }
        }
    }
    let w = psi.grid1.dx() * psi.grid2.dx();
    Ok(Coincidences { bb: acc[0] * w, bd: acc[1] * w, db: acc[2] * w, dd: acc[3] * w })
}

/// `A(ξ₁, ξ₂) = exp(ik₁ξ₁ + ik₂ξ₂) ψ(x₁ + ξ₁, x₂ + ξ₂)` on the pivot-centred grids.
fn steer_joint(psi: &JointField, s1: MirrorSetting, s2: MirrorSetting) -> Result<Vec<Complex64>> {
    let (g1, g2) = (psi.grid1, psi.grid2);
    let (sh1, sh2) = (g1.steps_from_pivot(s1.x)?, g2.steps_from_pivot(s2.x)?);
    let (n1, n2) = (g1.n() as i64, g2.n() as i64);
    let tilt2: Vec<Complex64> = (0..g2.n()).map(|j| Complex64::from_polar(1.0, s2.k * g2.offset(j))).collect();
    let mut out = vec![Complex64::new(0.0, 0.0); psi.samples.len()];
    let mut kept = 0.0;
    for i in 0..n1 {
        let fi = i + sh1;
        if !(0..n1).contains(&fi) {
            continue;
        }
        let t1 = Complex64::from_polar(1.0, s1.k * g1.offset(i as usize));
        for j in 0..n2 {
            let fj = j + sh2;
            if (0..n2).contains(&fj) {
                let v = t1 * tilt2[j as usize] * psi.get(fi as usize, fj as usize);
                kept += v.norm_sqr();
                out[(i * n2 + j) as usize] = v;
            }
        }
    }
    let lost = 1.0 - kept * g1.dx() * g2.dx();
    if lost > CLIP_TOL {
        let (x, k) = if sh1 != 0 || s1.k != 0.0 { (s1.x, s1.k) } else { (s2.x, s2.k) };
        return Err(Error::ClippedBeam { x, k, lost });
    }
    Ok(out)
}

/// Settings for one CHSH run: `a, a′` for the first photon, `b, b′` for the second.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChshSettings {
    pub a: MirrorSetting,
    pub a_prime: MirrorSetting,
    pub b: MirrorSetting,
    pub b_prime: MirrorSetting,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChshReport {
    pub settings: ChshSettings,
    pub e_ab: f64,
    pub e_apb: f64,
    pub e_abp: f64,
    pub e_apbp: f64,
    /// `E(a,b) + E(a′,b) + E(a,b′) − E(a′,b′)`.
    pub value: f64,
}

impl ChshReport {
    pub fn report(&self) -> KeyValues {
        let mut kv = KeyValues::default();
        let s = &self.settings;
        for (name, st) in [("a", s.a), ("a_prime", s.a_prime), ("b", s.b), ("b_prime", s.b_prime)] {
            kv.push(format!("{name}_x"), st.x);
            kv.push(format!("{name}_k"), st.k);
        }
        kv.push("E_ab", format!("{:.9}", self.e_ab));
        kv.push("E_aprime_b", format!("{:.9}", self.e_apb));
        kv.push("E_a_bprime", format!("{:.9}", self.e_abp));
        kv.push("E_aprime_bprime", format!("{:.9}", self.e_apbp));
        kv.push("B", format!("{:.9}", self.value));
        kv.push("violates_local_bound", self.value.abs() > 2.0);
        kv
    }
}

pub fn chsh(psi: &JointField, a: MirrorSetting, a_prime: MirrorSetting, b: MirrorSetting, b_prime: MirrorSetting) -> Result<f64> {
    Ok(chsh_report(psi, &ChshSettings { a, a_prime, b, b_prime })?.value)
}

pub fn chsh_report(psi: &JointField, settings: &ChshSettings) -> Result<ChshReport> {
    let e = |s1, s2| parity_correlation(psi, s1, s2);
    let s = settings;
    let (e_ab, e_apb, e_abp, e_apbp) = (e(s.a, s.b)?, e(s.a_prime, s.b)?, e(s.a, s.b_prime)?, e(s.a_prime, s.b_prime)?);
    Ok(ChshReport { settings: *s, e_ab, e_apb, e_abp, e_apbp, value: e_ab + e_apb + e_abp - e_apbp })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{make_gaussian, make_hermite_gauss};
    use crate::photon::click_probability;
    use crate::wigner::wigner_point;

    fn grid() -> Grid1D {
        Grid1D::centered(64, 0.25).unwrap()
    }

    fn product_gauss() -> JointField {
        let g = make_gaussian(grid(), 0.0, 1.0, 0.0, 0.0).unwrap();
        JointField::product(&g, &g).unwrap()
    }

    #[test]
    fn epr_symmetric_case_is_a_product() {
        let e = make_epr(grid(), grid(), 1.0, 1.0).unwrap();
        let p = product_gauss();
        let diff = e.samples().iter().zip(p.samples()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(diff < 1e-12);
        assert!((e.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn epr_position_correlation() {
        let e = make_epr(grid(), grid(), 0.5, 2.0).unwrap();
        let g = grid();
        let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
        for i in 0..g.n() {
            for j in 0..g.n() {
                let w = e.get(i, j).norm_sqr();
                sxx += w * g.x(i) * g.x(i);
                syy += w * g.x(j) * g.x(j);
                sxy += w * g.x(i) * g.x(j);
            }
        }
        assert!((sxy / (sxx * syy).sqrt() - 3.75 / 4.25).abs() < 1e-6);
        assert!(matches!(make_epr(grid(), grid(), 0.5, 20.0), Err(Error::GridTooNarrow { .. })));
        assert!(make_epr(grid(), grid(), 0.0, 1.0).is_err());
    }

    #[test]
    fn origin_values() {
        assert!((joint_wigner_point(&product_gauss(), 0.0, 0.0, 0.0, 0.0).unwrap() - 1.0 / (PI * PI)).abs() < 1e-12);
        let e = make_epr(grid(), grid(), 0.5, 2.0).unwrap();
        assert!((joint_wigner_point(&e, 0.0, 0.0, 0.0, 0.0).unwrap() - 1.0 / (PI * PI)).abs() < 1e-12);
    }

    #[test]
    fn separability_at_half_grid_points() {
        let u1 = make_gaussian(grid(), 0.3, 1.0, 0.5, 0.1).unwrap();
        let u2 = make_hermite_gauss(grid(), 2, 0.9).unwrap();
        let psi = JointField::product(&u1, &u2).unwrap();
        let (e1, e2) = (Ensemble::coherent(u1), Ensemble::coherent(u2));
        let (x1, x2) = (0.125, -0.5);
        let w = joint_wigner_point(&psi, x1, -0.4, x2, 0.7).unwrap();
        let expect = wigner_point(&e1, x1, -0.4).unwrap() * wigner_point(&e2, x2, 0.7).unwrap();
        assert!((w - expect).abs() < 1e-12);
    }

    #[test]
    fn odd_photon_flips_parity() {
        let h = make_hermite_gauss(grid(), 1, 1.0).unwrap();
        let g = make_gaussian(grid(), 0.0, 1.0, 0.0, 0.0).unwrap();
        let psi = JointField::product(&h, &g).unwrap();
        let o = MirrorSetting::origin();
        assert!((parity_correlation(&psi, o, o).unwrap() + 1.0).abs() < 1e-12);
        assert!((parity_correlation_via_ports(&psi, o, o).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn coincidences_factorize_and_marginalize() {
        let e = make_epr(grid(), grid(), 0.5, 2.0).unwrap();
        let (s1, s2) = (MirrorSetting::new(0.5, 0.3), MirrorSetting::new(-0.25, -0.6));
        let p = coincidence_probabilities(&e, s1, s2, 0.4, -0.2).unwrap();
        assert!((p.sum() - 1.0).abs() < 1e-12);
        let (b1, _) = click_probability(&e.reduced(Photon::First).unwrap(), s1, 0.4).unwrap();
        let (b2, _) = click_probability(&e.reduced(Photon::Second).unwrap(), s2, -0.2).unwrap();
        assert!((p.bb + p.bd - b1).abs() < 1e-12);
        assert!((p.bb + p.db - b2).abs() < 1e-12);

        let q = coincidence_probabilities(&e, s1, s2, PI / 2.0, 0.0).unwrap();
        assert!((q.bb + q.bd - 0.5).abs() < 1e-12);

        let g = make_gaussian(grid(), 0.0, 1.0, 0.0, 0.0).unwrap();
        let h = make_hermite_gauss(grid(), 1, 1.0).unwrap();
        let prod = JointField::product(&g, &h).unwrap();
        let p = coincidence_probabilities(&prod, s1, s2, 0.3, 0.1).unwrap();
        let (pb1, _) = click_probability(&Ensemble::coherent(g), s1, 0.3).unwrap();
        let (pb2, _) = click_probability(&Ensemble::coherent(h), s2, 0.1).unwrap();
        assert!((p.bb - pb1 * pb2).abs() < 1e-12);
    }

    #[test]
    fn chsh_of_product_at_origin() {
        let o = MirrorSetting::origin();
        let b = chsh(&product_gauss(), o, o, o, o).unwrap();
        assert!((b - 2.0).abs() < 1e-12);
    }

    #[test]
    fn clipped_and_off_grid() {
        let psi = product_gauss();
        let far = MirrorSetting::new(7.0, 0.0);
        assert!(matches!(coincidence_probabilities(&psi, far, MirrorSetting::origin(), 0.0, 0.0), Err(Error::ClippedBeam { .. })));
        let off = MirrorSetting::new(0.1, 0.0);
        assert!(matches!(parity_correlation(&psi, off, off), Err(Error::OffGrid { .. })));
    }

    #[test]
    fn csv_round_trip() {
        let g = Grid1D::centered(16, 0.5).unwrap();
        let e = JointField::from_fn(g, g, |a, b| Complex64::new((-a * a - b * b).exp(), 0.1 * a * (-b * b).exp())).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("psi.csv");
        e.save(&p).unwrap();
        let back = JointField::load(&p).unwrap();
        assert_eq!(back.grid1(), e.grid1());
        let diff = back.samples().iter().zip(e.samples()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(diff < 1e-15);
    }
}
