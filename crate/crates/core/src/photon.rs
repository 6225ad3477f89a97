//! Single-photon operation: the port powers divided by `S` are click
//! probabilities, and each setting records a binomial split of `n_total`
//! photons between the bright and dark detectors.

use rand_distr::{Binomial, Distribution};
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::field::{total_power, Ensemble};
use crate::io::{fields, parse_err, parse_f64, parse_u64, read_text, write_text, KeyValues};
use crate::rng::point_rng;
use crate::sagnac::{check_phase, grid_layout, ports_from_overlap, steered_overlap, MirrorSetting};
use crate::wigner::{MapMeta, WignerMap};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CountRecord {
    pub setting: MirrorSetting,
    pub n_bright: u64,
    pub n_dark: u64,
    pub n_total: u64,
    /// Seed of the generator; scans draw record `i` from substream `i`.
    pub seed: u64,
}

/// `(p_bright, p_dark)` for an ideal 50:50 interferometer at `phase`.
pub fn click_probability(ensemble: &Ensemble, setting: MirrorSetting, phase: f64) -> Result<(f64, f64)> {
    let s = total_power(ensemble);
    if !(s > 0.0) {
        return Err(Error::ZeroPower);
    }
    let overlap = steered_overlap(ensemble, setting)?;
    let (b, _) = ports_from_overlap(s, overlap, phase, 0.0);
    let p = (b / s).clamp(0.0, 1.0);
    Ok((p, 1.0 - p))
}

fn draw(p_bright: f64, n_total: u64, seed: u64, stream: u64) -> u64 {
    let dist = Binomial::new(n_total, p_bright.clamp(0.0, 1.0)).expect("probability clamped to [0, 1]");
    dist.sample(&mut point_rng(seed, stream))
}

fn check_n(n_total: u64) -> Result<()> {
    if n_total == 0 {
        return Err(Error::invalid("n_total", "at least one photon per setting"));
    }
    Ok(())
}

/// One setting, `n_total` photons, substream 0 of `seed`.
pub fn sample_counts(ensemble: &Ensemble, setting: MirrorSetting, n_total: u64, phase: f64, seed: u64) -> Result<CountRecord> {
    check_n(n_total)?;
    let (p, _) = click_probability(ensemble, setting, phase)?;
    let n_bright = draw(p, n_total, seed, 0);
    Ok(CountRecord { setting, n_bright, n_dark: n_total - n_bright, n_total, seed })
}

/// Photon-counting scan; record `i` uses substream `i` of `seed`.
pub fn sample_scan(
    ensemble: &Ensemble,
    settings: &[MirrorSetting],
    n_total: u64,
    phase: f64,
    seed: u64,
) -> Result<Vec<CountRecord>> {
    check_n(n_total)?;
    settings
        .iter()
        .enumerate()
        .map(|(i, &setting)| {
            let (p, _) = click_probability(ensemble, setting, phase)?;
            let n_bright = draw(p, n_total, seed, i as u64);
            Ok(CountRecord { setting, n_bright, n_dark: n_total - n_bright, n_total, seed })
        })
        .collect()
}

/// `Ŵ = S (n_b − n_d) / (n_total π cos φ)` per point, with binomial standard
/// errors `2 S sqrt(p̂(1 − p̂)/n_total) / (π |cos φ|)` attached to the metadata.
pub fn estimate_wigner(records: &[CountRecord], s: f64, phase: f64) -> Result<WignerMap> {
    let c = check_phase(phase)?;
    let settings: Vec<MirrorSetting> = records.iter().map(|r| r.setting).collect();
    let layout = grid_layout(&settings)?;
    let mut values = Vec::with_capacity(records.len());
    let mut stderr = Vec::with_capacity(records.len());
    for &i in &layout.cell {
        let r = &records[i];
        let n = r.n_total as f64;
        values.push(s * (r.n_bright as f64 - r.n_dark as f64) / (n * PI * c));
        let p = r.n_bright as f64 / n;
        stderr.push(2.0 * s * (p * (1.0 - p) / n).sqrt() / (PI * c.abs()));
    }
    let meta = MapMeta { method: "photon_counts".into(), phase: Some(phase), stderr: Some(stderr), ..Default::default() };
    WignerMap::new(layout.x_axis, layout.k_axis, values, meta)
}

/// Count file: `# S`, `# phase`, `# seed` headers, then `x,k,n_bright,n_dark,n_total` rows.
pub fn counts_to_csv(records: &[CountRecord], s: f64, phase: f64) -> String {
    let mut out = String::new();
    writeln!(out, "# S = {s}").unwrap();
    writeln!(out, "# phase = {phase}").unwrap();
    if let Some(r) = records.first() {
        writeln!(out, "# seed = {}", r.seed).unwrap();
    }
    writeln!(out, "x,k,n_bright,n_dark,n_total").unwrap();
    for r in records {
        writeln!(out, "{},{},{},{},{}", r.setting.x, r.setting.k, r.n_bright, r.n_dark, r.n_total).unwrap();
    }
    out
}

pub fn save_counts(path: &Path, records: &[CountRecord], s: f64, phase: f64) -> Result<()> {
    write_text(path, &counts_to_csv(records, s, phase))
}

/// Inverse of [`save_counts`]: records plus the `S` and phase headers.
pub fn load_counts(path: &Path) -> Result<(Vec<CountRecord>, f64, f64)> {
    let text = read_text(path)?;
    let mut header = KeyValues::default();
    let mut rows = Vec::new();
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
        rows.push((i + 1, line));
    }
    let seed = header.get("seed").map(|v| parse_u64(path, 1, v)).transpose()?.unwrap_or(0);
    let mut records = Vec::with_capacity(rows.len());
    for (ln, line) in rows {
        let p = fields(path, ln, line, 5)?;
        let r = CountRecord {
            setting: MirrorSetting { x: parse_f64(path, ln, p[0])?, k: parse_f64(path, ln, p[1])? },
            n_bright: parse_u64(path, ln, p[2])?,
            n_dark: parse_u64(path, ln, p[3])?,
            n_total: parse_u64(path, ln, p[4])?,
            seed,
        };
        if r.n_bright + r.n_dark > r.n_total {
            return Err(parse_err(path, ln, "n_bright + n_dark exceeds n_total"));
        }
        records.push(r);
    }
    let get = |k: &str| -> Result<f64> {
        parse_f64(path, 1, header.get(k).ok_or_else(|| parse_err(path, 1, format!("missing `# {k} =` header")))?)
    };
    Ok((records, get("S")?, get("phase")?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{make_gaussian, make_hermite_gauss, Field1D, Grid1D};
    use crate::sagnac::rectangular_settings;
    use crate::wigner::{linspace, wigner_map};

    fn grid() -> Grid1D {
        Grid1D::centered(256, 0.0625).unwrap()
    }

    fn gauss() -> Ensemble {
        Ensemble::coherent(make_gaussian(grid(), 0.0, 1.0, 0.0, 0.0).unwrap())
    }

    #[test]
    fn click_probability_examples() {
        let (b, d) = click_probability(&gauss(), MirrorSetting::origin(), 0.0).unwrap();
        assert!((b - 1.0).abs() < 1e-12 && d.abs() < 1e-12);
        let h = Ensemble::coherent(make_hermite_gauss(grid(), 1, 1.0).unwrap());
        let (b, d) = click_probability(&h, MirrorSetting::origin(), 0.0).unwrap();
        assert!(b.abs() < 1e-12 && (d - 1.0).abs() < 1e-12);
        let (b, d) = click_probability(&h, MirrorSetting::new(0.5, 1.0), PI / 2.0).unwrap();
        assert!((b - 0.5).abs() < 1e-12 && (d - 0.5).abs() < 1e-12);
        let z = Ensemble::coherent(Field1D::zeros(grid()));
        assert!(matches!(click_probability(&z, MirrorSetting::origin(), 0.0), Err(Error::ZeroPower)));
    }

    #[test]
    fn degenerate_and_deterministic_sampling() {
        let r = sample_counts(&gauss(), MirrorSetting::origin(), 1000, 0.0, 3).unwrap();
        assert_eq!((r.n_bright, r.n_dark), (1000, 0));
        let e = gauss();
        let st = MirrorSetting::new(0.5, 0.75);
        assert_eq!(sample_counts(&e, st, 5000, 0.3, 9).unwrap(), sample_counts(&e, st, 5000, 0.3, 9).unwrap());
        assert!(sample_counts(&e, st, 0, 0.0, 1).is_err());
    }

    #[test]
    fn half_probability_band() {
        // p = 1/2 exactly at quadrature phase; 3σ band for n = 1e6 is ±1.5e-3
        let e = gauss();
        let inside = (0..100u64)
            .filter(|&seed| {
                let r = sample_counts(&e, MirrorSetting::origin(), 1_000_000, PI / 2.0, seed).unwrap();
                let f = r.n_bright as f64 / 1e6;
                (0.4985..=0.5015).contains(&f)
            })
            .count();
        assert!(inside >= 99, "{inside}");
    }

    #[test]
    fn exact_probabilities_reproduce_oracle() {
        // counts scaled from exact probabilities stand in for n_total → ∞
        let e = Ensemble::coherent(make_gaussian(grid(), 0.0, 1.0, 1.5, 0.0).unwrap());
        let xs = linspace(-1.0, 1.0, 5);
        let ks = linspace(-3.0, 0.0, 4);
        let n = 1u64 << 52;
        let records: Vec<CountRecord> = rectangular_settings(&xs, &ks)
            .into_iter()
            .map(|st| {
                let (p, _) = click_probability(&e, st, 0.0).unwrap();
                let nb = (p * n as f64).round() as u64;
                CountRecord { setting: st, n_bright: nb, n_dark: n - nb, n_total: n, seed: 0 }
            })
            .collect();
        let est = estimate_wigner(&records, 1.0, 0.0).unwrap();
        assert!(est.max_abs_diff(&wigner_map(&e, &xs, &ks).unwrap()) < 1e-12);
    }

    #[test]
    fn zero_variance_point_is_exact() {
        let r = sample_scan(&gauss(), &[MirrorSetting::origin()], 10_000, 0.0, 5).unwrap();
        let m = estimate_wigner(&r, 1.0, 0.0).unwrap();
        assert!((m.values()[0] - 1.0 / PI).abs() < 1e-15);
        assert_eq!(m.meta.stderr.as_ref().unwrap()[0], 0.0);
        assert!(matches!(estimate_wigner(&r, 1.0, PI / 2.0), Err(Error::PhaseNull { .. })));
    }

    #[test]
    fn count_file_round_trip() {
        let st = rectangular_settings(&linspace(-1.0, 1.0, 3), &[0.0, 0.5]);
        let recs = sample_scan(&gauss(), &st, 100, 0.2, 77).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("counts.csv");
        save_counts(&p, &recs, 1.0, 0.2).unwrap();
        let (back, s, phase) = load_counts(&p).unwrap();
        assert_eq!(back, recs);
        assert_eq!((s, phase), (1.0, 0.2));
    }
}
