use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::io::{parse_err, parse_f64, read_text, write_bytes, write_text, KeyValues};

/// Provenance attached to a [`WignerMap`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MapMeta {
    /// How the values were produced (`oracle`, `two_port`, `photon_counts`, ...).
    pub method: String,
    /// Interferometer phase declared for the reconstruction, if any.
    pub phase: Option<f64>,
    pub source_hash: Option<String>,
    /// Largest x step for which `marginal_k` is alias-free.
    pub x_step_max: Option<f64>,
    /// Largest k step for which `marginal_x` is alias-free.
    pub k_step_max: Option<f64>,
    /// Shears applied so far, as `(z, k0)` pairs.
    pub shears: Vec<(f64, f64)>,
    /// Per-point standard errors, same layout as the values.
    pub stderr: Option<Vec<f64>>,
}

/// Real phase-space function sampled on a rectangular `(x, k)` grid.
///
/// Values are stored row-major with x as the slow index.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerMap {
    x_axis: Vec<f64>,
    k_axis: Vec<f64>,
    values: Vec<f64>,
    pub meta: MapMeta,
}

fn check_axis(name: &'static str, axis: &[f64]) -> Result<()> {
    if axis.is_empty() {
        return Err(Error::invalid(name, "axis is empty"));
    }
    if axis.iter().any(|v| !v.is_finite()) || axis.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid(name, "axis must be finite and strictly increasing"));
    }
    Ok(())
}

impl WignerMap {
    pub fn new(x_axis: Vec<f64>, k_axis: Vec<f64>, values: Vec<f64>, meta: MapMeta) -> Result<Self> {
        check_axis("x_axis", &x_axis)?;
        check_axis("k_axis", &k_axis)?;
        let len = x_axis.len() * k_axis.len();
        if values.len() != len {
            return Err(Error::LengthMismatch { left: values.len(), right: len });
        }
        if let Some(se) = &meta.stderr {
            if se.len() != len {
                return Err(Error::LengthMismatch { left: se.len(), right: len });
            }
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("values", "non-finite map value"));
        }
        Ok(Self { x_axis, k_axis, values, meta })
    }

    pub fn x_axis(&self) -> &[f64] {
        &self.x_axis
    }

    pub fn k_axis(&self) -> &[f64] {
        &self.k_axis
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn nx(&self) -> usize {
        self.x_axis.len()
    }

    pub fn nk(&self) -> usize {
        self.k_axis.len()
    }

    pub fn get(&self, ix: usize, ik: usize) -> f64 {
        self.values[ix * self.k_axis.len() + ik]
    }

    /// Values along x at fixed k index.
    pub fn column(&self, ik: usize) -> Vec<f64> {
        (0..self.nx()).map(|ix| self.get(ix, ik)).collect()
    }

    /// Values along k at fixed x index.
    pub fn row(&self, ix: usize) -> &[f64] {
        let nk = self.nk();
        &self.values[ix * nk..(ix + 1) * nk]
    }

    pub fn max_abs_diff(&self, other: &WignerMap) -> f64 {
        self.values.iter().zip(&other.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    pub(crate) fn with_values(&self, values: Vec<f64>, meta: MapMeta) -> Result<Self> {
        Self::new(self.x_axis.clone(), self.k_axis.clone(), values, meta)
    }

    pub fn to_csv(&self) -> String {
        matrix_csv(&self.x_axis, &self.k_axis, &self.values)
    }

    pub fn meta_text(&self) -> KeyValues {
        let m = &self.meta;
        let mut kv = KeyValues::default();
        kv.push("method", &m.method);
        if let Some(p) = m.phase {
            kv.push("phase", p);
        }
        if let Some(h) = &m.source_hash {
            kv.push("source_hash", h);
        }
        if let Some(v) = m.x_step_max {
            kv.push("x_step_max", v);
        }
        if let Some(v) = m.k_step_max {
            kv.push("k_step_max", v);
        }
        if !m.shears.is_empty() {
            let s: Vec<String> = m.shears.iter().map(|(z, k0)| format!("{z}:{k0}")).collect();
            kv.push("shears", s.join(";"));
        }
        kv
    }

    /// Writes `<stem>.csv` and `<stem>.meta`, plus `<stem>_stderr.csv` when
    /// standard errors are attached. Returns the paths written.
    pub fn save(&self, dir: &Path, stem: &str) -> Result<Vec<PathBuf>> {
        let mut written = Vec::new();
        let csv = dir.join(format!("{stem}.csv"));
        write_text(&csv, &self.to_csv())?;
        written.push(csv);
        let mut kv = self.meta_text();
        if let Some(se) = &self.meta.stderr {
            let name = format!("{stem}_stderr.csv");
            let p = dir.join(&name);
            write_text(&p, &matrix_csv(&self.x_axis, &self.k_axis, se))?;
            kv.push("stderr_file", name);
            written.push(p);
        }
        let meta = dir.join(format!("{stem}.meta"));
        write_text(&meta, &kv.render())?;
        written.push(meta);
        Ok(written)
    }

    /// Writes an 8-bit binary PGM heatmap, x across and k increasing upward,
    /// and records the linear scaling bounds in `<stem>.meta`.
    pub fn save_pgm(&self, dir: &Path, stem: &str) -> Result<PathBuf> {
        let (lo, hi) = self.values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| (l.min(v), h.max(v)));
        let span = if hi > lo { hi - lo } else { 1.0 };
        let (nx, nk) = (self.nx(), self.nk());
        let mut bytes = format!("P5\n{nx} {nk}\n255\n").into_bytes();
        for ik in (0..nk).rev() {
            for ix in 0..nx {
                let t = (self.get(ix, ik) - lo) / span;
                bytes.push((t * 255.0).round().clamp(0.0, 255.0) as u8);
            }
        }
        let path = dir.join(format!("{stem}.pgm"));
        write_bytes(&path, &bytes)?;

        let meta_path = dir.join(format!("{stem}.meta"));
        let mut kv = match read_text(&meta_path) {
            Ok(t) => KeyValues::parse(&meta_path, &t)?,
            Err(_) => self.meta_text(),
        };
        kv.0.retain(|(k, _)| k != "pgm_min" && k != "pgm_max");
        kv.push("pgm_min", lo);
        kv.push("pgm_max", hi);
        write_text(&meta_path, &kv.render())?;
        Ok(path)
    }

    pub fn load(csv: &Path) -> Result<Self> {
        let (x_axis, k_axis, values) = parse_matrix_csv(csv, &read_text(csv)?)?;
        let mut meta = MapMeta { method: "unknown".into(), ..Default::default() };
        let meta_path = csv.with_extension("meta");
        if meta_path.exists() {
            let kv = KeyValues::parse(&meta_path, &read_text(&meta_path)?)?;
            let num = |key: &str| -> Result<Option<f64>> {
                kv.get(key).map(|v| parse_f64(&meta_path, 0, v)).transpose()
            };
            if let Some(m) = kv.get("method") {
                meta.method = m.to_string();
            }
            meta.phase = num("phase")?;
            meta.source_hash = kv.get("source_hash").map(str::to_string);
            meta.x_step_max = num("x_step_max")?;
            meta.k_step_max = num("k_step_max")?;
            if let Some(s) = kv.get("shears") {
                for part in s.split(';') {
                    let (z, k0) = part.split_once(':').ok_or_else(|| parse_err(&meta_path, 0, "bad shears entry"))?;
                    meta.shears.push((parse_f64(&meta_path, 0, z)?, parse_f64(&meta_path, 0, k0)?));
                }
            }
            if let Some(name) = kv.get("stderr_file") {
                let p = csv.with_file_name(name);
                let (_, _, se) = parse_matrix_csv(&p, &read_text(&p)?)?;
                meta.stderr = Some(se);
            }
        }
        Self::new(x_axis, k_axis, values, meta).map_err(|e| parse_err(csv, 0, e.to_string()))
    }
}

fn join(v: &[f64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn matrix_csv(x_axis: &[f64], k_axis: &[f64], values: &[f64]) -> String {
    let mut s = String::new();
    writeln!(s, "# x_axis: {}", join(x_axis)).unwrap();
    writeln!(s, "# k_axis: {}", join(k_axis)).unwrap();
    for row in values.chunks(k_axis.len()) {
        writeln!(s, "{}", join(row)).unwrap();
    }
    s
}

fn parse_axis(path: &Path, line: usize, s: &str) -> Result<Vec<f64>> {
    s.split(',').map(|v| parse_f64(path, line, v)).collect()
}

fn parse_matrix_csv(path: &Path, text: &str) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    let (mut xs, mut ks) = (None, None);
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            let rest = rest.trim();
            if let Some(a) = rest.strip_prefix("x_axis:") {
                xs = Some(parse_axis(path, i + 1, a)?);
            } else if let Some(a) = rest.strip_prefix("k_axis:") {
                ks = Some(parse_axis(path, i + 1, a)?);
            }
            continue;
        }
        let ks = ks.as_ref().ok_or_else(|| parse_err(path, i + 1, "data row before `# k_axis:` header"))?;
        let row = parse_axis(path, i + 1, line)?;
        if row.len() != ks.len() {
            return Err(parse_err(path, i + 1, format!("expected {} columns, found {}", ks.len(), row.len())));
        }
        values.extend(row);
    }
    let xs = xs.ok_or_else(|| parse_err(path, 1, "missing `# x_axis:` header"))?;
    let ks = ks.ok_or_else(|| parse_err(path, 1, "missing `# k_axis:` header"))?;
    if values.len() != xs.len() * ks.len() {
        return Err(parse_err(path, 0, format!("expected {} rows, found {}", xs.len(), values.len() / ks.len().max(1))));
    }
    Ok((xs, ks, values))
}
