//! Field CSV files and ensemble bundles.
//!
//! A field file starts with `# n,dx,x_center`, then `# <n>,<dx>,<x_center>`,
//! then one `x,re,im` row per sample. An ensemble bundle is a directory with
//! a `manifest.csv` of `weight,file` rows next to the mode files.

use num_complex::Complex64;
use std::fmt::Write as _;
use std::path::Path;

use super::{Ensemble, Field1D, Grid1D, Mode};
use crate::error::Result;
use crate::io::{fields, parse_err, parse_f64, parse_u64, read_text, write_text};

pub const MANIFEST: &str = "manifest.csv";

pub fn field_to_csv(field: &Field1D) -> String {
    let g = field.grid();
    let mut s = String::new();
    writeln!(s, "# n,dx,x_center").unwrap();
    writeln!(s, "# {},{},{}", g.n(), g.dx(), g.x_center()).unwrap();
    writeln!(s, "# x,re,im").unwrap();
    for (j, z) in field.samples().iter().enumerate() {
        writeln!(s, "{},{},{}", g.x(j), z.re, z.im).unwrap();
    }
    s
}

pub fn field_from_csv(path: &Path, text: &str) -> Result<Field1D> {
    let mut lines = text.lines().enumerate();
    let mut grid = None;
    let mut samples = Vec::new();
    for (i, line) in &mut lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            let rest = rest.trim();
            if grid.is_none() && rest.chars().next().is_some_and(|c| c.is_ascii_digit()) {
                let p = fields(path, i + 1, rest, 3)?;
                let n = parse_u64(path, i + 1, p[0])? as usize;
                let g = Grid1D::new(n, parse_f64(path, i + 1, p[1])?, parse_f64(path, i + 1, p[2])?)
                    .map_err(|e| parse_err(path, i + 1, e.to_string()))?;
                grid = Some(g);
            }
            continue;
        }
        let p = fields(path, i + 1, line, 3)?;
        samples.push(Complex64::new(parse_f64(path, i + 1, p[1])?, parse_f64(path, i + 1, p[2])?));
    }
    let grid = grid.ok_or_else(|| parse_err(path, 1, "missing `# n,dx,x_center` header"))?;
    Field1D::new(grid, samples).map_err(|e| parse_err(path, 0, e.to_string()))
}

pub fn save_field(path: &Path, field: &Field1D) -> Result<()> {
    write_text(path, &field_to_csv(field))
}

pub fn load_field(path: &Path) -> Result<Field1D> {
    field_from_csv(path, &read_text(path)?)
}

pub fn save_ensemble(dir: &Path, ensemble: &Ensemble) -> Result<()> {
    let mut manifest = String::from("# weight,file\n");
    for (i, m) in ensemble.modes().iter().enumerate() {
        let name = format!("mode_{i}.csv");
        save_field(&dir.join(&name), &m.field)?;
        writeln!(manifest, "{},{}", m.weight, name).unwrap();
    }
    write_text(&dir.join(MANIFEST), &manifest)
}

pub fn load_ensemble(dir: &Path) -> Result<Ensemble> {
    let path = dir.join(MANIFEST);
    let text = read_text(&path)?;
    let mut modes = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let p = fields(&path, i + 1, line, 2)?;
        let weight = parse_f64(&path, i + 1, p[0])?;
        modes.push(Mode { weight, field: load_field(&dir.join(p[1]))? });
    }
    Ensemble::new(modes).map_err(|e| parse_err(&path, 0, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{make_gaussian, make_partially_coherent_pair};

    #[test]
    fn ensemble_bundle_round_trip() {
        let grid = Grid1D::new(64, 0.25, 0.5).unwrap();
        let u1 = make_gaussian(grid, 0.5, 1.0, 1.0, 0.1).unwrap();
        let ens = make_partially_coherent_pair(&u1, &u1.scaled(Complex64::new(0.0, 1.0)), 0.4).unwrap();
        let dir = tempfile::tempdir().unwrap();
        save_ensemble(dir.path(), &ens).unwrap();
        let back = load_ensemble(dir.path()).unwrap();
        assert_eq!(back, ens);
    }

    #[test]
    fn rejects_malformed_rows() {
        let p = Path::new("f.csv");
        let bad = "# n,dx,x_center\n# 8,1,0\n0,1\n";
        assert!(field_from_csv(p, bad).is_err());
        let short = "# n,dx,x_center\n# 8,1,0\n0,1,0\n";
        assert!(field_from_csv(p, short).is_err());
    }
}
