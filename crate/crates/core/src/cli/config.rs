use serde::Deserialize;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::io::read_text;

/// Parsed run configuration. Every section is optional; commands that need
/// one report its absence. Unknown keys anywhere are errors.
#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub grid: GridConfig,
    pub beam: Option<BeamConfig>,
    pub propagate: Option<PropagateConfig>,
    #[serde(default)]
    pub scan: ScanConfig,
    #[serde(default)]
    pub photons: PhotonsConfig,
    #[serde(default)]
    pub output: OutputConfig,
    pub reconstruct: Option<ReconstructConfig>,
    pub fit: Option<FitConfig>,
    pub marginals: Option<MarginalsConfig>,
    pub chsh: Option<ChshConfig>,
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub n: usize,
    pub dx: f64,
    pub x_center: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self { n: 512, dx: 0.0625, x_center: 0.0 }
    }
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BeamConfig {
    Gaussian {
        #[serde(default)]
        x_c: f64,
        #[serde(default = "one")]
        a: f64,
        #[serde(default)]
        k_c: f64,
        #[serde(default)]
        c: f64,
    },
    HermiteGauss {
        order: usize,
        #[serde(default = "one")]
        a: f64,
    },
    Wedge {
        #[serde(default = "three")]
        k1: f64,
        #[serde(default = "minus_three")]
        k2: f64,
        #[serde(default = "one")]
        a: f64,
        #[serde(default)]
        c: f64,
        #[serde(default)]
        eps3: f64,
        /// Defaults to `2 k2 − k1`.
        k3: Option<f64>,
    },
    /// Two unit Gaussians `(x1, k1)` and `(x2, k2)` with mutual coherence `mu`.
    Pair {
        #[serde(default)]
        x1: f64,
        #[serde(default = "three")]
        k1: f64,
        #[serde(default)]
        x2: f64,
        #[serde(default = "minus_three")]
        k2: f64,
        #[serde(default = "one")]
        a: f64,
        #[serde(default)]
        c: f64,
        mu: f64,
    },
}

fn one() -> f64 {
    1.0
}

fn three() -> f64 {
    3.0
}

fn minus_three() -> f64 {
    -3.0
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct PropagateConfig {
    pub z: f64,
    pub k0: f64,
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct ScanConfig {
    pub x_min: f64,
    pub x_max: f64,
    pub x_step: f64,
    pub k_min: f64,
    pub k_max: f64,
    pub k_step: f64,
    pub phase: f64,
    pub phase_jitter: f64,
    pub split_imbalance: f64,
    pub seed: u64,
    pub method: Method,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            x_min: -2.5,
            x_max: 2.5,
            x_step: 0.125,
            k_min: -5.0,
            k_max: 5.0,
            k_step: 0.25,
            phase: 0.0,
            phase_jitter: 0.0,
            split_imbalance: 0.0,
            seed: 0,
            method: Method::TwoPort,
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    TwoPort,
    SinglePortPedestal,
}

#[derive(Debug, Clone, Copy, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct PhotonsConfig {
    /// Absent means analog detection.
    pub n_total: Option<PhotonCount>,
}

impl PhotonsConfig {
    pub fn count(&self) -> Option<u64> {
        match self.n_total {
            Some(PhotonCount::Count(n)) => Some(n),
            _ => None,
        }
    }
}

/// `n_total = "analog"` or a photon count per setting.
#[derive(Debug, Clone, Copy, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum PhotonCount {
    Count(u64),
    Word(AnalogWord),
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum AnalogWord {
    Analog,
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: PathBuf,
    pub formats: Vec<Format>,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self { dir: PathBuf::from("out"), formats: vec![Format::Csv, Format::Pgm] }
    }
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Pgm,
}

impl Format {
    pub fn parse_list(s: &str) -> Result<Vec<Format>> {
        s.split(',')
            .map(|f| match f.trim() {
                "csv" => Ok(Format::Csv),
                "pgm" => Ok(Format::Pgm),
                other => Err(Error::Config(format!("unknown format `{other}` (expected csv or pgm)"))),
            })
            .collect()
    }
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ReconstructConfig {
    /// Scan record (`x,k,bright,dark`) or count record (`x,k,n_bright,...`).
    pub input: PathBuf,
}

/// Fit input map and optional overrides of the automatic starting point.
#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FitConfig {
    pub map: PathBuf,
    pub amp1: Option<f64>,
    pub amp2: Option<f64>,
    pub x1: Option<f64>,
    pub x2: Option<f64>,
    pub k1: Option<f64>,
    pub k2: Option<f64>,
    pub a: Option<f64>,
    pub c: Option<f64>,
    pub mu: Option<f64>,
    pub psi: Option<f64>,
    pub offset: Option<f64>,
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct MarginalsConfig {
    pub map: PathBuf,
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ChshConfig {
    #[serde(default = "chsh_n")]
    pub n: usize,
    #[serde(default = "chsh_dx")]
    pub dx: f64,
    pub state: ChshState,
    /// Explicit `[x, k]` settings; all four or none.
    pub a: Option<[f64; 2]>,
    pub a_prime: Option<[f64; 2]>,
    pub b: Option<[f64; 2]>,
    pub b_prime: Option<[f64; 2]>,
    /// Fixed displacement for `a = b = 0`, `a′ = (d, 0)`, `b′ = (−d, 0)`.
    pub d: Option<f64>,
    /// Without settings or `d`, scan `d = dx, 2dx, …, d_steps·dx`.
    #[serde(default = "chsh_d_steps")]
    pub d_steps: usize,
}

fn chsh_n() -> usize {
    128
}

fn chsh_dx() -> f64 {
    0.125
}

fn chsh_d_steps() -> usize {
    16
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ChshState {
    Epr { sigma_minus: f64, sigma_plus: f64 },
    /// Product of Hermite–Gauss modes of common width `a`.
    Product {
        #[serde(default)]
        order1: usize,
        #[serde(default)]
        order2: usize,
        #[serde(default = "one")]
        a: f64,
    },
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string().trim_end().to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = read_text(path).map_err(|e| Error::Config(e.to_string()))?;
        Self::parse(&text).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }
}
