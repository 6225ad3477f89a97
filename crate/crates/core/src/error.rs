use std::path::PathBuf;

use thiserror::Error;

use crate::analysis::FitResult;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParam { name: &'static str, reason: String },

    #[error("grid too narrow: edge amplitude {edge:.3e} of peak exceeds 1e-6")]
    GridTooNarrow { edge: f64 },

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("coordinate x = {x} is not aligned to the sampling lattice")]
    OffGrid { x: f64 },

    #[error("axis spacing {step} exceeds sampling bound {bound} for the {axis} marginal")]
    UnderSampled { axis: &'static str, step: f64, bound: f64 },

    #[error("map integrates to a non-positive total ({total:.3e})")]
    DegenerateMap { total: f64 },

    #[error("shear of {shift} exceeds half the x-span {half_span}")]
    RemapOutOfRange { shift: f64, half_span: f64 },

    #[error("beam clipped at setting (x = {x}, k = {k}): relative power loss {lost:.3e}")]
    ClippedBeam { x: f64, k: f64, lost: f64 },

    #[error("|cos phase| = {cos:.3e} is too small to fix the sign of the interference term")]
    PhaseNull { cos: f64 },

    #[error("scan settings do not form a rectangular (x, k) grid")]
    NonRectangularScan,

    #[error("ensemble carries zero power")]
    ZeroPower,

    #[error("fit did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize, best: Box<FitResult> },

    #[error("bad initial guess: {reason}")]
    BadInit { reason: String },

    #[error("no spectral peak above 3x the median floor (peak {peak:.3e}, floor {floor:.3e})")]
    NoPeak { peak: f64, floor: f64 },

    #[error("{path}:{line}: {message}")]
    Parse { path: PathBuf, line: usize, message: String },

    #[error("config error: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParam { name, reason: reason.into() }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    /// Variant name, for structured error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidParam { .. } => "InvalidParam",
            Error::GridTooNarrow { .. } => "GridTooNarrow",
            Error::GridMismatch => "GridMismatch",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::OffGrid { .. } => "OffGrid",
            Error::UnderSampled { .. } => "UnderSampled",
            Error::DegenerateMap { .. } => "DegenerateMap",
            Error::RemapOutOfRange { .. } => "RemapOutOfRange",
            Error::ClippedBeam { .. } => "ClippedBeam",
            Error::PhaseNull { .. } => "PhaseNull",
            Error::NonRectangularScan => "NonRectangularScan",
            Error::ZeroPower => "ZeroPower",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::BadInit { .. } => "BadInit",
            Error::NoPeak { .. } => "NoPeak",
            Error::Parse { .. } => "Parse",
            Error::Config(_) => "Config",
            Error::Io { .. } => "Io",
        }
    }

    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Parse { .. } | Error::Io { .. } => 2,
            Error::InvalidParam { .. }
            | Error::GridTooNarrow { .. }
            | Error::GridMismatch
            | Error::LengthMismatch { .. }
            | Error::OffGrid { .. }
            | Error::ClippedBeam { .. }
            | Error::PhaseNull { .. }
            | Error::NonRectangularScan
            | Error::ZeroPower
            | Error::RemapOutOfRange { .. }
            | Error::UnderSampled { .. } => 3,
            Error::DegenerateMap { .. }
            | Error::NoConvergence { .. }
            | Error::BadInit { .. }
            | Error::NoPeak { .. } => 4,
        }
    }
}
