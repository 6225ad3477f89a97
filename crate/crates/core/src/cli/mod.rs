//! Command-line front end: every subcommand reads a [`RunConfig`], writes its
//! files under the output directory and returns a `key = value` report.

mod config;

pub use config::{
    BeamConfig, ChshConfig, ChshState, FitConfig, Format, GridConfig, Method, PhotonCount, PhotonsConfig,
    PropagateConfig, RunConfig, ScanConfig,
};

use clap::{Parser, Subcommand};
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::analysis::{fit_two_beam, initial_guess, TwoBeamModel};
use crate::entangle::{chsh_report, make_epr, ChshReport, ChshSettings, JointField};
use crate::error::{Error, Result};
use crate::field::io::save_ensemble;
use crate::field::{
    make_gaussian, make_hermite_gauss, make_partially_coherent_pair, propagate_fresnel, total_power, wedge_beam,
    Ensemble, Grid1D,
};
use crate::io::{read_text, write_text, KeyValues};
use crate::photon::{estimate_wigner, load_counts, sample_scan, save_counts};
use crate::sagnac::{
    rectangular_settings, reconstruct_wigner, run_scan, InterferometerConfig, MirrorSetting, ReconstructionMethod,
    ScanResult,
};
use crate::wigner::{arange, covariance_moments, marginal_k, marginal_x, wigner_map, WignerMap};

#[derive(Debug, Parser)]
#[command(name = "sagnac-wigner", version, about = "Simulate direct Wigner-function measurements")]
pub struct Args {
    #[command(subcommand)]
    pub command: Command,
    /// TOML run configuration; defaults apply when omitted.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory (overrides `output.dir`).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Random seed (overrides `scan.seed`).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Comma-separated output formats: csv, pgm.
    #[arg(long, global = true)]
    pub format: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Synthesize the configured beam and save it.
    Beam,
    /// Oracle Wigner map on the scan axes.
    Oracle,
    /// Simulated mirror scan plus reconstruction.
    Scan,
    /// Reconstruct a map from a saved scan or count record.
    Reconstruct,
    /// Fit the two-beam coherence model to a saved map.
    Fit,
    /// CHSH value from two-photon parity correlations.
    Chsh,
    /// Marginals and second moments of a saved map.
    Marginals,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Beam => "beam",
            Command::Oracle => "oracle",
            Command::Scan => "scan",
            Command::Reconstruct => "reconstruct",
            Command::Fit => "fit",
            Command::Chsh => "chsh",
            Command::Marginals => "marginals",
        }
    }
}

/// What a command produced.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: KeyValues,
    pub files: Vec<PathBuf>,
}

/// Parses arguments, runs the command and returns the process exit code:
/// 0 on success, 2 for configuration errors, 3 for physics preconditions
/// and 4 for analysis failures.
pub fn main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&args) {
        Ok(out) => {
            print!("{}", out.report.render());
            0
        }
        Err(e) => {
            eprintln!("error.kind = {}\nerror.message = {e}", e.kind());
            e.exit_code()
        }
    }
}

/// Loads the configuration, applies flag overrides and runs the command.
pub fn execute(args: &Args) -> Result<Outcome> {
    let mut cfg = match &args.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(out) = &args.out {
        cfg.output.dir = out.clone();
    }
    if let Some(seed) = args.seed {
        cfg.scan.seed = seed;
    }
    if let Some(f) = &args.format {
        cfg.output.formats = Format::parse_list(f)?;
    }
    run(args.command, &cfg)
}

pub fn run(command: Command, cfg: &RunConfig) -> Result<Outcome> {
    let mut out = match command {
        Command::Beam => cmd_beam(cfg),
        Command::Oracle => cmd_oracle(cfg),
        Command::Scan => cmd_scan(cfg),
        Command::Reconstruct => cmd_reconstruct(cfg),
        Command::Fit => cmd_fit(cfg),
        Command::Chsh => cmd_chsh(cfg),
        Command::Marginals => cmd_marginals(cfg),
    }?;
    let path = cfg.output.dir.join(format!("{}.txt", command.name()));
    write_text(&path, &out.report.render())?;
    out.files.push(path);
    Ok(out)
}

/// Parameter errors raised while building objects from the config are
/// configuration errors, reported against their section.
fn in_section(section: &'static str) -> impl Fn(Error) -> Error {
    move |e| match e {
        Error::InvalidParam { name, reason } => Error::Config(format!("{section}.{name}: {reason}")),
        other => other,
    }
}

fn missing(section: &str) -> Error {
    Error::Config(format!("missing [{section}] section"))
}

pub fn build_grid(g: &GridConfig) -> Result<Grid1D> {
    Grid1D::new(g.n, g.dx, g.x_center).map_err(in_section("grid"))
}

pub fn build_ensemble(cfg: &RunConfig) -> Result<Ensemble> {
    let grid = build_grid(&cfg.grid)?;
    let beam = cfg.beam.as_ref().ok_or_else(|| missing("beam"))?;
    let ens = match *beam {
        BeamConfig::Gaussian { x_c, a, k_c, c } => Ensemble::coherent(make_gaussian(grid, x_c, a, k_c, c).map_err(in_section("beam"))?),
        BeamConfig::HermiteGauss { order, a } => Ensemble::coherent(make_hermite_gauss(grid, order, a).map_err(in_section("beam"))?),
        BeamConfig::Wedge { k1, k2, a, c, eps3, k3 } => {
            wedge_beam(grid, k1, k2, a, c, eps3, k3.unwrap_or(2.0 * k2 - k1)).map_err(in_section("beam"))?
        }
        BeamConfig::Pair { x1, k1, x2, k2, a, c, mu } => {
            let u1 = make_gaussian(grid, x1, a, k1, c).map_err(in_section("beam"))?;
            let u2 = make_gaussian(grid, x2, a, k2, c).map_err(in_section("beam"))?;
            make_partially_coherent_pair(&u1, &u2, mu).map_err(in_section("beam"))?
        }
    };
    match cfg.propagate {
        Some(PropagateConfig { z, k0 }) => ens.map_fields(|f| propagate_fresnel(f, z, k0)).map_err(in_section("propagate")),
        None => Ok(ens),
    }
}

fn beam_kind(cfg: &RunConfig) -> &'static str {
    match cfg.beam {
        Some(BeamConfig::Gaussian { .. }) => "gaussian",
        Some(BeamConfig::HermiteGauss { .. }) => "hermite_gauss",
        Some(BeamConfig::Wedge { .. }) => "wedge",
        Some(BeamConfig::Pair { .. }) => "pair",
        None => "none",
    }
}

pub fn scan_axes(s: &ScanConfig) -> Result<(Vec<f64>, Vec<f64>)> {
    let xs = arange(s.x_min, s.x_max, s.x_step).map_err(|e| Error::Config(format!("scan x axis: {e}")))?;
    let ks = arange(s.k_min, s.k_max, s.k_step).map_err(|e| Error::Config(format!("scan k axis: {e}")))?;
    Ok((xs, ks))
}

fn write_map(cfg: &RunConfig, map: &WignerMap, stem: &str) -> Result<Vec<PathBuf>> {
    let dir = &cfg.output.dir;
    let mut files = Vec::new();
    if cfg.output.formats.contains(&Format::Csv) {
        files.extend(map.save(dir, stem)?);
    }
    if cfg.output.formats.contains(&Format::Pgm) {
        files.push(map.save_pgm(dir, stem)?);
    }
    Ok(files)
}

fn map_summary(kv: &mut KeyValues, map: &WignerMap) {
    let (mut imax, mut imin) = (0, 0);
    for (i, v) in map.values().iter().enumerate() {
        if *v > map.values()[imax] {
            imax = i;
        }
        if *v < map.values()[imin] {
            imin = i;
        }
    }
    let nk = map.nk();
    kv.push("nx", map.nx());
    kv.push("nk", nk);
    kv.push("max", format!("{:.12e}", map.values()[imax]));
    kv.push("max_x", map.x_axis()[imax / nk]);
    kv.push("max_k", map.k_axis()[imax % nk]);
    kv.push("min", format!("{:.12e}", map.values()[imin]));
}

fn cmd_beam(cfg: &RunConfig) -> Result<Outcome> {
    let ens = build_ensemble(cfg)?;
    let dir = cfg.output.dir.join("beam");
    save_ensemble(&dir, &ens)?;
    let mut kv = KeyValues::default();
    kv.push("kind", beam_kind(cfg));
    kv.push("modes", ens.modes().len());
    kv.push("total_power", format!("{:.12}", total_power(&ens)));
    kv.push("edge_ratio", format!("{:.3e}", ens.modes().iter().map(|m| m.field.edge_ratio()).fold(0.0, f64::max)));
    kv.push("fingerprint", ens.fingerprint());
    Ok(Outcome { report: kv, files: vec![dir] })
}

fn cmd_oracle(cfg: &RunConfig) -> Result<Outcome> {
    let ens = build_ensemble(cfg)?;
    let (xs, ks) = scan_axes(&cfg.scan)?;
    let map = wigner_map(&ens, &xs, &ks)?;
    let files = write_map(cfg, &map, "oracle")?;
    let mut kv = KeyValues::default();
    kv.push("kind", beam_kind(cfg));
    map_summary(&mut kv, &map);
    Ok(Outcome { report: kv, files })
}

fn interferometer(s: &ScanConfig) -> Result<InterferometerConfig> {
    let c = InterferometerConfig {
        phase: s.phase,
        phase_jitter_sigma: s.phase_jitter,
        split_imbalance: s.split_imbalance,
        seed: s.seed,
    };
    c.validate().map_err(in_section("scan"))?;
    Ok(c)
}

fn method(m: Method) -> ReconstructionMethod {
    match m {
        Method::TwoPort => ReconstructionMethod::TwoPort,
        Method::SinglePortPedestal => ReconstructionMethod::SinglePortPedestal,
    }
}

fn cmd_scan(cfg: &RunConfig) -> Result<Outcome> {
    let ens = build_ensemble(cfg)?;
    let (xs, ks) = scan_axes(&cfg.scan)?;
    let settings = rectangular_settings(&xs, &ks);
    let dir = &cfg.output.dir;
    let mut kv = KeyValues::default();
    kv.push("kind", beam_kind(cfg));
    let (map, mut files) = match cfg.photons.count() {
        None => {
            let scan = run_scan(&ens, &settings, &interferometer(&cfg.scan)?)?;
            let path = dir.join("scan.csv");
            scan.save(&path)?;
            kv.push("mode", "analog");
            (reconstruct_wigner(&scan, method(cfg.scan.method))?, vec![path])
        }
        Some(n) => {
            if cfg.scan.phase_jitter != 0.0 || cfg.scan.split_imbalance != 0.0 {
                return Err(Error::Config("scan.phase_jitter and scan.split_imbalance apply to analog mode only".into()));
            }
            let records = sample_scan(&ens, &settings, n, cfg.scan.phase, cfg.scan.seed)?;
            let s = total_power(&ens);
            let path = dir.join("counts.csv");
            save_counts(&path, &records, s, cfg.scan.phase)?;
            kv.push("mode", "photon_counts");
            kv.push("n_total", n);
            kv.push("seed", cfg.scan.seed);
            (estimate_wigner(&records, s, cfg.scan.phase)?, vec![path])
        }
    };
    files.extend(write_map(cfg, &map, "reconstructed")?);
    map_summary(&mut kv, &map);
    let oracle = wigner_map(&ens, map.x_axis(), map.k_axis())?;
    kv.push("max_abs_diff_vs_oracle", format!("{:.3e}", map.max_abs_diff(&oracle)));
    Ok(Outcome { report: kv, files })
}

fn cmd_reconstruct(cfg: &RunConfig) -> Result<Outcome> {
    let input = &cfg.reconstruct.as_ref().ok_or_else(|| missing("reconstruct"))?.input;
    let text = read_text(input)?;
    let mut kv = KeyValues::default();
    let map = if text.lines().any(|l| l.trim().starts_with("x,k,n_bright")) {
        let (records, s, phase) = load_counts(input)?;
        kv.push("mode", "photon_counts");
        estimate_wigner(&records, s, phase)?
    } else {
        let scan = ScanResult::load(input)?;
        kv.push("mode", "analog");
        reconstruct_wigner(&scan, method(cfg.scan.method))?
    };
    let files = write_map(cfg, &map, "reconstructed")?;
    map_summary(&mut kv, &map);
    Ok(Outcome { report: kv, files })
}

fn fit_start(fc: &FitConfig, map: &WignerMap) -> Result<TwoBeamModel> {
    let given = [fc.amp1, fc.amp2, fc.x1, fc.x2, fc.k1, fc.k2, fc.a, fc.c, fc.mu, fc.psi, fc.offset];
    let mut p = if given.iter().all(Option::is_some) {
        [0.0; 11]
    } else {
        initial_guess(map)?.to_params()
    };
    for (slot, v) in p.iter_mut().zip(given) {
        if let Some(v) = v {
            *slot = v;
        }
    }
    Ok(TwoBeamModel::from_params(&p))
}

fn cmd_fit(cfg: &RunConfig) -> Result<Outcome> {
    let fc = cfg.fit.as_ref().ok_or_else(|| missing("fit"))?;
    let map = WignerMap::load(&fc.map)?;
    let init = fit_start(fc, &map)?;
    let fit = fit_two_beam(&map, &init)?;
    Ok(Outcome { report: fit.report(), files: Vec::new() })
}

fn cmd_marginals(cfg: &RunConfig) -> Result<Outcome> {
    let mc = cfg.marginals.as_ref().ok_or_else(|| missing("marginals"))?;
    let map = WignerMap::load(&mc.map)?;
    let (mx, mk) = (marginal_x(&map)?, marginal_k(&map)?);
    let dir = &cfg.output.dir;
    let table = |axis: &[f64], v: &[f64], name: &str| {
        let mut s = format!("{name},value\n");
        for (a, b) in axis.iter().zip(v) {
            writeln!(s, "{a},{b}").unwrap();
        }
        s
    };
    let (px, pk) = (dir.join("marginal_x.csv"), dir.join("marginal_k.csv"));
    write_text(&px, &table(map.x_axis(), &mx, "x"))?;
    write_text(&pk, &table(map.k_axis(), &mk, "k"))?;
    let m = covariance_moments(&map)?;
    let mut kv = KeyValues::default();
    for (k, v) in [
        ("mean_x", m.mean_x),
        ("mean_k", m.mean_k),
        ("var_x", m.var_x),
        ("var_k", m.var_k),
        ("cov_xk", m.cov_xk),
        ("tilt_angle", m.tilt_angle),
    ] {
        kv.push(k, format!("{v:.9e}"));
    }
    Ok(Outcome { report: kv, files: vec![px, pk] })
}

pub fn build_joint(c: &ChshConfig) -> Result<JointField> {
    let grid = Grid1D::centered(c.n, c.dx).map_err(in_section("chsh"))?;
    match c.state {
        ChshState::Epr { sigma_minus, sigma_plus } => make_epr(grid, grid, sigma_minus, sigma_plus).map_err(in_section("chsh.state")),
        ChshState::Product { order1, order2, a } => {
            let u1 = make_hermite_gauss(grid, order1, a).map_err(in_section("chsh.state"))?;
            let u2 = make_hermite_gauss(grid, order2, a).map_err(in_section("chsh.state"))?;
            JointField::product(&u1, &u2)
        }
    }
}

fn displaced(d: f64) -> ChshSettings {
    let o = MirrorSetting::origin();
    ChshSettings { a: o, a_prime: MirrorSetting::new(d, 0.0), b: o, b_prime: MirrorSetting::new(-d, 0.0) }
}

fn cmd_chsh(cfg: &RunConfig) -> Result<Outcome> {
    let c = cfg.chsh.as_ref().ok_or_else(|| missing("chsh"))?;
    let psi = build_joint(c)?;
    let mut files = Vec::new();
    let explicit = [c.a, c.a_prime, c.b, c.b_prime];
    let report: ChshReport = if explicit.iter().all(Option::is_some) {
        if c.d.is_some() {
            return Err(Error::Config("chsh: give either the four settings or d, not both".into()));
        }
        let s = |v: Option<[f64; 2]>| {
            let [x, k] = v.expect("checked above");
            MirrorSetting::new(x, k)
        };
        chsh_report(&psi, &ChshSettings { a: s(c.a), a_prime: s(c.a_prime), b: s(c.b), b_prime: s(c.b_prime) })?
    } else if explicit.iter().any(Option::is_some) {
        return Err(Error::Config("chsh: settings a, a_prime, b, b_prime must be given together".into()));
    } else if let Some(d) = c.d {
        chsh_report(&psi, &displaced(d))?
    } else {
        if c.d_steps == 0 {
            return Err(Error::Config("chsh.d_steps: need at least one displacement".into()));
        }
        let mut table = String::from("d,B\n");
        let mut best: Option<ChshReport> = None;
        for step in 1..=c.d_steps {
            let r = chsh_report(&psi, &displaced(step as f64 * c.dx))?;
            writeln!(table, "{},{}", r.settings.a_prime.x, r.value).unwrap();
            if best.is_none_or(|b| r.value > b.value) {
                best = Some(r);
            }
        }
        let path = cfg.output.dir.join("chsh_scan.csv");
        write_text(&path, &table)?;
        files.push(path);
        best.expect("at least one step")
    };
    Ok(Outcome { report: report.report(), files })
}

/// Convenience for examples and tests: parse `text` and run `command` with
/// output under `out`.
pub fn run_text(command: Command, text: &str, out: &Path) -> Result<Outcome> {
    let mut cfg = RunConfig::parse(text)?;
    cfg.output.dir = out.to_path_buf();
    run(command, &cfg)
}
