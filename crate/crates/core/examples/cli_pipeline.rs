//! The CLI commands driven from a config string: scan, reconstruct, fit.

use sagnac_wigner::cli::{run_text, Command};
use sagnac_wigner::Result;

const CONFIG: &str = r#"
[beam]
kind = "pair"
mu = 0.6

[scan]
seed = 5

[output]
formats = ["csv"]
"#;

pub fn run_example() -> Result<()> {
    let out = std::env::temp_dir().join("sagnac_wigner_cli_pipeline");
    let scan = run_text(Command::Scan, CONFIG, &out)?;
    print!("{}", scan.report.render());

    let fit_cfg = format!("[fit]\nmap = {:?}\n", out.join("reconstructed.csv").display().to_string());
    let fit = run_text(Command::Fit, &fit_cfg, &out)?;
    println!("mu = {}", fit.report.get("mu").unwrap_or("?"));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
