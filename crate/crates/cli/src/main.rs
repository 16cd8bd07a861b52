use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use toricmirror::app::{run, Command, Overrides};
use toricmirror::rational::parse_q;
use toricmirror::scenario::{bundled, Scenario, BUNDLED};

/// Toric mirror symmetry workbench.
#[derive(Debug, Parser)]
#[command(name = "toricmirror", version)]
struct Cli {
    /// box, ifun, mirror-map, birkhoff, central-charge, opt-identity, gkz-check,
    /// osc-check, euler-pairing, gamma-identity, monodromy-check or report-all
    command: String,
    /// Scenario file, or the name of a bundled scenario.
    #[arg(long)]
    scenario: String,
    /// Total q-degree bound (rational, e.g. 4 or 7/2).
    #[arg(long = "q-bound")]
    q_bound: Option<String>,
    /// z-power display window, as A,B.
    #[arg(long = "z-window", allow_hyphen_values = true)]
    z_window: Option<String>,
    /// Numeric residual tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Write the JSON report here (`-` for stdout).
    #[arg(long)]
    json: Option<PathBuf>,
}

fn parse_window(s: &str) -> Result<(i32, i32), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("z-window {s} is not A,B"))?;
    let p = |x: &str| x.trim().parse::<i32>().map_err(|e| format!("z-window {s}: {e}"));
    Ok((p(a)?, p(b)?))
}

fn load(arg: &str) -> Result<Scenario, String> {
    let path = Path::new(arg);
    if path.exists() {
        return Scenario::load(path).map_err(|e| e.to_string());
    }
    if BUNDLED.iter().any(|(n, _)| *n == arg) {
        return bundled(arg).map_err(|e| e.to_string());
    }
    let names: Vec<&str> = BUNDLED.iter().map(|(n, _)| *n).collect();
    Err(format!("no scenario file {arg} (bundled: {})", names.join(", ")))
}

fn main_inner(cli: Cli) -> Result<bool, String> {
    let cmd: Command = cli.command.parse().map_err(|e: toricmirror::error::Error| e.to_string())?;
    let scenario = load(&cli.scenario)?;
    let overrides = Overrides {
        q_bound: cli.q_bound.as_deref().map(parse_q).transpose().map_err(|e| e.to_string())?,
        z_window: cli.z_window.as_deref().map(parse_window).transpose()?,
        tol: cli.tol,
    };
    let report = run(cmd, &scenario, &overrides).map_err(|e| e.to_string())?;
    match cli.json.as_deref() {
        Some(p) if p == Path::new("-") => println!("{}", report.to_json(true)),
        Some(p) => {
            std::fs::write(p, report.to_json(true) + "\n").map_err(|e| format!("{}: {e}", p.display()))?;
            print!("{}", report.render());
        }
        None => print!("{}", report.render()),
    }
    Ok(report.passed())
}

fn main() -> ExitCode {
    match main_inner(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
