mod args;
mod check;
mod error;
mod output;
mod parallel;
mod sweep;
mod volume;

use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use serde::Serialize;

use crate::args::{Cli, Command, McArgs, VolumeKind};
use crate::error::CliError;
use crate::output::{emit, sig12, sig12_opt};
use crate::volume::Computed;

/// A single volume run. Every field needed to repeat it is present; fields
/// that do not apply to the chosen method are empty.
#[derive(Debug, Serialize)]
struct VolumeRecord {
    command: &'static str,
    n: usize,
    #[serde(rename = "P")]
    p: Option<f64>,
    method: &'static str,
    estimate: f64,
    stderr: Option<f64>,
    error_bound: Option<f64>,
    n_samples: Option<u64>,
    evaluations: Option<u64>,
    seed: Option<u64>,
    proposal: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_time_ms: Option<f64>,
}

impl VolumeRecord {
    fn new(
        command: &'static str,
        n: usize,
        p: Option<f64>,
        c: Computed,
        wall: Option<f64>,
    ) -> Self {
        VolumeRecord {
            command,
            n,
            p: sig12_opt(p),
            method: c.method.name(),
            estimate: sig12(c.estimate),
            stderr: sig12_opt(c.stderr),
            error_bound: sig12_opt(c.error_bound),
            n_samples: c.n_samples,
            evaluations: c.evaluations,
            seed: c.seed,
            proposal: c.proposal.map(|p| p.name()),
            wall_time_ms: wall,
        }
    }
}

fn volume(kind: &VolumeKind, cli: &Cli) -> Result<(), CliError> {
    let pool = parallel::pool()?;
    let start = Instant::now();
    let (command, n, p, mc): (_, _, _, &McArgs) = match kind {
        VolumeKind::Crown(a) => ("volume crown", a.n, Some(a.p), &a.mc),
        VolumeKind::Disc(a) => ("volume disc", a.n, None, &a.mc),
    };
    let c = match p {
        Some(p) => volume::crown(n, p, mc, &pool)?,
        None => volume::disc(n, mc, &pool)?,
    };
    let wall = cli.timing.then(|| start.elapsed().as_secs_f64() * 1e3);
    emit(
        &[VolumeRecord::new(command, n, p, c, wall)],
        cli.json,
        false,
    )
}

fn run(cli: &Cli) -> Result<ExitCode, CliError> {
    match &cli.command {
        Command::Volume(kind) => volume(kind, cli)?,
        Command::Sweep(args) => sweep::run(args, cli.json, cli.timing, &parallel::pool()?)?,
        Command::Check(args) => {
            let start = Instant::now();
            let mut report = check::run(args.suite)?;
            report.wall_time_ms = cli.timing.then(|| start.elapsed().as_secs_f64() * 1e3);
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                check::print_text(&report);
            }
            if !report.all_pass() {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
