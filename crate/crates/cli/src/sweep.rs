use std::time::Instant;

use moduli_core::volumes::{crown_asymptote_large_p, crown_small_p_limit};
use rayon::ThreadPool;
use serde::Serialize;

use crate::args::SweepArgs;
use crate::error::CliError;
use crate::output::{emit, emit_to_file, sig12};
use crate::volume;

/// One sweep row. `stderr` carries the Monte Carlo standard error, the
/// quadrature error bound, or 0 for a closed form.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub n: usize,
    #[serde(rename = "P")]
    pub p: f64,
    pub estimate: f64,
    pub stderr: f64,
    pub method: &'static str,
    pub seed: u64,
    pub asymptote: f64,
    pub small_p_limit: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

pub fn grid(pmin: f64, pmax: f64, steps: usize) -> Result<Vec<f64>, CliError> {
    if !(pmin > 0.0 && pmin.is_finite()) {
        return Err(CliError::Usage(format!(
            "--pmin must be positive, got {pmin}"
        )));
    }
    if !(pmax >= pmin && pmax.is_finite()) {
        return Err(CliError::Usage(format!(
            "--pmax must be finite and >= --pmin, got {pmax}"
        )));
    }
    if steps < 2 {
        return Err(CliError::Usage(format!(
            "--steps must be at least 2, got {steps}"
        )));
    }
    let h = (pmax - pmin) / (steps - 1) as f64;
    Ok((0..steps)
        .map(|k| {
            if k + 1 == steps {
                pmax
            } else {
                pmin + k as f64 * h
            }
        })
        .collect())
}

pub fn run(args: &SweepArgs, json: bool, timing: bool, pool: &ThreadPool) -> Result<(), CliError> {
    let grid = grid(args.pmin, args.pmax, args.steps)?;
    let small = crown_small_p_limit(args.n).map(sig12);
    let mut rows = Vec::with_capacity(grid.len());
    for p in grid {
        let start = Instant::now();
        let c = volume::crown(args.n, p, &args.mc, pool)?;
        rows.push(SweepRow {
            n: args.n,
            p: sig12(p),
            estimate: sig12(c.estimate),
            stderr: sig12(c.stderr.or(c.error_bound).unwrap_or(0.0)),
            method: c.method.name(),
            seed: args.mc.seed,
            asymptote: sig12(crown_asymptote_large_p(args.n, p)),
            small_p_limit: small,
            wall_time_ms: timing.then(|| start.elapsed().as_secs_f64() * 1e3),
        });
    }
    match &args.out {
        Some(path) => emit_to_file(path, &rows, json),
        None => emit(&rows, json, true),
    }
}
