use moduli_core::montecarlo::BlockStats;
use moduli_core::volumes::VolumeJob;
use moduli_core::McEstimate;
use rayon::prelude::*;
use rayon::ThreadPool;

use crate::error::CliError;

pub const THREADS_VAR: &str = "MODULI_THREADS";

/// Worker pool capped by `MODULI_THREADS` when set.
pub fn pool() -> Result<ThreadPool, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(raw) = std::env::var(THREADS_VAR) {
        let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
            CliError::Usage(format!(
                "{THREADS_VAR} must be a positive integer, got {raw:?}"
            ))
        })?;
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| CliError::Usage(e.to_string()))
}

/// Blocks fan out over the pool; `collect` keeps block order, so the merged
/// estimate does not depend on the thread count.
pub fn run_job(pool: &ThreadPool, job: &VolumeJob) -> McEstimate {
    let stats: Vec<BlockStats> = pool.install(|| {
        (0..job.blocks())
            .into_par_iter()
            .map(|b| job.run_block(b))
            .collect()
    });
    job.finish(stats)
}
