//! Importance-sampled Monte Carlo over the simplex `{δ_i > 0, Σ δ_i = P}`.
//!
//! A run of `N` samples is cut into fixed blocks of [`BLOCK_SIZE`]. Block `b`
//! draws from `ChaCha8Rng::seed_from_u64(seed)` on stream `b`, and block
//! statistics are merged in block order. The result is therefore the same
//! whether blocks are evaluated sequentially or spread over threads, as long
//! as the caller merges them in order (see [`McPlan::finish`]).

use alloc::vec::Vec;

use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::error::{Error, Result};
use crate::numeric::{factorial, gamma_half_integer};

/// Samples per independently seeded block.
pub const BLOCK_SIZE: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Proposal {
    /// Flat density on the simplex.
    Uniform,
    /// Symmetric Dirichlet with parameter 1/2: normalised squared normals.
    DirichletHalf,
}

impl Proposal {
    pub fn name(self) -> &'static str {
        match self {
            Proposal::Uniform => "uniform",
            Proposal::DirichletHalf => "dirichlet_half",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub estimate: f64,
    /// Standard error of the weighted mean.
    pub stderr: f64,
    pub n_samples: u64,
    pub seed: u64,
    pub proposal: Proposal,
}

impl McEstimate {
    /// Same estimate with value and error multiplied by `factor`.
    pub fn scaled(self, factor: f64) -> Self {
        McEstimate {
            estimate: self.estimate * factor,
            stderr: self.stderr * Float::abs(factor),
            ..self
        }
    }
}

/// Draws gaps on the `n`-part simplex of total `perimeter`.
#[derive(Debug, Clone)]
pub struct SimplexSampler {
    n: usize,
    perimeter: f64,
    proposal: Proposal,
    // simplex volume for the uniform proposal, log of the weight prefactor otherwise
    scale: f64,
}

impl SimplexSampler {
    pub fn new(n: usize, perimeter: f64, proposal: Proposal) -> Result<Self> {
        if n < 2 {
            return Err(Error::Unsupported(
                "simplex sampling needs at least two gaps",
            ));
        }
        if !(perimeter > 0.0 && perimeter.is_finite()) {
            return Err(Error::InvalidCoordinates("simplex total must be positive"));
        }
        let scale = match proposal {
            Proposal::Uniform => Float::powi(perimeter, n as i32 - 1) / factorial(n - 1),
            Proposal::DirichletHalf => {
                (n as f64 - 1.0) * Float::ln(perimeter)
                    + 0.5 * n as f64 * Float::ln(core::f64::consts::PI)
                    - Float::ln(gamma_half_integer(n))
            }
        };
        Ok(SimplexSampler {
            n,
            perimeter,
            proposal,
            scale,
        })
    }

    pub fn cusps(&self) -> usize {
        self.n
    }

    /// Fill `out` (length `n`) with gaps and return the importance weight.
    ///
    /// Uniform: weight is the simplex volume `P^{n-1}/(n-1)!`. Dirichlet(1/2):
    /// weight is `P^{n-1} π^{n/2} ∏√a_i / Γ(n/2)` with `a = δ/P`.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [f64]) -> f64 {
        debug_assert_eq!(out.len(), self.n);
        loop {
            let mut total = 0.0;
            for v in out.iter_mut() {
                *v = match self.proposal {
                    Proposal::Uniform => Exp1.sample(rng),
                    Proposal::DirichletHalf => {
                        let z: f64 = StandardNormal.sample(rng);
                        z * z
                    }
                };
                total += *v;
            }
            // a zero draw would put the point on a face; redraw
            if out.iter().any(|&v| v <= 0.0) || !(total > 0.0) {
                continue;
            }
            let mut log_w = self.scale;
            for v in out.iter_mut() {
                let a = *v / total;
                if self.proposal == Proposal::DirichletHalf {
                    log_w += 0.5 * Float::ln(a);
                }
                *v = a * self.perimeter;
            }
            return match self.proposal {
                Proposal::Uniform => self.scale,
                Proposal::DirichletHalf => Float::exp(log_w),
            };
        }
    }
}

/// One draw as owned gaps and weight.
pub fn simplex_sample<R: Rng + ?Sized>(
    n: usize,
    perimeter: f64,
    rng: &mut R,
    proposal: Proposal,
) -> Result<(crate::geometry::DeltaGaps, f64)> {
    let sampler = SimplexSampler::new(n, perimeter, proposal)?;
    let mut gaps = alloc::vec![0.0; n];
    let w = sampler.draw(rng, &mut gaps);
    Ok((crate::geometry::DeltaGaps::new(gaps)?, w))
}

/// Streaming mean and centred second moment (Welford / Chan).
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct BlockStats {
    pub count: u64,
    pub mean: f64,
    pub m2: f64,
}

impl BlockStats {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let d = x - self.mean;
        self.mean += d / self.count as f64;
        self.m2 += d * (x - self.mean);
    }

    pub fn merge(&mut self, other: &BlockStats) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let n = (self.count + other.count) as f64;
        let d = other.mean - self.mean;
        let wo = other.count as f64 / n;
        self.mean += d * wo;
        self.m2 += other.m2 + d * d * self.count as f64 * wo;
        self.count += other.count;
    }
}

/// Layout of a blocked simplex Monte Carlo run.
#[derive(Debug, Clone)]
pub struct McPlan {
    sampler: SimplexSampler,
    samples: u64,
    seed: u64,
}

impl McPlan {
    pub fn new(
        n: usize,
        perimeter: f64,
        samples: u64,
        seed: u64,
        proposal: Proposal,
    ) -> Result<Self> {
        if samples < 2 {
            return Err(Error::Unsupported("Monte Carlo needs at least two samples"));
        }
        Ok(McPlan {
            sampler: SimplexSampler::new(n, perimeter, proposal)?,
            samples,
            seed,
        })
    }

    pub fn blocks(&self) -> u64 {
        self.samples.div_ceil(BLOCK_SIZE)
    }

    fn block_len(&self, block: u64) -> u64 {
        let start = block * BLOCK_SIZE;
        BLOCK_SIZE.min(self.samples - start)
    }

    /// Evaluate block `block` of `weight · f(gaps)`.
    pub fn run_block<F: Fn(&[f64]) -> f64>(&self, block: u64, f: &F) -> BlockStats {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(block);
        let mut gaps = alloc::vec![0.0; self.sampler.n];
        let mut stats = BlockStats::default();
        for _ in 0..self.block_len(block) {
            let w = self.sampler.draw(&mut rng, &mut gaps);
            stats.push(w * f(&gaps));
        }
        stats
    }

    /// Merge block statistics, which must be given in block order.
    pub fn finish(&self, blocks: impl IntoIterator<Item = BlockStats>) -> McEstimate {
        let mut total = BlockStats::default();
        for b in blocks {
            total.merge(&b);
        }
        let n = total.count as f64;
        let var = if total.count > 1 {
            total.m2 / (n - 1.0)
        } else {
            0.0
        };
        McEstimate {
            estimate: total.mean,
            stderr: Float::sqrt(var / n),
            n_samples: total.count,
            seed: self.seed,
            proposal: self.sampler.proposal,
        }
    }

    /// Run every block on the current thread.
    pub fn run<F: Fn(&[f64]) -> f64>(&self, f: &F) -> McEstimate {
        let stats: Vec<BlockStats> = (0..self.blocks()).map(|b| self.run_block(b, f)).collect();
        self.finish(stats)
    }
}
