//! Crown and disc volumes.
//!
//! `V_{n,P} = 2^{1-n} ∫_{Σδ=P} (e^P - 1) / ∏ (e^{δ_i+δ_{i+1}} - 1)` over the
//! simplex (cyclic indices), with closed forms for `n ≤ 3`, a reduced 1D
//! integral for `n = 4`, nested quadrature for `n ≤ 4` and Monte Carlo
//! in general. Disc volumes integrate `∏_{i=2}^{n-2} (δ_i + δ_{i+1})^{-1}`
//! over the unit simplex of `δ_2, …, δ_{n-1}`.

use alloc::vec::Vec;
use core::cell::Cell;

use num_traits::Float;

use crate::error::{Error, Result};
use crate::geometry::DeltaGaps;
use crate::montecarlo::{BlockStats, McEstimate, McPlan, Proposal};
use crate::numeric::{factorial, ln_expm1, PI2};
use crate::quadrature::{
    integrate, integrate_flagged, integrate_to_upper, QuadratureResult, Tolerance,
};
use crate::specfun::li2_real;

/// Minimum sample count accepted by the volume estimators.
pub const MIN_SAMPLES: u64 = 10_000;
/// Default seed for library-chosen Monte Carlo runs.
pub const DEFAULT_SEED: u64 = 0x5eed;

/// Default sample count: `10^6` up to four cusps, `10^7` beyond.
pub fn default_samples(n: usize) -> u64 {
    if n <= 4 {
        1_000_000
    } else {
        10_000_000
    }
}

// Direct products are faster; past this perimeter the log form avoids overflow.
const DIRECT_LIMIT: f64 = 300.0;

/// `(e^P - 1) / ∏ (e^{δ_i+δ_{i+1}} - 1)` on raw gaps summing to `perimeter`.
pub fn crown_integrand_gaps(gaps: &[f64], perimeter: f64) -> f64 {
    let n = gaps.len();
    if perimeter < DIRECT_LIMIT {
        let mut denom = 1.0;
        for i in 0..n {
            denom *= Float::exp_m1(gaps[i] + gaps[(i + 1) % n]);
        }
        Float::exp_m1(perimeter) / denom
    } else {
        let mut log_denom = 0.0;
        for i in 0..n {
            log_denom += ln_expm1(gaps[i] + gaps[(i + 1) % n]);
        }
        Float::exp(ln_expm1(perimeter) - log_denom)
    }
}

/// The crown volume integrand; the `2^{1-n}` prefactor is not included.
pub fn crown_integrand(g: &DeltaGaps) -> f64 {
    crown_integrand_gaps(g.as_slice(), g.perimeter())
}

/// `∏_{i} (a_i + a_{i+1})^{-1}` over consecutive (non-cyclic) pairs.
pub fn chain_integrand(a: &[f64]) -> f64 {
    let mut denom = 1.0;
    for w in a.windows(2) {
        denom *= w[0] + w[1];
    }
    1.0 / denom
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Integrand {
    Crown { perimeter: f64 },
    Chain,
}

/// A prepared Monte Carlo volume computation. Blocks may be evaluated in any
/// order or in parallel; [`VolumeJob::finish`] wants them back in order.
#[derive(Debug, Clone)]
pub struct VolumeJob {
    plan: McPlan,
    integrand: Integrand,
    factor: f64,
}

impl VolumeJob {
    pub fn blocks(&self) -> u64 {
        self.plan.blocks()
    }

    pub fn run_block(&self, block: u64) -> BlockStats {
        match self.integrand {
            Integrand::Crown { perimeter } => self
                .plan
                .run_block(block, &|g: &[f64]| crown_integrand_gaps(g, perimeter)),
            Integrand::Chain => self.plan.run_block(block, &chain_integrand),
        }
    }

    pub fn finish(&self, blocks: impl IntoIterator<Item = BlockStats>) -> McEstimate {
        self.plan.finish(blocks).scaled(self.factor)
    }

    pub fn run(&self) -> McEstimate {
        let stats: Vec<BlockStats> = (0..self.blocks()).map(|b| self.run_block(b)).collect();
        self.finish(stats)
    }
}

fn check_samples(samples: u64) -> Result<()> {
    if samples < MIN_SAMPLES {
        return Err(Error::Unsupported(
            "volume estimates need at least 10^4 samples",
        ));
    }
    Ok(())
}

pub fn crown_volume_job(
    n: usize,
    perimeter: f64,
    samples: u64,
    seed: u64,
    proposal: Proposal,
) -> Result<VolumeJob> {
    if n < 3 {
        return Err(Error::Unsupported(
            "Monte Carlo crown volumes need n >= 3; use the closed forms",
        ));
    }
    check_samples(samples)?;
    Ok(VolumeJob {
        plan: McPlan::new(n, perimeter, samples, seed, proposal)?,
        integrand: Integrand::Crown { perimeter },
        factor: Float::powi(0.5, n as i32 - 1),
    })
}

/// `V_{n,P}` by simplex Monte Carlo.
pub fn crown_volume_mc(
    n: usize,
    perimeter: f64,
    samples: u64,
    seed: u64,
    proposal: Proposal,
) -> Result<McEstimate> {
    Ok(crown_volume_job(n, perimeter, samples, seed, proposal)?.run())
}

/// `q_n = ∫_{Σa=1} ∏_{i=1}^{n-1} (a_i + a_{i+1})^{-1}` over `n` parts.
pub fn q_n_job(n: usize, samples: u64, seed: u64) -> Result<VolumeJob> {
    if n < 2 {
        return Err(Error::Unsupported("q_n needs n >= 2"));
    }
    check_samples(samples)?;
    Ok(VolumeJob {
        plan: McPlan::new(n, 1.0, samples, seed, Proposal::DirichletHalf)?,
        integrand: Integrand::Chain,
        factor: 1.0,
    })
}

pub fn q_n_mc(n: usize, samples: u64, seed: u64) -> Result<McEstimate> {
    Ok(q_n_job(n, samples, seed)?.run())
}

/// Disc volume: the chain integrand over the `n - 2` gaps `δ_2, …, δ_{n-1}`.
pub fn disc_volume_job(n: usize, samples: u64, seed: u64) -> Result<VolumeJob> {
    if n < 4 {
        return Err(Error::Unsupported("disc volumes need n >= 4"));
    }
    q_n_job(n - 2, samples, seed)
}

pub fn disc_volume_mc(n: usize, samples: u64, seed: u64) -> Result<McEstimate> {
    Ok(disc_volume_job(n, samples, seed)?.run())
}

pub fn v1_closed() -> f64 {
    1.0
}

/// `P / (2 (e^P - 1))`.
pub fn v2_closed(perimeter: f64) -> f64 {
    0.5 * perimeter / Float::exp_m1(perimeter)
}

/// `(P² + π²) / (8 (e^P + 1))`.
pub fn v3_closed(perimeter: f64) -> f64 {
    let e = Float::exp(-perimeter);
    (perimeter * perimeter + PI2) * e / (8.0 * (1.0 + e))
}

/// `P^{n-1} e^{-P} / (2^{n-1} (n-1)!)`, the large-perimeter behaviour.
pub fn crown_asymptote_large_p(n: usize, perimeter: f64) -> f64 {
    let k = n as f64 - 1.0;
    Float::exp(k * Float::ln(0.5 * perimeter) - perimeter) / factorial(n - 1)
}

pub fn q3_closed() -> f64 {
    PI2 / 6.0
}

/// `q_4 = π²/3`: the chain integral with four parts is the six-cusp disc
/// volume.
pub fn q4_closed() -> f64 {
    PI2 / 3.0
}

/// Known `q_n`.
pub fn q_closed(n: usize) -> Option<f64> {
    match n {
        2 => Some(1.0),
        3 => Some(q3_closed()),
        4 => Some(q4_closed()),
        _ => None,
    }
}

/// `lim_{P→0} V_{n,P} = n q_n / 2^n`.
pub fn small_p_limit(n: usize, q_n: f64) -> f64 {
    n as f64 * q_n * Float::powi(0.5, n as i32)
}

/// [`small_p_limit`] for the `n` with a known `q_n`.
pub fn crown_small_p_limit(n: usize) -> Option<f64> {
    q_closed(n).map(|q| small_p_limit(n, q))
}

// Relative error of an inner result; integrands here are positive, so a
// uniform relative bound on the inner values carries over to the outer one.
fn rel_err(r: &QuadratureResult) -> f64 {
    if r.value == 0.0 {
        0.0
    } else {
        r.abs_error_bound / Float::abs(r.value)
    }
}

struct InnerLog {
    evals: Cell<u64>,
    rel: Cell<f64>,
    ok: Cell<bool>,
}

impl InnerLog {
    fn new() -> Self {
        InnerLog {
            evals: Cell::new(0),
            rel: Cell::new(0.0),
            ok: Cell::new(true),
        }
    }

    fn record(&self, r: &QuadratureResult, conv: bool) {
        self.evals.set(self.evals.get() + r.evaluations);
        self.rel.set(self.rel.get().max(rel_err(r)));
        self.ok.set(self.ok.get() && conv);
    }
}

/// `∫_0^L f(t, L - t) dt`, split at `L/2` so that each half is parametrised
/// by the distance to its own endpoint. Small gaps then never come from a
/// cancelling subtraction.
fn halves<F: FnMut(f64, f64) -> f64>(
    mut f: F,
    len: f64,
    tol: Tolerance,
) -> (QuadratureResult, bool) {
    let h = 0.5 * len;
    // t = h x³ flattens log singularities and near-corner peaks at t = 0
    let (l, cl) = integrate_flagged(
        |x| {
            let t = h * x * x * x;
            3.0 * h * x * x * f(t, len - t)
        },
        0.0,
        1.0,
        tol,
    );
    let (r, cr) = integrate_flagged(
        |x| {
            let t = h * x * x * x;
            3.0 * h * x * x * f(len - t, t)
        },
        0.0,
        1.0,
        tol,
    );
    let res = QuadratureResult {
        value: l.value + r.value,
        abs_error_bound: l.abs_error_bound + r.abs_error_bound,
        evaluations: l.evaluations + r.evaluations,
    };
    (res, cl && cr)
}

fn inner_tol() -> Tolerance {
    Tolerance {
        abs: 0.0,
        rel: 1e-11,
        max_intervals: 4000,
    }
}

fn outer_tol() -> Tolerance {
    Tolerance {
        abs: 1e-12,
        rel: 1e-10,
        max_intervals: 4000,
    }
}

/// Integral over the three-part simplex of total `total`, iterated as
/// `δ_1 + δ_2` outside and `δ_1` inside.
fn simplex3<F: FnMut(&[f64; 3]) -> f64>(mut f: F, total: f64) -> Result<QuadratureResult> {
    let log = InnerLog::new();
    let (outer, conv) = halves(
        |s, rest| {
            let (r, c) = halves(|a, b| f(&[a, b, rest]), s, inner_tol());
            log.record(&r, c);
            r.value
        },
        total,
        outer_tol(),
    );
    finish_nested(outer, conv, log)
}

/// Four-part simplex: `δ_1 + δ_2` outside, then `δ_1` and `δ_3` inside.
fn simplex4<F: FnMut(&[f64; 4]) -> f64>(mut f: F, total: f64) -> Result<QuadratureResult> {
    let log = InnerLog::new();
    let (outer, conv) = halves(
        |s, rest| {
            let deepest = InnerLog::new();
            let (r, c) = halves(
                |a, b| {
                    let (q, cq) = halves(|u, v| f(&[a, b, u, v]), rest, inner_tol());
                    deepest.record(&q, cq);
                    q.value
                },
                s,
                inner_tol(),
            );
            log.record(&r, c && deepest.ok.get());
            log.evals.set(log.evals.get() + deepest.evals.get());
            // errors of the deepest level add relatively on top
            log.rel
                .set(log.rel.get().max(rel_err(&r) + deepest.rel.get()));
            r.value
        },
        total,
        outer_tol(),
    );
    finish_nested(outer, conv, log)
}

fn finish_nested(outer: QuadratureResult, conv: bool, log: InnerLog) -> Result<QuadratureResult> {
    let res = QuadratureResult {
        value: outer.value,
        abs_error_bound: outer.abs_error_bound + log.rel.get() * Float::abs(outer.value),
        evaluations: outer.evaluations + log.evals.get(),
    };
    if conv && log.ok.get() {
        Ok(res)
    } else {
        Err(Error::Convergence {
            value: res.value,
            error_bound: res.abs_error_bound,
        })
    }
}

/// `V_{n,P}` for `n ∈ {2, 3, 4}` by iterated adaptive quadrature. The variables
/// are the projections `Δ_1, …, Δ_{n-1}` (with `Δ_2` outermost), handled
/// through the unit-Jacobian gaps `δ_i = Δ_i - Δ_{i-1}`.
pub fn crown_volume_quadrature(n: usize, perimeter: f64) -> Result<QuadratureResult> {
    if !(perimeter > 0.0) {
        return Err(Error::InvalidCoordinates("perimeter must be positive"));
    }
    let p = perimeter;
    let res = match n {
        2 => {
            let (r, conv) = halves(|a, b| crown_integrand_gaps(&[a, b], p), p, outer_tol());
            finish_nested(r, conv, InnerLog::new())?
        }
        3 => simplex3(|g| crown_integrand_gaps(g, p), p)?,
        4 => simplex4(|g| crown_integrand_gaps(g, p), p)?,
        _ => return Err(Error::Unsupported("crown quadrature covers n = 2, 3 and 4")),
    };
    let scale = Float::powi(0.5, n as i32 - 1);
    Ok(QuadratureResult {
        value: res.value * scale,
        abs_error_bound: res.abs_error_bound * scale,
        evaluations: res.evaluations,
    })
}

// The bracket of dilogarithms in the reduced four-cusp integrand.
fn v4_bracket(delta: f64, p: f64) -> f64 {
    -li2_real(Float::exp(delta - p)) + li2_real(Float::exp(-p))
        - li2_real(Float::exp(-delta))
        - li2_real(Float::exp(p))
        + li2_real(Float::exp(p - delta))
        + li2_real(Float::exp(delta))
}

/// `V_{4,P} = (1/8) ∫_0^P e^Δ B(Δ) / ((e^Δ - 1)(e^P - e^Δ)) dΔ`.
///
/// On `[0, P/2]` the substitution `u = log(e^Δ - 1)` and on `[P/2, P]` the
/// mirror `w = log(e^{P-Δ} - 1)` turn the logarithmic endpoint behaviour into
/// exponentially decaying tails on `(-∞, log(e^{P/2} - 1)]`.
pub fn v4_reduced_quadrature(perimeter: f64) -> Result<QuadratureResult> {
    if !(perimeter > 0.0) {
        return Err(Error::InvalidCoordinates("perimeter must be positive"));
    }
    let p = perimeter;
    let top = ln_expm1(0.5 * p);
    let tol = Tolerance {
        abs: 1e-14,
        rel: 1e-11,
        max_intervals: 4000,
    };
    let left = integrate_to_upper(
        |u| {
            // Δ = log(1 + e^u)
            let d = Float::ln_1p(Float::exp(u));
            if !(d > 0.0) {
                return 0.0;
            }
            v4_bracket(d, p) / (Float::exp(p) - Float::exp(d))
        },
        top,
        tol,
    )?;
    let right = integrate_to_upper(
        |w| {
            let back = Float::ln_1p(Float::exp(w));
            if !(back > 0.0) {
                return 0.0;
            }
            let d = p - back;
            v4_bracket(d, p) * Float::exp(-back) / Float::exp_m1(d)
        },
        top,
        tol,
    )?;
    Ok(QuadratureResult {
        value: (left.value + right.value) / 8.0,
        abs_error_bound: (left.abs_error_bound + right.abs_error_bound) / 8.0,
        evaluations: left.evaluations + right.evaluations,
    })
}

/// Disc volumes for `n ∈ {4, 5, 6}` by iterated quadrature over the gaps
/// `δ_2, …, δ_{n-1}` of the free cusps in `(0, 1)`.
pub fn disc_volume_quadrature(n: usize) -> Result<QuadratureResult> {
    match n {
        4 => integrate(|_| 1.0, 0.0, 1.0, outer_tol()),
        5 => simplex3(|g| chain_integrand(g), 1.0),
        6 => simplex4(|g| chain_integrand(g), 1.0),
        _ => Err(Error::Unsupported("disc quadrature covers n = 4, 5, 6")),
    }
}

/// `P · V_{n,P}` with `f_0 = 1`: closed forms up to three cusps, the reduced
/// quadrature at four, Monte Carlo beyond.
pub fn crown_factor(n: usize, perimeter: f64, samples: u64, seed: u64) -> Result<f64> {
    if n == 0 {
        return Ok(1.0);
    }
    if !(perimeter > 0.0) {
        return Err(Error::NegativeInput("perimeter"));
    }
    let v = match n {
        1 => v1_closed(),
        2 => v2_closed(perimeter),
        3 => v3_closed(perimeter),
        4 => v4_reduced_quadrature(perimeter)?.value,
        _ => crown_volume_mc(n, perimeter, samples, seed, Proposal::DirichletHalf)?.estimate,
    };
    Ok(perimeter * v)
}

/// `V_mir ∏ f_{n_i}(P_i)` for holes `(P_i, n_i)`.
pub fn mirzakhani_factorized(v_mir: f64, holes: &[(f64, usize)]) -> Result<f64> {
    if !(v_mir >= 0.0) {
        return Err(Error::NegativeInput("Mirzakhani volume"));
    }
    let mut out = v_mir;
    for &(p, n) in holes {
        out *= crown_factor(n, p, default_samples(n), DEFAULT_SEED)?;
    }
    Ok(out)
}
