use moduli_core::volumes::{
    crown_volume_job, crown_volume_quadrature, default_samples, disc_volume_job,
    disc_volume_quadrature, v1_closed, v2_closed, v3_closed,
};
use moduli_core::{McEstimate, Proposal, QuadratureResult};
use rayon::ThreadPool;

use crate::args::{McArgs, Method};
use crate::error::CliError;
use crate::parallel::run_job;

/// A computed volume with whichever error measure its method provides.
#[derive(Debug, Clone, PartialEq)]
pub struct Computed {
    pub method: Method,
    pub estimate: f64,
    pub stderr: Option<f64>,
    pub error_bound: Option<f64>,
    pub n_samples: Option<u64>,
    pub evaluations: Option<u64>,
    pub seed: Option<u64>,
    pub proposal: Option<Proposal>,
}

impl Computed {
    fn exact(value: f64) -> Self {
        Computed {
            method: Method::Closed,
            estimate: value,
            stderr: None,
            error_bound: None,
            n_samples: None,
            evaluations: None,
            seed: None,
            proposal: None,
        }
    }

    fn quad(r: QuadratureResult) -> Self {
        Computed {
            method: Method::Quad,
            estimate: r.value,
            error_bound: Some(r.abs_error_bound),
            evaluations: Some(r.evaluations),
            ..Computed::exact(r.value)
        }
    }

    fn mc(e: McEstimate) -> Self {
        Computed {
            method: Method::Mc,
            estimate: e.estimate,
            stderr: Some(e.stderr),
            n_samples: Some(e.n_samples),
            seed: Some(e.seed),
            proposal: Some(e.proposal),
            ..Computed::exact(e.estimate)
        }
    }
}

/// An explicit sample count asks for Monte Carlo; otherwise the most precise
/// method available for `n`.
fn pick(mc: &McArgs, auto: Method) -> Method {
    mc.method.unwrap_or(if mc.samples.is_some() {
        Method::Mc
    } else {
        auto
    })
}

pub fn crown_auto_method(n: usize) -> Method {
    match n {
        0..=3 => Method::Closed,
        4 => Method::Quad,
        _ => Method::Mc,
    }
}

pub fn disc_auto_method(n: usize) -> Method {
    match n {
        4 => Method::Closed,
        5 | 6 => Method::Quad,
        _ => Method::Mc,
    }
}

pub fn crown(n: usize, p: f64, mc: &McArgs, pool: &ThreadPool) -> Result<Computed, CliError> {
    if n < 1 {
        return Err(CliError::Usage("crown volumes need n >= 1".into()));
    }
    if !(p > 0.0 && p.is_finite()) {
        return Err(CliError::Usage(format!(
            "perimeter must be positive and finite, got {p}"
        )));
    }
    match pick(mc, crown_auto_method(n)) {
        Method::Closed => match n {
            1 => Ok(Computed::exact(v1_closed())),
            2 => Ok(Computed::exact(v2_closed(p))),
            3 => Ok(Computed::exact(v3_closed(p))),
            _ => Err(CliError::Usage("closed form needs n <= 3".into())),
        },
        Method::Quad => {
            if !(2..=4).contains(&n) {
                return Err(CliError::Usage(
                    "crown quadrature covers 2 <= n <= 4".into(),
                ));
            }
            Ok(Computed::quad(crown_volume_quadrature(n, p)?))
        }
        Method::Mc => {
            let samples = mc.samples.unwrap_or_else(|| default_samples(n));
            let job = crown_volume_job(n, p, samples, mc.seed, mc.proposal.into())?;
            Ok(Computed::mc(run_job(pool, &job)))
        }
    }
}

pub fn disc(n: usize, mc: &McArgs, pool: &ThreadPool) -> Result<Computed, CliError> {
    if n < 4 {
        return Err(CliError::Usage("disc volumes need n >= 4".into()));
    }
    let pi2 = std::f64::consts::PI.powi(2);
    match pick(mc, disc_auto_method(n)) {
        Method::Closed => match n {
            4 => Ok(Computed::exact(1.0)),
            5 => Ok(Computed::exact(pi2 / 6.0)),
            6 => Ok(Computed::exact(pi2 / 3.0)),
            _ => Err(CliError::Usage(
                "disc closed forms cover 4 <= n <= 6".into(),
            )),
        },
        Method::Quad => Ok(Computed::quad(disc_volume_quadrature(n)?)),
        Method::Mc => {
            let samples = mc.samples.unwrap_or_else(|| default_samples(n));
            let job = disc_volume_job(n, samples, mc.seed)?;
            Ok(Computed::mc(run_job(pool, &job)))
        }
    }
}
