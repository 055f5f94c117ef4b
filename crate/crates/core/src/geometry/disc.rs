//! Disc with `n` boundary cusps, three of them pinned at `∞`, `0` and `1`.

use alloc::vec::Vec;

use num_traits::Float;

use crate::error::{Error, Result};

/// Free cusp positions `0 < z_2 < … < z_{n-2} < 1`; `z_0 = ∞`, `z_1 = 0`,
/// `z_{n-1} = 1` are implicit.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscConfig {
    z: Vec<f64>,
}

impl DiscConfig {
    pub fn new(z: Vec<f64>) -> Result<Self> {
        let mut prev = 0.0;
        for &v in &z {
            if !(v > prev) {
                return Err(Error::InvalidCoordinates(
                    "z must be strictly increasing in (0, 1)",
                ));
            }
            prev = v;
        }
        if !(prev < 1.0) && !z.is_empty() {
            return Err(Error::InvalidCoordinates(
                "z must be strictly increasing in (0, 1)",
            ));
        }
        Ok(DiscConfig { z })
    }

    /// Build from the gaps `δ_2, …, δ_{n-1}` (summing to 1).
    pub fn from_gaps(gaps: &[f64]) -> Result<Self> {
        if gaps.is_empty() {
            return Err(Error::InvalidCoordinates(
                "at least one disc gap is required",
            ));
        }
        let mut acc = 0.0;
        let mut z = Vec::with_capacity(gaps.len() - 1);
        for &d in &gaps[..gaps.len() - 1] {
            acc += d;
            z.push(acc);
        }
        Self::new(z)
    }

    pub fn cusps(&self) -> usize {
        self.z.len() + 3
    }

    /// `z_2, …, z_{n-2}`.
    pub fn interior(&self) -> &[f64] {
        &self.z
    }

    /// `z_1 = 0, z_2, …, z_{n-2}, z_{n-1} = 1`.
    pub fn finite_points(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.z.len() + 2);
        out.push(0.0);
        out.extend_from_slice(&self.z);
        out.push(1.0);
        out
    }

    /// `δ_i = z_i - z_{i-1}` for `i = 2..n-1`.
    pub fn gaps(&self) -> Vec<f64> {
        self.finite_points()
            .windows(2)
            .map(|w| w[1] - w[0])
            .collect()
    }
}

/// `log ∏_{i=2}^{n-2} (z_{i+1} - z_{i-1}) - log ∏_{i=2}^{n-1} (z_i - z_{i-1})`.
pub fn disc_action(d: &DiscConfig) -> f64 {
    let z = d.finite_points();
    let spans: f64 = z.windows(3).map(|w| Float::ln(w[2] - w[0])).sum();
    let steps: f64 = z.windows(2).map(|w| Float::ln(w[1] - w[0])).sum();
    spans - steps
}

fn disc_denominator(z: &[f64]) -> f64 {
    z.windows(2).map(|w| w[1] - w[0]).product()
}

/// `1 / [z_2 (z_3 - z_2) … (1 - z_{n-2})]`.
pub fn disc_measure_density(d: &DiscConfig) -> f64 {
    1.0 / disc_denominator(&d.finite_points())
}
