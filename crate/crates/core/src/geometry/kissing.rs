//! Kissing-horocycle gauge for odd crowns.
//!
//! In the upper half-plane the hole is the imaginary axis and cusp `i` sits
//! at `e^{Δ_i}`. Horocycles are Euclidean circles of radius `r_i` tangent to
//! the real line; neighbours kiss when `2√(r_{i-1} r_i) = e^{Δ_i} - e^{Δ_{i-1}}`.
//! The deck transformation `z ↦ e^P z` closes the chain, so `r_{i+n} = r_i e^P`.

use alloc::vec::Vec;

use num_traits::Float;

use super::CrownConfig;
use crate::error::{Error, Result};
use crate::numeric::ln_expm1;

use core::f64::consts::LN_2;

/// Horocycle radii `r_0, …, r_{n-1}`, stored as logarithms.
#[derive(Debug, Clone, PartialEq)]
pub struct HoroRadii {
    log_radii: Vec<f64>,
    perimeter: f64,
}

impl HoroRadii {
    pub fn len(&self) -> usize {
        self.log_radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.log_radii.is_empty()
    }

    /// `log r_i` for any integer `i`, using `r_{i+n} = r_i e^P`.
    pub fn log_radius(&self, i: isize) -> f64 {
        let n = self.log_radii.len() as isize;
        let k = i.rem_euclid(n);
        self.log_radii[k as usize] + ((i - k) / n) as f64 * self.perimeter
    }

    pub fn radius(&self, i: isize) -> f64 {
        Float::exp(self.log_radius(i))
    }
}

// 2 log((e^{Δ_i} - e^{Δ_{i-1}})/2)
fn kissing_rhs(c: &CrownConfig, i: isize) -> f64 {
    let lo = c.position(i - 1);
    2.0 * (lo + ln_expm1(c.position(i) - lo) - LN_2)
}

/// Solve `ρ_{i-1} + ρ_i = 2 log((e^{Δ_i} - e^{Δ_{i-1}})/2)` for `ρ = log r`.
///
/// The alternating sum of the `n` equations leaves `2ρ_0 + P` when `n` is
/// odd; the remaining radii follow by forward substitution.
pub fn kissing_radii(c: &CrownConfig) -> Result<HoroRadii> {
    let n = c.cusps();
    if n.is_multiple_of(2) {
        return Err(Error::EvenCusps(n));
    }
    let rhs: Vec<f64> = (1..=n as isize).map(|i| kissing_rhs(c, i)).collect();
    let alternating: f64 = rhs
        .iter()
        .enumerate()
        .map(|(k, &v)| if k % 2 == 0 { v } else { -v })
        .sum();
    let mut log_radii = Vec::with_capacity(n);
    log_radii.push(0.5 * (alternating - c.perimeter()));
    for i in 1..n {
        let prev = log_radii[i - 1];
        log_radii.push(rhs[i - 1] - prev);
    }
    Ok(HoroRadii {
        log_radii,
        perimeter: c.perimeter(),
    })
}

fn log_s(c: &CrownConfig, r: &HoroRadii, i: isize) -> f64 {
    let lo = c.position(i - 1);
    lo + ln_expm1(c.position(i + 1) - lo) - LN_2 - 0.5 * (r.log_radius(i - 1) + r.log_radius(i + 1))
}

/// `s_i = (e^{Δ_{i+1}} - e^{Δ_{i-1}}) / (2√(r_{i-1} r_{i+1}))` for `i = 1..n`.
pub fn s_lengths(c: &CrownConfig, r: &HoroRadii) -> Result<Vec<f64>> {
    if r.len() != c.cusps() {
        return Err(Error::LengthMismatch {
            left: c.cusps(),
            right: r.len(),
        });
    }
    Ok((1..=c.cusps() as isize)
        .map(|i| Float::exp(log_s(c, r, i)))
        .collect())
}

/// `κ Σ log s_i` in the kissing gauge.
pub fn action_from_geometry(c: &CrownConfig, kappa: f64) -> Result<f64> {
    let r = kissing_radii(c)?;
    let total: f64 = (1..=c.cusps() as isize).map(|i| log_s(c, &r, i)).sum();
    Ok(kappa * total)
}
