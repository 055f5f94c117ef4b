//! Coordinates and actions on the crown (a hole of perimeter `P` with `n`
//! bordered cusps) and on the cusped disc.
//!
//! The crown is described by the projections `Δ_1 < … < Δ_{n-1}` of the cusps
//! onto the hole perimeter, measured from the projection of cusp `0`, with
//! `Δ_0 = 0` and `Δ_n = P`. Everything else (gaps, `x`, `ξ`, shear pairs) is
//! derived from that.

mod disc;
mod kissing;
mod shear;

use alloc::vec::Vec;

use num_traits::Float;

use crate::error::{Error, Result};
use crate::numeric::ln_expm1;

pub use disc::{disc_action, disc_measure_density, DiscConfig};
pub use kissing::{action_from_geometry, kissing_radii, s_lengths, HoroRadii};
pub use shear::{shear_action, xi_from_shear, ShearCoords};

/// Cusp projections `Δ_1 < … < Δ_{n-1}` on a perimeter-`P` circle.
#[derive(Debug, Clone, PartialEq)]
pub struct CrownConfig {
    perimeter: f64,
    positions: Vec<f64>,
}

impl CrownConfig {
    pub fn new(perimeter: f64, positions: Vec<f64>) -> Result<Self> {
        if !(perimeter > 0.0 && perimeter.is_finite()) {
            return Err(Error::InvalidCoordinates(
                "perimeter must be positive and finite",
            ));
        }
        let mut prev = 0.0;
        for &d in &positions {
            if !(d > prev) {
                return Err(Error::InvalidCoordinates(
                    "Δ must be strictly increasing from 0",
                ));
            }
            prev = d;
        }
        if !(prev < perimeter) {
            return Err(Error::InvalidCoordinates("Δ must stay below the perimeter"));
        }
        Ok(CrownConfig {
            perimeter,
            positions,
        })
    }

    pub fn cusps(&self) -> usize {
        self.positions.len() + 1
    }

    pub fn perimeter(&self) -> f64 {
        self.perimeter
    }

    /// `Δ_1, …, Δ_{n-1}`.
    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    /// `Δ_i` for any integer `i`, with `Δ_0 = 0` and `Δ_{i+n} = Δ_i + P`.
    pub fn position(&self, i: isize) -> f64 {
        let n = self.cusps() as isize;
        let k = i.rem_euclid(n);
        let wraps = (i - k) / n;
        let base = if k == 0 {
            0.0
        } else {
            self.positions[k as usize - 1]
        };
        base + wraps as f64 * self.perimeter
    }
}

/// Gaps `δ_1, …, δ_n` between consecutive projections; cyclic, summing to `P`.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaGaps {
    gaps: Vec<f64>,
    perimeter: f64,
}

impl DeltaGaps {
    pub fn new(gaps: Vec<f64>) -> Result<Self> {
        if gaps.is_empty() {
            return Err(Error::InvalidCoordinates("at least one gap is required"));
        }
        if gaps.iter().any(|&d| !(d > 0.0 && d.is_finite())) {
            return Err(Error::InvalidCoordinates(
                "gaps must be positive and finite",
            ));
        }
        let perimeter = crate::numeric::compensated_sum(gaps.iter().copied());
        Ok(DeltaGaps { gaps, perimeter })
    }

    pub fn cusps(&self) -> usize {
        self.gaps.len()
    }

    pub fn perimeter(&self) -> f64 {
        self.perimeter
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.gaps
    }

    /// `δ_i` with 1-based cyclic indexing, `δ_{i+n} = δ_i`.
    pub fn gap(&self, i: isize) -> f64 {
        let n = self.gaps.len() as isize;
        self.gaps[(i - 1).rem_euclid(n) as usize]
    }

    /// Cyclic shift: `δ'_i = δ_{i+k}`.
    pub fn rotated(&self, k: isize) -> DeltaGaps {
        let n = self.gaps.len() as isize;
        let gaps = (0..n)
            .map(|i| self.gaps[(i + k).rem_euclid(n) as usize])
            .collect();
        DeltaGaps {
            gaps,
            perimeter: self.perimeter,
        }
    }
}

pub fn gaps_from_config(c: &CrownConfig) -> DeltaGaps {
    let n = c.cusps() as isize;
    let gaps = (1..=n).map(|i| c.position(i) - c.position(i - 1)).collect();
    DeltaGaps {
        gaps,
        perimeter: c.perimeter,
    }
}

pub fn config_from_gaps(g: &DeltaGaps) -> CrownConfig {
    let mut positions = Vec::with_capacity(g.cusps() - 1);
    let mut acc = 0.0;
    for &d in &g.gaps[..g.cusps() - 1] {
        acc += d;
        positions.push(acc);
    }
    CrownConfig {
        perimeter: g.perimeter,
        positions,
    }
}

/// Decoration-invariant crown action
/// `κ [Σ log(e^{δ_i+δ_{i+1}} - 1) - Σ log(e^{δ_i} - 1)]`.
pub fn crown_action(g: &DeltaGaps, kappa: f64) -> f64 {
    let n = g.cusps();
    let mut s = 0.0;
    for i in 0..n {
        let d = g.gaps[i];
        let next = g.gaps[(i + 1) % n];
        s += ln_expm1(d + next) - ln_expm1(d);
    }
    kappa * s
}

/// Decoration-independent coordinates `x_1 < … < x_{n-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct XCoords(Vec<f64>);

impl XCoords {
    pub fn new(x: Vec<f64>) -> Result<Self> {
        let mut prev = 0.0;
        for &v in &x {
            if !(v > prev && v.is_finite()) {
                return Err(Error::InvalidCoordinates(
                    "x must be positive and strictly increasing",
                ));
            }
            prev = v;
        }
        Ok(XCoords(x))
    }

    /// Skips validation; degenerate inputs (repeated entries) are allowed for
    /// probing the Pfaffian's zero set.
    pub fn new_unchecked(x: Vec<f64>) -> Self {
        XCoords(x)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Log-canonical coordinates `ξ_1 = x_1`, `ξ_i = x_i - x_{i-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct XiCoords(Vec<f64>);

impl XiCoords {
    pub fn new(xi: Vec<f64>) -> Result<Self> {
        if xi.iter().any(|&v| !(v > 0.0 && v.is_finite())) {
            return Err(Error::InvalidCoordinates("ξ must be positive"));
        }
        Ok(XiCoords(xi))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// `sinh(Δ/2) / sinh((P - Δ)/2)`, the coordinate map applied pointwise.
#[inline]
pub fn x_of_delta(delta: f64, perimeter: f64) -> f64 {
    let a = 0.5 * delta;
    let b = 0.5 * (perimeter - delta);
    Float::exp(a - b) * Float::exp_m1(-2.0 * a) / Float::exp_m1(-2.0 * b)
}

/// Derivative of [`x_of_delta`]: `½ sinh(P/2) / sinh²((P - Δ)/2)`.
#[inline]
pub fn x_of_delta_derivative(delta: f64, perimeter: f64) -> f64 {
    let b = 0.5 * (perimeter - delta);
    0.5 * Float::exp(crate::numeric::ln_sinh(0.5 * perimeter) - 2.0 * crate::numeric::ln_sinh(b))
}

pub fn x_from_delta(c: &CrownConfig) -> XCoords {
    XCoords(
        c.positions
            .iter()
            .map(|&d| x_of_delta(d, c.perimeter))
            .collect(),
    )
}

/// Inverse of [`x_from_delta`]: `e^Δ = (x e^P + e^{P/2}) / (x + e^{P/2})`.
pub fn delta_from_x(x: &XCoords, perimeter: f64) -> Result<CrownConfig> {
    let half = Float::exp(0.5 * perimeter);
    let growth = Float::exp_m1(perimeter);
    let positions =
        x.0.iter()
            .map(|&v| {
                if v.is_infinite() {
                    perimeter
                } else {
                    Float::ln_1p(v * growth / (v + half))
                }
            })
            .collect();
    CrownConfig::new(perimeter, positions)
}

pub fn xi_from_x(x: &XCoords) -> XiCoords {
    let mut prev = 0.0;
    XiCoords(
        x.0.iter()
            .map(|&v| {
                let d = v - prev;
                prev = v;
                d
            })
            .collect(),
    )
}

pub fn x_from_xi(xi: &XiCoords) -> XCoords {
    let mut acc = 0.0;
    XCoords(
        xi.0.iter()
            .map(|&v| {
                acc += v;
                acc
            })
            .collect(),
    )
}
