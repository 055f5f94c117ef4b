//! Fat-graph shear coordinates on the crown.

use alloc::vec::Vec;

use num_traits::Float;

use super::XiCoords;
use crate::error::{Error, Result};
use crate::numeric::{compensated_sum, log_sum_exp};

/// Tolerance on `|Σ y_i - P|`.
pub const SHEAR_CONSTRAINT_TOL: f64 = 1e-9;

/// Shear pairs `(y_i, α_i)`, `i = 1..n`, constrained by `Σ y_i = P`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShearCoords {
    y: Vec<f64>,
    alpha: Vec<f64>,
    perimeter: f64,
}

impl ShearCoords {
    pub fn new(y: Vec<f64>, alpha: Vec<f64>, perimeter: f64) -> Result<Self> {
        if y.len() != alpha.len() {
            return Err(Error::LengthMismatch {
                left: y.len(),
                right: alpha.len(),
            });
        }
        if y.is_empty() {
            return Err(Error::InvalidCoordinates(
                "at least one shear coordinate is required",
            ));
        }
        if !(perimeter > 0.0) || y.iter().chain(&alpha).any(|v| !v.is_finite()) {
            return Err(Error::InvalidCoordinates(
                "shear data must be finite with P > 0",
            ));
        }
        let sum = compensated_sum(y.iter().copied());
        if Float::abs(sum - perimeter) > SHEAR_CONSTRAINT_TOL {
            return Err(Error::Constraint { sum, perimeter });
        }
        Ok(ShearCoords {
            y,
            alpha,
            perimeter,
        })
    }

    /// Shears with all `α_i = 0`.
    pub fn from_y(y: Vec<f64>, perimeter: f64) -> Result<Self> {
        let alpha = alloc::vec![0.0; y.len()];
        Self::new(y, alpha, perimeter)
    }

    pub fn cusps(&self) -> usize {
        self.y.len()
    }

    pub fn perimeter(&self) -> f64 {
        self.perimeter
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn with_alpha(&self, alpha: Vec<f64>) -> Result<Self> {
        Self::new(self.y.clone(), alpha, self.perimeter)
    }
}

/// `κ Σ log(e^{y_i/2} + e^{-y_i/2})`; the `α_i` do not enter.
pub fn shear_action(s: &ShearCoords, kappa: f64) -> f64 {
    let total: f64 =
        s.y.iter()
            .map(|&y| {
                let a = Float::abs(y);
                0.5 * a + Float::ln_1p(Float::exp(-a))
            })
            .sum();
    kappa * total
}

/// `ξ_i = e^{P/2 - (y_2+…+y_n)/2} μ_1 / (μ_i μ_{i+1} e^{y_{i+1}/2})` with
/// `μ_i = e^{-(y_{i+1}+…+y_n)/2} (1 + e^{y_{i+1}} + … + e^{y_{i+1}+…+y_n})`
/// and `μ_n = 1`. Evaluated in the log domain.
pub fn xi_from_shear(s: &ShearCoords) -> XiCoords {
    let n = s.cusps();
    let y = &s.y;
    // 0-based: y[k] is y_{k+1}; log_mu[i-1] is log μ_i
    let mut log_mu = Vec::with_capacity(n);
    for i in 1..=n {
        let mut partial = 0.0;
        let mut terms = Vec::with_capacity(n - i + 1);
        terms.push(0.0);
        for &yk in &y[i..n] {
            partial += yk;
            terms.push(partial);
        }
        log_mu.push(-0.5 * partial + log_sum_exp(terms.iter().copied()));
    }
    let tail: f64 = y[1..].iter().sum();
    let head = 0.5 * s.perimeter - 0.5 * tail + log_mu[0];
    let xi = (1..n)
        .map(|i| Float::exp(head - log_mu[i - 1] - log_mu[i] - 0.5 * y[i]))
        .collect();
    XiCoords(xi)
}

#[cfg(test)]
mod tests {
    use super::super::{crown_action, delta_from_x, gaps_from_config, x_from_xi};
    use super::*;
    use alloc::vec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn chain_action(s: &ShearCoords, kappa: f64) -> f64 {
        let x = x_from_xi(&xi_from_shear(s));
        let c = delta_from_x(&x, s.perimeter()).unwrap();
        crown_action(&gaps_from_config(&c), kappa)
    }

    fn random_shears(rng: &mut ChaCha8Rng, n: usize, p: f64) -> ShearCoords {
        let mut y: Vec<f64> = (0..n - 1).map(|_| rng.random_range(-2.0..2.0)).collect();
        let rest: f64 = y.iter().sum();
        y.insert(0, p - rest);
        ShearCoords::from_y(y, p).unwrap()
    }

    #[test]
    fn constraint_is_enforced() {
        assert!(matches!(
            ShearCoords::from_y(vec![0.5, 0.5], 1.1),
            Err(Error::Constraint { .. })
        ));
        assert!(ShearCoords::from_y(vec![0.5, 0.5 + 5e-10], 1.0).is_ok());
        assert!(ShearCoords::new(vec![1.0], vec![], 1.0).is_err());
    }

    #[test]
    fn equal_shears() {
        let p = 1.5;
        let n = 5;
        let s = ShearCoords::from_y(vec![p / n as f64; n], p).unwrap();
        let want = n as f64 * (2.0 * (p / (2.0 * n as f64)).cosh()).ln();
        assert!((shear_action(&s, 1.0) - want).abs() < 1e-14);
    }

    #[test]
    fn alpha_does_not_enter() {
        let s = ShearCoords::from_y(vec![0.2, 0.3, 0.5], 1.0).unwrap();
        let moved = s.with_alpha(vec![4.0, 4.0, 4.0]).unwrap();
        assert_eq!(shear_action(&s, 1.0), shear_action(&moved, 1.0));
        assert_eq!(xi_from_shear(&s), xi_from_shear(&moved));
    }

    #[test]
    fn chain_reproduces_shear_action_up_to_half_perimeter() {
        // crown action through ξ(y) is κ Σ log(1 + e^{y_i}) = shear action + κP/2
        let p = 1.0;
        let s = ShearCoords::from_y(vec![p - 0.4 - 0.1, 0.4, 0.1], p).unwrap();
        let offset = chain_action(&s, 1.0) - shear_action(&s, 1.0);
        assert!((offset - 0.5 * p).abs() < 1e-12, "offset {offset}");
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for n in [3usize, 4, 5, 6, 7] {
            for _ in 0..10 {
                let p = rng.random_range(0.3..4.0);
                let kappa = rng.random_range(0.5..2.0);
                let s = random_shears(&mut rng, n, p);
                let via_chain = chain_action(&s, kappa);
                let softplus: f64 = s.y().iter().map(|&y| crate::numeric::softplus(y)).sum();
                assert!((via_chain - kappa * softplus).abs() <= 1e-9 * via_chain.abs().max(1.0));
                assert!((via_chain - shear_action(&s, kappa) - 0.5 * kappa * p).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn xi_positive() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for n in 2..9 {
            let s = random_shears(&mut rng, n, 2.0);
            let xi = xi_from_shear(&s);
            assert_eq!(xi.len(), n - 1);
            assert!(xi.as_slice().iter().all(|&v| v > 0.0 && v.is_finite()));
        }
    }

    #[test]
    fn large_shear_flattening_slopes() {
        // as y_k → ∞ (y_1 compensating), d log ξ_i / d y_k → -1 for i < k, 0 for i ≥ k
        let n = 5;
        let p = 1.0;
        for k in 2..=n {
            let at = |yk: f64| {
                let mut y = vec![0.3; n];
                y[k - 1] = yk;
                let rest: f64 = y[1..].iter().sum();
                y[0] = p - rest;
                xi_from_shear(&ShearCoords::from_y(y, p).unwrap())
            };
            let (lo, hi) = (at(30.0), at(31.0));
            for i in 1..n {
                let slope = hi.as_slice()[i - 1].ln() - lo.as_slice()[i - 1].ln();
                let want = if i < k { -1.0 } else { 0.0 };
                assert!((slope - want).abs() < 1e-8, "k={k} i={i}: {slope}");
            }
        }
    }
}
