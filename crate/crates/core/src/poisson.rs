//! Skew forms on the crown: the `x`-bracket and its Pfaffian, the
//! log-canonical `ξ` bracket, its inverse symplectic form and Casimir.

use alloc::vec::Vec;

use num_traits::Float;

use crate::error::{Error, Result};
use crate::geometry::{DeltaGaps, XCoords, XiCoords};
use crate::numeric::ln_sinh;

/// Largest dimension accepted by the recursive [`pfaffian`].
pub const PFAFFIAN_MAX_DIM: usize = 8;

/// Skew-symmetric `m × m` matrix; only the strict upper triangle is stored.
#[derive(Debug, Clone, PartialEq)]
pub struct SkewForm {
    dim: usize,
    upper: Vec<f64>,
}

impl SkewForm {
    pub fn zeros(dim: usize) -> Self {
        SkewForm {
            dim,
            upper: alloc::vec![0.0; dim * dim.saturating_sub(1) / 2],
        }
    }

    /// Fill entry `(i, j)`, `i < j`, 0-based, from `f(i, j)`.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in i + 1..dim {
                let k = m.slot(i, j);
                m.upper[k] = f(i, j);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn slot(&self, i: usize, j: usize) -> usize {
        // rows of length dim-1, dim-2, ...
        i * (2 * self.dim - i - 1) / 2 + (j - i - 1)
    }

    /// Entry `(i, j)`, 0-based, with `M_ji = -M_ij`.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        match i.cmp(&j) {
            core::cmp::Ordering::Less => self.upper[self.slot(i, j)],
            core::cmp::Ordering::Greater => -self.upper[self.slot(j, i)],
            core::cmp::Ordering::Equal => 0.0,
        }
    }

    /// Set entry `(i, j)`; the transposed entry follows.
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        match i.cmp(&j) {
            core::cmp::Ordering::Less => {
                let k = self.slot(i, j);
                self.upper[k] = value;
            }
            core::cmp::Ordering::Greater => {
                let k = self.slot(j, i);
                self.upper[k] = -value;
            }
            core::cmp::Ordering::Equal => {}
        }
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<f64> {
        let m = self.dim;
        let mut out = alloc::vec![0.0; m * m];
        for i in 0..m {
            for j in 0..m {
                out[i * m + j] = self.get(i, j);
            }
        }
        out
    }
}

/// Row-major product of two skew forms of equal size.
pub fn dense_product(a: &SkewForm, b: &SkewForm) -> Result<Vec<f64>> {
    if a.dim != b.dim {
        return Err(Error::LengthMismatch {
            left: a.dim,
            right: b.dim,
        });
    }
    let m = a.dim;
    let mut out = alloc::vec![0.0; m * m];
    for i in 0..m {
        for j in 0..m {
            out[i * m + j] = (0..m).map(|k| a.get(i, k) * b.get(k, j)).sum();
        }
    }
    Ok(out)
}

/// `{x_i, x_j} = x_i (x_j - x_i)` for `i < j`.
pub fn x_bracket_matrix(x: &XCoords) -> SkewForm {
    let x = x.as_slice();
    SkewForm::from_fn(x.len(), |i, j| x[i] * (x[j] - x[i]))
}

/// Pfaffian by expansion along the first row, normalised so that
/// `Pf([[0, a], [-a, 0]]) = a`.
pub fn pfaffian(m: &SkewForm) -> Result<f64> {
    if m.dim % 2 == 1 {
        return Err(Error::OddDimension(m.dim));
    }
    if m.dim > PFAFFIAN_MAX_DIM {
        return Err(Error::DimensionTooLarge {
            dim: m.dim,
            max: PFAFFIAN_MAX_DIM,
        });
    }
    let idx: Vec<usize> = (0..m.dim).collect();
    Ok(pfaffian_rec(m, &idx))
}

fn pfaffian_rec(m: &SkewForm, idx: &[usize]) -> f64 {
    match idx.len() {
        0 => 1.0,
        2 => m.get(idx[0], idx[1]),
        _ => {
            let first = idx[0];
            let rest = &idx[1..];
            let mut total = 0.0;
            let mut minor = Vec::with_capacity(rest.len() - 1);
            for (k, &j) in rest.iter().enumerate() {
                let a = m.get(first, j);
                if a == 0.0 {
                    continue;
                }
                minor.clear();
                minor.extend(
                    rest.iter()
                        .enumerate()
                        .filter(|&(l, _)| l != k)
                        .map(|(_, &v)| v),
                );
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                total += sign * a * pfaffian_rec(m, &minor);
            }
            total
        }
    }
}

/// `x_1 ∏_{i=2}^{n-1} (x_i - x_{i-1})`, the Pfaffian of the `x`-bracket.
pub fn pfaffian_closed_form(x: &XCoords) -> Result<f64> {
    let n = x.len() + 1;
    if n.is_multiple_of(2) {
        return Err(Error::EvenCusps(n));
    }
    let x = x.as_slice();
    let mut prev = 0.0;
    Ok(x.iter()
        .map(|&v| {
            let d = v - prev;
            prev = v;
            d
        })
        .product())
}

/// `sinh(P/2) / ∏ sinh(δ_i/2)`: the invariant density with respect to
/// `∏_{i=1}^{n-1} dδ_i / 2`.
pub fn crown_measure_density_delta(g: &DeltaGaps) -> f64 {
    let denom: f64 = g.as_slice().iter().map(|&d| ln_sinh(0.5 * d)).sum();
    Float::exp(ln_sinh(0.5 * g.perimeter()) - denom)
}

/// `𝒜` with `𝒜_ij = 1` for `i < j`.
pub fn ones_upper_matrix(m: usize) -> SkewForm {
    SkewForm::from_fn(m, |_, _| 1.0)
}

/// Inverse of [`ones_upper_matrix`] for even `m`: `B_ij = (-1)^{i+j}`, `i < j`.
pub fn inverse_ones_matrix(m: usize) -> Result<SkewForm> {
    if m % 2 == 1 {
        return Err(Error::OddDimension(m));
    }
    Ok(SkewForm::from_fn(m, |i, j| {
        if (i + j) % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }))
}

/// `Σ_{i<j} (-1)^{i+j} (u_i v_j - v_i u_j)` in linear time.
pub fn symplectic_eval(u: &[f64], v: &[f64]) -> Result<f64> {
    if u.len() != v.len() {
        return Err(Error::LengthMismatch {
            left: u.len(),
            right: v.len(),
        });
    }
    // with a_i = (-1)^i u_i, b_i = (-1)^i v_i the sum is Σ_j (A_{<j} b_j - B_{<j} a_j)
    let mut pa = 0.0;
    let mut pb = 0.0;
    let mut acc = crate::numeric::CompensatedSum::new();
    for (k, (&ui, &vi)) in u.iter().zip(v).enumerate() {
        let s = if k % 2 == 0 { 1.0 } else { -1.0 };
        let (a, b) = (s * ui, s * vi);
        acc.add(pa * b - pb * a);
        pa += a;
        pb += b;
    }
    Ok(acc.value())
}

/// Transports the `x`-bracket to `ξ_i = x_i - x_{i-1}` by bilinearity and
/// returns `max_{i<j} |{ξ_i, ξ_j} - ξ_i ξ_j|`, scaled by `max_k x_k²` (the
/// size of the bracket entries it is assembled from).
pub fn xi_bracket_transform_check(x: &XCoords) -> f64 {
    let xs = x.as_slice();
    let m = xs.len();
    if m == 0 {
        return 0.0;
    }
    let bracket = x_bracket_matrix(x);
    // x_0 = 0 brackets to zero with everything
    let br = |a: usize, b: usize| -> f64 {
        if a == 0 || b == 0 {
            0.0
        } else {
            bracket.get(a - 1, b - 1)
        }
    };
    let at = |k: usize| if k == 0 { 0.0 } else { xs[k - 1] };
    let scale = xs.iter().fold(0.0f64, |s, &v| s.max(v * v));
    let mut worst = 0.0f64;
    for i in 1..=m {
        for j in i + 1..=m {
            let got = br(i, j) - br(i, j - 1) - br(i - 1, j) + br(i - 1, j - 1);
            let want = (at(i) - at(i - 1)) * (at(j) - at(j - 1));
            worst = worst.max(Float::abs(got - want));
        }
    }
    worst / scale
}

/// `C = ξ_1 ξ_3 … ξ_{n-1} / (ξ_2 ξ_4 … ξ_{n-2})` for even `n`.
pub fn casimir_crown(xi: &XiCoords) -> Result<f64> {
    let n = xi.len() + 1;
    if n % 2 == 1 {
        return Err(Error::OddCusps(n));
    }
    let log_c: f64 = xi
        .as_slice()
        .iter()
        .enumerate()
        .map(|(k, &v)| {
            if k % 2 == 0 {
                Float::ln(v)
            } else {
                -Float::ln(v)
            }
        })
        .sum();
    Ok(Float::exp(log_c))
}

/// `max_k |{log C, log ξ_k}|` from `{log ξ_i, log ξ_j} = sgn(j - i)`, in
/// integer arithmetic.
pub fn casimir_bracket_residual(xi: &XiCoords) -> Result<i64> {
    let m = xi.len();
    if (m + 1) % 2 == 1 {
        return Err(Error::OddCusps(m + 1));
    }
    let sgn = |d: i64| d.signum();
    let worst = (1..=m as i64)
        .map(|k| {
            (1..=m as i64)
                .map(|i| if i % 2 == 1 { sgn(k - i) } else { -sgn(k - i) })
                .sum::<i64>()
                .abs()
        })
        .max()
        .unwrap_or(0);
    Ok(worst)
}

/// Deviation of the density of `ω^k / k!` in `∏ d log ξ_i` from 1, i.e.
/// `||Pf(B)| - 1|` for the `(n-1)`-dimensional inverse ones matrix.
///
/// `Pf(B) = (-1)^k` itself; the sign only records the orientation of the
/// lexicographic ordering of the `d log ξ_i`.
pub fn dh_consistency(n: usize) -> Result<f64> {
    if n.is_multiple_of(2) {
        return Err(Error::EvenCusps(n));
    }
    let b = inverse_ones_matrix(n - 1)?;
    Ok(Float::abs(Float::abs(pfaffian(&b)?) - 1.0))
}
