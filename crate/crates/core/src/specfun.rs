//! Real dilogarithm and Rogers-type L function.
//!
//! `dilog` covers `x <= 1` exactly. Past the branch point only the real part
//! is ever needed, and [`dilog_re`] supplies it through the inversion formula.

use num_traits::Float;

use crate::error::{Error, Result};
use crate::numeric::PI2;

const ZETA2: f64 = PI2 / 6.0;

/// Power series on `|x| <= 1/2`; 60 terms reach below 1e-20.
fn dilog_series(x: f64) -> f64 {
    let mut term = x;
    let mut sum = 0.0;
    for k in 1..=60u32 {
        let kf = f64::from(k);
        sum += term / (kf * kf);
        term *= x;
        if Float::abs(term) < 1e-18 * Float::abs(sum) {
            break;
        }
    }
    sum
}

/// Li2 on `x <= 1` without the domain check.
fn dilog_unchecked(x: f64) -> f64 {
    if x == 1.0 {
        ZETA2
    } else if x > 0.5 {
        // Euler reflection onto 1 - x in (0, 1/2)
        let y = 1.0 - x;
        ZETA2 - Float::ln(x) * Float::ln(y) - dilog_series(y)
    } else if x >= -0.5 {
        dilog_series(x)
    } else if x >= -1.0 {
        // Landen: x/(x-1) lands in [1/3, 1/2]
        let l = Float::ln_1p(-x);
        -dilog_series(x / (x - 1.0)) - 0.5 * l * l
    } else {
        // inversion onto 1/x in (-1, 0)
        let l = Float::ln(-x);
        -ZETA2 - 0.5 * l * l - dilog_unchecked(1.0 / x)
    }
}

/// `Li2(x) = Σ x^k / k²` for `x <= 1`.
pub fn dilog(x: f64) -> Result<f64> {
    if x.is_nan() || x > 1.0 {
        return Err(Error::Domain {
            function: "dilog",
            arg: x,
        });
    }
    Ok(dilog_unchecked(x))
}

/// Real part of `Li2(x)` for `x > 1`: `π²/3 - ½ ln²x - Li2(1/x)`.
pub fn dilog_re(x: f64) -> Result<f64> {
    if x.is_nan() || x <= 1.0 {
        return Err(Error::Domain {
            function: "dilog_re",
            arg: x,
        });
    }
    let l = Float::ln(x);
    Ok(PI2 / 3.0 - 0.5 * l * l - dilog_unchecked(1.0 / x))
}

/// Real part of `Li2` on the whole real line.
pub(crate) fn li2_real(x: f64) -> f64 {
    if x <= 1.0 {
        dilog_unchecked(x)
    } else {
        let l = Float::ln(x);
        PI2 / 3.0 - 0.5 * l * l - dilog_unchecked(1.0 / x)
    }
}

/// Rogers function with the `π/6` prefactor:
/// `L(x) = (π/6) [Li2(x) + ½ ln(x) ln(1-x)]` on `(0, 1)`.
pub fn rogers_l(x: f64) -> Result<f64> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::Domain {
            function: "rogers_l",
            arg: x,
        });
    }
    Ok(rogers_unchecked(x))
}

fn rogers_unchecked(x: f64) -> f64 {
    core::f64::consts::PI / 6.0 * (dilog_unchecked(x) + 0.5 * Float::ln(x) * Float::ln_1p(-x))
}

/// Residual of the five-term relation
/// `L(x) + L(y) - L(xy) - L(x(1-y)/(1-xy)) - L(y(1-x)/(1-xy))`.
pub fn five_term_residual(x: f64, y: f64) -> Result<f64> {
    for v in [x, y] {
        if !(v > 0.0 && v < 1.0) {
            return Err(Error::Domain {
                function: "five_term_residual",
                arg: v,
            });
        }
    }
    let xy = x * y;
    let d = 1.0 - xy;
    Ok(rogers_unchecked(x) + rogers_unchecked(y)
        - rogers_unchecked(xy)
        - rogers_unchecked(x * (1.0 - y) / d)
        - rogers_unchecked(y * (1.0 - x) / d))
}
