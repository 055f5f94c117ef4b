//! Small numerical kernels shared by the other modules.

use num_traits::Float;

pub const PI2: f64 = core::f64::consts::PI * core::f64::consts::PI;

/// `log(e^a - 1)` for `a > 0`, evaluated as `a + log(1 - e^{-a})`.
#[inline]
pub fn ln_expm1(a: f64) -> f64 {
    a + Float::ln(-Float::exp_m1(-a))
}

/// `log(sinh(a))` for `a > 0`.
#[inline]
pub fn ln_sinh(a: f64) -> f64 {
    a - core::f64::consts::LN_2 + Float::ln(-Float::exp_m1(-2.0 * a))
}

/// `log(1 + e^u)`.
#[inline]
pub fn softplus(u: f64) -> f64 {
    if u > 0.0 {
        u + Float::ln_1p(Float::exp(-u))
    } else {
        Float::ln_1p(Float::exp(u))
    }
}

/// `log(Σ e^{v_i})` without overflow.
pub fn log_sum_exp(values: impl IntoIterator<Item = f64> + Clone) -> f64 {
    let max = values.clone().into_iter().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    let s: f64 = values.into_iter().map(|v| Float::exp(v - max)).sum();
    max + Float::ln(s)
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if Float::abs(self.sum) >= Float::abs(x) {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl Extend<f64> for CompensatedSum {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for x in iter {
            self.add(x);
        }
    }
}

pub fn compensated_sum(iter: impl IntoIterator<Item = f64>) -> f64 {
    let mut s = CompensatedSum::new();
    s.extend(iter);
    s.value()
}

// 4-point Gauss-Legendre on [-1, 1].
const GL4_NODES: [f64; 4] = [
    -0.861_136_311_594_052_6,
    -0.339_981_043_584_856_3,
    0.339_981_043_584_856_3,
    0.861_136_311_594_052_6,
];
const GL4_WEIGHTS: [f64; 4] = [
    0.347_854_845_137_453_9,
    0.652_145_154_862_546_1,
    0.652_145_154_862_546_1,
    0.347_854_845_137_453_9,
];

/// Panels of the fixed composite rule; 4 nodes each gives 2048 points.
pub const UNIT_PANELS: usize = 512;

/// Fixed 2048-point composite Gauss-Legendre rule on `[0, 1]`.
///
/// Used for the smooth integrands of the continuum module, where the error
/// sits far below any tolerance we check against.
pub fn integrate_unit<F: FnMut(f64) -> f64>(f: F) -> f64 {
    integrate_fixed(f, 0.0, 1.0, UNIT_PANELS)
}

pub fn integrate_fixed<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    let mut acc = CompensatedSum::new();
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * h;
        let mut panel = 0.0;
        for (x, w) in GL4_NODES.iter().zip(GL4_WEIGHTS.iter()) {
            panel += w * f(mid + 0.5 * h * x);
        }
        acc.add(0.5 * h * panel);
    }
    acc.value()
}

/// `Γ(k/2)` for positive integer `k`, from `Γ(1/2) = √π` and `Γ(1) = 1`.
pub fn gamma_half_integer(k: usize) -> f64 {
    assert!(k > 0, "gamma_half_integer needs k >= 1");
    let (mut value, mut arg) = if k.is_multiple_of(2) {
        (1.0, 1.0)
    } else {
        (Float::sqrt(core::f64::consts::PI), 0.5)
    };
    let target = k as f64 / 2.0;
    while arg < target {
        value *= arg;
        arg += 1.0;
    }
    value
}

pub fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}
