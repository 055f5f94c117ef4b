//! Continuum limit of the crown action and symplectic form.
//!
//! Test functions carry exact derivatives up to third order ([`Jet`]), so
//! Schwarzians, cocycles and the `ε`-expansions are evaluated without finite
//! differences. Integrals over `[0, 1]` use the fixed composite
//! Gauss-Legendre rule [`integrate_unit`].

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::f64::consts::{LN_2, PI};

use num_traits::Float;

use crate::error::{Error, Result};
use crate::geometry::{x_of_delta, x_of_delta_derivative, CrownConfig, DeltaGaps};
use crate::numeric::{integrate_unit, ln_expm1, CompensatedSum};
use crate::poisson::symplectic_eval;

const TAU: f64 = 2.0 * PI;

/// Value and first three derivatives at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub v: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
}

impl Jet {
    pub fn new(v: f64, d1: f64, d2: f64, d3: f64) -> Self {
        Jet { v, d1, d2, d3 }
    }

    /// Jet of `g ∘ f` from the jet of `g` at `f(t)` and the jet of `f` at `t`.
    pub fn compose(g: Jet, f: Jet) -> Jet {
        let (a, b, c) = (f.d1, f.d2, f.d3);
        Jet {
            v: g.v,
            d1: g.d1 * a,
            d2: g.d2 * a * a + g.d1 * b,
            d3: g.d3 * a * a * a + 3.0 * g.d2 * a * b + g.d1 * c,
        }
    }

    /// `f‴/f′ - (3/2)(f″/f′)²`.
    pub fn schwarzian(&self) -> f64 {
        let r = self.d2 / self.d1;
        self.d3 / self.d1 - 1.5 * r * r
    }

    fn plus(self, o: Jet) -> Jet {
        Jet::new(self.v + o.v, self.d1 + o.d1, self.d2 + o.d2, self.d3 + o.d3)
    }
}

/// Something with an exact third-order jet.
pub trait Smooth {
    fn jet(&self, t: f64) -> Jet;

    fn value(&self, t: f64) -> f64 {
        self.jet(t).v
    }

    /// `f(1) - f(0)`.
    fn quasi_period(&self) -> f64 {
        self.value(1.0) - self.value(0.0)
    }
}

// jet of y ↦ (a y + b)/(c y + d)
fn moebius_jet(a: f64, b: f64, c: f64, d: f64, y: f64) -> Jet {
    let den = c * y + d;
    let det = a * d - b * c;
    let inv = 1.0 / den;
    let d1 = det * inv * inv;
    Jet::new(
        (a * y + b) * inv,
        d1,
        -2.0 * c * d1 * inv,
        6.0 * c * c * d1 * inv * inv,
    )
}

/// Analytic test functions.
#[derive(Debug, Clone, PartialEq)]
pub enum SmoothTestFn {
    /// `slope · t + amp · sin(2π k t)`.
    Warp { slope: f64, amp: f64, freq: u32 },
    /// `t + amp · sin²(π t)`; maps `[0, 1]` onto itself.
    SinSquared { amp: f64 },
    /// `e^{α t}`.
    Exp { alpha: f64 },
    /// `(a t + b)/(c t + d)`.
    Moebius { a: f64, b: f64, c: f64, d: f64 },
    /// `(a e^{α t} + b)/(c e^{α t} + d)`.
    MoebiusExp {
        a: f64,
        b: f64,
        c: f64,
        d: f64,
        alpha: f64,
    },
    /// `outer ∘ inner`.
    Composed(Box<SmoothTestFn>, Box<SmoothTestFn>),
}

impl SmoothTestFn {
    pub fn identity() -> Self {
        Self::linear(1.0)
    }

    /// `f(t) = P t`.
    pub fn linear(p: f64) -> Self {
        SmoothTestFn::Warp {
            slope: p,
            amp: 0.0,
            freq: 1,
        }
    }

    pub fn warp(slope: f64, amp: f64, freq: u32) -> Self {
        SmoothTestFn::Warp { slope, amp, freq }
    }

    pub fn moebius(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        if a * d - b * c == 0.0 {
            return Err(Error::Domain {
                function: "moebius",
                arg: a * d - b * c,
            });
        }
        Ok(SmoothTestFn::Moebius { a, b, c, d })
    }

    pub fn moebius_exp(a: f64, b: f64, c: f64, d: f64, alpha: f64) -> Result<Self> {
        if a * d - b * c == 0.0 || alpha == 0.0 {
            return Err(Error::Domain {
                function: "moebius_exp",
                arg: a * d - b * c,
            });
        }
        Ok(SmoothTestFn::MoebiusExp { a, b, c, d, alpha })
    }

    /// `g(f) = (e^f - 1)/(e^{P/2} - e^{f - P/2})`.
    pub fn crown_map(p: f64) -> Self {
        let h = Float::exp(0.5 * p);
        SmoothTestFn::MoebiusExp {
            a: h,
            b: -h,
            c: -1.0,
            d: Float::exp(p),
            alpha: 1.0,
        }
    }

    pub fn compose(outer: SmoothTestFn, inner: SmoothTestFn) -> Self {
        SmoothTestFn::Composed(Box::new(outer), Box::new(inner))
    }
}

impl Smooth for SmoothTestFn {
    fn jet(&self, t: f64) -> Jet {
        match *self {
            SmoothTestFn::Warp { slope, amp, freq } => {
                let w = TAU * freq as f64;
                let (s, c) = Float::sin_cos(w * t);
                Jet::new(
                    slope * t + amp * s,
                    slope + amp * w * c,
                    -amp * w * w * s,
                    -amp * w * w * w * c,
                )
            }
            SmoothTestFn::SinSquared { amp } => {
                // sin²(πt) = (1 - cos 2πt)/2
                let (s, c) = Float::sin_cos(TAU * t);
                let h = 0.5 * amp;
                Jet::new(
                    t + h * (1.0 - c),
                    1.0 + h * TAU * s,
                    h * TAU * TAU * c,
                    -h * TAU * TAU * TAU * s,
                )
            }
            SmoothTestFn::Exp { alpha } => {
                let e = Float::exp(alpha * t);
                Jet::new(e, alpha * e, alpha * alpha * e, alpha * alpha * alpha * e)
            }
            SmoothTestFn::Moebius { a, b, c, d } => moebius_jet(a, b, c, d, t),
            SmoothTestFn::MoebiusExp { a, b, c, d, alpha } => {
                let e = Float::exp(alpha * t);
                let inner = Jet::new(e, alpha * e, alpha * alpha * e, alpha * alpha * alpha * e);
                Jet::compose(moebius_jet(a, b, c, d, e), inner)
            }
            SmoothTestFn::Composed(ref g, ref f) => {
                let fj = f.jet(t);
                Jet::compose(g.jet(fj.v), fj)
            }
        }
    }
}

/// Periodic variation `u(t) = c_0 + Σ_k [a_k cos 2πkt + b_k sin 2πkt]`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Variation {
    offset: f64,
    // (k, cos coefficient, sin coefficient)
    terms: Vec<(u32, f64, f64)>,
}

impl Variation {
    pub fn new(offset: f64, terms: Vec<(u32, f64, f64)>) -> Self {
        Variation { offset, terms }
    }

    pub fn sin(k: u32) -> Self {
        Self::new(0.0, alloc::vec![(k, 0.0, 1.0)])
    }

    pub fn cos(k: u32) -> Self {
        Self::new(0.0, alloc::vec![(k, 1.0, 0.0)])
    }

    /// `a · self + b · other`.
    pub fn combine(&self, a: f64, other: &Variation, b: f64) -> Variation {
        let mut terms: Vec<(u32, f64, f64)> = self
            .terms
            .iter()
            .map(|&(k, c, s)| (k, a * c, a * s))
            .collect();
        terms.extend(other.terms.iter().map(|&(k, c, s)| (k, b * c, b * s)));
        Variation {
            offset: a * self.offset + b * other.offset,
            terms,
        }
    }

    /// The same variation shifted so that `u(0) = 0`.
    pub fn pinned(&self) -> Variation {
        let mut out = self.clone();
        out.offset -= self.value(0.0);
        out
    }
}

impl Smooth for Variation {
    fn jet(&self, t: f64) -> Jet {
        let mut j = Jet::new(self.offset, 0.0, 0.0, 0.0);
        for &(k, a, b) in &self.terms {
            let w = TAU * k as f64;
            let (s, c) = Float::sin_cos(w * t);
            let v = a * c + b * s;
            let dv = w * (b * c - a * s);
            j = j.plus(Jet::new(v, dv, -w * w * v, -w * w * dv));
        }
        j
    }
}

/// Sample `Δ_i = f(i/n) - f(0)`, `i = 0..=n`, of a quasi-periodic function.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffeoGrid {
    deltas: Vec<f64>,
    perimeter: f64,
}

impl DiffeoGrid {
    pub fn new<F: Smooth + ?Sized>(f: &F, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Unsupported("grid needs n >= 2"));
        }
        let f0 = f.value(0.0);
        let mut deltas: Vec<f64> = (0..=n).map(|i| f.value(i as f64 / n as f64) - f0).collect();
        let perimeter = deltas[n];
        deltas[0] = 0.0;
        if !deltas.windows(2).all(|w| w[1] > w[0]) {
            return Err(Error::InvalidCoordinates("grid values must increase"));
        }
        Ok(DiffeoGrid { deltas, perimeter })
    }

    pub fn cusps(&self) -> usize {
        self.deltas.len() - 1
    }

    pub fn perimeter(&self) -> f64 {
        self.perimeter
    }

    /// `Δ_0 = 0, …, Δ_n = P`.
    pub fn deltas(&self) -> &[f64] {
        &self.deltas
    }

    pub fn config(&self) -> Result<CrownConfig> {
        let n = self.cusps();
        CrownConfig::new(self.perimeter, self.deltas[1..n].to_vec())
    }

    pub fn gaps(&self) -> Result<DeltaGaps> {
        DeltaGaps::new(self.deltas.windows(2).map(|w| w[1] - w[0]).collect())
    }
}

/// `S[f, t]`.
pub fn schwarzian<F: Smooth + ?Sized>(f: &F, t: f64) -> f64 {
    f.jet(t).schwarzian()
}

/// `S[g∘f, t] - f′(t)² S[g, f(t)] - S[f, t]`.
pub fn cocycle_residual<G: Smooth + ?Sized, F: Smooth + ?Sized>(g: &G, f: &F, t: f64) -> f64 {
    let fj = f.jet(t);
    let gj = g.jet(fj.v);
    Jet::compose(gj, fj).schwarzian() - fj.d1 * fj.d1 * gj.schwarzian() - fj.schwarzian()
}

/// `S[(a e^{αf} + b)/(c e^{αf} + d), f] + α²/2`, evaluated at `f(t)`.
pub fn moebius_exp_schwarzian_residual<F: Smooth + ?Sized>(
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    alpha: f64,
    f: &F,
    t: f64,
) -> Result<f64> {
    let g = SmoothTestFn::moebius_exp(a, b, c, d, alpha)?;
    let y = f.value(t);
    let den = c * Float::exp(alpha * y) + d;
    if den == 0.0 || !den.is_finite() {
        return Err(Error::Domain {
            function: "moebius_exp_schwarzian_residual",
            arg: y,
        });
    }
    Ok(g.jet(y).schwarzian() + 0.5 * alpha * alpha)
}

/// `Σ_i log(e^{f(t_i+ε) - f(t_i-ε)} - 1)` with `ε = 1/n`, `t_i = i/n`.
pub fn discrete_crown_action<F: Smooth + ?Sized>(f: &F, n: usize) -> f64 {
    let eps = 1.0 / n as f64;
    let mut acc = CompensatedSum::new();
    for i in 0..n {
        let t = i as f64 * eps;
        acc.add(ln_expm1(f.value(t + eps) - f.value(t - eps)));
    }
    acc.value()
}

/// Extrapolate `values[k] ≈ c + a_1 ε_k + a_2 ε_k² + …` to `ε = 0` (Neville).
///
/// With three or more points the successive differences must shrink, else
/// [`Error::NonMonotone`].
pub fn richardson(eps: &[f64], values: &[f64]) -> Result<f64> {
    if eps.len() != values.len() {
        return Err(Error::LengthMismatch {
            left: eps.len(),
            right: values.len(),
        });
    }
    if eps.len() < 2 {
        return Err(Error::Unsupported(
            "extrapolation needs at least two grid sizes",
        ));
    }
    if eps.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Unsupported("grid sizes must be distinct"));
    }
    if values.len() >= 3 {
        let diffs: Vec<f64> = values.windows(2).map(|w| Float::abs(w[1] - w[0])).collect();
        if diffs.windows(2).any(|d| d[1] > d[0]) {
            return Err(Error::NonMonotone);
        }
    }
    let mut p: Vec<f64> = values.to_vec();
    let m = p.len();
    for level in 1..m {
        for i in 0..m - level {
            let (a, b) = (eps[i], eps[i + level]);
            p[i] = (a * p[i + 1] - b * p[i]) / (a - b);
        }
    }
    Ok(p[0])
}

/// `(1/6) ∫_0^1 [f‴/f′ + f′²] dt`.
pub fn action_coefficient_target<F: Smooth + ?Sized>(f: &F) -> f64 {
    integrate_unit(|t| {
        let j = f.jet(t);
        j.d3 / j.d1 + j.d1 * j.d1
    }) / 6.0
}

/// `(1/3) ∫_0^1 [-S[f,t] + ½ f′²] dt`, the Hill-potential form of
/// [`action_coefficient_target`] for periodic `f′`.
pub fn hill_potential_target<F: Smooth + ?Sized>(f: &F) -> f64 {
    integrate_unit(|t| {
        let j = f.jet(t);
        -j.schwarzian() + 0.5 * j.d1 * j.d1
    }) / 3.0
}

/// `(1/ε)^{-1} R(ε)` with `R(ε)` the action minus `log(2ε)/ε + (1/ε)∫log f′ + P`.
pub fn action_remainder<F: Smooth + ?Sized>(f: &F, n: usize) -> f64 {
    let eps = 1.0 / n as f64;
    let log_density = integrate_unit(|t| Float::ln(f.jet(t).d1));
    let p = f.quasi_period();
    let rest = (Float::ln(2.0 * eps) + log_density) / eps + p;
    (discrete_crown_action(f, n) - rest) / eps
}

/// Richardson limit of [`action_remainder`] over `n_list`; approaches
/// [`action_coefficient_target`].
pub fn action_expansion_coefficient<F: Smooth + ?Sized>(f: &F, n_list: &[usize]) -> Result<f64> {
    let eps: Vec<f64> = n_list.iter().map(|&n| 1.0 / n as f64).collect();
    let vals: Vec<f64> = n_list.iter().map(|&n| action_remainder(f, n)).collect();
    richardson(&eps, &vals)
}

/// `∫_0^1 S[f,t] dt + ½ ∫_0^1 f‴/f′ dt`.
pub fn hill_identity_residual<F: Smooth + ?Sized>(f: &F) -> f64 {
    integrate_unit(|t| {
        let j = f.jet(t);
        j.schwarzian() + 0.5 * j.d3 / j.d1
    })
}

/// `(3/2) f″/f′ |_0^1`, the boundary term of the integration by parts.
pub fn hill_boundary_term<F: Smooth + ?Sized>(f: &F) -> f64 {
    let (a, b) = (f.jet(0.0), f.jet(1.0));
    1.5 * (b.d2 / b.d1 - a.d2 / a.d1)
}

/// `(4 - (f₃-f₁)(f₂-f₀)/((f₃-f₂)(f₁-f₀))) / (2ε²)` with `f_k = f(t + kε)`,
/// `ε = 1/n`; tends to `S[f, t + 3ε/2]`.
pub fn cross_ratio_schwarzian<F: Smooth + ?Sized>(f: &F, t: f64, n: usize) -> f64 {
    let eps = 1.0 / n as f64;
    let v: [f64; 4] = core::array::from_fn(|k| f.value(t + k as f64 * eps));
    let cr = (v[3] - v[1]) * (v[2] - v[0]) / ((v[3] - v[2]) * (v[1] - v[0]));
    (4.0 - cr) / (2.0 * eps * eps)
}

// D log ξ_i along the variation: Δ_i moves by u(t_i) - u(0), x by G′(Δ_i)
// times that, and ξ_i = x_i - x_{i-1} with x_0 = 0 fixed.
fn dlog_xi<U: Smooth + ?Sized>(grid: &DiffeoGrid, u: &U) -> Vec<f64> {
    let n = grid.cusps();
    let p = grid.perimeter();
    let d = grid.deltas();
    let u0 = u.value(0.0);
    let dx: Vec<f64> = (0..n)
        .map(|i| {
            if i == 0 {
                0.0
            } else {
                x_of_delta_derivative(d[i], p) * (u.value(i as f64 / n as f64) - u0)
            }
        })
        .collect();
    let x: Vec<f64> = (0..n)
        .map(|i| if i == 0 { 0.0 } else { x_of_delta(d[i], p) })
        .collect();
    (1..n)
        .map(|i| (dx[i] - dx[i - 1]) / (x[i] - x[i - 1]))
        .collect()
}

/// The log-canonical form `Σ_{i<j} (-1)^{i+j} [Dlogξ_i(u) Dlogξ_j(v) - (u↔v)]`
/// on the grid `Δ_i = f(i/n) - f(0)`, for odd `n`.
pub fn discrete_symplectic<F, U, V>(f: &F, u: &U, v: &V, n: usize) -> Result<f64>
where
    F: Smooth + ?Sized,
    U: Smooth + ?Sized,
    V: Smooth + ?Sized,
{
    if n.is_multiple_of(2) {
        return Err(Error::EvenCusps(n));
    }
    let grid = DiffeoGrid::new(f, n)?;
    symplectic_eval(&dlog_xi(&grid, u), &dlog_xi(&grid, v))
}

/// `-(1/4) ∫_0^1 [(u′v″ - v′u″)/f′² - (u′v - v′u)] dt`.
pub fn continuum_symplectic<F, U, V>(f: &F, u: &U, v: &V) -> f64
where
    F: Smooth + ?Sized,
    U: Smooth + ?Sized,
    V: Smooth + ?Sized,
{
    -0.25
        * integrate_unit(|t| {
            let (fj, uj, vj) = (f.jet(t), u.jet(t), v.jet(t));
            (uj.d1 * vj.d2 - vj.d1 * uj.d2) / (fj.d1 * fj.d1) - (uj.d1 * vj.v - vj.d1 * uj.v)
        })
}

// D log h′ along u and its t-derivative, for h = g∘f, δf = u
fn log_derivative_variation(gj: Jet, fj: Jet, uj: Jet) -> (f64, f64) {
    let r = gj.d2 / gj.d1;
    let r_prime = gj.d3 / gj.d1 - r * r;
    let a = r * uj.v + uj.d1 / fj.d1;
    let da = r_prime * fj.d1 * uj.v + r * uj.d1 + uj.d2 / fj.d1 - uj.d1 * fj.d2 / (fj.d1 * fj.d1);
    (a, da)
}

/// `ω_GF[h](u, v) = -(1/4) ∫ [D log h′(u) ∂_t D log h′(v) - (u↔v)] dt` for
/// `h = g∘f` under `δf = u`.
pub fn gelfand_fuchs<G, F, U, V>(g: &G, f: &F, u: &U, v: &V) -> f64
where
    G: Smooth + ?Sized,
    F: Smooth + ?Sized,
    U: Smooth + ?Sized,
    V: Smooth + ?Sized,
{
    -0.25
        * integrate_unit(|t| {
            let fj = f.jet(t);
            let gj = g.jet(fj.v);
            let (au, dau) = log_derivative_variation(gj, fj, u.jet(t));
            let (av, dav) = log_derivative_variation(gj, fj, v.jet(t));
            au * dav - av * dau
        })
}

/// `ω_GF[g∘f](ũ,ṽ) - ω_GF[f](ũ,ṽ) + ½ ∫ (ũ′ṽ - ṽ′ũ) S[g, f(t)] dt` with the
/// variations pinned at `t = 0` (`ũ = u - u(0)`), which keeps the integrand
/// finite when `g` has a pole at `f(1)`.
pub fn gf_change_of_variables_residual<G, F>(g: &G, f: &F, u: &Variation, v: &Variation) -> f64
where
    G: Smooth + ?Sized,
    F: Smooth + ?Sized,
{
    let (u, v) = (u.pinned(), v.pinned());
    let id = SmoothTestFn::identity();
    let composed = gelfand_fuchs(g, f, &u, &v);
    let plain = gelfand_fuchs(&id, f, &u, &v);
    let correction = 0.5
        * integrate_unit(|t| {
            let (uj, vj) = (u.jet(t), v.jet(t));
            (uj.d1 * vj.v - vj.d1 * uj.v) * g.jet(f.value(t)).schwarzian()
        });
    composed - plain + correction
}

/// `(1/6) ∫_0^1 f‴/f′ dt`.
pub fn disc_coefficient_target<F: Smooth + ?Sized>(f: &F) -> f64 {
    integrate_unit(|t| {
        let j = f.jet(t);
        j.d3 / j.d1
    }) / 6.0
}

/// Disc remainder on the `n - 1` interior cusps `z_i = f(i/n)`:
/// `[Σ log(z_{i+1} - z_{i-1}) - (n-1) log 2ε - Σ_{trap} log f′] / ε`, where
/// the last sum is the endpoint-corrected `(1/ε)∫log f′ - ½(log f′(0) + log f′(1))`
/// matching an interior-point Riemann sum.
pub fn disc_remainder<F: Smooth + ?Sized>(f: &F, n: usize) -> f64 {
    let eps = 1.0 / n as f64;
    let z: Vec<f64> = (0..=n).map(|i| f.value(i as f64 * eps)).collect();
    let mut acc = CompensatedSum::new();
    for i in 1..n {
        acc.add(Float::ln(z[i + 1] - z[i - 1]));
    }
    let log_density = integrate_unit(|t| Float::ln(f.jet(t).d1));
    let ends = 0.5 * (Float::ln(f.jet(0.0).d1) + Float::ln(f.jet(1.0).d1));
    let rest = (n as f64 - 1.0) * (Float::ln(eps) + LN_2) + log_density / eps - ends;
    (acc.value() - rest) / eps
}

/// Richardson limit of [`disc_remainder`]; approaches
/// [`disc_coefficient_target`], with no `f′²` term.
pub fn disc_continuum_coefficient<F: Smooth + ?Sized>(f: &F, n_list: &[usize]) -> Result<f64> {
    let (a, b) = (f.value(0.0), f.value(1.0));
    if Float::abs(a) > 1e-12 || Float::abs(b - 1.0) > 1e-12 {
        return Err(Error::InvalidCoordinates(
            "disc test functions must fix 0 and 1",
        ));
    }
    let eps: Vec<f64> = n_list.iter().map(|&n| 1.0 / n as f64).collect();
    let vals: Vec<f64> = n_list.iter().map(|&n| disc_remainder(f, n)).collect();
    richardson(&eps, &vals)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::crown_action;
    use alloc::vec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn warp() -> SmoothTestFn {
        SmoothTestFn::warp(1.0, 0.1, 1)
    }

    #[test]
    fn jets_match_finite_differences() {
        let fns = [
            warp(),
            SmoothTestFn::SinSquared { amp: 0.05 },
            SmoothTestFn::Exp { alpha: 1.3 },
            SmoothTestFn::moebius(2.0, 1.0, 0.5, 3.0).unwrap(),
            SmoothTestFn::crown_map(1.0),
            SmoothTestFn::compose(SmoothTestFn::Exp { alpha: 0.7 }, warp()),
        ];
        let h = 1e-3;
        for f in &fns {
            for &t in &[0.1, 0.37, 0.62] {
                let j = f.jet(t);
                let v: [f64; 5] = core::array::from_fn(|k| f.value(t + (k as f64 - 2.0) * h));
                let d1 = (v[0] - 8.0 * v[1] + 8.0 * v[3] - v[4]) / (12.0 * h);
                let d2 = (-v[0] + 16.0 * v[1] - 30.0 * v[2] + 16.0 * v[3] - v[4]) / (12.0 * h * h);
                let d3 = (-v[0] + 2.0 * v[1] - 2.0 * v[3] + v[4]) / (2.0 * h * h * h);
                let scale = 1.0 + j.d3.abs();
                assert!((j.d1 - d1).abs() < 1e-8 * scale, "{f:?}");
                assert!((j.d2 - d2).abs() < 1e-6 * scale, "{f:?}");
                assert!((j.d3 - d3).abs() < 1e-4 * scale, "{f:?}");
            }
        }
    }

    #[test]
    fn schwarzian_examples() {
        assert_eq!(schwarzian(&SmoothTestFn::identity(), 0.3), 0.0);
        for alpha in [0.5, 1.0, 2.0] {
            let s = schwarzian(&SmoothTestFn::Exp { alpha }, 0.4);
            assert!((s + 0.5 * alpha * alpha).abs() < 1e-12);
        }
    }

    #[test]
    fn schwarzian_finite_difference_slope() {
        // second-order finite-difference Schwarzian; halving h quarters the error
        let f = warp();
        let t = 0.3;
        let fd = |h: f64| {
            let v: [f64; 5] = core::array::from_fn(|k| f.value(t + (k as f64 - 2.0) * h));
            let d1 = (v[3] - v[1]) / (2.0 * h);
            let d2 = (v[3] - 2.0 * v[2] + v[1]) / (h * h);
            let d3 = (v[4] - 2.0 * v[3] + 2.0 * v[1] - v[0]) / (2.0 * h * h * h);
            d3 / d1 - 1.5 * (d2 / d1).powi(2)
        };
        let exact = schwarzian(&f, t);
        let (e1, e2) = ((fd(1e-2) - exact).abs(), (fd(5e-3) - exact).abs());
        let order = (e1 / e2).log2();
        assert!((order - 2.0).abs() < 0.2, "order {order}");
    }

    #[test]
    fn cocycle_and_moebius_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let f = warp();
        let exp = SmoothTestFn::Exp { alpha: 1.0 };
        for _ in 0..100 {
            let t = rng.random_range(0.0..1.0);
            assert!(cocycle_residual(&exp, &f, t).abs() <= 1e-10);
            assert!(cocycle_residual(&SmoothTestFn::identity(), &f, t).abs() < 1e-13);
        }
        for _ in 0..50 {
            let (a, b, c) = (
                rng.random_range(0.5..2.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(0.0..0.4),
            );
            let d = rng.random_range(1.0..2.0);
            let m = SmoothTestFn::moebius(a, b, c, d).unwrap();
            let t = rng.random_range(0.0..1.0);
            let g = SmoothTestFn::compose(m.clone(), f.clone());
            assert!((schwarzian(&g, t) - schwarzian(&f, t)).abs() <= 1e-9);
            assert!(cocycle_residual(&m, &f, t).abs() <= 1e-10);
        }
        assert!(SmoothTestFn::moebius(1.0, 2.0, 2.0, 4.0).is_err());
    }

    #[test]
    fn moebius_exp_constants() {
        let f = warp();
        assert_eq!(
            moebius_exp_schwarzian_residual(1.0, 0.0, 0.0, 1.0, 1.0, &f, 0.3).unwrap(),
            0.0
        );
        assert!(
            moebius_exp_schwarzian_residual(1.0, 0.5, 0.3, 2.0, 2.0, &f, 0.7)
                .unwrap()
                .abs()
                < 1e-8
        );
        let crown = SmoothTestFn::crown_map(1.0);
        for t in [0.1, 0.4, 0.8] {
            assert!((schwarzian(&crown, t) + 0.5).abs() < 1e-8);
        }
        assert!(moebius_exp_schwarzian_residual(1.0, 1.0, 1.0, 1.0, 1.0, &f, 0.2).is_err());
        // a pole at the evaluation point
        assert!(moebius_exp_schwarzian_residual(
            1.0,
            0.0,
            1.0,
            -1.0,
            1.0,
            &SmoothTestFn::linear(0.0),
            0.5
        )
        .is_err());
    }

    #[test]
    fn discrete_action_examples() {
        let p = 1.3;
        let n = 9;
        let lin = SmoothTestFn::linear(p);
        let want = n as f64 * (2.0 * p / n as f64).exp_m1().ln();
        assert!((discrete_crown_action(&lin, n) - want).abs() < 1e-12);
        // the gap form on the induced grid
        let f = SmoothTestFn::warp(1.4, 0.1, 2);
        let grid = DiffeoGrid::new(&f, 11).unwrap();
        let g = grid.gaps().unwrap();
        let extra: f64 = g.as_slice().iter().map(|&d| ln_expm1(d)).sum();
        assert!((discrete_crown_action(&f, 11) - crown_action(&g, 1.0) - extra).abs() < 1e-11);
        assert!(discrete_crown_action(&f, 5001).is_finite());
        assert_eq!(grid.config().unwrap().cusps(), 11);
    }

    #[test]
    fn linear_action_coefficient() {
        for p in [0.5, 1.0, 2.0] {
            let c = action_expansion_coefficient(&SmoothTestFn::linear(p), &[2001, 4001]).unwrap();
            assert!((c - p * p / 6.0).abs() < 1e-3 * p * p / 6.0, "P={p}: {c}");
        }
    }

    #[test]
    fn warped_action_coefficient() {
        let f = warp();
        let c = action_expansion_coefficient(&f, &[2001, 4001]).unwrap();
        let target = action_coefficient_target(&f);
        assert!((c - target).abs() < 1e-4 * target, "{c} vs {target}");
        assert!((hill_potential_target(&f) - target).abs() < 1e-12);
    }

    #[test]
    fn hill_identity() {
        assert_eq!(hill_identity_residual(&SmoothTestFn::linear(2.0)), 0.0);
        // amplitude 0.2 would make f′ change sign; 0.15 is the largest clean one
        let f = SmoothTestFn::warp(1.0, 0.15, 1);
        assert!(hill_identity_residual(&f).abs() < 1e-8);
        assert!(hill_boundary_term(&f).abs() < 1e-12);
        // not periodic: the boundary term survives
        assert!(hill_boundary_term(&SmoothTestFn::Exp { alpha: 1.0 }).abs() < 1e-15);
        assert!(
            hill_boundary_term(&SmoothTestFn::moebius(1.0, 0.0, 1.0, 1.0).unwrap()).abs() > 0.1
        );
    }

    #[test]
    fn richardson_rules() {
        assert!(richardson(&[0.1], &[1.0]).is_err());
        // exact on a line
        let c = richardson(&[0.1, 0.05], &[1.2, 1.1]).unwrap();
        assert!((c - 1.0).abs() < 1e-14);
        let q = richardson(
            &[0.1, 0.05, 0.025],
            &[
                1.0 + 0.1 + 0.01,
                1.0 + 0.05 + 0.0025,
                1.0 + 0.025 + 0.000625,
            ],
        )
        .unwrap();
        assert!((q - 1.0).abs() < 1e-12);
        assert_eq!(
            richardson(&[0.1, 0.05, 0.025], &[1.0, 1.1, 1.5]),
            Err(Error::NonMonotone)
        );
    }

    #[test]
    fn cross_ratio() {
        assert_eq!(
            cross_ratio_schwarzian(&SmoothTestFn::identity(), 0.2, 64),
            0.0
        );
        let m = SmoothTestFn::moebius(1.0, 0.0, 0.5, 1.0).unwrap();
        let (a, b) = (
            cross_ratio_schwarzian(&m, 0.2, 100).abs(),
            cross_ratio_schwarzian(&m, 0.2, 1000).abs(),
        );
        assert!(b < 1e-4 && b <= a.max(1e-6));
        let f = warp();
        let n = 2000;
        let t = 0.3;
        let est = cross_ratio_schwarzian(&f, t, n);
        let exact = schwarzian(&f, t + 1.5 / n as f64);
        assert!((est - exact).abs() < 0.05 * exact.abs());
    }

    fn triple() -> (SmoothTestFn, Variation, Variation) {
        (warp(), Variation::sin(1), Variation::cos(1))
    }

    #[test]
    fn symplectic_algebra() {
        let (f, u, v) = triple();
        assert_eq!(discrete_symplectic(&f, &u, &u, 101).unwrap(), 0.0);
        assert!(discrete_symplectic(&f, &u, &v, 100).is_err());
        let w = Variation::new(0.3, vec![(2, 0.5, -0.2)]);
        let lhs = discrete_symplectic(&f, &u.combine(2.0, &w, -0.5), &v, 201).unwrap();
        let rhs = 2.0 * discrete_symplectic(&f, &u, &v, 201).unwrap()
            - 0.5 * discrete_symplectic(&f, &w, &v, 201).unwrap();
        assert!((lhs - rhs).abs() < 1e-10 * lhs.abs().max(1.0));
        let a = discrete_symplectic(&f, &u, &v, 201).unwrap();
        let b = discrete_symplectic(&f, &v, &u, 201).unwrap();
        assert!((a + b).abs() < 1e-12 * a.abs());
        assert_eq!(continuum_symplectic(&f, &u, &u), 0.0);
    }

    #[test]
    fn symplectic_continuum_limit() {
        let (f, u, v) = triple();
        let target = continuum_symplectic(&f, &u, &v);
        let errs: Vec<f64> = [501usize, 1001, 2001]
            .iter()
            .map(|&n| (discrete_symplectic(&f, &u, &v, n).unwrap() - target).abs())
            .collect();
        assert!(errs[0] > errs[1] && errs[1] > errs[2], "{errs:?}");
        assert!(errs[2] < 0.05 * target.abs());
    }

    #[test]
    fn gelfand_fuchs_pure_part() {
        let (f, u, v) = triple();
        let id = SmoothTestFn::identity();
        let gf = gelfand_fuchs(&id, &f, &u, &v);
        let direct = -0.25
            * integrate_unit(|t| {
                let (fj, uj, vj) = (f.jet(t), u.jet(t), v.jet(t));
                (uj.d1 * vj.d2 - vj.d1 * uj.d2) / (fj.d1 * fj.d1)
            });
        assert!((gf - direct).abs() < 1e-12);
    }

    #[test]
    fn gf_change_of_variables() {
        let (f, u, v) = triple();
        assert!(
            gf_change_of_variables_residual(&SmoothTestFn::identity(), &f, &u, &v).abs() < 1e-13
        );
        let crown = SmoothTestFn::crown_map(f.quasi_period());
        assert!(gf_change_of_variables_residual(&crown, &f, &u, &v).abs() < 1e-6);
        let exp = SmoothTestFn::Exp { alpha: 1.0 };
        assert!(gf_change_of_variables_residual(&exp, &f, &u, &v).abs() < 1e-6);
        // with S[g,f] = -1/2 the correction is +¼∫(u′v - v′u)
        let (up, vp) = (u.pinned(), v.pinned());
        let quarter = 0.25
            * integrate_unit(|t| {
                let (a, b) = (up.jet(t), vp.jet(t));
                a.d1 * b.v - b.d1 * a.v
            });
        let id = SmoothTestFn::identity();
        let diff = gelfand_fuchs(&crown, &f, &up, &vp) - gelfand_fuchs(&id, &f, &up, &vp);
        assert!((diff - quarter).abs() < 1e-6);
    }

    #[test]
    fn disc_coefficient() {
        let id = SmoothTestFn::identity();
        assert!(
            disc_continuum_coefficient(&id, &[1001, 2001])
                .unwrap()
                .abs()
                < 1e-8
        );
        let f = SmoothTestFn::SinSquared { amp: 0.05 };
        let c = disc_continuum_coefficient(&f, &[2001, 4001]).unwrap();
        let target = disc_coefficient_target(&f);
        assert!((c - target).abs() < 0.03 * target, "{c} vs {target}");
        let crown_style = action_coefficient_target(&f);
        assert!((c - crown_style).abs() > 0.5 * crown_style);
        assert!(disc_continuum_coefficient(&SmoothTestFn::warp(1.4, 0.1, 1), &[101, 201]).is_err());
    }
}
