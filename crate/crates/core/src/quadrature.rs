//! Globally adaptive 10-point Gauss / 21-point Kronrod quadrature in the
//! style of QUADPACK's QAG.
//!
//! Intervals are bisected in order of their error estimate until the summed
//! estimate meets `max(abs_tol, rel_tol * |I|)`. Integrable endpoint
//! singularities (logarithmic, inverse square root) are handled by bisection
//! alone, at the price of more subintervals.

use alloc::collections::BinaryHeap;
use core::cmp::Ordering;

use num_traits::Float;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub abs_error_bound: f64,
    pub evaluations: u64,
}

#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_intervals: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            abs: 1e-10,
            rel: 1e-10,
            max_intervals: 2000,
        }
    }
}

impl Tolerance {
    pub fn new(abs: f64, rel: f64) -> Self {
        Tolerance {
            abs,
            rel,
            ..Default::default()
        }
    }
}

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_161_680_164,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights for the odd-indexed Kronrod nodes XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod21<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_k = WGK[10] * fc;
    let mut res_g = 0.0;
    let mut res_abs = Float::abs(res_k);
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (Float::abs(f1) + Float::abs(f2));
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * Float::abs(fc - mean);
    for j in 0..10 {
        res_asc += WGK[j] * (Float::abs(fv1[j] - mean) + Float::abs(fv2[j] - mean));
    }
    let value = res_k * half;
    let res_abs = res_abs * Float::abs(half);
    let res_asc = res_asc * Float::abs(half);
    let mut err = Float::abs((res_k - res_g) * half);
    if res_asc != 0.0 && err != 0.0 {
        let scale = Float::powf(200.0 * err / res_asc, 1.5);
        err = res_asc * if scale < 1.0 { scale } else { 1.0 };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        let floor = 50.0 * f64::EPSILON * res_abs;
        if floor > err {
            err = floor;
        }
    }
    (value, err)
}

/// Integrate `f` over `[a, b]`.
///
/// Returns the best estimate even when the tolerance was not met; the
/// `converged` flag of [`integrate_flagged`] tells the two apart. This entry
/// point turns non-convergence into [`Error::Convergence`].
pub fn integrate<F: FnMut(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    tol: Tolerance,
) -> Result<QuadratureResult> {
    let (res, converged) = integrate_flagged(f, a, b, tol);
    if converged {
        Ok(res)
    } else {
        Err(Error::Convergence {
            value: res.value,
            error_bound: res.abs_error_bound,
        })
    }
}

/// Like [`integrate`] but always returns the estimate together with a flag.
pub fn integrate_flagged<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    tol: Tolerance,
) -> (QuadratureResult, bool) {
    if a == b {
        return (
            QuadratureResult {
                value: 0.0,
                abs_error_bound: 0.0,
                evaluations: 0,
            },
            true,
        );
    }
    let mut evaluations = 21u64;
    let (v0, e0) = kronrod21(&mut f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Segment {
        a,
        b,
        value: v0,
        error: e0,
    });
    let mut total = v0;
    let mut total_err = e0;
    let target = |v: f64| tol.abs.max(tol.rel * Float::abs(v));
    while total_err > target(total) && heap.len() < tol.max_intervals {
        let seg = match heap.pop() {
            Some(s) => s,
            None => break,
        };
        let mid = 0.5 * (seg.a + seg.b);
        if !(mid > seg.a && mid < seg.b) {
            // cannot bisect further at double precision
            heap.push(seg);
            break;
        }
        let (v1, e1) = kronrod21(&mut f, seg.a, mid);
        let (v2, e2) = kronrod21(&mut f, mid, seg.b);
        evaluations += 42;
        total += v1 + v2 - seg.value;
        total_err += e1 + e2 - seg.error;
        heap.push(Segment {
            a: seg.a,
            b: mid,
            value: v1,
            error: e1,
        });
        heap.push(Segment {
            a: mid,
            b: seg.b,
            value: v2,
            error: e2,
        });
    }
    // re-sum to shed drift from the incremental updates
    let mut value = crate::numeric::CompensatedSum::new();
    let mut error = 0.0;
    for s in heap.iter() {
        value.add(s.value);
        error += s.error;
    }
    let value = value.value();
    let converged = error <= target(value);
    (
        QuadratureResult {
            value,
            abs_error_bound: error,
            evaluations,
        },
        converged,
    )
}

/// Integrate over `(-∞, b]` through `u = b - (1 - s)/s`, `s ∈ (0, 1]`.
pub fn integrate_to_upper<F: FnMut(f64) -> f64>(
    mut f: F,
    b: f64,
    tol: Tolerance,
) -> Result<QuadratureResult> {
    integrate(
        |s| {
            let u = b - (1.0 - s) / s;
            let v = f(u);
            if v == 0.0 {
                0.0
            } else {
                v / (s * s)
            }
        },
        0.0,
        1.0,
        tol,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronrod_exact_for_polynomials() {
        let mut f = |x: f64| x.powi(30) + x.powi(3);
        let (v, _) = kronrod21(&mut f, 0.0, 1.0);
        assert!((v - (1.0 / 31.0 + 0.25)).abs() < 1e-15);
        // Gauss part must be exact through degree 19: error estimate tiny
        let mut g = |x: f64| x.powi(19);
        let (v, e) = kronrod21(&mut g, -1.0, 2.0);
        assert!((v - (2f64.powi(20) - 1.0) / 20.0).abs() < 1e-9);
        assert!(e < 1e-8);
    }

    #[test]
    fn smooth_integral() {
        let r = integrate(
            |x: f64| x.sin(),
            0.0,
            core::f64::consts::PI,
            Tolerance::new(1e-13, 1e-13),
        )
        .unwrap();
        assert!((r.value - 2.0).abs() < 1e-13);
        assert!(r.abs_error_bound <= 1e-13);
    }

    #[test]
    fn log_endpoint_singularity() {
        let r = integrate(|x: f64| x.ln(), 0.0, 1.0, Tolerance::new(1e-12, 1e-12)).unwrap();
        assert!((r.value + 1.0).abs() < 1e-11);
        let r = integrate(
            |x: f64| 1.0 / x.sqrt(),
            0.0,
            1.0,
            Tolerance::new(1e-10, 1e-10),
        )
        .unwrap();
        assert!((r.value - 2.0).abs() < 1e-9);
    }

    #[test]
    fn semi_infinite() {
        let r = integrate_to_upper(|u: f64| u.exp(), 0.0, Tolerance::new(1e-12, 1e-12)).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn non_convergence_is_reported() {
        let tol = Tolerance {
            abs: 1e-14,
            rel: 0.0,
            max_intervals: 3,
        };
        let err = integrate(|x: f64| 1.0 / x.sqrt(), 0.0, 1.0, tol).unwrap_err();
        assert!(matches!(err, Error::Convergence { .. }));
    }
}
