//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails. Tolerances are the published ones; nothing is loosened.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use moduli_core::continuum::{
    action_coefficient_target, action_expansion_coefficient, cocycle_residual,
    continuum_symplectic, cross_ratio_schwarzian, disc_coefficient_target,
    disc_continuum_coefficient, discrete_symplectic, gf_change_of_variables_residual,
    moebius_exp_schwarzian_residual, schwarzian, SmoothTestFn, Variation,
};
use moduli_core::geometry::{
    crown_action, delta_from_x, gaps_from_config, kissing_radii, s_lengths, shear_action,
    x_from_xi, xi_from_shear, CrownConfig, ShearCoords, XCoords, XiCoords,
};
use moduli_core::poisson::{
    casimir_bracket_residual, dense_product, inverse_ones_matrix, ones_upper_matrix, pfaffian,
    pfaffian_closed_form, x_bracket_matrix, xi_bracket_transform_check,
};
use moduli_core::specfun::{dilog_re, five_term_residual};
use moduli_core::volumes::{
    crown_volume_mc, crown_volume_quadrature, disc_volume_quadrature, q_n_mc, v3_closed,
    v4_reduced_quadrature,
};
use moduli_core::Proposal;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PI2: f64 = PI * PI;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn mark(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "VIOLATED"
    }
}

// xi ~ U(0.2, 2) prefix sums: well separated increasing x
fn random_x(rng: &mut ChaCha8Rng, m: usize) -> XCoords {
    let mut acc = 0.0;
    let x = (0..m)
        .map(|_| {
            acc += rng.random_range(0.2..2.0);
            acc
        })
        .collect();
    XCoords::new(x).unwrap()
}

fn random_config(rng: &mut ChaCha8Rng, n: usize) -> CrownConfig {
    let p = rng.random_range(0.2..6.0);
    let mut d: Vec<f64> = (0..n - 1).map(|_| rng.random_range(0.0..p)).collect();
    d.sort_by(f64::total_cmp);
    CrownConfig::new(p, d).unwrap()
}

fn det(mut a: Vec<f64>, m: usize) -> f64 {
    let mut d = 1.0;
    for c in 0..m {
        let p = (c..m)
            .max_by(|&i, &j| a[i * m + c].abs().total_cmp(&a[j * m + c].abs()))
            .unwrap();
        if a[p * m + c] == 0.0 {
            return 0.0;
        }
        if p != c {
            for k in 0..m {
                a.swap(p * m + k, c * m + k);
            }
            d = -d;
        }
        d *= a[c * m + c];
        for r in c + 1..m {
            let f = a[r * m + c] / a[c * m + c];
            for k in c..m {
                a[r * m + k] -= f * a[c * m + k];
            }
        }
    }
    d
}

fn c01() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for p in [0.5, 1.0, 3.0] {
        let q = crown_volume_quadrature(3, p).unwrap();
        worst = worst.max(rel(q.value, v3_closed(p)));
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst <= 1e-6 && secs < 5.0,
        format!("max rel err {worst:.2e} (<= 1e-6), {secs:.2} s (< 5 s)"),
    )
}

fn c02() -> Outcome {
    let start = Instant::now();
    let est = crown_volume_mc(3, 1.0, 1_000_000, 2, Proposal::DirichletHalf).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let want = v3_closed(1.0);
    let r = rel(est.estimate, want);
    let z = (est.estimate - want).abs() / est.stderr;
    outcome(
        r <= 0.01 && z <= 3.0 && secs < 30.0,
        format!(
            "MC {:.7} ± {:.1e} vs {want:.7}: rel {r:.2e}, {z:.2} stderr, {secs:.2} s",
            est.estimate, est.stderr
        ),
    )
}

fn c03() -> Outcome {
    let v3 = v3_closed(1e-3);
    let r1 = rel(v3, PI2 / 16.0);
    let est = crown_volume_mc(4, 1e-2, 10_000_000, 3, Proposal::DirichletHalf).unwrap();
    let want = PI2 / 48.0;
    let r2 = rel(est.estimate, want);
    let (ok1, ok2) = (r1 <= 1e-3, r2 <= 0.02);
    outcome(
        ok1 && ok2,
        format!(
            "V3(1e-3) rel {r1:.2e} {}; V4 MC(1e-2) = {:.6} ± {:.1e} vs π²/48 = {want:.6}: rel {r2:.2e} {}",
            mark(ok1),
            est.estimate,
            est.stderr,
            mark(ok2)
        ),
    )
}

fn c04() -> Outcome {
    let p: f64 = 20.0;
    let ratio = v3_closed(p) / (p * p * (-p).exp() / 8.0);
    let r = rel(ratio, 1.0 + PI2 / 400.0);
    outcome(
        r <= 0.03,
        format!(
            "ratio {ratio:.6} vs {:.6}: rel {r:.2e} (<= 3e-2)",
            1.0 + PI2 / 400.0
        ),
    )
}

fn c05() -> Outcome {
    let mut worst_q: f64 = 0.0;
    let mut worst_z: f64 = 0.0;
    for (k, p) in [0.5, 1.0, 2.0].into_iter().enumerate() {
        let reduced = v4_reduced_quadrature(p).unwrap().value;
        let nested = crown_volume_quadrature(4, p).unwrap().value;
        worst_q = worst_q.max(rel(nested, reduced));
        let est =
            crown_volume_mc(4, p, 10_000_000, 50 + k as u64, Proposal::DirichletHalf).unwrap();
        worst_z = worst_z.max((est.estimate - reduced).abs() / est.stderr);
    }
    let (ok1, ok2) = (worst_q <= 1e-6, worst_z <= 3.0);
    outcome(
        ok1 && ok2,
        format!(
            "quadrature paths max rel {worst_q:.2e} {}; MC max {worst_z:.2} stderr {}",
            mark(ok1),
            mark(ok2)
        ),
    )
}

fn c06() -> Outcome {
    let v4 = disc_volume_quadrature(4).unwrap().value;
    let v5 = disc_volume_quadrature(5).unwrap().value;
    let v6 = disc_volume_quadrature(6).unwrap().value;
    let (a, b, c) = ((v4 - 1.0).abs(), rel(v5, PI2 / 6.0), rel(v6, PI2 / 3.0));
    outcome(
        a <= 1e-10 && b <= 5e-3 && c <= 1e-2,
        format!(
            "|V4-1| {a:.1e} {}; V5 rel {b:.1e} {}; V6 rel {c:.1e} {}",
            mark(a <= 1e-10),
            mark(b <= 5e-3),
            mark(c <= 1e-2)
        ),
    )
}

fn c07() -> Outcome {
    let q3 = q_n_mc(3, 10_000_000, 7).unwrap();
    let q4 = q_n_mc(4, 10_000_000, 8).unwrap();
    let (r3, r4) = (rel(q3.estimate, PI2 / 6.0), rel(q4.estimate, PI2 / 12.0));
    outcome(
        r3 <= 5e-3 && r4 <= 5e-3,
        format!(
            "q3 = {:.5} ± {:.1e}: rel {r3:.1e} vs π²/6 {}; q4 = {:.5} ± {:.1e}: rel {r4:.1e} vs π²/12 {}",
            q3.estimate,
            q3.stderr,
            mark(r3 <= 5e-3),
            q4.estimate,
            q4.stderr,
            mark(r4 <= 5e-3)
        ),
    )
}

fn c08() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut worst_pf, mut worst_det): (f64, f64) = (0.0, 0.0);
    for n in [3usize, 5, 7] {
        for _ in 0..50 {
            let x = random_x(&mut rng, n - 1);
            let b = x_bracket_matrix(&x);
            let pf = pfaffian(&b).unwrap();
            worst_pf = worst_pf.max(rel(pf, pfaffian_closed_form(&x).unwrap()));
            worst_det = worst_det.max(rel(pf * pf, det(b.to_dense(), n - 1)));
        }
    }
    outcome(
        worst_pf <= 1e-10 && worst_det <= 1e-10,
        format!("closed vs recursive max rel {worst_pf:.1e}; Pf² vs det max rel {worst_det:.1e} (<= 1e-10)"),
    )
}

fn c09() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst: f64 = 0.0;
    for n in [3usize, 5, 7] {
        for _ in 0..50 {
            worst = worst.max(xi_bracket_transform_check(&random_x(&mut rng, n - 1)));
        }
    }
    let mut cas = 0;
    for n in [4usize, 6, 8] {
        let xi: Vec<f64> = (0..n - 1).map(|_| rng.random_range(0.2..2.0)).collect();
        cas = cas.max(casimir_bracket_residual(&XiCoords::new(xi).unwrap()).unwrap());
    }
    outcome(
        worst <= 1e-12 && cas == 0,
        format!("bracket max rel {worst:.1e} (<= 1e-12); Casimir residual {cas}"),
    )
}

fn c10() -> Outcome {
    let mut worst: f64 = 0.0;
    for m in [2usize, 4, 6, 8] {
        let prod = dense_product(&ones_upper_matrix(m), &inverse_ones_matrix(m).unwrap()).unwrap();
        for i in 0..m {
            for j in 0..m {
                let id = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((prod[i * m + j] - id).abs());
            }
        }
    }
    let mut parts = Vec::new();
    let mut ok_pf = true;
    for m in [2usize, 4, 6] {
        let pf = pfaffian(&inverse_ones_matrix(m).unwrap()).unwrap();
        let ok = (pf - 1.0).abs() <= 1e-13;
        ok_pf &= ok;
        parts.push(format!("Pf(B_{m}) = {pf} {}", mark(ok)));
    }
    outcome(
        worst <= 1e-14 && ok_pf,
        format!("max |AB - I| {worst:.1e}; {}", parts.join(", ")),
    )
}

fn c11() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let (x, y) = (
            rng.random_range(0.001..0.999),
            rng.random_range(0.001..0.999),
        );
        worst = worst.max(five_term_residual(x, y).unwrap().abs());
    }
    let mut two: f64 = 0.0;
    for p in [0.1f64, 1.0, 10.0] {
        let lhs = dilog_re(1.0 + p.exp()).unwrap() + dilog_re(1.0 + (-p).exp()).unwrap();
        two = two.max((lhs - 0.5 * (p * p + PI2)).abs());
    }
    outcome(
        worst <= 1e-12 && two <= 1e-10,
        format!(
            "five-term max {worst:.1e} {}; two-term max {two:.3e} {}",
            mark(worst <= 1e-12),
            mark(two <= 1e-10)
        ),
    )
}

fn c12() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut worst: f64 = 0.0;
    for n in [1usize, 3, 5, 7] {
        for _ in 0..20 {
            let c = random_config(&mut rng, n);
            let g = gaps_from_config(&c);
            let r = kissing_radii(&c).unwrap();
            let log_prod: f64 = s_lengths(&c, &r).unwrap().iter().map(|s| s.ln()).sum();
            let gap_product: f64 = (1..=n as isize)
                .map(|i| ((g.gap(i) + g.gap(i + 1)).exp() - 1.0).ln() - (g.gap(i).exp() - 1.0).ln())
                .sum();
            worst = worst.max(rel(log_prod.exp(), gap_product.exp()));
        }
    }
    let p = 1.0;
    let s = ShearCoords::from_y(vec![p - 0.4 - 0.1, 0.4, 0.1], p).unwrap();
    let x = x_from_xi(&xi_from_shear(&s));
    let chain = crown_action(&gaps_from_config(&delta_from_x(&x, p).unwrap()), 1.0);
    let direct = shear_action(&s, 1.0);
    let r = rel(chain, direct);
    outcome(
        worst <= 1e-10 && r <= 1e-9,
        format!(
            "∏s vs gap product max rel {worst:.3e} {}; shear chain {chain:.9} vs {direct:.9}: rel {r:.3e} {}",
            mark(worst <= 1e-10),
            mark(r <= 1e-9)
        ),
    )
}

fn c13() -> Outcome {
    let f = SmoothTestFn::warp(1.0, 0.1, 1);
    let c = action_expansion_coefficient(&f, &[2001, 4001]).unwrap();
    let target = action_coefficient_target(&f);
    let r1 = rel(c, target);
    let lin = action_expansion_coefficient(&SmoothTestFn::linear(1.0), &[2001, 4001]).unwrap();
    let r2 = rel(lin, 1.0 / 6.0);
    outcome(
        r1 <= 0.02 && r2 <= 5e-3,
        format!(
            "warp {c:.7} vs {target:.7}: rel {r1:.1e} (<= 2e-2); f = t: rel {r2:.1e} (<= 5e-3)"
        ),
    )
}

fn c14() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let f = SmoothTestFn::warp(1.0, 0.1, 1);
    let exp = SmoothTestFn::Exp { alpha: 1.0 };
    let mut cocycle: f64 = 0.0;
    for _ in 0..100 {
        let t = rng.random_range(0.0..1.0);
        cocycle = cocycle.max(cocycle_residual(&exp, &f, t).abs());
        let m = SmoothTestFn::moebius(1.5, 0.3, 0.2, 1.0).unwrap();
        cocycle = cocycle.max(cocycle_residual(&m, &f, t).abs());
    }
    let mut mobexp: f64 = 0.0;
    for alpha in [1.0, 2.0] {
        for &(a, b, c, d) in &[(1.0, 0.0, 0.0, 1.0), (2.0, -1.0, 0.5, 3.0)] {
            for t in [0.1, 0.5, 0.9] {
                mobexp = mobexp.max(
                    moebius_exp_schwarzian_residual(a, b, c, d, alpha, &f, t)
                        .unwrap()
                        .abs(),
                );
            }
        }
    }
    let crown = SmoothTestFn::crown_map(1.0);
    let crown_err = [0.1, 0.3, 0.5, 0.7, 0.9]
        .iter()
        .map(|&y| (schwarzian(&crown, y) + 0.5).abs())
        .fold(0.0, f64::max);
    let n = 2000;
    let cross = [0.1, 0.3, 0.6, 0.8]
        .iter()
        .map(|&t| {
            rel(
                cross_ratio_schwarzian(&f, t, n),
                schwarzian(&f, t + 1.5 / n as f64),
            )
        })
        .fold(0.0, f64::max);
    outcome(
        cocycle <= 1e-10 && mobexp <= 1e-8 && crown_err <= 1e-8 && cross <= 0.05,
        format!("cocycle {cocycle:.1e}; Möbius-exp {mobexp:.1e}; crown map {crown_err:.1e}; cross-ratio rel {cross:.1e}"),
    )
}

fn c15() -> Outcome {
    let f = SmoothTestFn::warp(1.0, 0.1, 1);
    let (u, v) = (Variation::sin(1), Variation::cos(1));
    let target = continuum_symplectic(&f, &u, &v);
    let errs: Vec<f64> = [501usize, 1001, 2001]
        .iter()
        .map(|&n| rel(discrete_symplectic(&f, &u, &v, n).unwrap(), target))
        .collect();
    let mono = errs[0] > errs[1] && errs[1] > errs[2];
    let crown = SmoothTestFn::crown_map(1.0);
    let gf = gf_change_of_variables_residual(&crown, &f, &u, &v).abs();
    outcome(
        errs[2] <= 0.05 && mono && gf <= 1e-6,
        format!(
            "rel errors {:.1e}, {:.1e}, {:.1e} (decreasing: {mono}); GF residual {gf:.1e}",
            errs[0], errs[1], errs[2]
        ),
    )
}

fn c16() -> Outcome {
    let f = SmoothTestFn::SinSquared { amp: 0.05 };
    let c = disc_continuum_coefficient(&f, &[2001, 4001]).unwrap();
    let target = disc_coefficient_target(&f);
    let crown_style = action_coefficient_target(&f);
    let (r, rc) = (rel(c, target), rel(c, crown_style));
    outcome(
        r <= 0.03 && rc > 0.03,
        format!("coefficient {c:.6} vs (1/6)∫f‴/f′ {target:.6}: rel {r:.1e}; vs crown-style {crown_style:.6}: rel {rc:.2} (must fail)"),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 16] = [
        ("V3 closed form by quadrature", c01),
        ("V3 Monte Carlo", c02),
        ("small-P limits", c03),
        ("large-P regime", c04),
        ("V4 two paths", c05),
        ("disc volumes", c06),
        ("q constants", c07),
        ("Pfaffian closed form", c08),
        ("bracket transform and Casimir", c09),
        ("inverse and DH", c10),
        ("special functions", c11),
        ("geometry oracle", c12),
        ("continuum action", c13),
        ("Schwarzian suite", c14),
        ("symplectic continuum limit", c15),
        ("disc continuum", c16),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        if !o.pass {
            failed += 1;
        }
        println!(
            "{tag} {:>2} {name}: {} [{:.1} s]",
            k + 1,
            o.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
