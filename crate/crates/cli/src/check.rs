use std::f64::consts::PI;

use moduli_core::continuum::{
    action_coefficient_target, action_expansion_coefficient, action_remainder, cocycle_residual,
    continuum_symplectic, cross_ratio_schwarzian, disc_coefficient_target,
    disc_continuum_coefficient, discrete_symplectic, gf_change_of_variables_residual,
    hill_boundary_term, hill_identity_residual, hill_potential_target,
    moebius_exp_schwarzian_residual, schwarzian, SmoothTestFn, Variation,
};
use moduli_core::geometry::{
    crown_action, delta_from_x, disc_action, disc_measure_density, gaps_from_config, kissing_radii,
    s_lengths, shear_action, x_from_delta, x_from_xi, xi_from_shear, CrownConfig, DiscConfig,
    ShearCoords, XCoords, XiCoords,
};
use moduli_core::poisson::{
    casimir_bracket_residual, dense_product, dh_consistency, inverse_ones_matrix,
    ones_upper_matrix, pfaffian, pfaffian_closed_form, x_bracket_matrix,
    xi_bracket_transform_check,
};
use moduli_core::specfun::{dilog, dilog_re, five_term_residual, rogers_l};
use serde::Serialize;

use crate::args::Suite;
use crate::error::CliError;
use crate::output::sig12;

const PI2: f64 = PI * PI;

#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub suite: &'static str,
    pub check: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// One row of the continuum expansion table.
#[derive(Debug, Clone, Serialize)]
pub struct ExpansionRow {
    pub n: usize,
    pub remainder: f64,
    /// Two-point extrapolation using this size and the previous one.
    pub extrapolated: Option<f64>,
    pub target: f64,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Report {
    pub checks: Vec<CheckRecord>,
    pub expansion: Vec<ExpansionRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

impl Report {
    fn push(
        &mut self,
        suite: &'static str,
        check: impl Into<String>,
        residual: f64,
        tolerance: f64,
    ) {
        let pass = residual.is_finite() && residual <= tolerance;
        self.push_with(suite, check, residual, tolerance, pass);
    }

    fn push_with(
        &mut self,
        suite: &'static str,
        check: impl Into<String>,
        residual: f64,
        tolerance: f64,
        pass: bool,
    ) {
        self.checks.push(CheckRecord {
            suite,
            check: check.into(),
            residual: sig12(residual),
            tolerance,
            pass,
        });
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Deterministic points in `[0,1)^d`: a Weyl sequence with square roots of
/// primes as frequencies.
struct Weyl {
    k: u64,
}

impl Weyl {
    const PRIMES: [f64; 8] = [2.0, 3.0, 5.0, 7.0, 11.0, 13.0, 17.0, 19.0];

    fn new() -> Self {
        Weyl { k: 0 }
    }

    fn next(&mut self) -> f64 {
        self.k += 1;
        let a = Self::PRIMES[(self.k % 8) as usize].sqrt();
        (0.5 + self.k as f64 * a).fract()
    }

    fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next()
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn increasing_x(w: &mut Weyl, m: usize) -> XCoords {
    let mut acc = 0.0;
    XCoords::new(
        (0..m)
            .map(|_| {
                acc += w.range(0.2, 2.0);
                acc
            })
            .collect(),
    )
    .expect("increasing by construction")
}

fn crown_config(w: &mut Weyl, n: usize) -> CrownConfig {
    let p = w.range(0.2, 6.0);
    let mut d: Vec<f64> = (0..n - 1).map(|_| w.range(0.01 * p, 0.99 * p)).collect();
    d.sort_by(f64::total_cmp);
    d.dedup();
    CrownConfig::new(p, d).expect("sorted positions inside the perimeter")
}

fn specfun(r: &mut Report) -> Result<(), CliError> {
    let mut w = Weyl::new();
    let mut five: f64 = 0.0;
    for _ in 0..200 {
        five = five.max(five_term_residual(w.range(0.001, 0.999), w.range(0.001, 0.999))?.abs());
    }
    r.push("specfun", "five-term", five, 1e-12);

    let mut two: f64 = 0.0;
    for p in [0.1f64, 0.5, 1.0, 3.0, 10.0] {
        let lhs = dilog_re(1.0 + p.exp())? + dilog_re(1.0 + (-p).exp())?;
        two = two.max((lhs - 0.5 * (PI2 - p * p)).abs());
    }
    r.push(
        "specfun",
        "two-term Li2(1+e^P) + Li2(1+e^-P) = (pi^2 - P^2)/2",
        two,
        1e-10,
    );

    let mut refl: f64 = 0.0;
    let mut rogers: f64 = 0.0;
    for _ in 0..200 {
        let x = w.range(0.001, 0.999);
        refl =
            refl.max((dilog(x)? + dilog(1.0 - x)? - (PI2 / 6.0 - x.ln() * (1.0 - x).ln())).abs());
        rogers = rogers.max((rogers_l(x)? + rogers_l(1.0 - x)? - PI * PI2 / 36.0).abs());
    }
    r.push("specfun", "dilog reflection", refl, 1e-12);
    r.push("specfun", "Rogers L(x) + L(1-x)", rogers, 1e-12);
    Ok(())
}

fn poisson(r: &mut Report) -> Result<(), CliError> {
    let mut w = Weyl::new();
    let (mut pf_err, mut bracket): (f64, f64) = (0.0, 0.0);
    for n in [3usize, 5, 7] {
        for _ in 0..50 {
            let x = increasing_x(&mut w, n - 1);
            let pf = pfaffian(&x_bracket_matrix(&x))?;
            pf_err = pf_err.max(rel(pf, pfaffian_closed_form(&x)?));
            bracket = bracket.max(xi_bracket_transform_check(&x));
        }
    }
    r.push("poisson", "Pfaffian closed form", pf_err, 1e-10);
    r.push("poisson", "xi bracket transform", bracket, 1e-12);

    let mut cas = 0i64;
    for n in [4usize, 6, 8] {
        let xi = XiCoords::new((0..n - 1).map(|_| w.range(0.2, 2.0)).collect())?;
        cas = cas.max(casimir_bracket_residual(&xi)?.abs());
    }
    r.push("poisson", "Casimir bracket", cas as f64, 0.0);

    for n in [3usize, 5, 7] {
        r.push("poisson", format!("DH n={n}"), dh_consistency(n)?, 0.0);
    }

    let mut inv: f64 = 0.0;
    for m in [2usize, 4, 6, 8] {
        let prod = dense_product(&ones_upper_matrix(m), &inverse_ones_matrix(m)?)?;
        for i in 0..m {
            for j in 0..m {
                inv = inv.max((prod[i * m + j] - if i == j { 1.0 } else { 0.0 }).abs());
            }
        }
    }
    r.push("poisson", "ones matrix inverse", inv, 1e-14);
    Ok(())
}

fn geometry(r: &mut Report) -> Result<(), CliError> {
    let mut w = Weyl::new();
    let (mut round, mut kiss): (f64, f64) = (0.0, 0.0);
    for n in [1usize, 3, 5, 7] {
        for _ in 0..20 {
            let c = crown_config(&mut w, n);
            let back = delta_from_x(&x_from_delta(&c), c.perimeter())?;
            for (a, b) in c.positions().iter().zip(back.positions()) {
                round = round.max((a - b).abs());
            }
            let g = gaps_from_config(&c);
            let log_prod: f64 = s_lengths(&c, &kissing_radii(&c)?)?
                .iter()
                .map(|s| s.ln())
                .sum();
            let mut want = -0.5 * c.perimeter();
            for i in 1..=n as isize {
                want += ((g.gap(i) + g.gap(i + 1)).exp() - 1.0).ln() - (g.gap(i).exp() - 1.0).ln();
            }
            kiss = kiss.max((log_prod - want).abs() / want.abs().max(1.0));
        }
    }
    r.push("geometry", "x coordinate round trip", round, 1e-12);
    r.push(
        "geometry",
        "kissing product with e^(-P/2) deck factor",
        kiss,
        1e-10,
    );

    let mut shear: f64 = 0.0;
    for n in [3usize, 4, 5, 6] {
        for _ in 0..10 {
            let p = w.range(0.3, 4.0);
            let mut y: Vec<f64> = (0..n - 1).map(|_| w.range(-1.0, 1.0)).collect();
            y.push(p - y.iter().sum::<f64>());
            let s = ShearCoords::from_y(y, p)?;
            let x = x_from_xi(&xi_from_shear(&s));
            let chain = crown_action(&gaps_from_config(&delta_from_x(&x, p)?), 1.0);
            shear = shear.max((chain - shear_action(&s, 1.0) - 0.5 * p).abs());
        }
    }
    r.push("geometry", "shear chain offset P/2", shear, 1e-9);

    let mut density: f64 = 0.0;
    for n in 4..10usize {
        for _ in 0..10 {
            let mut z: Vec<f64> = (0..n - 3).map(|_| w.range(0.01, 0.99)).collect();
            z.sort_by(f64::total_cmp);
            z.dedup();
            let d = DiscConfig::new(z)?;
            let got = disc_measure_density(&d) * (-disc_action(&d)).exp();
            let want = 1.0 / d.gaps().windows(2).map(|g| g[0] + g[1]).product::<f64>();
            density = density.max(rel(got, want));
        }
    }
    r.push("geometry", "disc density times e^(-S)", density, 1e-12);
    Ok(())
}

const EXPANSION_SIZES: [usize; 4] = [501, 1001, 2001, 4001];

fn continuum(r: &mut Report) -> Result<(), CliError> {
    let mut w = Weyl::new();
    let f = SmoothTestFn::warp(1.0, 0.1, 1);

    let exp = SmoothTestFn::Exp { alpha: 1.0 };
    let m = SmoothTestFn::moebius(1.5, 0.3, 0.2, 1.0)?;
    let mut cocycle: f64 = 0.0;
    for _ in 0..100 {
        let t = w.next();
        cocycle = cocycle
            .max(cocycle_residual(&exp, &f, t).abs())
            .max(cocycle_residual(&m, &f, t).abs());
    }
    r.push("continuum", "Schwarzian cocycle", cocycle, 1e-10);

    let mut mobexp: f64 = 0.0;
    for alpha in [1.0, 2.0] {
        for &(a, b, c, d) in &[(1.0, 0.0, 0.0, 1.0), (2.0, -1.0, 0.5, 3.0)] {
            for t in [0.1, 0.5, 0.9] {
                mobexp =
                    mobexp.max(moebius_exp_schwarzian_residual(a, b, c, d, alpha, &f, t)?.abs());
            }
        }
    }
    r.push("continuum", "Moebius-exp Schwarzian", mobexp, 1e-8);

    let crown = SmoothTestFn::crown_map(1.0);
    let crown_err = [0.1, 0.3, 0.5, 0.7, 0.9]
        .iter()
        .map(|&y| (schwarzian(&crown, y) + 0.5).abs())
        .fold(0.0, f64::max);
    r.push("continuum", "crown map Schwarzian = -1/2", crown_err, 1e-8);

    let hill = SmoothTestFn::warp(1.0, 0.15, 1);
    r.push(
        "continuum",
        "Hill integration by parts",
        (hill_identity_residual(&hill) - hill_boundary_term(&hill)).abs(),
        1e-8,
    );
    r.push(
        "continuum",
        "Hill potential form",
        (hill_potential_target(&f) - action_coefficient_target(&f)).abs(),
        1e-12,
    );

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
    r.push("continuum", "cross-ratio Schwarzian", cross, 0.05);

    let target = action_coefficient_target(&f);
    let c = action_expansion_coefficient(&f, &[2001, 4001])?;
    r.push(
        "continuum",
        "action expansion coefficient",
        rel(c, target),
        0.02,
    );

    let (u, v) = (Variation::sin(1), Variation::cos(1));
    let exact = continuum_symplectic(&f, &u, &v);
    let errs: Vec<f64> = [501usize, 1001, 2001]
        .iter()
        .map(|&n| discrete_symplectic(&f, &u, &v, n).map(|d| rel(d, exact)))
        .collect::<Result<_, _>>()?;
    let mono = errs.windows(2).all(|e| e[1] < e[0]);
    r.push_with(
        "continuum",
        "symplectic convergence",
        errs[2],
        0.05,
        mono && errs[2] <= 0.05,
    );

    r.push(
        "continuum",
        "Gelfand-Fuchs change of variables",
        gf_change_of_variables_residual(&crown, &f, &u, &v).abs(),
        1e-6,
    );

    let sq = SmoothTestFn::SinSquared { amp: 0.05 };
    let dc = disc_continuum_coefficient(&sq, &[2001, 4001])?;
    r.push(
        "continuum",
        "disc expansion coefficient",
        rel(dc, disc_coefficient_target(&sq)),
        0.03,
    );

    let mut prev: Option<(f64, f64)> = None;
    for n in EXPANSION_SIZES {
        let eps = 1.0 / n as f64;
        let rem = action_remainder(&f, n);
        let extrapolated = prev.map(|(pe, pr)| (pe * rem - eps * pr) / (pe - eps));
        r.expansion.push(ExpansionRow {
            n,
            remainder: sig12(rem),
            extrapolated: extrapolated.map(sig12),
            target: sig12(target),
        });
        prev = Some((eps, rem));
    }
    Ok(())
}

pub fn run(suite: Suite) -> Result<Report, CliError> {
    let mut r = Report::default();
    let all = suite == Suite::All;
    if all || suite == Suite::Specfun {
        specfun(&mut r)?;
    }
    if all || suite == Suite::Poisson {
        poisson(&mut r)?;
    }
    if all || suite == Suite::Geometry {
        geometry(&mut r)?;
    }
    if all || suite == Suite::Continuum {
        continuum(&mut r)?;
    }
    Ok(r)
}

pub fn print_text(r: &Report) {
    for c in &r.checks {
        let tag = if c.pass { "PASS" } else { "FAIL" };
        println!(
            "{tag} {}: {} residual={:e} tol={:e}",
            c.suite, c.check, c.residual, c.tolerance
        );
    }
    if !r.expansion.is_empty() {
        println!("expansion coefficient, warp(1, 0.1, 1):");
        println!(
            "{:>6} {:>20} {:>20} {:>20}",
            "n", "remainder", "extrapolated", "target"
        );
        for row in &r.expansion {
            let ex = row
                .extrapolated
                .map_or_else(|| "-".to_string(), |x| format!("{x:.12}"));
            println!(
                "{:>6} {:>20.12} {:>20} {:>20.12}",
                row.n, row.remainder, ex, row.target
            );
        }
    }
    let failed = r.checks.iter().filter(|c| !c.pass).count();
    println!("{} checks, {} failed", r.checks.len(), failed);
    if let Some(ms) = r.wall_time_ms {
        println!("wall time {ms:.0} ms");
    }
}
