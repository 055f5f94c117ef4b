use moduli_core::volumes::{crown_volume_job, crown_volume_mc, disc_volume_mc, v3_closed};
use moduli_core::Proposal;

#[test]
fn stderr_scales_as_inverse_square_root() {
    let ns = [10_000u64, 100_000, 1_000_000];
    let errs: Vec<f64> = ns
        .iter()
        .map(|&n| {
            crown_volume_mc(3, 1.0, n, 21, Proposal::DirichletHalf)
                .unwrap()
                .stderr
        })
        .collect();
    // least-squares slope of log stderr against log N
    let xs: Vec<f64> = ns.iter().map(|&n| (n as f64).ln()).collect();
    let ys: Vec<f64> = errs.iter().map(|e| e.ln()).collect();
    let (mx, my) = (xs.iter().sum::<f64>() / 3.0, ys.iter().sum::<f64>() / 3.0);
    let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let slope = num / den;
    assert!((slope + 0.5).abs() <= 0.1, "slope {slope}");
}

#[test]
fn same_seed_same_bits() {
    let a = crown_volume_mc(5, 1.0, 300_000, 7, Proposal::DirichletHalf).unwrap();
    let b = crown_volume_mc(5, 1.0, 300_000, 7, Proposal::DirichletHalf).unwrap();
    assert_eq!(a, b);
    let c = crown_volume_mc(5, 1.0, 300_000, 8, Proposal::DirichletHalf).unwrap();
    assert_ne!(a.estimate, c.estimate);
}

#[test]
fn block_order_does_not_matter() {
    let job = crown_volume_job(4, 0.7, 500_000, 3, Proposal::Uniform).unwrap();
    let mut stats: Vec<(u64, _)> = (0..job.blocks())
        .rev()
        .map(|b| (b, job.run_block(b)))
        .collect();
    stats.sort_by_key(|s| s.0);
    assert_eq!(job.finish(stats.into_iter().map(|s| s.1)), job.run());
}

#[test]
fn proposals_agree() {
    let want = v3_closed(2.0);
    for proposal in [Proposal::Uniform, Proposal::DirichletHalf] {
        let est = crown_volume_mc(3, 2.0, 1_000_000, 4, proposal).unwrap();
        assert!(
            (est.estimate - want).abs() <= 4.0 * est.stderr,
            "{proposal:?}: {est:?}"
        );
    }
}

#[test]
fn disc_five_by_monte_carlo() {
    let est = disc_volume_mc(5, 1_000_000, 9).unwrap();
    let want = std::f64::consts::PI.powi(2) / 6.0;
    assert!((est.estimate - want).abs() <= 4.0 * est.stderr);
}
