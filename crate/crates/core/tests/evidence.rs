use geonest::distributions::{grid_log_evidence, registry, ModelKey};
use geonest::math::{PI, TAU};
use geonest::nested::{init_livepoints, run};
use geonest::sampler::ProposalConfig;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn analytic_values_match_grid() {
    let circle = ModelKey::Circle;
    let grid = grid_log_evidence(&circle.build(), &[20_000]).unwrap();
    assert!((grid - circle.analytic_log_evidence()).abs() < 1e-6);
    assert!((circle.analytic_log_evidence() + TAU.ln()).abs() < 1e-15);
    assert!((ModelKey::Torus(6).analytic_log_evidence() + 6.0 * TAU.ln()).abs() < 1e-12);
    assert!((ModelKey::Sphere(6).analytic_log_evidence() + 6.0 * PI.ln()).abs() < 1e-12);
}

#[test]
fn circle_evidence_both_modes() {
    let model = registry::circle_model();
    for (cfg, seed) in [
        (ProposalConfig::default(), 1),
        (ProposalConfig::vanilla(), 2),
    ] {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = run(&model, 200, &cfg, 0.01, &mut rng).unwrap();
        let truth = -TAU.ln();
        assert!(
            (r.logz_mean - truth).abs() < 4.0 * r.logz_err,
            "{:?}: {} ± {}",
            cfg.mode,
            r.logz_mean,
            r.logz_err
        );
        assert!(r.logz_err > 0.02 && r.logz_err < 0.2);
    }
}

#[test]
fn torus_evidence() {
    let model = registry::torus_model(3);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let r = run(&model, 200, &ProposalConfig::default(), 0.01, &mut rng).unwrap();
    let truth = -3.0 * TAU.ln();
    assert!(
        (r.logz_mean - truth).abs() < 4.0 * r.logz_err,
        "{} ± {}",
        r.logz_mean,
        r.logz_err
    );
}

#[test]
fn sphere_evidence() {
    let model = registry::sphere_model(1);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let r = run(&model, 200, &ProposalConfig::default(), 0.01, &mut rng).unwrap();
    let truth = -PI.ln();
    assert!(
        (r.logz_mean - truth).abs() < 4.0 * r.logz_err,
        "{} ± {}",
        r.logz_mean,
        r.logz_err
    );
}

#[test]
fn circle_posterior_mean_direction() {
    let model = registry::circle_model();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let r = run(&model, 500, &ProposalConfig::default(), 0.01, &mut rng).unwrap();
    let w = r.weights();
    let (c, s) = r.samples().zip(&w).fold((0.0, 0.0), |(c, s), (p, &w)| {
        (c + w * p.theta[0].cos(), s + w * p.theta[0].sin())
    });

    // grid posterior of the same model
    let n = 100_000;
    let h = TAU / n as f64;
    let (mut gz, mut gc) = (0.0, 0.0);
    for i in 0..n {
        let phi = (i as f64 + 0.5) * h;
        let l = model.log_likelihood(&[phi]).exp();
        gz += l;
        gc += l * phi.cos();
    }
    assert!((c - gc / gz).abs() < 0.02, "{c} vs {}", gc / gz);
    assert!(s.abs() < 0.02, "{s}");
}

#[test]
fn weights_and_volumes() {
    let model = registry::sphere_model(2);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let r = run(&model, 100, &ProposalConfig::default(), 0.01, &mut rng).unwrap();
    let total: f64 = r.weights().iter().sum();
    assert!((total - 1.0).abs() < 1e-10);
    for (i, p) in r.dead_points.iter().enumerate() {
        let x_prev = -(i as f64) / 100.0;
        let expect = x_prev + (-(-1.0f64 / 100.0).exp_m1()).ln();
        assert!((p.log_volume - expect).abs() < 1e-9);
    }
    for w in r.dead_points.windows(2) {
        assert!(w[1].loglike > w[0].loglike);
    }
}

#[test]
fn livepoints_follow_the_prior() {
    let model = registry::sphere_model(1);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let live = init_livepoints(&model, 100_000, &mut rng).unwrap();
    let n = live.len() as f64;
    let mean_phi = live.points().iter().map(|p| p[0]).sum::<f64>() / n;
    let mean_cos = live.points().iter().map(|p| p[1].cos()).sum::<f64>() / n;
    assert!((mean_phi - PI).abs() < 4.0 * TAU / 12f64.sqrt() / n.sqrt());
    // cos θ is uniform on [−1, 1] under the sinusoidal prior
    assert!(mean_cos.abs() < 4.0 / 3f64.sqrt() / n.sqrt());
    assert!(live.points().iter().all(|p| model.space().contains(p)));
}

#[test]
fn same_seed_same_run() {
    let model = registry::torus_model(2);
    let cfg = ProposalConfig::default();
    let a = run(&model, 50, &cfg, 0.01, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
    let b = run(&model, 50, &cfg, 0.01, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
    assert_eq!(a, b);
}
