//! Small end-to-end runs of the two simulators against their exact laws.

use argmin_core::levy_sim::{empirical_invariant, run_experiment, LevyConfig};
use argmin_core::stable::StableLaw;
use argmin_core::walk_sim::{
    empirical_vs_exact, run_chain, run_replicas, SimulationReport, WalkModel,
};

#[test]
fn stable_walk_follows_the_theta_kernel() {
    let law = StableLaw::new(1.5, 1.0).unwrap();
    let model = WalkModel::Stable(law);
    let report = run_chain(&model, 3, 200_000, 11).unwrap();
    assert_eq!(report.support_violations, 0);
    assert!(report.tv_pi < 0.01, "{}", report.tv_pi);
    let kernel = model.exact_kernel(3).unwrap();
    let verdict = empirical_vs_exact(&report, &kernel, 0.02).unwrap();
    assert!(verdict.pass, "{:?}", verdict.failed_cells);
}

#[test]
fn replica_merge_matches_a_pooled_report() {
    let counts = run_replicas(&WalkModel::Ssrw, 4, 50_000, 4, 3).unwrap();
    assert_eq!(counts.steps, 200_000);
    let kernel = WalkModel::Ssrw.exact_kernel(4).unwrap();
    let report = SimulationReport::new(&counts, &kernel, 3, 0.02).unwrap();
    assert!(report.verdict.pass);
}

#[test]
fn levy_paths_respect_the_path_law() {
    let cfg = LevyConfig {
        alpha: 1.5,
        beta: 1.0,
        mesh: 1e-3,
        horizon: 100.0,
        replicas: 8,
        seed: 21,
        spacing: 2.0,
        lag: 0.3,
    };
    let s = run_experiment(&cfg).unwrap();
    let rho = 1.0 / 3.0;
    let se = (rho * (1.0 - rho) / s.increments as f64).sqrt();
    assert!((s.rho_hat() - rho).abs() < 4.0 * se);
    assert_eq!(s.structure_fraction(), 1.0);
    let r = empirical_invariant(&s.invariant, rho, 10, cfg.spacing, Some(cfg.mesh)).unwrap();
    assert_eq!(r.outside_unit, 0);
    // about 400 samples: loose, but catches a wrong law
    assert!(r.ks_mesh.unwrap() < 0.1, "{:?}", r.ks_mesh);
}
