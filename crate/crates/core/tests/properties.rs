//! Property tests of the invariants that hold for every admissible input.

use argmin_core::chain::{build_kernel, ssrw_kernel, theta_kernel};
use argmin_core::ladder::{
    closed_form_ssrw, closed_form_theta, persistence_from_signs, SignProbabilities,
};
use argmin_core::quadrature::Tolerance;
use argmin_core::stable::{
    chapman_kolmogorov_residual, kernel_mass, semigroup, semigroup_in_branch, Branch,
};
use argmin_core::walk_sim::{argmin_sequence, run_replica, TransitionCounts, WalkModel};
use argmin_core::window::{naive_last_argmin, WindowArgmin};
use proptest::prelude::*;

fn theta() -> impl Strategy<Value = f64> {
    0.02f64..0.98
}

fn rho() -> impl Strategy<Value = f64> {
    prop_oneof![Just(1.0 / 3.0), Just(0.5), Just(2.0 / 3.0), 0.1f64..0.9]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ladder_sequences_are_monotone_and_dual(theta in theta(), m in 1usize..80) {
        let ls = closed_form_theta(theta, m).unwrap();
        prop_assert!(ls.check().is_ok());
        for n in 0..=m {
            prop_assert!((ls.duality_sum(n) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn series_route_matches_closed_form(theta in theta(), m in 1usize..60) {
        let series = persistence_from_signs(&SignProbabilities::constant(theta, m).unwrap()).unwrap();
        let closed = closed_form_theta(theta, m).unwrap();
        for (name, a, b) in [
            ("p", series.p(), closed.p()),
            ("p_tilde", series.p_tilde(), closed.p_tilde()),
            ("p_dual", series.p_dual(), closed.p_dual()),
        ] {
            for (n, (x, y)) in a.iter().zip(b).enumerate() {
                prop_assert!((x - y).abs() < 1e-12, "{} at {}: {} vs {}", name, n, x, y);
            }
        }
    }

    #[test]
    fn theta_kernels_are_stochastic_and_stationary(theta in theta(), n in 1usize..60) {
        let k = theta_kernel(theta, n).unwrap();
        for row in k.rows() {
            prop_assert!(row.iter().all(|&p| p >= 0.0));
            prop_assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
        prop_assert!((k.pi().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!(k.stationarity_residual() < 1e-10);
        prop_assert_eq!(k.support_violation(), 0.0);
        let general = build_kernel(&closed_form_theta(theta, n + 1).unwrap(), n).unwrap();
        prop_assert!(k.max_abs_diff(&general).unwrap() < 1e-12);
    }

    #[test]
    fn deque_matches_rescan(values in prop::collection::vec(-4i32..4, 1..300), width in 1usize..20) {
        let mut window = WindowArgmin::new(width);
        for (i, &v) in values.iter().enumerate() {
            let got = window.push(v);
            if i + 1 >= width {
                let lo = i + 1 - width;
                prop_assert_eq!(got, Some(naive_last_argmin(&values[lo..=i])));
            } else {
                prop_assert_eq!(got, None);
            }
        }
    }

    #[test]
    fn argmins_ignore_a_common_shift(
        incs in prop::collection::vec(-3.0f64..3.0, 10..200),
        shift in -1e3f64..1e3,
        n in 1usize..8,
    ) {
        let mut plain = WindowArgmin::new(n + 1);
        let mut shifted = WindowArgmin::new(n + 1);
        let mut s = 0.0;
        for x in incs {
            s += x;
            prop_assert_eq!(plain.push(s), shifted.push(s + shift.round()));
        }
    }

    #[test]
    fn chain_moves_only_down_one_or_to_the_top(
        incs in prop::collection::vec(prop_oneof![Just(0.0), Just(1.0), Just(-1.0), -2.0f64..2.0], 2..400),
        n in 1usize..10,
    ) {
        let seq = argmin_sequence(&incs, n);
        prop_assert!(seq.iter().all(|&a| a <= n));
        for w in seq.windows(2) {
            prop_assert!(w[0] == 0 || w[1] + 1 == w[0] || w[1] == n, "{:?}", w);
        }
    }

    #[test]
    fn count_merging_is_order_free(
        a in prop::collection::vec((0usize..5, 0usize..5), 0..50),
        b in prop::collection::vec((0usize..5, 0usize..5), 0..50),
    ) {
        let fill = |pairs: &[(usize, usize)]| {
            let mut c = TransitionCounts::new(4);
            for &(i, j) in pairs {
                c.record(i, j);
            }
            c
        };
        let (ca, cb) = (fill(&a), fill(&b));
        let mut ab = ca.clone();
        ab.merge(&cb).unwrap();
        let mut ba = cb.clone();
        ba.merge(&ca).unwrap();
        prop_assert_eq!(&ab, &ba);
        let all: Vec<_> = a.iter().chain(&b).copied().collect();
        prop_assert_eq!(ab, fill(&all));
    }

    #[test]
    fn replicas_are_reproducible(seed in any::<u64>(), replica in 0u64..8) {
        let one = run_replica(&WalkModel::Gaussian, 3, 500, seed, replica).unwrap();
        let two = run_replica(&WalkModel::Gaussian, 3, 500, seed, replica).unwrap();
        prop_assert_eq!(one, two);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn semigroup_has_unit_mass(rho in rho(), t in 0.01f64..1.8, x in 0.0f64..=1.0) {
        let m = kernel_mass(rho, t, x).unwrap();
        prop_assert!((m - 1.0).abs() < 1e-8, "mass {}", m);
    }

    #[test]
    fn branches_agree_at_the_boundary(rho in rho(), x in 0.05f64..0.95, y in 0.01f64..0.99) {
        let drift = semigroup_in_branch(rho, x, x, Branch::Drift).unwrap();
        let renewal = semigroup_in_branch(rho, x, x, Branch::Renewal).unwrap();
        let (a, b) = (drift.density(y), renewal.density(y));
        prop_assert!((a - b).abs() <= 1e-8 * a.abs().max(1.0), "{} vs {}", a, b);
        // just above the boundary the atom has become a spike of width t - x
        let tol = Tolerance::default();
        let above = semigroup_in_branch(rho, x + 1e-9, x, Branch::Renewal).unwrap();
        let (ma, mb) = (drift.cdf(1.0, &tol).unwrap(), above.cdf(1.0, &tol).unwrap());
        prop_assert!((ma - 1.0).abs() < 1e-8 && (mb - 1.0).abs() < 1e-8, "{} {}", ma, mb);
    }

    #[test]
    fn atom_weights_telescope(rho in rho(), x in 0.3f64..1.0, s in 0.01f64..0.15, t in 0.01f64..0.15) {
        let first = semigroup(rho, s, x).unwrap();
        let atom = first.atom().unwrap();
        let moved = semigroup(rho, t, atom.location).unwrap();
        let direct = semigroup(rho, s + t, x).unwrap();
        prop_assert!((atom.weight * moved.atom_weight() - direct.atom_weight()).abs() < 1e-13);
    }

    #[test]
    fn chapman_kolmogorov_holds(rho in rho(), s in 0.05f64..0.8, t in 0.05f64..0.8, x in 0.0f64..=1.0) {
        let ys = [0.07, 0.23, 0.41, 0.58, 0.83, 0.97];
        // keep the probes off the kinks y = 1 - t, 1 - s - t, x - s - t
        prop_assume!(ys.iter().all(|&y| [1.0 - t, 1.0 - s - t, x - s - t, x - t].iter().all(|k| (y - k).abs() > 1e-3)));
        let r = chapman_kolmogorov_residual(rho, s, t, x, &ys).unwrap();
        prop_assert!(r.max < 1e-6, "residual {}", r.max);
    }
}

#[test]
fn ssrw_series_route_matches_closed_form() {
    let m = 40;
    let series = persistence_from_signs(&SignProbabilities::<f64>::ssrw(m).unwrap()).unwrap();
    let closed = closed_form_ssrw::<f64>(m);
    for n in 0..=m {
        assert!((series.p()[n] - closed.p()[n]).abs() < 1e-12);
        assert!((series.p_tilde()[n] - closed.p_tilde()[n]).abs() < 1e-12);
    }
    for n in 1..=30 {
        let k = ssrw_kernel::<f64>(n).unwrap();
        assert!(k.stationarity_residual() < 1e-12);
        assert_eq!(k.support_violation(), 0.0);
    }
}
