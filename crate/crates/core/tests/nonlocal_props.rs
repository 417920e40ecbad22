use nlclaw::diagnostics::{check_invariants, max_resolved_tv_increase, stability_envelope, DiagnosticsConfig};
use nlclaw::flux::FluxSpec;
use nlclaw::funcspace::{total_variation, PiecewiseInitialData, RiemannData};
use nlclaw::kernel::Mollifier;
use nlclaw::nonlocal::{padded_profile, solve_general, solve_nn, Regularisation, SolverConfig};
use proptest::prelude::*;

fn config() -> SolverConfig {
    SolverConfig {
        dx: 0.01,
        stride: 5,
        margin: 0.2,
        ..SolverConfig::default()
    }
}

fn piecewise() -> impl Strategy<Value = PiecewiseInitialData> {
    prop::collection::vec(-1.0f64..1.0, 2..5).prop_map(|values| {
        let breakpoints: Vec<f64> = (1..values.len()).map(|k| -0.8 + 1.6 * k as f64 / values.len() as f64).collect();
        PiecewiseInitialData::piecewise_constant(breakpoints, &values).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn nn_keeps_range_and_does_not_add_variation(data in piecewise(), eps in 0.03f64..0.2) {
        let cfg = config();
        let profile = padded_profile(&data, (-1.0, 1.0), eps, 0.4, &cfg).unwrap();
        let traj = solve_nn(profile, eps, 0.4, &cfg).unwrap();
        let (lo, hi) = (traj.initial().min(), traj.initial().max());
        for u in traj.states() {
            prop_assert!(u.min() >= lo && u.max() <= hi);
        }
        prop_assert!(max_resolved_tv_increase(&traj) <= 1e-12 * (1.0 + total_variation(traj.initial())));
        let report = check_invariants(&traj, &DiagnosticsConfig::default());
        prop_assert!(report.passed(), "{:?}", report);
    }

    #[test]
    fn burgers_regularisations_coincide_with_nn(data in piecewise()) {
        let cfg = config();
        let profile = padded_profile(&data, (-1.0, 1.0), 0.1, 0.3, &cfg).unwrap();
        let nn = solve_nn(profile.clone(), 0.1, 0.3, &cfg).unwrap();
        for mode in [Regularisation::Velocity, Regularisation::Flux] {
            let other = solve_general(profile.clone(), &FluxSpec::burgers(), 0.1, 0.3, &cfg, mode).unwrap();
            prop_assert_eq!(nn.last().values(), other.last().values());
        }
    }
}

#[test]
fn stability_envelope_holds_for_shifted_shock() {
    let cfg = config();
    let eps = 0.1;
    let u0 = padded_profile(&RiemannData::new(1.0, 0.0), (-1.0, 1.0), eps, 0.5, &cfg).unwrap();
    let grid = u0.grid();
    let v0 = nlclaw::funcspace::GridFunction1D::on_grid(
        &grid,
        grid.nodes().iter().map(|&x| if x <= 0.05 { 1.0 } else { 0.0 }).collect(),
    )
    .unwrap();
    let u = solve_nn(u0, eps, 0.5, &cfg).unwrap();
    let v = solve_nn(v0, eps, 0.5, &cfg).unwrap();
    let m = Mollifier::build(eps, cfg.dx).unwrap();
    let report = stability_envelope(&u, &v, &m, 1.05).unwrap();
    assert!(report.passed, "worst ratio {}", report.worst_ratio);
}

#[test]
fn shock_front_moves_at_half_speed() {
    let cfg = SolverConfig { stride: 10, ..config() };
    let eps = 0.1;
    let profile = padded_profile(&RiemannData::new(1.0, 0.0), (-1.0, 1.0), eps, 1.0, &cfg).unwrap();
    let traj = solve_nn(profile, eps, 1.0, &cfg).unwrap();
    let speed = nlclaw::diagnostics::measure_front_speed(&traj, 0.5, (0.2, 1.0)).unwrap();
    assert!((speed.speed - 0.5).abs() < 0.01, "{speed:?}");
}

#[test]
fn colliding_shocks_merge_and_move_at_the_combined_speed() {
    let cfg = SolverConfig { dx: 2e-3, stride: 20, ..SolverConfig::default() };
    let data = PiecewiseInitialData::piecewise_constant(vec![-0.5, 0.5], &[1.0, 0.5, -0.5]).unwrap();
    let profile = padded_profile(&data, (-2.0, 2.0), 0.05, 1.5, &cfg).unwrap();
    let traj = solve_nn(profile, 0.05, 1.5, &cfg).unwrap();
    // Shocks of speed 3/4 and 0 meet at (0.5, 4/3) and continue at speed 1/4.
    let fronts = traj.fronts().last().unwrap();
    assert_eq!(fronts.len(), 1);
    assert!((fronts[0] - (0.5 + 0.25 / 6.0)).abs() < 2e-3, "{fronts:?}");
    assert_eq!(traj.front_limits().last().unwrap(), &vec![(1.0, -0.5)]);
    assert!(check_invariants(&traj, &DiagnosticsConfig::default()).passed());
}
