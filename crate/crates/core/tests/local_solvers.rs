use nlclaw::flux::FluxSpec;
use nlclaw::funcspace::{total_variation, Grid1D, GridFunction1D, RiemannData};
use nlclaw::local::{
    burgers_riemann_exact, burgers_riemann_profile, default_delta, front_tracking_solve, godunov_solve, lax_oleinik_solve,
    PiecewiseConstant,
};
use proptest::prelude::*;

fn pieces() -> impl Strategy<Value = PiecewiseConstant> {
    prop::collection::vec(-1.0f64..1.0, 2..6).prop_map(|values| {
        let breakpoints: Vec<f64> = (1..values.len()).map(|k| -1.0 + 2.0 * k as f64 / values.len() as f64).collect();
        PiecewiseConstant::new(breakpoints, values).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn front_tracking_conserves_mass_and_does_not_add_variation(u0 in pieces(), t in 0.1f64..1.0) {
        let ft = front_tracking_solve(&u0, &FluxSpec::burgers(), t, default_delta(&u0)).unwrap();
        let (a, b) = (-4.0, 4.0);
        let f = |u: f64| 0.5 * u * u;
        let (ul, ur) = (u0.values()[0], u0.values()[u0.values().len() - 1]);
        let lhs = ft.mass(t, a, b);
        let rhs = ft.mass(0.0, a, b) + t * (f(ul) - f(ur));
        prop_assert!((lhs - rhs).abs() < 1e-9, "mass {lhs} vs {rhs}");
        prop_assert!(ft.total_variation(t) <= ft.total_variation(0.0) + 1e-12);
    }

    #[test]
    fn godunov_respects_the_initial_range(u0 in pieces()) {
        let grid = Grid1D::covering(-3.0, 3.0, 0.02).unwrap();
        let u = GridFunction1D::on_grid(&grid, grid.nodes().iter().map(|&x| u0.eval(x)).collect()).unwrap();
        let traj = godunov_solve(&u, &FluxSpec::burgers(), 0.5, 0.02).unwrap();
        let last = traj.last();
        prop_assert!(last.min() >= u.min() - 1e-14 && last.max() <= u.max() + 1e-14);
        prop_assert!(total_variation(last) <= total_variation(&u) + 1e-12);
    }
}

#[test]
fn riemann_fan_and_shock_values() {
    let shock = RiemannData::new(1.0, 0.0);
    assert_eq!(burgers_riemann_exact(shock, 0.49), 1.0);
    assert_eq!(burgers_riemann_exact(shock, 0.51), 0.0);
    let fan = RiemannData::new(-1.0, 1.0);
    assert_eq!(burgers_riemann_exact(fan, 0.25), 0.25);
    assert_eq!(burgers_riemann_exact(fan, -2.0), -1.0);
}

#[test]
fn lax_oleinik_reproduces_the_rarefaction() {
    let grid = Grid1D::covering(-2.0, 2.0, 0.01).unwrap();
    let d = RiemannData::new(0.0, 1.0);
    let u0 = GridFunction1D::on_grid(&grid, grid.nodes().iter().map(|&x| if x <= 0.0 { 0.0 } else { 1.0 }).collect()).unwrap();
    let lo = lax_oleinik_solve(&u0, 1.0, &grid).unwrap();
    let exact = burgers_riemann_profile(d, 1.0, &grid).unwrap();
    for i in 0..grid.n {
        assert!((lo.values()[i] - exact.values()[i]).abs() < 0.02, "x = {}", grid.x(i));
    }
}
