use nlclaw::expr::Expr;
use nlclaw::funcspace::{interpolate, FrontResolved, GridFunction1D};
use proptest::prelude::*;

proptest! {
    #[test]
    fn interpolation_lies_between_neighbouring_nodes(
        v in prop::collection::vec(-3.0f64..3.0, 2..50),
        s in 0.0f64..1.0,
    ) {
        let u = GridFunction1D::new(0.0, 0.1, v.clone()).unwrap();
        let x = s * u.grid().x_last();
        let i = ((x / 0.1) as usize).min(v.len() - 2);
        let y = interpolate(&u, x);
        prop_assert!(y >= v[i].min(v[i + 1]) - 1e-15 && y <= v[i].max(v[i + 1]) + 1e-15);
    }

    #[test]
    fn interpolation_extends_constants_outside(v in prop::collection::vec(-3.0f64..3.0, 2..20), d in 0.0f64..5.0) {
        let u = GridFunction1D::new(0.0, 0.1, v.clone()).unwrap();
        prop_assert_eq!(interpolate(&u, -d), v[0]);
        prop_assert_eq!(interpolate(&u, u.grid().x_last() + d), v[v.len() - 1]);
    }

    #[test]
    fn resolved_variation_is_at_least_node_variation(
        v in prop::collection::vec(-3.0f64..3.0, 3..30),
        f in 0.05f64..0.95,
        l in -3.0f64..3.0,
        r in -3.0f64..3.0,
    ) {
        let u = GridFunction1D::new(0.0, 1.0, v.clone()).unwrap();
        let fronts = [f * (v.len() - 1) as f64];
        let limits = [(l, r)];
        let res = FrontResolved { state: &u, fronts: &fronts, limits: &limits };
        prop_assert!(res.total_variation() >= nlclaw::funcspace::total_variation(&u) - 1e-12);
    }

    #[test]
    fn resolved_distance_matches_fine_sampling(
        a in prop::collection::vec(-2.0f64..2.0, 12),
        b in prop::collection::vec(-2.0f64..2.0, 12),
        fa in 0.5f64..10.5,
        fb in 0.5f64..10.5,
    ) {
        let (u, w) = (GridFunction1D::new(0.0, 1.0, a).unwrap(), GridFunction1D::new(0.0, 1.0, b).unwrap());
        let (fronts_a, fronts_b) = ([fa], [fb]);
        let limits = [(0.0, 0.0)];
        let ra = FrontResolved { state: &u, fronts: &fronts_a, limits: &limits };
        let rb = FrontResolved { state: &w, fronts: &fronts_b, limits: &limits };
        let m = 200_000;
        let h = 11.0 / m as f64;
        let brute: f64 = (0..m).map(|j| {
            let x = (j as f64 + 0.5) * h;
            (ra.eval(x) - rb.eval(x)).abs()
        }).sum::<f64>() * h;
        let fast = ra.l1_distance(&rb, 4096).unwrap();
        prop_assert!((fast - brute).abs() < 1e-3 * (1.0 + brute), "{fast} vs {brute}");
    }
}

#[test]
fn resolved_evaluation_is_sharp_at_the_front() {
    let u = GridFunction1D::new(0.0, 1.0, vec![1.0, 1.0, 0.0, 0.0]).unwrap();
    let fronts = [1.25];
    let limits = [(1.0, 0.0)];
    let res = FrontResolved { state: &u, fronts: &fronts, limits: &limits };
    assert_eq!(res.eval(1.2), 1.0);
    assert_eq!(res.eval(1.3), 0.0);
    assert_eq!(res.eval(0.5), 1.0);
    assert_eq!(res.total_variation(), 1.0);
}

#[test]
fn negative_tanh_round_trips() {
    let e = Expr::parse("-tanh(x)").unwrap();
    for k in 0..100 {
        let x = -5.0 + 10.0 * k as f64 / 99.0;
        assert!((e.eval(x) + x.tanh()).abs() <= 1e-12, "x = {x}");
    }
}

#[test]
fn expression_errors_report_a_column() {
    let err = Expr::parse("sin(x) + * 2").unwrap_err();
    assert!(matches!(err, nlclaw::Error::Expression { .. }), "{err:?}");
}
