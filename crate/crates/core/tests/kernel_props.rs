use nlclaw::funcspace::{total_variation, GridFunction1D};
use nlclaw::kernel::Mollifier;
use nlclaw::Error;
use proptest::prelude::*;

fn grid_fn(values: Vec<f64>) -> GridFunction1D {
    GridFunction1D::new(-1.0, 0.01, values).unwrap()
}

proptest! {
    #[test]
    fn weights_are_symmetric_nonnegative_with_unit_mass(cells in 1usize..80, frac in 0.0f64..1.0) {
        let dx = 0.01;
        let m = Mollifier::build(dx * (cells as f64 + frac), dx).unwrap();
        let w = m.weights();
        prop_assert!(w.iter().all(|&v| v >= 0.0));
        for k in 0..w.len() {
            prop_assert_eq!(w[k], w[w.len() - 1 - k]);
        }
        prop_assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn convolution_is_linear(
        a in prop::collection::vec(-2.0f64..2.0, 60),
        b in prop::collection::vec(-2.0f64..2.0, 60),
        s in -3.0f64..3.0,
    ) {
        let m = Mollifier::build(0.05, 0.01).unwrap();
        let combined: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x + s * y).collect();
        let lhs = m.convolve(&grid_fn(combined)).unwrap();
        let (ca, cb) = (m.convolve(&grid_fn(a)).unwrap(), m.convolve(&grid_fn(b)).unwrap());
        for i in 0..lhs.len() {
            let rhs = ca.values()[i] + s * cb.values()[i];
            prop_assert!((lhs.values()[i] - rhs).abs() < 1e-12);
        }
    }

    #[test]
    fn convolution_stays_in_range_and_does_not_add_variation(
        v in prop::collection::vec(-5.0f64..5.0, 10..120),
        cells in 1usize..12,
    ) {
        let m = Mollifier::build(0.01 * cells as f64, 0.01).unwrap();
        let u = grid_fn(v);
        let c = m.convolve(&u).unwrap();
        let tol = 1e-12;
        prop_assert!(c.min() >= u.min() - tol && c.max() <= u.max() + tol);
        prop_assert!(total_variation(&c) <= total_variation(&u) + tol);
    }

    #[test]
    fn constants_are_reproduced_exactly(c in -10.0f64..10.0, cells in 1usize..30) {
        let m = Mollifier::build(0.01 * cells as f64, 0.01).unwrap();
        let out = m.convolve(&grid_fn(vec![c; 50])).unwrap();
        prop_assert!(out.values().iter().all(|&v| v == c));
    }
}

#[test]
fn under_resolved_kernel_is_rejected() {
    assert!(matches!(Mollifier::build(0.005, 0.01), Err(Error::Resolution { .. })));
}

#[test]
fn mismatched_grid_is_rejected() {
    let m = Mollifier::build(0.1, 0.01).unwrap();
    let u = GridFunction1D::new(0.0, 0.02, vec![0.0; 10]).unwrap();
    assert!(matches!(m.convolve(&u), Err(Error::GridMismatch(_))));
}
