use crate::error::Result;
use crate::funcspace::{Grid1D, GridFunction1D, RiemannData};

/// Entropy solution of the Burgers Riemann problem at the similarity variable `xi = x/t`.
pub fn burgers_riemann_exact(d: RiemannData, xi: f64) -> f64 {
    let (ul, ur) = (d.ul, d.ur);
    if ul > ur {
        let sigma = 0.5 * (ul + ur);
        if xi < sigma {
            ul
        } else {
            ur
        }
    } else if xi < ul {
        ul
    } else if xi > ur {
        ur
    } else {
        xi
    }
}

/// Entropy solution at time `t` sampled on a grid (the initial step itself when `t = 0`).
pub fn burgers_riemann_profile(d: RiemannData, t: f64, grid: &Grid1D) -> Result<GridFunction1D> {
    let values = grid
        .nodes()
        .into_iter()
        .map(|x| {
            if t > 0.0 {
                burgers_riemann_exact(d, x / t)
            } else if x <= 0.0 {
                d.ul
            } else {
                d.ur
            }
        })
        .collect();
    GridFunction1D::on_grid(grid, values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let shock = RiemannData::new(1.0, 0.0);
        assert_eq!(burgers_riemann_exact(shock, 0.49), 1.0);
        assert_eq!(burgers_riemann_exact(shock, 0.51), 0.0);
        assert_eq!(burgers_riemann_exact(RiemannData::new(-1.0, 1.0), 0.0), 0.0);
        assert_eq!(burgers_riemann_exact(RiemannData::new(-1.0, 1.0), 0.3), 0.3);
        for xi in [-5.0, 0.0, 0.7] {
            assert_eq!(burgers_riemann_exact(RiemannData::new(0.4, 0.4), xi), 0.4);
        }
    }
}
