use crate::error::{Error, Result};
use crate::funcspace::{Grid1D, GridFunction1D, InitialProfile};

/// Antiderivative of the data on its own nodes, extended linearly (constant data) outside.
struct Potential<'a> {
    u: &'a [f64],
    x0: f64,
    dx: f64,
    cumulative: Vec<f64>,
}

impl<'a> Potential<'a> {
    fn new(u0: &'a GridFunction1D) -> Self {
        let u = u0.values();
        let mut cumulative = Vec::with_capacity(u.len());
        let mut acc = 0.0;
        cumulative.push(0.0);
        for w in u.windows(2) {
            acc += 0.5 * u0.dx() * (w[0] + w[1]);
            cumulative.push(acc);
        }
        Potential {
            u,
            x0: u0.x0(),
            dx: u0.dx(),
            cumulative,
        }
    }

    /// As [`Potential::new`], integrating cells cut by a discontinuity exactly with the
    /// one-sided values on each side of the jump.
    fn from_profile(profile: &'a InitialProfile) -> Self {
        let mut pot = Potential::new(profile.samples());
        let u = pot.u;
        let mut increments: Vec<f64> = u.windows(2).map(|w| 0.5 * pot.dx * (w[0] + w[1])).collect();
        for j in profile.jumps() {
            let a = pot.node(j.cell as i64);
            let p = (j.position - a).clamp(0.0, pot.dx);
            increments[j.cell] = p * u[j.cell] + (pot.dx - p) * u[j.cell + 1];
        }
        let mut acc = 0.0;
        for (c, inc) in pot.cumulative[1..].iter_mut().zip(&increments) {
            acc += inc;
            *c = acc;
        }
        pot
    }

    fn node(&self, j: i64) -> f64 {
        self.x0 + j as f64 * self.dx
    }

    fn value(&self, j: i64) -> f64 {
        let n = self.u.len() as i64;
        if j < 0 {
            self.u[0] * (j as f64 * self.dx)
        } else if j >= n {
            self.cumulative[(n - 1) as usize] + self.u[(n - 1) as usize] * ((j - n + 1) as f64 * self.dx)
        } else {
            self.cumulative[j as usize]
        }
    }
}

impl Potential<'_> {
    /// `(x - y*)/t` for the minimiser `y*` of `U₀(y) + (x - y)²/(2t)`, clamped to the data range.
    fn solve_at(&self, t: f64, x: f64, (umin, umax): (f64, f64)) -> f64 {
        let g = |j: i64| {
            let d = x - self.node(j);
            self.value(j) + d * d / (2.0 * t)
        };
        let lo = ((x - t * umax - self.x0) / self.dx).floor() as i64 - 2;
        let hi = ((x - t * umin - self.x0) / self.dx).ceil() as i64 + 2;
        let mut best = lo;
        let mut best_val = g(lo);
        for j in lo + 1..=hi {
            let v = g(j);
            if v < best_val {
                best_val = v;
                best = j;
            }
        }
        let (gm, gp) = (g(best - 1), g(best + 1));
        let curvature = gm - 2.0 * best_val + gp;
        let shift = if curvature > 0.0 {
            (0.5 * (gm - gp) / curvature).clamp(-0.5, 0.5)
        } else {
            0.0
        };
        let y = self.node(best) + shift * self.dx;
        ((x - y) / t).clamp(umin, umax)
    }
}

fn check_time(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("t must be positive (got {t})")))
    }
}

/// Entropy solution of Burgers' equation at time `t` by the Lax–Oleinik formula.
///
/// For each output node `x` the functional `U₀(y) + (x - y)²/(2t)` is minimised over the nodes of
/// the data grid (ties go to the smaller `y`). The node minimiser is then refined by the vertex of
/// the parabola through it and its two neighbours, and `u = (x - y*)/t`.
pub fn lax_oleinik_solve(u0: &GridFunction1D, t: f64, grid: &Grid1D) -> Result<GridFunction1D> {
    check_time(t)?;
    let pot = Potential::new(u0);
    let range = (u0.min(), u0.max());
    GridFunction1D::on_grid(grid, (0..grid.n).map(|i| pot.solve_at(t, grid.x(i), range)).collect())
}

/// Lax–Oleinik solution at arbitrary points for sampled data with known discontinuities, whose
/// cells are integrated exactly in the antiderivative.
pub fn lax_oleinik_at(u0: &InitialProfile, t: f64, xs: &[f64]) -> Result<Vec<f64>> {
    check_time(t)?;
    let pot = Potential::from_profile(u0);
    let range = (u0.samples().min(), u0.samples().max());
    Ok(xs.iter().map(|&x| pot.solve_at(t, x, range)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::{sample, RiemannData};
    use crate::local::burgers_riemann_exact;

    #[test]
    fn constant_data() {
        let g = Grid1D::covering(-3.0, 3.0, 0.01).unwrap();
        let u0 = GridFunction1D::constant(&g, 0.3).unwrap();
        let u = lax_oleinik_solve(&u0, 1.0, &g).unwrap();
        assert!(u.values().iter().all(|v| (v - 0.3).abs() < 1e-10));
    }

    #[test]
    fn riemann_shock_matches_closed_form() {
        let g = Grid1D::symmetric(3.0, 0.01).unwrap();
        let d = RiemannData::new(1.0, 0.0);
        let u0 = sample(&d, &g).unwrap();
        let u = lax_oleinik_solve(&u0, 1.0, &g).unwrap();
        for i in 0..g.n {
            let x = g.x(i);
            if (x - 0.5).abs() > 0.01 + 1e-9 {
                assert!((u.values()[i] - burgers_riemann_exact(d, x)).abs() < 1e-9, "x = {x}");
            }
        }
    }

    #[test]
    fn pointwise_shock_between_nodes() {
        let g = Grid1D::symmetric(3.0, 0.01).unwrap();
        let d = RiemannData::new(1.0, 0.0);
        let profile = InitialProfile::from_data(&d, &g).unwrap();
        let xs: Vec<f64> = (0..200).map(|k| 0.4 + k as f64 * 1e-3).collect();
        let u = lax_oleinik_at(&profile, 1.0, &xs).unwrap();
        for (&x, &v) in xs.iter().zip(&u) {
            if (x - 0.5).abs() > 2e-3 {
                assert!((v - burgers_riemann_exact(d, x)).abs() < 1e-9, "x = {x}");
            }
        }
    }

    #[test]
    fn oleinik_bound_on_fan() {
        let g = Grid1D::symmetric(3.0, 0.01).unwrap();
        let u0 = sample(&RiemannData::new(-1.0, 1.0), &g).unwrap();
        let t = 1.5;
        let u = lax_oleinik_solve(&u0, t, &g).unwrap();
        for w in u.values().windows(2) {
            assert!((w[1] - w[0]) / g.dx <= 1.0 / t + 1e-6);
        }
    }
}
