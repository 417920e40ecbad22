use crate::error::{Error, Result};
use crate::flux::FluxSpec;
use crate::funcspace::{interpolate, Grid1D, GridFunction1D};
use crate::nonlocal::{Mode, Trajectory};

const GODUNOV_CFL: f64 = 0.9;

/// Exact-Riemann interface flux for a convex flux.
pub fn godunov_flux(flux: &FluxSpec, ul: f64, ur: f64) -> f64 {
    if ul <= ur {
        flux.f(flux.argmin_on(ul, ur))
    } else {
        flux.f(ul).max(flux.f(ur))
    }
}

/// First-order Godunov scheme on a grid of spacing `dx` covering the data's interval.
///
/// Data sampled at a different spacing is interpolated onto the new grid. About a hundred
/// intermediate states are kept besides the initial and final ones.
pub fn godunov_solve(u0: &GridFunction1D, flux: &FluxSpec, t_final: f64, dx: f64) -> Result<Trajectory> {
    let estimate = (t_final * flux.max_speed(u0.min(), u0.max()) / (GODUNOV_CFL * dx)).ceil() as usize;
    godunov_solve_with_stride(u0, flux, t_final, dx, (estimate / 100).max(1))
}

/// As [`godunov_solve`], storing every `stride`-th step.
pub fn godunov_solve_with_stride(
    u0: &GridFunction1D,
    flux: &FluxSpec,
    t_final: f64,
    dx: f64,
    stride: usize,
) -> Result<Trajectory> {
    if !(t_final > 0.0 && t_final.is_finite()) {
        return Err(Error::InvalidArgument(format!("T must be positive (got {t_final})")));
    }
    if !(dx > 0.0 && dx.is_finite()) || stride == 0 {
        return Err(Error::InvalidArgument("dx must be positive and stride at least 1".into()));
    }
    let (lo, hi) = (u0.min(), u0.max());
    if !flux.is_convex_on(lo, hi) {
        return Err(Error::NonConvexFlux { lo, hi });
    }
    let start = if (dx - u0.dx()).abs() <= 1e-12 * dx {
        u0.clone()
    } else {
        let grid = Grid1D::covering(u0.x0(), u0.grid().x_last(), dx)?;
        let values = grid.nodes().into_iter().map(|x| interpolate(u0, x)).collect();
        GridFunction1D::on_grid(&grid, values)?
    };
    let grid = start.grid();
    let n = grid.n;
    let dt = GODUNOV_CFL * dx / flux.max_speed(lo, hi).max(1e-12);
    let steps = (t_final / dt - 1e-9).ceil().max(1.0) as usize;
    let dt = t_final / steps as f64;

    let mut traj = Trajectory::new(0.0, Mode::Godunov, dt);
    traj.push(0.0, start.clone(), Vec::new(), Vec::new());
    let mut u = start.into_values();
    let mut interface = vec![0.0; n + 1];
    let r = dt / dx;
    for step in 1..=steps {
        interface[0] = godunov_flux(flux, u[0], u[0]);
        interface[n] = godunov_flux(flux, u[n - 1], u[n - 1]);
        for i in 1..n {
            interface[i] = godunov_flux(flux, u[i - 1], u[i]);
        }
        for i in 0..n {
            u[i] -= r * (interface[i + 1] - interface[i]);
        }
        if step % stride == 0 || step == steps {
            let t = if step == steps { t_final } else { step as f64 * dt };
            traj.push(t, GridFunction1D::on_grid(&grid, u.clone())?, Vec::new(), Vec::new());
        }
    }
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::{sample, RiemannData};

    #[test]
    fn constant_stays_constant() {
        let g = Grid1D::symmetric(1.0, 0.01).unwrap();
        let u0 = GridFunction1D::constant(&g, -0.4).unwrap();
        let traj = godunov_solve(&u0, &FluxSpec::burgers(), 0.5, 0.01).unwrap();
        assert!(traj.last().values().iter().all(|&v| (v + 0.4).abs() < 1e-14));
    }

    #[test]
    fn shock_speed_and_tv() {
        let g = Grid1D::symmetric(2.0, 0.002).unwrap();
        let u0 = sample(&RiemannData::new(1.0, 0.0), &g).unwrap();
        let traj = godunov_solve(&u0, &FluxSpec::burgers(), 1.0, 0.002).unwrap();
        let u = traj.last();
        let k = u.values().iter().position(|&v| v < 0.5).unwrap();
        let front = u.x(k - 1) + g.dx * (u.values()[k - 1] - 0.5) / (u.values()[k - 1] - u.values()[k]);
        assert!((front - 0.5).abs() < 0.01, "front {front}");
        assert!(crate::diagnostics::max_tv_increase(&traj) <= 1e-12);
        assert!(u.max() <= 1.0 + 1e-14 && u.min() >= -1e-14);
    }

    #[test]
    fn rejects_nonconvex() {
        let g = Grid1D::symmetric(1.0, 0.01).unwrap();
        let u0 = GridFunction1D::from_fn(g.x0, g.dx, g.n, |x| x).unwrap();
        assert!(matches!(
            godunov_solve(&u0, &FluxSpec::cubic(2.0), 0.1, 0.01),
            Err(Error::NonConvexFlux { .. })
        ));
    }
}
