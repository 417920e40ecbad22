use super::{Mode, SolverConfig, Trajectory};
use crate::error::{Error, Result};
use crate::funcspace::{sup_norm, GridFunction1D};
use crate::kernel::Mollifier;

/// Conservative nonlocal Burgers regularisation `u_t + ½ ∂ₓ((η_ε ∗ u) u) = 0`.
///
/// Finite-volume update with interface velocity `½(v_i + v_{i+1})`, `v = η_ε ∗ u`, and the
/// transported value upwinded on its sign. The step adapts to the current velocity so that
/// `dt·max|V|/dx ≤ cfl`. Mass changes only through the boundary fluxes.
pub fn solve_conservative_nonlocal(
    u0: &GridFunction1D,
    epsilon: f64,
    t_final: f64,
    cfg: &SolverConfig,
) -> Result<Trajectory> {
    solve_conservative_scaled(u0, epsilon, t_final, cfg, 0.5)
}

/// As [`solve_conservative_nonlocal`] with flux `factor·(η_ε ∗ u)·u`; `factor = 1` gives the
/// regularisation of `u_t + (u²)_x = 0`.
pub fn solve_conservative_scaled(
    u0: &GridFunction1D,
    epsilon: f64,
    t_final: f64,
    cfg: &SolverConfig,
    factor: f64,
) -> Result<Trajectory> {
    cfg.validate()?;
    if !(t_final > 0.0 && t_final.is_finite()) {
        return Err(Error::InvalidArgument(format!("T must be positive (got {t_final})")));
    }
    if !(factor > 0.0 && factor.is_finite()) {
        return Err(Error::InvalidArgument("flux factor must be positive".into()));
    }
    let m = Mollifier::build(epsilon, u0.dx())?;
    let grid = u0.grid();
    let n = grid.n;
    let dx = grid.dx;
    let nominal = cfg.resolve_dt(factor * 2.0 * sup_norm(u0))?;
    let dt_floor = 1e-9 * t_final;
    let mut traj = Trajectory::new(epsilon, Mode::Conservative, nominal);
    traj.push(0.0, u0.clone(), Vec::new(), Vec::new());

    let mut u = u0.values().to_vec();
    let mut v = vec![0.0; n];
    let mut flux = vec![0.0; n + 1];
    let mut scratch = Vec::new();
    let mut t = 0.0;
    let mut step = 0usize;
    while t < t_final {
        m.convolve_slice(&u, &mut v, &mut scratch);
        let mut vmax: f64 = 0.0;
        for i in 0..=n {
            let (vl, ul) = if i == 0 { (v[0], u[0]) } else { (v[i - 1], u[i - 1]) };
            let (vr, ur) = if i == n { (v[n - 1], u[n - 1]) } else { (v[i], u[i]) };
            let vi = 0.5 * (vl + vr);
            vmax = vmax.max(vi.abs());
            flux[i] = factor * vi * if vi >= 0.0 { ul } else { ur };
        }
        let limit = cfg.cfl * (dx / (factor * vmax).max(1e-12));
        let mut dt = match cfg.dt {
            Some(fixed) if fixed > limit * (1.0 + 1e-12) => {
                return Err(Error::CflViolation { dt: fixed, limit });
            }
            Some(fixed) => fixed,
            None => limit.min(nominal),
        };
        if dt < dt_floor && t_final - t > dt_floor {
            return Err(Error::CflViolation { dt: dt_floor, limit: dt });
        }
        let last = t + dt >= t_final * (1.0 - 1e-12);
        if last {
            dt = t_final - t;
        }
        let r = dt / dx;
        for i in 0..n {
            u[i] -= r * (flux[i + 1] - flux[i]);
        }
        t = if last { t_final } else { t + dt };
        step += 1;
        if u.iter().any(|x| !x.is_finite()) {
            return Err(Error::CflViolation { dt, limit });
        }
        if step % cfg.stride == 0 || last {
            traj.push(t, GridFunction1D::on_grid(&grid, u.clone())?, Vec::new(), Vec::new());
        }
    }
    Ok(traj)
}
