use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flux::FluxSpec;
use crate::funcspace::{l1_distance_on, sample, sup_distance_on, GridFunction1D, InitialData, InitialProfile, RiemannData};
use crate::local::{
    burgers_riemann_exact, burgers_riemann_profile, default_delta, front_tracking_solve, godunov_solve, lax_oleinik_at,
    PiecewiseConstant,
};
use crate::nonlocal::{solve_nn, SolverConfig, Trajectory};
use crate::parallel::pool;

/// Entropy oracle used as the ε → 0 target.
#[derive(Debug, Clone)]
pub enum Reference {
    LaxOleinik,
    ExactRiemann(RiemannData),
    Godunov(FluxSpec),
    FrontTracking,
}

impl Reference {
    pub fn name(&self) -> &'static str {
        match self {
            Reference::LaxOleinik => "lax_oleinik",
            Reference::ExactRiemann(_) => "exact_riemann",
            Reference::Godunov(_) => "godunov",
            Reference::FrontTracking => "front_tracking",
        }
    }

    fn solve(&self, profile: &InitialProfile, t: f64) -> Result<GridFunction1D> {
        let u0 = profile.samples();
        let grid = u0.grid();
        match self {
            Reference::LaxOleinik => GridFunction1D::on_grid(&grid, lax_oleinik_at(profile, t, &grid.nodes())?),
            Reference::ExactRiemann(d) => burgers_riemann_profile(*d, t, &grid),
            Reference::Godunov(f) => Ok(godunov_solve(u0, f, t, grid.dx)?.last().clone()),
            Reference::FrontTracking => {
                let pc = PiecewiseConstant::from_cells(u0);
                front_tracking_solve(&pc, &FluxSpec::burgers(), t, default_delta(&pc))?.sample(t, &grid)
            }
        }
    }

    /// Reference values at arbitrary points, for the oracles that have them.
    fn solve_at(&self, profile: &InitialProfile, t: f64, xs: &[f64]) -> Result<Option<Vec<f64>>> {
        Ok(match self {
            Reference::LaxOleinik => Some(lax_oleinik_at(profile, t, xs)?),
            Reference::ExactRiemann(d) => Some(xs.iter().map(|&x| burgers_riemann_exact(*d, x / t)).collect()),
            Reference::Godunov(_) | Reference::FrontTracking => None,
        })
    }
}

/// Midpoints per grid cell used by the front-resolved error.
pub const RESOLVED_REFINEMENT: usize = 16;

/// Initial data, final time and the compact window on which errors are measured.
#[derive(Clone)]
pub struct ConvergenceProblem {
    pub name: String,
    pub data: Arc<dyn InitialData>,
    pub t_final: f64,
    pub window: (f64, f64),
}

/// Sweep settings. `solver.dx` is the largest spacing; each run uses `min(dx_max, ε/8)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyConfig {
    pub solver: SolverConfig,
    /// Rows whose L1 error is below `floor_factor·dx·(jump sum of the reference)` are flagged.
    pub floor_factor: f64,
    /// Number of smallest ε used for the fitted rates.
    pub fit_points: usize,
}

impl Default for StudyConfig {
    fn default() -> Self {
        StudyConfig {
            solver: SolverConfig::default(),
            floor_factor: 2.0,
            fit_points: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub epsilon: f64,
    pub dx: f64,
    pub dt: f64,
    pub error_l1: f64,
    pub error_sup: f64,
    /// Grid-resolution floor of the L1 error.
    pub floor: f64,
    pub floor_dominated: bool,
    /// L1 error of the front-resolved solution (linear between nodes, sharp at tracked fronts)
    /// against the pointwise reference, by the midpoint rule on a refined grid.
    pub error_l1_resolved: Option<f64>,
}

/// ε against error, with log-log slopes over the smallest ε.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceTable {
    pub scenario: String,
    pub reference: String,
    pub t_final: f64,
    pub window: (f64, f64),
    /// Sorted by decreasing ε.
    pub rows: Vec<ConvergenceRow>,
    /// L1 slope, absent when a fitted row is floor dominated.
    pub fitted_rate: Option<f64>,
    pub fitted_rate_sup: Option<f64>,
    /// L1 slope regardless of floor flags.
    pub raw_rate: Option<f64>,
    /// Slope of the front-resolved L1 error.
    pub resolved_rate: Option<f64>,
}

/// Least-squares slope of `log y` against `log x` (none if any value is not positive).
pub fn fit_slope(x: &[f64], y: &[f64]) -> Option<f64> {
    if x.len() < 2 || x.len() != y.len() || x.iter().chain(y).any(|&v| !(v > 0.0)) {
        return None;
    }
    let pts: Vec<(f64, f64)> = x.iter().zip(y).map(|(a, b)| (a.ln(), b.ln())).collect();
    Some(super::fronts::linear_fit(&pts).0)
}

/// Error bound `ε·L²·M·T·e^{LMT}` for Lipschitz data in the smooth regime.
pub fn smooth_rate_bound(epsilon: f64, l: f64, m: f64, t: f64) -> f64 {
    epsilon * l * l * m * t * (l * m * t).exp()
}

fn jump_sum(u: &GridFunction1D, window: (f64, f64)) -> f64 {
    let (lo, hi) = (u.min(), u.max());
    let threshold = 0.1 * (hi - lo);
    let v = u.values();
    (0..v.len() - 1)
        .filter(|&i| u.x(i) >= window.0 && u.x(i + 1) <= window.1)
        .map(|i| (v[i + 1] - v[i]).abs())
        .filter(|&d| threshold > 0.0 && d > threshold)
        .sum()
}

fn study_row(
    problem: &ConvergenceProblem,
    epsilon: f64,
    reference: &Reference,
    cfg: &StudyConfig,
) -> Result<(ConvergenceRow, Trajectory)> {
    let dx = cfg.solver.dx.min(epsilon / 8.0);
    let solver = SolverConfig {
        dx,
        stride: usize::MAX,
        ..cfg.solver.clone()
    };
    let (a, b) = problem.window;
    let probe = crate::funcspace::Grid1D::covering(a - 1.0, b + 1.0, dx)?;
    let sup = sample(problem.data.as_ref(), &probe)?.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let grid = solver.padded_grid(a, b, sup, epsilon, problem.t_final)?;
    let profile = InitialProfile::from_data(problem.data.as_ref(), &grid)?;
    let traj = solve_nn(profile.clone(), epsilon, problem.t_final, &solver)?;
    let exact = reference.solve(&profile, problem.t_final)?;
    let u = traj.last();
    let h = dx / RESOLVED_REFINEMENT as f64;
    let m = ((b - a) / h).round() as usize;
    let xs: Vec<f64> = (0..m).map(|j| a + (j as f64 + 0.5) * h).collect();
    let error_l1_resolved = reference.solve_at(&profile, problem.t_final, &xs)?.map(|r| {
        let resolved = traj.resolved(traj.states().len() - 1);
        xs.iter().zip(&r).map(|(&x, &v)| (resolved.eval(x) - v).abs()).sum::<f64>() * h
    });
    let error_l1 = l1_distance_on(u, &exact, a, b)?;
    let error_sup = sup_distance_on(u, &exact, a, b)?;
    let floor = cfg.floor_factor * dx * jump_sum(&exact, problem.window);
    let row = ConvergenceRow {
        epsilon,
        dx,
        dt: traj.dt(),
        error_l1,
        error_sup,
        floor,
        floor_dominated: error_l1 <= floor,
        error_l1_resolved,
    };
    Ok((row, traj))
}

/// Solves the NN equation for every ε and measures the error against the reference at the final
/// time. Runs are independent and execute on the shared pool; the table does not depend on the
/// number of threads.
pub fn convergence_study(
    problem: &ConvergenceProblem,
    epsilons: &[f64],
    reference: &Reference,
    cfg: &StudyConfig,
) -> Result<ConvergenceTable> {
    Ok(convergence_study_with_runs(problem, epsilons, reference, cfg)?.0)
}

/// As [`convergence_study`], also returning each run (initial and final states, with fronts) in
/// the order of the table rows.
pub fn convergence_study_with_runs(
    problem: &ConvergenceProblem,
    epsilons: &[f64],
    reference: &Reference,
    cfg: &StudyConfig,
) -> Result<(ConvergenceTable, Vec<Trajectory>)> {
    if epsilons.is_empty() {
        return Err(Error::InvalidArgument("epsilon list must not be empty".into()));
    }
    let mut eps = epsilons.to_vec();
    eps.sort_by(|a, b| b.total_cmp(a));
    let runs: Vec<(ConvergenceRow, Trajectory)> = pool()
        .install(|| {
            eps.par_iter()
                .map(|&e| study_row(problem, e, reference, cfg))
                .collect::<Vec<_>>()
        })
        .into_iter()
        .collect::<Result<_>>()?;
    let (rows, trajectories): (Vec<ConvergenceRow>, Vec<Trajectory>) = runs.into_iter().unzip();
    let k = cfg.fit_points.min(rows.len());
    let tail = &rows[rows.len() - k..];
    let xs: Vec<f64> = tail.iter().map(|r| r.epsilon).collect();
    let l1: Vec<f64> = tail.iter().map(|r| r.error_l1).collect();
    let sup: Vec<f64> = tail.iter().map(|r| r.error_sup).collect();
    let clean = tail.iter().all(|r| !r.floor_dominated);
    let raw_rate = fit_slope(&xs, &l1);
    let resolved_rate = tail
        .iter()
        .map(|r| r.error_l1_resolved)
        .collect::<Option<Vec<f64>>>()
        .and_then(|e| fit_slope(&xs, &e));
    let table = ConvergenceTable {
        scenario: problem.name.clone(),
        reference: reference.name().into(),
        t_final: problem.t_final,
        window: problem.window,
        rows,
        fitted_rate_sup: if clean { fit_slope(&xs, &sup) } else { None },
        fitted_rate: if clean { raw_rate } else { None },
        raw_rate,
        resolved_rate,
    };
    Ok((table, trajectories))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_power_law() {
        let x = [0.1, 0.05, 0.025];
        let y: Vec<f64> = x.iter().map(|e: &f64| 3.0 * e.powf(1.5)).collect();
        assert!((fit_slope(&x, &y).unwrap() - 1.5).abs() < 1e-12);
        assert!(fit_slope(&x, &[0.0, 1.0, 2.0]).is_none());
    }

    #[test]
    fn bound_formula() {
        let b = smooth_rate_bound(0.1, 2.0, 1.0, 0.5);
        assert!((b - 0.1 * 4.0 * 0.5 * 1f64.exp()).abs() < 1e-15);
    }
}
