//! Solvers for the non-conservative nonlocal equation `u_t + (η_ε ∗ u) u_x = 0`, its
//! general-flux variants, and the conservative nonlocal comparison equation.
//!
//! The non-conservative solvers trace characteristics backwards with a self-consistent
//! (Picard) trapezoidal foot per step. Instead of re-interpolating the previous state each
//! step, they carry the backward characteristic map `Y(t, x)` and evaluate the initial profile
//! at `Y`. Discontinuities of the data are transported along their own characteristics, which
//! keeps fronts sharp and avoids seeding rarefactions with interpolation diffusion.

mod characteristics;
mod conservative;
mod semi_lagrangian;

pub use characteristics::{backward_characteristic, velocity_history};
pub use conservative::{solve_conservative_nonlocal, solve_conservative_scaled};
pub use semi_lagrangian::{solve_general, solve_nn, step_nn, Regularisation};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcspace::{sample, sup_norm, FrontResolved, Grid1D, GridFunction1D, InitialData, InitialProfile};

/// Which equation produced a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Nn,
    Conservative,
    VelocityReg,
    FluxReg,
    /// Local entropy solution computed by the Godunov reference scheme.
    Godunov,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Nn => "nn",
            Mode::Conservative => "conservative",
            Mode::VelocityReg => "velocity_reg",
            Mode::FluxReg => "flux_reg",
            Mode::Godunov => "godunov",
        }
    }

    /// Whether the maximum principle is part of the contract for this mode.
    pub fn has_maximum_principle(self) -> bool {
        !matches!(self, Mode::Conservative)
    }
}

/// Numerical parameters shared by the 1D and 2D solvers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub dx: f64,
    pub cfl: f64,
    pub picard_tol: f64,
    pub picard_max_iters: usize,
    /// Extra spatial padding added beyond `‖u₀‖∞·T + ε`.
    pub margin: f64,
    /// Store every `stride`-th step (the final state is always stored).
    pub stride: usize,
    /// Fixed time step; must not exceed the CFL step.
    pub dt: Option<f64>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            dx: 1e-3,
            cfl: 0.5,
            picard_tol: 1e-10,
            picard_max_iters: 50,
            margin: 1.0,
            stride: 1,
            dt: None,
        }
    }
}

impl SolverConfig {
    pub fn with_dx(dx: f64) -> Self {
        SolverConfig {
            dx,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dx > 0.0 && self.dx.is_finite()) {
            return Err(Error::InvalidArgument(format!("dx must be positive (got {})", self.dx)));
        }
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(Error::InvalidArgument(format!("cfl must lie in (0, 1] (got {})", self.cfl)));
        }
        if !(self.picard_tol > 0.0) || self.picard_max_iters == 0 {
            return Err(Error::InvalidArgument("picard tolerance and iteration cap must be positive".into()));
        }
        if self.stride == 0 {
            return Err(Error::InvalidArgument("stride must be at least 1".into()));
        }
        if !(self.margin >= 0.0) {
            return Err(Error::InvalidArgument("margin must be nonnegative".into()));
        }
        Ok(())
    }

    /// Padding `‖u₀‖∞·T + ε + margin` that keeps the solution away from the boundary.
    pub fn padding(&self, sup: f64, epsilon: f64, t_final: f64) -> f64 {
        sup * t_final + epsilon + self.margin
    }

    /// Grid covering `[a, b]` plus padding on both sides, with `a` and `b` kept as nodes when they
    /// are multiples of `dx`.
    pub fn padded_grid(&self, a: f64, b: f64, sup: f64, epsilon: f64, t_final: f64) -> Result<Grid1D> {
        let pad_cells = (self.padding(sup, epsilon, t_final) / self.dx).ceil();
        let left_cells = (a / self.dx).round() - pad_cells;
        let right_cells = (b / self.dx).round() + pad_cells;
        let n = (right_cells - left_cells) as usize + 1;
        Grid1D::new(left_cells * self.dx, self.dx, n)
    }

    /// Nominal CFL step for the given maximal characteristic speed.
    pub fn cfl_dt(&self, max_speed: f64) -> f64 {
        self.cfl * (self.dx / max_speed.max(1e-12))
    }

    pub(crate) fn resolve_dt(&self, max_speed: f64) -> Result<f64> {
        let limit = self.cfl_dt(max_speed);
        match self.dt {
            None => Ok(limit),
            Some(dt) if dt > 0.0 && dt <= limit * (1.0 + 1e-12) => Ok(dt),
            Some(dt) => Err(Error::CflViolation { dt, limit }),
        }
    }
}

/// Samples `data` on the padded grid around `window` (sup norm estimated on the window widened
/// by one unit).
pub fn padded_profile(
    data: &dyn InitialData,
    window: (f64, f64),
    epsilon: f64,
    t_final: f64,
    cfg: &SolverConfig,
) -> Result<InitialProfile> {
    let probe = Grid1D::covering(window.0 - 1.0, window.1 + 1.0, cfg.dx)?;
    let sup = sup_norm(&sample(data, &probe)?);
    let grid = cfg.padded_grid(window.0, window.1, sup, epsilon, t_final)?;
    InitialProfile::from_data(data, &grid)
}

/// Stride that stores roughly `count` states for a run with the given nominal step.
pub fn stride_for(t_final: f64, dt: f64, count: usize) -> usize {
    let steps = (t_final / dt).ceil().max(1.0) as usize;
    steps.div_ceil(count.max(1)).max(1)
}

/// Splits `[0, T]` into uniform steps of `dt` with a shortened last step.
pub(crate) fn time_levels(t_final: f64, dt: f64) -> Vec<f64> {
    let n = (t_final / dt - 1e-9).ceil().max(1.0) as usize;
    let mut t: Vec<f64> = (0..n).map(|k| k as f64 * dt).collect();
    t.push(t_final);
    t
}

/// Time-stamped sequence of states on a fixed grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    times: Vec<f64>,
    states: Vec<GridFunction1D>,
    epsilon: f64,
    mode: Mode,
    dt: f64,
    picard_iterations: Vec<usize>,
    fronts: Vec<Vec<f64>>,
    front_limits: Vec<Vec<(f64, f64)>>,
}

impl Trajectory {
    pub(crate) fn new(epsilon: f64, mode: Mode, dt: f64) -> Self {
        Trajectory {
            times: Vec::new(),
            states: Vec::new(),
            epsilon,
            mode,
            dt,
            picard_iterations: Vec::new(),
            fronts: Vec::new(),
            front_limits: Vec::new(),
        }
    }

    /// Builds a trajectory from externally produced states (used by tests and tools).
    pub fn from_states(times: Vec<f64>, states: Vec<GridFunction1D>, epsilon: f64, mode: Mode) -> Result<Self> {
        if times.len() != states.len() || times.is_empty() {
            return Err(Error::InvalidArgument("times and states must be nonempty and of equal length".into()));
        }
        if times.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidArgument("times must be strictly increasing".into()));
        }
        let g = states[0].grid();
        if states.iter().any(|s| !s.grid().same_as(&g)) {
            return Err(Error::GridMismatch("states must share one grid".into()));
        }
        let dt = if times.len() > 1 { times[1] - times[0] } else { 0.0 };
        let n = states.len();
        Ok(Trajectory {
            times,
            states,
            epsilon,
            mode,
            dt,
            picard_iterations: Vec::new(),
            fronts: vec![Vec::new(); n],
            front_limits: vec![Vec::new(); n],
        })
    }

    pub(crate) fn push(&mut self, t: f64, state: GridFunction1D, fronts: Vec<f64>, limits: Vec<(f64, f64)>) {
        self.times.push(t);
        self.states.push(state);
        self.fronts.push(fronts);
        self.front_limits.push(limits);
    }

    pub(crate) fn record_iterations(&mut self, count: usize) {
        self.picard_iterations.push(count);
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[GridFunction1D] {
        &self.states
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Nominal (uniform) time step.
    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Picard iterations used by each step (empty for explicit schemes).
    pub fn picard_iterations(&self) -> &[usize] {
        &self.picard_iterations
    }

    /// Tracked positions of the data's discontinuities at each stored time.
    pub fn fronts(&self) -> &[Vec<f64>] {
        &self.fronts
    }

    /// Left and right limits carried by each tracked front at each stored time.
    pub fn front_limits(&self) -> &[Vec<(f64, f64)>] {
        &self.front_limits
    }

    /// Whether the run tracked discontinuities of the initial data.
    pub fn tracks_fronts(&self) -> bool {
        self.fronts.first().is_some_and(|f| !f.is_empty())
    }

    /// Stored state `k` together with its tracked fronts.
    pub fn resolved(&self, k: usize) -> FrontResolved<'_> {
        FrontResolved {
            state: &self.states[k],
            fronts: &self.fronts[k],
            limits: &self.front_limits[k],
        }
    }

    pub fn grid(&self) -> Grid1D {
        self.states[0].grid()
    }

    pub fn initial(&self) -> &GridFunction1D {
        &self.states[0]
    }

    pub fn last(&self) -> &GridFunction1D {
        self.states.last().expect("trajectory is never empty")
    }

    pub fn final_time(&self) -> f64 {
        *self.times.last().expect("trajectory is never empty")
    }

    /// Stored state closest in time to `t`.
    pub fn state_near(&self, t: f64) -> &GridFunction1D {
        let k = self.times.partition_point(|&s| s < t);
        let k = if k == self.times.len() {
            k - 1
        } else if k > 0 && (t - self.times[k - 1]) <= (self.times[k] - t) {
            k - 1
        } else {
            k
        };
        &self.states[k]
    }

    pub fn max_sup_norm(&self) -> f64 {
        self.states.iter().map(sup_norm).fold(0.0, f64::max)
    }
}
