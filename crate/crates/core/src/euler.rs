//! Isentropic Euler equations with cubic pressure `p(ρ) = ρ³/3`, solved through their Riemann
//! invariants `μ = ρ + v` and `λ = ρ - v`.
//!
//! The invariants satisfy `μ_t + μ μ_x = 0` and `λ_t - λ λ_x = 0`; each is regularised like the
//! NN equation. The `λ` equation is the NN equation under `x ↦ -x`, so it is solved on the
//! reflected grid.

use crate::error::{Error, Result};
use crate::funcspace::{GridFunction1D, InitialProfile};
use crate::nonlocal::{solve_nn, SolverConfig, Trajectory};

/// Riemann invariants on a shared grid.
#[derive(Debug, Clone, PartialEq)]
pub struct EulerState {
    pub mu: GridFunction1D,
    pub lam: GridFunction1D,
}

impl EulerState {
    pub fn rho(&self) -> GridFunction1D {
        combine(&self.mu, &self.lam, |m, l| 0.5 * (m + l))
    }

    pub fn vel(&self) -> GridFunction1D {
        combine(&self.mu, &self.lam, |m, l| 0.5 * (m - l))
    }

    /// Whether the density is negative anywhere (vacuum or worse; no claim is made there).
    pub fn has_vacuum(&self) -> bool {
        self.mu.values().iter().zip(self.lam.values()).any(|(m, l)| m + l <= 0.0)
    }
}

fn combine(a: &GridFunction1D, b: &GridFunction1D, f: impl Fn(f64, f64) -> f64) -> GridFunction1D {
    let values = a.values().iter().zip(b.values()).map(|(&x, &y)| f(x, y)).collect();
    GridFunction1D::new(a.x0(), a.dx(), values).expect("combination of valid grid functions")
}

pub fn to_invariants(rho: &GridFunction1D, vel: &GridFunction1D) -> Result<EulerState> {
    if !rho.grid().same_as(&vel.grid()) {
        return Err(Error::GridMismatch("density and velocity must share one grid".into()));
    }
    Ok(EulerState {
        mu: combine(rho, vel, |r, v| r + v),
        lam: combine(rho, vel, |r, v| r - v),
    })
}

/// Returns `(ρ, v)`.
pub fn from_invariants(state: &EulerState) -> (GridFunction1D, GridFunction1D) {
    (state.rho(), state.vel())
}

/// Sign of the transport term in the `λ` equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LambdaSign {
    /// `λ_t - (η_ε ∗ λ) λ_x = 0`, the Euler system.
    Physical,
    /// `λ_t + (η_ε ∗ λ) λ_x = 0`, a deliberately wrong system for mutation testing.
    Flipped,
}

/// Time-stamped invariant states of an Euler run.
#[derive(Debug, Clone)]
pub struct EulerTrajectory {
    pub times: Vec<f64>,
    pub states: Vec<EulerState>,
    pub dt: f64,
}

impl EulerTrajectory {
    pub fn last(&self) -> &EulerState {
        self.states.last().expect("trajectory is never empty")
    }

    /// Whether any stored state has nonpositive density.
    pub fn vacuum_flagged(&self) -> bool {
        self.states.iter().any(EulerState::has_vacuum)
    }
}

fn reflect(u: &GridFunction1D) -> GridFunction1D {
    let mut values = u.values().to_vec();
    values.reverse();
    GridFunction1D::new(-u.grid().x_last(), u.dx(), values).expect("reflection of a valid grid function")
}

/// Largest CFL-admissible step common to both invariants.
pub fn common_dt(state: &EulerState, cfg: &SolverConfig) -> f64 {
    let speed = state.mu.max().abs().max(state.mu.min().abs()).max(state.lam.max().abs()).max(state.lam.min().abs());
    cfg.cfl_dt(speed)
}

/// Solves the regularised invariant equations from `(ρ₀, v₀)` with a common time step.
pub fn solve_isentropic(
    rho0: &GridFunction1D,
    vel0: &GridFunction1D,
    epsilon: f64,
    t_final: f64,
    cfg: &SolverConfig,
) -> Result<EulerTrajectory> {
    solve_isentropic_with(rho0, vel0, epsilon, t_final, cfg, LambdaSign::Physical)
}

/// As [`solve_isentropic`] with a selectable sign in the `λ` equation.
pub fn solve_isentropic_with(
    rho0: &GridFunction1D,
    vel0: &GridFunction1D,
    epsilon: f64,
    t_final: f64,
    cfg: &SolverConfig,
    sign: LambdaSign,
) -> Result<EulerTrajectory> {
    if rho0.values().iter().any(|&r| r < 0.0) {
        return Err(Error::InvalidArgument("initial density must be nonnegative".into()));
    }
    let start = to_invariants(rho0, vel0)?;
    let dt = match cfg.dt {
        Some(dt) => dt,
        None => common_dt(&start, cfg),
    };
    let cfg = SolverConfig { dt: Some(dt), ..cfg.clone() };
    let (mu_traj, lam_traj) = rayon::join(
        || solve_nn(InitialProfile::from(start.mu.clone()), epsilon, t_final, &cfg),
        || -> Result<Trajectory> {
            match sign {
                LambdaSign::Physical => solve_nn(InitialProfile::from(reflect(&start.lam)), epsilon, t_final, &cfg),
                LambdaSign::Flipped => solve_nn(InitialProfile::from(start.lam.clone()), epsilon, t_final, &cfg),
            }
        },
    );
    let (mu_traj, lam_traj) = (mu_traj?, lam_traj?);
    let states = mu_traj
        .states()
        .iter()
        .zip(lam_traj.states())
        .map(|(mu, lam)| EulerState {
            mu: mu.clone(),
            lam: match sign {
                LambdaSign::Physical => reflect(lam),
                LambdaSign::Flipped => lam.clone(),
            },
        })
        .collect();
    Ok(EulerTrajectory {
        times: mu_traj.times().to_vec(),
        states,
        dt,
    })
}

fn bump(s: f64) -> (f64, f64) {
    if s.abs() >= 1.0 {
        return (0.0, 0.0);
    }
    let q = 1.0 - s * s;
    let b = (-1.0 / q).exp();
    (b, b * (-2.0 * s / (q * q)))
}

/// A smooth compactly supported test function `b((t - tc)/τ)·b((x - xc)/σ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestFunction {
    pub tc: f64,
    pub tau: f64,
    pub xc: f64,
    pub sigma: f64,
}

impl TestFunction {
    /// Returns `(φ, φ_t, φ_x)`.
    fn eval(&self, t: f64, x: f64) -> (f64, f64, f64) {
        let (bt, dbt) = bump((t - self.tc) / self.tau);
        let (bx, dbx) = bump((x - self.xc) / self.sigma);
        (bt * bx, dbt / self.tau * bx, bt * dbx / self.sigma)
    }
}

/// Fixed bank: five spatial bumps spread over the middle of `[a, b]`, times three windows inside
/// `(t0, t1)`.
pub fn standard_test_bank(a: f64, b: f64, t0: f64, t1: f64) -> Vec<TestFunction> {
    let len = b - a;
    let mid = 0.5 * (a + b);
    let span = t1 - t0;
    let windows = [
        (t0 + 0.5 * span, 0.49 * span),
        (t0 + 0.3 * span, 0.29 * span),
        (t0 + 0.7 * span, 0.29 * span),
    ];
    let mut bank = Vec::new();
    for &(tc, tau) in &windows {
        for k in -2..=2 {
            bank.push(TestFunction {
                tc,
                tau,
                xc: mid + 0.1 * len * k as f64,
                sigma: 0.15 * len,
            });
        }
    }
    bank
}

/// Weak-form residuals of the mass and momentum equations, maximised over a test bank.
///
/// For each test function `φ` the integrals `∬ ρ φ_t + ρv φ_x` and
/// `∬ ρv φ_t + (ρv² + ρ³/3) φ_x` are assembled by the rectangle rule over the stored levels and
/// the grid nodes. The bank is [`standard_test_bank`] over the middle half of the grid.
pub fn conservative_residual(states: &[EulerState], times: &[f64]) -> Result<(f64, f64)> {
    if states.len() < 3 || states.len() != times.len() {
        return Err(Error::InvalidArgument("need at least 3 time levels with matching times".into()));
    }
    let g = states[0].mu.grid();
    let (a, b) = (g.x0, g.x_last());
    let quarter = 0.25 * (b - a);
    let bank = standard_test_bank(a + quarter, b - quarter, times[0], times[times.len() - 1]);
    conservative_residual_with(states, times, &bank)
}

/// [`conservative_residual`] against an explicit test bank.
pub fn conservative_residual_with(states: &[EulerState], times: &[f64], bank: &[TestFunction]) -> Result<(f64, f64)> {
    if states.len() < 3 || states.len() != times.len() {
        return Err(Error::InvalidArgument("need at least 3 time levels with matching times".into()));
    }
    let g = states[0].mu.grid();
    if states.iter().any(|s| !s.mu.grid().same_as(&g) || !s.lam.grid().same_as(&g)) {
        return Err(Error::GridMismatch("all states must share one grid".into()));
    }
    let mut r1 = vec![0.0; bank.len()];
    let mut r2 = vec![0.0; bank.len()];
    for k in 0..states.len() - 1 {
        let t = times[k];
        let w = times[k + 1] - times[k];
        let (mu, lam) = (states[k].mu.values(), states[k].lam.values());
        for (p, phi) in bank.iter().enumerate() {
            let (bt, _) = bump((t - phi.tc) / phi.tau);
            if bt == 0.0 {
                continue;
            }
            let (mut s1, mut s2) = (0.0, 0.0);
            for i in 0..g.n {
                let x = g.x(i);
                if (x - phi.xc).abs() >= phi.sigma {
                    continue;
                }
                let rho = 0.5 * (mu[i] + lam[i]);
                let v = 0.5 * (mu[i] - lam[i]);
                let (_, ft, fx) = phi.eval(t, x);
                let m = rho * v;
                s1 += rho * ft + m * fx;
                s2 += m * ft + (m * v + rho * rho * rho / 3.0) * fx;
            }
            r1[p] += w * g.dx * s1;
            r2[p] += w * g.dx * s2;
        }
    }
    let max_abs = |r: &[f64]| r.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    Ok((max_abs(&r1), max_abs(&r2)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::Grid1D;

    #[test]
    fn invariant_round_trip() {
        let g = Grid1D::symmetric(1.0, 0.1).unwrap();
        let rho = GridFunction1D::from_fn(g.x0, g.dx, g.n, |x| 1.0 + 0.3 * x.sin()).unwrap();
        let vel = GridFunction1D::from_fn(g.x0, g.dx, g.n, |x| 0.2 * x).unwrap();
        let s = to_invariants(&rho, &vel).unwrap();
        let (r, v) = from_invariants(&s);
        for i in 0..g.n {
            assert!((r.values()[i] - rho.values()[i]).abs() < 1e-15);
            assert!((v.values()[i] - vel.values()[i]).abs() < 1e-15);
        }
        let one = GridFunction1D::constant(&g, 1.0).unwrap();
        let zero = GridFunction1D::constant(&g, 0.0).unwrap();
        let s = to_invariants(&one, &zero).unwrap();
        assert!(s.mu.values().iter().chain(s.lam.values()).all(|&v| v == 1.0));
        let c = GridFunction1D::constant(&g, 0.4).unwrap();
        let s = to_invariants(&zero, &c).unwrap();
        assert!(s.mu.values().iter().all(|&v| v == 0.4) && s.lam.values().iter().all(|&v| v == -0.4));
    }

    #[test]
    fn constant_state_residual_vanishes() {
        let g = Grid1D::symmetric(2.0, 0.01).unwrap();
        let rho = GridFunction1D::constant(&g, 1.2).unwrap();
        let vel = GridFunction1D::constant(&g, 0.3).unwrap();
        let cfg = SolverConfig::with_dx(0.01);
        let traj = solve_isentropic(&rho, &vel, 0.05, 0.2, &cfg).unwrap();
        assert_eq!(traj.last().rho().values(), rho.values());
        let (r1, r2) = conservative_residual(&traj.states, &traj.times).unwrap();
        assert!(r1 < 1e-12 && r2 < 1e-12, "{r1} {r2}");
    }
}
