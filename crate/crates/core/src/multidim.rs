//! Two-dimensional velocity-regularised solver and 2D total variation.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::flux::FluxSpec;
use crate::kernel::Mollifier;
use crate::nonlocal::{time_levels, SolverConfig};
use crate::parallel::pool;

/// A function sampled on a uniform rectangular grid, stored row by row (`values[j·nx + i]`).
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction2D {
    x0: f64,
    y0: f64,
    dx: f64,
    dy: f64,
    nx: usize,
    ny: usize,
    values: Vec<f64>,
}

impl GridFunction2D {
    pub fn new(origin: (f64, f64), spacing: (f64, f64), nx: usize, ny: usize, values: Vec<f64>) -> Result<Self> {
        let (dx, dy) = spacing;
        if !(dx > 0.0 && dy > 0.0 && dx.is_finite() && dy.is_finite()) {
            return Err(Error::InvalidArgument(format!("spacings must be positive (got {dx}, {dy})")));
        }
        if nx < 2 || ny < 2 {
            return Err(Error::InvalidArgument(format!("need at least 2×2 nodes (got {nx}×{ny})")));
        }
        if values.len() != nx * ny {
            return Err(Error::GridMismatch(format!("{} values for a {nx}×{ny} grid", values.len())));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("grid function values must be finite".into()));
        }
        Ok(GridFunction2D {
            x0: origin.0,
            y0: origin.1,
            dx,
            dy,
            nx,
            ny,
            values,
        })
    }

    pub fn from_fn(
        origin: (f64, f64),
        spacing: (f64, f64),
        nx: usize,
        ny: usize,
        f: impl Fn(f64, f64) -> f64,
    ) -> Result<Self> {
        let mut values = Vec::with_capacity(nx * ny);
        for j in 0..ny {
            let y = origin.1 + j as f64 * spacing.1;
            for i in 0..nx {
                values.push(f(origin.0 + i as f64 * spacing.0, y));
            }
        }
        Self::new(origin, spacing, nx, ny, values)
    }

    pub fn origin(&self) -> (f64, f64) {
        (self.x0, self.y0)
    }

    pub fn spacing(&self) -> (f64, f64) {
        (self.dx, self.dy)
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.nx, self.ny)
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.dx
    }

    pub fn y(&self, j: usize) -> f64 {
        self.y0 + j as f64 * self.dy
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.nx + i]
    }

    pub fn row(&self, j: usize) -> &[f64] {
        &self.values[j * self.nx..(j + 1) * self.nx]
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// The same samples with the roles of x and y exchanged.
    pub fn transpose(&self) -> GridFunction2D {
        GridFunction2D {
            x0: self.y0,
            y0: self.x0,
            dx: self.dy,
            dy: self.dx,
            nx: self.ny,
            ny: self.nx,
            values: transpose(&self.values, self.nx, self.ny),
        }
    }

    fn same_grid(&self, other: &GridFunction2D) -> bool {
        self.nx == other.nx
            && self.ny == other.ny
            && self.x0 == other.x0
            && self.y0 == other.y0
            && self.dx == other.dx
            && self.dy == other.dy
    }
}

/// Anisotropic discrete total variation `Σ|Δₓu|·dy + Σ|Δ_y u|·dx`.
pub fn tv_2d(u: &GridFunction2D) -> f64 {
    let ny = u.ny;
    let mut tx = 0.0;
    let mut ty = 0.0;
    for j in 0..ny {
        let row = u.row(j);
        tx += row.windows(2).map(|w| (w[1] - w[0]).abs()).sum::<f64>();
        if j + 1 < ny {
            let next = u.row(j + 1);
            ty += row.iter().zip(next).map(|(a, b)| (b - a).abs()).sum::<f64>();
        }
    }
    tx * u.dy + ty * u.dx
}

/// Stored states of a 2D run.
#[derive(Debug, Clone)]
pub struct Trajectory2D {
    times: Vec<f64>,
    states: Vec<GridFunction2D>,
    tv: Vec<f64>,
    epsilon: f64,
    dt: f64,
    picard_iterations: Vec<usize>,
}

impl Trajectory2D {
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[GridFunction2D] {
        &self.states
    }

    /// `tv_2d` of every stored state.
    pub fn tv(&self) -> &[f64] {
        &self.tv
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn picard_iterations(&self) -> &[usize] {
        &self.picard_iterations
    }

    pub fn initial(&self) -> &GridFunction2D {
        &self.states[0]
    }

    pub fn last(&self) -> &GridFunction2D {
        self.states.last().expect("trajectory is never empty")
    }

    /// Largest ratio `tv(t)/tv(0)` over the stored states (1 for constant data).
    pub fn tv_growth(&self) -> f64 {
        let tv0 = self.tv[0];
        if tv0 == 0.0 {
            return if self.tv.iter().all(|&t| t == 0.0) { 1.0 } else { f64::INFINITY };
        }
        self.tv.iter().fold(0.0, |m, &t| m.max(t / tv0))
    }

    fn push(&mut self, t: f64, state: GridFunction2D) {
        self.tv.push(tv_2d(&state));
        self.times.push(t);
        self.states.push(state);
    }
}

fn transpose(values: &[f64], nx: usize, ny: usize) -> Vec<f64> {
    let mut out = vec![0.0; nx * ny];
    for j in 0..ny {
        for i in 0..nx {
            out[i * ny + j] = values[j * nx + i];
        }
    }
    out
}

/// Linear interpolation along a row at fractional index `s` with constant extension.
#[inline]
fn lerp_row(row: &[f64], s: f64) -> f64 {
    let n = row.len();
    if !(s > 0.0) {
        return row[0];
    }
    if s >= (n - 1) as f64 {
        return row[n - 1];
    }
    let i = s as usize;
    let t = s - i as f64;
    row[i] + t * (row[i + 1] - row[i])
}

#[inline]
fn clamp_between(v: f64, a: f64, b: f64) -> f64 {
    if a <= b {
        v.clamp(a, b)
    } else {
        v.clamp(b, a)
    }
}

/// Bilinear interpolation at fractional indices `(sx, sy)`. With `monotone` the result is
/// clamped to the bracketing values in each direction, so it never leaves their range.
#[inline]
fn bilinear(values: &[f64], nx: usize, ny: usize, sx: f64, sy: f64, monotone: bool) -> f64 {
    let row_value = |j: usize| {
        let row = &values[j * nx..(j + 1) * nx];
        let v = lerp_row(row, sx);
        if monotone && sx > 0.0 && sx < (nx - 1) as f64 {
            let i = sx as usize;
            clamp_between(v, row[i], row[i + 1])
        } else {
            v
        }
    };
    if !(sy > 0.0) {
        return row_value(0);
    }
    if sy >= (ny - 1) as f64 {
        return row_value(ny - 1);
    }
    let j = sy as usize;
    let t = sy - j as f64;
    let (a, b) = (row_value(j), row_value(j + 1));
    let v = a + t * (b - a);
    if monotone {
        clamp_between(v, a, b)
    } else {
        v
    }
}

struct Solver2D<'a> {
    u0: &'a GridFunction2D,
    fluxes: [&'a FluxSpec; 2],
    kx: Mollifier,
    ky: Mollifier,
}

struct State2D {
    yx: Vec<f64>,
    yy: Vec<f64>,
    u: Vec<f64>,
    vx: Vec<f64>,
    vy: Vec<f64>,
}

impl Solver2D<'_> {
    fn shape(&self) -> (usize, usize) {
        (self.u0.nx, self.u0.ny)
    }

    /// Tensor-product convolution: rows first, then columns.
    fn convolve(&self, field: &[f64]) -> Vec<f64> {
        let (nx, ny) = self.shape();
        let mut rows = vec![0.0; nx * ny];
        pool().install(|| {
            rows.par_chunks_mut(nx).zip(field.par_chunks(nx)).for_each_init(Vec::new, |scratch, (out, row)| {
                self.kx.convolve_slice(row, out, scratch)
            })
        });
        let cols = transpose(&rows, nx, ny);
        let mut cols_out = vec![0.0; nx * ny];
        pool().install(|| {
            cols_out
                .par_chunks_mut(ny)
                .zip(cols.par_chunks(ny))
                .for_each_init(Vec::new, |scratch, (out, col)| self.ky.convolve_slice(col, out, scratch))
        });
        transpose(&cols_out, ny, nx)
    }

    fn velocity(&self, u: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let sx: Vec<f64> = u.iter().map(|&v| self.fluxes[0].fprime(v)).collect();
        let sy: Vec<f64> = u.iter().map(|&v| self.fluxes[1].fprime(v)).collect();
        (self.convolve(&sx), self.convolve(&sy))
    }

    fn initial_state(&self) -> State2D {
        let (nx, ny) = self.shape();
        let g = self.u0;
        let mut yx = Vec::with_capacity(nx * ny);
        let mut yy = Vec::with_capacity(nx * ny);
        for j in 0..ny {
            for i in 0..nx {
                yx.push(g.x(i));
                yy.push(g.y(j));
            }
        }
        let u = g.values.clone();
        let (vx, vy) = self.velocity(&u);
        State2D { yx, yy, u, vx, vy }
    }

    /// Composes the stored map with the feet and evaluates the data there.
    fn evaluate(&self, state: &State2D, fx: &[f64], fy: &[f64], yx: &mut [f64], yy: &mut [f64], u: &mut [f64]) {
        let (nx, ny) = self.shape();
        let g = self.u0;
        pool().install(|| {
            yx.par_chunks_mut(nx)
                .zip(yy.par_chunks_mut(nx))
                .zip(u.par_chunks_mut(nx))
                .enumerate()
                .for_each(|(j, ((ryx, ryy), ru))| {
                    for i in 0..nx {
                        let k = j * nx + i;
                        let sx = (fx[k] - g.x0) / g.dx;
                        let sy = (fy[k] - g.y0) / g.dy;
                        let a = bilinear(&state.yx, nx, ny, sx, sy, false);
                        let b = bilinear(&state.yy, nx, ny, sx, sy, false);
                        ryx[i] = a;
                        ryy[i] = b;
                        ru[i] = bilinear(&g.values, nx, ny, (a - g.x0) / g.dx, (b - g.y0) / g.dy, true);
                    }
                })
        });
    }

    fn step(
        &self,
        state: &mut State2D,
        previous: &mut Option<(Vec<f64>, Vec<f64>, f64)>,
        dt: f64,
        cfg: &SolverConfig,
        time: f64,
    ) -> Result<usize> {
        let (nx, ny) = self.shape();
        let n = nx * ny;
        let g = self.u0;
        let (vxn, vyn) = (state.vx.clone(), state.vy.clone());
        let (mut vxj, mut vyj) = match previous {
            Some((px, py, h)) => {
                let r = dt / *h;
                (
                    vxn.iter().zip(px.iter()).map(|(a, b)| a + r * (a - b)).collect::<Vec<_>>(),
                    vyn.iter().zip(py.iter()).map(|(a, b)| a + r * (a - b)).collect::<Vec<_>>(),
                )
            }
            None => (vxn.clone(), vyn.clone()),
        };
        let node = |k: usize| (g.x(k % nx), g.y(k / nx));
        let mut fx: Vec<f64> = (0..n).map(|k| node(k).0 - 0.5 * dt * (vxn[k] + vxj[k])).collect();
        let mut fy: Vec<f64> = (0..n).map(|k| node(k).1 - 0.5 * dt * (vyn[k] + vyj[k])).collect();
        let mut cur_u = state.u.clone();
        let (mut nfx, mut nfy) = (vec![0.0; n], vec![0.0; n]);
        let (mut yx, mut yy, mut u) = (vec![0.0; n], vec![0.0; n], vec![0.0; n]);
        let mut change = f64::INFINITY;
        for iter in 1..=cfg.picard_max_iters {
            for k in 0..n {
                let sx = (fx[k] - g.x0) / g.dx;
                let sy = (fy[k] - g.y0) / g.dy;
                let (x, y) = node(k);
                nfx[k] = x - 0.5 * dt * (vxj[k] + bilinear(&vxn, nx, ny, sx, sy, true));
                nfy[k] = y - 0.5 * dt * (vyj[k] + bilinear(&vyn, nx, ny, sx, sy, true));
            }
            self.evaluate(state, &nfx, &nfy, &mut yx, &mut yy, &mut u);
            change = 0.0;
            for k in 0..n {
                change = change
                    .max((u[k] - cur_u[k]).abs())
                    .max((nfx[k] - fx[k]).abs())
                    .max((nfy[k] - fy[k]).abs());
            }
            std::mem::swap(&mut fx, &mut nfx);
            std::mem::swap(&mut fy, &mut nfy);
            std::mem::swap(&mut cur_u, &mut u);
            if change < cfg.picard_tol {
                state.yx = yx;
                state.yy = yy;
                state.u = cur_u;
                let (vx, vy) = self.velocity(&state.u);
                state.vx = vx;
                state.vy = vy;
                *previous = Some((vxn, vyn, dt));
                return Ok(iter);
            }
            let (a, b) = self.velocity(&cur_u);
            vxj = a;
            vyj = b;
        }
        Err(Error::PicardDivergence {
            iterations: cfg.picard_max_iters,
            time,
            change,
        })
    }
}

/// Solves `u_t + (η_ε ∗ f₁'(u)) u_x + (η_ε ∗ f₂'(u)) u_y = 0` with a tensor-product mollifier.
///
/// The scheme transports the backward characteristic map: each step solves the trapezoidal
/// foot equation by Picard iteration, composes the previous map bilinearly and evaluates the
/// initial samples at the composed foot with monotone bilinear interpolation. `cfg.dx` must
/// equal the x spacing of the data.
pub fn solve_velocity_reg_2d(
    u0: &GridFunction2D,
    fluxes: [&FluxSpec; 2],
    epsilon: f64,
    t_final: f64,
    cfg: &SolverConfig,
) -> Result<Trajectory2D> {
    cfg.validate()?;
    if (u0.dx - cfg.dx).abs() > 1e-12 * cfg.dx {
        return Err(Error::GridMismatch(format!(
            "initial data sampled with dx = {} but the solver is configured for dx = {}",
            u0.dx, cfg.dx
        )));
    }
    if !(t_final > 0.0 && t_final.is_finite()) {
        return Err(Error::InvalidArgument(format!("T must be positive (got {t_final})")));
    }
    let solver = Solver2D {
        u0,
        fluxes,
        kx: Mollifier::build(epsilon, u0.dx)?,
        ky: Mollifier::build(epsilon, u0.dy)?,
    };
    let speed = |f: &FluxSpec| u0.values.iter().fold(0.0f64, |m, &v| m.max(f.fprime(v).abs()));
    let limit = (cfg.cfl * (cfg.dx / speed(fluxes[0]).max(1e-12))).min(cfg.cfl * (u0.dy / speed(fluxes[1]).max(1e-12)));
    let dt = match cfg.dt {
        None => limit,
        Some(dt) if dt > 0.0 && dt <= limit * (1.0 + 1e-12) => dt,
        Some(dt) => return Err(Error::CflViolation { dt, limit }),
    };
    let levels = time_levels(t_final, dt);
    let mut state = solver.initial_state();
    let mut previous = None;
    let mut traj = Trajectory2D {
        times: Vec::new(),
        states: Vec::new(),
        tv: Vec::new(),
        epsilon,
        dt,
        picard_iterations: Vec::new(),
    };
    traj.push(0.0, u0.clone());
    let steps = levels.len() - 1;
    for k in 0..steps {
        let h = levels[k + 1] - levels[k];
        let iters = solver.step(&mut state, &mut previous, h, cfg, levels[k])?;
        traj.picard_iterations.push(iters);
        if (k + 1) % cfg.stride == 0 || k + 1 == steps {
            let s = GridFunction2D {
                values: state.u.clone(),
                ..u0.clone()
            };
            debug_assert!(s.same_grid(u0));
            traj.push(levels[k + 1], s);
        }
    }
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Expr;
    use crate::funcspace::GridFunction1D;
    use crate::nonlocal::solve_nn;

    #[test]
    fn tv_examples() {
        let c = GridFunction2D::from_fn((0.0, 0.0), (0.1, 0.1), 10, 10, |_, _| 0.3).unwrap();
        assert_eq!(tv_2d(&c), 0.0);
        let k = 3;
        let block = GridFunction2D::from_fn((0.0, 0.0), (0.1, 0.1), 10, 10, |x, y| {
            if (0.25..0.55).contains(&x) && (0.25..0.55).contains(&y) {
                1.0
            } else {
                0.0
            }
        })
        .unwrap();
        assert!((tv_2d(&block) - 4.0 * k as f64 * 0.1).abs() < 1e-12);
    }

    #[test]
    fn constant_stays_constant() {
        let u0 = GridFunction2D::from_fn((-1.0, -1.0), (0.05, 0.05), 41, 41, |_, _| 0.6).unwrap();
        let b = FluxSpec::burgers();
        let traj = solve_velocity_reg_2d(&u0, [&b, &b], 0.2, 0.3, &SolverConfig::with_dx(0.05)).unwrap();
        assert!(traj.last().values().iter().all(|&v| v == 0.6));
    }

    #[test]
    fn diagonal_data_stays_symmetric() {
        let u0 = GridFunction2D::from_fn((-1.5, -1.5), (0.03, 0.03), 101, 101, |x, y| 0.5 * (-(x + y)).tanh()).unwrap();
        let b = FluxSpec::burgers();
        let traj = solve_velocity_reg_2d(&u0, [&b, &b], 0.15, 0.4, &SolverConfig::with_dx(0.03)).unwrap();
        let u = traj.last();
        let t = u.transpose();
        for (a, b) in u.values().iter().zip(t.values()) {
            assert!((a - b).abs() <= 1e-10);
        }
        assert!(u.max() <= u0.max() && u.min() >= u0.min());
    }

    #[test]
    fn rows_match_one_dimensional_solver() {
        let dx = 0.02;
        let nx = 301;
        let f = |x: f64| -(2.0 * x).tanh() * 0.8;
        let u2 = GridFunction2D::from_fn((-3.0, -0.1), (dx, 0.025), nx, 9, |x, _| f(x)).unwrap();
        let zero = FluxSpec::from_expressions(Expr::parse("0").unwrap(), Expr::parse("0").unwrap(), 1.0).unwrap();
        let b = FluxSpec::burgers();
        let cfg = SolverConfig::with_dx(dx);
        let t2 = solve_velocity_reg_2d(&u2, [&b, &zero], 0.1, 0.5, &cfg).unwrap();
        let u1 = GridFunction1D::from_fn(-3.0, dx, nx, f).unwrap();
        let t1 = solve_nn(u1, 0.1, 0.5, &cfg).unwrap();
        assert_eq!(t1.picard_iterations(), t2.picard_iterations());
        for j in 0..9 {
            for (a, b) in t2.last().row(j).iter().zip(t1.last().values()) {
                assert!((a - b).abs() <= 1e-10);
            }
        }
    }
}
