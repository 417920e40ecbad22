use serde::{Deserialize, Serialize};

use super::{time_levels, Mode, SolverConfig, Trajectory};
use crate::error::{Error, Result};
use crate::flux::FluxSpec;
use crate::funcspace::{interp_index, sup_norm, Grid1D, GridFunction1D, InitialProfile};
use crate::kernel::Mollifier;

/// Which quantity is mollified in the general-flux equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regularisation {
    /// Velocity `η_ε ∗ f'(u)`.
    Velocity,
    /// Velocity `f'(η_ε ∗ u)`.
    Flux,
}

#[derive(Clone, Copy)]
pub(crate) enum VelocityModel<'a> {
    Nn,
    VelocityReg(&'a FluxSpec),
    FluxReg(&'a FluxSpec),
}

impl VelocityModel<'_> {
    fn mode(&self) -> Mode {
        match self {
            VelocityModel::Nn => Mode::Nn,
            VelocityModel::VelocityReg(_) => Mode::VelocityReg,
            VelocityModel::FluxReg(_) => Mode::FluxReg,
        }
    }

    /// Largest characteristic speed over the sampled data.
    fn max_speed(&self, values: &[f64]) -> f64 {
        match self {
            VelocityModel::Nn => values.iter().fold(0.0, |m, v| m.max(v.abs())),
            VelocityModel::VelocityReg(f) | VelocityModel::FluxReg(f) => {
                values.iter().fold(0.0, |m, &v| m.max(f.fprime(v).abs()))
            }
        }
    }
}

/// Fronts closer than this many cells are merged. Front speeds are bounded by the CFL speed, so
/// two fronts close in by at most `2·cfl ≤ 2` cells per step and cannot cross before the merge.
const MERGE_CELLS: f64 = 2.0;

/// Backward characteristic map with transported discontinuities.
pub(crate) struct CharacteristicMap<'a> {
    profile: &'a InitialProfile,
    model: VelocityModel<'a>,
    kernel: &'a Mollifier,
    grid: Grid1D,
    y: Vec<f64>,
    /// Initial-data segment of each node's foot.
    seg: Vec<u32>,
    fronts: Vec<f64>,
    /// Initial-data segment of each region between fronts; fronts that meet merge and the
    /// segments between them drop out.
    regions: Vec<u32>,
    u: Vec<f64>,
    v: Vec<f64>,
    /// Velocity and step length of the previous step, for the predictor.
    previous: Option<(Vec<f64>, f64)>,
    scratch: Vec<f64>,
    source: Vec<f64>,
}

struct Iterate {
    foot: Vec<f64>,
    y: Vec<f64>,
    seg: Vec<u32>,
    u: Vec<f64>,
    fronts: Vec<f64>,
}

impl<'a> CharacteristicMap<'a> {
    pub(crate) fn new(profile: &'a InitialProfile, model: VelocityModel<'a>, kernel: &'a Mollifier) -> Self {
        let grid = profile.grid();
        let y = grid.nodes();
        let seg: Vec<u32> = y.iter().map(|&x| profile.segment_of(x) as u32).collect();
        let u: Vec<f64> = y
            .iter()
            .zip(&seg)
            .map(|(&x, &s)| profile.eval_in_segment(s as usize, x))
            .collect();
        let fronts: Vec<f64> = profile.jumps().iter().map(|j| j.position).collect();
        let regions = (0..=fronts.len() as u32).collect();
        let mut map = CharacteristicMap {
            profile,
            model,
            kernel,
            grid,
            y,
            seg,
            fronts,
            regions,
            u,
            v: vec![0.0; grid.n],
            previous: None,
            scratch: Vec::new(),
            source: Vec::new(),
        };
        let mut v = std::mem::take(&mut map.v);
        map.velocity(&map.u.clone(), &map.seg.clone(), &map.fronts.clone(), &mut v);
        map.v = v;
        map
    }

    pub(crate) fn values(&self) -> &[f64] {
        &self.u
    }

    pub(crate) fn fronts(&self) -> &[f64] {
        &self.fronts
    }

    /// One-sided limits of each front: the data value at the inner end of the segment on
    /// either side.
    pub(crate) fn limits(&self) -> Vec<(f64, f64)> {
        let jumps = self.profile.jumps();
        self.regions
            .windows(2)
            .map(|w| {
                let (a, b) = (w[0] as usize, w[1] as usize);
                (
                    self.profile.eval_in_segment(a, jumps[a].position),
                    self.profile.eval_in_segment(b, jumps[b - 1].position),
                )
            })
            .collect()
    }

    /// Merges fronts that have come within `MERGE_CELLS` cells of each other.
    fn merge_fronts(&mut self) {
        let gap = MERGE_CELLS * self.grid.dx;
        let mut k = 0;
        while k + 1 < self.fronts.len() {
            if self.fronts[k + 1] - self.fronts[k] < gap {
                self.fronts[k] = 0.5 * (self.fronts[k] + self.fronts[k + 1]);
                self.fronts.remove(k + 1);
                self.regions.remove(k + 1);
                k = k.saturating_sub(1);
            } else {
                k += 1;
            }
        }
    }

    /// Velocity field for the state `(u, seg, fronts)`. Cells cut by a front use the cell
    /// average of the transported quantity, with the cut position taken from the front.
    fn velocity(&mut self, u: &[f64], seg: &[u32], fronts: &[f64], out: &mut [f64]) {
        let n = u.len();
        self.source.clear();
        match self.model {
            VelocityModel::Nn | VelocityModel::FluxReg(_) => self.source.extend_from_slice(u),
            VelocityModel::VelocityReg(f) => self.source.extend(u.iter().map(|&v| f.fprime(v))),
        }
        let mut touched: Option<usize> = None;
        for (k, &xf) in fronts.iter().enumerate() {
            let s = (xf - self.grid.x0) / self.grid.dx;
            let i = s.round();
            if !(i >= 1.0 && i <= (n - 2) as f64) {
                continue;
            }
            let i = i as usize;
            if touched == Some(i) {
                continue;
            }
            touched = Some(i);
            let left_fraction = (s - i as f64 + 0.5).clamp(0.0, 1.0);
            let g = &self.source;
            let (gl, gr) = if seg[i] < self.regions[k + 1] {
                (g[i], g[i + 1])
            } else {
                (g[i - 1], g[i])
            };
            let avg = left_fraction * gl + (1.0 - left_fraction) * gr;
            self.source[i] = avg;
        }
        self.kernel.convolve_slice(&self.source, out, &mut self.scratch);
        if let VelocityModel::FluxReg(f) = self.model {
            for v in out.iter_mut() {
                *v = f.fprime(*v);
            }
        }
    }

    fn map_at(&self, foot: f64, s_f: u32) -> f64 {
        let n = self.grid.n;
        let s = (foot - self.grid.x0) / self.grid.dx;
        if !(s > 0.0) {
            return self.y[0];
        }
        if s >= (n - 1) as f64 {
            return self.y[n - 1];
        }
        let i0 = s as usize;
        let t = s - i0 as f64;
        let (y, seg) = (&self.y, &self.seg);
        let a_ok = seg[i0] == s_f;
        let b_ok = seg[i0 + 1] == s_f;
        if a_ok && b_ok {
            y[i0] + t * (y[i0 + 1] - y[i0])
        } else if a_ok {
            if i0 >= 1 && seg[i0 - 1] == s_f {
                y[i0] + t * (y[i0] - y[i0 - 1])
            } else {
                y[i0]
            }
        } else if b_ok {
            if i0 + 2 < n && seg[i0 + 2] == s_f {
                y[i0 + 1] - (1.0 - t) * (y[i0 + 2] - y[i0 + 1])
            } else {
                y[i0 + 1]
            }
        } else {
            y[i0]
        }
    }

    /// Evaluates the composed map at the given feet.
    fn evaluate(&self, it: &mut Iterate, dt: f64) {
        let n = self.grid.n;
        for i in 0..n {
            let foot = it.foot[i];
            let s_f = self.regions[self.fronts.partition_point(|&xf| xf < foot)];
            let yv = self.map_at(foot, s_f);
            it.y[i] = yv;
            it.seg[i] = s_f;
            it.u[i] = self.profile.eval_in_segment(s_f as usize, yv);
        }
        for (k, &old) in self.fronts.iter().enumerate() {
            let first_right = it.seg.partition_point(|&s| s < self.regions[k + 1]);
            it.fronts[k] = if first_right >= 1 && first_right < n {
                let i = first_right - 1;
                let (fa, fb) = (it.foot[i], it.foot[i + 1]);
                let frac = if fb > fa { ((old - fa) / (fb - fa)).clamp(0.0, 1.0) } else { 0.5 };
                let x = self.grid.x(i) + frac * self.grid.dx;
                x.min(self.grid.x(i + 1) - 1e-12 * self.grid.dx).max(self.grid.x(i))
            } else {
                old + dt * interp_index(&self.v, (old - self.grid.x0) / self.grid.dx)
            };
        }
    }

    /// Advances by `dt`; returns the number of Picard iterations used.
    pub(crate) fn step(&mut self, dt: f64, cfg: &SolverConfig, time: f64) -> Result<usize> {
        let n = self.grid.n;
        let (x0, dx) = (self.grid.x0, self.grid.dx);
        let v_n = self.v.clone();
        // Linear extrapolation of the velocity in time seeds the fixed-point iteration.
        let mut vj = match &self.previous {
            Some((v_prev, h_prev)) => {
                let r = dt / h_prev;
                v_n.iter().zip(v_prev).map(|(a, b)| a + r * (a - b)).collect()
            }
            None => v_n.clone(),
        };
        let mut foot: Vec<f64> = (0..n).map(|i| self.grid.x(i) - 0.5 * dt * (v_n[i] + vj[i])).collect();
        let mut cur_u = self.u.clone();
        let mut cur_seg = self.seg.clone();
        let mut cur_fronts = self.fronts.clone();
        let mut it = Iterate {
            foot: vec![0.0; n],
            y: vec![0.0; n],
            seg: vec![0; n],
            u: vec![0.0; n],
            fronts: vec![0.0; self.fronts.len()],
        };
        let mut change = f64::INFINITY;
        for iter in 1..=cfg.picard_max_iters {
            for i in 0..n {
                let back = interp_index(&v_n, (foot[i] - x0) / dx);
                it.foot[i] = self.grid.x(i) - 0.5 * dt * (vj[i] + back);
            }
            self.evaluate(&mut it, dt);
            change = 0.0;
            for i in 0..n {
                change = change.max((it.u[i] - cur_u[i]).abs()).max((it.foot[i] - foot[i]).abs());
            }
            for (a, b) in it.fronts.iter().zip(&cur_fronts) {
                change = change.max((a - b).abs());
            }
            std::mem::swap(&mut foot, &mut it.foot);
            std::mem::swap(&mut cur_u, &mut it.u);
            std::mem::swap(&mut cur_seg, &mut it.seg);
            std::mem::swap(&mut cur_fronts, &mut it.fronts);
            if change < cfg.picard_tol {
                std::mem::swap(&mut self.y, &mut it.y);
                self.u = cur_u;
                self.seg = cur_seg;
                self.fronts = cur_fronts;
                self.merge_fronts();
                let mut v = std::mem::take(&mut self.v);
                let (u, seg, fr) = (self.u.clone(), self.seg.clone(), self.fronts.clone());
                self.velocity(&u, &seg, &fr, &mut v);
                self.v = v;
                self.previous = Some((v_n, dt));
                return Ok(iter);
            }
            self.velocity(&cur_u, &cur_seg, &cur_fronts, &mut vj);
        }
        Err(Error::PicardDivergence {
            iterations: cfg.picard_max_iters,
            time,
            change,
        })
    }
}

fn check_grid(profile: &InitialProfile, cfg: &SolverConfig) -> Result<()> {
    let dx = profile.grid().dx;
    if (dx - cfg.dx).abs() > 1e-12 * cfg.dx {
        return Err(Error::GridMismatch(format!(
            "initial data sampled with dx = {dx} but the solver is configured for dx = {}",
            cfg.dx
        )));
    }
    Ok(())
}

fn run(profile: &InitialProfile, model: VelocityModel<'_>, epsilon: f64, t_final: f64, cfg: &SolverConfig) -> Result<Trajectory> {
    cfg.validate()?;
    check_grid(profile, cfg)?;
    if !(t_final > 0.0 && t_final.is_finite()) {
        return Err(Error::InvalidArgument(format!("T must be positive (got {t_final})")));
    }
    let kernel = Mollifier::build(epsilon, profile.grid().dx)?;
    let dt = cfg.resolve_dt(model.max_speed(profile.samples().values()))?;
    let levels = time_levels(t_final, dt);
    let mut map = CharacteristicMap::new(profile, model, &kernel);
    let grid = profile.grid();
    let mut traj = Trajectory::new(epsilon, model.mode(), dt);
    traj.push(
        0.0,
        GridFunction1D::on_grid(&grid, map.values().to_vec())?,
        map.fronts().to_vec(),
        map.limits(),
    );
    let steps = levels.len() - 1;
    for k in 0..steps {
        let h = levels[k + 1] - levels[k];
        let iters = map.step(h, cfg, levels[k])?;
        traj.record_iterations(iters);
        if (k + 1) % cfg.stride == 0 || k + 1 == steps {
            traj.push(
                levels[k + 1],
                GridFunction1D::on_grid(&grid, map.values().to_vec())?,
                map.fronts().to_vec(),
                map.limits(),
            );
        }
    }
    Ok(traj)
}

/// One self-consistent semi-Lagrangian step of the NN equation from the grid state `u_n`.
pub fn step_nn(u_n: &GridFunction1D, m: &Mollifier, dt: f64, cfg: &SolverConfig) -> Result<GridFunction1D> {
    cfg.validate()?;
    if (u_n.dx() - m.dx()).abs() > 1e-12 * m.dx() {
        return Err(Error::GridMismatch(format!(
            "mollifier built for dx = {} applied to grid with dx = {}",
            m.dx(),
            u_n.dx()
        )));
    }
    let limit = cfg.cfl * (u_n.dx() / sup_norm(u_n).max(1e-12));
    if !(dt > 0.0) || dt > limit * (1.0 + 1e-12) {
        return Err(Error::CflViolation { dt, limit });
    }
    let profile = InitialProfile::from(u_n.clone());
    let mut map = CharacteristicMap::new(&profile, VelocityModel::Nn, m);
    map.step(dt, cfg, 0.0)?;
    GridFunction1D::on_grid(&u_n.grid(), map.values().to_vec())
}

/// Solves the NN equation up to `t_final`.
pub fn solve_nn(u0: impl Into<InitialProfile>, epsilon: f64, t_final: f64, cfg: &SolverConfig) -> Result<Trajectory> {
    let profile = u0.into();
    run(&profile, VelocityModel::Nn, epsilon, t_final, cfg)
}

/// Solves the velocity- or flux-regularised equation for a general flux.
pub fn solve_general(
    u0: impl Into<InitialProfile>,
    flux: &FluxSpec,
    epsilon: f64,
    t_final: f64,
    cfg: &SolverConfig,
    mode: Regularisation,
) -> Result<Trajectory> {
    let profile = u0.into();
    let model = match mode {
        Regularisation::Velocity => VelocityModel::VelocityReg(flux),
        Regularisation::Flux => VelocityModel::FluxReg(flux),
    };
    run(&profile, model, epsilon, t_final, cfg)
}
