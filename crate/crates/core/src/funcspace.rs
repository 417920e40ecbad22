//! Uniform 1D grids, grid functions, norms and initial data.

use crate::error::{Error, Result};
use crate::expr::Expr;

/// A uniform grid `x_i = x0 + i·dx`, `i = 0..n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    pub x0: f64,
    pub dx: f64,
    pub n: usize,
}

impl Grid1D {
    pub fn new(x0: f64, dx: f64, n: usize) -> Result<Self> {
        if !(dx.is_finite() && dx > 0.0) || !x0.is_finite() {
            return Err(Error::InvalidArgument(format!("bad grid origin/spacing ({x0}, {dx})")));
        }
        if n < 2 {
            return Err(Error::InvalidArgument("a grid needs at least two nodes".into()));
        }
        Ok(Grid1D { x0, dx, n })
    }

    /// Grid from `a` to (approximately) `b` with spacing `dx`; `a` is always a node.
    pub fn covering(a: f64, b: f64, dx: f64) -> Result<Self> {
        if !(b > a) {
            return Err(Error::InvalidArgument(format!("empty interval [{a}, {b}]")));
        }
        let cells = ((b - a) / dx - 1e-9).ceil() as usize;
        Grid1D::new(a, dx, cells + 1)
    }

    /// Grid on `[-half_width, half_width]` that contains 0 as a node.
    pub fn symmetric(half_width: f64, dx: f64) -> Result<Self> {
        let half_cells = (half_width / dx - 1e-9).ceil() as usize;
        Grid1D::new(-(half_cells as f64) * dx, dx, 2 * half_cells + 1)
    }

    #[inline]
    pub fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.dx
    }

    /// Index `c` with `x_c ≤ a < x_{c+1}`, consistent with the rounding of [`Grid1D::x`].
    pub fn cell_of(&self, a: f64) -> usize {
        let last = self.n - 2;
        let mut c = (((a - self.x0) / self.dx).floor().max(0.0) as usize).min(last);
        while c < last && self.x(c + 1) <= a {
            c += 1;
        }
        while c > 0 && self.x(c) > a {
            c -= 1;
        }
        c
    }

    pub fn x_last(&self) -> f64 {
        self.x(self.n - 1)
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.x(i)).collect()
    }

    pub fn same_as(&self, other: &Grid1D) -> bool {
        self.n == other.n
            && (self.dx - other.dx).abs() <= 1e-12 * self.dx
            && (self.x0 - other.x0).abs() <= 1e-9 * self.dx
    }
}

/// Interpolates at fractional index `s` with constant extension; the result never leaves the
/// range of the two bracketing values.
#[inline]
pub fn interp_index(values: &[f64], s: f64) -> f64 {
    let n = values.len();
    if !(s > 0.0) {
        return values[0];
    }
    let last = (n - 1) as f64;
    if s >= last {
        return values[n - 1];
    }
    let i = s as usize;
    let t = s - i as f64;
    let a = values[i];
    let b = values[i + 1];
    let v = a + t * (b - a);
    if a <= b {
        v.clamp(a, b)
    } else {
        v.clamp(b, a)
    }
}

/// A function sampled on a uniform 1D grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction1D {
    x0: f64,
    dx: f64,
    values: Vec<f64>,
}

impl GridFunction1D {
    pub fn new(x0: f64, dx: f64, values: Vec<f64>) -> Result<Self> {
        Grid1D::new(x0, dx, values.len())?;
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!("non-finite value at index {i}")));
        }
        Ok(GridFunction1D { x0, dx, values })
    }

    pub fn on_grid(grid: &Grid1D, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n {
            return Err(Error::GridMismatch(format!(
                "{} values for a grid of {} nodes",
                values.len(),
                grid.n
            )));
        }
        Self::new(grid.x0, grid.dx, values)
    }

    pub fn from_fn(x0: f64, dx: f64, n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(x0, dx, (0..n).map(|i| f(x0 + i as f64 * dx)).collect())
    }

    pub fn constant(grid: &Grid1D, c: f64) -> Result<Self> {
        Self::on_grid(grid, vec![c; grid.n])
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn grid(&self) -> Grid1D {
        Grid1D {
            x0: self.x0,
            dx: self.dx,
            n: self.values.len(),
        }
    }

    #[inline]
    pub fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.dx
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn min(&self) -> f64 {
        self.values.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Applies `f` pointwise.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(self.x0, self.dx, self.values.iter().map(|&v| f(v)).collect())
    }

    /// Index of the node nearest to `x`, clamped to the grid.
    pub fn nearest_index(&self, x: f64) -> usize {
        let s = ((x - self.x0) / self.dx).round();
        s.clamp(0.0, (self.len() - 1) as f64) as usize
    }

    /// Restriction to the nodes lying in `[a, b]`.
    pub fn window(&self, a: f64, b: f64) -> Result<Self> {
        let tol = 1e-9 * self.dx;
        let idx: Vec<usize> = (0..self.len())
            .filter(|&i| self.x(i) >= a - tol && self.x(i) <= b + tol)
            .collect();
        if idx.len() < 2 {
            return Err(Error::InvalidArgument(format!("window [{a}, {b}] holds fewer than two nodes")));
        }
        Self::new(self.x(idx[0]), self.dx, idx.iter().map(|&i| self.values[i]).collect())
    }

    fn check_same_grid(&self, other: &Self) -> Result<()> {
        if self.grid().same_as(&other.grid()) {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!(
                "grids ({}, {}, {}) and ({}, {}, {}) differ",
                self.x0,
                self.dx,
                self.len(),
                other.x0,
                other.dx,
                other.len()
            )))
        }
    }
}

/// Monotone piecewise-linear interpolation with constant extension.
pub fn interpolate(u: &GridFunction1D, x: f64) -> f64 {
    interp_index(u.values(), (x - u.x0()) / u.dx())
}

/// Discrete total variation `Σ |u_{i+1} - u_i|`.
pub fn total_variation(u: &GridFunction1D) -> f64 {
    tv_slice(u.values())
}

pub(crate) fn tv_slice(v: &[f64]) -> f64 {
    v.windows(2).map(|w| (w[1] - w[0]).abs()).sum()
}

pub fn sup_norm(u: &GridFunction1D) -> f64 {
    u.values().iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Rectangle-rule L¹ distance on a shared grid.
pub fn l1_distance(u: &GridFunction1D, v: &GridFunction1D) -> Result<f64> {
    u.check_same_grid(v)?;
    Ok(u.values().iter().zip(v.values()).map(|(a, b)| (a - b).abs()).sum::<f64>() * u.dx())
}

/// Rectangle-rule L¹ distance restricted to the nodes in `[a, b]`.
pub fn l1_distance_on(u: &GridFunction1D, v: &GridFunction1D, a: f64, b: f64) -> Result<f64> {
    u.check_same_grid(v)?;
    let tol = 1e-9 * u.dx();
    Ok((0..u.len())
        .filter(|&i| u.x(i) >= a - tol && u.x(i) <= b + tol)
        .map(|i| (u.values()[i] - v.values()[i]).abs())
        .sum::<f64>()
        * u.dx())
}

/// Sup distance restricted to the nodes in `[a, b]`.
pub fn sup_distance_on(u: &GridFunction1D, v: &GridFunction1D, a: f64, b: f64) -> Result<f64> {
    u.check_same_grid(v)?;
    let tol = 1e-9 * u.dx();
    Ok((0..u.len())
        .filter(|&i| u.x(i) >= a - tol && u.x(i) <= b + tol)
        .map(|i| (u.values()[i] - v.values()[i]).abs())
        .fold(0.0, f64::max))
}

/// A grid function with tracked discontinuities: linear between nodes, except in cells cut by a
/// front, where each side takes the value of its own node. Each front carries fixed one-sided
/// limits.
#[derive(Debug, Clone, Copy)]
pub struct FrontResolved<'a> {
    pub state: &'a GridFunction1D,
    /// Front positions, increasing.
    pub fronts: &'a [f64],
    /// `(left, right)` limits of each front.
    pub limits: &'a [(f64, f64)],
}

impl FrontResolved<'_> {
    pub fn eval(&self, x: f64) -> f64 {
        let u = self.state;
        let s = (x - u.x0()) / u.dx();
        let n = u.len();
        if !(s > 0.0) || s >= (n - 1) as f64 {
            return interpolate(u, x);
        }
        let i = s as usize;
        let (a, b) = (u.x(i), u.x(i + 1));
        let k = self.fronts.partition_point(|&f| f < a);
        match self.fronts.get(k) {
            Some(&f) if f < b => {
                if x < f {
                    u.values()[i]
                } else {
                    u.values()[i + 1]
                }
            }
            _ => interpolate(u, x),
        }
    }

    /// L¹ distance to another front-resolved function on the same grid. Cells cut by a front of
    /// either function use the midpoint rule on `refinement` sub-cells; the remaining cells are
    /// integrated exactly, both functions being linear there.
    pub fn l1_distance(&self, other: &FrontResolved<'_>, refinement: usize) -> Result<f64> {
        let (u, w) = (self.state, other.state);
        u.check_same_grid(w)?;
        let n = u.len();
        let dx = u.dx();
        let mut cut: Vec<usize> = self
            .fronts
            .iter()
            .chain(other.fronts)
            .map(|&f| (f - u.x0()) / dx)
            .filter(|&s| s > 0.0 && s < (n - 1) as f64)
            .map(|s| s as usize)
            .collect();
        cut.sort_unstable();
        cut.dedup();
        let (a, b) = (u.values(), w.values());
        let mut total = 0.0;
        for i in 0..n - 1 {
            if cut.binary_search(&i).is_ok() {
                let h = dx / refinement as f64;
                total += (0..refinement)
                    .map(|j| {
                        let x = u.x(i) + (j as f64 + 0.5) * h;
                        (self.eval(x) - other.eval(x)).abs()
                    })
                    .sum::<f64>()
                    * h;
            } else {
                let (d0, d1) = (a[i] - b[i], a[i + 1] - b[i + 1]);
                total += if d0 * d1 >= 0.0 {
                    0.5 * dx * (d0.abs() + d1.abs())
                } else {
                    0.5 * dx * (d0 * d0 + d1 * d1) / (d0.abs() + d1.abs())
                };
            }
        }
        Ok(total)
    }

    /// Variation of the node values with the front limits inserted in the cells they cut.
    pub fn total_variation(&self) -> f64 {
        let v = self.state.values();
        let mut seq = Vec::with_capacity(v.len() + 2 * self.fronts.len());
        let mut k = 0;
        for i in 0..v.len() {
            let x = self.state.x(i);
            while k < self.fronts.len() && self.fronts[k] < x {
                if let Some(&(l, r)) = self.limits.get(k) {
                    if i > 0 {
                        seq.push(l);
                        seq.push(r);
                    }
                }
                k += 1;
            }
            seq.push(v[i]);
        }
        seq.windows(2).map(|w| (w[1] - w[0]).abs()).sum()
    }
}

/// Initial data that can be evaluated anywhere, with known candidate jump locations.
pub trait InitialData: Send + Sync {
    /// Value at `x`; left-continuous at breakpoints.
    fn eval(&self, x: f64) -> f64;

    /// Points where the data may be discontinuous, increasing.
    fn breakpoints(&self) -> Vec<f64> {
        Vec::new()
    }

    /// Value just to the right of `x`.
    fn eval_right(&self, x: f64) -> f64 {
        self.eval(x)
    }

    /// Breakpoints where the left and right limits actually differ.
    fn jumps(&self) -> Vec<f64> {
        self.breakpoints()
            .into_iter()
            .filter(|&a| {
                let (l, r) = (self.eval(a), self.eval_right(a));
                (l - r).abs() > 1e-12 * (1.0 + l.abs().max(r.abs()))
            })
            .collect()
    }
}

/// Two-state Riemann data, `u_L` for `x ≤ 0` and `u_R` otherwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiemannData {
    pub ul: f64,
    pub ur: f64,
}

impl RiemannData {
    pub fn new(ul: f64, ur: f64) -> Self {
        RiemannData { ul, ur }
    }
}

impl InitialData for RiemannData {
    fn eval(&self, x: f64) -> f64 {
        if x <= 0.0 {
            self.ul
        } else {
            self.ur
        }
    }

    fn breakpoints(&self) -> Vec<f64> {
        vec![0.0]
    }

    fn eval_right(&self, x: f64) -> f64 {
        if x < 0.0 {
            self.ul
        } else {
            self.ur
        }
    }
}

/// Data given by a closed-form expression in `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedForm {
    pub expr: Expr,
}

impl ClosedForm {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(ClosedForm { expr: Expr::parse(text)? })
    }
}

impl InitialData for ClosedForm {
    fn eval(&self, x: f64) -> f64 {
        self.expr.eval(x)
    }
}

/// Piecewise data: piece `k` applies on `(a_k, a_{k+1}]` with `a_0 = -∞`, `a_{n+1} = +∞`.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseInitialData {
    breakpoints: Vec<f64>,
    pieces: Vec<Expr>,
    lipschitz_c: f64,
}

impl PiecewiseInitialData {
    /// Validates ordering, piece count and the Lipschitz bound (by sampling each piece).
    pub fn new(breakpoints: Vec<f64>, pieces: Vec<Expr>, lipschitz_c: f64) -> Result<Self> {
        if pieces.len() != breakpoints.len() + 1 {
            return Err(Error::InvalidArgument(format!(
                "{} breakpoints need {} pieces, got {}",
                breakpoints.len(),
                breakpoints.len() + 1,
                pieces.len()
            )));
        }
        if breakpoints.iter().any(|a| !a.is_finite()) || breakpoints.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidArgument("breakpoints must be finite and strictly increasing".into()));
        }
        if !(lipschitz_c >= 0.0 && lipschitz_c.is_finite()) {
            return Err(Error::InvalidArgument("Lipschitz constant must be nonnegative".into()));
        }
        let data = PiecewiseInitialData {
            breakpoints,
            pieces,
            lipschitz_c,
        };
        for k in 0..data.pieces.len() {
            let (lo, hi) = data.piece_interval(k);
            let samples = 400;
            let h = (hi - lo) / samples as f64;
            let mut prev = data.pieces[k].eval(lo);
            for s in 1..=samples {
                let v = data.pieces[k].eval(lo + s as f64 * h);
                if !v.is_finite() {
                    return Err(Error::InvalidArgument(format!("piece {k} is not finite on its interval")));
                }
                if (v - prev).abs() > lipschitz_c * h * (1.0 + 1e-6) + 1e-12 {
                    return Err(Error::InvalidArgument(format!(
                        "piece {k} is steeper than the declared Lipschitz constant {lipschitz_c}"
                    )));
                }
                prev = v;
            }
        }
        Ok(data)
    }

    /// Piece-wise constant data: `values[k]` on the k-th interval.
    pub fn piecewise_constant(breakpoints: Vec<f64>, values: &[f64]) -> Result<Self> {
        Self::new(breakpoints, values.iter().map(|&v| Expr::Num(v)).collect(), 0.0)
    }

    /// The odd counterexample datum: zero for |x| ≥ 2, `-sgn(x)` for |x| ≤ 1, linear in between.
    pub fn counterexample() -> Self {
        let pieces = ["0", "x + 2", "1", "-1", "x - 2", "0"]
            .iter()
            .map(|s| Expr::parse(s).expect("static expression"))
            .collect();
        Self::new(vec![-2.0, -1.0, 0.0, 1.0, 2.0], pieces, 1.0).expect("static data")
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[Expr] {
        &self.pieces
    }

    pub fn lipschitz_c(&self) -> f64 {
        self.lipschitz_c
    }

    fn piece_interval(&self, k: usize) -> (f64, f64) {
        let n = self.breakpoints.len();
        let span = if n >= 2 {
            self.breakpoints[n - 1] - self.breakpoints[0]
        } else {
            1.0
        }
        .max(1.0);
        let lo = if k == 0 {
            self.breakpoints.first().map_or(-1.0, |a| a - span)
        } else {
            self.breakpoints[k - 1]
        };
        let hi = if k == n {
            self.breakpoints.last().map_or(1.0, |a| a + span)
        } else {
            self.breakpoints[k]
        };
        (lo, hi)
    }

    fn piece_index(&self, x: f64) -> usize {
        self.breakpoints.partition_point(|&a| a < x)
    }

    /// Minimum gap between consecutive breakpoints.
    pub fn min_gap(&self) -> Option<f64> {
        self.breakpoints.windows(2).map(|w| w[1] - w[0]).reduce(f64::min)
    }
}

impl InitialData for PiecewiseInitialData {
    fn eval(&self, x: f64) -> f64 {
        self.pieces[self.piece_index(x)].eval(x)
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.breakpoints.clone()
    }

    fn eval_right(&self, x: f64) -> f64 {
        self.pieces[self.breakpoints.partition_point(|&a| a <= x)].eval(x)
    }
}

/// Data translated to the right by `shift`.
pub struct Shifted<'a> {
    pub inner: &'a dyn InitialData,
    pub shift: f64,
}

impl InitialData for Shifted<'_> {
    fn eval(&self, x: f64) -> f64 {
        self.inner.eval(x - self.shift)
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.inner.breakpoints().into_iter().map(|a| a + self.shift).collect()
    }

    fn eval_right(&self, x: f64) -> f64 {
        self.inner.eval_right(x - self.shift)
    }
}

/// Samples data at the grid nodes (left-continuous at breakpoints).
pub fn sample(data: &dyn InitialData, grid: &Grid1D) -> Result<GridFunction1D> {
    for w in data.breakpoints().windows(2) {
        if w[1] - w[0] < 4.0 * grid.dx * (1.0 - 1e-9) {
            return Err(Error::BreakpointsTooClose { left: w[0], right: w[1] });
        }
    }
    GridFunction1D::on_grid(grid, grid.nodes().into_iter().map(|x| data.eval(x)).collect())
}

/// A jump of the initial data lying between nodes `cell` and `cell + 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpSite {
    pub position: f64,
    pub cell: usize,
}

/// Sampled initial data together with the locations of its discontinuities.
///
/// Between the two nodes around a jump the profile is piecewise constant (left node value up to
/// the jump, right node value after it); elsewhere it is linear between nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialProfile {
    samples: GridFunction1D,
    jumps: Vec<JumpSite>,
}

impl From<GridFunction1D> for InitialProfile {
    fn from(samples: GridFunction1D) -> Self {
        InitialProfile {
            samples,
            jumps: Vec::new(),
        }
    }
}

impl InitialProfile {
    pub fn from_data(data: &dyn InitialData, grid: &Grid1D) -> Result<Self> {
        let samples = sample(data, grid)?;
        let mut jumps = Vec::new();
        for a in data.jumps() {
            let s = (a - grid.x0) / grid.dx;
            if s < 0.0 || s >= (grid.n - 1) as f64 {
                continue;
            }
            jumps.push(JumpSite {
                position: a,
                cell: grid.cell_of(a),
            });
        }
        Ok(InitialProfile { samples, jumps })
    }

    pub fn with_jumps(samples: GridFunction1D, positions: &[f64]) -> Result<Self> {
        let grid = samples.grid();
        let mut jumps = Vec::new();
        let mut last_cell: Option<usize> = None;
        for &a in positions {
            let s = (a - grid.x0) / grid.dx;
            if !(s >= 0.0 && s < (grid.n - 1) as f64) {
                return Err(Error::InvalidArgument(format!("jump at {a} lies outside the grid")));
            }
            let cell = grid.cell_of(a);
            if last_cell.is_some_and(|c| cell <= c) {
                return Err(Error::InvalidArgument("jumps must be increasing and in distinct cells".into()));
            }
            last_cell = Some(cell);
            jumps.push(JumpSite { position: a, cell });
        }
        Ok(InitialProfile { samples, jumps })
    }

    pub fn samples(&self) -> &GridFunction1D {
        &self.samples
    }

    pub fn jumps(&self) -> &[JumpSite] {
        &self.jumps
    }

    pub fn grid(&self) -> Grid1D {
        self.samples.grid()
    }

    /// Evaluates the profile at `y`, restricted to segment `seg` (the region right of the
    /// first `seg` jumps and left of the others). `y` is clamped into that segment.
    pub fn eval_in_segment(&self, seg: usize, y: f64) -> f64 {
        let g = &self.samples;
        let s = (y - g.x0()) / g.dx();
        if seg > 0 {
            let c = self.jumps[seg - 1].cell;
            if s <= (c + 1) as f64 {
                return g.values()[c + 1];
            }
        }
        if let Some(j) = self.jumps.get(seg) {
            if s >= j.cell as f64 {
                return g.values()[j.cell];
            }
        }
        interp_index(g.values(), s)
    }

    /// Segment index of a point `y` of the initial line.
    pub fn segment_of(&self, y: f64) -> usize {
        self.jumps.partition_point(|j| j.position < y)
    }

    /// Evaluates the profile at `y` using the segment that contains `y`.
    pub fn eval(&self, y: f64) -> f64 {
        self.eval_in_segment(self.segment_of(y), y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn riemann_sampling() {
        let g = Grid1D::covering(-2.0, 2.0, 0.5).unwrap();
        let u = sample(&RiemannData::new(1.0, 0.0), &g).unwrap();
        assert_eq!(u.values(), &[1.0, 1.0, 1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn tanh_sup_norm() {
        let g = Grid1D::covering(-10.0, 10.0, 1e-3).unwrap();
        let u = sample(&ClosedForm::parse("-tanh(x)").unwrap(), &g).unwrap();
        assert!((sup_norm(&u) - 10f64.tanh()).abs() < 1e-12);
    }

    #[test]
    fn sine_total_variation() {
        let n = 6001;
        let u = GridFunction1D::from_fn(0.0, 2.0 * std::f64::consts::PI / 6000.0, n, f64::sin).unwrap();
        assert!((total_variation(&u) - 4.0).abs() < 1e-5);
    }

    #[test]
    fn l1_of_steps() {
        let g = Grid1D::covering(-2.0, 2.0, 0.01).unwrap();
        let a = sample(&RiemannData::new(1.0, 0.0), &g).unwrap();
        let b = sample(&RiemannData::new(0.0, 0.0), &g).unwrap();
        assert!((l1_distance(&a, &b).unwrap() - 2.0).abs() <= 0.01 + 1e-12);
        assert_eq!(l1_distance(&a, &a).unwrap(), 0.0);
        let c = GridFunction1D::new(0.0, 0.01, vec![0.0; 5]).unwrap();
        assert!(l1_distance(&a, &c).is_err());
    }

    #[test]
    fn interpolation_examples() {
        let u = GridFunction1D::new(0.0, 1.0, vec![0.0, 1.0, 3.0]).unwrap();
        assert_eq!(interpolate(&u, 1.0), 1.0);
        assert_eq!(interpolate(&u, 0.5), 0.5);
        assert_eq!(interpolate(&u, 7.0), 3.0);
        assert_eq!(interpolate(&u, -7.0), 0.0);
    }

    #[test]
    fn close_breakpoints_rejected() {
        let d = PiecewiseInitialData::piecewise_constant(vec![0.0, 0.03], &[1.0, 0.0, 1.0]).unwrap();
        let g = Grid1D::covering(-1.0, 1.0, 0.01).unwrap();
        assert!(matches!(sample(&d, &g), Err(Error::BreakpointsTooClose { .. })));
    }

    #[test]
    fn counterexample_jumps_only_at_origin() {
        let d = PiecewiseInitialData::counterexample();
        assert_eq!(d.jumps(), vec![0.0]);
        assert_eq!(d.eval(0.0), 1.0);
        assert_eq!(d.eval_right(0.0), -1.0);
        assert_eq!(d.eval(-1.5), 0.5);
        assert_eq!(d.eval(3.0), 0.0);
    }

    #[test]
    fn steep_piece_rejected() {
        let pieces = vec![Expr::parse("0").unwrap(), Expr::parse("3*x").unwrap()];
        assert!(PiecewiseInitialData::new(vec![0.0], pieces, 1.0).is_err());
    }

    #[test]
    fn profile_segments() {
        let g = Grid1D::covering(-1.0, 1.0, 0.1).unwrap();
        let p = InitialProfile::from_data(&RiemannData::new(1.0, 0.0), &g).unwrap();
        assert_eq!(p.jumps().len(), 1);
        assert_eq!(p.eval(-0.05), 1.0);
        assert_eq!(p.eval(0.0), 1.0);
        assert_eq!(p.eval(0.03), 0.0);
        assert_eq!(p.eval_in_segment(0, 0.5), 1.0);
        assert_eq!(p.eval_in_segment(1, -0.5), 0.0);
    }
}
