use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::flux::FluxSpec;
use crate::funcspace::{Grid1D, GridFunction1D, PiecewiseInitialData, RiemannData};

/// Piecewise-constant function: `values[k]` on `(breakpoints[k-1], breakpoints[k]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseConstant {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

impl PiecewiseConstant {
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if values.len() != breakpoints.len() + 1 {
            return Err(Error::NotPiecewiseConstant(format!(
                "{} breakpoints need {} values, got {}",
                breakpoints.len(),
                breakpoints.len() + 1,
                values.len()
            )));
        }
        if breakpoints.windows(2).any(|w| !(w[0] < w[1])) || breakpoints.iter().any(|b| !b.is_finite()) {
            return Err(Error::NotPiecewiseConstant("breakpoints must be finite and increasing".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NotPiecewiseConstant("values must be finite".into()));
        }
        Ok(PiecewiseConstant { breakpoints, values })
    }

    /// Cell averages of a grid function approximated by its node values, with jumps at midpoints.
    pub fn from_cells(u: &GridFunction1D) -> Self {
        let breakpoints = (0..u.len() - 1).map(|i| u.x(i) + 0.5 * u.dx()).collect();
        PiecewiseConstant {
            breakpoints,
            values: u.values().to_vec(),
        }
    }

    pub fn from_riemann(d: RiemannData) -> Self {
        PiecewiseConstant {
            breakpoints: vec![0.0],
            values: vec![d.ul, d.ur],
        }
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.values[self.breakpoints.partition_point(|&b| b < x)]
    }

    fn range(&self) -> f64 {
        let lo = self.values.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        hi - lo
    }
}

impl TryFrom<&PiecewiseInitialData> for PiecewiseConstant {
    type Error = Error;

    fn try_from(d: &PiecewiseInitialData) -> Result<Self> {
        let values = d
            .pieces()
            .iter()
            .enumerate()
            .map(|(k, e)| {
                e.constant_value()
                    .ok_or_else(|| Error::NotPiecewiseConstant(format!("piece {k} is `{e}`, not a constant")))
            })
            .collect::<Result<Vec<_>>>()?;
        PiecewiseConstant::new(d.breakpoints().to_vec(), values)
    }
}

/// A discontinuity travelling at constant speed between its birth and death.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveFront {
    /// Position at the birth time.
    pub position: f64,
    pub left_state: f64,
    pub right_state: f64,
    pub speed: f64,
    pub born: f64,
    /// Time of the interaction that absorbed it (infinite while alive).
    pub died: f64,
}

impl WaveFront {
    pub fn position_at(&self, t: f64) -> f64 {
        self.position + self.speed * (t - self.born)
    }

    fn alive_at(&self, t: f64) -> bool {
        self.born <= t && t < self.died
    }
}

/// A collision of adjacent fronts and the fronts it produced (indices into [`FrontTracking::fronts`]).
#[derive(Debug, Clone, PartialEq)]
pub struct FrontEvent {
    pub time: f64,
    pub position: f64,
    pub incoming: [usize; 2],
    pub outgoing: Vec<usize>,
}

/// Result of a front-tracking run: every front ever created and the interaction log.
#[derive(Debug, Clone)]
pub struct FrontTracking {
    fronts: Vec<WaveFront>,
    events: Vec<FrontEvent>,
    far_left: f64,
    t_final: f64,
    delta: f64,
}

impl FrontTracking {
    pub fn fronts(&self) -> &[WaveFront] {
        &self.fronts
    }

    pub fn events(&self) -> &[FrontEvent] {
        &self.events
    }

    pub fn final_time(&self) -> f64 {
        self.t_final
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Fronts present at time `t`, ordered by position.
    pub fn alive_at(&self, t: f64) -> Vec<WaveFront> {
        let mut alive: Vec<WaveFront> = self.fronts.iter().filter(|f| f.alive_at(t)).copied().collect();
        alive.sort_by(|a, b| a.position_at(t).total_cmp(&b.position_at(t)));
        alive
    }

    /// Exact value of the front-tracking solution (left-continuous at fronts).
    pub fn evaluate(&self, t: f64, x: f64) -> f64 {
        let alive = self.alive_at(t);
        match alive.iter().find(|f| f.position_at(t) >= x) {
            Some(f) => f.left_state,
            None => alive.last().map_or(self.far_left, |f| f.right_state),
        }
    }

    /// Point values on a grid.
    pub fn sample(&self, t: f64, grid: &Grid1D) -> Result<GridFunction1D> {
        let alive = self.alive_at(t);
        let mut k = 0;
        let mut values = Vec::with_capacity(grid.n);
        for i in 0..grid.n {
            let x = grid.x(i);
            while k < alive.len() && alive[k].position_at(t) < x {
                k += 1;
            }
            values.push(match alive.get(k) {
                Some(f) => f.left_state,
                None => alive.last().map_or(self.far_left, |f| f.right_state),
            });
        }
        GridFunction1D::on_grid(grid, values)
    }

    pub fn total_variation(&self, t: f64) -> f64 {
        self.alive_at(t).iter().map(|f| (f.left_state - f.right_state).abs()).sum()
    }

    /// Exact integral of the solution over `[a, b]`.
    pub fn mass(&self, t: f64, a: f64, b: f64) -> f64 {
        let alive = self.alive_at(t);
        let mut total = 0.0;
        let mut left = a;
        let mut state = self.evaluate(t, a);
        for f in alive.iter() {
            let p = f.position_at(t);
            if p <= a {
                continue;
            }
            if p >= b {
                break;
            }
            total += state * (p - left);
            left = p;
            state = f.right_state;
        }
        total + state * (b - left)
    }
}

/// Solves the local Riemann problem at `x` as a list of fronts (shock, or a δ-fan of small jumps).
fn riemann_fronts(flux: &FluxSpec, ul: f64, ur: f64, x: f64, t: f64, delta: f64) -> Vec<WaveFront> {
    let front = |a: f64, b: f64| WaveFront {
        position: x,
        left_state: a,
        right_state: b,
        speed: flux.rh_speed(a, b),
        born: t,
        died: f64::INFINITY,
    };
    if ul == ur {
        Vec::new()
    } else if ul > ur {
        vec![front(ul, ur)]
    } else {
        let pieces = ((ur - ul) / delta - 1e-9).ceil().max(1.0) as usize;
        (0..pieces)
            .map(|k| {
                let a = ul + (ur - ul) * k as f64 / pieces as f64;
                let b = if k + 1 == pieces {
                    ur
                } else {
                    ul + (ur - ul) * (k + 1) as f64 / pieces as f64
                };
                front(a, b)
            })
            .collect()
    }
}

#[derive(Debug, PartialEq)]
struct Collision {
    time: f64,
    left: usize,
    right: usize,
}

impl Eq for Collision {}

impl Ord for Collision {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .time
            .total_cmp(&self.time)
            .then_with(|| other.left.cmp(&self.left))
    }
}

impl PartialOrd for Collision {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

const NONE: usize = usize::MAX;

struct Tracker<'a> {
    flux: &'a FluxSpec,
    delta: f64,
    t_final: f64,
    fronts: Vec<WaveFront>,
    prev: Vec<usize>,
    next: Vec<usize>,
    heap: BinaryHeap<Collision>,
}

impl Tracker<'_> {
    fn add(&mut self, f: WaveFront) -> usize {
        self.fronts.push(f);
        self.prev.push(NONE);
        self.next.push(NONE);
        self.fronts.len() - 1
    }

    fn link(&mut self, a: usize, b: usize) {
        if a != NONE {
            self.next[a] = b;
        }
        if b != NONE {
            self.prev[b] = a;
        }
    }

    fn schedule(&mut self, a: usize, b: usize, now: f64) {
        if a == NONE || b == NONE {
            return;
        }
        let (fa, fb) = (self.fronts[a], self.fronts[b]);
        if fa.speed <= fb.speed {
            return;
        }
        let ca = fa.position - fa.speed * fa.born;
        let cb = fb.position - fb.speed * fb.born;
        let time = ((cb - ca) / (fa.speed - fb.speed)).max(now);
        if time <= self.t_final {
            self.heap.push(Collision { time, left: a, right: b });
        }
    }

    fn run(&mut self, events: &mut Vec<FrontEvent>) {
        while let Some(Collision { time, left, right }) = self.heap.pop() {
            let stale = self.fronts[left].died.is_finite()
                || self.fronts[right].died.is_finite()
                || self.next[left] != right;
            if stale {
                continue;
            }
            let (fa, fb) = (self.fronts[left], self.fronts[right]);
            let position = 0.5 * (fa.position_at(time) + fb.position_at(time));
            self.fronts[left].died = time;
            self.fronts[right].died = time;
            let (before, after) = (self.prev[left], self.next[right]);
            let created = riemann_fronts(self.flux, fa.left_state, fb.right_state, position, time, self.delta);
            let mut outgoing = Vec::with_capacity(created.len());
            let mut last = before;
            for f in created {
                let id = self.add(f);
                self.link(last, id);
                last = id;
                outgoing.push(id);
            }
            self.link(last, after);
            if let (Some(&first), Some(&end)) = (outgoing.first(), outgoing.last()) {
                self.schedule(before, first, time);
                self.schedule(end, after, time);
            } else {
                self.schedule(before, after, time);
            }
            events.push(FrontEvent {
                time,
                position,
                incoming: [left, right],
                outgoing,
            });
        }
    }
}

/// Front tracking for a convex flux: shocks move at Rankine–Hugoniot speeds, rarefactions are
/// split into fans of jumps no larger than `delta`, and colliding neighbours are replaced by the
/// solution of their Riemann problem.
pub fn front_tracking_solve(u0: &PiecewiseConstant, flux: &FluxSpec, t_final: f64, delta: f64) -> Result<FrontTracking> {
    if !(t_final > 0.0 && t_final.is_finite()) {
        return Err(Error::InvalidArgument(format!("T must be positive (got {t_final})")));
    }
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::InvalidArgument(format!("fan resolution must be positive (got {delta})")));
    }
    let lo = u0.values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = u0.values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !flux.is_convex_on(lo, hi) {
        return Err(Error::NonConvexFlux { lo, hi });
    }
    let mut tracker = Tracker {
        flux,
        delta,
        t_final,
        fronts: Vec::new(),
        prev: Vec::new(),
        next: Vec::new(),
        heap: BinaryHeap::new(),
    };
    let mut last = NONE;
    for (k, &x) in u0.breakpoints.iter().enumerate() {
        for f in riemann_fronts(flux, u0.values[k], u0.values[k + 1], x, 0.0, delta) {
            let id = tracker.add(f);
            tracker.link(last, id);
            last = id;
        }
    }
    for a in 0..tracker.fronts.len() {
        let b = tracker.next[a];
        tracker.schedule(a, b, 0.0);
    }
    let mut events = Vec::new();
    tracker.run(&mut events);
    Ok(FrontTracking {
        fronts: tracker.fronts,
        events,
        far_left: u0.values[0],
        t_final,
        delta,
    })
}

/// Default fan resolution: one hundredth of the data range.
pub fn default_delta(u0: &PiecewiseConstant) -> f64 {
    let r = u0.range();
    if r > 0.0 {
        1e-2 * r
    } else {
        1e-2
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_shock() {
        let u0 = PiecewiseConstant::from_riemann(RiemannData::new(1.0, 0.0));
        let ft = front_tracking_solve(&u0, &FluxSpec::burgers(), 3.0, 0.01).unwrap();
        assert_eq!(ft.fronts().len(), 1);
        assert_eq!(ft.fronts()[0].speed, 0.5);
        assert!(ft.events().is_empty());
        assert_eq!(ft.evaluate(2.0, 0.99), 1.0);
        assert_eq!(ft.evaluate(2.0, 1.01), 0.0);
    }

    #[test]
    fn shocks_merge() {
        let u0 = PiecewiseConstant::new(vec![0.0, 1.0], vec![2.0, 1.0, 0.0]).unwrap();
        let ft = front_tracking_solve(&u0, &FluxSpec::burgers(), 2.0, 0.01).unwrap();
        assert_eq!(ft.events().len(), 1);
        let e = &ft.events()[0];
        assert!((e.time - 1.0).abs() < 1e-14 && (e.position - 1.5).abs() < 1e-14);
        let merged = ft.fronts()[e.outgoing[0]];
        assert_eq!((merged.left_state, merged.right_state, merged.speed), (2.0, 0.0, 1.0));
        assert!(ft.total_variation(1.5) <= ft.total_variation(0.5));
    }

    #[test]
    fn fan_is_resolved_to_delta() {
        let u0 = PiecewiseConstant::from_riemann(RiemannData::new(-1.0, 1.0));
        let ft = front_tracking_solve(&u0, &FluxSpec::burgers(), 1.0, 0.1).unwrap();
        assert_eq!(ft.fronts().len(), 20);
        assert!(ft.fronts().iter().all(|f| (f.right_state - f.left_state) <= 0.1 + 1e-12));
        assert!((ft.evaluate(1.0, 0.52) - 0.5).abs() <= 0.1);
    }

    #[test]
    fn rejects_non_constant_pieces() {
        let d = PiecewiseInitialData::counterexample();
        assert!(matches!(PiecewiseConstant::try_from(&d), Err(Error::NotPiecewiseConstant(_))));
    }
}
