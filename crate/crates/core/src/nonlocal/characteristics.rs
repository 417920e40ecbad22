use super::Trajectory;
use crate::error::Result;
use crate::funcspace::{interp_index, GridFunction1D};
use crate::kernel::Mollifier;

/// Velocity fields `η_ε ∗ u` at every stored time of a trajectory.
pub fn velocity_history(traj: &Trajectory, m: &Mollifier) -> Result<Vec<GridFunction1D>> {
    traj.states().iter().map(|s| m.convolve(s)).collect()
}

fn velocity_at(v: &[GridFunction1D], times: &[f64], t: f64, x: f64) -> f64 {
    let k = times.partition_point(|&s| s < t).clamp(1, times.len() - 1);
    let (t0, t1) = (times[k - 1], times[k]);
    let w = if t1 > t0 { ((t - t0) / (t1 - t0)).clamp(0.0, 1.0) } else { 1.0 };
    let g = &v[k];
    let s = (x - g.x0()) / g.dx();
    let a = interp_index(v[k - 1].values(), s);
    let b = interp_index(g.values(), s);
    a + w * (b - a)
}

/// Foot `y_{t,x}(0)` of the characteristic through `(t, x)`, integrated backwards with the
/// explicit midpoint rule over the stored time levels.
pub fn backward_characteristic(traj: &Trajectory, m: &Mollifier, t: f64, x: f64) -> Result<f64> {
    let v = velocity_history(traj, m)?;
    Ok(backward_characteristic_with(traj.times(), &v, t, x))
}

/// As [`backward_characteristic`], reusing precomputed velocity fields.
pub fn backward_characteristic_with(times: &[f64], v: &[GridFunction1D], t: f64, x: f64) -> f64 {
    if times.len() < 2 {
        return x;
    }
    let t = t.clamp(0.0, *times.last().unwrap());
    let mut k = times.partition_point(|&s| s < t);
    let mut y = x;
    let mut s = t;
    while s > 0.0 && k > 0 {
        let lower = times[k - 1];
        let h = s - lower;
        if h > 0.0 {
            let mid = s - 0.5 * h;
            let ym = y - 0.5 * h * velocity_at(v, times, s, y);
            y -= h * velocity_at(v, times, mid, ym);
        }
        s = lower;
        k -= 1;
    }
    y
}
