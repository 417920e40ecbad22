use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcspace::{sup_norm, GridFunction1D, PiecewiseInitialData};
use crate::nonlocal::Trajectory;

/// `[max(-u₀')]⁻¹` from forward differences; infinite when the data never decreases.
pub fn catastrophe_time(u0: &GridFunction1D) -> f64 {
    let s = u0
        .values()
        .windows(2)
        .map(|w| (w[0] - w[1]) / u0.dx())
        .fold(f64::NEG_INFINITY, f64::max);
    if s > 0.0 {
        1.0 / s
    } else {
        f64::INFINITY
    }
}

/// Least-squares front speed with its standard error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrontSpeed {
    pub speed: f64,
    pub std_error: f64,
    /// `(t, position)` samples used for the fit.
    pub samples: Vec<(f64, f64)>,
}

/// Position where `u` crosses `level`, interpolated between the bracketing nodes.
fn crossing(u: &GridFunction1D, level: f64, time: f64) -> Result<f64> {
    let v = u.values();
    let mut found = None;
    let mut count = 0;
    for i in 0..v.len() - 1 {
        if (v[i] >= level) != (v[i + 1] >= level) {
            count += 1;
            let x = u.x(i) + u.dx() * (v[i] - level) / (v[i] - v[i + 1]);
            found = Some(x);
        }
    }
    match (count, found) {
        (1, Some(x)) => Ok(x),
        (0, _) | (_, None) => Err(Error::NoCrossing { level, time }),
        _ => Err(Error::MultipleCrossings { level, time, count }),
    }
}

/// Fits the position of the `level` crossing against time over the stored states in `window`.
pub fn measure_front_speed(traj: &Trajectory, level: f64, window: (f64, f64)) -> Result<FrontSpeed> {
    let mut samples = Vec::new();
    for (t, u) in traj.times().iter().zip(traj.states()) {
        if *t >= window.0 - 1e-12 && *t <= window.1 + 1e-12 {
            samples.push((*t, crossing(u, level, *t)?));
        }
    }
    if samples.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "need at least 3 stored states in [{}, {}], found {}",
            window.0,
            window.1,
            samples.len()
        )));
    }
    let (speed, std_error) = linear_fit(&samples);
    Ok(FrontSpeed {
        speed,
        std_error,
        samples,
    })
}

/// Least-squares slope and its standard error.
pub(crate) fn linear_fit(points: &[(f64, f64)]) -> (f64, f64) {
    let n = points.len() as f64;
    let mt = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mx = points.iter().map(|p| p.1).sum::<f64>() / n;
    let stt: f64 = points.iter().map(|p| (p.0 - mt).powi(2)).sum();
    let stx: f64 = points.iter().map(|p| (p.0 - mt) * (p.1 - mx)).sum();
    let slope = stx / stt;
    let rss: f64 = points.iter().map(|p| (p.1 - mx - slope * (p.0 - mt)).powi(2)).sum();
    let std_error = if points.len() > 2 { (rss / (n - 2.0) / stt).sqrt() } else { f64::INFINITY };
    (slope, std_error)
}

/// Outcome of a one-sided slope check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OleinikReport {
    pub passed: bool,
    pub max_slope: f64,
    pub bound: f64,
    /// Left nodes of the cells whose forward difference exceeds the bound.
    pub violations: Vec<f64>,
}

/// Checks `(u_{i+1} - u_i)/dx ≤ c + tol` on every cell that does not meet an excluded interval.
pub fn oleinik_check(u: &GridFunction1D, c: f64, excluded: &[(f64, f64)], tol: f64) -> OleinikReport {
    let v = u.values();
    let mut max_slope = f64::NEG_INFINITY;
    let mut violations = Vec::new();
    for i in 0..v.len() - 1 {
        let (a, b) = (u.x(i), u.x(i + 1));
        if excluded.iter().any(|&(lo, hi)| b >= lo && a <= hi) {
            continue;
        }
        let slope = (v[i + 1] - v[i]) / u.dx();
        max_slope = max_slope.max(slope);
        if slope > c + tol {
            violations.push(a);
        }
    }
    OleinikReport {
        passed: violations.is_empty(),
        max_slope,
        bound: c + tol,
        violations,
    }
}

/// Lower bound `D/(2‖u₀‖∞)` on the time before waves from neighbouring breakpoints can
/// interact, with `D` the smallest breakpoint gap and the sup norm taken over `samples`.
pub fn secondary_horizon(data: &PiecewiseInitialData, samples: &GridFunction1D) -> f64 {
    let d = data.min_gap().unwrap_or(f64::INFINITY);
    let sup = sup_norm(samples);
    if sup > 0.0 {
        d / (2.0 * sup)
    } else {
        f64::INFINITY
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::Grid1D;
    use crate::nonlocal::Mode;

    #[test]
    fn catastrophe_examples() {
        let g = Grid1D::symmetric(5.0, 1e-3).unwrap();
        let u = GridFunction1D::from_fn(g.x0, g.dx, g.n, |x| -x.tanh()).unwrap();
        assert!((catastrophe_time(&u) - 1.0).abs() < 1e-3);
        let inc = GridFunction1D::from_fn(g.x0, g.dx, g.n, |x| x.tanh()).unwrap();
        assert_eq!(catastrophe_time(&inc), f64::INFINITY);
        let ramp = GridFunction1D::from_fn(g.x0, g.dx, g.n, |x| (-2.0 * x).clamp(-1.0, 1.0)).unwrap();
        assert!((catastrophe_time(&ramp) - 0.5).abs() < 1e-9);
    }

    #[test]
    fn translated_ramp_speed_is_exact() {
        let g = Grid1D::symmetric(3.0, 0.01).unwrap();
        let times: Vec<f64> = (0..11).map(|k| 0.1 * k as f64).collect();
        let states = times
            .iter()
            .map(|t| GridFunction1D::from_fn(g.x0, g.dx, g.n, |x| (0.5 - 5.0 * (x - 0.3 * t)).clamp(0.0, 1.0)).unwrap())
            .collect();
        let traj = Trajectory::from_states(times, states, 0.1, Mode::Nn).unwrap();
        let fs = measure_front_speed(&traj, 0.5, (0.0, 1.0)).unwrap();
        assert!((fs.speed - 0.3).abs() < 1e-6, "{}", fs.speed);
    }

    #[test]
    fn oleinik_examples() {
        let g = Grid1D::symmetric(2.0, 0.01).unwrap();
        let fan = GridFunction1D::from_fn(g.x0, g.dx, g.n, |x| x.clamp(-1.0, 1.0)).unwrap();
        assert!(oleinik_check(&fan, 1.0, &[], 1e-9).passed);
        let step = GridFunction1D::from_fn(g.x0, g.dx, g.n, |x| if x < 0.0 { 0.0 } else { 1.0 }).unwrap();
        assert!(!oleinik_check(&step, 1.0, &[], 1e-9).passed);
        assert!(oleinik_check(&step, 1.0, &[(-0.05, 0.05)], 1e-9).passed);
    }
}
