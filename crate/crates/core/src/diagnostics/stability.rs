use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcspace::{l1_distance, total_variation};
use crate::kernel::Mollifier;
use crate::nonlocal::Trajectory;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityRow {
    pub t: f64,
    pub distance: f64,
    pub bound: f64,
}

/// L1 distance between two runs against the envelope `e^{C_ε t}·‖u₀ - v₀‖₁·factor`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub passed: bool,
    /// `‖η_ε‖∞·(TV(u₀) + TV(v₀))`.
    pub c_epsilon: f64,
    /// Largest `distance/bound` (0 when both runs coincide).
    pub worst_ratio: f64,
    pub rows: Vec<StabilityRow>,
}

pub fn stability_envelope(u: &Trajectory, v: &Trajectory, m: &Mollifier, factor: f64) -> Result<StabilityReport> {
    if u.times().len() != v.times().len() || u.times().iter().zip(v.times()).any(|(a, b)| (a - b).abs() > 1e-12) {
        return Err(Error::GridMismatch("trajectories must share their stored times".into()));
    }
    let c_epsilon = m.sup_density() * (total_variation(u.initial()) + total_variation(v.initial()));
    let d0 = l1_distance(u.initial(), v.initial())?;
    let mut rows = Vec::with_capacity(u.times().len());
    let mut worst: f64 = 0.0;
    let mut passed = true;
    for ((t, a), b) in u.times().iter().zip(u.states()).zip(v.states()) {
        let distance = l1_distance(a, b)?;
        let bound = (c_epsilon * t).exp() * d0 * factor;
        if distance > bound {
            passed = false;
        }
        if distance > 0.0 {
            worst = worst.max(distance / bound);
        }
        rows.push(StabilityRow { t: *t, distance, bound });
    }
    Ok(StabilityReport {
        passed,
        c_epsilon,
        worst_ratio: worst,
        rows,
    })
}
