use super::convergence::RESOLVED_REFINEMENT;
use super::{Check, DiagnosticsConfig, DiagnosticsReport};
use crate::funcspace::{l1_distance, sup_norm, total_variation};
use crate::nonlocal::{Mode, Trajectory};

/// Largest increase of total variation between consecutive stored states.
pub fn max_tv_increase(traj: &Trajectory) -> f64 {
    traj.states()
        .windows(2)
        .map(|w| total_variation(&w[1]) - total_variation(&w[0]))
        .fold(0.0, f64::max)
}

/// Total variation of stored state `k`, counting the jumps across tracked fronts when the
/// trajectory carries them.
pub fn resolved_total_variation(traj: &Trajectory, k: usize) -> f64 {
    if !traj.tracks_fronts() {
        total_variation(&traj.states()[k])
    } else {
        traj.resolved(k).total_variation()
    }
}

/// As [`max_tv_increase`], on the front-resolved variation.
pub fn max_resolved_tv_increase(traj: &Trajectory) -> f64 {
    let tv: Vec<f64> = (0..traj.states().len()).map(|k| resolved_total_variation(traj, k)).collect();
    tv.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
}

/// Largest `‖u(t₂) - u(t₁)‖₁/(t₂ - t₁)` over stored pairs at least `min_gap` apart. Trajectories
/// with tracked fronts are compared front-resolved.
pub fn l1_lipschitz_constant(traj: &Trajectory, min_gap: f64) -> f64 {
    let (times, states) = (traj.times(), traj.states());
    let mut best: f64 = 0.0;
    for k in 0..times.len() {
        for l in k + 1..times.len() {
            let gap = times[l] - times[k];
            if gap + 1e-12 < min_gap || gap <= 0.0 {
                continue;
            }
            let d = if !traj.tracks_fronts() {
                l1_distance(&states[l], &states[k])
            } else {
                traj.resolved(l).l1_distance(&traj.resolved(k), RESOLVED_REFINEMENT)
            }
            .expect("trajectory states share a grid");
            best = best.max(d / gap);
        }
    }
    best
}

/// Checks the structural invariants appropriate to the trajectory's mode.
///
/// Modes with a maximum principle must keep every value inside the initial range, never increase
/// TV, lose at most a small fraction of TV by the final time, and be Lipschitz in time in L1 with
/// constant `‖u₀‖∞·TV(u₀)`. The conservative mode must instead conserve mass up to the boundary
/// fluxes `½u²` of its constant end states; the other checks are reported but not required.
pub fn check_invariants(traj: &Trajectory, cfg: &DiagnosticsConfig) -> DiagnosticsReport {
    let mode = traj.mode();
    let principled = mode.has_maximum_principle();
    let contract = if principled {
        "maximum principle, TV non-increase, L1 Lipschitz in time"
    } else {
        "mass balance (maximum principle and TV waived)"
    };
    let mut report = DiagnosticsReport::new(mode.as_str(), contract);
    let u0 = traj.initial();
    let (lo, hi) = (u0.min(), u0.max());
    let excursion = traj
        .states()
        .iter()
        .map(|s| (lo - s.min()).max(s.max() - hi).max(0.0))
        .fold(0.0, f64::max);
    report.push(Check::new(
        "max_principle",
        "maximum principle",
        excursion,
        cfg.max_principle_tol,
        principled,
    ));

    let tv0 = resolved_total_variation(traj, 0);
    let scale = tv0.max(f64::MIN_POSITIVE);
    let last = traj.states().len() - 1;
    let deficit = |tv: f64| if tv0 > 0.0 { (tv0 - tv).max(0.0) / tv0 } else { 0.0 };
    report.push(Check::new(
        "tv_stepwise",
        "total variation never increases",
        max_resolved_tv_increase(traj) / scale,
        cfg.tv_step_tol,
        principled,
    ));
    report.push(Check::new(
        "tv_deficit",
        "total variation preserved",
        deficit(resolved_total_variation(traj, last)),
        cfg.tv_deficit_tol,
        principled,
    ));
    if traj.tracks_fronts() {
        // Node values alone miss variation compressed below the grid scale next to a front.
        report.push(Check::new(
            "tv_deficit_nodes",
            "total variation preserved on grid nodes",
            deficit(total_variation(traj.last())),
            cfg.tv_deficit_tol,
            false,
        ));
    }

    let k = sup_norm(u0) * tv0;
    let min_gap = cfg.lipschitz_min_gap * (traj.final_time() - traj.times()[0]);
    report.push(Check::new(
        "l1_lipschitz",
        "uniformly Lipschitz in time in L1",
        l1_lipschitz_constant(traj, min_gap),
        cfg.lipschitz_factor * k,
        principled,
    ));

    if mode == Mode::Conservative {
        let mass = |u: &crate::funcspace::GridFunction1D| u.values().iter().sum::<f64>() * u.dx();
        let v = u0.values();
        let (ul, ur) = (v[0], v[v.len() - 1]);
        let expected = 0.5 * (ul * ul - ur * ur) * (traj.final_time() - traj.times()[0]);
        let defect = (mass(traj.last()) - mass(u0) - expected).abs() / (1.0 + mass(u0).abs());
        report.push(Check::new("mass", "conservation of mass", defect, cfg.mass_tol, true));
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::{Grid1D, GridFunction1D};

    #[test]
    fn constant_trajectory_passes_with_zero_measurements() {
        let g = Grid1D::symmetric(1.0, 0.1).unwrap();
        let c = GridFunction1D::constant(&g, 0.5).unwrap();
        let traj = Trajectory::from_states(vec![0.0, 0.5, 1.0], vec![c.clone(), c.clone(), c], 0.1, Mode::Nn).unwrap();
        let report = check_invariants(&traj, &DiagnosticsConfig::default());
        assert!(report.passed());
        assert!(report.checks.iter().all(|c| c.measured == 0.0));
    }
}
