//! Invariant checks on a trajectory with two interacting jumps.

use nlclaw::diagnostics::{check_invariants, DiagnosticsConfig};
use nlclaw::funcspace::PiecewiseInitialData;
use nlclaw::nonlocal::{padded_profile, solve_nn, SolverConfig};

fn main() -> nlclaw::Result<()> {
    let cfg = SolverConfig { dx: 2e-3, stride: 20, ..SolverConfig::default() };
    let data = PiecewiseInitialData::piecewise_constant(vec![-0.5, 0.5], &[1.0, 0.5, -0.5])?;
    let profile = padded_profile(&data, (-2.0, 2.0), 0.05, 1.5, &cfg)?;
    let traj = solve_nn(profile, 0.05, 1.5, &cfg)?;
    let report = check_invariants(&traj, &DiagnosticsConfig::default());
    println!("mode {} ({})", report.mode, report.contract);
    for c in &report.checks {
        println!("  {:<18} measured {:.3e} threshold {:.3e} {}", c.name, c.measured, c.threshold, if c.passed { "ok" } else { "FAIL" });
    }
    println!("fronts at the end: {:?}", traj.fronts().last());
    Ok(())
}
