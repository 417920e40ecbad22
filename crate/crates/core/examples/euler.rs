//! Isentropic Euler with pressure ρ³/3, solved through its regularised Riemann invariants.

use nlclaw::euler::{conservative_residual, solve_isentropic, to_invariants};
use nlclaw::funcspace::{Grid1D, GridFunction1D};
use nlclaw::nonlocal::SolverConfig;

fn main() -> nlclaw::Result<()> {
    let cfg = SolverConfig { dx: 2e-3, stride: 25, ..SolverConfig::default() };
    let grid = Grid1D::covering(-2.0, 2.0, cfg.dx)?;
    let rho = GridFunction1D::on_grid(&grid, grid.nodes().iter().map(|&x| 1.0 + 0.3 * (-10.0 * x * x).exp()).collect())?;
    let vel = GridFunction1D::constant(&grid, 0.0)?;
    let state = to_invariants(&rho, &vel)?;
    println!("invariant ranges: mu [{:.3}, {:.3}], lambda [{:.3}, {:.3}]", state.mu.min(), state.mu.max(), state.lam.min(), state.lam.max());
    let traj = solve_isentropic(&rho, &vel, 0.05, 0.3, &cfg)?;
    let (mass, momentum) = conservative_residual(&traj.states, &traj.times)?;
    println!("weak-form residuals: mass {mass:.3e}, momentum {momentum:.3e}; vacuum {}", traj.vacuum_flagged());
    let last = traj.last();
    println!("final density range [{:.4}, {:.4}]", last.rho().min(), last.rho().max());
    Ok(())
}
