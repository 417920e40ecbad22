//! The conservative nonlocal regularisation: mass balance holds, the maximum principle need not.

use nlclaw::funcspace::{Grid1D, GridFunction1D};
use nlclaw::nonlocal::{solve_conservative_nonlocal, SolverConfig};

fn main() -> nlclaw::Result<()> {
    let cfg = SolverConfig { dx: 2e-3, stride: 50, ..SolverConfig::default() };
    let grid = Grid1D::covering(-3.0, 3.0, cfg.dx)?;
    let u0 = GridFunction1D::on_grid(&grid, grid.nodes().iter().map(|&x| (-8.0 * x * x).exp()).collect())?;
    let traj = solve_conservative_nonlocal(&u0, 0.1, 1.0, &cfg)?;
    let mass = |u: &GridFunction1D| u.values().iter().sum::<f64>() * u.dx();
    for (t, u) in traj.times().iter().zip(traj.states()) {
        println!("t = {t:.3}: mass {:.10}, max {:.5}", mass(u), u.max());
    }
    Ok(())
}
