//! L1 stability of the NN equation between two nearby shocks.

use nlclaw::diagnostics::stability_envelope;
use nlclaw::funcspace::{GridFunction1D, RiemannData};
use nlclaw::kernel::Mollifier;
use nlclaw::nonlocal::{padded_profile, solve_nn, SolverConfig};

fn main() -> nlclaw::Result<()> {
    let cfg = SolverConfig { dx: 2e-3, stride: 50, ..SolverConfig::default() };
    let eps = 0.1;
    let u0 = padded_profile(&RiemannData::new(1.0, 0.0), (-2.0, 2.0), eps, 1.0, &cfg)?;
    let grid = u0.grid();
    let v0 = GridFunction1D::on_grid(&grid, grid.nodes().iter().map(|&x| if x <= 0.1 { 1.0 } else { 0.0 }).collect())?;
    let u = solve_nn(u0, eps, 1.0, &cfg)?;
    let v = solve_nn(v0, eps, 1.0, &cfg)?;
    let report = stability_envelope(&u, &v, &Mollifier::build(eps, cfg.dx)?, 1.05)?;
    println!("C_eps = {:.3}, worst distance/bound = {:.3}", report.c_epsilon, report.worst_ratio);
    for row in report.rows.iter().step_by(4) {
        println!("  t {:.3}: distance {:.4e} bound {:.4e}", row.t, row.distance, row.bound);
    }
    Ok(())
}
