//! The nonlocal NN equation on a shock: the tracked front moves at the entropy speed.

use nlclaw::diagnostics::measure_front_speed;
use nlclaw::funcspace::RiemannData;
use nlclaw::nonlocal::{padded_profile, solve_nn, SolverConfig};

fn main() -> nlclaw::Result<()> {
    let cfg = SolverConfig { dx: 2e-3, stride: 20, ..SolverConfig::default() };
    for eps in [0.2, 0.1, 0.05] {
        let profile = padded_profile(&RiemannData::new(1.0, 0.0), (-2.0, 2.0), eps, 1.0, &cfg)?;
        let traj = solve_nn(profile, eps, 1.0, &cfg)?;
        let fs = measure_front_speed(&traj, 0.5, (0.2, 1.0))?;
        println!("eps = {eps}: front speed {:.6} +/- {:.1e}, tracked fronts {:?}", fs.speed, fs.std_error, traj.fronts().last());
    }
    Ok(())
}
