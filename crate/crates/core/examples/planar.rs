//! The two-dimensional velocity-regularised equation on a Gaussian bump.

use nlclaw::flux::FluxSpec;
use nlclaw::multidim::{solve_velocity_reg_2d, GridFunction2D};
use nlclaw::nonlocal::SolverConfig;

fn main() -> nlclaw::Result<()> {
    let dx = 0.02;
    let n = 151;
    let u0 = GridFunction2D::from_fn((-1.5, -1.5), (dx, dx), n, n, |x, y| (-8.0 * (x * x + y * y)).exp())?;
    let cfg = SolverConfig { dx, stride: 10, ..SolverConfig::default() };
    let burgers = FluxSpec::burgers();
    let traj = solve_velocity_reg_2d(&u0, [&burgers, &burgers], 0.1, 0.5, &cfg)?;
    for (t, tv) in traj.times().iter().zip(traj.tv()) {
        println!("t = {t:.3}: TV {tv:.5}");
    }
    println!("range [{:.4}, {:.4}], TV growth {:.6}", traj.last().min(), traj.last().max(), traj.tv_growth());
    Ok(())
}
