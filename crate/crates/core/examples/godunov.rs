//! Godunov's scheme for Burgers and for the cubic flux.

use nlclaw::flux::FluxSpec;
use nlclaw::funcspace::{Grid1D, GridFunction1D};
use nlclaw::local::godunov_solve;

fn main() -> nlclaw::Result<()> {
    let grid = Grid1D::covering(-2.0, 2.0, 0.005)?;
    let u0 = GridFunction1D::on_grid(&grid, grid.nodes().iter().map(|&x| if x <= 0.0 { 1.0 } else { 0.0 }).collect())?;
    for flux in [FluxSpec::burgers(), FluxSpec::cubic(2.0)] {
        let traj = godunov_solve(&u0, &flux, 1.0, grid.dx)?;
        let u = traj.last();
        let front = (0..u.len() - 1).find(|&i| u.values()[i] >= 0.5 && u.values()[i + 1] < 0.5).map(|i| u.x(i));
        println!("{}: front near x = {:?} at t = 1 (Rankine-Hugoniot speed {:.4})", flux.name(), front, flux.rh_speed(1.0, 0.0));
    }
    Ok(())
}
