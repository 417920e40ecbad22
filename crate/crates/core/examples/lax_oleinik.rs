//! Lax-Oleinik formula for Burgers: a smooth decreasing profile after its shock forms.

use nlclaw::diagnostics::catastrophe_time;
use nlclaw::funcspace::{Grid1D, GridFunction1D};
use nlclaw::local::lax_oleinik_solve;

fn main() -> nlclaw::Result<()> {
    let grid = Grid1D::covering(-4.0, 4.0, 0.01)?;
    let u0 = GridFunction1D::on_grid(&grid, grid.nodes().iter().map(|&x| -x.tanh()).collect())?;
    println!("shock forms at t* = {:.4}", catastrophe_time(&u0));
    for t in [0.5, 1.0, 2.0] {
        let u = lax_oleinik_solve(&u0, t, &grid)?;
        let jump = u.values().windows(2).map(|w| (w[0] - w[1]).abs()).fold(0.0, f64::max);
        println!("t = {t}: largest node jump {jump:.4}, u(-1) = {:.4}", u.values()[u.nearest_index(-1.0)]);
    }
    Ok(())
}
