//! Front tracking for piecewise-constant Burgers data, with wave interactions.

use nlclaw::flux::FluxSpec;
use nlclaw::local::{default_delta, front_tracking_solve, PiecewiseConstant};

fn main() -> nlclaw::Result<()> {
    let u0 = PiecewiseConstant::new(vec![-1.0, 0.0, 1.0], vec![0.0, 2.0, 1.0, 0.0])?;
    let ft = front_tracking_solve(&u0, &FluxSpec::burgers(), 3.0, default_delta(&u0))?;
    println!("{} fronts, {} interactions", ft.fronts().len(), ft.events().len());
    for t in [0.0, 1.0, 2.0, 3.0] {
        println!("t = {t}: TV {:.3}, mass on [-5, 10] {:.6}, live fronts {}", ft.total_variation(t), ft.mass(t, -5.0, 10.0), ft.alive_at(t).len());
    }
    Ok(())
}
