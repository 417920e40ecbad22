//! Velocity- and flux-regularised equations for the cubic flux f(u) = u³/3. The front of each
//! regularisation travels at its own speed, and neither matches Rankine-Hugoniot.

use nlclaw::diagnostics::measure_front_speed;
use nlclaw::flux::FluxSpec;
use nlclaw::funcspace::RiemannData;
use nlclaw::nonlocal::{padded_profile, solve_general, Regularisation, SolverConfig};

fn main() -> nlclaw::Result<()> {
    let cfg = SolverConfig { dx: 2e-3, stride: 20, margin: 0.25, ..SolverConfig::default() };
    let flux = FluxSpec::cubic(2.0);
    let data = RiemannData::new(2.0, 0.0);
    println!("Rankine-Hugoniot speed {:.4}", flux.rh_speed(2.0, 0.0));
    for mode in [Regularisation::Velocity, Regularisation::Flux] {
        let profile = padded_profile(&data, (-0.5, 1.5), 0.05, 0.5, &cfg)?;
        let traj = solve_general(profile, &flux, 0.05, 0.5, &cfg, mode)?;
        let fs = measure_front_speed(&traj, 1.0, (0.1, 0.5))?;
        println!("{mode:?}: front speed {:.4}", fs.speed);
    }
    Ok(())
}
