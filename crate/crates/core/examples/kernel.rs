//! Builds the bump mollifier and smooths a step with it.

use nlclaw::funcspace::{total_variation, GridFunction1D};
use nlclaw::kernel::{mollifier_normalization, standard_bump, Mollifier};

fn main() -> nlclaw::Result<()> {
    println!("normalisation constant {:.12}", mollifier_normalization());
    println!("eta(0) = {:.6}, eta(0.5) = {:.6}", standard_bump(0.0), standard_bump(0.5));
    let m = Mollifier::build(0.1, 0.01)?;
    println!("radius {} cells, mass {:.15}", m.radius(), m.weights().iter().sum::<f64>());
    let step = GridFunction1D::from_fn(-1.0, 0.01, 201, |x| if x <= 0.0 { 1.0 } else { 0.0 })?;
    let smooth = m.convolve(&step)?;
    println!("TV before {:.3}, after {:.3}", total_variation(&step), total_variation(&smooth));
    for x in [-0.1, -0.05, 0.0, 0.05, 0.1] {
        println!("  (eta * u)({x:+.2}) = {:.4}", smooth.values()[smooth.nearest_index(x)]);
    }
    Ok(())
}
