//! Exact entropy solutions of Burgers Riemann problems: a shock and a rarefaction fan.

use nlclaw::funcspace::RiemannData;
use nlclaw::local::burgers_riemann_exact;

fn main() {
    for (ul, ur) in [(1.0, 0.0), (-1.0, 1.0)] {
        let d = RiemannData::new(ul, ur);
        let row: Vec<String> = [-1.5, -0.5, 0.0, 0.25, 0.5, 1.5]
            .iter()
            .map(|&xi| format!("{:+.3}", burgers_riemann_exact(d, xi)))
            .collect();
        println!("uL={ul:+} uR={ur:+}: u(x/t) at -1.5 -0.5 0 0.25 0.5 1.5 = {}", row.join(" "));
    }
}
