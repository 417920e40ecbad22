//! Sweeps epsilon for smooth data and fits the rate of convergence to the entropy solution.

use std::sync::Arc;

use nlclaw::diagnostics::{convergence_study, ConvergenceProblem, Reference, StudyConfig};
use nlclaw::funcspace::ClosedForm;
use nlclaw::nonlocal::SolverConfig;

fn main() -> nlclaw::Result<()> {
    let problem = ConvergenceProblem {
        name: "tanh".into(),
        data: Arc::new(ClosedForm::parse("-tanh(x)")?),
        t_final: 0.5,
        window: (-1.0, 1.0),
    };
    let cfg = StudyConfig { solver: SolverConfig::with_dx(2e-3), ..StudyConfig::default() };
    let table = convergence_study(&problem, &[0.2, 0.1, 0.05], &Reference::LaxOleinik, &cfg)?;
    for row in &table.rows {
        println!("eps {:<6} L1 {:.3e} sup {:.3e} resolved L1 {:?}", row.epsilon, row.error_l1, row.error_sup, row.error_l1_resolved);
    }
    println!("L1 rate {:?}, sup rate {:?}", table.raw_rate, table.fitted_rate_sup);
    Ok(())
}
