//! Executable checks and measurements over trajectories: structural invariants, front speeds,
//! stability envelopes, one-sided slope bounds and ε-convergence studies.

mod convergence;
mod fronts;
mod invariants;
mod stability;

pub use convergence::{
    convergence_study, convergence_study_with_runs, fit_slope, smooth_rate_bound, ConvergenceProblem, ConvergenceRow, ConvergenceTable,
    Reference, StudyConfig,
};
pub use fronts::{
    catastrophe_time, measure_front_speed, oleinik_check, secondary_horizon, FrontSpeed, OleinikReport,
};
pub use invariants::{
    check_invariants, l1_lipschitz_constant, max_resolved_tv_increase, max_tv_increase, resolved_total_variation,
};
pub use stability::{stability_envelope, StabilityReport, StabilityRow};

use serde::{Deserialize, Serialize};

/// Tolerances used by the checks; every threshold in a report derives from these.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsConfig {
    /// Allowed excursion beyond the initial range for modes with a maximum principle.
    pub max_principle_tol: f64,
    /// Allowed stepwise TV increase, relative to TV(u₀).
    pub tv_step_tol: f64,
    /// Allowed terminal TV deficit, relative to TV(u₀).
    pub tv_deficit_tol: f64,
    /// Multiplier on `‖u₀‖∞·TV(u₀)` for the L1 time-Lipschitz bound.
    pub lipschitz_factor: f64,
    /// Smallest time separation of pairs used for the Lipschitz estimate, as a fraction of the
    /// final time. Sharp fronts move in whole cells, so very short gaps overstate the rate.
    pub lipschitz_min_gap: f64,
    /// Multiplier on the exponential stability envelope.
    pub stability_factor: f64,
    /// Allowed relative mass defect for the conservative solver.
    pub mass_tol: f64,
}

impl Default for DiagnosticsConfig {
    fn default() -> Self {
        DiagnosticsConfig {
            max_principle_tol: 0.0,
            tv_step_tol: 1e-12,
            tv_deficit_tol: 0.01,
            lipschitz_factor: 1.05,
            lipschitz_min_gap: 0.1,
            stability_factor: 1.05,
            mass_tol: 1e-9,
        }
    }
}

/// One named check: measured value, threshold, and whether the mode's contract requires it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// The property the check realises.
    pub property: String,
    pub measured: f64,
    pub threshold: f64,
    pub passed: bool,
    /// False when the mode does not promise the property (the result is informational).
    pub required: bool,
}

impl Check {
    pub fn new(name: &str, property: &str, measured: f64, threshold: f64, required: bool) -> Self {
        Check {
            name: name.into(),
            property: property.into(),
            measured,
            threshold,
            passed: measured <= threshold,
            required,
        }
    }
}

/// Results of a group of checks together with the contract they were judged against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsReport {
    pub mode: String,
    pub contract: String,
    pub checks: Vec<Check>,
}

impl DiagnosticsReport {
    pub fn new(mode: &str, contract: &str) -> Self {
        DiagnosticsReport {
            mode: mode.into(),
            contract: contract.into(),
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    /// Whether every required check passed.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed || !c.required)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}
