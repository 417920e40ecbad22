//! Scenario documents, batch execution and result files.

mod run;
mod spec;

pub use run::{execute, Command, ExpectationOutcome, FrontSpeedEntry, Outcome, RunSummary, ScenarioReport};
pub use spec::{
    parse_scenario, Expectation, FluxChoice, InitialDataSpec, OutputFormat, OutputSpec, ReferenceChoice, ScenarioError,
    ScenarioMode, ScenarioSpec,
};
