//! Command-line front end: scenario runs, sweeps, Riemann problems and the self-test suite.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nlclaw::scenario::{
    execute, parse_scenario, Command, FluxChoice, InitialDataSpec, OutputFormat, OutputSpec, ScenarioMode, ScenarioSpec,
};
use nlclaw::selftest::{results_json, Suite, LIBRARY_CRITERIA, TITLES};

const INPUT_ERROR: u8 = 1;
const CHECK_FAILURE: u8 = 2;

#[derive(Parser)]
#[command(name = "nlclaw", version, about = "Nonlocal regularisation of scalar conservation laws")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Args)]
struct Output {
    /// Directory for result files.
    #[arg(long, default_value = "nlclaw-out")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Sub {
    /// Solve a scenario (or sweep it when it lists several epsilon values).
    Run {
        scenario: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Sweep a scenario over its `epsilon_list` and write the convergence table.
    Sweep {
        scenario: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Solve a Riemann problem given on the command line.
    #[command(allow_negative_numbers = true)]
    Riemann {
        #[arg(long = "uL")]
        ul: f64,
        #[arg(long = "uR")]
        ur: f64,
        #[arg(long, value_enum, default_value = "burgers")]
        flux: FluxArg,
        #[arg(long, value_enum, default_value = "nn")]
        mode: ModeArg,
        #[arg(long, default_value_t = 0.05)]
        epsilon: f64,
        #[arg(long = "T", default_value_t = 1.0)]
        t_final: f64,
        #[arg(long, default_value_t = 1e-3)]
        dx: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Run an Euler scenario.
    Euler {
        scenario: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Solve a scenario and write the diagnostics report only.
    Verify {
        scenario: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Run the acceptance suite; a second run also checks byte-identical results.
    Selftest {
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FluxArg {
    Burgers,
    Cubic,
}

#[derive(Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
enum ModeArg {
    Nn,
    Conservative,
    VelocityReg,
    FluxReg,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(INPUT_ERROR) } else { ExitCode::SUCCESS };
        }
    };
    match cli.command {
        Sub::Run { scenario, output } => scenario_command(&scenario, Command::Run, &output.out),
        Sub::Sweep { scenario, output } => scenario_command(&scenario, Command::Sweep, &output.out),
        Sub::Euler { scenario, output } => scenario_command(&scenario, Command::Euler, &output.out),
        Sub::Verify { scenario, output } => scenario_command(&scenario, Command::Verify, &output.out),
        Sub::Riemann {
            ul,
            ur,
            flux,
            mode,
            epsilon,
            t_final,
            dx,
            output,
        } => {
            let spec = ScenarioSpec {
                name: "riemann".into(),
                mode: match mode {
                    ModeArg::Nn => ScenarioMode::Nn,
                    ModeArg::Conservative => ScenarioMode::Conservative,
                    ModeArg::VelocityReg => ScenarioMode::VelocityReg,
                    ModeArg::FluxReg => ScenarioMode::FluxReg,
                },
                initial_data: InitialDataSpec::Riemann { ul, ur },
                flux: match flux {
                    FluxArg::Burgers => FluxChoice::Burgers,
                    FluxArg::Cubic => FluxChoice::Cubic,
                },
                epsilon: Some(epsilon),
                epsilon_list: None,
                t_final,
                dx,
                cfl: 0.5,
                domain: (-2.0, 2.0),
                domain_y: (-2.0, 2.0),
                output: OutputSpec {
                    format: OutputFormat::Csv,
                    stride: None,
                },
                expect: None,
                reference: None,
            };
            if !(t_final > 0.0) {
                eprintln!("error: T must be positive");
                return ExitCode::from(INPUT_ERROR);
            }
            if matches!(mode, ModeArg::Nn | ModeArg::Conservative) && matches!(flux, FluxArg::Cubic) {
                eprintln!("error: mode nn and conservative use the Burgers flux");
                return ExitCode::from(INPUT_ERROR);
            }
            finish(&spec, Command::Run, &output.out)
        }
        Sub::Selftest { output } => selftest(&output.out),
    }
}

fn scenario_command(path: &Path, command: Command, out: &Path) -> ExitCode {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", path.display());
            return ExitCode::from(INPUT_ERROR);
        }
    };
    match parse_scenario(&text) {
        Ok(spec) => finish(&spec, command, out),
        Err(e) => {
            eprintln!("error: {}: {e}", path.display());
            ExitCode::from(INPUT_ERROR)
        }
    }
}

fn finish(spec: &ScenarioSpec, command: Command, out: &Path) -> ExitCode {
    let outcome = match execute(spec, command) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(INPUT_ERROR);
        }
    };
    let paths = match outcome.write_to(out) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot write results to {}: {e}", out.display());
            return ExitCode::from(INPUT_ERROR);
        }
    };
    for run in &outcome.report.runs {
        println!("{} epsilon={} dt={:e}", spec.name, run.epsilon, run.dt);
        if let Some(fs) = &run.front_speed {
            println!("  front speed {:.6} (predicted {:.6})", fs.measured, fs.predicted);
        }
        for c in &run.diagnostics.checks {
            let status = match (c.passed, c.required) {
                (true, _) => "ok",
                (false, true) => "FAIL",
                (false, false) => "info",
            };
            println!("  {:<22} {:>4} {:e} (threshold {:e})", c.name, status, c.measured, c.threshold);
        }
    }
    if let Some(table) = &outcome.report.convergence {
        println!("reference {}", table.reference);
        for row in &table.rows {
            match row.error_l1_resolved {
                Some(r) => println!("  eps={:<8} L1={:e} resolved L1={:e}", row.epsilon, row.error_l1, r),
                None => println!("  eps={:<8} L1={:e}", row.epsilon, row.error_l1),
            }
        }
    }
    if let Some(e) = &outcome.report.expectation {
        println!("expectation {:?}: slope {:.4} {}", e.expected, e.slope, if e.passed { "met" } else { "NOT met" });
    }
    for p in paths {
        println!("wrote {}", p.display());
    }
    ExitCode::from(outcome.exit_code() as u8)
}

fn selftest(out: &Path) -> ExitCode {
    let mut suite = Suite::new();
    let results = suite.run_all(|r| println!("{}", r.line()));
    let text = results_json(&results);
    let path = out.join("selftest.json");
    let previous = std::fs::read_to_string(&path).ok();
    if let Err(e) = std::fs::create_dir_all(out).and_then(|_| std::fs::write(&path, &text)) {
        eprintln!("error: cannot write {}: {e}", path.display());
        return ExitCode::from(INPUT_ERROR);
    }
    let title = TITLES[LIBRARY_CRITERIA as usize];
    let determinism = previous.map(|p| p == text);
    match determinism {
        Some(true) => println!("criterion 14: PASS {title} [results identical to the previous run]"),
        Some(false) => println!("criterion 14: FAIL {title} [results differ from the previous run]"),
        None => println!("criterion 14: SKIP {title} [no previous results; run selftest again]"),
    }
    println!("wrote {}", path.display());
    if results.iter().all(|r| r.passed) && determinism != Some(false) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(CHECK_FAILURE)
    }
}
