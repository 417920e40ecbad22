//! Parses a scenario document and runs it in memory, as the command-line tool does.

use nlclaw::scenario::{execute, parse_scenario, Command};

const DOC: &str = r#"
name = "demo"
T = 0.5
epsilon = 0.1
dx = 4e-3
domain = [-1.0, 1.0]

[initial_data]
type = "riemann"
uL = 1.0
uR = 0.0
"#;

fn main() {
    let spec = match parse_scenario(DOC) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(1);
        }
    };
    let outcome = execute(&spec, Command::Run).expect("scenario runs");
    let run = &outcome.report.runs[0];
    println!("passed {}, front speed {:?}", outcome.report.passed, run.front_speed.as_ref().map(|f| f.measured));
    for (name, text) in &outcome.files {
        println!("{name}: {} lines", text.lines().count());
    }
    match parse_scenario("T = -1\nepsilon = 0.1\n[flux]\ntype = \"quartic\"\n") {
        Err(e) => println!("rejected as expected:\n{e}"),
        Ok(_) => unreachable!(),
    }
}
