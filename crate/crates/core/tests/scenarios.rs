use std::path::PathBuf;

use nlclaw::scenario::{execute, parse_scenario, Command, ScenarioError, ScenarioMode};

const SHOCK: &str = r#"
name = "shock"
T = 0.5
epsilon = 0.1
dx = 4e-3
domain = [-1.0, 1.0]

[initial_data]
type = "riemann"
uL = 1.0
uR = 0.0
"#;

fn invalid(text: &str) -> Vec<String> {
    match parse_scenario(text) {
        Err(ScenarioError::Invalid(errors)) => errors,
        other => panic!("expected semantic errors, got {other:?}"),
    }
}

#[test]
fn shipped_scenarios_parse() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios");
    let mut count = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "toml") {
            let text = std::fs::read_to_string(&path).unwrap();
            parse_scenario(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            count += 1;
        }
    }
    assert!(count >= 8);
}

#[test]
fn negative_time_is_rejected_with_a_message() {
    let errors = invalid(&SHOCK.replace("T = 0.5", "T = -1"));
    assert_eq!(errors, vec!["T must be positive".to_string()]);
}

#[test]
fn all_problems_are_reported_together() {
    let text = SHOCK.replace("T = 0.5", "T = -1").replace("dx = 4e-3", "dx = 4e-3\ncolour = \"red\"")
        + "[flux]\ntype = \"cubic\"\n";
    let errors = invalid(&text);
    assert_eq!(errors.len(), 3, "{errors:?}");
    assert!(errors.iter().any(|e| e.contains("colour")));
    assert!(errors.iter().any(|e| e.contains("Burgers")));
}

#[test]
fn epsilon_below_grid_spacing_is_rejected() {
    let errors = invalid(&SHOCK.replace("epsilon = 0.1", "epsilon = 1e-3"));
    assert!(errors.iter().any(|e| e.contains("epsilon")), "{errors:?}");
}

#[test]
fn syntax_errors_carry_line_and_column() {
    match parse_scenario("name = \"a\"\nT = 1\n[initial_data\n") {
        Err(ScenarioError::Syntax { line, column, .. }) => {
            assert_eq!(line, 3);
            assert!(column >= 1);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn defaults_are_filled_in() {
    let s = parse_scenario("T = 1\nepsilon = 0.1\n[initial_data]\ntype = \"expression\"\nu = \"-tanh(x)\"\n").unwrap();
    assert_eq!(s.name, "scenario");
    assert_eq!(s.mode, ScenarioMode::Nn);
    assert_eq!(s.dx, 1e-3);
    assert_eq!(s.cfl, 0.5);
    assert_eq!(s.domain, (-2.0, 2.0));
    assert_eq!(s.domain_y, s.domain);
}

#[test]
fn shock_run_measures_the_predicted_speed() {
    let spec = parse_scenario(SHOCK).unwrap();
    let outcome = execute(&spec, Command::Run).unwrap();
    assert_eq!(outcome.exit_code(), 0);
    let fs = outcome.report.runs[0].front_speed.as_ref().unwrap();
    assert!((fs.measured - 0.5).abs() <= 0.02 * 0.5, "{fs:?}");
    let (_, csv) = outcome.files.iter().find(|(n, _)| n == "shock.csv").unwrap();
    let header = csv.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header, "t,x,u");
}

#[test]
fn execution_is_deterministic() {
    let spec = parse_scenario(SHOCK).unwrap();
    let a = execute(&spec, Command::Run).unwrap();
    let b = execute(&spec, Command::Run).unwrap();
    assert_eq!(a.files, b.files);
}

#[test]
fn verify_writes_only_the_report() {
    let spec = parse_scenario(SHOCK).unwrap();
    let outcome = execute(&spec, Command::Verify).unwrap();
    let names: Vec<&str> = outcome.files.iter().map(|(n, _)| n.as_str()).collect();
    assert_eq!(names, vec!["shock_report.json"]);
    let doc: serde_json::Value = serde_json::from_str(&outcome.files[0].1).unwrap();
    assert_eq!(doc["passed"], serde_json::Value::Bool(true));
}
