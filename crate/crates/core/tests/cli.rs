use std::path::Path;
use std::process::{Command, Output};

fn nlclaw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nlclaw"))
        .args(args)
        .env("NLCLAW_THREADS", "1")
        .output()
        .unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn malformed_scenario_exits_one_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "bad.toml", "T = -1\nepsilon = 0.1\n[initial_data]\ntype = \"riemann\"\nuL = 1\nuR = 0\n");
    let out = dir.path().join("out");
    let o = nlclaw(&["run", &file, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("T must be positive"));
    assert!(!out.exists());
}

#[test]
fn missing_file_and_bad_arguments_exit_one() {
    assert_eq!(nlclaw(&["run", "/nonexistent/scenario.toml"]).status.code(), Some(1));
    assert_eq!(nlclaw(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(nlclaw(&["riemann", "--uL", "1", "--uR", "0", "--mode", "sideways"]).status.code(), Some(1));
    assert_eq!(nlclaw(&["--help"]).status.code(), Some(0));
}

#[test]
fn shock_scenario_exits_zero_and_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(
        dir.path(),
        "shock.toml",
        "name = \"shock\"\nT = 0.5\nepsilon = 0.1\ndx = 4e-3\ndomain = [-1.0, 1.0]\n[initial_data]\ntype = \"riemann\"\nuL = 1.0\nuR = 0.0\n",
    );
    let out = dir.path().join("out");
    let o = nlclaw(&["run", &file, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let csv = std::fs::read_to_string(out.join("shock.csv")).unwrap();
    assert!(csv.lines().any(|l| l == "t,x,u"));
}

#[test]
fn rarefaction_expected_nonconvergence_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(
        dir.path(),
        "fan.toml",
        "name = \"fan\"\nT = 0.5\nepsilon_list = [0.2, 0.1, 0.05]\ndx = 4e-3\ndomain = [-1.0, 1.0]\n\
         expect = \"nonconvergence\"\nreference = \"exact_riemann\"\n\
         [initial_data]\ntype = \"riemann\"\nuL = -1.0\nuR = 1.0\n",
    );
    let out = dir.path().join("out");
    let o = nlclaw(&["sweep", &file, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    assert!(out.join("fan_convergence.dat").exists());
}

#[test]
fn unmet_expectation_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(
        dir.path(),
        "fan.toml",
        "name = \"fan\"\nT = 0.5\nepsilon_list = [0.2, 0.1, 0.05]\ndx = 4e-3\ndomain = [-1.0, 1.0]\n\
         expect = \"convergence\"\nreference = \"exact_riemann\"\n\
         [initial_data]\ntype = \"riemann\"\nuL = -1.0\nuR = 1.0\n",
    );
    let o = nlclaw(&["sweep", &file, "--out", dir.path().join("out").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn riemann_subcommand_accepts_general_flux_modes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let o = nlclaw(&[
        "riemann", "--uL", "1", "--uR", "-0.5", "--flux", "cubic", "--mode", "flux_reg", "--T", "0.3", "--dx", "4e-3",
        "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(out.join("riemann.csv").exists());
}

#[test]
fn euler_and_planar_outputs_use_their_columns() {
    let dir = tempfile::tempdir().unwrap();
    let euler = write(
        dir.path(),
        "e.toml",
        "name = \"e\"\nmode = \"euler\"\nT = 0.1\nepsilon = 0.05\ndx = 5e-3\ndomain = [-1.0, 1.0]\n\
         [initial_data]\ntype = \"expression\"\nrho = \"1 + 0.2*exp(-20*x^2)\"\nv = \"0\"\n",
    );
    let planar = write(
        dir.path(),
        "p.toml",
        "name = \"p\"\nmode = \"nn2d\"\nT = 0.1\nepsilon = 0.2\ndx = 0.05\ndomain = [-1.0, 1.0]\n\
         [initial_data]\ntype = \"expression\"\nu = \"exp(-4*(x^2 + y^2))\"\n",
    );
    let out = dir.path().join("out");
    assert_eq!(nlclaw(&["euler", &euler, "--out", out.to_str().unwrap()]).status.code(), Some(0));
    assert_eq!(nlclaw(&["run", &planar, "--out", out.to_str().unwrap()]).status.code(), Some(0));
    let e = std::fs::read_to_string(out.join("e.csv")).unwrap();
    assert!(e.lines().any(|l| l == "t,x,rho,v"));
    let p = std::fs::read_to_string(out.join("p.csv")).unwrap();
    assert!(p.lines().any(|l| l == "x,y,u"));
}
