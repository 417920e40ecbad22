//! Acceptance suite: one pass/fail line per criterion.
//!
//! Criteria 1 to 13 run in-process. Criterion 14 runs `nlclaw selftest` as a separate process on
//! a single worker thread, seeded with this process's results, and requires the two serialised
//! result sets to be byte-identical.

use std::process::{Command, ExitCode};
use std::time::Instant;

use nlclaw::selftest::{results_json, Suite, LIBRARY_CRITERIA, TITLES};

fn main() -> ExitCode {
    let start = Instant::now();
    let mut suite = Suite::new();
    let results = suite.run_all(|r| println!("{}", r.line()));
    let library = results_json(&results);
    let mut all_passed = results.iter().all(|r| r.passed);

    let title = TITLES[LIBRARY_CRITERIA as usize];
    let determinism = determinism_check(&library);
    match &determinism {
        Ok(()) => println!("criterion 14: PASS {title} [library and binary results byte-identical]"),
        Err(why) => {
            all_passed = false;
            println!("criterion 14: FAIL {title} ({why})");
        }
    }
    println!("acceptance finished in {:.1} s", start.elapsed().as_secs_f64());
    if all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn determinism_check(library: &str) -> Result<(), String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("selftest.json");
    std::fs::write(&path, library).map_err(|e| e.to_string())?;
    let output = Command::new(env!("CARGO_BIN_EXE_nlclaw"))
        .arg("selftest")
        .arg("--out")
        .arg(dir.path())
        .env("NLCLAW_THREADS", "1")
        .output()
        .map_err(|e| format!("cannot start nlclaw: {e}"))?;
    let binary = std::fs::read_to_string(&path).map_err(|e| e.to_string())?;
    if binary != library {
        return Err("serialised results differ".into());
    }
    if !output.status.success() {
        return Err(format!("nlclaw selftest exited with {}", output.status));
    }
    Ok(())
}
