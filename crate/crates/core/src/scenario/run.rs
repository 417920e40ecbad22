use std::fmt::Write as _;
use std::io;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::spec::{
    Expectation, InitialDataSpec, OutputFormat, ReferenceChoice, ScenarioMode, ScenarioSpec,
};
use crate::diagnostics::{
    check_invariants, convergence_study_with_runs, measure_front_speed, Check, ConvergenceProblem, ConvergenceTable,
    DiagnosticsConfig, DiagnosticsReport, Reference, StudyConfig,
};
use crate::error::{Error, Result};
use crate::euler::{conservative_residual, from_invariants, solve_isentropic, to_invariants, EulerTrajectory};
use crate::flux::FluxSpec;
use crate::funcspace::{sup_norm, Grid1D, GridFunction1D, RiemannData};
use crate::multidim::{solve_velocity_reg_2d, GridFunction2D, Trajectory2D};
use crate::nonlocal::{
    padded_profile, solve_conservative_nonlocal, solve_general, solve_nn, stride_for, Regularisation, SolverConfig,
    Trajectory,
};
use crate::VERSION;

/// Number of snapshots stored when the scenario does not set a stride.
const DEFAULT_SNAPSHOTS: usize = 50;
/// Padding beyond the scenario window, on top of the finite-speed bound.
const MARGIN: f64 = 0.5;
/// Allowed relative deviation of a measured front speed from the predicted one.
const FRONT_SPEED_TOL: f64 = 0.02;
/// Allowed growth of the 2D total variation, relative to the initial value.
const TV_2D_GROWTH_TOL: f64 = 0.05;
/// Allowed magnitude of a plateau slope for `expect = "nonconvergence"`.
const PLATEAU_SLOPE_TOL: f64 = 0.1;
/// Smallest slope accepted for `expect = "convergence"`.
const CONVERGENCE_SLOPE_MIN: f64 = 0.5;

/// What to do with a scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    /// Solve (or sweep, for `epsilon_list` scenarios) and write every output.
    Run,
    /// Sweep over `epsilon_list` and write the convergence table.
    Sweep,
    /// Run an Euler scenario.
    Euler,
    /// Solve and write the diagnostics report only.
    Verify,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrontSpeedEntry {
    pub measured: f64,
    pub predicted: f64,
    pub std_error: f64,
    pub relative_error: f64,
}

/// Summary of one solve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub epsilon: f64,
    pub dt: f64,
    /// First node, last node and node count of the computational grid.
    pub grid: (f64, f64, usize),
    #[serde(skip_serializing_if = "Option::is_none")]
    pub front_speed: Option<FrontSpeedEntry>,
    pub diagnostics: DiagnosticsReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpectationOutcome {
    pub expected: Expectation,
    pub slope: f64,
    pub passed: bool,
}

/// The structured report written as `<name>_report.json`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioReport {
    pub scenario: String,
    pub mode: ScenarioMode,
    pub command: Command,
    pub version: String,
    #[serde(rename = "T")]
    pub t_final: f64,
    pub dx: f64,
    pub cfl: f64,
    pub domain: (f64, f64),
    pub runs: Vec<RunSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub convergence: Option<ConvergenceTable>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expectation: Option<ExpectationOutcome>,
    pub passed: bool,
}

/// Result of executing a scenario: the report and the files to write, by name.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: ScenarioReport,
    pub files: Vec<(String, String)>,
}

impl Outcome {
    /// 0 when every mode-required check passed, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.report.passed {
            0
        } else {
            2
        }
    }

    /// Writes every file into `dir` (created if needed) and returns the paths.
    pub fn write_to(&self, dir: &Path) -> io::Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let mut paths = Vec::with_capacity(self.files.len());
        for (name, content) in &self.files {
            let path = dir.join(name);
            std::fs::write(&path, content)?;
            paths.push(path);
        }
        Ok(paths)
    }
}

/// Executes a validated scenario. Nothing touches the file system; errors are input errors.
pub fn execute(spec: &ScenarioSpec, command: Command) -> Result<Outcome> {
    let sweep = match command {
        Command::Sweep => {
            if spec.epsilon_list.is_none() {
                return Err(Error::InvalidArgument("sweep needs `epsilon_list`".into()));
            }
            true
        }
        Command::Euler => {
            if spec.mode != ScenarioMode::Euler {
                return Err(Error::InvalidArgument(format!("scenario mode is {}, not euler", spec.mode)));
            }
            false
        }
        Command::Run | Command::Verify => spec.epsilon.is_none(),
    };
    let mut ex = Execution {
        spec,
        diagnostics: DiagnosticsConfig::default(),
        report: ScenarioReport {
            scenario: spec.name.clone(),
            mode: spec.mode,
            command,
            version: VERSION.into(),
            t_final: spec.t_final,
            dx: spec.dx,
            cfl: spec.cfl,
            domain: spec.domain,
            runs: Vec::new(),
            convergence: None,
            expectation: None,
            passed: true,
        },
        files: Vec::new(),
    };
    if sweep {
        ex.sweep()?;
    } else {
        let eps = spec.epsilon.expect("single-run scenarios have epsilon");
        match spec.mode {
            ScenarioMode::Euler => ex.euler(eps)?,
            ScenarioMode::Nn2d => ex.planar(eps)?,
            _ => ex.scalar(eps)?,
        }
    }
    ex.report.passed = ex.report.runs.iter().all(|r| r.diagnostics.passed())
        && ex.report.expectation.as_ref().is_none_or(|e| e.passed);
    let mut report_text = serde_json::to_string_pretty(&ex.report).expect("report serialises");
    report_text.push('\n');
    let mut files = vec![(format!("{}_report.json", spec.name), report_text)];
    if command != Command::Verify {
        files.append(&mut ex.files);
    }
    Ok(Outcome { report: ex.report, files })
}

struct Execution<'a> {
    spec: &'a ScenarioSpec,
    diagnostics: DiagnosticsConfig,
    report: ScenarioReport,
    files: Vec<(String, String)>,
}

impl Execution<'_> {
    fn solver(&self) -> SolverConfig {
        SolverConfig {
            dx: self.spec.dx,
            cfl: self.spec.cfl,
            margin: MARGIN,
            ..SolverConfig::default()
        }
    }

    fn stride(&self, dt: f64) -> usize {
        self.spec
            .output
            .stride
            .unwrap_or_else(|| stride_for(self.spec.t_final, dt, DEFAULT_SNAPSHOTS))
    }

    fn header(&self, epsilon: f64, dt: f64) -> String {
        let s = self.spec;
        format!(
            "# nlclaw {VERSION}\n# scenario: {}\n# mode: {}\n# epsilon: {epsilon}\n# dx: {}\n# dt: {dt}\n# T: {}\n",
            s.name, s.mode, s.dx, s.t_final
        )
    }

    fn scalar(&mut self, eps: f64) -> Result<()> {
        let spec = self.spec;
        let data = spec.initial_data.scalar().expect("scalar modes have scalar data");
        let mut cfg = self.solver();
        let profile = padded_profile(data.as_ref(), spec.domain, eps, spec.t_final, &cfg)?;
        let range = sup_norm(profile.samples());
        let flux = spec.flux.build(range)?;
        let speed = match spec.mode {
            ScenarioMode::Nn => range,
            ScenarioMode::Conservative => range,
            _ => flux.max_speed(profile.samples().min(), profile.samples().max()),
        };
        cfg.stride = self.stride(cfg.cfl_dt(speed));
        let traj = match spec.mode {
            ScenarioMode::Nn => solve_nn(profile, eps, spec.t_final, &cfg)?,
            ScenarioMode::Conservative => solve_conservative_nonlocal(profile.samples(), eps, spec.t_final, &cfg)?,
            ScenarioMode::VelocityReg => solve_general(profile, &flux, eps, spec.t_final, &cfg, Regularisation::Velocity)?,
            ScenarioMode::FluxReg => solve_general(profile, &flux, eps, spec.t_final, &cfg, Regularisation::Flux)?,
            ScenarioMode::Euler | ScenarioMode::Nn2d => unreachable!("dispatched elsewhere"),
        };
        let mut diagnostics = check_invariants(&traj, &self.diagnostics);
        let front_speed = self.front_speed(&traj, &mut diagnostics);
        self.push_run(eps, &traj, diagnostics, front_speed);

        let name = &spec.name;
        let header = self.header(eps, traj.dt());
        self.files.push(self.snapshots_1d(&header, &traj));
        self.files.push((format!("{name}_final.dat"), two_columns(&header, "x u", &window_pairs(traj.last(), spec.domain))));
        if let Ok(fs) = self.measured_front(&traj) {
            self.files.push((format!("{name}_front.dat"), two_columns(&header, "t position", &fs.samples)));
        }
        Ok(())
    }

    fn measured_front(&self, traj: &Trajectory) -> Result<crate::diagnostics::FrontSpeed> {
        let InitialDataSpec::Riemann { ul, ur } = self.spec.initial_data else {
            return Err(Error::InvalidArgument("front speed needs Riemann data".into()));
        };
        let t = self.spec.t_final;
        measure_front_speed(traj, 0.5 * (ul + ur), (0.2 * t, t))
    }

    /// Measures the front speed of compressive Riemann data and adds the required check.
    fn front_speed(&self, traj: &Trajectory, report: &mut DiagnosticsReport) -> Option<FrontSpeedEntry> {
        let predicted = self.spec.predicted_front_speed()?;
        let (measured, std_error) = match self.measured_front(traj) {
            Ok(fs) => (fs.speed, fs.std_error),
            Err(_) => (f64::NAN, f64::NAN),
        };
        let relative_error = (measured - predicted).abs() / predicted.abs().max(f64::MIN_POSITIVE);
        report.push(Check::new(
            "front_speed",
            "Riemann front speed",
            relative_error,
            FRONT_SPEED_TOL,
            true,
        ));
        Some(FrontSpeedEntry {
            measured,
            predicted,
            std_error,
            relative_error,
        })
    }

    fn push_run(&mut self, epsilon: f64, traj: &Trajectory, diagnostics: DiagnosticsReport, front_speed: Option<FrontSpeedEntry>) {
        let g = traj.grid();
        self.report.runs.push(RunSummary {
            epsilon,
            dt: traj.dt(),
            grid: (g.x0, g.x_last(), g.n),
            front_speed,
            diagnostics,
        });
    }

    fn snapshots_1d(&self, header: &str, traj: &Trajectory) -> (String, String) {
        let (a, b) = self.spec.domain;
        let name = &self.spec.name;
        match self.spec.output.format {
            OutputFormat::Csv => {
                let mut out = String::from(header);
                out.push_str("t,x,u\n");
                for (t, u) in traj.times().iter().zip(traj.states()) {
                    for (x, v) in window_pairs(u, (a, b)) {
                        let _ = writeln!(out, "{t},{x},{v}");
                    }
                }
                (format!("{name}.csv"), out)
            }
            OutputFormat::Json => {
                let xs: Vec<f64> = window_pairs(traj.initial(), (a, b)).into_iter().map(|p| p.0).collect();
                let snapshots: Vec<Snapshot> = traj
                    .times()
                    .iter()
                    .zip(traj.states())
                    .map(|(&t, u)| Snapshot {
                        t,
                        u: window_pairs(u, (a, b)).into_iter().map(|p| p.1).collect(),
                    })
                    .collect();
                let doc = SnapshotDocument {
                    meta: self.meta(traj.epsilon(), traj.dt()),
                    columns: ["t", "x", "u"],
                    x: xs,
                    snapshots,
                };
                (format!("{name}.json"), json_text(&doc))
            }
        }
    }

    fn meta(&self, epsilon: f64, dt: f64) -> Meta {
        Meta {
            version: VERSION.into(),
            scenario: self.spec.name.clone(),
            mode: self.spec.mode,
            epsilon,
            dx: self.spec.dx,
            dt,
            t_final: self.spec.t_final,
        }
    }

    fn sweep(&mut self) -> Result<()> {
        let spec = self.spec;
        if spec.mode != ScenarioMode::Nn {
            return Err(Error::InvalidArgument(format!("epsilon sweeps support mode nn, not {}", spec.mode)));
        }
        let data = spec.initial_data.scalar().expect("nn scenarios have scalar data");
        let reference = match (spec.reference, &spec.initial_data) {
            (Some(ReferenceChoice::ExactRiemann) | None, InitialDataSpec::Riemann { ul, ur }) => {
                Reference::ExactRiemann(RiemannData::new(*ul, *ur))
            }
            (Some(ReferenceChoice::ExactRiemann), _) => {
                return Err(Error::InvalidArgument("exact_riemann needs Riemann data".into()))
            }
            (Some(ReferenceChoice::LaxOleinik) | None, _) => Reference::LaxOleinik,
            (Some(ReferenceChoice::Godunov), _) => Reference::Godunov(FluxSpec::burgers()),
            (Some(ReferenceChoice::FrontTracking), _) => Reference::FrontTracking,
        };
        let problem = ConvergenceProblem {
            name: spec.name.clone(),
            data,
            t_final: spec.t_final,
            window: spec.domain,
        };
        let cfg = StudyConfig {
            solver: self.solver(),
            ..StudyConfig::default()
        };
        let epsilons = spec.epsilon_list.clone().expect("sweeps have epsilon_list");
        let (table, runs) = convergence_study_with_runs(&problem, &epsilons, &reference, &cfg)?;
        for (row, traj) in table.rows.iter().zip(&runs) {
            let diagnostics = check_invariants(traj, &self.diagnostics);
            self.push_run(row.epsilon, traj, diagnostics, None);
            let header = self.header(row.epsilon, traj.dt());
            let (name, content) = self.snapshots_1d(&header, traj);
            let stem = name.rsplit_once('.').map_or(name.as_str(), |(s, _)| s).to_string();
            let ext = if self.spec.output.format == OutputFormat::Csv { "csv" } else { "json" };
            self.files.push((format!("{stem}_eps{}.{ext}", row.epsilon), content));
        }
        let errors: Vec<(f64, f64)> = table
            .rows
            .iter()
            .map(|r| (r.epsilon, r.error_l1_resolved.unwrap_or(r.error_l1)))
            .collect();
        let header = format!(
            "# nlclaw {VERSION}\n# scenario: {}\n# mode: {}\n# reference: {}\n# dx: min({}, epsilon/8)\n# T: {}\n",
            spec.name,
            spec.mode,
            table.reference,
            spec.dx,
            spec.t_final
        );
        self.files.push((format!("{}_convergence.dat", spec.name), two_columns(&header, "epsilon l1_error", &errors)));
        if let Some(expected) = spec.expect {
            let decreasing = errors.windows(2).all(|w| w[1].1 < w[0].1);
            let outcome = match expected {
                Expectation::Convergence => {
                    let slope = table.resolved_rate.or(table.raw_rate).unwrap_or(f64::NAN);
                    ExpectationOutcome {
                        expected,
                        slope,
                        passed: decreasing && slope >= CONVERGENCE_SLOPE_MIN,
                    }
                }
                Expectation::Nonconvergence => {
                    let slope = table.raw_rate.unwrap_or(f64::NAN);
                    ExpectationOutcome {
                        expected,
                        slope,
                        passed: slope.abs() <= PLATEAU_SLOPE_TOL,
                    }
                }
            };
            self.report.expectation = Some(outcome);
        }
        self.report.convergence = Some(table);
        Ok(())
    }

    fn euler(&mut self, eps: f64) -> Result<()> {
        let spec = self.spec;
        let InitialDataSpec::Euler { rho, v } = &spec.initial_data else {
            return Err(Error::InvalidArgument("euler scenarios need `rho` and `v` expressions".into()));
        };
        let mut cfg = self.solver();
        let (a, b) = spec.domain;
        let probe = Grid1D::covering(a - 1.0, b + 1.0, cfg.dx)?;
        let speed = probe
            .nodes()
            .iter()
            .map(|&x| (rho.eval(x) + v.eval(x)).abs().max((rho.eval(x) - v.eval(x)).abs()))
            .fold(0.0, f64::max);
        let g = cfg.padded_grid(a, b, speed, eps, spec.t_final)?;
        let rho0 = GridFunction1D::from_fn(g.x0, g.dx, g.n, |x| rho.eval(x))?;
        let vel0 = GridFunction1D::from_fn(g.x0, g.dx, g.n, |x| v.eval(x))?;
        if rho0.values().iter().chain(vel0.values()).any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("initial density or velocity is not finite".into()));
        }
        cfg.stride = 1;
        let traj = solve_isentropic(&rho0, &vel0, eps, spec.t_final, &cfg)?;
        let stride = self.stride(traj.dt);

        let mut report = DiagnosticsReport::new("euler", "invariant round trip, invariant ranges, no vacuum");
        let last = traj.last();
        let (r, w) = from_invariants(last);
        let back = to_invariants(&r, &w)?;
        let round_trip = back
            .mu
            .values()
            .iter()
            .zip(last.mu.values())
            .chain(back.lam.values().iter().zip(last.lam.values()))
            .map(|(p, q)| (p - q).abs() / q.abs().max(1.0))
            .fold(0.0, f64::max);
        report.push(Check::new("round_trip", "invariant round trip", round_trip, 4.0 * f64::EPSILON, true));
        let start = &traj.states[0];
        let excursion = |f: fn(&crate::euler::EulerState) -> &GridFunction1D| {
            let (lo, hi) = (f(start).min(), f(start).max());
            traj.states
                .iter()
                .map(|s| (lo - f(s).min()).max(f(s).max() - hi).max(0.0))
                .fold(0.0, f64::max)
        };
        report.push(Check::new("mu_max_principle", "maximum principle for rho + v", excursion(|s| &s.mu), 0.0, true));
        report.push(Check::new("lambda_max_principle", "maximum principle for rho - v", excursion(|s| &s.lam), 0.0, true));
        let vacuum_nodes = traj
            .states
            .iter()
            .map(|s| s.rho().values().iter().filter(|&&r| r <= 0.0).count())
            .max()
            .unwrap_or(0);
        report.push(Check::new("vacuum_nodes", "density stays positive", vacuum_nodes as f64, 0.0, true));
        if traj.times.len() >= 3 {
            let (mass, momentum) = conservative_residual(&traj.states, &traj.times)?;
            report.push(Check::new("mass_residual", "weak-form mass residual", mass, f64::INFINITY, false));
            report.push(Check::new("momentum_residual", "weak-form momentum residual", momentum, f64::INFINITY, false));
        }
        self.report.runs.push(RunSummary {
            epsilon: eps,
            dt: traj.dt,
            grid: (g.x0, g.x_last(), g.n),
            front_speed: None,
            diagnostics: report,
        });

        let header = self.header(eps, traj.dt);
        let name = &spec.name;
        self.files.push(self.snapshots_euler(&header, &traj, stride));
        let (rho_t, vel_t) = from_invariants(traj.last());
        self.files.push((format!("{name}_rho.dat"), two_columns(&header, "x rho", &window_pairs(&rho_t, spec.domain))));
        self.files.push((format!("{name}_v.dat"), two_columns(&header, "x v", &window_pairs(&vel_t, spec.domain))));
        Ok(())
    }

    fn snapshots_euler(&self, header: &str, traj: &EulerTrajectory, stride: usize) -> (String, String) {
        let name = &self.spec.name;
        let last = traj.states.len() - 1;
        let picked: Vec<usize> = (0..=last).filter(|&k| k % stride == 0 || k == last).collect();
        let fields: Vec<(f64, Vec<(f64, f64)>, Vec<(f64, f64)>)> = picked
            .iter()
            .map(|&k| {
                let (r, v) = from_invariants(&traj.states[k]);
                (traj.times[k], window_pairs(&r, self.spec.domain), window_pairs(&v, self.spec.domain))
            })
            .collect();
        match self.spec.output.format {
            OutputFormat::Csv => {
                let mut out = String::from(header);
                out.push_str("t,x,rho,v\n");
                for (t, r, v) in &fields {
                    for ((x, rv), (_, vv)) in r.iter().zip(v) {
                        let _ = writeln!(out, "{t},{x},{rv},{vv}");
                    }
                }
                (format!("{name}.csv"), out)
            }
            OutputFormat::Json => {
                let doc = EulerDocument {
                    meta: self.meta(self.spec.epsilon.unwrap_or(f64::NAN), traj.dt),
                    columns: ["t", "x", "rho", "v"],
                    x: fields.first().map(|f| f.1.iter().map(|p| p.0).collect()).unwrap_or_default(),
                    snapshots: fields
                        .iter()
                        .map(|(t, r, v)| EulerSnapshot {
                            t: *t,
                            rho: r.iter().map(|p| p.1).collect(),
                            v: v.iter().map(|p| p.1).collect(),
                        })
                        .collect(),
                };
                (format!("{name}.json"), json_text(&doc))
            }
        }
    }

    fn planar(&mut self, eps: f64) -> Result<()> {
        let spec = self.spec;
        let InitialDataSpec::Expression(expr) = &spec.initial_data else {
            return Err(Error::InvalidArgument("nn2d scenarios need expression initial data".into()));
        };
        let mut cfg = self.solver();
        let (ax, bx) = spec.domain;
        let (ay, by) = spec.domain_y;
        let probe_x = Grid1D::covering(ax, bx, cfg.dx)?;
        let probe_y = Grid1D::covering(ay, by, cfg.dx)?;
        let mut sup: f64 = 0.0;
        for &x in &probe_x.nodes() {
            for &y in &probe_y.nodes() {
                sup = sup.max(expr.eval_xy(x, y).abs());
            }
        }
        let flux = spec.flux.build(sup)?;
        let speed = flux.max_speed(-sup, sup);
        let gx = cfg.padded_grid(ax, bx, speed, eps, spec.t_final)?;
        let gy = cfg.padded_grid(ay, by, speed, eps, spec.t_final)?;
        let u0 = GridFunction2D::from_fn((gx.x0, gy.x0), (gx.dx, gy.dx), gx.n, gy.n, |x, y| expr.eval_xy(x, y))?;
        if u0.values().iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("initial data is not finite".into()));
        }
        cfg.stride = self.stride(cfg.cfl_dt(speed));
        let traj = solve_velocity_reg_2d(&u0, [&flux, &flux], eps, spec.t_final, &cfg)?;

        let mut report = DiagnosticsReport::new("nn2d", "maximum principle, bounded total variation growth");
        let (lo, hi) = (u0.min(), u0.max());
        let excursion = traj
            .states()
            .iter()
            .map(|s| (lo - s.min()).max(s.max() - hi).max(0.0))
            .fold(0.0, f64::max);
        report.push(Check::new("max_principle", "maximum principle", excursion, 0.0, true));
        report.push(Check::new("tv_growth", "total variation growth", traj.tv_growth() - 1.0, TV_2D_GROWTH_TOL, true));
        self.report.runs.push(RunSummary {
            epsilon: eps,
            dt: traj.dt(),
            grid: (gx.x0, gx.x_last(), gx.n),
            front_speed: None,
            diagnostics: report,
        });

        let header = self.header(eps, traj.dt());
        let name = &spec.name;
        self.files.push(self.snapshot_2d(&header, &traj));
        let tv: Vec<(f64, f64)> = traj.times().iter().copied().zip(traj.tv().iter().copied()).collect();
        self.files.push((format!("{name}_tv.dat"), two_columns(&header, "t tv", &tv)));
        Ok(())
    }

    fn snapshot_2d(&self, header: &str, traj: &Trajectory2D) -> (String, String) {
        let name = &self.spec.name;
        let u = traj.last();
        let (nx, ny) = u.shape();
        let (ax, bx) = self.spec.domain;
        let (ay, by) = self.spec.domain_y;
        let inside = |v: f64, a: f64, b: f64, h: f64| v >= a - 1e-9 * h && v <= b + 1e-9 * h;
        let (hx, hy) = u.spacing();
        let cols: Vec<usize> = (0..nx).filter(|&i| inside(u.x(i), ax, bx, hx)).collect();
        let rows: Vec<usize> = (0..ny).filter(|&j| inside(u.y(j), ay, by, hy)).collect();
        match self.spec.output.format {
            OutputFormat::Csv => {
                let mut out = format!("{header}# t: {}\nx,y,u\n", traj.times().last().copied().unwrap_or(0.0));
                for &j in &rows {
                    for &i in &cols {
                        let _ = writeln!(out, "{},{},{}", u.x(i), u.y(j), u.at(i, j));
                    }
                }
                (format!("{name}.csv"), out)
            }
            OutputFormat::Json => {
                let doc = PlanarDocument {
                    meta: self.meta(traj.epsilon(), traj.dt()),
                    columns: ["x", "y", "u"],
                    t: traj.times().last().copied().unwrap_or(0.0),
                    x: cols.iter().map(|&i| u.x(i)).collect(),
                    y: rows.iter().map(|&j| u.y(j)).collect(),
                    u: rows.iter().map(|&j| cols.iter().map(|&i| u.at(i, j)).collect()).collect(),
                };
                (format!("{name}.json"), json_text(&doc))
            }
        }
    }
}

#[derive(Serialize)]
struct Meta {
    version: String,
    scenario: String,
    mode: ScenarioMode,
    epsilon: f64,
    dx: f64,
    dt: f64,
    #[serde(rename = "T")]
    t_final: f64,
}

#[derive(Serialize)]
struct Snapshot {
    t: f64,
    u: Vec<f64>,
}

#[derive(Serialize)]
struct SnapshotDocument {
    meta: Meta,
    columns: [&'static str; 3],
    x: Vec<f64>,
    snapshots: Vec<Snapshot>,
}

#[derive(Serialize)]
struct EulerSnapshot {
    t: f64,
    rho: Vec<f64>,
    v: Vec<f64>,
}

#[derive(Serialize)]
struct EulerDocument {
    meta: Meta,
    columns: [&'static str; 4],
    x: Vec<f64>,
    snapshots: Vec<EulerSnapshot>,
}

#[derive(Serialize)]
struct PlanarDocument {
    meta: Meta,
    columns: [&'static str; 3],
    t: f64,
    x: Vec<f64>,
    y: Vec<f64>,
    u: Vec<Vec<f64>>,
}

fn json_text(doc: &impl Serialize) -> String {
    let mut s = serde_json::to_string(doc).expect("document serialises");
    s.push('\n');
    s
}

/// `(x, u)` pairs of the nodes inside `[a, b]`.
fn window_pairs(u: &GridFunction1D, (a, b): (f64, f64)) -> Vec<(f64, f64)> {
    let tol = 1e-9 * u.dx();
    (0..u.len())
        .filter(|&i| u.x(i) >= a - tol && u.x(i) <= b + tol)
        .map(|i| (u.x(i), u.values()[i]))
        .collect()
}

fn two_columns(header: &str, columns: &str, rows: &[(f64, f64)]) -> String {
    let mut out = String::from(header);
    let _ = writeln!(out, "# {columns}");
    for (a, b) in rows {
        let _ = writeln!(out, "{a} {b}");
    }
    out
}
