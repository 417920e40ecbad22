use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;
use toml::{Table, Value};

use crate::expr::Expr;
use crate::flux::FluxSpec;
use crate::funcspace::{ClosedForm, InitialData, PiecewiseInitialData, RiemannData};

/// Why a scenario document was rejected.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },

    #[error("invalid scenario:\n  - {}", .0.join("\n  - "))]
    Invalid(Vec<String>),
}

/// Which equation a scenario solves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioMode {
    Nn,
    Conservative,
    VelocityReg,
    FluxReg,
    Euler,
    Nn2d,
}

impl ScenarioMode {
    const ALL: [(&'static str, ScenarioMode); 6] = [
        ("nn", ScenarioMode::Nn),
        ("conservative", ScenarioMode::Conservative),
        ("velocity_reg", ScenarioMode::VelocityReg),
        ("flux_reg", ScenarioMode::FluxReg),
        ("euler", ScenarioMode::Euler),
        ("nn2d", ScenarioMode::Nn2d),
    ];

    pub fn parse(name: &str) -> Option<Self> {
        Self::ALL.iter().find(|(n, _)| *n == name).map(|(_, m)| *m)
    }

    pub fn as_str(self) -> &'static str {
        Self::ALL.iter().find(|(_, m)| *m == self).map(|(n, _)| *n).expect("every mode is listed")
    }
}

impl fmt::Display for ScenarioMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitialDataSpec {
    Riemann { ul: f64, ur: f64 },
    Piecewise(PiecewiseInitialData),
    /// Closed form in `x` (and `y` for 2D scenarios).
    Expression(Expr),
    /// Density and velocity of an Euler scenario.
    Euler { rho: Expr, v: Expr },
}

impl InitialDataSpec {
    /// The scalar data as an evaluable function of `x`; `None` for Euler data.
    pub fn scalar(&self) -> Option<Arc<dyn InitialData>> {
        match self {
            InitialDataSpec::Riemann { ul, ur } => Some(Arc::new(RiemannData::new(*ul, *ur))),
            InitialDataSpec::Piecewise(p) => Some(Arc::new(p.clone())),
            InitialDataSpec::Expression(e) => Some(Arc::new(ClosedForm { expr: e.clone() })),
            InitialDataSpec::Euler { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FluxChoice {
    Burgers,
    Cubic,
    /// `f` and `f'` as expressions in `x`, which stands for the state `u`.
    Expression { f: Expr, fprime: Expr },
}

impl FluxChoice {
    /// Builds the flux with constants taken over `[-range, range]`.
    pub fn build(&self, range: f64) -> crate::error::Result<FluxSpec> {
        match self {
            FluxChoice::Burgers => Ok(FluxSpec::burgers()),
            FluxChoice::Cubic => Ok(FluxSpec::cubic(range)),
            FluxChoice::Expression { f, fprime } => FluxSpec::from_expressions(f.clone(), fprime.clone(), range),
        }
    }

    pub fn is_burgers(&self) -> bool {
        matches!(self, FluxChoice::Burgers)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OutputSpec {
    pub format: OutputFormat,
    /// Store every `stride`-th step; chosen automatically when absent.
    pub stride: Option<usize>,
}

/// Expected outcome of an ε-sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Expectation {
    Convergence,
    Nonconvergence,
}

/// Oracle used as the target of an ε-sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReferenceChoice {
    LaxOleinik,
    ExactRiemann,
    Godunov,
    FrontTracking,
}

/// A validated scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSpec {
    pub name: String,
    pub mode: ScenarioMode,
    pub initial_data: InitialDataSpec,
    pub flux: FluxChoice,
    /// Single `epsilon`, when given.
    pub epsilon: Option<f64>,
    /// `epsilon_list`, when given.
    pub epsilon_list: Option<Vec<f64>>,
    pub t_final: f64,
    pub dx: f64,
    pub cfl: f64,
    /// Window `[a, b]` reported and measured; the computational grid is padded beyond it.
    pub domain: (f64, f64),
    /// `y` window of 2D scenarios (defaults to `domain`).
    pub domain_y: (f64, f64),
    pub output: OutputSpec,
    pub expect: Option<Expectation>,
    pub reference: Option<ReferenceChoice>,
}

impl ScenarioSpec {
    /// Front speed of the regularised Riemann problem when the data form a compressive jump:
    /// `(u_L + u_R)/2` for nn, the mean of `f'` for velocity_reg and `f'` at the mean for
    /// flux_reg. `None` for other data or modes.
    pub fn predicted_front_speed(&self) -> Option<f64> {
        let InitialDataSpec::Riemann { ul, ur } = self.initial_data else {
            return None;
        };
        let flux = self.flux.build(ul.abs().max(ur.abs())).ok()?;
        if !(flux.fprime(ul) > flux.fprime(ur)) {
            return None;
        }
        match self.mode {
            ScenarioMode::Nn if self.flux.is_burgers() => Some(0.5 * (ul + ur)),
            ScenarioMode::VelocityReg => Some(0.5 * (flux.fprime(ul) + flux.fprime(ur))),
            ScenarioMode::FluxReg => Some(flux.fprime(0.5 * (ul + ur))),
            _ => None,
        }
    }

    /// All ε values of the scenario, `epsilon` first.
    pub fn epsilons(&self) -> Vec<f64> {
        self.epsilon.iter().copied().chain(self.epsilon_list.iter().flatten().copied()).collect()
    }
}

/// Parses and validates a scenario document; see the README for the schema.
///
/// Syntax errors stop parsing and carry the line and column. Every semantic problem is collected
/// before returning.
pub fn parse_scenario(text: &str) -> Result<ScenarioSpec, ScenarioError> {
    let table: Table = text.parse().map_err(|e: toml::de::Error| {
        let (line, column) = e.span().map_or((1, 1), |s| line_column(text, s.start));
        ScenarioError::Syntax {
            line,
            column,
            message: e.message().trim().to_string(),
        }
    })?;
    let mut r = Reader::default();
    let spec = r.scenario(&table);
    match spec {
        Some(spec) if r.errors.is_empty() => Ok(spec),
        _ => Err(ScenarioError::Invalid(r.errors)),
    }
}

fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

const TOP_KEYS: [&str; 14] = [
    "name",
    "mode",
    "T",
    "epsilon",
    "epsilon_list",
    "dx",
    "cfl",
    "domain",
    "domain_y",
    "expect",
    "reference",
    "initial_data",
    "flux",
    "output",
];

#[derive(Default)]
struct Reader {
    errors: Vec<String>,
}

impl Reader {
    fn error(&mut self, msg: impl Into<String>) {
        self.errors.push(msg.into());
    }

    fn unknown_keys(&mut self, table: &Table, allowed: &[&str], section: &str) {
        for key in table.keys() {
            if !allowed.contains(&key.as_str()) {
                self.error(format!("unknown key `{section}{key}`"));
            }
        }
    }

    fn number(&mut self, table: &Table, key: &str, path: &str) -> Option<f64> {
        match table.get(key)? {
            Value::Float(v) => Some(*v),
            Value::Integer(v) => Some(*v as f64),
            other => {
                self.error(format!("`{path}` must be a number, found {}", other.type_str()));
                None
            }
        }
    }

    fn string<'t>(&mut self, table: &'t Table, key: &str, path: &str) -> Option<&'t str> {
        match table.get(key)? {
            Value::String(s) => Some(s),
            other => {
                self.error(format!("`{path}` must be a string, found {}", other.type_str()));
                None
            }
        }
    }

    fn numbers(&mut self, table: &Table, key: &str, path: &str) -> Option<Vec<f64>> {
        let Value::Array(items) = table.get(key)? else {
            self.error(format!("`{path}` must be an array of numbers"));
            return None;
        };
        let mut out = Vec::with_capacity(items.len());
        for item in items {
            match item {
                Value::Float(v) => out.push(*v),
                Value::Integer(v) => out.push(*v as f64),
                _ => {
                    self.error(format!("`{path}` must be an array of numbers"));
                    return None;
                }
            }
        }
        Some(out)
    }

    fn interval(&mut self, table: &Table, key: &str) -> Option<(f64, f64)> {
        let v = self.numbers(table, key, key)?;
        if v.len() != 2 || !(v[0] < v[1]) || v.iter().any(|x| !x.is_finite()) {
            self.error(format!("`{key}` must be [a, b] with a < b"));
            return None;
        }
        Some((v[0], v[1]))
    }

    fn expression(&mut self, text: &str, path: &str, with_y: bool) -> Option<Expr> {
        let parsed = if with_y { Expr::parse_xy(text) } else { Expr::parse(text) };
        parsed.map_err(|e| self.error(format!("`{path}`: {e}"))).ok()
    }

    fn required<T>(&mut self, value: Option<T>, table: &Table, key: &str, path: &str) -> Option<T> {
        if value.is_none() && !table.contains_key(key) {
            self.error(format!("missing `{path}`"));
        }
        value
    }

    fn sub_table<'t>(&mut self, table: &'t Table, key: &str) -> Option<&'t Table> {
        match table.get(key)? {
            Value::Table(t) => Some(t),
            _ => {
                self.error(format!("`{key}` must be a table"));
                None
            }
        }
    }

    fn scenario(&mut self, t: &Table) -> Option<ScenarioSpec> {
        self.unknown_keys(t, &TOP_KEYS, "");
        let name = self.string(t, "name", "name").unwrap_or("scenario").to_string();
        if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || "-_.".contains(c)) {
            self.error("`name` must be nonempty and use only letters, digits, `-`, `_` and `.`");
        }
        let mode = match self.string(t, "mode", "mode") {
            None => Some(ScenarioMode::Nn),
            Some(m) => {
                let mode = ScenarioMode::parse(m);
                if mode.is_none() {
                    self.error(format!(
                        "unknown mode `{m}` (expected nn, conservative, velocity_reg, flux_reg, euler or nn2d)"
                    ));
                }
                mode
            }
        };

        let t_final = self.number(t, "T", "T");
        let t_final = self.required(t_final, t, "T", "T");
        if let Some(tf) = t_final {
            if !(tf > 0.0 && tf.is_finite()) {
                self.error("T must be positive");
            }
        }
        let dx = self.number(t, "dx", "dx").unwrap_or(1e-3);
        if !(dx > 0.0 && dx.is_finite()) {
            self.error("dx must be positive");
        }
        let cfl = self.number(t, "cfl", "cfl").unwrap_or(0.5);
        if !(cfl > 0.0 && cfl <= 1.0) {
            self.error("cfl must lie in (0, 1]");
        }

        let epsilon = self.number(t, "epsilon", "epsilon");
        let epsilon_list = self.numbers(t, "epsilon_list", "epsilon_list");
        if !t.contains_key("epsilon") && !t.contains_key("epsilon_list") {
            self.error("one of `epsilon` or `epsilon_list` is required");
        }
        if let Some(list) = &epsilon_list {
            if list.is_empty() {
                self.error("epsilon_list must not be empty");
            }
        }
        for e in epsilon.iter().chain(epsilon_list.iter().flatten()) {
            if !(*e > 0.0 && e.is_finite()) {
                self.error(format!("epsilon must be positive (got {e})"));
            } else if *e < dx * (1.0 - 1e-12) {
                self.error(format!("epsilon {e} is smaller than dx {dx}"));
            }
        }

        let domain = if t.contains_key("domain") { self.interval(t, "domain") } else { Some((-2.0, 2.0)) };
        let domain_y = if t.contains_key("domain_y") { self.interval(t, "domain_y") } else { domain };

        let expect = self.string(t, "expect", "expect").and_then(|s| match s {
            "convergence" => Some(Expectation::Convergence),
            "nonconvergence" => Some(Expectation::Nonconvergence),
            other => {
                self.error(format!("unknown expectation `{other}` (expected convergence or nonconvergence)"));
                None
            }
        });
        let reference = self.string(t, "reference", "reference").and_then(|s| match s {
            "lax_oleinik" => Some(ReferenceChoice::LaxOleinik),
            "exact_riemann" => Some(ReferenceChoice::ExactRiemann),
            "godunov" => Some(ReferenceChoice::Godunov),
            "front_tracking" => Some(ReferenceChoice::FrontTracking),
            other => {
                self.error(format!(
                    "unknown reference `{other}` (expected lax_oleinik, exact_riemann, godunov or front_tracking)"
                ));
                None
            }
        });

        let initial_data = match self.sub_table(t, "initial_data") {
            Some(d) => self.initial_data(d, mode.unwrap_or(ScenarioMode::Nn)),
            None => {
                if !t.contains_key("initial_data") {
                    self.error("missing `[initial_data]` table");
                }
                None
            }
        };
        let flux = match self.sub_table(t, "flux") {
            Some(f) => self.flux(f),
            None => Some(FluxChoice::Burgers),
        };
        let output = match self.sub_table(t, "output") {
            Some(o) => self.output(o),
            None => Some(OutputSpec {
                format: OutputFormat::Csv,
                stride: None,
            }),
        };

        if let (Some(mode), Some(flux)) = (mode, &flux) {
            if matches!(mode, ScenarioMode::Nn | ScenarioMode::Conservative | ScenarioMode::Euler) && !flux.is_burgers() {
                self.error(format!("mode {mode} uses the Burgers flux; remove the `[flux]` table or pick velocity_reg/flux_reg/nn2d"));
            }
            if mode == ScenarioMode::Conservative && epsilon_list.is_some() {
                self.error("epsilon sweeps run the nn solver; use mode nn with `epsilon_list`");
            }
        }
        if matches!(reference, Some(ReferenceChoice::ExactRiemann))
            && !matches!(initial_data, Some(InitialDataSpec::Riemann { .. }))
        {
            self.error("reference exact_riemann needs riemann initial data");
        }

        Some(ScenarioSpec {
            name,
            mode: mode?,
            initial_data: initial_data?,
            flux: flux?,
            epsilon,
            epsilon_list,
            t_final: t_final?,
            dx,
            cfl,
            domain: domain?,
            domain_y: domain_y?,
            output: output?,
            expect,
            reference,
        })
    }

    fn initial_data(&mut self, d: &Table, mode: ScenarioMode) -> Option<InitialDataSpec> {
        let kind = self.string(d, "type", "initial_data.type");
        let kind = self.required(kind, d, "type", "initial_data.type")?;
        let euler = mode == ScenarioMode::Euler;
        let planar = mode == ScenarioMode::Nn2d;
        match kind {
            "riemann" => {
                self.unknown_keys(d, &["type", "uL", "uR"], "initial_data.");
                let ul = self.number(d, "uL", "initial_data.uL");
                let ul = self.required(ul, d, "uL", "initial_data.uL");
                let ur = self.number(d, "uR", "initial_data.uR");
                let ur = self.required(ur, d, "uR", "initial_data.uR");
                if euler || planar {
                    self.error(format!("mode {mode} needs expression initial data"));
                    return None;
                }
                Some(InitialDataSpec::Riemann { ul: ul?, ur: ur? })
            }
            "piecewise" => {
                self.unknown_keys(d, &["type", "breakpoints", "pieces", "C"], "initial_data.");
                let breakpoints = self.numbers(d, "breakpoints", "initial_data.breakpoints");
                let breakpoints = self.required(breakpoints, d, "breakpoints", "initial_data.breakpoints");
                let c = self.number(d, "C", "initial_data.C");
                let c = self.required(c, d, "C", "initial_data.C");
                let pieces = match d.get("pieces") {
                    Some(Value::Array(items)) => {
                        let mut out = Vec::new();
                        for (k, item) in items.iter().enumerate() {
                            match item {
                                Value::String(s) => out.push(self.expression(s, &format!("initial_data.pieces[{k}]"), false)),
                                _ => self.error("`initial_data.pieces` must be an array of strings"),
                            }
                        }
                        out.into_iter().collect::<Option<Vec<Expr>>>()
                    }
                    Some(_) => {
                        self.error("`initial_data.pieces` must be an array of strings");
                        None
                    }
                    None => {
                        self.error("missing `initial_data.pieces`");
                        None
                    }
                };
                if euler || planar {
                    self.error(format!("mode {mode} needs expression initial data"));
                    return None;
                }
                match PiecewiseInitialData::new(breakpoints?, pieces?, c?) {
                    Ok(p) => Some(InitialDataSpec::Piecewise(p)),
                    Err(e) => {
                        self.error(format!("initial_data: {e}"));
                        None
                    }
                }
            }
            "expression" if euler => {
                self.unknown_keys(d, &["type", "rho", "v"], "initial_data.");
                let rho = self.string(d, "rho", "initial_data.rho");
                let rho = self.required(rho, d, "rho", "initial_data.rho");
                let v = self.string(d, "v", "initial_data.v");
                let v = self.required(v, d, "v", "initial_data.v");
                let rho = rho.and_then(|s| self.expression(s, "initial_data.rho", false));
                let v = v.and_then(|s| self.expression(s, "initial_data.v", false));
                Some(InitialDataSpec::Euler { rho: rho?, v: v? })
            }
            "expression" => {
                self.unknown_keys(d, &["type", "u"], "initial_data.");
                let u = self.string(d, "u", "initial_data.u");
                let u = self.required(u, d, "u", "initial_data.u")?;
                self.expression(u, "initial_data.u", planar).map(InitialDataSpec::Expression)
            }
            other => {
                self.error(format!("unknown initial_data.type `{other}` (expected riemann, piecewise or expression)"));
                None
            }
        }
    }

    fn flux(&mut self, f: &Table) -> Option<FluxChoice> {
        let kind = self.string(f, "type", "flux.type");
        let kind = self.required(kind, f, "type", "flux.type")?;
        match kind {
            "burgers" | "cubic" => {
                self.unknown_keys(f, &["type"], "flux.");
                Some(if kind == "burgers" { FluxChoice::Burgers } else { FluxChoice::Cubic })
            }
            "expression" => {
                self.unknown_keys(f, &["type", "f", "fprime"], "flux.");
                let fs = self.string(f, "f", "flux.f");
                let fs = self.required(fs, f, "f", "flux.f");
                let fp = self.string(f, "fprime", "flux.fprime");
                let fp = self.required(fp, f, "fprime", "flux.fprime");
                let fe = fs.and_then(|s| self.expression(s, "flux.f", false));
                let fpe = fp.and_then(|s| self.expression(s, "flux.fprime", false));
                Some(FluxChoice::Expression { f: fe?, fprime: fpe? })
            }
            other => {
                self.error(format!("unknown flux `{other}` (expected burgers, cubic or expression)"));
                None
            }
        }
    }

    fn output(&mut self, o: &Table) -> Option<OutputSpec> {
        self.unknown_keys(o, &["format", "stride"], "output.");
        let format = match self.string(o, "format", "output.format") {
            None | Some("csv") => Some(OutputFormat::Csv),
            Some("json") => Some(OutputFormat::Json),
            Some(other) => {
                self.error(format!("unknown output.format `{other}` (expected csv or json)"));
                None
            }
        };
        let stride = match o.get("stride") {
            None => None,
            Some(Value::Integer(s)) if *s >= 1 => Some(*s as usize),
            Some(_) => {
                self.error("`output.stride` must be a positive integer");
                return None;
            }
        };
        Some(OutputSpec { format: format?, stride })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SHOCK: &str = "T = 1\nepsilon = 0.1\n[initial_data]\ntype = \"riemann\"\nuL = 1\nuR = 0\n";

    #[test]
    fn minimal_shock() {
        let s = parse_scenario(SHOCK).unwrap();
        assert_eq!(s.mode, ScenarioMode::Nn);
        assert_eq!(s.predicted_front_speed(), Some(0.5));
        assert_eq!(s.dx, 1e-3);
        assert_eq!(s.domain, (-2.0, 2.0));
    }

    #[test]
    fn negative_time_and_unknown_flux_are_both_reported() {
        let text = SHOCK.replace("T = 1", "T = -1") + "[flux]\ntype = \"quartic\"\n";
        let Err(ScenarioError::Invalid(errors)) = parse_scenario(&text) else {
            panic!("expected semantic errors");
        };
        assert!(errors.iter().any(|e| e == "T must be positive"), "{errors:?}");
        assert!(errors.iter().any(|e| e.contains("unknown flux `quartic`")), "{errors:?}");
    }

    #[test]
    fn syntax_error_position() {
        let err = parse_scenario("T = 1\nepsilon = = 0.1\n").unwrap_err();
        match err {
            ScenarioError::Syntax { line, .. } => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }
}
