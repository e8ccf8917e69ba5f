//! Command-line front end.
//!
//! Every subcommand builds a [`Table`] and writes it as CSV (run metadata in
//! `#` lines above the header row) or JSON. Exit codes: 0 success, 1 usage,
//! 2 physics-domain outcome, 3 numerical or verification failure.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::Error;
use crate::expansion::{
    energy_expansion_shift, fine_structure_correction, leading_correction, residual_order_probe,
    residual_ratios, rest_energy_shift, ExpansionInput, DEFAULT_PROBE_ALPHAS,
};
use crate::model::{BoundStatus, ModelParams, QuantumNumbers};
use crate::oracle::{self_consistent_energy_default, standard_grid, standard_states, RadialMesh};
use crate::ordering::{comparison_orderings, default_mesh, OrderingSpec, OrderingStudy};
use crate::spectrum::energy_exact;
use crate::wavefunction::{normalization_check, radial_wavefunction};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_DOMAIN: u8 = 2;
pub const EXIT_VERIFICATION: u8 = 3;

/// Relative paths given to `--output` are resolved inside this directory when set.
pub const OUTPUT_DIR_ENV: &str = "PDM_KEPLER_OUT_DIR";

const FINE_STRUCTURE: f64 = 0.007_297_352_569_3;

#[derive(Debug, Parser)]
#[command(name = "pdm-kepler", version, about = "Dirac-Kepler spectrum with position-dependent mass m(1 + a/r)")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Write to this file instead of stdout
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct ParamArgs {
    /// Coulomb coupling e^2 / (hbar c)
    #[arg(long, default_value_t = FINE_STRUCTURE, allow_negative_numbers = true)]
    pub alpha: f64,

    /// Mass parameter in Compton lengths
    #[arg(long, allow_negative_numbers = true, conflicts_with = "abar")]
    pub a: Option<f64>,

    /// Mass parameter in classical radii, a = abar * alpha
    #[arg(long, allow_negative_numbers = true)]
    pub abar: Option<f64>,
}

impl ParamArgs {
    fn params(&self) -> Result<ModelParams, Error> {
        match (self.a, self.abar) {
            (_, Some(abar)) => ModelParams::from_a_bar(self.alpha, abar),
            (a, None) => ModelParams::new(self.alpha, a.unwrap_or(0.0)),
        }
    }
}

#[derive(Debug, Args)]
pub struct StateFilter {
    /// Highest principal quantum number n = n_r + l + 1
    #[arg(long, default_value_t = 2)]
    pub n_max: u32,

    /// Keep only this orbital number
    #[arg(long)]
    pub l: Option<u32>,

    /// Keep only this 2j
    #[arg(long)]
    pub two_j: Option<u32>,
}

impl StateFilter {
    fn states(&self) -> Vec<QuantumNumbers> {
        QuantumNumbers::up_to_principal(self.n_max)
            .into_iter()
            .filter(|q| self.l.is_none_or(|l| q.l() == l))
            .filter(|q| self.two_j.is_none_or(|j| q.two_j() == j))
            .collect()
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact levels for all states up to a principal number
    Spectrum {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        states: StateFilter,
    },
    /// Levels as a function of a at fixed alpha
    Scan {
        #[arg(long, default_value_t = FINE_STRUCTURE, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long, default_value_t = -3.0, allow_negative_numbers = true)]
        a_min: f64,
        /// Defaults to alpha, the single-level boundary
        #[arg(long, allow_negative_numbers = true)]
        a_max: Option<f64>,
        #[arg(long, default_value_t = 61)]
        steps: usize,
        /// Extra a values appended to the grid
        #[arg(long = "at", allow_negative_numbers = true, value_delimiter = ',')]
        extra: Vec<f64>,
        #[command(flatten)]
        states: StateFilter,
    },
    /// Analytic levels against the radial oracle, or expansion residual orders
    Verify {
        /// Single parameter set instead of the default grid
        #[arg(long, allow_negative_numbers = true)]
        alpha: Option<f64>,
        #[arg(long, allow_negative_numbers = true, conflicts_with = "abar")]
        a: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        abar: Option<f64>,
        #[arg(long, default_value_t = 2)]
        n_r_max: u32,
        /// Relative tolerance on oracle agreement
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Probe the truncation order of the small-alpha expansion instead
        #[arg(long)]
        expansion: bool,
    },
    /// Small-alpha expansion terms next to the exact shift
    Expansion {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        states: StateFilter,
        /// Emit the residual-order probe table
        #[arg(long)]
        probe: bool,
    },
    /// Sampled radial function of one state
    Wavefunction {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 0)]
        n_r: u32,
        #[arg(long, default_value_t = 0)]
        l: u32,
        #[arg(long, default_value_t = 1)]
        two_j: u32,
        #[arg(long, default_value_t = 400)]
        points: usize,
        /// Defaults to the radius where the density is negligible
        #[arg(long)]
        r_max: Option<f64>,
    },
    /// Non-relativistic levels under several kinetic orderings, with WKB
    Ordering {
        #[arg(long, default_value_t = -0.3, allow_negative_numbers = true)]
        a: f64,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value_t = 0)]
        l: u32,
        #[arg(long, default_value_t = 30)]
        n_r_max: u32,
        /// Named ordering or eta,eps,rho; repeatable
        #[arg(long = "ordering", allow_hyphen_values = true)]
        orderings: Vec<String>,
        #[arg(long)]
        points: Option<usize>,
        #[arg(long)]
        r_max: Option<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format!("{v:.16e}"),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::from(*v),
            // non-finite values become null
            Cell::Float(v) => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Cell::Text(s) => Value::from(s.as_str()),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

/// Rows plus run metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub command: String,
    pub metadata: Vec<(String, Cell)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    fn new(command: &str, columns: &[&str]) -> Self {
        Self {
            command: command.to_string(),
            metadata: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    fn meta(&mut self, key: &str, value: impl Into<Cell>) {
        self.metadata.push((key.to_string(), value.into()));
    }

    fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> io::Result<String> {
        let mut text = format!("# pdm-kepler {} {}\n", env!("CARGO_PKG_VERSION"), self.command);
        for (key, value) in &self.metadata {
            text.push_str(&format!("# {key}: {}\n", value.csv()));
        }
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(&self.columns)?;
        for row in &self.rows {
            writer.write_record(row.iter().map(Cell::csv))?;
        }
        let body = writer.into_inner().map_err(|e| e.into_error())?;
        text.push_str(&String::from_utf8(body).expect("csv output is utf-8"));
        Ok(text)
    }

    pub fn to_json(&self) -> String {
        let mut meta = Map::new();
        for (key, value) in &self.metadata {
            meta.insert(key.clone(), value.json());
        }
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut object = Map::new();
                for (column, cell) in self.columns.iter().zip(row) {
                    object.insert(column.clone(), cell.json());
                }
                Value::Object(object)
            })
            .collect();
        let mut root = Map::new();
        root.insert("program".into(), Value::from("pdm-kepler"));
        root.insert("version".into(), Value::from(env!("CARGO_PKG_VERSION")));
        root.insert("command".into(), Value::from(self.command.as_str()));
        root.insert("metadata".into(), Value::Object(meta));
        root.insert("columns".into(), Value::from(self.columns.clone()));
        root.insert("rows".into(), Value::Array(rows));
        let mut text = serde_json::to_string_pretty(&Value::Object(root)).expect("json values serialize");
        text.push('\n');
        text
    }
}

/// Table and the exit status it implies.
struct Outcome {
    table: Table,
    status: u8,
    note: Option<String>,
}

impl From<Table> for Outcome {
    fn from(table: Table) -> Self {
        Self { table, status: EXIT_OK, note: None }
    }
}

fn exit_code(error: &Error) -> u8 {
    if error.is_physics_domain() {
        EXIT_DOMAIN
    } else if error.is_usage() {
        EXIT_USAGE
    } else {
        EXIT_VERIFICATION
    }
}

fn parameter_meta(table: &mut Table, params: &ModelParams) {
    table.meta("alpha", params.alpha());
    table.meta("a", params.a());
    if let Some(a_bar) = params.a_bar() {
        table.meta("abar", a_bar);
    }
    table.meta("status", BoundStatus::classify(params).as_str());
}

fn cmd_spectrum(params: &ParamArgs, filter: &StateFilter) -> Result<Outcome, Error> {
    let params = params.params()?;
    let mut table = Table::new(
        "spectrum",
        &["n", "n_r", "l", "two_j", "state", "l_star", "n_star", "e_star_sq", "epsilon", "epsilon_minus_one", "binding_rydberg"],
    );
    parameter_meta(&mut table, &params);
    let rydberg = 0.5 * params.alpha() * params.alpha();
    for qn in filter.states() {
        let level = energy_exact(&params, &qn)?;
        table.push(vec![
            qn.principal().into(),
            qn.n_r().into(),
            qn.l().into(),
            qn.two_j().into(),
            qn.label().into(),
            level.l_star.into(),
            level.n_star.into(),
            level.e_star_sq.into(),
            level.epsilon.into(),
            level.epsilon_minus_one.into(),
            // (epsilon - 1) / (alpha^2 / 2); undefined without Coulomb coupling
            (if rydberg > 0.0 { level.epsilon_minus_one / rydberg } else { f64::NAN }).into(),
        ]);
    }
    Ok(table.into())
}

fn scan_grid(a_min: f64, a_max: f64, steps: usize, alpha: f64, extra: &[f64]) -> Result<Vec<f64>, Error> {
    if steps < 2 || !(a_max > a_min) {
        return Err(Error::InvalidParameter {
            name: "a_max",
            value: a_max,
            reason: "scan needs a_max > a_min and at least two steps",
        });
    }
    let mut grid: Vec<f64> = (0..steps)
        .map(|i| {
            if i + 1 == steps {
                a_max
            } else {
                a_min + (a_max - a_min) * i as f64 / (steps - 1) as f64
            }
        })
        .collect();
    if a_min < alpha && alpha <= a_max {
        grid.push(alpha);
    }
    grid.extend_from_slice(extra);
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    Ok(grid)
}

fn cmd_scan(
    alpha: f64,
    a_min: f64,
    a_max: Option<f64>,
    steps: usize,
    extra: &[f64],
    filter: &StateFilter,
) -> Result<Outcome, Error> {
    let grid = scan_grid(a_min, a_max.unwrap_or(alpha), steps, alpha, extra)?;
    let states = filter.states();
    let mut columns = vec!["a".to_string(), "status".to_string(), "deep_limit".to_string()];
    columns.extend(states.iter().map(|q| format!("epsilon_{}", q.label())));
    let column_refs: Vec<&str> = columns.iter().map(String::as_str).collect();
    let mut table = Table::new("scan", &column_refs);
    table.meta("alpha", alpha);
    table.meta("a_min", a_min);
    table.meta("a_max", a_max.unwrap_or(alpha));
    let rows: Vec<Vec<Cell>> = grid
        .par_iter()
        .map(|&a| {
            let params = ModelParams::new(alpha, a)?;
            let mut status = BoundStatus::classify(&params).as_str().to_string();
            let mut row: Vec<Cell> = vec![a.into(), Cell::Text(String::new()), (1.0 / (1.0 + a * a).sqrt()).into()];
            for qn in &states {
                match energy_exact(&params, qn) {
                    Ok(level) => row.push(level.epsilon.into()),
                    Err(e) if e.is_physics_domain() => {
                        if matches!(e, Error::FallToCenter { .. }) {
                            status = "fall-to-center".into();
                        }
                        row.push(f64::NAN.into());
                    }
                    Err(e) => return Err(e),
                }
            }
            row[1] = status.into();
            Ok(row)
        })
        .collect::<Result<_, Error>>()?;
    for row in rows {
        table.push(row);
    }
    Ok(table.into())
}

fn cmd_verify_oracle(cases: Vec<(ModelParams, QuantumNumbers)>, tol: f64) -> Outcome {
    let mut table = Table::new(
        "verify",
        &["alpha", "a", "state", "analytic", "oracle", "relative_deviation", "mesh_error", "result", "detail"],
    );
    table.meta("tolerance", tol);
    table.meta("cases", cases.len());
    let rows: Vec<(Vec<Cell>, &'static str)> = cases
        .par_iter()
        .map(|(params, qn)| {
            let head: Vec<Cell> = vec![params.alpha().into(), params.a().into(), qn.label().into()];
            let analytic = match energy_exact(params, qn) {
                Ok(level) => level.epsilon,
                Err(e) => {
                    let kind = if e.is_physics_domain() { "domain-error" } else { "error" };
                    let row = [head, vec![f64::NAN.into(), f64::NAN.into(), f64::NAN.into(), f64::NAN.into(), kind.into(), e.to_string().into()]].concat();
                    return (row, kind);
                }
            };
            match self_consistent_energy_default(params, qn) {
                Ok(oracle) => {
                    let deviation = ((oracle.epsilon - analytic) / analytic).abs();
                    let verdict = if deviation <= tol { "pass" } else { "fail" };
                    let row = [head, vec![analytic.into(), oracle.epsilon.into(), deviation.into(), oracle.mesh_error_estimate.into(), verdict.into(), "".into()]].concat();
                    (row, verdict)
                }
                Err(e) => {
                    let row = [head, vec![analytic.into(), f64::NAN.into(), f64::NAN.into(), f64::NAN.into(), "error".into(), e.to_string().into()]].concat();
                    (row, "error")
                }
            }
        })
        .collect();
    let failures = rows.iter().filter(|(_, v)| matches!(*v, "fail" | "error")).count();
    let domain = rows.iter().filter(|(_, v)| *v == "domain-error").count();
    for (row, _) in rows {
        table.push(row);
    }
    table.meta("failures", failures);
    table.meta("domain_errors", domain);
    let status = if failures > 0 {
        EXIT_VERIFICATION
    } else if domain > 0 {
        EXIT_DOMAIN
    } else {
        EXIT_OK
    };
    let note = (status != EXIT_OK).then(|| format!("verify: {failures} failures, {domain} domain errors"));
    Outcome { table, status, note }
}

/// Residual ratios between consecutive probe alphas; pass when the last
/// ratio is within 20% of 64.
fn cmd_verify_expansion() -> Result<Outcome, Error> {
    let mut table = Table::new(
        "verify-expansion",
        &["abar", "state", "alpha", "residual", "ratio", "result"],
    );
    table.meta("expected_ratio", 64.0);
    table.meta("ratio_tolerance", 0.2);
    let mut failures = 0;
    for a_bar in [0.0, 0.3, 0.8] {
        for qn in [QuantumNumbers::s_half(0), QuantumNumbers::s_half(1)] {
            let points = residual_order_probe(a_bar, qn, &DEFAULT_PROBE_ALPHAS)?;
            let ratios = residual_ratios(&points);
            for (i, point) in points.iter().enumerate() {
                let ratio = if i == 0 { f64::NAN } else { ratios[i - 1] };
                let verdict = if i == 0 {
                    ""
                } else if ((ratio - 64.0) / 64.0).abs() <= 0.2 {
                    "pass"
                } else {
                    failures += 1;
                    "fail"
                };
                table.push(vec![
                    a_bar.into(),
                    qn.label().into(),
                    point.alpha.into(),
                    point.residual.into(),
                    ratio.into(),
                    verdict.into(),
                ]);
            }
        }
    }
    table.meta("failures", failures as usize);
    let status = if failures > 0 { EXIT_VERIFICATION } else { EXIT_OK };
    let note = (failures > 0).then(|| format!("verify --expansion: {failures} ratios outside 64 +- 20%"));
    Ok(Outcome { table, status, note })
}

fn cmd_expansion(params: &ParamArgs, filter: &StateFilter, probe: bool) -> Result<Outcome, Error> {
    let model = params.params()?;
    let a_bar = model.a_bar().ok_or(Error::InvalidParameter {
        name: "alpha",
        value: model.alpha(),
        reason: "the expansion is in powers of alpha at fixed abar and needs alpha > 0",
    })?;
    if probe {
        let mut table = Table::new("expansion-probe", &["state", "alpha", "residual", "ratio"]);
        table.meta("abar", a_bar);
        for qn in filter.states() {
            let points = residual_order_probe(a_bar, qn, &DEFAULT_PROBE_ALPHAS)?;
            let ratios = residual_ratios(&points);
            for (i, point) in points.iter().enumerate() {
                let ratio = if i == 0 { f64::NAN } else { ratios[i - 1] };
                table.push(vec![qn.label().into(), point.alpha.into(), point.residual.into(), ratio.into()]);
            }
        }
        return Ok(table.into());
    }
    let mut table = Table::new(
        "expansion",
        &["state", "exact_shift", "expansion_shift", "leading", "fine_structure", "rest_energy_shift", "residual"],
    );
    parameter_meta(&mut table, &model);
    for qn in filter.states() {
        let input = ExpansionInput::new(model.alpha(), a_bar, qn)?;
        let exact = energy_exact(&input.params()?, &qn)?.epsilon_minus_one;
        let shift = energy_expansion_shift(&input);
        table.push(vec![
            qn.label().into(),
            exact.into(),
            shift.into(),
            leading_correction(&input).into(),
            fine_structure_correction(&input).into(),
            rest_energy_shift(&input).into(),
            (exact - shift).abs().into(),
        ]);
    }
    Ok(table.into())
}

fn cmd_wavefunction(
    params: &ParamArgs,
    qn: QuantumNumbers,
    points: usize,
    r_max: Option<f64>,
) -> Result<Outcome, Error> {
    let model = params.params()?;
    let level = energy_exact(&model, &qn)?;
    let wf = radial_wavefunction(&level, &qn)?;
    let r_max = r_max.unwrap_or_else(|| wf.outer_radius());
    if !(r_max > 0.0) || points == 0 {
        return Err(Error::InvalidParameter {
            name: "r_max",
            value: r_max,
            reason: "sampling needs r_max > 0 and at least one point",
        });
    }
    let mut table = Table::new("wavefunction", &["r", "radial", "density"]);
    parameter_meta(&mut table, &model);
    table.meta("state", qn.label());
    table.meta("l_star", level.l_star);
    table.meta("n_star", level.n_star);
    table.meta("e_star_sq", level.e_star_sq);
    table.meta("epsilon", level.epsilon);
    table.meta("normalization_error", normalization_check(&wf)?);
    table.meta("nodes", wf.node_count());
    for i in 1..=points {
        let r = r_max * i as f64 / points as f64;
        let value = wf.value(r);
        table.push(vec![r.into(), value.into(), (r * r * value * value).into()]);
    }
    Ok(table.into())
}

#[allow(clippy::too_many_arguments)]
fn cmd_ordering(
    a: f64,
    alpha: f64,
    l: u32,
    n_r_max: u32,
    names: &[String],
    points: Option<usize>,
    r_max: Option<f64>,
) -> Result<Outcome, Error> {
    let orderings = if names.is_empty() {
        comparison_orderings()
    } else {
        names.iter().map(|n| OrderingSpec::parse(n)).collect::<Result<Vec<_>, _>>()?
    };
    let base = default_mesh(alpha, l, n_r_max as usize + 2)?;
    let mesh = RadialMesh::new(r_max.unwrap_or(base.r_max()), points.unwrap_or(base.n_points()))?;
    let study = OrderingStudy::run_on(a, alpha, l, &orderings, n_r_max, mesh)?;
    let mut table = Table::new("ordering", &["n_r", "ordering", "energy", "spread", "energy_wkb"]);
    table.meta("a", a);
    table.meta("alpha", alpha);
    table.meta("l", l);
    table.meta("r_max", mesh.r_max());
    table.meta("points", mesh.n_points());
    table.meta("reference", OrderingSpec::symmetric().label());
    for row in study.rows() {
        table.push(vec![
            row.n_r.into(),
            row.ordering.into(),
            row.energy.into(),
            row.spread.into(),
            row.energy_wkb.into(),
        ]);
    }
    Ok(table.into())
}

fn dispatch(command: &Command) -> Result<Outcome, Error> {
    match command {
        Command::Spectrum { params, states } => cmd_spectrum(params, states),
        Command::Scan { alpha, a_min, a_max, steps, extra, states } => {
            cmd_scan(*alpha, *a_min, *a_max, *steps, extra, states)
        }
        Command::Verify { alpha, a, abar, n_r_max, tol, expansion } => {
            if *expansion {
                return cmd_verify_expansion();
            }
            let cases = if alpha.is_some() || a.is_some() || abar.is_some() {
                let args = ParamArgs {
                    alpha: alpha.unwrap_or(FINE_STRUCTURE),
                    a: *a,
                    abar: *abar,
                };
                let params = args.params()?;
                standard_states(*n_r_max).into_iter().map(|qn| (params, qn)).collect()
            } else {
                standard_grid()
                    .into_iter()
                    .filter(|(_, qn)| qn.n_r() <= *n_r_max)
                    .collect()
            };
            Ok(cmd_verify_oracle(cases, *tol))
        }
        Command::Expansion { params, states, probe } => cmd_expansion(params, states, *probe),
        Command::Wavefunction { params, n_r, l, two_j, points, r_max } => {
            let qn = QuantumNumbers::new(*n_r, *l, *two_j)?;
            cmd_wavefunction(params, qn, *points, *r_max)
        }
        Command::Ordering { a, alpha, l, n_r_max, orderings, points, r_max } => {
            cmd_ordering(*a, *alpha, *l, *n_r_max, orderings, *points, *r_max)
        }
    }
}

fn resolve_output(path: &Path) -> PathBuf {
    match std::env::var_os(OUTPUT_DIR_ENV) {
        Some(dir) if path.is_relative() && !dir.is_empty() => Path::new(&dir).join(path),
        _ => path.to_path_buf(),
    }
}

fn write_output(config: &RunConfig, text: &str, out: &mut dyn Write) -> io::Result<()> {
    match &config.output {
        Some(path) => {
            let path = resolve_output(path);
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                fs::create_dir_all(parent)?;
            }
            fs::write(path, text)
        }
        None => out.write_all(text.as_bytes()),
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(config) => config,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(rendered.as_bytes())
            } else {
                out.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let outcome = match dispatch(&config.command) {
        Ok(outcome) => outcome,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return exit_code(&e);
        }
    };
    let text = match config.format {
        Format::Csv => match outcome.table.to_csv() {
            Ok(text) => text,
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                return EXIT_USAGE;
            }
        },
        Format::Json => outcome.table.to_json(),
    };
    if let Err(e) = write_output(&config, &text, out) {
        let _ = writeln!(err, "error: cannot write output: {e}");
        return EXIT_USAGE;
    }
    if let Some(note) = outcome.note {
        let _ = writeln!(err, "{note}");
    }
    outcome.status
}
