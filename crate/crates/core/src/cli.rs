//! Job specifications, dispatch and report rendering for the `orbifold-hkr` binary.
//!
//! Input and output are JSON. Rationals travel as strings (`"3/2"`), and every
//! map in a report is emitted in a fixed order so repeated runs are byte-identical.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::circle::{self, CircleError, HomologyGroup};
use crate::exact::{format_rational, parse_rational, Matrix, Rational};
use crate::geometry::{GeometryError, Sector};
use crate::group::{GroupError, MatrixGroup, DEFAULT_CAP};
use crate::hkr::{self, Conventions, Disagreement, HHReport, HkrError, Mode, OracleVerdict};
use crate::wps::{self, WeightedStack, WpsError};

pub const DEFAULT_T_MAX: usize = 10;
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub mod exit {
    pub const OK: i32 = 0;
    pub const INTERNAL: i32 = 1;
    pub const INPUT: i32 = 2;
    pub const CAP_EXCEEDED: i32 = 3;
    pub const ORACLE_DISAGREEMENT: i32 = 4;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CommandName {
    Quotient,
    Wps,
    Circle,
    Gamma,
}

impl CommandName {
    pub const ALL: [CommandName; 4] = [Self::Quotient, Self::Wps, Self::Circle, Self::Gamma];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Quotient => "quotient",
            Self::Wps => "wps",
            Self::Circle => "circle",
            Self::Gamma => "gamma",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.as_str() == s)
    }

    fn payload_keys(self) -> &'static [&'static str] {
        match self {
            Self::Quotient => &["generators", "cap"],
            Self::Wps => &["weights"],
            Self::Circle => &["n"],
            Self::Gamma => &["r"],
        }
    }
}

impl fmt::Display for CommandName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Json,
    Table,
}

impl OutputFormat {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Json => "json",
            Self::Table => "table",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Payload {
    Quotient { generators: Vec<Matrix<Rational>>, cap: usize },
    Wps { weights: Vec<u64> },
    Circle { n: usize },
    Gamma { r: usize },
}

impl Payload {
    pub fn command(&self) -> CommandName {
        match self {
            Self::Quotient { .. } => CommandName::Quotient,
            Self::Wps { .. } => CommandName::Wps,
            Self::Circle { .. } => CommandName::Circle,
            Self::Gamma { .. } => CommandName::Gamma,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JobSpec {
    pub payload: Payload,
    pub t_max: usize,
    pub oracle: bool,
    pub output: OutputFormat,
}

impl JobSpec {
    pub fn new(payload: Payload) -> Self {
        Self { payload, t_max: DEFAULT_T_MAX, oracle: false, output: OutputFormat::Json }
    }

    pub fn command(&self) -> CommandName {
        self.payload.command()
    }

    /// Canonical JSON form; `parse_jobspec` of its serialization gives `self` back.
    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("command".into(), json!(self.command().as_str()));
        match &self.payload {
            Payload::Quotient { generators, cap } => {
                m.insert("generators".into(), Value::Array(generators.iter().map(matrix_json).collect()));
                m.insert("cap".into(), json!(cap));
            }
            Payload::Wps { weights } => {
                m.insert("weights".into(), json!(weights));
            }
            Payload::Circle { n } => {
                m.insert("n".into(), json!(n));
            }
            Payload::Gamma { r } => {
                m.insert("r".into(), json!(r));
            }
        }
        m.insert("t_max".into(), json!(self.t_max));
        m.insert("oracle".into(), json!(self.oracle));
        m.insert("format".into(), json!(self.output.as_str()));
        Value::Object(m)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    #[error("schema error at {path}{}: {message}", line.map(|l| format!(" (line {l})")).unwrap_or_default())]
    Schema { path: String, line: Option<usize>, message: String },
    #[error("generator {index} is {rows}x{cols}, not square")]
    NonSquareMatrix { index: usize, rows: usize, cols: usize },
    #[error("bad rational {text:?} at {path}")]
    BadRational { path: String, text: String },
    #[error("cannot read input: {0}")]
    Io(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Hkr(#[from] HkrError),
    #[error(transparent)]
    Wps(#[from] WpsError),
    #[error(transparent)]
    Circle(#[from] CircleError),
}

impl CliError {
    fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self::Schema { path: path.into(), line: None, message: message.into() }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Schema { .. } | Self::NonSquareMatrix { .. } | Self::BadRational { .. } | Self::Io(_) => exit::INPUT,
            Self::Group(GroupError::CapExceeded(_) | GroupError::OrderCapExceeded(_)) => exit::CAP_EXCEEDED,
            Self::Group(GroupError::Exact(_)) => exit::INTERNAL,
            Self::Group(_) => exit::INPUT,
            Self::Hkr(HkrError::BasisTooLarge(_)) => exit::INPUT,
            Self::Wps(_) | Self::Circle(CircleError::TooSmall { .. }) => exit::INPUT,
            Self::Hkr(_) | Self::Geometry(_) | Self::Circle(_) => exit::INTERNAL,
        }
    }
}

fn matrix_json(m: &Matrix<Rational>) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array(m.row(i).iter().map(|q| Value::String(format_rational(q))).collect()))
            .collect(),
    )
}

fn expect_uint(v: &Value, path: &str) -> Result<u64, CliError> {
    v.as_u64().ok_or_else(|| CliError::schema(path, "expected a nonnegative integer"))
}

fn expect_positive(v: &Value, path: &str) -> Result<u64, CliError> {
    match expect_uint(v, path)? {
        0 => Err(CliError::schema(path, "expected a positive integer")),
        x => Ok(x),
    }
}

fn expect_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, CliError> {
    v.as_array().ok_or_else(|| CliError::schema(path, "expected an array"))
}

fn to_usize(x: u64, path: &str) -> Result<usize, CliError> {
    usize::try_from(x).map_err(|_| CliError::schema(path, "integer too large"))
}

fn parse_matrix(v: &Value, index: usize) -> Result<Matrix<Rational>, CliError> {
    let path = format!("$.generators[{index}]");
    let rows = expect_array(v, &path)?;
    if rows.is_empty() {
        return Err(CliError::schema(&path, "matrix has no rows"));
    }
    let mut parsed = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let rpath = format!("{path}[{i}]");
        let entries = expect_array(row, &rpath)?;
        if entries.len() != rows.len() {
            return Err(CliError::NonSquareMatrix { index, rows: rows.len(), cols: entries.len() });
        }
        let mut out = Vec::with_capacity(entries.len());
        for (j, e) in entries.iter().enumerate() {
            let epath = format!("{rpath}[{j}]");
            let text =
                e.as_str().ok_or_else(|| CliError::schema(&epath, "expected a rational string such as \"-1/2\""))?;
            out.push(parse_rational(text).map_err(|_| CliError::BadRational { path: epath, text: text.to_string() })?);
        }
        parsed.push(out);
    }
    Matrix::from_rows(parsed).map_err(|e| CliError::schema(path, e.to_string()))
}

/// Parses and validates a job document.
pub fn parse_jobspec(text: &str) -> Result<JobSpec, CliError> {
    parse_jobspec_with_default(text, None)
}

/// Like [`parse_jobspec`], but a missing `"command"` falls back to `default`.
pub fn parse_jobspec_with_default(text: &str, default: Option<CommandName>) -> Result<JobSpec, CliError> {
    let doc: Value = serde_json::from_str(text).map_err(|e| CliError::Schema {
        path: "$".into(),
        line: Some(e.line()),
        message: e.to_string(),
    })?;
    let obj = doc.as_object().ok_or_else(|| CliError::schema("$", "expected a JSON object"))?;

    let command = match obj.get("command") {
        Some(v) => {
            let s = v.as_str().ok_or_else(|| CliError::schema("$.command", "expected a string"))?;
            CommandName::parse(s).ok_or_else(|| {
                CliError::schema("$.command", format!("unknown command {s:?}; expected quotient, wps, circle or gamma"))
            })?
        }
        None => default.ok_or_else(|| CliError::schema("$.command", "missing"))?,
    };
    if let (Some(d), true) = (default, obj.contains_key("command")) {
        if d != command {
            return Err(CliError::schema("$.command", format!("document says {command}, command line says {d}")));
        }
    }

    for key in obj.keys() {
        let common = ["command", "t_max", "oracle", "format"].contains(&key.as_str());
        if !common && !command.payload_keys().contains(&key.as_str()) {
            return Err(CliError::schema(format!("$.{key}"), format!("unexpected field for command {command}")));
        }
    }
    let required = |key: &str| obj.get(key).ok_or_else(|| CliError::schema(format!("$.{key}"), "missing"));

    let payload = match command {
        CommandName::Quotient => {
            let gens = expect_array(required("generators")?, "$.generators")?;
            if gens.is_empty() {
                return Err(CliError::schema("$.generators", "at least one generator is required"));
            }
            let generators = gens.iter().enumerate().map(|(i, g)| parse_matrix(g, i)).collect::<Result<Vec<_>, _>>()?;
            let n = generators[0].rows();
            if let Some(i) = generators.iter().position(|g| g.rows() != n) {
                return Err(CliError::schema(format!("$.generators[{i}]"), format!("expected a {n}x{n} matrix")));
            }
            let cap = match obj.get("cap") {
                Some(v) => to_usize(expect_positive(v, "$.cap")?, "$.cap")?,
                None => DEFAULT_CAP,
            };
            Payload::Quotient { generators, cap }
        }
        CommandName::Wps => {
            let ws = expect_array(required("weights")?, "$.weights")?;
            if ws.is_empty() {
                return Err(CliError::schema("$.weights", "at least one weight is required"));
            }
            let weights = ws
                .iter()
                .enumerate()
                .map(|(i, w)| expect_positive(w, &format!("$.weights[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            Payload::Wps { weights }
        }
        CommandName::Circle => Payload::Circle { n: to_usize(expect_positive(required("n")?, "$.n")?, "$.n")? },
        CommandName::Gamma => Payload::Gamma { r: to_usize(expect_positive(required("r")?, "$.r")?, "$.r")? },
    };

    let t_max = match obj.get("t_max") {
        Some(v) => to_usize(expect_uint(v, "$.t_max")?, "$.t_max")?,
        None => DEFAULT_T_MAX,
    };
    let oracle = match obj.get("oracle") {
        Some(v) => v.as_bool().ok_or_else(|| CliError::schema("$.oracle", "expected true or false"))?,
        None => false,
    };
    let output = match obj.get("format").map(|v| v.as_str()) {
        None => OutputFormat::Json,
        Some(Some("json")) => OutputFormat::Json,
        Some(Some("table")) => OutputFormat::Table,
        Some(_) => return Err(CliError::schema("$.format", "expected \"json\" or \"table\"")),
    };
    Ok(JobSpec { payload, t_max, oracle, output })
}

/// A finished report and the exit status it implies.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub report: Value,
    pub oracle: OracleSummary,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleSummary {
    pub checked: bool,
    pub agreement: bool,
    pub first_disagreement: Option<Value>,
}

impl OracleSummary {
    fn unchecked() -> Self {
        Self { checked: false, agreement: true, first_disagreement: None }
    }

    fn to_json(&self) -> Value {
        json!({
            "checked": self.checked,
            "agreement": self.agreement,
            "first_disagreement": self.first_disagreement.clone().unwrap_or(Value::Null),
        })
    }
}

impl RunOutput {
    pub fn exit_code(&self) -> i32 {
        if self.oracle.agreement {
            exit::OK
        } else {
            exit::ORACLE_DISAGREEMENT
        }
    }
}

pub fn run(job: &JobSpec) -> Result<RunOutput, CliError> {
    let (body, oracle) = match &job.payload {
        Payload::Quotient { generators, cap } => run_quotient(generators, *cap, job.t_max, job.oracle)?,
        Payload::Wps { weights } => run_wps(weights, job.oracle)?,
        Payload::Circle { n } => run_circle(*n, job.oracle)?,
        Payload::Gamma { r } => run_gamma(*r, job.oracle)?,
    };
    let mut report = Map::new();
    report.insert("command".into(), json!(job.command().as_str()));
    report.insert("input".into(), job.to_json());
    report.extend(body);
    report.insert("oracle".into(), oracle.to_json());
    report.insert("version".into(), json!(VERSION));
    Ok(RunOutput { report: Value::Object(report), oracle })
}

/// `{degree: {weight: "coefficient"}}`, rows and weights ascending.
fn series_table(series: &crate::exact::BiSeries, mode: Mode) -> Value {
    let mut table = Map::new();
    for (row, coeffs) in series.rows().iter().enumerate() {
        let mut cells = Map::new();
        for (d, c) in coeffs.iter().enumerate() {
            cells.insert(reported_weight(mode, row, d).to_string(), Value::String(format_rational(c)));
        }
        table.insert(row.to_string(), Value::Object(cells));
    }
    Value::Object(table)
}

fn reported_weight(mode: Mode, row: usize, stored: usize) -> i64 {
    match mode {
        Mode::Homology => stored as i64,
        Mode::Cohomology => stored as i64 - row as i64,
    }
}

fn conventions_json(c: &Conventions) -> Value {
    json!({ "u": c.u_marker, "t": c.t_marker, "rows": c.rows, "weights": c.weights })
}

fn sector_json(
    group: &MatrixGroup,
    index: usize,
    sector: &Sector,
    hh: &crate::exact::BiSeries,
    coh: &crate::exact::BiSeries,
) -> Value {
    json!({
        "index": index,
        "representative": matrix_json(group.element(sector.class.representative)),
        "element_order": group.element_order(sector.class.representative),
        "class_size": sector.class.size(),
        "centralizer_order": sector.centralizer_order(),
        "f_g": sector.fixed_dim(),
        "c_g": sector.normal_codim,
        "HH": series_table(hh, Mode::Homology),
        "HH_cohomology": series_table(coh, Mode::Cohomology),
    })
}

fn disagreement_json(table: &str, mode: Mode, d: &Disagreement) -> Value {
    json!({
        "table": table,
        "sector": d.sector,
        "degree": d.row,
        "weight": reported_weight(mode, d.row, d.weight),
        "molien": format_rational(&d.molien),
        "oracle": d.oracle.to_string(),
    })
}

fn run_quotient(
    generators: &[Matrix<Rational>],
    cap: usize,
    t_max: usize,
    oracle: bool,
) -> Result<(Map<String, Value>, OracleSummary), CliError> {
    let group = MatrixGroup::generate(generators.to_vec(), cap)?;
    let homology = hkr::full_report(&group, t_max, Mode::Homology)?;
    let cohomology = hkr::full_report(&group, t_max, Mode::Cohomology)?;

    let mut body = Map::new();
    body.insert(
        "group".into(),
        json!({
            "ambient_dim": group.ambient_dim(),
            "order": group.order(),
            "exponent": group.exponent(),
            "abelian": group.is_abelian(),
            "classes": homology.sectors.len(),
        }),
    );
    let sectors: Vec<Value> = homology
        .sectors
        .iter()
        .zip(&cohomology.sectors)
        .enumerate()
        .map(|(i, ((s, hh), (_, coh)))| sector_json(&group, i, s, hh, coh))
        .collect();
    body.insert("sectors".into(), Value::Array(sectors));
    body.insert("HH".into(), series_table(&homology.total, Mode::Homology));
    body.insert("HH_cohomology".into(), series_table(&cohomology.total, Mode::Cohomology));
    body.insert(
        "conventions".into(),
        json!({
            "HH": conventions_json(&homology.conventions),
            "HH_cohomology": conventions_json(&cohomology.conventions),
        }),
    );

    let summary = if oracle { quotient_oracle(&homology, &cohomology, t_max)? } else { OracleSummary::unchecked() };
    Ok((body, summary))
}

fn quotient_oracle(homology: &HHReport, cohomology: &HHReport, t_max: usize) -> Result<OracleSummary, CliError> {
    let verdicts: [(&str, Mode, OracleVerdict); 2] = [
        ("HH", Mode::Homology, hkr::oracle_check(homology, t_max)?),
        ("HH_cohomology", Mode::Cohomology, hkr::oracle_check(cohomology, t_max)?),
    ];
    let first = verdicts
        .iter()
        .find_map(|(table, mode, v)| v.first_disagreement.as_ref().map(|d| disagreement_json(table, *mode, d)));
    Ok(OracleSummary { checked: true, agreement: first.is_none(), first_disagreement: first })
}

fn run_wps(weights: &[u64], oracle: bool) -> Result<(Map<String, Value>, OracleSummary), CliError> {
    let stack = WeightedStack::new(weights.to_vec())?;
    let components = wps::inertia_components(&stack);
    let hh = wps::hh_vector(&stack);

    let mut body = Map::new();
    body.insert("dimension".into(), json!(stack.dimension()));
    body.insert(
        "components".into(),
        Value::Array(
            components
                .iter()
                .map(|c| {
                    json!({
                        "root": format!("{}/{}", c.root.k, c.root.order),
                        "primitive_order": c.root.primitive_order(),
                        "support": c.support,
                        "weights": c.component_weights,
                        "dimension": c.dimension(),
                    })
                })
                .collect(),
        ),
    );
    body.insert("HH".into(), Value::Object(hh.iter().map(|(i, v)| (i.to_string(), json!(v))).collect()));

    let summary = if oracle {
        // Independent count: the union of the μ_{a_i} as reduced fractions j/a_i in [0, 1).
        let roots: BTreeSet<(u64, u64)> =
            weights.iter().flat_map(|&a| (0..a).map(move |j| (j / j.gcd(&a), a / j.gcd(&a)))).collect();
        let expected_hh: u64 = weights.iter().sum();
        let total: u64 = hh.values().sum();
        let first = if roots.len() != components.len() {
            Some(json!({ "quantity": "components", "computed": components.len(), "expected": roots.len() }))
        } else if total != expected_hh || hh.keys().any(|&i| i != 0) {
            Some(json!({ "quantity": "HH", "computed": total, "expected": expected_hh }))
        } else {
            None
        };
        OracleSummary { checked: true, agreement: first.is_none(), first_disagreement: first }
    } else {
        OracleSummary::unchecked()
    };
    Ok((body, summary))
}

fn run_circle(n: usize, oracle: bool) -> Result<(Map<String, Value>, OracleSummary), CliError> {
    let central_len = circle::fiber_dimension(n, true)?;
    let generic_len = circle::fiber_dimension(n, false)?;
    let central = circle::central_complex(n)?;
    let generic = circle::generic_fiber(n)?;
    let (g0, g1) = generic.homology();

    let mut body = Map::new();
    body.insert("fiber_dimension".into(), json!({ "central": central_len, "generic": generic_len }));
    body.insert(
        "central_complex".into(),
        json!({ "H0": central.h0, "H1": central.h1, "trivial_action": central.trivial_action() }),
    );
    body.insert(
        "generic_fiber".into(),
        json!({
            "H0": g0,
            "H1": g1,
            "vertices": generic.complex.ranks()[0],
            "edges": generic.complex.ranks()[1],
            "rotation_on_H1": format_rational(&generic.rotation_on_h1),
        }),
    );
    body.insert(
        "checks".into(),
        json!({
            "central_fiber_length": central_len == n,
            "generic_fiber_length": generic_len == n,
            "central_cohomology": (central.h0, central.h1) == (1, 1),
            "trivial_action": central.trivial_action(),
            "generic_fiber_circle": (g0, g1) == (1, 1),
        }),
    );

    let summary = if oracle {
        // Euler characteristics from cells against those from homology.
        let graph = (generic.complex.euler_from_cells(), g0 as i64 - g1 as i64);
        let two_term = (central.source_dim as i64 - central.target_dim as i64, central.h0 as i64 - central.h1 as i64);
        let first = [("generic_fiber_euler", graph), ("central_complex_euler", two_term)]
            .into_iter()
            .find(|(_, (a, b))| a != b)
            .map(|(q, (a, b))| json!({ "quantity": q, "cells": a, "homology": b }));
        OracleSummary { checked: true, agreement: first.is_none(), first_disagreement: first }
    } else {
        OracleSummary::unchecked()
    };
    Ok((body, summary))
}

fn homology_json(groups: &[HomologyGroup; 3]) -> Map<String, Value> {
    groups.iter().enumerate().map(|(k, h)| (format!("H{k}"), Value::String(h.to_string()))).collect()
}

fn run_gamma(r: usize, oracle: bool) -> Result<(Map<String, Value>, OracleSummary), CliError> {
    let gamma = circle::gamma_complex(r)?;
    let cover = circle::cover_complex(r)?;
    let hg = [gamma.homology(0), gamma.homology(1), gamma.homology(2)];
    let hc = [cover.homology(0), cover.homology(1), cover.homology(2)];

    let mut body = homology_json(&hg);
    body.insert("cover".into(), Value::Object(homology_json(&hc)));
    body.insert(
        "euler_characteristic".into(),
        json!({ "gamma": gamma.euler_from_cells(), "cover": cover.euler_from_cells() }),
    );

    let summary = if oracle {
        let first = [("gamma", &gamma), ("cover", &cover)]
            .into_iter()
            .find(|(_, c)| c.euler_from_cells() != c.euler_from_homology())
            .map(|(q, c)| json!({ "quantity": q, "cells": c.euler_from_cells(), "homology": c.euler_from_homology() }));
        OracleSummary { checked: true, agreement: first.is_none(), first_disagreement: first }
    } else {
        OracleSummary::unchecked()
    };
    Ok((body, summary))
}

/// Pretty JSON with a trailing newline.
pub fn render_json(report: &Value) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports are plain JSON values");
    s.push('\n');
    s
}

fn align(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> =
        (0..cols).map(|j| rows.iter().filter_map(|r| r.get(j)).map(|c| c.chars().count()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for r in rows {
        let line: Vec<String> = r
            .iter()
            .enumerate()
            .map(|(j, c)| if j == 0 { format!("{c:<w$}", w = widths[j]) } else { format!("{c:>w$}", w = widths[j]) })
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}

fn text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

/// Degree-by-weight grid of a `{degree: {weight: value}}` table.
fn grid(title: &str, table: &Value) -> String {
    let Some(rows) = table.as_object() else { return String::new() };
    let mut weights: Vec<i64> = rows
        .values()
        .filter_map(Value::as_object)
        .flat_map(|cells| cells.keys().filter_map(|k| k.parse().ok()))
        .collect();
    weights.sort_unstable();
    weights.dedup();
    let mut out =
        vec![std::iter::once(title.to_string()).chain(weights.iter().map(i64::to_string)).collect::<Vec<_>>()];
    for (degree, cells) in rows {
        let mut line = vec![degree.clone()];
        line.extend(weights.iter().map(|w| cells.get(w.to_string()).map(text).unwrap_or_default()));
        out.push(line);
    }
    align(&out)
}

fn oracle_line(report: &Value) -> String {
    let o = &report["oracle"];
    if o["checked"] != Value::Bool(true) {
        "oracle: not run\n".into()
    } else if o["agreement"] == Value::Bool(true) {
        "oracle: agreement\n".into()
    } else {
        format!("oracle: DISAGREEMENT {}\n", o["first_disagreement"])
    }
}

/// Aligned plain-text rendering; JSON stays the contract.
pub fn render_table(report: &Value) -> String {
    let mut out = format!("orbifold-hkr {} {}\n\n", text(&report["version"]), text(&report["command"]));
    match report["command"].as_str() {
        Some("quotient") => {
            let g = &report["group"];
            out.push_str(&format!(
                "group order {}, exponent {}, {} classes on A^{}\n\n",
                g["order"], g["exponent"], g["classes"], g["ambient_dim"]
            ));
            let mut rows = vec![["sector", "order", "class", "centralizer", "f_g", "c_g"].map(String::from).to_vec()];
            for s in report["sectors"].as_array().into_iter().flatten() {
                rows.push(
                    ["index", "element_order", "class_size", "centralizer_order", "f_g", "c_g"]
                        .iter()
                        .map(|k| text(&s[*k]))
                        .collect(),
                );
            }
            out.push_str(&align(&rows));
            out.push('\n');
            out.push_str(&grid("HH", &report["HH"]));
            out.push('\n');
            out.push_str(&grid("HH^", &report["HH_cohomology"]));
        }
        Some("wps") => {
            let mut rows = vec![["root", "order", "support", "weights", "dim"].map(String::from).to_vec()];
            for c in report["components"].as_array().into_iter().flatten() {
                rows.push(
                    ["root", "primitive_order", "support", "weights", "dimension"]
                        .iter()
                        .map(|k| text(&c[*k]))
                        .collect(),
                );
            }
            out.push_str(&align(&rows));
            out.push('\n');
            let hh: Vec<Vec<String>> =
                report["HH"].as_object().into_iter().flatten().map(|(i, v)| vec![format!("HH_{i}"), text(v)]).collect();
            out.push_str(&align(&hh));
        }
        Some("circle") => {
            let mut rows = Vec::new();
            for (k, v) in report["checks"].as_object().into_iter().flatten() {
                rows.push(vec![k.clone(), if v == &Value::Bool(true) { "ok".into() } else { "FAILED".into() }]);
            }
            out.push_str(&align(&rows));
        }
        Some("gamma") => {
            let c = &report["cover"];
            let mut rows = vec![vec![String::new(), "H0".into(), "H1".into(), "H2".into()]];
            rows.push(vec!["Gamma_r".into(), text(&report["H0"]), text(&report["H1"]), text(&report["H2"])]);
            rows.push(vec!["cover".into(), text(&c["H0"]), text(&c["H1"]), text(&c["H2"])]);
            out.push_str(&align(&rows));
        }
        _ => {}
    }
    out.push('\n');
    out.push_str(&oracle_line(report));
    out
}

pub fn render(report: &Value, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => render_json(report),
        OutputFormat::Table => render_table(report),
    }
}
