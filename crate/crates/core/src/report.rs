//! Jobs behind the `hyperan` command line and their deterministic output.
//!
//! JSON is the canonical format: object keys are sorted and every float is
//! written with 17 significant digits, so identical jobs produce identical
//! bytes and reparsing recovers identical `f64`s. CSV is a flat projection
//! of the same data.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::algebra::{Algebra, BasisTable};
use crate::classify::{
    classify, effective_config, estimate_convergence_order, function_scale, pointwise, sample_grid,
    ClassifyConfig, ConvergenceSummary, GridSpec, OrderEstimate, RegularityReport, ToleranceRule,
};
use crate::error::{Error, Result};
use crate::function::FunctionSpec;
use crate::operators::OperatorKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Classify,
    ResidualMap,
    Convergence,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Everything one invocation needs. `spec` is absent only for `table`.
#[derive(Debug, Clone)]
pub struct JobConfig {
    pub command: Command,
    pub spec: Option<FunctionSpec>,
    pub algebra: Algebra,
    pub classify: ClassifyConfig,
    /// Operator for `residual-map` and optional filter for `convergence`.
    pub operator: Option<OperatorKind>,
    pub format: Format,
}

pub fn parse_function_spec(text: &str) -> Result<FunctionSpec> {
    FunctionSpec::from_json(text)
}

/// Process exit status for an error: 1 for bad input, 2 for numerical
/// domain failures.
pub fn exit_code(e: &Error) -> i32 {
    if e.is_input_error() {
        1
    } else {
        2
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasisTableDoc {
    pub algebra: Algebra,
    pub dim: usize,
    /// Row = left factor, column = right factor, cell = signed result index
    /// such as `"+3"` or `"-0"`.
    pub table: Vec<Vec<String>>,
}

impl From<&BasisTable> for BasisTableDoc {
    fn from(t: &BasisTable) -> Self {
        Self {
            algebra: t.algebra(),
            dim: t.dim(),
            table: t
                .rows()
                .map(|r| r.iter().map(|e| e.to_string()).collect())
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointRecord {
    pub index: usize,
    pub point: Vec<f64>,
    pub residual: Vec<f64>,
    pub norm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualMap {
    pub function: FunctionSpec,
    pub operator: OperatorKind,
    pub config: ClassifyConfig,
    pub points: Vec<PointRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderRecord {
    pub index: usize,
    pub order: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorOrders {
    pub operator: OperatorKind,
    pub summary: ConvergenceSummary,
    pub points: Vec<OrderRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceTable {
    pub function: FunctionSpec,
    pub function_scale: f64,
    pub config: ClassifyConfig,
    pub operators: Vec<OperatorOrders>,
}

fn spec_of(job: &JobConfig) -> Result<&FunctionSpec> {
    let spec = job.spec.as_ref().ok_or_else(|| {
        Error::Config("this command needs a function spec (--spec or --spec-json)".into())
    })?;
    if spec.algebra() != job.algebra {
        return Err(Error::DimensionMismatch {
            expected: job.algebra.dim(),
            found: spec.algebra().dim(),
        });
    }
    Ok(spec)
}

pub fn residual_map(
    f: &FunctionSpec,
    op: OperatorKind,
    config: &ClassifyConfig,
) -> Result<ResidualMap> {
    let config = effective_config(f, config);
    config.validate()?;
    if !op.supports(f.algebra()) {
        return Err(Error::UnsupportedOperator {
            operator: op.name(),
            algebra: f.algebra().name(),
        });
    }
    let pts = sample_grid(&config.grid)?;
    function_scale(f, &pts)?;
    let h = if op == OperatorKind::ThirdOrderProbe {
        config.probe_h
    } else {
        config.h
    };
    let values = pointwise(f, op, &pts, h)?;
    let points = pts
        .iter()
        .zip(&values)
        .enumerate()
        .map(|(index, (p, v))| PointRecord {
            index,
            point: p.components().to_vec(),
            residual: v.components(),
            norm: v.magnitude(),
        })
        .collect();
    Ok(ResidualMap {
        function: f.clone(),
        operator: op,
        config,
        points,
    })
}

pub fn convergence_table(
    f: &FunctionSpec,
    only: Option<OperatorKind>,
    config: &ClassifyConfig,
) -> Result<ConvergenceTable> {
    let config = effective_config(f, config);
    config.validate()?;
    let pts = sample_grid(&config.grid)?;
    let scale = function_scale(f, &pts)?;
    let floor = config.noise_floor * scale;
    let ops: Vec<OperatorKind> = match only {
        Some(op) if !op.supports(f.algebra()) => {
            return Err(Error::UnsupportedOperator {
                operator: op.name(),
                algebra: f.algebra().name(),
            })
        }
        Some(op) => vec![op],
        None => OperatorKind::ALL
            .into_iter()
            .filter(|op| op.supports(f.algebra()) && *op != OperatorKind::ThirdOrderProbe)
            .collect(),
    };
    let mut operators = Vec::new();
    for op in ops {
        let estimates: Vec<OrderEstimate> = {
            use rayon::prelude::*;
            pts.par_iter()
                .enumerate()
                .map(|(i, q)| {
                    estimate_convergence_order(f, op, q, config.order_h, floor).map_err(|e| {
                        Error::AtPoint {
                            index: i,
                            point: q.components().to_vec(),
                            source: Box::new(e),
                        }
                    })
                })
                .collect::<Result<_>>()?
        };
        operators.push(OperatorOrders {
            operator: op,
            summary: ConvergenceSummary::from_estimates(config.order_h, &estimates),
            points: estimates
                .iter()
                .enumerate()
                .map(|(index, e)| OrderRecord {
                    index,
                    order: e.value(),
                })
                .collect(),
        });
    }
    Ok(ConvergenceTable {
        function: f.clone(),
        function_scale: scale,
        config,
        operators,
    })
}

/// Runs one job and returns the serialized report.
pub fn run(job: &JobConfig) -> Result<String> {
    if job.classify.grid.algebra != job.algebra {
        return Err(Error::Config(
            "grid algebra does not match the job algebra".into(),
        ));
    }
    match job.command {
        Command::Table => {
            let doc = BasisTableDoc::from(job.algebra.basis_table());
            Ok(match job.format {
                Format::Json => to_canonical_json(&doc),
                Format::Csv => table_csv(&doc),
            })
        }
        Command::Classify => {
            let report = classify(spec_of(job)?, &job.classify)?;
            Ok(match job.format {
                Format::Json => to_canonical_json(&report),
                Format::Csv => report_csv(&report),
            })
        }
        Command::ResidualMap => {
            let op = job.operator.unwrap_or(OperatorKind::LocalConjRadial);
            let map = residual_map(spec_of(job)?, op, &job.classify)?;
            Ok(match job.format {
                Format::Json => to_canonical_json(&map),
                Format::Csv => residual_map_csv(&map),
            })
        }
        Command::Convergence => {
            let table = convergence_table(spec_of(job)?, job.operator, &job.classify)?;
            Ok(match job.format {
                Format::Json => to_canonical_json(&table),
                Format::Csv => convergence_csv(&table),
            })
        }
    }
}

/// Serializes `report` as JSON with sorted keys and 17-significant-digit
/// floats.
pub fn to_canonical_json<T: Serialize>(report: &T) -> String {
    let value = serde_json::to_value(report).expect("reports serialize to JSON");
    let mut out = String::new();
    write_value(&mut out, &value, 0);
    out.push('\n');
    out
}

pub fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Config(format!("cannot parse report: {e}")))
}

pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        // not representable in JSON; reports never carry these
        "null".to_string()
    }
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    let pad = |out: &mut String, n: usize| out.extend(std::iter::repeat_n(' ', n));
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => match (n.as_u64(), n.as_i64()) {
            (Some(u), _) => write!(out, "{u}").unwrap(),
            (None, Some(i)) => write!(out, "{i}").unwrap(),
            _ => out.push_str(&format_float(n.as_f64().expect("finite number"))),
        },
        Value::String(s) => out.push_str(&serde_json::to_string(s).expect("string")),
        Value::Array(items) => {
            if items.iter().all(|i| !i.is_array() && !i.is_object()) {
                out.push('[');
                for (k, item) in items.iter().enumerate() {
                    if k > 0 {
                        out.push_str(", ");
                    }
                    write_value(out, item, indent);
                }
                out.push(']');
                return;
            }
            out.push_str("[\n");
            for (k, item) in items.iter().enumerate() {
                pad(out, indent + 2);
                write_value(out, item, indent + 2);
                out.push_str(if k + 1 < items.len() { ",\n" } else { "\n" });
            }
            pad(out, indent);
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            // serde_json's default map is a BTreeMap, so keys come out sorted
            out.push_str("{\n");
            for (k, (key, item)) in map.iter().enumerate() {
                pad(out, indent + 2);
                out.push_str(&serde_json::to_string(key).expect("string"));
                out.push_str(": ");
                write_value(out, item, indent + 2);
                out.push_str(if k + 1 < map.len() { ",\n" } else { "\n" });
            }
            pad(out, indent);
            out.push('}');
        }
    }
}

fn csv_text(rows: Vec<Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

fn opt_float(x: Option<f64>) -> String {
    x.map(format_float).unwrap_or_default()
}

fn table_csv(doc: &BasisTableDoc) -> String {
    csv_text(doc.table.clone())
}

fn report_csv(r: &RegularityReport) -> String {
    let mut rows = vec![vec!["operator".to_string(), "stat".into(), "value".into()]];
    let verdict = |v| {
        serde_json::to_value(v)
            .unwrap()
            .as_str()
            .unwrap()
            .to_string()
    };
    for op in &r.operators {
        let name = op.operator.name().to_string();
        let mut push =
            |stat: &str, value: String| rows.push(vec![name.clone(), stat.to_string(), value]);
        push("verdict", verdict(op.verdict));
        push("tolerance", opt_float(op.tolerance));
        if let Some(s) = &op.stats {
            push("count", s.count.to_string());
            push("max_abs", format_float(s.max_abs));
            push("mean_abs", format_float(s.mean_abs));
            push("l2", format_float(s.l2));
        }
        if let Some(c) = &op.convergence {
            push("median_order", opt_float(c.median_order));
        }
    }
    csv_text(rows)
}

fn residual_map_csv(m: &ResidualMap) -> String {
    let dim = m.function.algebra().dim();
    let width = m.points.first().map_or(0, |p| p.residual.len());
    let mut header = vec!["index".to_string()];
    header.extend((0..dim).map(|k| format!("x{k}")));
    header.extend((0..width).map(|k| format!("r{k}")));
    header.push("norm".into());
    let mut rows = vec![header];
    for p in &m.points {
        let mut row = vec![p.index.to_string()];
        row.extend(p.point.iter().copied().map(format_float));
        row.extend(p.residual.iter().copied().map(format_float));
        row.push(format_float(p.norm));
        rows.push(row);
    }
    csv_text(rows)
}

fn convergence_csv(t: &ConvergenceTable) -> String {
    let mut rows = vec![vec!["operator".to_string(), "index".into(), "order".into()]];
    for op in &t.operators {
        for p in &op.points {
            rows.push(vec![
                op.operator.name().to_string(),
                p.index.to_string(),
                opt_float(p.order),
            ]);
        }
    }
    csv_text(rows)
}

/// Job defaults for `algebra`: default grid, `h = 1e-4`, automatic
/// tolerances.
pub fn default_job(command: Command, algebra: Algebra, spec: Option<FunctionSpec>) -> JobConfig {
    JobConfig {
        command,
        spec,
        algebra,
        classify: ClassifyConfig::new(GridSpec::default_for(algebra)),
        operator: None,
        format: Format::Json,
    }
}

/// Replaces automatic tolerances with an absolute one.
pub fn with_absolute_tolerance(mut job: JobConfig, value: f64) -> JobConfig {
    job.classify.tolerance = ToleranceRule::Absolute { value };
    job
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::BuiltinName;

    #[test]
    fn float_format_roundtrips() {
        for x in [
            0.1,
            1.0 / 3.0,
            -2.5e-300,
            6.02e23,
            0.0,
            -0.0,
            f64::MIN_POSITIVE,
        ] {
            let s = format_float(x);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits(), "{s}");
            let v: f64 = serde_json::from_str(&s).unwrap();
            assert_eq!(v.to_bits(), x.to_bits());
        }
        assert_eq!(format_float(1.0), "1.0000000000000000e0");
    }

    #[test]
    fn table_output() {
        let job = default_job(Command::Table, Algebra::Quaternion, None);
        let out = run(&job).unwrap();
        let doc: BasisTableDoc = from_json(&out).unwrap();
        assert_eq!(doc.table[1][2], "+3");
        assert_eq!(doc.table[2][1], "-3");
        assert_eq!(doc.table[1][1], "-0");
    }

    #[test]
    fn missing_spec_and_mismatch() {
        let job = default_job(Command::Classify, Algebra::Quaternion, None);
        assert_eq!(exit_code(&run(&job).unwrap_err()), 1);
        let f = FunctionSpec::builtin(BuiltinName::ConjQ, Algebra::Octonion);
        let job = default_job(Command::Classify, Algebra::Quaternion, Some(f));
        assert!(matches!(run(&job), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn domain_errors_exit_two() {
        let f = FunctionSpec::builtin(BuiltinName::Identity, Algebra::Quaternion);
        let mut job = default_job(Command::Classify, Algebra::Quaternion, Some(f));
        job.classify.grid.axes = vec![
            crate::classify::AxisRange {
                lo: 0.0,
                hi: 0.1,
                count: 2
            };
            4
        ];
        assert_eq!(exit_code(&run(&job).unwrap_err()), 2);
    }

    #[test]
    fn residual_map_rows() {
        let f = FunctionSpec::builtin(BuiltinName::ConjQ, Algebra::Quaternion);
        let mut job = default_job(Command::ResidualMap, Algebra::Quaternion, Some(f));
        job.format = Format::Csv;
        let out = run(&job).unwrap();
        let n = sample_grid(&job.classify.grid).unwrap().len();
        assert_eq!(out.lines().count(), n + 1);
    }
}
