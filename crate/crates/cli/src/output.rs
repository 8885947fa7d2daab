//! JSON and CSV renderings of command results.

use serde_json::Value;

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

/// A flat table of string cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn render_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value");
    s.push('\n');
    s
}

fn join_ints(v: Option<&Value>) -> String {
    v.and_then(Value::as_array)
        .map(|a| a.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(";"))
        .unwrap_or_default()
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// The flat view of a result: the terms of its `series`, one row per nonzero
/// class coordinate, or a single `value`.
pub fn flat_table(doc: &Value) -> Option<Table> {
    if let Some(terms) = doc.get("series").and_then(|s| s.get("terms")).and_then(Value::as_array) {
        let header = ["beta", "t_exp", "z_exp", "basis", "value"].map(String::from).to_vec();
        let mut rows = Vec::new();
        for t in terms {
            let key =
                [join_ints(t.get("beta")), join_ints(t.get("t_exp")), t.get("z_exp").map(cell).unwrap_or_default()];
            match t.get("value") {
                Some(Value::Object(m)) if !m.contains_key("num") => {
                    for (name, x) in m {
                        let mut row = key.to_vec();
                        row.extend([name.clone(), cell(x)]);
                        rows.push(row);
                    }
                }
                Some(v) => {
                    let mut row = key.to_vec();
                    row.extend([String::new(), cell(v)]);
                    rows.push(row);
                }
                None => return None,
            }
        }
        return Some(Table { header, rows });
    }
    doc.get("value").map(|v| Table { header: vec!["value".into()], rows: vec![vec![cell(v)]] })
}

pub fn render_csv(t: &Table) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Validation(format!("csv output: {e}"));
    w.write_record(&t.header).map_err(io)?;
    for r in &t.rows {
        w.write_record(r).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Validation(format!("csv output: {e}")))?;
    Ok(String::from_utf8(bytes).expect("utf-8 cells"))
}

/// Renders a cached JSON payload in the requested format.
pub fn render(payload: &str, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => Ok(payload.to_string()),
        Format::Csv => {
            let doc: Value =
                serde_json::from_str(payload).map_err(|e| CliError::Inconsistent(format!("payload: {e}")))?;
            let table = flat_table(&doc)
                .ok_or_else(|| CliError::Validation("csv output is only available for flat tables".into()))?;
            render_csv(&table)
        }
    }
}
