//! Grid tokens and tabular sweep output.
//!
//! A grid token is a comma-separated list of items, each either a literal (`0.5`, `inf`)
//! or a range `start:step:stop` with both ends included when hit.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{Map, Value};

use crate::CliError;

/// Whether a raw argument asks for more than one point.
pub fn is_grid(token: &str) -> bool {
    token.contains(':') || token.contains(',')
}

fn decimals(s: &str) -> usize {
    let s = s.trim();
    match s.find(['e', 'E']) {
        Some(_) => 12,
        None => s.find('.').map_or(0, |d| s.len() - d - 1),
    }
}

fn number(s: &str) -> Result<f64, CliError> {
    s.trim().parse::<f64>().map_err(|_| CliError::Usage(format!("bad grid number '{s}'")))
}

/// Expands a grid token into the literal tokens of its points, in order.
///
/// Range points are `start + i*step` rounded to the decimals written in the token, so that
/// `0:0.05:1` hits `1` exactly.
pub fn expand(token: &str) -> Result<Vec<String>, CliError> {
    let mut out = Vec::new();
    for item in token.split(',') {
        let item = item.trim();
        if item.is_empty() {
            return Err(CliError::Usage(format!("empty item in grid '{token}'")));
        }
        let parts: Vec<&str> = item.split(':').collect();
        match parts.as_slice() {
            [single] => out.push(single.to_string()),
            [a, s, b] => {
                let (start, step, stop) = (number(a)?, number(s)?, number(b)?);
                if !(step > 0.0) || !step.is_finite() || !start.is_finite() || !stop.is_finite() {
                    return Err(CliError::Usage(format!("range '{item}' needs finite ends and a positive step")));
                }
                if stop < start {
                    return Err(CliError::Usage(format!("range '{item}' is empty")));
                }
                let d = decimals(a).max(decimals(s)).max(decimals(b));
                let count = ((stop - start) / step + 1e-9).floor() as u64;
                if count > 1_000_000 {
                    return Err(CliError::Usage(format!("range '{item}' has too many points")));
                }
                for i in 0..=count {
                    let x = start + i as f64 * step;
                    out.push(format!("{x:.d$}"));
                }
            }
            _ => return Err(CliError::Usage(format!("bad grid item '{item}'"))),
        }
    }
    Ok(out)
}

/// Output format of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// One evaluated grid point: the swept token and either the outputs or an error message.
pub type Row = (String, Result<Vec<f64>, String>);

fn cell(x: f64) -> String {
    if x == f64::INFINITY {
        "inf".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{x}")
    }
}

fn json_number(x: f64) -> Value {
    serde_json::Number::from_f64(x).map(Value::Number).unwrap_or_else(|| Value::String(cell(x)))
}

/// Writes the table; `None` as path means stdout.
pub fn write_table(swept: &str, outputs: &[&str], rows: &[Row], format: Format, path: Option<&Path>) -> Result<(), CliError> {
    let mut buf = Vec::new();
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut buf);
            let mut header = vec![swept];
            header.extend_from_slice(outputs);
            w.write_record(&header)?;
            for (x, r) in rows {
                let mut rec = vec![x.clone()];
                match r {
                    Ok(v) => rec.extend(v.iter().map(|&y| cell(y))),
                    Err(_) => rec.extend(outputs.iter().map(|_| String::new())),
                }
                w.write_record(&rec)?;
            }
            w.flush().map_err(|source| CliError::Write { path: path.map_or("<stdout>".into(), PathBuf::from), source })?;
        }
        Format::Json => {
            let arr: Vec<Value> = rows
                .iter()
                .map(|(x, r)| {
                    let mut m = Map::new();
                    m.insert(swept.into(), x.parse::<f64>().map(json_number).unwrap_or_else(|_| Value::String(x.clone())));
                    for (i, name) in outputs.iter().enumerate() {
                        let v = match r {
                            Ok(v) => json_number(v[i]),
                            Err(_) => Value::Null,
                        };
                        m.insert((*name).into(), v);
                    }
                    Value::Object(m)
                })
                .collect();
            buf = serde_json::to_vec_pretty(&Value::Array(arr)).expect("plain json");
            buf.push(b'\n');
        }
    }
    match path {
        Some(p) => std::fs::write(p, buf).map_err(|source| CliError::Write { path: p.into(), source }),
        None => std::io::stdout()
            .write_all(&buf)
            .map_err(|source| CliError::Write { path: "<stdout>".into(), source }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expands_ranges_and_literals() {
        let v = expand("0:0.25:1,inf").unwrap();
        assert_eq!(v, ["0.00", "0.25", "0.50", "0.75", "1.00", "inf"]);
        assert_eq!("1.00".parse::<f64>().unwrap(), 1.0);
        assert_eq!(expand("0:0.05:5").unwrap().len(), 101);
        assert_eq!(expand("2").unwrap(), ["2"]);
        assert!(expand("1:0:2").is_err());
        assert!(expand("2:1:1").is_err());
        assert!(expand("1,,2").is_err());
        assert!(is_grid("0:1:2") && is_grid("1,2") && !is_grid("inf"));
    }

    #[test]
    fn csv_cells() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.csv");
        let rows = vec![("0.5".to_string(), Ok(vec![1.5])), ("inf".to_string(), Ok(vec![f64::INFINITY])), ("2".to_string(), Err("x".into()))];
        write_table("alpha", &["rate"], &rows, Format::Csv, Some(&path)).unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "alpha,rate\n0.5,1.5\ninf,inf\n2,\n");
        write_table("alpha", &["rate"], &rows, Format::Json, Some(&path)).unwrap();
        let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(v[1]["rate"], "inf");
        assert!(v[2]["rate"].is_null());
    }
}
