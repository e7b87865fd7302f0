//! Matrix JSON: {"rows": r, "cols": c, "entries": [[…],…]} with exact integer
//! entries of any size (serde_json's arbitrary-precision numbers carry the digits).

use anyhow::{bail, Context, Result};
use num_bigint::BigInt;
use serde_json::Value;
use std::str::FromStr;

use prymgauss::lattice::IntMatrix;

fn entry_to_bigint(v: &Value, at: &str) -> Result<BigInt> {
    match v {
        Value::Number(n) => {
            let s = n.to_string();
            BigInt::from_str(&s).with_context(|| format!("non-integer entry {s} at {at}"))
        }
        other => bail!("entry at {at} is {other}, expected an integer"),
    }
}

pub fn matrix_from_json(v: &Value) -> Result<IntMatrix> {
    let rows = v
        .get("rows")
        .and_then(Value::as_u64)
        .context("matrix JSON needs a \"rows\" count")? as usize;
    let cols = v
        .get("cols")
        .and_then(Value::as_u64)
        .context("matrix JSON needs a \"cols\" count")? as usize;
    let entries = v
        .get("entries")
        .and_then(Value::as_array)
        .context("matrix JSON needs an \"entries\" array of rows")?;
    if entries.len() != rows {
        bail!("entries has {} rows, header says {}", entries.len(), rows);
    }
    let mut flat = Vec::with_capacity(rows * cols);
    for (i, row) in entries.iter().enumerate() {
        let row = row
            .as_array()
            .with_context(|| format!("entries[{i}] is not an array"))?;
        if row.len() != cols {
            bail!(
                "entries[{i}] has {} columns, header says {}",
                row.len(),
                cols
            );
        }
        for (j, cell) in row.iter().enumerate() {
            flat.push(entry_to_bigint(cell, &format!("entries[{i}][{j}]"))?);
        }
    }
    Ok(IntMatrix::new(rows, cols, flat)?)
}

pub fn matrix_to_json(m: &IntMatrix) -> Value {
    let entries: Vec<Value> = (0..m.rows())
        .map(|i| {
            Value::Array(
                m.row(i)
                    .iter()
                    .map(|e| {
                        Value::Number(
                            serde_json::Number::from_str(&e.to_string()).expect("decimal digits"),
                        )
                    })
                    .collect(),
            )
        })
        .collect();
    serde_json::json!({ "rows": m.rows(), "cols": m.cols(), "entries": entries })
}

/// Comma-separated integer list, arbitrary precision.
pub fn vector_from_str(s: &str) -> Result<Vec<BigInt>> {
    s.split(',')
        .map(|tok| {
            let tok = tok.trim();
            BigInt::from_str(tok).with_context(|| format!("bad integer {tok:?} in vector"))
        })
        .collect()
}
