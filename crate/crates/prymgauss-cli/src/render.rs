//! Output formats: JSON values, CSV and aligned Markdown for the tabular reports.

use anyhow::{Context, Result};
use num_bigint::BigUint;
use serde_json::{json, Value};
use std::fmt::Write as _;
use std::str::FromStr;

use prymgauss::formulas::{Dim5Report, MonotonicityReport};
use prymgauss::search::Table1Report;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Md,
}

/// Arbitrary-precision integers as JSON numbers (exact digits, no floats).
pub fn big_number(v: &BigUint) -> Value {
    Value::Number(serde_json::Number::from_str(&v.to_string()).expect("decimal digits"))
}

pub fn degree_vector_label(parts: &[u32]) -> String {
    let inner: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
    format!("({})", inner.join(","))
}

fn csv_escape(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\n') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

pub fn csv_line(fields: &[String]) -> String {
    fields
        .iter()
        .map(|f| csv_escape(f))
        .collect::<Vec<_>>()
        .join(",")
}

fn md_table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.len()).collect();
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.len());
        }
    }
    let mut out = String::new();
    let fmt_row = |cells: &[String], widths: &[usize]| -> String {
        let padded: Vec<String> = cells
            .iter()
            .zip(widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        format!("| {} |", padded.join(" | "))
    };
    let header_cells: Vec<String> = headers.iter().map(|h| h.to_string()).collect();
    let _ = writeln!(out, "{}", fmt_row(&header_cells, &widths));
    let sep: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
    let _ = writeln!(out, "{}", fmt_row(&sep, &widths));
    for row in rows {
        let _ = writeln!(out, "{}", fmt_row(row, &widths));
    }
    out
}

pub fn dim5_to_json(r: &Dim5Report) -> Value {
    json!({
        "families": r.families.iter().map(|f| json!({
            "label": f.label,
            "degree": big_number(&f.degree),
            "max_xi": f.max_xi,
        })).collect::<Vec<_>>(),
        "boundary": r.boundary.iter().map(|b| json!({
            "degree_vector": b.degree_vector.parts(),
            "degree": big_number(&b.degree),
            "max_xi": b.max_xi,
        })).collect::<Vec<_>>(),
        "achievable_degrees": r.achievable_degrees,
    })
}

pub fn dim5_rows(r: &Dim5Report) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    for f in &r.families {
        rows.push(vec![
            "families".into(),
            f.label.to_string(),
            f.degree.to_string(),
            f.max_xi.map(|x| x.to_string()).unwrap_or_default(),
        ]);
    }
    for b in &r.boundary {
        rows.push(vec![
            "boundary".into(),
            degree_vector_label(b.degree_vector.parts()),
            b.degree.to_string(),
            b.max_xi.to_string(),
        ]);
    }
    let degrees: Vec<String> = r.achievable_degrees.iter().map(|d| d.to_string()).collect();
    rows.push(vec![
        "achievable".into(),
        String::new(),
        degrees.join(" "),
        String::new(),
    ]);
    rows
}

pub fn dim5_render(r: &Dim5Report, format: Format) -> String {
    match format {
        Format::Json => {
            serde_json::to_string_pretty(&dim5_to_json(r)).expect("serializable") + "\n"
        }
        Format::Csv => {
            let mut out = String::from("table,label,degree,max_xi\n");
            for row in dim5_rows(r) {
                out.push_str(&csv_line(&row));
                out.push('\n');
            }
            out
        }
        Format::Md => md_table(&["table", "label", "degree", "max_xi"], &dim5_rows(r)),
    }
}

pub fn table1_to_json(r: &Table1Report) -> Value {
    serde_json::to_value(r).expect("serializable")
}

pub fn table1_rows(r: &Table1Report) -> Vec<Vec<String>> {
    r.rows
        .iter()
        .map(|row| {
            vec![
                degree_vector_label(&row.parts),
                row.group.clone(),
                (row.computed_xi / 2).to_string(),
                row.expected_xi_half.to_string(),
                row.computed_rank.to_string(),
                row.expected_rank.to_string(),
                if row.pass { "pass" } else { "FAIL" }.to_string(),
            ]
        })
        .collect()
}

pub fn table1_render(r: &Table1Report, format: Format) -> String {
    const HEADERS: [&str; 7] = [
        "d",
        "group",
        "xi_half",
        "expected_xi_half",
        "rank",
        "expected_rank",
        "status",
    ];
    match format {
        Format::Json => {
            serde_json::to_string_pretty(&table1_to_json(r)).expect("serializable") + "\n"
        }
        Format::Csv => {
            let mut out =
                String::from("d,group,xi_half,expected_xi_half,rank,expected_rank,status\n");
            for row in table1_rows(r) {
                out.push_str(&csv_line(&row));
                out.push('\n');
            }
            out
        }
        Format::Md => md_table(&HEADERS, &table1_rows(r)),
    }
}

pub fn monotonicity_to_json(r: &MonotonicityReport) -> Value {
    json!({
        "rows": r.rows.iter().map(|row| json!({
            "g": row.g,
            "jacobian": big_number(&row.jacobian),
            "bielliptic": row.bielliptic.iter().map(big_number).collect::<Vec<_>>(),
            "strictly_decreasing": row.strictly_decreasing,
            "sandwich": row.sandwich,
        })).collect::<Vec<_>>(),
        "violations": r.violations,
        "all_ok": r.all_ok(),
    })
}

pub fn monotonicity_render(r: &MonotonicityReport, format: Format) -> String {
    match format {
        Format::Json => {
            serde_json::to_string_pretty(&monotonicity_to_json(r)).expect("serializable") + "\n"
        }
        Format::Csv => {
            let mut out = String::from("g,jacobian,degrees_t1_up,decreasing,sandwich\n");
            for row in &r.rows {
                let degs: Vec<String> = row.bielliptic.iter().map(|d| d.to_string()).collect();
                out.push_str(&csv_line(&[
                    row.g.to_string(),
                    row.jacobian.to_string(),
                    degs.join(" "),
                    row.strictly_decreasing.to_string(),
                    row.sandwich.to_string(),
                ]));
                out.push('\n');
            }
            out
        }
        Format::Md => {
            let rows: Vec<Vec<String>> = r
                .rows
                .iter()
                .map(|row| {
                    let degs: Vec<String> = row.bielliptic.iter().map(|d| d.to_string()).collect();
                    vec![
                        row.g.to_string(),
                        row.jacobian.to_string(),
                        degs.join(" "),
                        row.strictly_decreasing.to_string(),
                        row.sandwich.to_string(),
                    ]
                })
                .collect();
            md_table(
                &["g", "jacobian", "degrees t=1..", "decreasing", "sandwich"],
                &rows,
            )
        }
    }
}

/// Generic single-value rendering for the formula subcommands.
pub fn value_render(keys: &[(&str, Value)], format: Option<Format>) -> String {
    match format {
        None => {
            // bare value of the first key
            match &keys[0].1 {
                Value::Number(n) => format!("{n}\n"),
                v => format!("{v}\n"),
            }
        }
        Some(Format::Json) => {
            let map: serde_json::Map<String, Value> = keys
                .iter()
                .map(|(k, v)| (k.to_string(), v.clone()))
                .collect();
            serde_json::to_string_pretty(&Value::Object(map)).expect("serializable") + "\n"
        }
        Some(Format::Csv) => {
            let header: Vec<String> = keys.iter().map(|(k, _)| k.to_string()).collect();
            let row: Vec<String> = keys
                .iter()
                .map(|(_, v)| match v {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                })
                .collect();
            format!("{}\n{}\n", csv_line(&header), csv_line(&row))
        }
        Some(Format::Md) => {
            let headers: Vec<&str> = keys.iter().map(|(k, _)| *k).collect();
            let row: Vec<String> = keys
                .iter()
                .map(|(_, v)| match v {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                })
                .collect();
            md_table(&headers, &[row])
        }
    }
}

/// Writes rendered output to stdout or to `--out PATH`.
pub fn emit(rendered: &str, out: Option<&std::path::Path>) -> Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, rendered).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            print!("{rendered}");
            Ok(())
        }
    }
}
