//! Table serialization: CSV with `#`-prefixed metadata lines, and JSON with
//! the same numeric rendering.
//!
//! Numbers are rendered with 17 significant digits, enough for any f64 to
//! survive a parse round trip bit for bit.  Non-finite values use the
//! sentinels `inf`, `-inf` and `nan`; JSON quotes them, since the JSON
//! grammar has no non-finite literals.

use qldp_core::Table;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

/// 17-significant-digit decimal rendering with non-finite sentinels.
pub fn render_f64(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v == f64::INFINITY {
        "inf".into()
    } else if v == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{v:.16e}")
    }
}

/// Metadata lines prefixed `# `, a column-name header, then numeric rows.
pub fn csv_string(t: &Table) -> String {
    let mut s = String::new();
    for (k, v) in &t.meta {
        s.push_str(&format!("# {k} = {v}\n"));
    }
    s.push_str(&t.columns.join(","));
    s.push('\n');
    for row in &t.rows {
        let cells: Vec<String> = row.iter().map(|&v| render_f64(v)).collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    s
}

fn json_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out
}

fn json_cell(v: f64) -> String {
    if v.is_finite() {
        render_f64(v)
    } else {
        format!("\"{}\"", render_f64(v))
    }
}

/// One object with `meta` (string values, insertion order), `columns` and
/// `rows`.
pub fn json_string(t: &Table) -> String {
    let mut s = String::from("{\n  \"meta\": {");
    for (i, (k, v)) in t.meta.iter().enumerate() {
        s.push_str(if i == 0 { "\n" } else { ",\n" });
        s.push_str(&format!(
            "    \"{}\": \"{}\"",
            json_escape(k),
            json_escape(v)
        ));
    }
    if !t.meta.is_empty() {
        s.push_str("\n  ");
    }
    s.push_str("},\n  \"columns\": [");
    let cols: Vec<String> = t
        .columns
        .iter()
        .map(|c| format!("\"{}\"", json_escape(c)))
        .collect();
    s.push_str(&cols.join(", "));
    s.push_str("],\n  \"rows\": [");
    for (i, row) in t.rows.iter().enumerate() {
        s.push_str(if i == 0 { "\n" } else { ",\n" });
        let cells: Vec<String> = row.iter().map(|&v| json_cell(v)).collect();
        s.push_str(&format!("    [{}]", cells.join(", ")));
    }
    if !t.rows.is_empty() {
        s.push_str("\n  ");
    }
    s.push_str("]\n}\n");
    s
}

/// Writes to the path, or to stdout when no path is given; returns a label
/// for the summary line.
pub fn write_text(text: &str, out: Option<&Path>) -> io::Result<String> {
    match out {
        Some(p) => {
            fs::write(p, text)?;
            Ok(p.display().to_string())
        }
        None => {
            io::stdout().write_all(text.as_bytes())?;
            Ok("stdout".into())
        }
    }
}
