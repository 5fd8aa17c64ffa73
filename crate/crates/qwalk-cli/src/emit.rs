//! Output helpers: stdout-or-file sinks, 12-significant-digit floats, CSV.

use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

/// Floats in CSV output carry 12 significant digits so identical configs
/// produce identical bytes.
pub fn sig12(x: f64) -> String {
    format!("{x:.11e}")
}

pub fn write_out(output: Option<&Path>, content: &str) -> io::Result<()> {
    match output {
        Some(path) => {
            let mut f = File::create(path)?;
            f.write_all(content.as_bytes())
        }
        None => {
            let mut out = io::stdout().lock();
            out.write_all(content.as_bytes())
        }
    }
}

fn quote(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\n') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

/// CSV with a header row; fields containing separators are quoted.
pub fn csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut s = String::new();
    s.push_str(&header.join(","));
    s.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|c| quote(c)).collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    s
}
