//! Plain-text matrix files: a `rows cols` header, then row-major real entries separated
//! by whitespace over any number of lines. Lines starting with `#` are ignored.

use std::fs;
use std::path::Path;

use crate::error::{invalid, Error, Result};
use crate::linalg::Matrix;

fn parse_error(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

pub fn parse_matrix(text: &str) -> Result<Matrix> {
    let mut header: Option<(usize, usize)> = None;
    let mut values = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let t = raw.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        last_line = line;
        let Some((rows, cols)) = header else {
            let dims: Vec<&str> = t.split_whitespace().collect();
            let parsed = match dims.as_slice() {
                [r, c] => r.parse::<usize>().ok().zip(c.parse::<usize>().ok()),
                _ => None,
            };
            match parsed {
                Some((r, c)) if r > 0 && c > 0 => {
                    header = Some((r, c));
                    values.reserve(r * c);
                }
                _ => return Err(parse_error(line, format!("expected \"rows cols\" header, found {t:?}"))),
            }
            continue;
        };
        for tok in t.split_whitespace() {
            let v: f64 = tok
                .parse()
                .map_err(|_| parse_error(line, format!("not a number: {tok:?}")))?;
            if !v.is_finite() {
                return Err(parse_error(line, format!("non-finite entry {tok:?}")));
            }
            if values.len() == rows * cols {
                return Err(parse_error(line, format!("more than {} entries", rows * cols)));
            }
            values.push(v);
        }
    }
    let Some((rows, cols)) = header else {
        return Err(parse_error(last_line.max(1), "missing \"rows cols\" header"));
    };
    if values.len() != rows * cols {
        return Err(parse_error(
            last_line,
            format!("expected {} entries, found {}", rows * cols, values.len()),
        ));
    }
    Matrix::from_real(rows, cols, &values)
}

pub fn read_matrix(path: &Path) -> Result<Matrix> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_matrix(&text)
}

/// Inverse of [`parse_matrix`]; entries use shortest round-trip formatting.
pub fn format_matrix(m: &Matrix) -> Result<String> {
    if !m.is_real() {
        return Err(invalid("matrix files hold real entries only"));
    }
    let mut out = format!("{} {}\n", m.rows(), m.cols());
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|z| format!("{:?}", z.re)).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    Ok(out)
}

pub fn write_matrix(path: &Path, m: &Matrix) -> Result<()> {
    fs::write(path, format_matrix(m)?).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}
