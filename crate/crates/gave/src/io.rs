//! Matrix Market reading and writing for the two supported headers:
//! `matrix array real general` (dense, column-major entries) and
//! `matrix coordinate real general` (1-indexed triplets, duplicates
//! summed, unspecified entries zero).

use std::path::Path;

use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, DenseVector};

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::ParseError {
        line,
        msg: msg.into(),
    }
}

/// Parse Matrix Market text.
pub fn parse_matrix_market(text: &str) -> Result<DenseMatrix> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "empty file, expected %%MatrixMarket header"))?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() != 5 || !tokens[0].eq_ignore_ascii_case("%%MatrixMarket") {
        return Err(parse_err(
            1,
            "expected '%%MatrixMarket matrix <format> <field> <symmetry>'",
        ));
    }
    if !tokens[1].eq_ignore_ascii_case("matrix") {
        return Err(parse_err(1, format!("unsupported object '{}'", tokens[1])));
    }
    let coordinate = match tokens[2].to_ascii_lowercase().as_str() {
        "array" => false,
        "coordinate" => true,
        other => return Err(parse_err(1, format!("unsupported format '{other}'"))),
    };
    match tokens[3].to_ascii_lowercase().as_str() {
        "real" => {}
        other => {
            return Err(parse_err(
                1,
                format!("unsupported field '{other}' (only real is supported)"),
            ))
        }
    }
    match tokens[4].to_ascii_lowercase().as_str() {
        "general" => {}
        other => {
            return Err(parse_err(
                1,
                format!("unsupported symmetry '{other}' (only general is supported)"),
            ))
        }
    }

    // tokens after the header, skipping comments and blank lines
    let mut data: Vec<(usize, &str)> = Vec::new();
    for (idx, line) in lines {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        for tok in trimmed.split_whitespace() {
            data.push((idx + 1, tok));
        }
    }
    let mut pos = 0usize;
    let mut take = |what: &str| -> Result<(usize, &str)> {
        let item = data
            .get(pos)
            .copied()
            .ok_or_else(|| parse_err(data.last().map_or(1, |(l, _)| *l), format!("missing {what}")))?;
        pos += 1;
        Ok(item)
    };

    let parse_dim = |(line, tok): (usize, &str), what: &str| -> Result<usize> {
        tok.parse::<usize>()
            .map_err(|_| parse_err(line, format!("invalid {what} '{tok}'")))
    };
    let parse_val = |(line, tok): (usize, &str)| -> Result<f64> {
        let v: f64 = tok
            .parse()
            .map_err(|_| parse_err(line, format!("invalid value '{tok}'")))?;
        if !v.is_finite() {
            return Err(parse_err(line, format!("non-finite value '{tok}'")));
        }
        Ok(v)
    };

    let rows = parse_dim(take("row count")?, "row count")?;
    let cols = parse_dim(take("column count")?, "column count")?;
    if rows == 0 || cols == 0 {
        return Err(parse_err(
            data.first().map_or(1, |(l, _)| *l),
            format!("dimensions must be at least 1x1, got {rows}x{cols}"),
        ));
    }

    if coordinate {
        let nnz = parse_dim(take("entry count")?, "entry count")?;
        let mut m = DenseMatrix::zeros(rows, cols);
        for _ in 0..nnz {
            let (line_i, tok_i) = take("row index")?;
            let i: usize = tok_i
                .parse()
                .map_err(|_| parse_err(line_i, format!("invalid row index '{tok_i}'")))?;
            let (line_j, tok_j) = take("column index")?;
            let j: usize = tok_j
                .parse()
                .map_err(|_| parse_err(line_j, format!("invalid column index '{tok_j}'")))?;
            let v = parse_val(take("value")?)?;
            if i == 0 || i > rows || j == 0 || j > cols {
                return Err(Error::DimensionError(format!(
                    "line {line_i}: index ({i}, {j}) outside {rows}x{cols}"
                )));
            }
            // duplicates accumulate
            m[(i - 1, j - 1)] += v;
        }
        if pos != data.len() {
            let (line, tok) = data[pos];
            return Err(parse_err(line, format!("unexpected trailing token '{tok}'")));
        }
        Ok(m)
    } else {
        let mut m = DenseMatrix::zeros(rows, cols);
        // array format stores entries column-major
        for j in 0..cols {
            for i in 0..rows {
                m[(i, j)] = parse_val(take("matrix entry")?)?;
            }
        }
        if pos != data.len() {
            let (line, tok) = data[pos];
            return Err(parse_err(line, format!("unexpected trailing token '{tok}'")));
        }
        Ok(m)
    }
}

pub fn load_matrix_market(path: &Path) -> Result<DenseMatrix> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    })?;
    parse_matrix_market(&text)
}

/// Load an n×1 array file as a vector.
pub fn load_vector_market(path: &Path) -> Result<DenseVector> {
    let m = load_matrix_market(path)?;
    if m.cols() != 1 {
        return Err(Error::DimensionError(format!(
            "{} is {}x{}, expected a single column",
            path.display(),
            m.rows(),
            m.cols()
        )));
    }
    DenseVector::new(m.column(0))
}

/// Render in array real general format (column-major), 17 significant
/// digits per entry so values round-trip exactly.
pub fn format_matrix_market(m: &DenseMatrix) -> String {
    let mut out = String::new();
    out.push_str("%%MatrixMarket matrix array real general\n");
    out.push_str(&format!("{} {}\n", m.rows(), m.cols()));
    for j in 0..m.cols() {
        for i in 0..m.rows() {
            out.push_str(&format!("{:.16e}\n", m[(i, j)]));
        }
    }
    out
}

pub fn write_matrix_market(path: &Path, m: &DenseMatrix) -> Result<()> {
    std::fs::write(path, format_matrix_market(m)).map_err(|e| Error::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    })
}

pub fn write_vector_market(path: &Path, v: &DenseVector) -> Result<()> {
    let m = DenseMatrix::new(v.len(), 1, v.as_slice().to_vec())?;
    write_matrix_market(path, &m)
}
