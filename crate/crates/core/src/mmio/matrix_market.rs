use std::collections::HashSet;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, Operator, SparseMatrixCsr};
use crate::mmio::fmt_f64;

/// Accepted header: `%%MatrixMarket matrix <coordinate|array> real
/// <general|symmetric>`. Everything else is an explicit unsupported-format
/// error rather than a silent coercion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Header {
    coordinate: bool,
    symmetric: bool,
}

fn parse_header(line: &str) -> Result<Header> {
    let tokens: Vec<&str> = line.split_whitespace().collect();
    if tokens.first().copied() != Some("%%MatrixMarket") {
        return Err(Error::UnsupportedFormat(
            "first line must start with %%MatrixMarket".into(),
        ));
    }
    if tokens.len() != 5 {
        return Err(Error::UnsupportedFormat(format!(
            "header must have 5 fields, got {}",
            tokens.len()
        )));
    }
    if !tokens[1].eq_ignore_ascii_case("matrix") {
        return Err(Error::UnsupportedFormat(format!(
            "object must be \"matrix\", got {:?}",
            tokens[1]
        )));
    }
    let coordinate = if tokens[2].eq_ignore_ascii_case("coordinate") {
        true
    } else if tokens[2].eq_ignore_ascii_case("array") {
        false
    } else {
        return Err(Error::UnsupportedFormat(format!(
            "format must be \"coordinate\" or \"array\", got {:?}",
            tokens[2]
        )));
    };
    if !tokens[3].eq_ignore_ascii_case("real") {
        return Err(Error::UnsupportedFormat(format!(
            "field must be \"real\", got {:?}",
            tokens[3]
        )));
    }
    let symmetric = if tokens[4].eq_ignore_ascii_case("symmetric") {
        true
    } else if tokens[4].eq_ignore_ascii_case("general") {
        false
    } else {
        return Err(Error::UnsupportedFormat(format!(
            "symmetry must be \"general\" or \"symmetric\", got {:?}",
            tokens[4]
        )));
    };
    Ok(Header {
        coordinate,
        symmetric,
    })
}

/// Data lines paired with their 1-based line numbers, comments and blank
/// lines removed.
fn data_lines(path: &Path) -> Result<(String, Vec<(usize, String)>)> {
    let file = File::open(path)?;
    let reader = BufReader::new(file);
    let mut lines = reader.lines().enumerate();
    let header = match lines.next() {
        Some((_, line)) => line?,
        None => {
            return Err(Error::UnsupportedFormat("file is empty".into()));
        }
    };
    let mut data = Vec::new();
    for (idx, line) in lines {
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('%') {
            continue;
        }
        data.push((idx + 1, text.to_string()));
    }
    Ok((header, data))
}

fn parse_usize(token: &str, line: usize, what: &str) -> Result<usize> {
    token.parse().map_err(|_| Error::Parse {
        line,
        message: format!("cannot parse {what} from {token:?}"),
    })
}

fn parse_value(token: &str, line: usize) -> Result<f64> {
    let value: f64 = token.parse().map_err(|_| Error::Parse {
        line,
        message: format!("cannot parse value from {token:?}"),
    })?;
    if !value.is_finite() {
        return Err(Error::Parse {
            line,
            message: format!("matrix value must be finite, got {token:?}"),
        });
    }
    Ok(value)
}

/// Reads a Matrix Market file. Coordinate files come back as CSR with
/// symmetric storage expanded to both triangles; array files come back
/// dense. Indices in the file are 1-based.
pub fn read_matrix_market(path: &Path) -> Result<Operator> {
    let (header_line, data) = data_lines(path)?;
    let header = parse_header(&header_line)?;
    if data.is_empty() {
        return Err(Error::Parse {
            line: 1,
            message: "missing size line".into(),
        });
    }
    let (size_line_no, size_line) = &data[0];
    let tokens: Vec<&str> = size_line.split_whitespace().collect();

    if header.coordinate {
        if tokens.len() != 3 {
            return Err(Error::Parse {
                line: *size_line_no,
                message: format!("coordinate size line needs 3 fields, got {}", tokens.len()),
            });
        }
        let m = parse_usize(tokens[0], *size_line_no, "row count")?;
        let n = parse_usize(tokens[1], *size_line_no, "column count")?;
        let nnz = parse_usize(tokens[2], *size_line_no, "nonzero count")?;
        if m != n {
            return Err(Error::UnsupportedFormat(format!(
                "only square matrices are supported, got {m} x {n}"
            )));
        }
        if n == 0 {
            return Err(Error::Parse {
                line: *size_line_no,
                message: "matrix dimension must be at least 1".into(),
            });
        }
        read_coordinate(n, nnz, header.symmetric, &data[1..]).map(Operator::Sparse)
    } else {
        if tokens.len() != 2 {
            return Err(Error::Parse {
                line: *size_line_no,
                message: format!("array size line needs 2 fields, got {}", tokens.len()),
            });
        }
        let m = parse_usize(tokens[0], *size_line_no, "row count")?;
        let n = parse_usize(tokens[1], *size_line_no, "column count")?;
        if m != n {
            return Err(Error::UnsupportedFormat(format!(
                "only square matrices are supported, got {m} x {n}"
            )));
        }
        if n == 0 {
            return Err(Error::Parse {
                line: *size_line_no,
                message: "matrix dimension must be at least 1".into(),
            });
        }
        read_array(n, header.symmetric, &data[1..]).map(Operator::Dense)
    }
}

fn read_coordinate(
    n: usize,
    nnz: usize,
    symmetric: bool,
    entries: &[(usize, String)],
) -> Result<SparseMatrixCsr> {
    let mut triples: Vec<(usize, usize, f64)> = Vec::with_capacity(nnz);
    let mut seen: HashSet<(usize, usize)> = HashSet::with_capacity(nnz);
    let mut count = 0;
    let mut last_line = 0;

    for (line_no, text) in entries {
        last_line = *line_no;
        if count == nnz {
            return Err(Error::Parse {
                line: *line_no,
                message: format!("more than the declared {nnz} entries"),
            });
        }
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if tokens.len() != 3 {
            return Err(Error::Parse {
                line: *line_no,
                message: format!("coordinate entry needs 3 fields, got {}", tokens.len()),
            });
        }
        let i = parse_usize(tokens[0], *line_no, "row index")?;
        let j = parse_usize(tokens[1], *line_no, "column index")?;
        let value = parse_value(tokens[2], *line_no)?;
        if i < 1 || i > n || j < 1 || j > n {
            return Err(Error::Parse {
                line: *line_no,
                message: format!("index ({i}, {j}) out of declared bounds 1..={n}"),
            });
        }
        let (i, j) = (i - 1, j - 1);
        // in a symmetric file (i, j) stands for (j, i) too, so either order
        // counts as the same cell when checking for duplicates
        let key = if symmetric {
            (i.max(j), i.min(j))
        } else {
            (i, j)
        };
        if !seen.insert(key) {
            return Err(Error::Parse {
                line: *line_no,
                message: format!("duplicate entry for ({}, {})", i + 1, j + 1),
            });
        }
        triples.push((i, j, value));
        if symmetric && i != j {
            triples.push((j, i, value));
        }
        count += 1;
    }
    if count < nnz {
        return Err(Error::Parse {
            line: last_line,
            message: format!("expected {nnz} entries, found {count}"),
        });
    }

    triples.sort_by_key(|t| (t.0, t.1));
    let mut row_offsets = Vec::with_capacity(n + 1);
    let mut col_indices = Vec::with_capacity(triples.len());
    let mut values = Vec::with_capacity(triples.len());
    row_offsets.push(0);
    let mut row = 0;
    for (i, j, v) in triples {
        while row < i {
            row_offsets.push(values.len());
            row += 1;
        }
        col_indices.push(j);
        values.push(v);
    }
    while row < n {
        row_offsets.push(values.len());
        row += 1;
    }
    SparseMatrixCsr::new(n, row_offsets, col_indices, values)
}

fn read_array(n: usize, symmetric: bool, entries: &[(usize, String)]) -> Result<DenseMatrix> {
    let expected = if symmetric { n * (n + 1) / 2 } else { n * n };
    let mut values = Vec::with_capacity(expected);
    let mut last_line = 0;
    for (line_no, text) in entries {
        last_line = *line_no;
        for token in text.split_whitespace() {
            if values.len() == expected {
                return Err(Error::Parse {
                    line: *line_no,
                    message: format!("more than the expected {expected} values"),
                });
            }
            values.push(parse_value(token, *line_no)?);
        }
    }
    if values.len() < expected {
        return Err(Error::Parse {
            line: last_line,
            message: format!("expected {expected} values, found {}", values.len()),
        });
    }

    // array data is column-major; symmetric files store the lower triangle
    let mut dense = vec![0.0; n * n];
    let mut next = values.into_iter();
    if symmetric {
        for j in 0..n {
            for i in j..n {
                let v = next.next().expect("length checked above");
                dense[i * n + j] = v;
                dense[j * n + i] = v;
            }
        }
    } else {
        for j in 0..n {
            for i in 0..n {
                dense[i * n + j] = next.next().expect("length checked above");
            }
        }
    }
    DenseMatrix::new(n, dense)
}

/// Writes coordinate/symmetric format storing only the lower triangle in
/// row-major order with 17 significant digits. The operator must be
/// symmetric within the measurement tolerance.
pub fn write_matrix_market(matrix: &Operator, path: &Path) -> Result<()> {
    if !matrix.is_symmetric() {
        return Err(Error::InvalidArgument(
            "matrix market writer only emits symmetric matrices".into(),
        ));
    }
    let n = matrix.n();
    let mut entries: Vec<(usize, usize, f64)> = Vec::new();
    match matrix {
        Operator::Dense(a) => {
            for i in 0..n {
                for j in 0..=i {
                    let v = a.get(i, j);
                    if v != 0.0 {
                        entries.push((i, j, v));
                    }
                }
            }
        }
        Operator::Sparse(a) => {
            for i in 0..n {
                for k in a.row_offsets()[i]..a.row_offsets()[i + 1] {
                    let j = a.col_indices()[k];
                    if j <= i && a.values()[k] != 0.0 {
                        entries.push((i, j, a.values()[k]));
                    }
                }
            }
        }
    }

    let file = File::create(path)?;
    let mut out = BufWriter::new(file);
    writeln!(out, "%%MatrixMarket matrix coordinate real symmetric")?;
    writeln!(out, "{} {} {}", n, n, entries.len())?;
    for (i, j, v) in entries {
        writeln!(out, "{} {} {}", i + 1, j + 1, fmt_f64(v))?;
    }
    out.flush()?;
    Ok(())
}
