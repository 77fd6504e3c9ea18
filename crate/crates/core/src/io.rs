//! Matrix Market and CSV readers and writers.
//!
//! CSV matrices are plain numeric rows. An update matrix may carry its signs
//! on a leading comment line such as `# signs: +,-`. Floats are written in
//! shortest round-trip form.

use std::io::{BufRead, BufReader, Read, Write};

use nalgebra::DMatrix;

use crate::decomp::{parse_signs, Sign};
use crate::dense::SymmetricDense;
use crate::error::{Error, Result};

/// Reads a real symmetric (or general) matrix in Matrix Market format.
///
/// Both `array` and `coordinate` layouts are accepted. General matrices are
/// replaced by their symmetric part.
pub fn read_matrix_market<R: Read>(r: R) -> Result<SymmetricDense> {
    let mut lines = BufReader::new(r).lines().enumerate();
    let (_, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "empty file".into(),
    })?;
    let header = header?.to_ascii_lowercase();
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() < 5 || fields[0] != "%%matrixmarket" || fields[1] != "matrix" {
        return Err(Error::Parse {
            line: 1,
            msg: "missing %%MatrixMarket matrix header".into(),
        });
    }
    let coordinate = match fields[2] {
        "array" => false,
        "coordinate" => true,
        f => {
            return Err(Error::Parse {
                line: 1,
                msg: format!("unsupported format `{f}`"),
            })
        }
    };
    if fields[3] != "real" && fields[3] != "double" && fields[3] != "integer" {
        return Err(Error::Parse {
            line: 1,
            msg: format!("unsupported field `{}`", fields[3]),
        });
    }
    let symmetric = match fields[4] {
        "symmetric" => true,
        "general" => false,
        s => {
            return Err(Error::Parse {
                line: 1,
                msg: format!("unsupported symmetry `{s}`"),
            })
        }
    };

    let mut tokens: Vec<(usize, String)> = Vec::new();
    for (i, line) in lines {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('%') {
            continue;
        }
        tokens.extend(t.split_whitespace().map(|s| (i + 1, s.to_string())));
    }
    let mut it = tokens.into_iter();
    let mut next_num = |what: &str| -> Result<(usize, f64)> {
        let (line, tok) = it.next().ok_or(Error::Parse {
            line: 0,
            msg: format!("missing {what}"),
        })?;
        tok.parse::<f64>()
            .map(|v| (line, v))
            .map_err(|_| Error::Parse {
                line,
                msg: format!("bad {what} `{tok}`"),
            })
    };
    let (line, rows) = next_num("row count")?;
    let (_, cols) = next_num("column count")?;
    if rows != cols || rows < 1.0 || rows.fract() != 0.0 {
        return Err(Error::Parse {
            line,
            msg: format!("matrix must be square, got {rows}x{cols}"),
        });
    }
    let n = rows as usize;
    let mut m = DMatrix::<f64>::zeros(n, n);
    if coordinate {
        let (_, nnz) = next_num("entry count")?;
        for _ in 0..nnz as usize {
            let (line, i) = next_num("row index")?;
            let (_, j) = next_num("column index")?;
            let (_, v) = next_num("value")?;
            if i < 1.0 || j < 1.0 || i > n as f64 || j > n as f64 {
                return Err(Error::Parse {
                    line,
                    msg: format!("index ({i}, {j}) out of range"),
                });
            }
            let (i, j) = (i as usize - 1, j as usize - 1);
            m[(i, j)] = v;
            if symmetric {
                m[(j, i)] = v;
            }
        }
    } else {
        for j in 0..n {
            let start = if symmetric { j } else { 0 };
            for i in start..n {
                let (_, v) = next_num("value")?;
                m[(i, j)] = v;
                if symmetric {
                    m[(j, i)] = v;
                }
            }
        }
    }
    SymmetricDense::new(m)
}

/// Writes the lower triangle in Matrix Market `array real symmetric` form.
pub fn write_matrix_market<W: Write>(mut w: W, a: &SymmetricDense) -> Result<()> {
    let n = a.dim();
    writeln!(w, "%%MatrixMarket matrix array real symmetric")?;
    writeln!(w, "{n} {n}")?;
    for j in 0..n {
        for i in j..n {
            writeln!(w, "{}", a.get(i, j))?;
        }
    }
    Ok(())
}

/// Reads a numeric CSV matrix and the optional `# signs:` comment.
pub fn read_csv_matrix<R: Read>(r: R) -> Result<(DMatrix<f64>, Option<Vec<Sign>>)> {
    let mut text = String::new();
    BufReader::new(r).read_to_string(&mut text)?;
    let mut signs = None;
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if let Some(rest) = t.strip_prefix('#') {
            if let Some(list) = rest.trim().strip_prefix("signs:") {
                signs = Some(parse_signs(list).map_err(|e| Error::Parse {
                    line: i + 1,
                    msg: e.to_string(),
                })?);
            }
        }
    }
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line() as usize),
            msg: e.to_string(),
        })?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        if rec.iter().all(str::is_empty) {
            continue;
        }
        let row = rec
            .iter()
            .map(|f| {
                f.parse::<f64>().map_err(|_| Error::Parse {
                    line,
                    msg: format!("bad number `{f}`"),
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(Error::Parse {
                    line,
                    msg: format!("row has {} fields, expected {}", row.len(), first.len()),
                });
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Parse {
            line: 0,
            msg: "no numeric rows".into(),
        });
    }
    let (nr, nc) = (rows.len(), rows[0].len());
    let flat: Vec<f64> = rows.into_iter().flatten().collect();
    Ok((DMatrix::from_row_slice(nr, nc, &flat), signs))
}

pub fn write_csv_matrix<W: Write>(w: W, m: &DMatrix<f64>, signs: Option<&[Sign]>) -> Result<()> {
    let mut w = w;
    if let Some(s) = signs {
        let list: Vec<String> = s.iter().map(ToString::to_string).collect();
        writeln!(w, "# signs: {}", list.join(","))?;
    }
    let mut wtr = csv::Writer::from_writer(w);
    for i in 0..m.nrows() {
        wtr.write_record(m.row(i).iter().map(|v| v.to_string()))
            .map_err(|e| Error::Io(e.to_string()))?;
    }
    wtr.flush()?;
    Ok(())
}

/// Reads a vector stored as one value per line or as a single row.
pub fn read_csv_vector<R: Read>(r: R) -> Result<Vec<f64>> {
    let (m, _) = read_csv_matrix(r)?;
    if m.nrows() != 1 && m.ncols() != 1 {
        return Err(Error::Parse {
            line: 0,
            msg: format!("expected a vector, got a {}x{} table", m.nrows(), m.ncols()),
        });
    }
    Ok(m.iter().copied().collect())
}

/// Writes one value per line.
pub fn write_csv_vector<W: Write>(mut w: W, v: &[f64]) -> Result<()> {
    for x in v {
        writeln!(w, "{x}")?;
    }
    Ok(())
}
