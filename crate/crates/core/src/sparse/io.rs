//! MatrixMarket coordinate format.

use std::io::{BufRead, Write};

use super::CsrMatrix;
use crate::error::{AmgError, Result};

const HEADER: &str = "%%MatrixMarket matrix coordinate real general";

/// Writes `a` with 1-based indices. Values use the shortest representation
/// that round-trips exactly.
pub fn write_matrix_market<W: Write>(a: &CsrMatrix, mut w: W) -> Result<()> {
    writeln!(w, "{HEADER}")?;
    writeln!(w, "{} {} {}", a.n_rows(), a.n_cols(), a.nnz())?;
    for i in 0..a.n_rows() {
        let (cols, vals) = a.row(i);
        for (&c, &v) in cols.iter().zip(vals) {
            writeln!(w, "{} {} {:e}", i + 1, c + 1, v)?;
        }
    }
    Ok(())
}

/// Reads a coordinate-format real matrix. `general` and `symmetric`
/// storage are accepted; symmetric files are expanded.
pub fn read_matrix_market<R: BufRead>(r: R) -> Result<CsrMatrix> {
    let mut lines = r.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or(AmgError::MatrixMarket { line: 1, msg: "empty input".into() })?;
    let header = header?;
    let tokens: Vec<String> = header.split_whitespace().map(str::to_lowercase).collect();
    if tokens.len() < 5 || tokens[0] != "%%matrixmarket" || tokens[1] != "matrix" || tokens[2] != "coordinate" {
        return Err(AmgError::MatrixMarket { line: 1, msg: format!("unsupported header `{header}`") });
    }
    if tokens[3] != "real" && tokens[3] != "integer" {
        return Err(AmgError::MatrixMarket { line: 1, msg: format!("unsupported field `{}`", tokens[3]) });
    }
    let symmetric = match tokens[4].as_str() {
        "general" => false,
        "symmetric" => true,
        other => return Err(AmgError::MatrixMarket { line: 1, msg: format!("unsupported symmetry `{other}`") }),
    };

    let mut size: Option<(usize, usize, usize)> = None;
    let mut triplets = Vec::new();
    for (idx, line) in lines {
        let line = line?;
        let lineno = idx + 1;
        let t = line.trim();
        if t.is_empty() || t.starts_with('%') {
            continue;
        }
        let parts: Vec<&str> = t.split_whitespace().collect();
        let bad = |msg: &str| AmgError::MatrixMarket { line: lineno, msg: msg.to_string() };
        match size {
            None => {
                if parts.len() != 3 {
                    return Err(bad("expected `rows cols nnz`"));
                }
                let p = |s: &str| s.parse::<usize>().map_err(|_| bad("bad size"));
                let s = (p(parts[0])?, p(parts[1])?, p(parts[2])?);
                triplets.reserve(if symmetric { 2 * s.2 } else { s.2 });
                size = Some(s);
            }
            Some((m, n, _)) => {
                if parts.len() != 3 {
                    return Err(bad("expected `row col value`"));
                }
                let i: usize = parts[0].parse().map_err(|_| bad("bad row index"))?;
                let j: usize = parts[1].parse().map_err(|_| bad("bad column index"))?;
                let v: f64 = parts[2].parse().map_err(|_| bad("bad value"))?;
                if i == 0 || j == 0 || i > m || j > n {
                    return Err(bad("index out of range"));
                }
                triplets.push((i - 1, j - 1, v));
                if symmetric && i != j {
                    triplets.push((j - 1, i - 1, v));
                }
            }
        }
    }
    let (m, n, nnz) = size.ok_or(AmgError::MatrixMarket { line: 0, msg: "missing size line".into() })?;
    let expected = if symmetric { triplets.len() } else { nnz };
    if triplets.len() != expected {
        return Err(AmgError::MatrixMarket {
            line: 0,
            msg: format!("expected {nnz} entries, found {}", triplets.len()),
        });
    }
    CsrMatrix::from_triplets(m, n, &triplets)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_exact() {
        let a = CsrMatrix::from_triplets(
            3,
            4,
            &[(0, 0, 1.0 / 3.0), (0, 3, -2.5e-17), (2, 1, 0.0), (1, 2, 1e300)],
        )
        .unwrap();
        let mut buf = Vec::new();
        write_matrix_market(&a, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("%%MatrixMarket matrix coordinate real general\n3 4 4\n"));
        let b = read_matrix_market(&buf[..]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn symmetric_files_expand() {
        let src = "%%MatrixMarket matrix coordinate real symmetric\n% comment\n2 2 2\n1 1 2\n2 1 -1\n";
        let a = read_matrix_market(src.as_bytes()).unwrap();
        assert_eq!(a.to_dense(), vec![vec![2.0, -1.0], vec![-1.0, 0.0]]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(read_matrix_market("%%MatrixMarket matrix array real general\n".as_bytes()).is_err());
        let src = "%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1.0\n";
        assert!(read_matrix_market(src.as_bytes()).is_err());
        let src = "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1.0\n";
        assert!(read_matrix_market(src.as_bytes()).is_err());
    }
}
