//! Matrix Market coordinate files as weighted graphs.
//!
//! Off-diagonal entries become edges with weight `|a_ij|`. General
//! matrices are symmetrized as `(|A| + |A|^T) / 2`; pattern matrices give
//! weight 1 on the symmetrized pattern. Diagonal entries are dropped.

use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Field {
    Real,
    Pattern,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Symmetry {
    General,
    Symmetric,
}

/// What the reader changed on the way in.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MtxStats {
    pub entries: usize,
    pub diagonal_dropped: usize,
    pub negative_made_positive: usize,
    pub zero_dropped: usize,
    pub symmetrized: bool,
}

#[derive(Clone, Debug)]
pub struct MtxGraph {
    pub graph: Graph,
    pub stats: MtxStats,
}

pub fn read_matrix_market(path: impl AsRef<Path>) -> Result<MtxGraph> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    parse_matrix_market(&text, &path.display().to_string())
}

/// Parses the contents of a `.mtx` file; `name` is used in error messages.
pub fn parse_matrix_market(text: &str, name: &str) -> Result<MtxGraph> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, banner) = lines.next().ok_or_else(|| Error::parse(name, 1, "empty file"))?;
    let b: Vec<String> = banner.split_whitespace().map(str::to_ascii_lowercase).collect();
    if b.len() != 5 || b[0] != "%%matrixmarket" || b[1] != "matrix" {
        return Err(Error::parse(
            name,
            1,
            "expected '%%MatrixMarket matrix coordinate <field> <symmetry>'",
        ));
    }
    if b[2] != "coordinate" {
        return Err(Error::parse(name, 1, format!("unsupported format '{}'", b[2])));
    }
    let field = match b[3].as_str() {
        "real" | "integer" | "double" => Field::Real,
        "pattern" => Field::Pattern,
        other => return Err(Error::parse(name, 1, format!("unsupported field '{other}'"))),
    };
    let symmetry = match b[4].as_str() {
        "general" => Symmetry::General,
        "symmetric" | "skew-symmetric" => Symmetry::Symmetric,
        other => return Err(Error::parse(name, 1, format!("unsupported symmetry '{other}'"))),
    };

    let mut lines = lines.filter(|(_, l)| {
        let t = l.trim();
        !t.is_empty() && !t.starts_with('%')
    });
    let (sline, size) = lines.next().ok_or_else(|| Error::parse(name, 2, "missing size line"))?;
    let dims: Vec<usize> = size
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::parse(name, sline, format!("bad size '{t}'"))))
        .collect::<Result<_>>()?;
    if dims.len() != 3 {
        return Err(Error::parse(name, sline, "size line must be 'rows cols entries'"));
    }
    let (rows, cols, nnz) = (dims[0], dims[1], dims[2]);
    if rows != cols {
        return Err(Error::parse(name, sline, format!("matrix is {rows}x{cols}, not square")));
    }
    let n = rows;

    let mut stats = MtxStats {
        symmetrized: symmetry == Symmetry::General,
        ..Default::default()
    };
    let mut edges = Vec::with_capacity(nnz);
    let mut pattern = BTreeSet::new();
    let mut last_line = sline;
    for (lineno, line) in lines.by_ref().take(nnz) {
        last_line = lineno;
        let t: Vec<&str> = line.split_whitespace().collect();
        let want = if field == Field::Pattern { 2 } else { 3 };
        if t.len() != want {
            return Err(Error::parse(
                name,
                lineno,
                format!("expected {want} fields, found {}", t.len()),
            ));
        }
        let idx = |s: &str| -> Result<usize> {
            let v: usize = s
                .parse()
                .map_err(|_| Error::parse(name, lineno, format!("bad index '{s}'")))?;
            if v == 0 || v > n {
                return Err(Error::parse(name, lineno, format!("index {v} outside 1..={n}")));
            }
            Ok(v - 1)
        };
        let (i, j) = (idx(t[0])?, idx(t[1])?);
        stats.entries += 1;
        if i == j {
            stats.diagonal_dropped += 1;
            continue;
        }
        match field {
            Field::Pattern => {
                pattern.insert((i.min(j), i.max(j)));
            }
            Field::Real => {
                let v: f64 = t[2]
                    .parse()
                    .map_err(|_| Error::parse(name, lineno, format!("bad value '{}'", t[2])))?;
                if !v.is_finite() {
                    return Err(Error::parse(name, lineno, format!("non-finite value '{}'", t[2])));
                }
                if v < 0.0 {
                    stats.negative_made_positive += 1;
                } else if v == 0.0 {
                    stats.zero_dropped += 1;
                }
                let w = if symmetry == Symmetry::General {
                    v.abs() / 2.0
                } else {
                    v.abs()
                };
                edges.push((i, j, w));
            }
        }
    }
    if stats.entries < nnz {
        return Err(Error::parse(
            name,
            last_line,
            format!("expected {nnz} entries, found {}", stats.entries),
        ));
    }
    if let Some((lineno, _)) = lines.next() {
        return Err(Error::parse(name, lineno, format!("more than {nnz} entries")));
    }
    if stats.diagonal_dropped > 0 {
        log::warn!("{name}: dropped {} diagonal entries", stats.diagonal_dropped);
    }
    if stats.negative_made_positive > 0 {
        log::info!(
            "{name}: took absolute values of {} negative entries",
            stats.negative_made_positive
        );
    }

    let graph = if field == Field::Pattern {
        Graph::from_edges(n, pattern.into_iter().map(|(i, j)| (i, j, 1.0)))?
    } else {
        Graph::from_edges(n, edges)?
    };
    Ok(MtxGraph { graph, stats })
}

/// Writes `g` as a symmetric real coordinate matrix (lower triangle).
pub fn write_matrix_market<W: Write>(g: &Graph, out: &mut W) -> Result<()> {
    writeln!(out, "%%MatrixMarket matrix coordinate real symmetric")?;
    writeln!(out, "{} {} {}", g.n(), g.n(), g.num_edges())?;
    for e in g.edges() {
        writeln!(out, "{} {} {:e}", e.v + 1, e.u + 1, e.w)?;
    }
    Ok(())
}
