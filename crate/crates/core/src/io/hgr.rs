//! hMetis hypergraph files.
//!
//! Line 1 holds `num_hyperedges num_vertices [fmt]`; with `fmt = 1` every
//! following line is an integer weight and then the 1-based pins of one
//! hyperedge, with `fmt = 0` (or no fmt) only the pins. Lines starting with
//! `%` are comments.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::hypergraph::{Hyperedge, Hypergraph};

pub fn read_hgr(path: impl AsRef<Path>) -> Result<Hypergraph> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    parse_hgr(&text, &path.display().to_string())
}

/// Parses the contents of an `.hgr` file; `name` is used in error messages.
pub fn parse_hgr(text: &str, name: &str) -> Result<Hypergraph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('%'));

    let (hline, header) = lines.next().ok_or_else(|| Error::parse(name, 1, "missing header"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() < 2 || fields.len() > 3 {
        return Err(Error::parse(name, hline, "header must be 'hyperedges vertices [fmt]'"));
    }
    let num = |s: &str, what: &str| {
        s.parse::<usize>()
            .map_err(|_| Error::parse(name, hline, format!("bad {what} '{s}'")))
    };
    let ne = num(fields[0], "hyperedge count")?;
    let nv = num(fields[1], "vertex count")?;
    let weighted = match fields.get(2).copied() {
        None | Some("0") => false,
        Some("1") => true,
        Some(f @ ("10" | "11")) => {
            return Err(Error::parse(
                name,
                hline,
                format!("fmt {f} (vertex weights) is not supported"),
            ));
        }
        Some(f) => return Err(Error::parse(name, hline, format!("unknown fmt '{f}'"))),
    };

    let mut hyperedges = Vec::with_capacity(ne);
    let mut seen = vec![usize::MAX; nv];
    for (lineno, line) in lines.by_ref().take(ne) {
        let mut tokens = line.split_whitespace();
        let weight = if weighted {
            let t = tokens.next().expect("non-empty line");
            let w: f64 = t
                .parse()
                .map_err(|_| Error::parse(name, lineno, format!("bad weight '{t}'")))?;
            if !w.is_finite() || w < 0.0 {
                return Err(Error::parse(name, lineno, format!("invalid weight '{t}'")));
            }
            w
        } else {
            1.0
        };
        let e = hyperedges.len();
        let mut pins = Vec::new();
        for t in tokens {
            let v: usize = t
                .parse()
                .map_err(|_| Error::parse(name, lineno, format!("bad vertex id '{t}'")))?;
            if v == 0 || v > nv {
                return Err(Error::parse(name, lineno, format!("vertex id {v} outside 1..={nv}")));
            }
            if seen[v - 1] == e {
                return Err(Error::parse(name, lineno, format!("vertex {v} repeated")));
            }
            seen[v - 1] = e;
            pins.push(v - 1);
        }
        if pins.is_empty() {
            return Err(Error::parse(name, lineno, "hyperedge without pins"));
        }
        hyperedges.push(Hyperedge { pins, weight });
    }
    if hyperedges.len() < ne {
        return Err(Error::parse(
            name,
            text.lines().count(),
            format!("expected {ne} hyperedges, found {}", hyperedges.len()),
        ));
    }
    if let Some((lineno, _)) = lines.next() {
        return Err(Error::parse(name, lineno, format!("more than {ne} hyperedge lines")));
    }
    Hypergraph::new(nv, hyperedges)
}

/// Writes `h` in canonical `fmt = 1` form. Weights must be nonnegative
/// integers.
pub fn write_hgr<W: Write>(h: &Hypergraph, out: &mut W) -> Result<()> {
    let weights = h
        .weights()
        .into_iter()
        .map(|w| {
            if w >= 0.0 && w.fract() == 0.0 && w <= u64::MAX as f64 {
                Ok(w as u64)
            } else {
                Err(Error::NonIntegralWeight(w))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    write_hgr_with_weights(h, &weights, out)
}

/// Writes the structure of `h` with the given integer weights.
pub fn write_hgr_with_weights<W: Write>(h: &Hypergraph, weights: &[u64], out: &mut W) -> Result<()> {
    if weights.len() != h.num_hyperedges() {
        return Err(Error::LengthMismatch {
            expected: h.num_hyperedges(),
            got: weights.len(),
        });
    }
    writeln!(out, "{} {} 1", h.num_hyperedges(), h.num_vertices())?;
    for (e, w) in h.hyperedges().iter().zip(weights) {
        write!(out, "{w}")?;
        for &v in &e.pins {
            write!(out, " {}", v + 1)?;
        }
        writeln!(out)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weighted_example() {
        let h = parse_hgr("2 3 1\n5 1 2\n1 2 3\n", "t").unwrap();
        assert_eq!(h.num_vertices(), 3);
        assert_eq!(h.hyperedges()[0].pins, vec![0, 1]);
        assert_eq!(h.weights(), vec![5.0, 1.0]);
        assert_eq!(h.hyperedges()[1].pins, vec![1, 2]);
    }

    #[test]
    fn unweighted() {
        for text in ["2 3\n1 2\n2 3\n", "2 3 0\n1 2\n2 3\n"] {
            let h = parse_hgr(text, "t").unwrap();
            assert_eq!(h.weights(), vec![1.0, 1.0]);
        }
    }

    #[test]
    fn comments_skipped() {
        let h = parse_hgr("% a comment\n1 2 1\n% another\n4 2 1\n", "t").unwrap();
        assert_eq!(h.hyperedges()[0].pins, vec![1, 0]);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse_hgr("2 3 1\n5 1 2\n1 2 4\n", "f.hgr").unwrap_err();
        assert!(err.to_string().starts_with("f.hgr:3:"), "{err}");
        assert!(parse_hgr("3 3 1\n5 1 2\n1 2 3\n", "t").is_err());
        assert!(parse_hgr("1 3 1\n5 1 2\n1 2 3\n", "t").is_err());
        assert!(parse_hgr("1 3 1\n5 1 1\n", "t").is_err());
        assert!(parse_hgr("1 3 1\n5\n", "t").is_err());
        assert!(parse_hgr("1 3 11\n5 1\n", "t").is_err());
        assert!(parse_hgr("", "t").is_err());
    }

    #[test]
    fn round_trip_is_byte_identical() {
        let text = "2 3 1\n5 1 2\n1 2 3\n";
        let h = parse_hgr(text, "t").unwrap();
        let mut out = Vec::new();
        write_hgr(&h, &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), text);
    }

    #[test]
    fn writer_rejects_fractional() {
        let h = Hypergraph::from_pins(2, [(vec![0, 1], 0.5)]).unwrap();
        assert!(matches!(write_hgr(&h, &mut Vec::new()), Err(Error::NonIntegralWeight(_))));
    }
}
