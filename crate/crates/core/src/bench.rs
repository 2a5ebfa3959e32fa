//! Deterministic CSV output for distance fields and experiment batches.
//!
//! Every file starts with `# key=value` lines recording the configuration,
//! followed by a header row and data rows. Floats use Rust's shortest
//! round-trip exponent form, so identical results give identical bytes.
//! Wall-clock columns are only written on request.

use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::algdist::DistanceField;
use crate::error::{Error, Result};
use crate::hpart::{hpart_experiment, HpartExperimentConfig};
use crate::io::hgr::read_hgr;
use crate::io::mtx::read_matrix_market;
use crate::matching::{matching_experiment, MatchingExperimentConfig, PhaseTimings};

/// Ordered `key=value` pairs written as comment lines.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConfigHeader(pub Vec<(String, String)>);

impl ConfigHeader {
    pub fn push(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.0.push((key.to_owned(), value.to_string()));
        self
    }

    pub fn write<W: Write>(&self, out: &mut W) -> Result<()> {
        for (k, v) in &self.0 {
            writeln!(out, "# {k}={v}")?;
        }
        Ok(())
    }
}

/// `i,j,rho` rows with 1-based vertex ids.
pub fn write_distance_csv<W: Write>(out: &mut W, header: &ConfigHeader, field: &DistanceField) -> Result<()> {
    header.write(out)?;
    writeln!(out, "i,j,rho")?;
    for (&(i, j), v) in field.pairs.iter().zip(&field.values) {
        writeln!(out, "{},{},{:e}", i + 1, j + 1, v)?;
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RunKind {
    Matching,
    Hpart,
}

impl RunKind {
    fn as_str(self) -> &'static str {
        match self {
            Self::Matching => "match",
            Self::Hpart => "hpart",
        }
    }
}

/// One experiment over one input.
#[derive(Clone, Debug, PartialEq)]
pub struct RunRecord {
    pub input: String,
    pub kind: RunKind,
    pub vertices: usize,
    /// Edges, or hyperedges for hypergraph inputs.
    pub edges: usize,
    pub seeds: Vec<u64>,
    pub ratios: Vec<f64>,
    pub mean_ratio: f64,
    /// Mean cardinality ratio (matching only).
    pub mean_cardinality_ratio: Option<f64>,
    /// Cut balance violations (partitioning only).
    pub balance_violations: Option<usize>,
    pub timings: PhaseTimings,
}

impl RunRecord {
    pub fn from_matching(input: &str, g: &crate::graph::Graph, r: &crate::matching::MatchingReport) -> Self {
        Self {
            input: input.to_owned(),
            kind: RunKind::Matching,
            vertices: g.n(),
            edges: g.num_edges(),
            seeds: r.trials.iter().map(|t| t.seed).collect(),
            ratios: r.trials.iter().map(|t| t.weight_ratio).collect(),
            mean_ratio: r.mean_weight_ratio,
            mean_cardinality_ratio: Some(r.mean_cardinality_ratio),
            balance_violations: None,
            timings: r.timings.clone(),
        }
    }

    pub fn from_hpart(input: &str, h: &crate::hypergraph::Hypergraph, r: &crate::hpart::HpartReport) -> Self {
        Self {
            input: input.to_owned(),
            kind: RunKind::Hpart,
            vertices: h.num_vertices(),
            edges: h.num_hyperedges(),
            seeds: r.trials.iter().map(|t| t.seed).collect(),
            ratios: r.trials.iter().map(|t| t.ratio).collect(),
            mean_ratio: r.mean_ratio,
            mean_cardinality_ratio: None,
            balance_violations: Some(r.balance_violations),
            timings: r.timings.clone(),
        }
    }
}

fn join<T, F: Fn(&T) -> String>(items: &[T], f: F) -> String {
    items.iter().map(f).collect::<Vec<_>>().join(";")
}

/// Header row plus one row per record. Per-seed values are `;`-separated.
pub fn write_run_records<W: Write>(out: &mut W, header: &ConfigHeader, records: &[RunRecord], timings: bool) -> Result<()> {
    header.write(out)?;
    write!(
        out,
        "input,kind,vertices,edges,repetitions,seeds,ratios,mean_ratio,mean_cardinality_ratio,balance_violations"
    )?;
    if timings {
        write!(out, ",relax_s,preprocess_s,solve_s")?;
    }
    writeln!(out)?;
    for r in records {
        write!(
            out,
            "{},{},{},{},{},{},{},{:e},{},{}",
            r.input,
            r.kind.as_str(),
            r.vertices,
            r.edges,
            r.seeds.len(),
            join(&r.seeds, |s| s.to_string()),
            join(&r.ratios, |v| format!("{v:e}")),
            r.mean_ratio,
            r.mean_cardinality_ratio.map_or(String::new(), |v| format!("{v:e}")),
            r.balance_violations.map_or(String::new(), |v| v.to_string()),
        )?;
        if timings {
            let t = &r.timings;
            write!(
                out,
                ",{:.6},{:.6},{:.6}",
                t.relax.as_secs_f64(),
                t.preprocess.as_secs_f64(),
                t.solve.as_secs_f64()
            )?;
        }
        writeln!(out)?;
    }
    Ok(())
}

/// Inputs recognized by [`run_batch`]: `.mtx` and `.hgr` files, sorted by
/// file name.
pub fn batch_inputs(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && matches!(p.extension().and_then(|e| e.to_str()), Some("mtx" | "hgr")))
        .collect();
    files.sort();
    Ok(files)
}

#[derive(Clone, Debug)]
pub struct BatchConfig {
    pub matching: MatchingExperimentConfig,
    pub hpart: HpartExperimentConfig,
    /// Restrict graph inputs to their largest connected component.
    pub largest_component: bool,
}

/// Runs the matching experiment on every `.mtx` file and the partitioning
/// experiment on every `.hgr` file, in parallel across inputs.
pub fn run_batch(files: &[PathBuf], cfg: &BatchConfig) -> Result<Vec<RunRecord>> {
    files
        .par_iter()
        .map(|path| {
            let name = path
                .file_name()
                .map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned());
            match path.extension().and_then(|e| e.to_str()) {
                Some("mtx") => {
                    let mut g = read_matrix_market(path)?.graph;
                    if cfg.largest_component && !g.is_connected() {
                        g = g.largest_component().0;
                    }
                    let r = matching_experiment(&g, &cfg.matching)?;
                    Ok(RunRecord::from_matching(&name, &g, &r))
                }
                Some("hgr") => {
                    let h = read_hgr(path)?;
                    let r = hpart_experiment(&h, &cfg.hpart)?;
                    Ok(RunRecord::from_hpart(&name, &h, &r))
                }
                _ => Err(Error::parse(&name, 0, "unsupported input extension")),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algdist::{DistanceMeta, PNorm};
    use std::time::Duration;

    #[test]
    fn distance_csv_format() {
        let field = DistanceField {
            pairs: vec![(0, 1)],
            values: vec![0.25],
            meta: DistanceMeta {
                iterations: 1,
                runs: 1,
                p: PNorm::Infinity,
                omega: 0.5,
                seed: 0,
            },
        };
        let mut h = ConfigHeader::default();
        h.push("omega", 0.5).push("p", PNorm::Infinity);
        let mut out = Vec::new();
        write_distance_csv(&mut out, &h, &field).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "# omega=0.5\n# p=inf\ni,j,rho\n1,2,2.5e-1\n");
    }

    #[test]
    fn record_rows() {
        let rec = RunRecord {
            input: "a.mtx".into(),
            kind: RunKind::Matching,
            vertices: 3,
            edges: 2,
            seeds: vec![0, 1],
            ratios: vec![1.0, 0.5],
            mean_ratio: 0.75,
            mean_cardinality_ratio: Some(1.0),
            balance_violations: None,
            timings: PhaseTimings {
                relax: Duration::from_millis(5),
                ..Default::default()
            },
        };
        let mut out = Vec::new();
        write_run_records(&mut out, &ConfigHeader::default(), std::slice::from_ref(&rec), false).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text.lines().nth(1).unwrap(), "a.mtx,match,3,2,2,0;1,1e0;5e-1,7.5e-1,1e0,");
        let mut out = Vec::new();
        write_run_records(&mut out, &ConfigHeader::default(), &[rec], true).unwrap();
        assert!(String::from_utf8(out)
            .unwrap()
            .lines()
            .nth(1)
            .unwrap()
            .ends_with(",0.005000,0.000000,0.000000"));
    }
}
