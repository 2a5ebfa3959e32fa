//! Hypergraph bisection with algebraic-distance hyperedge weights.
//!
//! Distances come from relaxing the bipartite model of the hypergraph; a
//! hyperedge's score sums, over runs, the spread of the iterates over its
//! pins. The partitioner then sees `1 / s_h` as hyperedge weights, and the
//! resulting cut is always priced with the original weights.
//!
//! Two partitioners are available: an external hMetis-compatible binary and
//! an internal spectral bisector that needs nothing outside this crate.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::thread;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use wait_timeout::ChildExt;

use crate::algdist::{DistanceMeta, PNorm};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::io::hgr::write_hgr_with_weights;
use crate::matching::{ratio, PhaseTimings, DEFAULT_EPS, DEFAULT_REPETITIONS};
use crate::relax::{deflate_constant, initial_vectors, jor_sweep_into, relax, IterateSet, RelaxationConfig, DENSE_LIMIT};
use crate::spectral::pencil_eigen;

pub const DEFAULT_IMBALANCE: f64 = 0.03;
pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(300);
/// Integer hyperedge weights handed to external tools lie in `[1, WEIGHT_SCALE]`.
pub const WEIGHT_SCALE: f64 = 1e6;
/// Placeholders: `{hgr}`, `{nparts}`, `{ubfactor}`, `{seed}`.
pub const DEFAULT_ARGS_TEMPLATE: &str = "{hgr} {nparts} {ubfactor}";
/// Sweeps of the deflated JOR power iteration used by the bisector above
/// the dense size limit.
const SURROGATE_SWEEPS: usize = 400;

/// Per-hyperedge spreads `s_h`.
#[derive(Clone, Debug, PartialEq)]
pub struct HyperedgeDistances {
    pub s: Vec<f64>,
    pub meta: DistanceMeta,
}

impl HyperedgeDistances {
    pub fn inverted(&self, eps: f64) -> Vec<f64> {
        invert_weights(&self.s, eps)
    }
}

/// `1 / max(s, eps)` elementwise.
pub fn invert_weights(s: &[f64], eps: f64) -> Vec<f64> {
    s.iter().map(|&v| 1.0 / v.max(eps)).collect()
}

/// `s_h = sum_r (max_{i in h} x_i - min_{i in h} x_i)`, reading only the
/// original-vertex entries of iterates over the bipartite model.
pub fn hyperedge_spread(h: &Hypergraph, iters: &IterateSet) -> Result<Vec<f64>> {
    if iters.n < h.num_vertices() {
        return Err(Error::LengthMismatch {
            expected: h.num_vertices(),
            got: iters.n,
        });
    }
    Ok(h.hyperedges()
        .iter()
        .map(|e| {
            iters
                .vectors
                .iter()
                .map(|x| {
                    let (lo, hi) = e.pins.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                        (lo.min(x[v]), hi.max(x[v]))
                    });
                    hi - lo
                })
                .sum()
        })
        .collect())
}

/// Relaxes the bipartite model of `h` and scores every hyperedge.
///
/// `cfg.omega = 1` gives the unrelaxed update, which does not converge on
/// bipartite graphs; the default 1/2 does.
pub fn hyperedge_distances(h: &Hypergraph, cfg: &RelaxationConfig) -> Result<HyperedgeDistances> {
    let model = h.bipartite_expand();
    let iters = relax(&model.graph, cfg)?;
    Ok(HyperedgeDistances {
        s: hyperedge_spread(h, &iters)?,
        meta: DistanceMeta {
            iterations: cfg.iterations,
            runs: cfg.runs,
            p: PNorm::Finite(1.0),
            omega: cfg.omega,
            seed: cfg.seed,
        },
    })
}

/// Assignment of every vertex to one of `tau` parts, numbered from 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    assignment: Vec<usize>,
    tau: usize,
}

impl Partition {
    /// Rejects out-of-range part ids and empty parts.
    pub fn new(assignment: Vec<usize>, tau: usize) -> Result<Self> {
        let mut sizes = vec![0usize; tau];
        for &p in &assignment {
            if p >= tau {
                return Err(Error::InvalidPart { part: p, tau });
            }
            sizes[p] += 1;
        }
        if let Some(p) = sizes.iter().position(|&s| s == 0) {
            return Err(Error::EmptyPart(p));
        }
        Ok(Self { assignment, tau })
    }

    /// From a possibly incomplete assignment; `None` entries are rejected.
    pub fn from_partial(assignment: &[Option<usize>], tau: usize) -> Result<Self> {
        let full = assignment
            .iter()
            .enumerate()
            .map(|(v, p)| p.ok_or(Error::Unassigned(v)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(full, tau)
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn tau(&self) -> usize {
        self.tau
    }

    pub fn part_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.tau];
        for &p in &self.assignment {
            sizes[p] += 1;
        }
        sizes
    }

    /// Every part holds at most `(1 + alpha) n / tau` vertices.
    pub fn is_balanced(&self, alpha: f64) -> bool {
        let cap = max_part_size(self.assignment.len(), self.tau, alpha);
        self.part_sizes().iter().all(|&s| s <= cap)
    }
}

/// Largest part size allowed by imbalance `alpha`.
pub fn max_part_size(n: usize, tau: usize, alpha: f64) -> usize {
    ((1.0 + alpha) * n as f64 / tau as f64 + 1e-9).floor() as usize
}

/// Sum of original weights over hyperedges whose pins fall in two or more
/// parts.
pub fn evaluate_cut(h: &Hypergraph, part: &Partition) -> Result<f64> {
    if part.assignment.len() != h.num_vertices() {
        return Err(Error::LengthMismatch {
            expected: h.num_vertices(),
            got: part.assignment.len(),
        });
    }
    let a = &part.assignment;
    Ok(h.hyperedges()
        .iter()
        .filter(|e| e.pins.iter().any(|&v| a[v] != a[e.pins[0]]))
        .map(|e| e.weight)
        .sum())
}

/// Linear map of nonnegative weights to integers in `[1, WEIGHT_SCALE]`,
/// proportional to the largest weight. Order is preserved (ties may be
/// introduced between values closer than `max / WEIGHT_SCALE`).
pub fn scale_to_integers(weights: &[f64]) -> Result<Vec<u64>> {
    if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
        return Err(Error::NonFinite("hyperedge weights"));
    }
    let max = weights.iter().cloned().fold(0.0, f64::max);
    if max == 0.0 {
        return Ok(vec![1; weights.len()]);
    }
    Ok(weights
        .iter()
        .map(|w| (w / max * WEIGHT_SCALE).round().clamp(1.0, WEIGHT_SCALE) as u64)
        .collect())
}

/// hMetis balance parameter: parts may hold `50 +- b` percent of the
/// vertices, so `b = 50 alpha`, rounded down to stay within `alpha`.
pub fn ubfactor(alpha: f64) -> u32 {
    ((50.0 * alpha + 1e-9).floor() as u32).max(1)
}

/// How to call an hMetis-compatible binary.
#[derive(Clone, Debug, PartialEq)]
pub struct ExternalPartitioner {
    pub exe: PathBuf,
    /// Whitespace-separated argument template.
    pub args_template: String,
    pub timeout: Duration,
}

impl ExternalPartitioner {
    pub fn new(exe: impl Into<PathBuf>) -> Self {
        Self {
            exe: exe.into(),
            args_template: DEFAULT_ARGS_TEMPLATE.to_owned(),
            timeout: DEFAULT_TIMEOUT,
        }
    }

    fn args(&self, hgr: &Path, nparts: usize, ub: u32, seed: u64) -> Vec<String> {
        self.args_template
            .split_whitespace()
            .map(|t| {
                t.replace("{hgr}", &hgr.display().to_string())
                    .replace("{nparts}", &nparts.to_string())
                    .replace("{ubfactor}", &ub.to_string())
                    .replace("{seed}", &seed.to_string())
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExternalOutcome {
    pub partition: Partition,
    /// Exact command line that was run.
    pub command_line: String,
    /// False when the returned partition violates the requested imbalance.
    pub balanced: bool,
    pub stdout: String,
}

fn spawn_reader<R: Read + Send + 'static>(src: Option<R>) -> thread::JoinHandle<String> {
    thread::spawn(move || {
        let mut buf = Vec::new();
        if let Some(mut s) = src {
            let _ = s.read_to_end(&mut buf);
        }
        String::from_utf8_lossy(&buf).into_owned()
    })
}

fn shell_quote(s: &str) -> String {
    if !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || "-_./=:,+".contains(c)) {
        s.to_owned()
    } else {
        format!("'{}'", s.replace('\'', r"'\''"))
    }
}

/// Writes `h` with `weights` (scaled to integers) to a fresh temporary
/// directory, runs the external partitioner with two parts and reads back
/// `<file>.part.2`. The directory is removed on success and kept on any
/// failure.
pub fn external_partition(
    h: &Hypergraph,
    weights: &[f64],
    alpha: f64,
    seed: u64,
    tool: &ExternalPartitioner,
) -> Result<ExternalOutcome> {
    const TAU: usize = 2;
    if weights.len() != h.num_hyperedges() {
        return Err(Error::LengthMismatch {
            expected: h.num_hyperedges(),
            got: weights.len(),
        });
    }
    let int_weights = scale_to_integers(weights)?;
    let dir = tempfile::Builder::new().prefix("algdist-hpart-").tempdir()?;
    let hgr = dir.path().join("input.hgr");
    {
        let mut f = std::io::BufWriter::new(fs::File::create(&hgr)?);
        write_hgr_with_weights(h, &int_weights, &mut f)?;
        f.flush()?;
    }
    let args = tool.args(&hgr, TAU, ubfactor(alpha), seed);
    let command_line = std::iter::once(tool.exe.display().to_string())
        .chain(args.iter().cloned())
        .map(|s| shell_quote(&s))
        .collect::<Vec<_>>()
        .join(" ");
    log::debug!("running {command_line}");

    let mut child = match Command::new(&tool.exe)
        .args(&args)
        .current_dir(dir.path())
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
    {
        Ok(c) => c,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
            return Err(Error::PartitionerMissing(tool.exe.clone()));
        }
        Err(e) => return Err(e.into()),
    };
    let out = spawn_reader(child.stdout.take());
    let err = spawn_reader(child.stderr.take());
    let status = child.wait_timeout(tool.timeout)?;
    let Some(status) = status else {
        let _ = child.kill();
        let _ = child.wait();
        return Err(Error::PartitionerTimeout {
            secs: tool.timeout.as_secs(),
            stdout: out.join().unwrap_or_default(),
            stderr: err.join().unwrap_or_default(),
            workdir: Some(dir.keep()),
        });
    };
    let stdout = out.join().unwrap_or_default();
    let stderr = err.join().unwrap_or_default();
    if !status.success() {
        return Err(Error::PartitionerFailed {
            status: status.to_string(),
            stdout,
            stderr,
            workdir: Some(dir.keep()),
        });
    }

    let part_path = PathBuf::from(format!("{}.part.{TAU}", hgr.display()));
    let parsed = fs::read_to_string(&part_path)
        .map_err(|e| format!("cannot read {}: {e}", part_path.display()))
        .and_then(|text| parse_part_file(&text, h.num_vertices(), TAU));
    let partition = match parsed {
        Ok(p) => p,
        Err(msg) => {
            return Err(Error::PartitionerOutput {
                msg,
                stdout,
                workdir: Some(dir.keep()),
            })
        }
    };
    let balanced = partition.is_balanced(alpha);
    if !balanced {
        log::warn!(
            "partitioner returned part sizes {:?}, above the cap {} for imbalance {alpha}",
            partition.part_sizes(),
            max_part_size(h.num_vertices(), TAU, alpha)
        );
    }
    Ok(ExternalOutcome {
        partition,
        command_line,
        balanced,
        stdout,
    })
}

/// One part id per line in vertex order.
pub fn parse_part_file(text: &str, nv: usize, tau: usize) -> std::result::Result<Partition, String> {
    let ids = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .enumerate()
        .map(|(i, l)| {
            l.parse::<usize>()
                .map_err(|_| format!("line {}: '{l}' is not a part id", i + 1))
        })
        .collect::<std::result::Result<Vec<_>, _>>()?;
    if ids.len() != nv {
        return Err(format!("expected {nv} part ids, found {}", ids.len()));
    }
    Partition::new(ids, tau).map_err(|e| e.to_string())
}

/// Spectral bisection: order vertices by the second pencil eigenvector of
/// the weighted bipartite model (or a deflated JOR power iterate above the
/// dense limit) and cut at the balance-feasible prefix of least cut weight
/// under `weights`.
pub fn fallback_bisect(h: &Hypergraph, weights: &[f64], alpha: f64) -> Result<Partition> {
    let nv = h.num_vertices();
    let cap = max_part_size(nv, 2, alpha);
    if nv < 2 || 2 * cap < nv {
        return Err(Error::BalanceInfeasible { n: nv, imbalance: alpha });
    }
    let weighted = h.with_weights(weights)?;
    let model = weighted.bipartite_expand();
    let g = &model.graph;
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let field = if g.n() <= DENSE_LIMIT {
        pencil_eigen(g)?.eigenvector(1)
    } else {
        let mut x = deflate_constant(g, &initial_vectors(g.n(), 1, 0).remove(0));
        let mut y = vec![0.0; g.n()];
        for _ in 0..SURROGATE_SWEEPS {
            jor_sweep_into(g, &x, &mut y, 0.5);
            y = deflate_constant(g, &y);
            let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm == 0.0 {
                break;
            }
            y.iter_mut().for_each(|v| *v /= norm);
            std::mem::swap(&mut x, &mut y);
        }
        x
    };

    let mut order: Vec<usize> = (0..nv).collect();
    order.sort_by(|&a, &b| field[a].total_cmp(&field[b]).then(a.cmp(&b)));

    // Move vertices to the left part one by one, tracking the cut.
    let inc = weighted.incidence();
    let sizes: Vec<usize> = weighted.hyperedges().iter().map(|e| e.pins.len()).collect();
    let mut left = vec![0usize; sizes.len()];
    let mut cut = 0.0;
    let mut best: Option<(f64, usize, usize)> = None;
    for (t, &v) in order.iter().enumerate().take(nv - 1) {
        for &e in &inc[v] {
            let was_cut = left[e] > 0 && left[e] < sizes[e];
            left[e] += 1;
            let is_cut = left[e] > 0 && left[e] < sizes[e];
            if was_cut != is_cut {
                let w = weights[e];
                cut += if is_cut { w } else { -w };
            }
        }
        let l = t + 1;
        if l > cap || nv - l > cap {
            continue;
        }
        let skew = l.abs_diff(nv - l);
        let better = match best {
            None => true,
            Some((c, s, _)) => cut < c - 1e-12 * c.abs().max(1.0) || (cut <= c + 1e-12 * c.abs().max(1.0) && skew < s),
        };
        if better {
            best = Some((cut, skew, l));
        }
    }
    let (_, _, l) = best.ok_or(Error::BalanceInfeasible { n: nv, imbalance: alpha })?;
    let mut assignment = vec![1; nv];
    for &v in &order[..l] {
        assignment[v] = 0;
    }
    Partition::new(assignment, 2)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Partitioner {
    Fallback,
    External(ExternalPartitioner),
}

impl Partitioner {
    fn bisect(&self, h: &Hypergraph, weights: &[f64], alpha: f64, seed: u64) -> Result<(Partition, bool, Option<String>)> {
        match self {
            Self::Fallback => Ok((fallback_bisect(h, weights, alpha)?, true, None)),
            Self::External(tool) => {
                let out = external_partition(h, weights, alpha, seed, tool)?;
                Ok((out.partition, out.balanced, Some(out.command_line)))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HpartExperimentConfig {
    /// `relax.seed` is the base seed; repetition `r` uses `seed + r`.
    pub relax: RelaxationConfig,
    pub eps: f64,
    pub repetitions: usize,
    pub imbalance: f64,
    pub partitioner: Partitioner,
}

impl Default for HpartExperimentConfig {
    fn default() -> Self {
        Self {
            relax: RelaxationConfig::default(),
            eps: DEFAULT_EPS,
            repetitions: DEFAULT_REPETITIONS,
            imbalance: DEFAULT_IMBALANCE,
            partitioner: Partitioner::Fallback,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HpartTrial {
    pub seed: u64,
    /// Cut of the partition computed on original weights.
    pub baseline_cut: f64,
    /// Cut (original weights) of the partition computed on `1 / s_h`.
    pub plus_cut: f64,
    /// `baseline_cut / plus_cut`; above 1 means the preprocessing helped.
    pub ratio: f64,
    pub baseline_balanced: bool,
    pub plus_balanced: bool,
    pub command_lines: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HpartReport {
    pub trials: Vec<HpartTrial>,
    pub mean_ratio: f64,
    pub balance_violations: usize,
    pub timings: PhaseTimings,
}

/// Partition with original weights and with inverted hyperedge distances,
/// `repetitions` times, pricing both cuts with original weights.
pub fn hpart_experiment(h: &Hypergraph, cfg: &HpartExperimentConfig) -> Result<HpartReport> {
    cfg.relax.validate()?;
    let original = h.weights();
    let seeds: Vec<u64> = (0..cfg.repetitions as u64).map(|r| cfg.relax.seed.wrapping_add(r)).collect();
    // The internal bisector does not depend on the seed.
    let fixed_baseline = match cfg.partitioner {
        Partitioner::Fallback => Some(cfg.partitioner.bisect(h, &original, cfg.imbalance, 0)?),
        Partitioner::External(_) => None,
    };
    let outcomes: Vec<(HpartTrial, PhaseTimings)> = seeds
        .into_par_iter()
        .map(|seed| {
            let mut timings = PhaseTimings::default();
            let t = Instant::now();
            let (base, base_ok, base_cmd) = match &fixed_baseline {
                Some(b) => b.clone(),
                None => cfg.partitioner.bisect(h, &original, cfg.imbalance, seed)?,
            };
            timings.solve += t.elapsed();

            let t = Instant::now();
            let rc = RelaxationConfig {
                seed,
                ..cfg.relax.clone()
            };
            let dist = hyperedge_distances(h, &rc)?;
            timings.relax = t.elapsed();
            let t = Instant::now();
            let surrogate = dist.inverted(cfg.eps);
            timings.preprocess = t.elapsed();

            let t = Instant::now();
            let (plus, plus_ok, plus_cmd) = cfg.partitioner.bisect(h, &surrogate, cfg.imbalance, seed)?;
            timings.solve += t.elapsed();

            let baseline_cut = evaluate_cut(h, &base)?;
            let plus_cut = evaluate_cut(h, &plus)?;
            Ok((
                HpartTrial {
                    seed,
                    baseline_cut,
                    plus_cut,
                    ratio: ratio(baseline_cut, plus_cut),
                    baseline_balanced: base_ok,
                    plus_balanced: plus_ok,
                    command_lines: base_cmd.into_iter().chain(plus_cmd).collect(),
                },
                timings,
            ))
        })
        .collect::<Result<_>>()?;

    let mut timings = PhaseTimings::default();
    let mut trials = Vec::with_capacity(outcomes.len());
    for (trial, t) in outcomes {
        timings.add(&t);
        trials.push(trial);
    }
    let mean_ratio = trials.iter().map(|t| t.ratio).sum::<f64>() / trials.len().max(1) as f64;
    let balance_violations = trials
        .iter()
        .map(|t| usize::from(!t.baseline_balanced) + usize::from(!t.plus_balanced))
        .sum();
    Ok(HpartReport {
        trials,
        mean_ratio,
        balance_violations,
        timings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algdist::pair_distances;

    fn two_cliques() -> Hypergraph {
        let mut edges = Vec::new();
        for base in [0, 4] {
            for i in 0..4 {
                for j in i + 1..4 {
                    edges.push((vec![base + i, base + j], 1.0));
                }
            }
        }
        edges.push((vec![3, 4], 1.0));
        Hypergraph::from_pins(8, edges).unwrap()
    }

    fn brute_force_min_cut(h: &Hypergraph, alpha: f64) -> f64 {
        let n = h.num_vertices();
        let mut best = f64::INFINITY;
        for mask in 1u32..(1 << n) - 1 {
            let a: Vec<usize> = (0..n).map(|v| ((mask >> v) & 1) as usize).collect();
            let p = Partition::new(a, 2).unwrap();
            if p.is_balanced(alpha) {
                best = best.min(evaluate_cut(h, &p).unwrap());
            }
        }
        best
    }

    #[test]
    fn cut_example() {
        let h = Hypergraph::from_pins(3, [(vec![0, 1], 5.0), (vec![1, 2], 1.0)]).unwrap();
        let p = Partition::new(vec![0, 0, 1], 2).unwrap();
        assert_eq!(evaluate_cut(&h, &p).unwrap(), 1.0);
        let all_split = Partition::new(vec![0, 1, 0], 2).unwrap();
        assert_eq!(evaluate_cut(&h, &all_split).unwrap(), 6.0);
    }

    #[test]
    fn partition_rejects() {
        assert!(matches!(Partition::new(vec![0, 0, 0], 2), Err(Error::EmptyPart(1))));
        assert!(matches!(
            Partition::new(vec![0, 2], 2),
            Err(Error::InvalidPart { part: 2, tau: 2 })
        ));
        assert!(matches!(
            Partition::from_partial(&[Some(0), None], 2),
            Err(Error::Unassigned(1))
        ));
    }

    #[test]
    fn inversion() {
        assert_eq!(invert_weights(&[0.5], 1e-12), vec![2.0]);
        let z = invert_weights(&[0.0], 1e-12)[0];
        assert!(z.is_finite() && (z - 1e12).abs() < 1.0);
        let inv = invert_weights(&[0.1, 0.2], 1e-12);
        assert!(inv[0] > inv[1]);
    }

    #[test]
    fn spread_examples() {
        let h = Hypergraph::from_pins(3, [(vec![0, 1, 2], 1.0)]).unwrap();
        let flat = IterateSet::from_vectors(vec![vec![0.3; 4], vec![-0.1; 4]]).unwrap();
        assert_eq!(hyperedge_spread(&h, &flat).unwrap(), vec![0.0]);

        let h = Hypergraph::from_pins(2, [(vec![0, 1], 1.0)]).unwrap();
        let it = IterateSet::from_vectors(vec![vec![0.1, 0.3, 0.0], vec![0.5, 0.2, 0.0]]).unwrap();
        let s = hyperedge_spread(&h, &it).unwrap()[0];
        assert!((s - 0.5).abs() < 1e-15);

        let single = Hypergraph::from_pins(2, [(vec![1], 1.0), (vec![0, 1], 1.0)]).unwrap();
        assert_eq!(hyperedge_spread(&single, &it).unwrap()[0], 0.0);
    }

    #[test]
    fn two_pin_hyperedges_match_pairwise_distances() {
        let h = Hypergraph::from_pins(
            4,
            [(vec![0, 1], 1.0), (vec![1, 2], 2.0), (vec![2, 3], 1.0), (vec![0, 3], 0.5)],
        )
        .unwrap();
        let cfg = RelaxationConfig::default();
        let model = h.bipartite_expand();
        let iters = relax(&model.graph, &cfg).unwrap();
        let pairs = h.hyperedges().iter().map(|e| (e.pins[0], e.pins[1])).collect();
        let meta = DistanceMeta {
            iterations: 20,
            runs: 10,
            p: PNorm::Finite(1.0),
            omega: 0.5,
            seed: 0,
        };
        let pd = pair_distances(&iters, pairs, PNorm::Finite(1.0), meta).unwrap();
        let hd = hyperedge_distances(&h, &cfg).unwrap();
        for (a, b) in hd.s.iter().zip(&pd.values) {
            assert!((a - b).abs() <= 1e-12 * b.max(1.0));
        }
    }

    #[test]
    fn scaling_preserves_order() {
        let w = [0.3, 2.0, 1e-9, 2.0, 0.0];
        let s = scale_to_integers(&w).unwrap();
        assert_eq!(s, vec![150_000, 1_000_000, 1, 1_000_000, 1]);
        assert_eq!(scale_to_integers(&[0.0, 0.0]).unwrap(), vec![1, 1]);
        assert!(scale_to_integers(&[f64::NAN]).is_err());
    }

    #[test]
    fn ubfactor_mapping() {
        assert_eq!(ubfactor(0.03), 1);
        assert_eq!(ubfactor(0.1), 5);
        assert_eq!(ubfactor(0.5), 25);
    }

    #[test]
    fn max_part_sizes() {
        assert_eq!(max_part_size(8, 2, 0.1), 4);
        assert_eq!(max_part_size(10, 2, 0.2), 6);
        assert_eq!(max_part_size(2, 2, 0.03), 1);
    }

    #[test]
    fn fallback_two_cliques() {
        let h = two_cliques();
        let p = fallback_bisect(&h, &h.weights(), 0.1).unwrap();
        assert_eq!(evaluate_cut(&h, &p).unwrap(), 1.0);
        assert_eq!(brute_force_min_cut(&h, 0.1), 1.0);
        assert!(p.is_balanced(0.1));
    }

    #[test]
    fn fallback_path() {
        let n = 10;
        let h = Hypergraph::from_pins(n, (0..n - 1).map(|i| (vec![i, i + 1], 1.0))).unwrap();
        let p = fallback_bisect(&h, &h.weights(), 0.03).unwrap();
        assert_eq!(evaluate_cut(&h, &p).unwrap(), brute_force_min_cut(&h, 0.03));
        assert_eq!(p.part_sizes(), vec![5, 5]);
    }

    #[test]
    fn fallback_two_vertices() {
        let h = Hypergraph::from_pins(2, [(vec![0, 1], 3.0)]).unwrap();
        let p = fallback_bisect(&h, &h.weights(), 0.03).unwrap();
        assert_eq!(p.part_sizes(), vec![1, 1]);
        assert_eq!(evaluate_cut(&h, &p).unwrap(), 3.0);
    }

    #[test]
    fn fallback_rejects_infeasible() {
        let h = Hypergraph::from_pins(1, [(vec![0], 1.0)]).unwrap();
        assert!(matches!(
            fallback_bisect(&h, &[1.0], 0.03),
            Err(Error::BalanceInfeasible { .. })
        ));
    }

    #[test]
    fn part_file_parsing() {
        let p = parse_part_file("0\n1\n1\n", 3, 2).unwrap();
        assert_eq!(p.assignment(), &[0, 1, 1]);
        assert!(parse_part_file("0\n1\n", 3, 2).is_err());
        assert!(parse_part_file("0\nx\n1\n", 3, 2).is_err());
        assert!(parse_part_file("0\n0\n0\n", 3, 2).is_err());
    }

    #[test]
    fn missing_partitioner() {
        let h = two_cliques();
        let tool = ExternalPartitioner::new("/nonexistent/hmetis-binary");
        assert!(matches!(
            external_partition(&h, &h.weights(), 0.1, 0, &tool),
            Err(Error::PartitionerMissing(_))
        ));
    }

    #[test]
    fn experiment_with_original_surrogate_equal() {
        let h = two_cliques();
        let cfg = HpartExperimentConfig {
            repetitions: 3,
            imbalance: 0.1,
            ..Default::default()
        };
        let r = hpart_experiment(&h, &cfg).unwrap();
        assert_eq!(r.trials.len(), 3);
        assert_eq!(r.balance_violations, 0);
        assert!(r.trials.iter().all(|t| t.baseline_cut == 1.0));
        assert!(r.mean_ratio.is_finite());
    }
}
