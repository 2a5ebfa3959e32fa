//! Maximum weighted matching heuristics with algebraic-distance
//! preprocessing.
//!
//! Both baselines are 2-approximations: the textbook greedy algorithm and
//! the path-growing algorithm. Preprocessing replaces the edge weights used
//! in their greedy choices with surrogate scores
//! `s'_ij = a_i / delta_i + a_j / delta_j`, where `a_i` sums the reciprocal
//! distances over edges at `i` and `delta_i` is the unweighted degree.
//! Quality is always reported with the original weights.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::algdist::{edge_distances, DistanceField, DistanceMeta, PNorm};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::relax::{relax, RelaxationConfig};

/// Floor applied to distances before taking reciprocals.
pub const DEFAULT_EPS: f64 = 1e-12;
pub const DEFAULT_REPETITIONS: usize = 20;
/// Largest edge count accepted by [`brute_force_matching`].
pub const BRUTE_FORCE_MAX_EDGES: usize = 24;

#[derive(Clone, Debug, PartialEq)]
pub struct Matching {
    /// Matched edges `(u, v)` with `u < v`, in the order they were chosen.
    pub edges: Vec<(usize, usize)>,
    /// Sum of original weights over matched edges.
    pub weight_original: f64,
    /// Sum of the weights the algorithm optimized, when those differ from
    /// the original ones.
    pub weight_surrogate: Option<f64>,
}

impl Matching {
    fn from_edge_ids(g_edges: &[(usize, usize, f64)], ids: &[usize], used: &[f64], surrogate: bool) -> Self {
        Matching {
            edges: ids.iter().map(|&e| (g_edges[e].0, g_edges[e].1)).collect(),
            weight_original: ids.iter().map(|&e| g_edges[e].2).sum(),
            weight_surrogate: surrogate.then(|| ids.iter().map(|&e| used[e]).sum()),
        }
    }

    pub fn cardinality(&self) -> usize {
        self.edges.len()
    }

    /// No vertex is covered twice and every edge exists in `g`.
    pub fn is_valid_for(&self, g: &Graph) -> bool {
        let mut covered = vec![false; g.n()];
        for &(u, v) in &self.edges {
            if u >= g.n() || v >= g.n() || g.weight(u, v) == 0.0 || covered[u] || covered[v] {
                return false;
            }
            covered[u] = true;
            covered[v] = true;
        }
        true
    }

    /// No edge of `g` has both endpoints free.
    pub fn is_maximal_for(&self, g: &Graph) -> bool {
        let mut covered = vec![false; g.n()];
        for &(u, v) in &self.edges {
            covered[u] = true;
            covered[v] = true;
        }
        g.edges().all(|e| covered[e.u] || covered[e.v])
    }
}

/// Per-vertex sums `a_i` and per-edge surrogate scores `s'_ij`.
#[derive(Clone, Debug, PartialEq)]
pub struct SurrogateWeights {
    pub a: Vec<f64>,
    pub sprime: Vec<f64>,
}

impl SurrogateWeights {
    /// Reciprocal scores, so that max-first algorithms prefer small `s'`.
    pub fn inverted(&self) -> Vec<f64> {
        self.sprime.iter().map(|s| 1.0 / s).collect()
    }
}

pub fn matching_preprocess(g: &Graph, dist: &DistanceField, eps: f64) -> Result<SurrogateWeights> {
    if !dist.covers_edges_of(g) {
        return Err(Error::DistanceFieldMismatch);
    }
    let mut a = vec![0.0; g.n()];
    for (&(u, v), &rho) in dist.pairs.iter().zip(&dist.values) {
        let inv = 1.0 / rho.max(eps);
        a[u] += inv;
        a[v] += inv;
    }
    let sprime = dist
        .pairs
        .iter()
        .map(|&(u, v)| a[u] / g.degree(u) as f64 + a[v] / g.degree(v) as f64)
        .collect();
    Ok(SurrogateWeights { a, sprime })
}

fn check_weights(g: &Graph, weights: &[f64]) -> Result<Vec<(usize, usize, f64)>> {
    if weights.len() != g.num_edges() {
        return Err(Error::LengthMismatch {
            expected: g.num_edges(),
            got: weights.len(),
        });
    }
    if weights.iter().any(|w| !w.is_finite()) {
        return Err(Error::NonFinite("matching weights"));
    }
    Ok(g.edges().map(|e| (e.u, e.v, e.w)).collect())
}

fn differs_from_original(edges: &[(usize, usize, f64)], weights: &[f64]) -> bool {
    edges.iter().zip(weights).any(|(e, &w)| e.2 != w)
}

/// Greedy matching: scan edges by decreasing weight (ties by edge order)
/// and keep every edge whose endpoints are both free.
pub fn greedy_matching(g: &Graph, weights: &[f64]) -> Result<Matching> {
    let edges = check_weights(g, weights)?;
    let mut order: Vec<usize> = (0..edges.len()).collect();
    order.sort_by(|&a, &b| weights[b].total_cmp(&weights[a]));
    let mut covered = vec![false; g.n()];
    let mut chosen = Vec::new();
    for e in order {
        let (u, v, _) = edges[e];
        if !covered[u] && !covered[v] {
            covered[u] = true;
            covered[v] = true;
            chosen.push(e);
        }
    }
    Ok(Matching::from_edge_ids(
        &edges,
        &chosen,
        weights,
        differs_from_original(&edges, weights),
    ))
}

/// Path-growing matching. Paths are grown from unvisited vertices in
/// ascending id order, always along the heaviest edge to a not yet removed
/// neighbor (ties to the smaller neighbor id); edges go alternately into
/// two matchings and the heavier one is returned (the first on ties).
pub fn path_growing_matching(g: &Graph, weights: &[f64]) -> Result<Matching> {
    let edges = check_weights(g, weights)?;
    let slot_ids = g.adjacency_edge_ids();
    let mut removed = vec![false; g.n()];
    let mut sides: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
    let mut side = 0;
    for start in 0..g.n() {
        let mut x = start;
        while !removed[x] {
            let base = g.adjacency_offset(x);
            let (targets, _) = g.adjacency(x);
            let mut best: Option<(usize, usize)> = None;
            for (p, &y) in targets.iter().enumerate() {
                let y = y as usize;
                if removed[y] {
                    continue;
                }
                let e = slot_ids[base + p];
                if best.is_none_or(|(_, b)| weights[e] > weights[b]) {
                    best = Some((y, e));
                }
            }
            removed[x] = true;
            if let Some((y, e)) = best {
                sides[side].push(e);
                side ^= 1;
                x = y;
            }
        }
    }
    let w = |ids: &[usize]| ids.iter().map(|&e| weights[e]).sum::<f64>();
    let pick = if w(&sides[0]) >= w(&sides[1]) { 0 } else { 1 };
    Ok(Matching::from_edge_ids(
        &edges,
        &sides[pick],
        weights,
        differs_from_original(&edges, weights),
    ))
}

/// Exact maximum weight matching by exhaustive search (small graphs only).
pub fn brute_force_matching(g: &Graph, weights: &[f64]) -> Result<Matching> {
    let edges = check_weights(g, weights)?;
    if edges.len() > BRUTE_FORCE_MAX_EDGES {
        return Err(Error::TooLarge {
            what: "edge set",
            size: edges.len(),
            limit: BRUTE_FORCE_MAX_EDGES,
        });
    }

    struct Search<'a> {
        edges: &'a [(usize, usize, f64)],
        weights: &'a [f64],
        covered: Vec<bool>,
        current: Vec<usize>,
        best: Vec<usize>,
        best_weight: f64,
    }

    impl Search<'_> {
        fn run(&mut self, next: usize, weight: f64) {
            if next == self.edges.len() {
                if weight > self.best_weight {
                    self.best_weight = weight;
                    self.best = self.current.clone();
                }
                return;
            }
            let (u, v, _) = self.edges[next];
            if !self.covered[u] && !self.covered[v] {
                self.covered[u] = true;
                self.covered[v] = true;
                self.current.push(next);
                self.run(next + 1, weight + self.weights[next]);
                self.current.pop();
                self.covered[u] = false;
                self.covered[v] = false;
            }
            self.run(next + 1, weight);
        }
    }

    let mut s = Search {
        edges: &edges,
        weights,
        covered: vec![false; g.n()],
        current: Vec::new(),
        best: Vec::new(),
        best_weight: 0.0,
    };
    s.run(0, 0.0);
    let best = s.best;
    Ok(Matching::from_edge_ids(
        &edges,
        &best,
        weights,
        differs_from_original(&edges, weights),
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatchingAlgorithm {
    Greedy,
    PathGrowing,
}

impl MatchingAlgorithm {
    pub fn run(self, g: &Graph, weights: &[f64]) -> Result<Matching> {
        match self {
            Self::Greedy => greedy_matching(g, weights),
            Self::PathGrowing => path_growing_matching(g, weights),
        }
    }
}

impl fmt::Display for MatchingAlgorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Greedy => "greedy",
            Self::PathGrowing => "path-growing",
        })
    }
}

impl FromStr for MatchingAlgorithm {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "greedy" => Ok(Self::Greedy),
            "path" | "path-growing" | "pga" => Ok(Self::PathGrowing),
            other => Err(format!("unknown matching algorithm '{other}'")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MatchingExperimentConfig {
    /// `relax.seed` is the base seed; repetition `r` uses `seed + r`.
    pub relax: RelaxationConfig,
    pub p: PNorm,
    pub eps: f64,
    pub repetitions: usize,
    pub algorithm: MatchingAlgorithm,
    /// Prefer small `s'` instead of large `s'` in the greedy choices.
    pub invert_surrogate: bool,
}

impl Default for MatchingExperimentConfig {
    fn default() -> Self {
        Self {
            relax: RelaxationConfig::default(),
            p: PNorm::Infinity,
            eps: DEFAULT_EPS,
            repetitions: DEFAULT_REPETITIONS,
            algorithm: MatchingAlgorithm::Greedy,
            invert_surrogate: false,
        }
    }
}

impl MatchingExperimentConfig {
    pub fn seeds(&self) -> Vec<u64> {
        (0..self.repetitions as u64)
            .map(|r| self.relax.seed.wrapping_add(r))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MatchingTrial {
    pub seed: u64,
    pub weight: f64,
    pub cardinality: usize,
    /// Weight with preprocessing over weight without.
    pub weight_ratio: f64,
    pub cardinality_ratio: f64,
}

/// Wall-clock per phase, summed over repetitions.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PhaseTimings {
    pub relax: Duration,
    pub preprocess: Duration,
    pub solve: Duration,
}

impl PhaseTimings {
    pub(crate) fn add(&mut self, other: &PhaseTimings) {
        self.relax += other.relax;
        self.preprocess += other.preprocess;
        self.solve += other.solve;
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MatchingReport {
    pub baseline: Matching,
    pub trials: Vec<MatchingTrial>,
    pub mean_weight_ratio: f64,
    pub mean_cardinality_ratio: f64,
    pub timings: PhaseTimings,
}

pub(crate) fn ratio(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        if a == 0.0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        a / b
    }
}

/// Runs `algorithm` on the surrogate weights and reports the result
/// against the baseline, both in original weights.
pub fn compare_with_surrogate(
    g: &Graph,
    algorithm: MatchingAlgorithm,
    baseline: &Matching,
    surrogate: &[f64],
    seed: u64,
) -> Result<MatchingTrial> {
    let m = algorithm.run(g, surrogate)?;
    debug_assert!(m.is_valid_for(g));
    Ok(MatchingTrial {
        seed,
        weight: m.weight_original,
        cardinality: m.cardinality(),
        weight_ratio: ratio(m.weight_original, baseline.weight_original),
        cardinality_ratio: ratio(m.cardinality() as f64, baseline.cardinality() as f64),
    })
}

/// Baseline matching on original weights versus matching on algebraic
/// distance surrogates, over `repetitions` seeded relaxations.
pub fn matching_experiment(g: &Graph, cfg: &MatchingExperimentConfig) -> Result<MatchingReport> {
    cfg.relax.validate()?;
    let original = g.edge_weights();
    let t = Instant::now();
    let baseline = cfg.algorithm.run(g, &original)?;
    let baseline_time = t.elapsed();

    let outcomes: Vec<(MatchingTrial, PhaseTimings)> = cfg
        .seeds()
        .into_par_iter()
        .map(|seed| {
            let mut timings = PhaseTimings::default();
            let rc = RelaxationConfig {
                seed,
                ..cfg.relax.clone()
            };
            let t = Instant::now();
            let iters = relax(g, &rc)?;
            timings.relax = t.elapsed();

            let t = Instant::now();
            let meta = DistanceMeta {
                iterations: rc.iterations,
                runs: rc.runs,
                p: cfg.p,
                omega: rc.omega,
                seed,
            };
            let dist = edge_distances(g, &iters, cfg.p, meta)?;
            let sw = matching_preprocess(g, &dist, cfg.eps)?;
            let surrogate = if cfg.invert_surrogate { sw.inverted() } else { sw.sprime };
            timings.preprocess = t.elapsed();

            let t = Instant::now();
            let trial = compare_with_surrogate(g, cfg.algorithm, &baseline, &surrogate, seed)?;
            timings.solve = t.elapsed();
            Ok((trial, timings))
        })
        .collect::<Result<_>>()?;

    let mut timings = PhaseTimings {
        solve: baseline_time,
        ..Default::default()
    };
    let mut trials = Vec::with_capacity(outcomes.len());
    for (trial, t) in outcomes {
        timings.add(&t);
        trials.push(trial);
    }
    let count = trials.len().max(1) as f64;
    let mean_weight_ratio = trials.iter().map(|t| t.weight_ratio).sum::<f64>() / count;
    let mean_cardinality_ratio = trials.iter().map(|t| t.cardinality_ratio).sum::<f64>() / count;
    Ok(MatchingReport {
        baseline,
        trials,
        mean_weight_ratio,
        mean_cardinality_ratio,
        timings,
    })
}
