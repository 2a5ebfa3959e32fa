//! Algebraic distances computed from relaxation iterates.
//!
//! For a single run the distance between `i` and `j` is `|x_i - x_j|`. With
//! `R` runs the per-run differences are combined with a p-norm (`p = inf`
//! takes the maximum). Small values mean strongly connected vertices.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::relax::IterateSet;

/// Exponent of the norm taken over relaxation runs.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub enum PNorm {
    Finite(f64),
    #[default]
    Infinity,
}

impl PNorm {
    pub fn new(p: f64) -> Result<Self> {
        if p == f64::INFINITY {
            Ok(Self::Infinity)
        } else if p >= 1.0 {
            Ok(Self::Finite(p))
        } else {
            Err(Error::InvalidNorm(p))
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Self::Finite(p) => p,
            Self::Infinity => f64::INFINITY,
        }
    }

    /// Norm of the absolute per-run differences.
    pub fn combine<I: IntoIterator<Item = f64>>(self, diffs: I) -> f64 {
        match self {
            Self::Infinity => diffs.into_iter().fold(0.0, |m, d| m.max(d.abs())),
            Self::Finite(1.0) => diffs.into_iter().map(f64::abs).sum(),
            Self::Finite(2.0) => diffs.into_iter().map(|d| d * d).sum::<f64>().sqrt(),
            Self::Finite(p) => diffs.into_iter().map(|d| d.abs().powf(p)).sum::<f64>().powf(1.0 / p),
        }
    }
}

impl fmt::Display for PNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Infinity => f.write_str("inf"),
            Self::Finite(p) => write!(f, "{p}"),
        }
    }
}

impl FromStr for PNorm {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "max" => Ok(Self::Infinity),
            other => {
                let p: f64 = other.parse().map_err(|_| format!("invalid norm exponent '{s}'"))?;
                Self::new(p).map_err(|e| e.to_string())
            }
        }
    }
}

/// Extended p-normed distance `(sum_r |x_i^(r) - x_j^(r)|^p)^(1/p)`.
pub fn pair_distance(iters: &IterateSet, i: usize, j: usize, p: PNorm) -> Result<f64> {
    for v in [i, j] {
        if v >= iters.n {
            return Err(Error::VertexOutOfRange { vertex: v, n: iters.n });
        }
    }
    if let PNorm::Finite(q) = p {
        PNorm::new(q)?;
    }
    Ok(p.combine(iters.vectors.iter().map(|x| x[i] - x[j])))
}

/// Parameters a distance field was computed with.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceMeta {
    pub iterations: usize,
    pub runs: usize,
    pub p: PNorm,
    pub omega: f64,
    pub seed: u64,
}

/// One distance per requested vertex pair (by default the edge set, in
/// lexicographic order).
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceField {
    pub pairs: Vec<(usize, usize)>,
    pub values: Vec<f64>,
    pub meta: DistanceMeta,
}

impl DistanceField {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max(&self) -> f64 {
        self.values.iter().cloned().fold(0.0, f64::max)
    }

    /// True when `pairs` lists exactly the edges of `g` in edge order.
    pub fn covers_edges_of(&self, g: &Graph) -> bool {
        self.pairs.len() == g.num_edges() && g.edges().zip(&self.pairs).all(|(e, &(u, v))| e.u == u && e.v == v)
    }
}

/// Distances for every edge of `g`; `O(R m)` work.
pub fn edge_distances(g: &Graph, iters: &IterateSet, p: PNorm, meta: DistanceMeta) -> Result<DistanceField> {
    let pairs: Vec<(usize, usize)> = g.edges().map(|e| (e.u, e.v)).collect();
    pair_distances(iters, pairs, p, meta)
}

/// Distances for an explicit list of pairs.
pub fn pair_distances(iters: &IterateSet, pairs: Vec<(usize, usize)>, p: PNorm, meta: DistanceMeta) -> Result<DistanceField> {
    if let Some(&(u, v)) = pairs.iter().find(|&&(u, v)| u.max(v) >= iters.n) {
        return Err(Error::VertexOutOfRange {
            vertex: u.max(v),
            n: iters.n,
        });
    }
    if let PNorm::Finite(q) = p {
        PNorm::new(q)?;
    }
    let values = pairs
        .par_iter()
        .with_min_len(4096)
        .map(|&(i, j)| p.combine(iters.vectors.iter().map(|x| x[i] - x[j])))
        .collect();
    Ok(DistanceField { pairs, values, meta })
}

/// Threshold below which `|sigma_2|` is treated as zero.
pub const SIGMA_TOLERANCE: f64 = 1e-14;

/// `s / |sigma_2|^k`, the distance rescaled by the decay rate of the
/// dominant non-constant mode.
pub fn normalized_distance(s: f64, sigma2: f64, k: usize) -> Result<f64> {
    if sigma2.abs() <= SIGMA_TOLERANCE || !sigma2.is_finite() {
        return Err(Error::DegenerateNormalization(sigma2));
    }
    if s == 0.0 {
        return Ok(0.0);
    }
    Ok(s / sigma2.abs().powi(k as i32))
}
