//! Jacobi over-relaxation (JOR) on the graph Laplacian system `Lx = 0`.
//!
//! One sweep maps `x` to `(1 - omega) x + omega D^{-1} W x`: every vertex
//! moves towards the weighted average of its neighbors. A sweep reads only
//! the previous iterate, so vertices (and independent runs) can be updated
//! in parallel without changing a single bit of the result.
//!
//! Besides the sparse engine this module builds dense iteration matrices
//! for Gauss-Seidel, Jacobi, SOR and JOR (test scale only) and the two
//! diagnostics used to judge how "settled" an iterate is: the angle between
//! consecutive iterates with its a-priori bound, and the residual of the
//! mutually reinforcing model `x = mu x + D^{-1} W x`.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::Graph;

pub const DEFAULT_OMEGA: f64 = 0.5;
pub const DEFAULT_ITERATIONS: usize = 20;
pub const DEFAULT_RUNS: usize = 10;

/// Identity of the generator behind [`initial_vectors`], recorded in run
/// metadata.
pub const RNG_ALGORITHM: &str = "ChaCha8Rng(rand_chacha 0.9) seed_from_u64; x0 = U[0,1) - 0.5";

/// Largest matrix order accepted by the dense (test-scale) routines.
pub const DENSE_LIMIT: usize = 2000;

/// Rounding allowance in `1 - omega mu_n >= 0`: computed `mu_n` of a
/// bipartite graph is 2 plus a few ulps.
const OMEGA_SLACK: f64 = 1e-12;

const PAR_MIN_VERTICES: usize = 8192;
const PAR_CHUNK: usize = 2048;

#[derive(Clone, Debug, PartialEq)]
pub struct RelaxationConfig {
    pub omega: f64,
    /// Number of sweeps `k`.
    pub iterations: usize,
    /// Number of independent random starts `R`.
    pub runs: usize,
    pub seed: u64,
    /// Subtract the arithmetic mean after every sweep. Pairwise
    /// differences are unaffected.
    pub center_each_sweep: bool,
    /// Keep `x^(k-1)` next to `x^(k)` for diagnostics.
    pub keep_previous: bool,
}

impl Default for RelaxationConfig {
    fn default() -> Self {
        Self {
            omega: DEFAULT_OMEGA,
            iterations: DEFAULT_ITERATIONS,
            runs: DEFAULT_RUNS,
            seed: 0,
            center_each_sweep: false,
            keep_previous: false,
        }
    }
}

impl RelaxationConfig {
    pub fn validate(&self) -> Result<()> {
        check_omega(self.omega)?;
        if self.runs == 0 {
            return Err(Error::NoRuns);
        }
        Ok(())
    }
}

fn check_omega(omega: f64) -> Result<()> {
    if omega > 0.0 && omega < 2.0 {
        Ok(())
    } else {
        Err(Error::InvalidOmega(omega))
    }
}

/// The `R` iterate vectors `x^(k,r)` after `k` sweeps.
#[derive(Clone, Debug, PartialEq)]
pub struct IterateSet {
    pub n: usize,
    pub iterations: usize,
    pub vectors: Vec<Vec<f64>>,
    /// `x^(k-1,r)`, present when requested and `k >= 1`.
    pub previous: Option<Vec<Vec<f64>>>,
}

impl IterateSet {
    pub fn runs(&self) -> usize {
        self.vectors.len()
    }

    /// Wraps externally produced vectors (all of length `n`).
    pub fn from_vectors(vectors: Vec<Vec<f64>>) -> Result<Self> {
        let n = vectors.first().map_or(0, Vec::len);
        for v in &vectors {
            if v.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    got: v.len(),
                });
            }
        }
        Ok(Self {
            n,
            iterations: 0,
            vectors,
            previous: None,
        })
    }
}

/// Initial vectors with entries drawn i.i.d. from `U[-0.5, 0.5)`.
///
/// All values come from one generator in run-major order, so the result
/// depends only on `(seed, n, runs)`.
pub fn initial_vectors(n: usize, runs: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..runs)
        .map(|_| (0..n).map(|_| rng.random::<f64>() - 0.5).collect())
        .collect()
}

#[inline]
fn sweep_vertex(g: &Graph, x: &[f64], omega: f64, i: usize) -> f64 {
    let (targets, weights) = g.adjacency(i);
    let mut acc = 0.0;
    for (&j, &w) in targets.iter().zip(weights) {
        acc += w * x[j as usize];
    }
    (1.0 - omega) * x[i] + omega * (acc / g.weighted_degree(i))
}

/// One JOR sweep `out = (1 - omega) x + omega D^{-1} W x` without any
/// precondition checks. Large graphs are swept in parallel chunks; the
/// arithmetic per entry is identical either way.
pub fn jor_sweep_into(g: &Graph, x: &[f64], out: &mut [f64], omega: f64) {
    debug_assert_eq!(x.len(), g.n());
    debug_assert_eq!(out.len(), g.n());
    if g.n() >= PAR_MIN_VERTICES && rayon::current_num_threads() > 1 {
        out.par_chunks_mut(PAR_CHUNK).enumerate().for_each(|(c, chunk)| {
            let base = c * PAR_CHUNK;
            for (o, slot) in chunk.iter_mut().enumerate() {
                *slot = sweep_vertex(g, x, omega, base + o);
            }
        });
    } else {
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = sweep_vertex(g, x, omega, i);
        }
    }
}

/// One JOR sweep; `x` is left untouched.
pub fn jor_sweep(g: &Graph, x: &[f64], omega: f64) -> Result<Vec<f64>> {
    check_omega(omega)?;
    if x.len() != g.n() {
        return Err(Error::LengthMismatch {
            expected: g.n(),
            got: x.len(),
        });
    }
    g.check_no_isolated()?;
    let mut out = vec![0.0; g.n()];
    jor_sweep_into(g, x, &mut out, omega);
    Ok(out)
}

fn subtract_mean(x: &mut [f64]) {
    if x.is_empty() {
        return;
    }
    let mean = x.iter().sum::<f64>() / x.len() as f64;
    for v in x.iter_mut() {
        *v -= mean;
    }
}

fn check_relaxable(g: &Graph) -> Result<()> {
    g.check_no_isolated()?;
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    Ok(())
}

/// Runs `cfg.runs` independent relaxations of `cfg.iterations` sweeps from
/// seeded random starts.
pub fn relax(g: &Graph, cfg: &RelaxationConfig) -> Result<IterateSet> {
    cfg.validate()?;
    let initial = initial_vectors(g.n(), cfg.runs, cfg.seed);
    relax_from(g, initial, cfg)
}

/// Like [`relax`] but from caller-supplied start vectors; `cfg.runs` and
/// `cfg.seed` are ignored.
pub fn relax_from(g: &Graph, initial: Vec<Vec<f64>>, cfg: &RelaxationConfig) -> Result<IterateSet> {
    check_omega(cfg.omega)?;
    if initial.is_empty() {
        return Err(Error::NoRuns);
    }
    for v in &initial {
        if v.len() != g.n() {
            return Err(Error::LengthMismatch {
                expected: g.n(),
                got: v.len(),
            });
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("initial vector"));
        }
    }
    check_relaxable(g)?;

    let k = cfg.iterations;
    let keep = cfg.keep_previous && k > 0;
    let results: Vec<(Vec<f64>, Option<Vec<f64>>)> = initial
        .into_par_iter()
        .map(|mut x| {
            let mut scratch = vec![0.0; x.len()];
            let mut prev = None;
            for step in 0..k {
                jor_sweep_into(g, &x, &mut scratch, cfg.omega);
                if cfg.center_each_sweep {
                    subtract_mean(&mut scratch);
                }
                std::mem::swap(&mut x, &mut scratch);
                if keep && step + 1 == k {
                    prev = Some(scratch.clone());
                }
            }
            (x, prev)
        })
        .collect();

    let (vectors, prevs): (Vec<_>, Vec<_>) = results.into_iter().unzip();
    let previous = if keep {
        Some(prevs.into_iter().map(|p| p.expect("kept")).collect())
    } else {
        None
    };
    Ok(IterateSet {
        n: g.n(),
        iterations: k,
        vectors,
        previous,
    })
}

/// Removes the `D`-weighted constant component:
/// `x - (1^T D x / 1^T D 1) 1`. This component is invariant under JOR, so
/// deflation commutes with sweeping.
pub fn deflate_constant(g: &Graph, x: &[f64]) -> Vec<f64> {
    let d = g.weighted_degrees();
    let num: f64 = d.iter().zip(x).map(|(d, x)| d * x).sum();
    let den: f64 = d.iter().sum();
    let c = if den > 0.0 { num / den } else { 0.0 };
    x.iter().map(|v| v - c).collect()
}

/// Classical splitting methods for `Lx = 0` with `L = D - W_L - W_U`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Splitting {
    GaussSeidel,
    Jacobi,
    Sor,
    Jor,
}

impl Splitting {
    pub const ALL: [Splitting; 4] = [Self::GaussSeidel, Self::Jacobi, Self::Sor, Self::Jor];
}

impl fmt::Display for Splitting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::GaussSeidel => "gs",
            Self::Jacobi => "jac",
            Self::Sor => "sor",
            Self::Jor => "jor",
        })
    }
}

impl FromStr for Splitting {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "gs" | "gauss-seidel" => Ok(Self::GaussSeidel),
            "jac" | "jacobi" => Ok(Self::Jacobi),
            "sor" => Ok(Self::Sor),
            "jor" => Ok(Self::Jor),
            other => Err(format!("unknown splitting method '{other}'")),
        }
    }
}

/// Dense weighted adjacency matrix `W`.
pub fn dense_adjacency(g: &Graph) -> Result<DMatrix<f64>> {
    if g.n() > DENSE_LIMIT {
        return Err(Error::TooLarge {
            what: "graph",
            size: g.n(),
            limit: DENSE_LIMIT,
        });
    }
    let mut w = DMatrix::zeros(g.n(), g.n());
    for i in 0..g.n() {
        for (j, wij) in g.neighbors(i) {
            w[(i, j)] = wij;
        }
    }
    Ok(w)
}

/// Dense Laplacian `L = D - W`.
pub fn dense_laplacian(g: &Graph) -> Result<DMatrix<f64>> {
    let mut l = -dense_adjacency(g)?;
    for i in 0..g.n() {
        l[(i, i)] = g.weighted_degree(i);
    }
    Ok(l)
}

/// Dense iteration matrix `H` of `x^(k+1) = H x^(k)`:
///
/// * GS:  `(D - W_L)^{-1} W_U`
/// * JAC: `D^{-1} (W_L + W_U)`
/// * SOR: `(D/omega - W_L)^{-1} ((1/omega - 1) D + W_U)`
/// * JOR: `(D/omega)^{-1} ((1/omega - 1) D + W_L + W_U)`
///
/// `omega` is ignored for GS and JAC.
pub fn iteration_matrix(g: &Graph, method: Splitting, omega: f64) -> Result<DMatrix<f64>> {
    let n = g.n();
    let w = dense_adjacency(g)?;
    g.check_no_isolated()?;
    let d = g.weighted_degrees();
    let lower = w.lower_triangle() - DMatrix::from_diagonal(&w.diagonal());
    let upper = w.upper_triangle() - DMatrix::from_diagonal(&w.diagonal());
    let h = match method {
        Splitting::Jacobi => {
            let mut h = w;
            for (i, &di) in d.iter().enumerate() {
                h.row_mut(i).unscale_mut(di);
            }
            h
        }
        Splitting::Jor => {
            check_omega(omega)?;
            let mut h = w;
            for i in 0..n {
                h.row_mut(i).scale_mut(omega / d[i]);
                h[(i, i)] = 1.0 - omega;
            }
            h
        }
        Splitting::GaussSeidel => {
            let mut m = -lower;
            for i in 0..n {
                m[(i, i)] = d[i];
            }
            m.solve_lower_triangular(&upper)
                .ok_or(Error::NonFinite("Gauss-Seidel splitting"))?
        }
        Splitting::Sor => {
            check_omega(omega)?;
            let mut m = -lower;
            let mut rhs = upper;
            for i in 0..n {
                m[(i, i)] = d[i] / omega;
                rhs[(i, i)] = (1.0 / omega - 1.0) * d[i];
            }
            m.solve_lower_triangular(&rhs).ok_or(Error::NonFinite("SOR splitting"))?
        }
    };
    Ok(h)
}

/// Expansion of `x^(0)` in the pencil eigenbasis, needed for the
/// a-priori angle bound.
#[derive(Clone, Debug)]
pub struct SpectralExpansion<'a> {
    /// `a = V^{-1} x^(0)`, ordered by ascending pencil eigenvalue.
    pub coefficients: &'a [f64],
    /// Largest pencil eigenvalue `mu_n`.
    pub mu_max: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundStatus {
    /// Both hypotheses hold; `angle_defect <= bound_rhs` is guaranteed.
    Applies,
    NoExpansion,
    /// `a_1 = 0`: the start has no constant component.
    LeadingCoefficientZero,
    /// `1 - omega mu_n < 0`.
    OmegaTooLarge,
    /// `f_k > 1/kappa`.
    FkAboveInverseKappa,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StabilityReport {
    /// `1 - <x^(k)/|x^(k)|, x^(k+1)/|x^(k+1)|>^2`.
    pub angle_defect: f64,
    /// Condition number of `D`: `max d_ii / min d_ii`.
    pub kappa: f64,
    pub alpha: Option<f64>,
    pub r_k: Option<f64>,
    pub f_k: Option<f64>,
    /// `4 kappa f_k / (1 + kappa f_k)^2`.
    pub bound_rhs: Option<f64>,
    pub status: BoundStatus,
}

/// `1 - cos^2` of the angle between `x` and `y`, clamped to `[0, 1]`.
pub fn angle_defect(x: &[f64], y: &[f64]) -> f64 {
    let dot: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    let nx: f64 = x.iter().map(|a| a * a).sum();
    let ny: f64 = y.iter().map(|a| a * a).sum();
    if nx == 0.0 || ny == 0.0 {
        return 0.0;
    }
    (1.0 - dot * dot / (nx * ny)).clamp(0.0, 1.0)
}

/// Root on `[0, 1]` of `2 alpha r^(2k+1) (1 + r) - k + (k + 1) r`, found by
/// bisection to absolute tolerance `1e-12`. The function is increasing with
/// value `-k` at 0 and `4 alpha + 1` at 1.
pub fn stability_root(alpha: f64, k: usize) -> f64 {
    let kf = k as f64;
    let g = |r: f64| 2.0 * alpha * r.powi(2 * k as i32 + 1) * (1.0 + r) - kf + (kf + 1.0) * r;
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `f_k = alpha r^(2k) (1 - r)^2 / (1 + alpha r^(2k) (1 + r)^2)`.
pub fn stability_fk(alpha: f64, r: f64, k: usize) -> f64 {
    let t = alpha * r.powi(2 * k as i32);
    t * (1.0 - r).powi(2) / (1.0 + t * (1.0 + r).powi(2))
}

/// Measures how parallel `x^(k)` and `x^(k+1)` are and, when the spectral
/// expansion of the start vector is supplied, evaluates the a-priori bound
/// on that quantity together with its hypotheses.
pub fn stability_report(
    g: &Graph,
    x_k: &[f64],
    x_k1: &[f64],
    expansion: Option<&SpectralExpansion<'_>>,
    cfg: &RelaxationConfig,
) -> Result<StabilityReport> {
    for v in [x_k, x_k1] {
        if v.len() != g.n() {
            return Err(Error::LengthMismatch {
                expected: g.n(),
                got: v.len(),
            });
        }
    }
    g.check_no_isolated()?;
    let d = g.weighted_degrees();
    let dmax = d.iter().cloned().fold(f64::MIN, f64::max);
    let dmin = d.iter().cloned().fold(f64::MAX, f64::min);
    let kappa = dmax / dmin;
    let angle_defect = angle_defect(x_k, x_k1);

    let mut report = StabilityReport {
        angle_defect,
        kappa,
        alpha: None,
        r_k: None,
        f_k: None,
        bound_rhs: None,
        status: BoundStatus::NoExpansion,
    };
    let Some(exp) = expansion else {
        return Ok(report);
    };
    let a = exp.coefficients;
    if a.len() != g.n() {
        return Err(Error::LengthMismatch {
            expected: g.n(),
            got: a.len(),
        });
    }
    let a1 = a[0];
    if a1 == 0.0 {
        report.status = BoundStatus::LeadingCoefficientZero;
        return Ok(report);
    }
    let alpha = a[1..].iter().map(|v| v * v).sum::<f64>() / (4.0 * a1 * a1);
    let k = cfg.iterations;
    let r = stability_root(alpha, k);
    let fk = stability_fk(alpha, r, k);
    let kf = kappa * fk;
    report.alpha = Some(alpha);
    report.r_k = Some(r);
    report.f_k = Some(fk);
    report.bound_rhs = Some(4.0 * kf / (1.0 + kf).powi(2));
    report.status = if 1.0 - cfg.omega * exp.mu_max < -OMEGA_SLACK {
        BoundStatus::OmegaTooLarge
    } else if fk > 1.0 / kappa {
        BoundStatus::FkAboveInverseKappa
    } else {
        BoundStatus::Applies
    };
    Ok(report)
}

/// Residual of the mutually reinforcing model `x = mu x + D^{-1} W x` at
/// the normalized vector: `|xh - mu xh - D^{-1} W xh|_2`, `xh = x / |x|_2`.
pub fn model_residual(g: &Graph, x: &[f64], mu: f64) -> Result<f64> {
    if x.len() != g.n() {
        return Err(Error::LengthMismatch {
            expected: g.n(),
            got: x.len(),
        });
    }
    g.check_no_isolated()?;
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::NonFinite("normalized vector"));
    }
    let xh: Vec<f64> = x.iter().map(|v| v / norm).collect();
    let mut sq = 0.0;
    for i in 0..g.n() {
        let avg: f64 = g.neighbors(i).map(|(j, w)| w * xh[j]).sum::<f64>() / g.weighted_degree(i);
        let r = xh[i] - mu * xh[i] - avg;
        sq += r * r;
    }
    Ok(sq.sqrt())
}
