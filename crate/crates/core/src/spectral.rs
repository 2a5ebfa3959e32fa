//! Dense spectral oracle for small graphs.
//!
//! Solves the generalized problem `L v = mu D v` through the normalized
//! Laplacian `D^{-1/2} L D^{-1/2}`, and provides general dense eigenvalues
//! for the (non-symmetric) splitting iteration matrices. Everything here is
//! `O(n^3)` and meant for `n` in the hundreds; the relaxation engine never
//! needs it.

use nalgebra::linalg::{Schur, SymmetricEigen};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::relax::{dense_laplacian, DENSE_LIMIT};

/// Eigenvalues below this are treated as zero when flagging disconnection.
const ZERO_EIGENVALUE: f64 = 1e-10;

/// Relative gap under which two pencil eigenvalues count as equal.
pub const DEGENERACY_TOLERANCE: f64 = 1e-8;

/// Eigen-decomposition of the pencil `(L, D)`.
///
/// Eigenvalues ascend (`mu[0] = 0`); column `i` of `vectors` is `v_i`,
/// normalized so that `V^T D V = I`, with its first non-negligible entry
/// positive.
#[derive(Clone, Debug)]
pub struct PencilEigen {
    pub mu: Vec<f64>,
    pub vectors: DMatrix<f64>,
    pub degrees: Vec<f64>,
    /// Set when `mu_2` is numerically zero.
    pub disconnected: bool,
}

/// An eigenvalue `sigma = 1 - omega mu` of the JOR iteration matrix,
/// with the index of the pencil eigenpair it comes from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JorEigenvalue {
    pub sigma: f64,
    pub pencil_index: usize,
}

pub fn pencil_eigen(g: &Graph) -> Result<PencilEigen> {
    let n = g.n();
    if n > DENSE_LIMIT {
        return Err(Error::TooLarge {
            what: "graph",
            size: n,
            limit: DENSE_LIMIT,
        });
    }
    g.check_no_isolated()?;
    let degrees = g.weighted_degrees().to_vec();
    let inv_sqrt: Vec<f64> = degrees.iter().map(|d| 1.0 / d.sqrt()).collect();
    let mut normalized = dense_laplacian(g)?;
    for i in 0..n {
        for j in 0..n {
            normalized[(i, j)] *= inv_sqrt[i] * inv_sqrt[j];
        }
    }
    let (mu, u) = symmetric_eigen(&normalized)?;
    let mut vectors = u;
    for c in 0..n {
        let mut col = vectors.column_mut(c);
        for i in 0..n {
            col[i] *= inv_sqrt[i];
        }
        let scale = col.amax();
        if let Some(first) = col.iter().copied().find(|v| v.abs() > 1e-10 * scale) {
            if first < 0.0 {
                col.neg_mut();
            }
        }
    }
    let disconnected = n >= 2 && mu[1].abs() < ZERO_EIGENVALUE;
    if disconnected {
        log::warn!(
            "pencil eigenvalue mu_2 = {:e} is numerically zero: graph is disconnected",
            mu[1]
        );
    }
    Ok(PencilEigen {
        mu,
        vectors,
        degrees,
        disconnected,
    })
}

impl PencilEigen {
    pub fn n(&self) -> usize {
        self.mu.len()
    }

    pub fn mu_max(&self) -> f64 {
        self.mu.last().copied().unwrap_or(0.0)
    }

    pub fn eigenvector(&self, i: usize) -> Vec<f64> {
        self.vectors.column(i).iter().copied().collect()
    }

    /// Coefficients `a = V^{-1} x = V^T D x` of `x` in the eigenbasis.
    pub fn expansion(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.n() {
            return Err(Error::LengthMismatch {
                expected: self.n(),
                got: x.len(),
            });
        }
        let dx = DVector::from_iterator(x.len(), x.iter().zip(&self.degrees).map(|(x, d)| x * d));
        Ok((self.vectors.transpose() * dx).iter().copied().collect())
    }

    /// `omega = 2 / (mu_2 + mu_n)`, where `|1 - omega mu_2| = |1 - omega mu_n|`.
    pub fn cutting_point(&self) -> f64 {
        2.0 / (self.mu[1] + self.mu_max())
    }

    /// Spectrum of `H_JOR(omega)`, sorted by decreasing magnitude (ties keep
    /// pencil order).
    pub fn jor_spectrum(&self, omega: f64) -> Vec<JorEigenvalue> {
        let mut s: Vec<JorEigenvalue> = self
            .mu
            .iter()
            .enumerate()
            .map(|(i, &m)| JorEigenvalue {
                sigma: 1.0 - omega * m,
                pencil_index: i,
            })
            .collect();
        s.sort_by(|a, b| b.sigma.abs().total_cmp(&a.sigma.abs()));
        s
    }

    /// The dominant non-constant JOR eigenvalue `sigma_2(omega)`.
    pub fn sigma2(&self, omega: f64) -> Option<JorEigenvalue> {
        self.jor_spectrum(omega).get(1).copied()
    }

    /// Whether `mu_2 != mu_3 != mu_{n-1} != mu_n` fails (adjacent entries of
    /// that chain compared with a relative tolerance).
    pub fn is_degenerate(&self) -> bool {
        let n = self.n();
        if n < 3 {
            return false;
        }
        let chain = [self.mu[1], self.mu[2], self.mu[n - 2], self.mu[n - 1]];
        chain.windows(2).any(|w| {
            let scale = w[0].abs().max(w[1].abs()).max(1e-300);
            (w[0] - w[1]).abs() <= DEGENERACY_TOLERANCE * scale
        })
    }

    /// Index of the pencil eigenvector spanning the limit direction of the
    /// normalized distances: `1` (i.e. `v_2`) below the cutting point,
    /// `n - 1` (`v_n`) above it.
    pub fn limit_index(&self, omega: f64) -> usize {
        if omega < self.cutting_point() {
            1
        } else {
            self.n() - 1
        }
    }
}

/// One point of the convergence-factor curve.
#[derive(Clone, Debug, PartialEq)]
pub struct ThetaPoint {
    pub omega: f64,
    /// `|sigma_{t+1} / sigma_2|`; `None` where the two largest non-constant
    /// magnitudes coincide with opposite signs (the cutting point).
    pub theta: Option<f64>,
    /// Pencil index of the eigenvector the normalized distances align with.
    pub limit_index: usize,
    /// Spectrum violates the distinctness assumption.
    pub degenerate: bool,
    /// `omega` lies outside `(0, 2 / mu_n)`.
    pub out_of_range: bool,
}

/// `theta(omega)`: rate at which normalized distances approach their limit.
pub fn theta_curve(eig: &PencilEigen, omegas: &[f64]) -> Vec<ThetaPoint> {
    let degenerate = eig.is_degenerate();
    if degenerate {
        log::warn!("pencil spectrum is degenerate; theta values are indicative only");
    }
    omegas
        .iter()
        .map(|&omega| {
            let spec = eig.jor_spectrum(omega);
            let out_of_range = !(omega > 0.0 && omega < 2.0 / eig.mu_max());
            let theta = theta_at(&spec);
            ThetaPoint {
                omega,
                theta,
                limit_index: eig.limit_index(omega),
                degenerate,
                out_of_range,
            }
        })
        .collect()
}

fn theta_at(spec: &[JorEigenvalue]) -> Option<f64> {
    let Some(s2) = spec.get(1).map(|e| e.sigma) else {
        return Some(0.0);
    };
    if s2 == 0.0 {
        return Some(0.0);
    }
    let tol = 1e-12 * s2.abs();
    for e in &spec[2..] {
        if (e.sigma - s2).abs() <= tol {
            // repeated sigma_2: skip to sigma_{t+1}
            continue;
        }
        if (e.sigma.abs() - s2.abs()).abs() <= tol {
            return None;
        }
        return Some(e.sigma.abs() / s2.abs());
    }
    Some(0.0)
}

/// Relative deflation thresholds tried in turn. Francis iterations at
/// machine epsilon can stall on spectra with many repeated eigenvalues
/// (trees, for instance); a few ulps more always converged in testing and
/// perturbs eigenvalues by far less than any tolerance used here.
const DEFLATION_TOLERANCES: [f64; 3] = [1e-14, 1e-13, 1e-12];
const MAX_SWEEPS_PER_ROW: usize = 30;

/// Symmetric eigen-decomposition, eigenvalues ascending with matching
/// orthonormal eigenvector columns.
pub fn symmetric_eigen(m: &DMatrix<f64>) -> Result<(Vec<f64>, DMatrix<f64>)> {
    check_dense(m)?;
    let n = m.nrows();
    let eig = DEFLATION_TOLERANCES
        .iter()
        .find_map(|&eps| SymmetricEigen::try_new(m.clone(), eps, MAX_SWEEPS_PER_ROW * n.max(1)))
        .ok_or(Error::NoConvergence("symmetric eigensolver"))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok((values, vectors))
}

/// All eigenvalues of a general real square matrix (real Schur form).
pub fn dense_eigenvalues(m: &DMatrix<f64>) -> Result<Vec<Complex64>> {
    check_dense(m)?;
    let n = m.nrows();
    let schur = DEFLATION_TOLERANCES
        .iter()
        .find_map(|&eps| Schur::try_new(m.clone(), eps, MAX_SWEEPS_PER_ROW * n.max(1)))
        .ok_or(Error::NoConvergence("Schur decomposition"))?;
    Ok(schur.complex_eigenvalues().iter().copied().collect())
}

/// Largest eigenvalue modulus.
pub fn spectral_radius(m: &DMatrix<f64>) -> Result<f64> {
    Ok(dense_eigenvalues(m)?.iter().map(|z| z.norm()).fold(0.0, f64::max))
}

fn check_dense(m: &DMatrix<f64>) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::LengthMismatch {
            expected: m.nrows(),
            got: m.ncols(),
        });
    }
    if m.nrows() > DENSE_LIMIT {
        return Err(Error::TooLarge {
            what: "matrix",
            size: m.nrows(),
            limit: DENSE_LIMIT,
        });
    }
    if m.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("dense matrix"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relax::{iteration_matrix, Splitting};
    use approx::assert_abs_diff_eq;

    fn path3() -> Graph {
        Graph::from_edges(3, [(0, 1, 1.0), (1, 2, 1.0)]).unwrap()
    }

    fn c4() -> Graph {
        Graph::from_edges(4, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 0, 1.0)]).unwrap()
    }

    #[test]
    fn p3_pencil() {
        let e = pencil_eigen(&path3()).unwrap();
        assert_abs_diff_eq!(e.mu[0], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(e.mu[1], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(e.mu[2], 2.0, epsilon = 1e-12);
        // v_2 is proportional to (1, 0, -1), D-normalized: (1, 0, -1)/sqrt(2).
        let v2 = e.eigenvector(1);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(v2[0], h, epsilon = 1e-12);
        assert_abs_diff_eq!(v2[1], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(v2[2], -h, epsilon = 1e-12);
        // v_1 = 1/2 * 1 (1^T D 1 = 4).
        for v in e.eigenvector(0) {
            assert_abs_diff_eq!(v, 0.5, epsilon = 1e-12);
        }
        assert!(!e.disconnected);
    }

    #[test]
    fn k2_pencil() {
        let g = Graph::from_edges(2, [(0, 1, 1.0)]).unwrap();
        let e = pencil_eigen(&g).unwrap();
        assert_abs_diff_eq!(e.mu[0], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(e.mu[1], 2.0, epsilon = 1e-12);
    }

    #[test]
    fn d_orthonormal_and_back_substitution() {
        let g = Graph::from_edges(
            5,
            [(0, 1, 1.0), (1, 2, 2.5), (2, 3, 0.5), (3, 4, 1.0), (4, 0, 3.0), (1, 3, 0.7)],
        )
        .unwrap();
        let e = pencil_eigen(&g).unwrap();
        let d = DMatrix::from_diagonal(&DVector::from_vec(e.degrees.clone()));
        let gram = e.vectors.transpose() * &d * &e.vectors;
        assert_abs_diff_eq!(gram, DMatrix::identity(5, 5), epsilon = 1e-10);
        let l = dense_laplacian(&g).unwrap();
        for i in 0..5 {
            let v = e.vectors.column(i);
            let r = &l * v - (&d * v) * e.mu[i];
            assert!(r.norm() <= 1e-8 * l.norm());
        }
        assert!(e.mu_max() <= 2.0 + 1e-12);
    }

    #[test]
    fn disconnected_flagged() {
        let g = Graph::from_edges(4, [(0, 1, 1.0), (2, 3, 1.0)]).unwrap();
        assert!(pencil_eigen(&g).unwrap().disconnected);
    }

    #[test]
    fn p3_theta_is_zero_at_half() {
        let e = pencil_eigen(&path3()).unwrap();
        let pts = theta_curve(&e, &[0.5]);
        assert_abs_diff_eq!(pts[0].theta.unwrap(), 0.0, epsilon = 1e-12);
        assert_eq!(pts[0].limit_index, 1);
        let s2 = e.sigma2(0.5).unwrap();
        assert_abs_diff_eq!(s2.sigma, 0.5, epsilon = 1e-12);
        assert_eq!(s2.pencil_index, 1);
    }

    #[test]
    fn theta_approaches_one_at_cutting_point() {
        let g = Graph::from_edges(
            6,
            [
                (0, 1, 1.0),
                (1, 2, 2.0),
                (2, 3, 1.0),
                (3, 4, 0.5),
                (4, 5, 1.0),
                (0, 2, 0.3),
                (3, 5, 0.8),
            ],
        )
        .unwrap();
        let e = pencil_eigen(&g).unwrap();
        assert!(!e.is_degenerate());
        let c = e.cutting_point();
        let pts = theta_curve(&e, &[c - 1e-3, c - 1e-6, c, c + 1e-6]);
        let t1 = pts[0].theta.unwrap();
        let t2 = pts[1].theta.unwrap();
        assert!(t1 < t2 && t2 < 1.0 && t2 > 0.999);
        assert_eq!(pts[1].limit_index, 1);
        assert_eq!(pts[3].limit_index, 5);
        assert!(pts[2].theta.is_none() || pts[2].theta.unwrap() > 0.999_999);
    }

    #[test]
    fn star_is_degenerate() {
        let g = Graph::from_edges(5, (1..5).map(|i| (0, i, 1.0))).unwrap();
        let e = pencil_eigen(&g).unwrap();
        assert!(e.is_degenerate());
        assert!(theta_curve(&e, &[0.5])[0].degenerate);
    }

    #[test]
    fn dense_identity() {
        let ev = dense_eigenvalues(&DMatrix::identity(3, 3)).unwrap();
        for z in ev {
            assert_abs_diff_eq!(z.re, 1.0, epsilon = 1e-14);
            assert_abs_diff_eq!(z.im, 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn jacobi_on_c4() {
        // Cycle spectrum: cos(2 pi l / 4) = {1, 0, -1, 0}.
        let h = iteration_matrix(&c4(), Splitting::Jacobi, 1.0).unwrap();
        let mut ev: Vec<f64> = dense_eigenvalues(&h).unwrap().iter().map(|z| z.re).collect();
        ev.sort_by(f64::total_cmp);
        let expected = [-1.0, 0.0, 0.0, 1.0];
        for (a, b) in ev.iter().zip(expected) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-10);
        }
    }

    #[test]
    fn jor_p3_eigenvalues() {
        let h = iteration_matrix(&path3(), Splitting::Jor, 0.5).unwrap();
        let mut ev: Vec<f64> = dense_eigenvalues(&h).unwrap().iter().map(|z| z.re).collect();
        ev.sort_by(|a, b| b.total_cmp(a));
        for (a, b) in ev.iter().zip([1.0, 0.5, 0.0]) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn rejects_non_finite() {
        let mut m = DMatrix::identity(2, 2);
        m[(0, 1)] = f64::NAN;
        assert!(matches!(dense_eigenvalues(&m), Err(Error::NonFinite(_))));
    }

    #[test]
    fn expansion_reconstructs() {
        let g = Graph::from_edges(4, [(0, 1, 1.0), (1, 2, 2.0), (2, 3, 0.5), (0, 2, 3.0)]).unwrap();
        let e = pencil_eigen(&g).unwrap();
        let x = [0.3, -0.1, 0.25, 0.7];
        let a = e.expansion(&x).unwrap();
        let back = &e.vectors * DVector::from_vec(a);
        for i in 0..4 {
            assert_abs_diff_eq!(back[i], x[i], epsilon = 1e-12);
        }
    }
}
