//! Spectrum of `-L = I - p` on `L^2(mu)`, the Dirichlet form, and
//! Courant-Fischer test utilities.
//!
//! The chain is symmetrized to `S = D^{1/2} (I - p) D^{-1/2}` with
//! `D = diag(mu)` and diagonalized by cyclic Jacobi rotations, which converge
//! unconditionally on symmetric matrices. Keeping the eigensolver in-repo
//! makes results bit-reproducible across platforms.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::fmath;
use crate::space::{Ambient, ReversibleChain};
use crate::Result;

/// Off-diagonal Frobenius norm at which Jacobi sweeps stop.
pub const JACOBI_TOL: f64 = 1e-12;
/// Symmetrization residual above which the chain is rejected.
pub const SYMMETRY_TOL: f64 = 1e-8;

/// Ascending eigenvalues of `I - p`, with an optional mu-orthonormal
/// eigenbasis. Eigenvalues are kept with multiplicity; `lambda(k)` indexes
/// the raw sorted list.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
    eigenvectors: Option<Vec<Vec<f64>>>,
}

impl Spectrum {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// `lambda^(k)`, 0-indexed, counted with multiplicity.
    pub fn lambda(&self, k: usize) -> f64 {
        self.eigenvalues[k]
    }

    /// Eigenfunctions as vectors over states, orthonormal in the mu-weighted
    /// inner product; `eigenvectors()[k]` pairs with `lambda(k)`.
    pub fn eigenvectors(&self) -> Option<&[Vec<f64>]> {
        self.eigenvectors.as_deref()
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }
}

/// Eigenvalues and mu-orthonormal eigenfunctions of `I - p`.
pub fn spectrum(chain: &ReversibleChain) -> Result<Spectrum> {
    let n = chain.n();
    let mu = chain.mu_vec();
    let sqrt_mu: Vec<f64> = mu.iter().map(|&m| fmath::sqrt(m)).collect();
    let mut s = vec![vec![0.0f64; n]; n];
    for x in 0..n {
        for y in 0..n {
            let delta = if x == y { 1.0 } else { 0.0 };
            s[x][y] = (delta - chain.p(x, y)) * sqrt_mu[x] / sqrt_mu[y];
        }
    }
    let mut residual = 0.0f64;
    for x in 0..n {
        for y in 0..x {
            let d = fmath::abs(s[x][y] - s[y][x]);
            if d > residual {
                residual = d;
            }
        }
    }
    if residual > SYMMETRY_TOL {
        return Err(Error::NotReversible { residual });
    }
    for x in 0..n {
        for y in 0..x {
            let avg = 0.5 * (s[x][y] + s[y][x]);
            s[x][y] = avg;
            s[y][x] = avg;
        }
    }
    let (mut vals, vecs) = jacobi_eigen(s);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| vals[a].partial_cmp(&vals[b]).unwrap());
    vals = order.iter().map(|&i| vals[i]).collect();
    // back-transform: f = D^{-1/2} v stays orthonormal in L^2(mu)
    let eigenvectors = order
        .iter()
        .map(|&i| (0..n).map(|x| vecs[x][i] / sqrt_mu[x]).collect())
        .collect();
    Ok(Spectrum { eigenvalues: vals, eigenvectors: Some(eigenvectors) })
}

/// Cyclic Jacobi diagonalization of a symmetric matrix. Returns unsorted
/// eigenvalues and the orthogonal matrix whose columns are eigenvectors.
pub fn jacobi_eigen(mut a: Vec<Vec<f64>>) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    let mut v = vec![vec![0.0f64; n]; n];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    if n <= 1 {
        return (a.iter().enumerate().map(|(i, r)| r.get(i).copied().unwrap_or(0.0)).collect(), v);
    }
    for _sweep in 0..100 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in 0..p {
                off += a[p][q] * a[p][q];
            }
        }
        if fmath::sqrt(2.0 * off) < JACOBI_TOL {
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                if fmath::abs(a[p][q]) == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = if theta >= 0.0 {
                    1.0 / (theta + fmath::sqrt(1.0 + theta * theta))
                } else {
                    -1.0 / (-theta + fmath::sqrt(1.0 + theta * theta))
                };
                let c = 1.0 / fmath::sqrt(1.0 + t * t);
                let s = t * c;
                let tau = s / (1.0 + c);
                let apq = a[p][q];
                a[p][p] -= t * apq;
                a[q][q] += t * apq;
                a[p][q] = 0.0;
                a[q][p] = 0.0;
                for i in 0..n {
                    if i != p && i != q {
                        let aip = a[i][p];
                        let aiq = a[i][q];
                        a[i][p] = aip - s * (aiq + tau * aip);
                        a[i][q] = aiq + s * (aip - tau * aiq);
                        a[p][i] = a[i][p];
                        a[q][i] = a[i][q];
                    }
                }
                for row in v.iter_mut() {
                    let vip = row[p];
                    let viq = row[q];
                    row[p] = vip - s * (viq + tau * vip);
                    row[q] = viq + s * (vip - tau * viq);
                }
            }
        }
    }
    let vals = (0..n).map(|i| a[i][i]).collect();
    (vals, v)
}

/// The Dirichlet form
/// `E(f,g) = 1/2 sum_{x,y} (f(y)-f(x)) (g(y)-g(x)) p(x,y) mu(x)`,
/// which equals `<f, (I - p) g>_mu`.
pub fn dirichlet(chain: &ReversibleChain, f: &[f64], g: &[f64]) -> Result<f64> {
    let n = chain.n();
    if f.len() != n || g.len() != n {
        return Err(Error::DimensionMismatch);
    }
    let mut e = 0.0;
    for x in 0..n {
        for y in 0..n {
            e += 0.5 * (f[y] - f[x]) * (g[y] - g[x]) * chain.p(x, y) * chain.mu(x);
        }
    }
    Ok(e)
}

/// Exact supremum of the Rayleigh quotient `E(f,f) / mu(f^2)` over the span
/// of the given vectors: the top generalized eigenvalue of the two quadratic
/// forms restricted to the span. By Courant-Fischer this is an upper bound
/// on `lambda^(k)` for any `k+1` independent vectors.
pub fn rayleigh_sup_on_span(chain: &ReversibleChain, basis: &[Vec<f64>]) -> Result<f64> {
    let n = chain.n();
    let m = basis.len();
    if m == 0 || basis.iter().any(|b| b.len() != n) {
        return Err(Error::DimensionMismatch);
    }
    let mut energy = vec![vec![0.0f64; m]; m];
    let mut gram = vec![vec![0.0f64; m]; m];
    for i in 0..m {
        for j in 0..=i {
            energy[i][j] = dirichlet(chain, &basis[i], &basis[j])?;
            energy[j][i] = energy[i][j];
            let g: f64 = (0..n).map(|x| basis[i][x] * basis[j][x] * chain.mu(x)).sum();
            gram[i][j] = g;
            gram[j][i] = g;
        }
    }
    // reduce E v = lambda M v to ordinary form via M = R R^T
    let r = cholesky(&gram).ok_or(Error::DegenerateBasis)?;
    // W = R^{-1} E R^{-T}
    let mut w = vec![vec![0.0f64; m]; m];
    for col in 0..m {
        let rhs: Vec<f64> = (0..m).map(|i| energy[i][col]).collect();
        let x = forward_solve(&r, &rhs);
        for i in 0..m {
            w[i][col] = x[i];
        }
    }
    let mut wt = vec![vec![0.0f64; m]; m];
    for row in 0..m {
        let rhs: Vec<f64> = (0..m).map(|j| w[row][j]).collect();
        let x = forward_solve(&r, &rhs);
        for j in 0..m {
            wt[row][j] = x[j];
        }
    }
    for i in 0..m {
        for j in 0..i {
            let avg = 0.5 * (wt[i][j] + wt[j][i]);
            wt[i][j] = avg;
            wt[j][i] = avg;
        }
    }
    let (vals, _) = jacobi_eigen(wt);
    Ok(vals.into_iter().fold(f64::NEG_INFINITY, fmath::max))
}

/// Lower Cholesky factor, or `None` when the matrix is numerically singular.
fn cholesky(m: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = m.len();
    let scale = (0..n).map(|i| fmath::abs(m[i][i])).fold(0.0, fmath::max);
    let tol = 1e-12 * fmath::max(scale, 1e-300);
    let mut r = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = m[i][j];
            for k in 0..j {
                s -= r[i][k] * r[j][k];
            }
            if i == j {
                if s <= tol {
                    return None;
                }
                r[i][j] = fmath::sqrt(s);
            } else {
                r[i][j] = s / r[j][j];
            }
        }
    }
    Some(r)
}

fn forward_solve(l: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
    let n = l.len();
    let mut x = vec![0.0f64; n];
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= l[i][k] * x[k];
        }
        x[i] = s / l[i][i];
    }
    x
}
