//! Power-iteration estimates of the nontrivial adjacency spectrum of a
//! regular graph, and the certificates derived from them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::AuditError;
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralEstimate {
    pub d: usize,
    /// Second-largest adjacency eigenvalue.
    pub lambda2: f64,
    /// Smallest adjacency eigenvalue.
    pub lambda_min: f64,
    /// `max(|lambda2|, |lambda_min|)`.
    pub lambda: f64,
    pub iterations: usize,
    /// Largest `||M x - theta x||` of the two final Ritz pairs.
    pub residual: f64,
    /// `lambda_min = -d`: bipartite, and every mixing certificate is vacuous.
    pub bipartite: bool,
}

impl SpectralEstimate {
    /// `lambda` plus the residual, the value handed to certificates.
    pub fn certified_lambda(&self) -> f64 {
        (self.lambda + self.residual).min(self.d as f64)
    }
}

/// `y = (A + shift I) x` restricted to the complement of the all-ones vector.
fn apply(g: &Graph, x: &[f64], y: &mut [f64], shift: f64, sign: f64) {
    for (v, out) in y.iter_mut().enumerate() {
        let s: f64 = g.neighbors(v).iter().map(|&u| x[u as usize]).sum();
        *out = shift * x[v] + sign * s;
    }
    deflate(y);
}

fn deflate(x: &mut [f64]) {
    let mean = x.iter().sum::<f64>() / x.len() as f64;
    for xi in x.iter_mut() {
        *xi -= mean;
    }
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Largest eigenvalue of `shift I + sign A` on the complement of the
/// all-ones vector; that operator is positive semidefinite there.
fn top_eigenvalue(
    g: &Graph,
    shift: f64,
    sign: f64,
    tol: f64,
    max_iters: usize,
    rng: &mut ChaCha8Rng,
) -> Result<(f64, f64, usize), AuditError> {
    let n = g.n();
    let mut x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    deflate(&mut x);
    let scale = norm(&x);
    x.iter_mut().for_each(|v| *v /= scale);
    let mut y = vec![0.0; n];
    let mut residual = f64::INFINITY;
    for iteration in 1..=max_iters {
        apply(g, &x, &mut y, shift, sign);
        let theta: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        residual = x.iter().zip(&y).map(|(a, b)| (b - theta * a).powi(2)).sum::<f64>().sqrt();
        let len = norm(&y);
        if residual <= tol || len == 0.0 {
            return Ok((theta, residual, iteration));
        }
        for (xi, yi) in x.iter_mut().zip(&y) {
            *xi = yi / len;
        }
    }
    Err(AuditError::NonConvergence { iterations: max_iters, residual })
}

/// Estimates `lambda2`, `lambda_min` and `lambda` of a regular graph.
///
/// Both eigenvalues come from power iteration with the uniform direction
/// projected out: on `A + dI` for `lambda2` and on `dI - A` for
/// `lambda_min`. The Rayleigh quotients never overshoot the extreme
/// eigenvalues, so `lambda` is an estimate from below whose error is
/// controlled by the residual.
pub fn spectral_lambda(g: &Graph, tol: f64, max_iters: usize, seed: u64) -> Result<SpectralEstimate, AuditError> {
    let d = g.regular_degree().ok_or(AuditError::NotRegular)?;
    if g.n() < 2 {
        return Err(AuditError::InvalidParameter("need at least two vertices".into()));
    }
    if !(tol > 0.0) {
        return Err(AuditError::InvalidParameter(format!("tolerance {tol} must be positive")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let df = d as f64;
    let (top_plus, res_plus, it_plus) = top_eigenvalue(g, df, 1.0, tol, max_iters, &mut rng)?;
    let (top_minus, res_minus, it_minus) = top_eigenvalue(g, df, -1.0, tol, max_iters, &mut rng)?;
    let lambda2 = (top_plus - df).clamp(-df, df);
    let lambda_min = (df - top_minus).clamp(-df, df);
    let lambda = lambda2.abs().max(lambda_min.abs());
    Ok(SpectralEstimate {
        d,
        lambda2,
        lambda_min,
        lambda,
        iterations: it_plus + it_minus,
        residual: res_plus.max(res_minus),
        bipartite: (lambda_min + df).abs() <= tol.max(1e-9) * 10.0,
    })
}

fn check_lambda(d: f64, lambda: f64) -> Result<(), AuditError> {
    if !(0.0..=d).contains(&lambda) {
        return Err(AuditError::InvalidLambda { lambda, d });
    }
    Ok(())
}

fn check_size(n: usize, size: usize) -> Result<(), AuditError> {
    if size > n {
        return Err(AuditError::InvalidParameter(format!("set size {size} exceeds n = {n}")));
    }
    Ok(())
}

/// Window for `e(B, C)` between sets of the given sizes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixingInterval {
    /// `d |B| |C| / n`
    pub expected: f64,
    /// `lambda sqrt(|B| |C|)`
    pub slack: f64,
    pub lower: f64,
    pub upper: f64,
}

pub fn mixing_interval(n: usize, d: f64, lambda: f64, b: usize, c: usize) -> Result<MixingInterval, AuditError> {
    check_lambda(d, lambda)?;
    check_size(n, b)?;
    check_size(n, c)?;
    let expected = d * b as f64 * c as f64 / n as f64;
    let slack = lambda * (b as f64 * c as f64).sqrt();
    Ok(MixingInterval { expected, slack, lower: (expected - slack).max(0.0), upper: expected + slack })
}

/// Lower bound `(d - lambda) / n * |U| (n - |U|)` on `e(U, U^c)`.
pub fn alon_milman_bound(n: usize, d: f64, lambda: f64, size: usize) -> Result<f64, AuditError> {
    check_lambda(d, lambda)?;
    check_size(n, size)?;
    Ok((d - lambda) / n as f64 * size as f64 * (n - size) as f64)
}

/// Lower bound on `|N(U)|` from Tanner's bound on the full neighbourhood:
/// `|Gamma(U)| >= d^2 |U| / (lambda^2 + (d^2 - lambda^2) |U| / n)`, and
/// `N(U) = Gamma(U) \ U`.
pub fn tanner_bound(n: usize, d: f64, lambda: f64, size: usize) -> Result<f64, AuditError> {
    check_lambda(d, lambda)?;
    check_size(n, size)?;
    if size == 0 {
        return Ok(0.0);
    }
    let s = size as f64;
    let gamma = d * d * s / (lambda * lambda + (d * d - lambda * lambda) * s / n as f64);
    Ok((gamma - s).max(0.0))
}

/// Upper bound `(d |U|^2 / n + lambda |U| (1 - |U|/n)) / 2` on `e(U)`.
pub fn sparsity_upper_bound(n: usize, d: f64, lambda: f64, size: usize) -> Result<f64, AuditError> {
    check_lambda(d, lambda)?;
    check_size(n, size)?;
    let s = size as f64;
    Ok((d * s * s / n as f64 + lambda * s * (1.0 - s / n as f64)) / 2.0)
}
