//! Galton-Watson fixed points and the closed-form thresholds built on them.
//!
//! With offspring distribution `Bin(d - 1, p)` the extinction probability
//! `q` is the smallest fixed point of `f(q) = (1 - p + p q)^(d - 1)` in
//! `[0, 1]`. The bond survival probability of the root of the infinite
//! `d`-regular tree is `y = 1 - (1 - p + p q)^d = 1 - q (1 - p) - p q^2`
//! and the site survival probability is `x = p y`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::ErrorKind;

/// Fixed-point iterations before switching to Newton steps.
const PLAIN_ITERATIONS: usize = 64;
const MAX_ITERATIONS: usize = 100_000;
pub const DEFAULT_TOLERANCE: f64 = 1e-13;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GwError {
    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(f64),
    #[error("degree {0} must be at least 2")]
    InvalidDegree(usize),
    #[error("tolerance {0} must be positive")]
    InvalidTolerance(f64),
    #[error("fixed-point iteration did not reach residual {tol} within {iterations} steps")]
    NonConvergence { iterations: usize, tol: f64 },
    #[error("sprinkle probability s/d = {p2} exceeds p = {p}")]
    SprinkleTooLarge { p: f64, p2: f64 },
    #[error("degenerate threshold denominator: ((1-delta)/(1+delta)) alpha = {0} <= 1")]
    DegenerateDenominator(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl GwError {
    pub fn kind(&self) -> ErrorKind {
        match self {
            GwError::NonConvergence { .. } => ErrorKind::Runtime,
            _ => ErrorKind::Validation,
        }
    }
}

/// Which supercriticality convention `epsilon` is recorded in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DegreeMode {
    /// Bounded degree: `p = (1 + eps) / (d - 1)`.
    #[default]
    Constant,
    /// Growing degree: `p = (1 + eps) / d`.
    Growing,
}

impl DegreeMode {
    pub fn epsilon(self, d: usize, p: f64) -> f64 {
        match self {
            DegreeMode::Constant => (d - 1) as f64 * p - 1.0,
            DegreeMode::Growing => d as f64 * p - 1.0,
        }
    }

    pub fn retention(self, d: usize, eps: f64) -> f64 {
        match self {
            DegreeMode::Constant => (1.0 + eps) / (d - 1) as f64,
            DegreeMode::Growing => (1.0 + eps) / d as f64,
        }
    }
}

/// Smallest fixed point `q` of `f(q) = (1 - p + p q)^(d - 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extinction {
    pub q: f64,
    pub iterations: usize,
    /// `|q - f(q)|`
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GwSolution {
    pub d: usize,
    pub p: f64,
    pub mode: DegreeMode,
    pub epsilon: f64,
    pub q: f64,
    pub y: f64,
    pub x: f64,
    pub iterations: usize,
    pub residual: f64,
}

fn check_inputs(d: usize, p: f64) -> Result<(), GwError> {
    if d < 2 {
        return Err(GwError::InvalidDegree(d));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(GwError::InvalidProbability(p));
    }
    Ok(())
}

#[inline]
fn offspring_pgf(d: usize, p: f64, q: f64) -> f64 {
    (1.0 - p + p * q).powi((d - 1) as i32)
}

/// Extinction probability of the `Bin(d - 1, p)` Galton-Watson tree.
///
/// Critical and subcritical parameters (`(d - 1) p <= 1`) return `q = 1`
/// exactly. Otherwise iteration starts at `q = 0` and climbs monotonically to
/// the smallest fixed point; after a fixed number of plain steps it switches
/// to Newton steps on `f(q) - q`, which stay below the root because the
/// function is convex.
pub fn solve_q(d: usize, p: f64, tol: f64) -> Result<Extinction, GwError> {
    check_inputs(d, p)?;
    if tol.is_nan() || tol <= 0.0 {
        return Err(GwError::InvalidTolerance(tol));
    }
    if (d - 1) as f64 * p <= 1.0 {
        return Ok(Extinction { q: 1.0, iterations: 0, residual: 0.0 });
    }
    let mut q = 0.0f64;
    for iteration in 1..=MAX_ITERATIONS {
        let fq = offspring_pgf(d, p, q);
        let residual = (fq - q).abs();
        if residual <= tol {
            return Ok(Extinction { q, iterations: iteration - 1, residual });
        }
        let next = if iteration <= PLAIN_ITERATIONS {
            fq
        } else {
            let slope = (d - 1) as f64 * p * (1.0 - p + p * q).powi((d - 2) as i32) - 1.0;
            let newton = q - (fq - q) / slope;
            // the tangent of the convex map f(q) - q crosses zero below the root
            if newton.is_finite() && newton > fq { newton } else { fq }
        };
        if next <= q {
            // no further progress representable
            return Ok(Extinction { q, iterations: iteration, residual });
        }
        q = next;
    }
    Err(GwError::NonConvergence { iterations: MAX_ITERATIONS, tol })
}

/// Full `(q, y, x)` record at retention probability `p`.
pub fn solve(d: usize, p: f64, mode: DegreeMode, tol: f64) -> Result<GwSolution, GwError> {
    let ext = solve_q(d, p, tol)?;
    let q = ext.q;
    let y = bond_survival_from_q(p, q);
    debug_assert!((y - (1.0 - (1.0 - p + p * q).powi(d as i32))).abs() <= 1e-9);
    Ok(GwSolution {
        d,
        p,
        mode,
        epsilon: mode.epsilon(d, p),
        q,
        y,
        x: p * y,
        iterations: ext.iterations,
        residual: ext.residual,
    })
}

#[inline]
fn bond_survival_from_q(p: f64, q: f64) -> f64 {
    (1.0 - q * (1.0 - p) - p * q * q).clamp(0.0, 1.0)
}

/// Probability that the root of the infinite `d`-regular tree lies in an
/// infinite cluster after `p`-bond percolation.
pub fn survival_y(d: usize, p: f64) -> Result<f64, GwError> {
    Ok(solve(d, p, DegreeMode::Constant, DEFAULT_TOLERANCE)?.y)
}

/// Site-percolation counterpart `x = p y`.
pub fn site_survival_x(d: usize, p: f64) -> Result<f64, GwError> {
    Ok(solve(d, p, DegreeMode::Constant, DEFAULT_TOLERANCE)?.x)
}

/// Both algebraic forms of `y`: `1 - (1-p+pq)^d` and `1 - q(1-p) - p q^2`.
pub fn survival_y_forms(d: usize, p: f64) -> Result<(f64, f64), GwError> {
    let q = solve_q(d, p, DEFAULT_TOLERANCE)?.q;
    Ok((1.0 - (1.0 - p + p * q).powi(d as i32), bond_survival_from_q(p, q)))
}

/// Both algebraic forms of `x`: `p y` and `p - p q (1-p) - p^2 q^2`.
pub fn site_survival_x_forms(d: usize, p: f64) -> Result<(f64, f64), GwError> {
    let q = solve_q(d, p, DEFAULT_TOLERANCE)?.q;
    let expanded = p - p * q * (1.0 - p) - p * p * q * q;
    Ok((p * bond_survival_from_q(p, q), expanded.max(0.0)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticSurvival {
    pub y: f64,
    pub residual: f64,
    /// `false` when `eps <= 0`; `y` is then 0.
    pub supercritical: bool,
}

/// Root `y` in `(0, 1)` of `1 - y = exp(-(1 + eps) y)`, by bisection.
pub fn solve_y_asymptotic(eps: f64, tol: f64) -> Result<AsymptoticSurvival, GwError> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(GwError::InvalidTolerance(tol));
    }
    if eps.is_nan() {
        return Err(GwError::InvalidParameter("eps is NaN".into()));
    }
    if eps <= 0.0 {
        return Ok(AsymptoticSurvival { y: 0.0, residual: 0.0, supercritical: false });
    }
    let rate = 1.0 + eps;
    let g = |y: f64| 1.0 - y - (-rate * y).exp();
    // g > 0 just above 0 and g(1) < 0; shrink the lower end until g > 0
    let mut lo = tol.min(0.5);
    while g(lo) <= 0.0 && lo > f64::MIN_POSITIVE {
        lo *= 0.5;
    }
    let mut hi = 1.0;
    if g(hi).abs() <= tol {
        return Ok(AsymptoticSurvival { y: hi, residual: g(hi).abs(), supercritical: true });
    }
    let mut mid = 0.5 * (lo + hi);
    for _ in 0..2000 {
        mid = 0.5 * (lo + hi);
        let gm = g(mid);
        if gm.abs() <= tol * 1e-3 || hi - lo <= f64::EPSILON * mid {
            break;
        }
        if gm > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let residual = g(mid).abs();
    Ok(AsymptoticSurvival { y: mid, residual, supercritical: true })
}

/// Retention probabilities of a two-round exposure.
///
/// The complements are stored as computed so that
/// `(1 - p1)(1 - p2) = 1 - p` survives rounding even when `p` is close to 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SprinkleSplit {
    pub p1: f64,
    pub p2: f64,
    pub p1_complement: f64,
    pub p2_complement: f64,
}

/// `p2 = s / d` and `p1` with `(1 - p1)(1 - p2) = 1 - p`.
pub fn sprinkle_split(p: f64, s: f64, d: f64) -> Result<SprinkleSplit, GwError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(GwError::InvalidProbability(p));
    }
    if !(s >= 0.0) || !(d > 0.0) {
        return Err(GwError::InvalidParameter(format!("need s >= 0 and d > 0, got s = {s}, d = {d}")));
    }
    let p2 = s / d;
    if p2 > p {
        return Err(GwError::SprinkleTooLarge { p, p2 });
    }
    let p2_complement = 1.0 - p2;
    let (p1, p1_complement) = if p2 == 0.0 {
        (p, 1.0 - p)
    } else if p2_complement == 0.0 {
        (1.0, 0.0)
    } else {
        let c = (1.0 - p) / p2_complement;
        (1.0 - c, c)
    };
    Ok(SprinkleSplit { p1, p2, p1_complement, p2_complement })
}

/// Size cut-off separating "small" from "large" components.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum ThresholdMode {
    /// `(100 / eps^2) ln n`.
    Growing { eps: f64 },
    /// `9 alpha / (((1-delta)/(1+delta)) alpha - 1)^2 ln n`.
    Constant { alpha: f64, delta: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdSpec {
    pub mode: ThresholdMode,
    pub n: f64,
    pub value: f64,
}

pub fn small_component_threshold(mode: ThresholdMode, n: f64) -> Result<ThresholdSpec, GwError> {
    if !(n > 1.0) {
        return Err(GwError::InvalidParameter(format!("vertex count {n} must exceed 1")));
    }
    let value = match mode {
        ThresholdMode::Growing { eps } => {
            if !(eps > 0.0) {
                return Err(GwError::InvalidParameter(format!("eps = {eps} must be positive")));
            }
            100.0 / (eps * eps) * n.ln()
        }
        ThresholdMode::Constant { alpha, delta } => {
            if !(0.0..1.0).contains(&delta) {
                return Err(GwError::InvalidParameter(format!("delta = {delta} outside [0, 1)")));
            }
            let effective = (1.0 - delta) / (1.0 + delta) * alpha;
            if effective <= 1.0 {
                return Err(GwError::DegenerateDenominator(effective));
            }
            9.0 * alpha / ((effective - 1.0) * (effective - 1.0)) * n.ln()
        }
    };
    Ok(ThresholdSpec { mode, n, value })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailBound {
    /// `3 eps k d exp(-eps^2 k / 25)`
    pub raw: f64,
    /// `raw` clamped to `[0, 1]`.
    pub clamped: f64,
    /// `k >= 50 / eps^2`, the range in which the bound is claimed.
    pub in_scope: bool,
}

/// Upper bound on the probability that the components of a fixed set have
/// total size exactly `k`.
pub fn component_tail_bound(eps: f64, d: usize, k: f64) -> TailBound {
    let raw = 3.0 * eps * k * d as f64 * (-(eps * eps) / 25.0 * k).exp();
    TailBound { raw, clamped: raw.clamp(0.0, 1.0), in_scope: eps > 0.0 && k >= 50.0 / (eps * eps) }
}

/// Expected number of isolated medium components in the clustered
/// construction, `n^0.9 / (200 b^2 d^4 ln^2 n)`.
pub fn counterexample_expectation(n: f64, d: f64, b: f64) -> f64 {
    let ln = n.ln();
    n.powf(0.9) / (200.0 * b * b * d.powi(4) * ln * ln)
}
