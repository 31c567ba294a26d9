//! Audits of the expansion inequalities that make up a property profile.
//!
//! Every property has the form "for every `U` with `|U| <= scope`,
//! `q(U) >= t(|U|) |U|`" (or `<=` for the density property), where `q` is
//! one of the [`Quantity`] values and the ratio `t` is non-increasing in
//! `|U|`. Sizes up to the cap are settled exactly:
//!
//! 1. a degree certificate valid for every set of that size, or else
//! 2. a search over connected sets that skips a branch once no extension
//!    of the current set up to the cap can break the inequality.
//!
//! The search is complete for violations: a violating set has a connected
//! piece (in the connectivity matching its quantity) whose own ratio is no
//! better, and by monotonicity of `t` that piece violates too; every
//! ancestor of that piece in the enumeration is one of its subsets, and the
//! skipping rule only fires when every superset up to the cap satisfies
//! the inequality. Sizes beyond the cap can only be certified from a
//! spectral estimate.

use serde::{Deserialize, Serialize};

use super::enumerate::{run_anchors, SetVisitor};
use super::extrema::{better, set_quantities, SetQuantities, Tracker};
use super::spectral::{alon_milman_bound, sparsity_upper_bound, tanner_bound};
use super::{AuditError, Quantity, DEFAULT_BUDGET};
use crate::graph::Graph;

/// Absolute slack for comparing integer counts with real thresholds.
const SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProfileMode {
    /// Growing degree: global edge expansion, local vertex expansion and
    /// near-perfect local edge expansion.
    P,
    /// The clustered counterexample: global edge expansion plus
    /// `(1 - alpha) d` local vertex and edge expansion.
    Q,
    /// Bounded degree: global edge expansion plus local sparsity.
    R,
    /// The hypercube edge-isoperimetric inequality
    /// `e(U, U^c) >= |U| (d - log2 |U|)`.
    Harper,
}

/// Spectral data usable as a certificate for the audited graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerSpectrum {
    pub label: String,
    pub degree: f64,
    /// Bound on the nontrivial eigenvalues in absolute value.
    pub lambda: f64,
    /// `true` for the audited graph itself, `false` for a spanning
    /// subgraph (which only yields lower bounds on boundaries).
    pub own_graph: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpansionProfile {
    pub mode: ProfileMode,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub alpha: f64,
    #[serde(rename = "C")]
    pub big_c: f64,
    pub eps: f64,
    pub b: f64,
    /// Scope constant of the local vertex-expansion property in mode Q.
    pub c: f64,
    pub delta: f64,
    /// Largest set size settled exactly.
    pub cap: usize,
    pub budget: u64,
    pub spectra: Vec<LayerSpectrum>,
}

impl ExpansionProfile {
    pub fn new(mode: ProfileMode, cap: usize) -> Self {
        ExpansionProfile {
            mode,
            c1: 1.0,
            c2: 0.5,
            c3: 1.0,
            alpha: 0.5,
            big_c: 1.0,
            eps: 0.5,
            b: 2.0,
            c: 0.1,
            delta: 0.1,
            cap,
            budget: DEFAULT_BUDGET,
            spectra: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<(), AuditError> {
        let bad = |msg: String| Err(AuditError::InvalidParameter(msg));
        if self.cap == 0 {
            return bad("cap must be at least 1".into());
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return bad(format!("alpha = {} outside (0, 1]", self.alpha));
        }
        for (name, value) in [
            ("c1", self.c1),
            ("c2", self.c2),
            ("c3", self.c3),
            ("C", self.big_c),
            ("eps", self.eps),
            ("b", self.b),
            ("c", self.c),
            ("delta", self.delta),
        ] {
            if !(value > 0.0) || !value.is_finite() {
                return bad(format!("{name} = {value} must be positive"));
            }
        }
        for layer in &self.spectra {
            if !(0.0..=layer.degree).contains(&layer.lambda) {
                return Err(AuditError::InvalidLambda { lambda: layer.lambda, d: layer.degree });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Threshold {
    Constant(f64),
    Harper(f64),
}

impl Threshold {
    fn ratio(self, s: usize) -> f64 {
        match self {
            Threshold::Constant(t) => t,
            Threshold::Harper(d) => d - (s as f64).log2(),
        }
    }
}

struct PropertySpec {
    name: &'static str,
    quantity: Quantity,
    threshold: Threshold,
    scope: f64,
    statement: String,
}

fn properties(profile: &ExpansionProfile, n: usize, d: f64) -> Vec<PropertySpec> {
    let ln = (n as f64).ln();
    let half = (n / 2) as f64;
    let global = |name, t: f64| PropertySpec {
        name,
        quantity: Quantity::EdgeBoundary,
        threshold: Threshold::Constant(t),
        scope: half,
        statement: format!("e(U,U^c) >= {t} |U| for |U| <= n/2"),
    };
    let p = profile;
    match p.mode {
        ProfileMode::P => {
            let t2 = p.c2 * d.powf(p.alpha);
            let s2 = p.c3 * d.powf(1.0 - p.alpha) * ln;
            let t3 = (1.0 - p.eps * p.eps / 1000.0) * d;
            let s3 = 4.0 * d.powf(4.0 / p.alpha + 2.0) * ln.powf(p.big_c);
            vec![
                global("P1", p.c1),
                PropertySpec {
                    name: "P2",
                    quantity: Quantity::VertexBoundary,
                    threshold: Threshold::Constant(t2),
                    scope: s2,
                    statement: format!("|N(U)| >= {t2} |U| for |U| <= {s2}"),
                },
                PropertySpec {
                    name: "P3",
                    quantity: Quantity::EdgeBoundary,
                    threshold: Threshold::Constant(t3),
                    scope: s3,
                    statement: format!("e(U,U^c) >= {t3} |U| for |U| <= {s3}"),
                },
            ]
        }
        ProfileMode::Q => {
            let t = (1.0 - p.alpha) * d;
            let s2 = p.c * d * ln;
            let s3 = p.alpha / 2.0 * d * d * ln;
            vec![
                global("Q1", p.b),
                PropertySpec {
                    name: "Q2",
                    quantity: Quantity::VertexBoundary,
                    threshold: Threshold::Constant(t),
                    scope: s2,
                    statement: format!("|N(U)| >= {t} |U| for |U| <= {s2}"),
                },
                PropertySpec {
                    name: "Q3",
                    quantity: Quantity::EdgeBoundary,
                    threshold: Threshold::Constant(t),
                    scope: s3,
                    statement: format!("e(U,U^c) >= {t} |U| for |U| <= {s3}"),
                },
            ]
        }
        ProfileMode::R => {
            let t = 1.0 + p.delta;
            let s2 = ln.powf(p.big_c);
            vec![
                global("R1", p.b),
                PropertySpec {
                    name: "R2",
                    quantity: Quantity::InternalEdges,
                    threshold: Threshold::Constant(t),
                    scope: s2,
                    statement: format!("e(U) <= {t} |U| for |U| <= {s2}"),
                },
            ]
        }
        ProfileMode::Harper => vec![PropertySpec {
            name: "H",
            quantity: Quantity::EdgeBoundary,
            threshold: Threshold::Harper(d),
            scope: half,
            statement: format!("e(U,U^c) >= |U| ({d} - log2 |U|) for |U| <= n/2"),
        }],
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PropertyStatus {
    /// Every size up to the cap is settled; nothing beyond it is claimed
    /// unless the cap reaches the scope.
    VerifiedToCap,
    /// Settled up to the cap, and the rest of the scope is covered by a
    /// spectral certificate.
    SpectrallyCertified,
    /// The search budget ran out before every size was settled.
    Partial,
    /// A witness set breaks the inequality.
    Violated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SizeFinding {
    pub size: usize,
    /// `t(size)`.
    pub threshold: f64,
    /// `"degree"` or `"search"`.
    pub settled_by: String,
    /// Worst ratio among the examined connected sets of this size.
    pub worst_ratio: Option<f64>,
    pub worst_witness: Option<Vec<u32>>,
    /// `true` when every connected set of this size was examined.
    pub exhaustive: bool,
    /// A set meeting the inequality with equality, if one was seen.
    pub tight_witness: Option<Vec<u32>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub size: usize,
    pub value: usize,
    pub ratio: f64,
    pub threshold: f64,
    pub witness: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub name: String,
    pub statement: String,
    pub quantity: Quantity,
    pub scope: f64,
    pub cap: usize,
    pub status: PropertyStatus,
    pub findings: Vec<SizeFinding>,
    pub visited: u64,
    pub violation: Option<Violation>,
    /// Label of the spectrum that certified the sizes beyond the cap.
    pub certified_by: Option<String>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub n: usize,
    pub d: usize,
    pub profile: ExpansionProfile,
    pub properties: Vec<PropertyReport>,
}

impl AuditReport {
    pub fn property(&self, name: &str) -> Option<&PropertyReport> {
        self.properties.iter().find(|p| p.name == name)
    }

    pub fn any_violation(&self) -> bool {
        self.properties.iter().any(|p| p.status == PropertyStatus::Violated)
    }
}

fn violates(minimise: bool, value: usize, total: f64) -> bool {
    if minimise { (value as f64) < total - SLACK } else { (value as f64) > total + SLACK }
}

/// Degree-only bound on `q(U)` valid for every set of size `s`.
fn degree_bound(quantity: Quantity, s: usize, min_deg: usize, max_deg: usize) -> f64 {
    let spare = (min_deg + 1).saturating_sub(s) as f64;
    match quantity {
        Quantity::EdgeBoundary => s as f64 * spare,
        Quantity::VertexBoundary => spare,
        Quantity::InternalEdges => ((s * s.saturating_sub(1)) / 2).min(s * max_deg / 2) as f64,
    }
}

struct SearchVisitor<'g> {
    tracker: Tracker<'g>,
    quantity: Quantity,
    minimise: bool,
    cap: usize,
    /// `t(s) s`, indexed by size.
    total: Vec<f64>,
    open: Vec<bool>,
    /// Open sizes above each size.
    targets: Vec<Vec<usize>>,
    min_deg: i64,
    max_deg: i64,
    worst: Vec<Option<(usize, Vec<u32>)>>,
    tight: Vec<Option<Vec<u32>>>,
    violation: Option<(usize, Vec<u32>)>,
    first_skip: usize,
    sets: u64,
}

impl SearchVisitor<'_> {
    /// No superset of the current set up to the cap can break the inequality.
    fn settled(&self, s: usize, q: &SetQuantities) -> bool {
        let s_i = s as i64;
        let internal = q.internal_edges as i64;
        let boundary = q.edge_boundary as i64;
        self.targets[s].iter().all(|&target| {
            let a = (target - s) as i64;
            let added = (a * self.max_deg).min(boundary.min(a * s_i) + a * (a - 1) / 2);
            let total = self.total[target];
            match self.quantity {
                Quantity::VertexBoundary => (q.vertex_boundary as i64 - a) as f64 > total + SLACK,
                Quantity::EdgeBoundary => {
                    let degree_sum = self.tracker.degree_sum() as i64 + a * self.min_deg;
                    (degree_sum - 2 * (internal + added)) as f64 > total + SLACK
                }
                Quantity::InternalEdges => ((internal + added) as f64) < total - SLACK,
            }
        })
    }
}

impl SetVisitor for SearchVisitor<'_> {
    fn enter(&mut self, set: &[u32], v: u32) -> bool {
        self.tracker.push(v);
        self.sets += 1;
        let s = set.len();
        let q = self.tracker.quantities();
        let value = self.quantity.of(&q);
        let slot = &mut self.worst[s];
        if slot.as_ref().is_none_or(|(cur, _)| better(self.minimise, value, s, *cur, s)) {
            let mut w = set.to_vec();
            w.sort_unstable();
            *slot = Some((value, w));
        }
        if self.tight[s].is_none() && (value as f64 - self.total[s]).abs() <= SLACK {
            let mut w = set.to_vec();
            w.sort_unstable();
            self.tight[s] = Some(w);
        }
        if self.open[s] && self.violation.is_none() && violates(self.minimise, value, self.total[s]) {
            let mut w = set.to_vec();
            w.sort_unstable();
            self.violation = Some((value, w));
        }
        if s >= self.cap {
            return false;
        }
        if self.settled(s, &q) {
            self.first_skip = self.first_skip.min(s);
            return false;
        }
        true
    }

    fn leave(&mut self, v: u32) {
        self.tracker.pop(v);
    }
}

struct AnchorOutcome {
    worst: Vec<Option<(usize, Vec<u32>)>>,
    tight: Vec<Option<Vec<u32>>>,
    violation: Option<(usize, Vec<u32>)>,
    first_skip: usize,
    sets: u64,
}

fn audit_property(
    g: &Graph,
    square: &mut Option<Graph>,
    spec: &PropertySpec,
    profile: &ExpansionProfile,
) -> PropertyReport {
    let n = g.n();
    let (min_deg, max_deg) = (g.min_degree(), g.max_degree());
    let minimise = spec.quantity.minimised();
    let mut notes = Vec::new();
    let scope_sizes = if spec.scope >= n as f64 { n } else { spec.scope.floor().max(0.0) as usize };
    let cap = profile.cap.min(scope_sizes);
    if scope_sizes == 0 {
        notes.push(format!("scope {:.3} admits no non-empty set; vacuous", spec.scope));
    }
    let total: Vec<f64> = (0..=cap).map(|s| spec.threshold.ratio(s.max(1)) * s as f64).collect();
    let mut open = vec![false; cap + 1];
    let mut settled_by = vec![String::new(); cap + 1];
    for s in 1..=cap {
        let bound = degree_bound(spec.quantity, s, min_deg, max_deg);
        let certified = if minimise { bound >= total[s] - SLACK } else { bound <= total[s] + SLACK };
        open[s] = !certified;
        settled_by[s] = if certified { "degree" } else { "search" }.to_string();
    }
    let targets: Vec<Vec<usize>> =
        (0..=cap).map(|s| ((s + 1)..=cap).filter(|&t| open[t]).collect()).collect();

    let mut outcome = AnchorOutcome {
        worst: vec![None; cap + 1],
        tight: vec![None; cap + 1],
        violation: None,
        first_skip: usize::MAX,
        sets: 0,
    };
    let mut exhausted = false;
    if open.iter().any(|&o| o) {
        let walk: &Graph = match spec.quantity.connectivity() {
            super::Connectivity::G => g,
            super::Connectivity::Square => square.get_or_insert_with(|| g.square()),
        };
        let make = || SearchVisitor {
            tracker: Tracker::new(g),
            quantity: spec.quantity,
            minimise,
            cap,
            total: total.clone(),
            open: open.clone(),
            targets: targets.clone(),
            min_deg: min_deg as i64,
            max_deg: max_deg as i64,
            worst: vec![None; cap + 1],
            tight: vec![None; cap + 1],
            violation: None,
            first_skip: usize::MAX,
            sets: 0,
        };
        let finish = |v: &mut SearchVisitor| AnchorOutcome {
            worst: std::mem::replace(&mut v.worst, vec![None; cap + 1]),
            tight: std::mem::replace(&mut v.tight, vec![None; cap + 1]),
            violation: v.violation.take(),
            first_skip: std::mem::replace(&mut v.first_skip, usize::MAX),
            sets: std::mem::take(&mut v.sets),
        };
        let (per_anchor, ran_out) = run_anchors(walk, cap, profile.budget, make, finish);
        exhausted = ran_out;
        for a in per_anchor {
            for s in 1..=cap {
                if let Some((value, w)) = &a.worst[s] {
                    if outcome.worst[s].as_ref().is_none_or(|(cur, _)| better(minimise, *value, s, *cur, s)) {
                        outcome.worst[s] = Some((*value, w.clone()));
                    }
                }
                if outcome.tight[s].is_none() {
                    outcome.tight[s] = a.tight[s].clone();
                }
            }
            if outcome.violation.is_none() {
                outcome.violation = a.violation;
            }
            outcome.first_skip = outcome.first_skip.min(a.first_skip);
            outcome.sets += a.sets;
        }
    }

    let findings: Vec<SizeFinding> = (1..=cap)
        .map(|s| SizeFinding {
            size: s,
            threshold: spec.threshold.ratio(s),
            settled_by: settled_by[s].clone(),
            worst_ratio: outcome.worst[s].as_ref().map(|(v, _)| *v as f64 / s as f64),
            worst_witness: outcome.worst[s].as_ref().map(|(_, w)| w.clone()),
            exhaustive: outcome.sets > 0 && !exhausted && s <= outcome.first_skip.saturating_add(1),
            tight_witness: outcome.tight[s].clone(),
        })
        .collect();

    let violation = outcome.violation.map(|(value, witness)| {
        let size = witness.len();
        debug_assert!(violates(minimise, spec.quantity.of(&set_quantities(g, &witness)), total[size]));
        Violation { size, value, ratio: value as f64 / size as f64, threshold: spec.threshold.ratio(size), witness }
    });

    let mut certified_by = None;
    let status = if violation.is_some() {
        PropertyStatus::Violated
    } else if exhausted {
        notes.push(format!("search budget of {} sets ran out", profile.budget));
        PropertyStatus::Partial
    } else if cap >= scope_sizes {
        PropertyStatus::VerifiedToCap
    } else {
        certified_by = certify_beyond_cap(spec, profile, n, cap, scope_sizes);
        match &certified_by {
            Some(_) => PropertyStatus::SpectrallyCertified,
            None => {
                notes.push(format!(
                    "sizes {}..={} are beyond the cap and not covered by any supplied spectrum",
                    cap + 1,
                    scope_sizes
                ));
                if spec.scope >= n as f64 && minimise {
                    notes.push("the scope reaches |U| = n, where every boundary is empty".into());
                }
                PropertyStatus::VerifiedToCap
            }
        }
    };

    PropertyReport {
        name: spec.name.to_string(),
        statement: spec.statement.clone(),
        quantity: spec.quantity,
        scope: spec.scope,
        cap,
        status,
        findings,
        visited: outcome.sets,
        violation,
        certified_by,
        notes,
    }
}

/// Label of the first spectrum that covers every size in `(cap, last]`.
fn certify_beyond_cap(
    spec: &PropertySpec,
    profile: &ExpansionProfile,
    n: usize,
    cap: usize,
    last: usize,
) -> Option<String> {
    profile
        .spectra
        .iter()
        .filter(|layer| layer.own_graph || spec.quantity.minimised())
        .find(|layer| {
            ((cap + 1)..=last).all(|s| {
                let need = spec.threshold.ratio(s) * s as f64;
                let bound = match spec.quantity {
                    Quantity::EdgeBoundary => alon_milman_bound(n, layer.degree, layer.lambda, s),
                    Quantity::VertexBoundary => tanner_bound(n, layer.degree, layer.lambda, s),
                    Quantity::InternalEdges => sparsity_upper_bound(n, layer.degree, layer.lambda, s),
                };
                match bound {
                    Ok(b) if spec.quantity.minimised() => b >= need - SLACK,
                    Ok(b) => b <= need + SLACK,
                    Err(_) => false,
                }
            })
        })
        .map(|layer| layer.label.clone())
}

/// Checks every property of `profile` on `g`.
pub fn audit_profile(g: &Graph, profile: &ExpansionProfile) -> Result<AuditReport, AuditError> {
    profile.validate()?;
    if g.n() == 0 {
        return Err(AuditError::InvalidParameter("empty graph".into()));
    }
    let d = g.regular_degree().unwrap_or_else(|| g.max_degree());
    let mut square = None;
    let properties = properties(profile, g.n(), d as f64)
        .iter()
        .map(|spec| audit_property(g, &mut square, spec, profile))
        .collect();
    Ok(AuditReport { n: g.n(), d, profile: profile.clone(), properties })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gen_complete, gen_cycle, gen_hypercube};

    #[test]
    fn disconnected_graph_violates_global_expansion() {
        let two_k4 = Graph::from_edges(
            8,
            &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (4, 5), (4, 6), (4, 7), (5, 6), (5, 7), (6, 7)],
        )
        .unwrap();
        let mut profile = ExpansionProfile::new(ProfileMode::P, 4);
        profile.c1 = 0.01;
        let report = audit_profile(&two_k4, &profile).unwrap();
        let p1 = report.property("P1").unwrap();
        assert_eq!(p1.status, PropertyStatus::Violated);
        let v = p1.violation.as_ref().unwrap();
        assert_eq!(v.value, 0);
        assert!(v.witness == vec![0, 1, 2, 3] || v.witness == vec![4, 5, 6, 7]);
        assert_eq!(set_quantities(&two_k4, &v.witness).edge_boundary, 0);
    }

    #[test]
    fn complete_graph_within_cap() {
        let mut profile = ExpansionProfile::new(ProfileMode::P, 2);
        profile.c1 = 2.0;
        let report = audit_profile(&gen_complete(4), &profile).unwrap();
        let p1 = report.property("P1").unwrap();
        assert_eq!(p1.status, PropertyStatus::VerifiedToCap);
        assert_eq!(p1.cap, 2);
    }

    #[test]
    fn harper_on_small_cube() {
        let report = audit_profile(&gen_hypercube(5).unwrap(), &ExpansionProfile::new(ProfileMode::Harper, 5)).unwrap();
        let h = report.property("H").unwrap();
        assert_eq!(h.status, PropertyStatus::VerifiedToCap);
        for size in [1usize, 2, 4] {
            let w = h.findings[size - 1].tight_witness.as_ref().expect("subcube equality");
            assert_eq!(w.len(), size);
        }
        assert!(h.findings[2].tight_witness.is_none());
    }

    #[test]
    fn sparsity_on_a_cycle() {
        let mut profile = ExpansionProfile::new(ProfileMode::R, 9);
        profile.delta = 0.05;
        profile.big_c = 3.0;
        profile.b = 0.1;
        let report = audit_profile(&gen_cycle(9).unwrap(), &profile).unwrap();
        // the whole cycle has e(U) = |U|, within (1 + delta) |U|
        let r2 = report.property("R2").unwrap();
        assert_eq!(r2.status, PropertyStatus::VerifiedToCap);
        profile.delta = 0.01;
        profile.big_c = 5.0;
        let k4 = audit_profile(&gen_complete(4), &profile).unwrap();
        assert_eq!(k4.property("R2").unwrap().status, PropertyStatus::Violated);
    }

    #[test]
    fn spectrum_covers_sizes_beyond_cap() {
        let g = gen_complete(20);
        let mut profile = ExpansionProfile::new(ProfileMode::Q, 3);
        profile.b = 2.0;
        profile.spectra.push(LayerSpectrum { label: "G".into(), degree: 19.0, lambda: 1.0, own_graph: true });
        let report = audit_profile(&g, &profile).unwrap();
        let q1 = report.property("Q1").unwrap();
        assert_eq!(q1.status, PropertyStatus::SpectrallyCertified);
        assert_eq!(q1.certified_by.as_deref(), Some("G"));
    }

    #[test]
    fn rejects_bad_profiles() {
        let mut profile = ExpansionProfile::new(ProfileMode::Q, 3);
        profile.alpha = 1.5;
        assert!(audit_profile(&gen_complete(4), &profile).is_err());
        profile.alpha = 0.5;
        profile.cap = 0;
        assert!(audit_profile(&gen_complete(4), &profile).is_err());
    }
}
