mod common;

use common::{connected, mask_quantities, masks, random_graph};
use percolab::audit::{
    local_sparsity_max, min_edge_expansion, min_vertex_expansion, set_quantities, ExtremaTable, DEFAULT_BUDGET,
};

/// Best `(value, size)` over all subsets of each size, cumulative in size.
fn cumulative(best: &[Option<(usize, usize)>], minimise: bool) -> Vec<Option<(usize, usize)>> {
    let mut out = Vec::with_capacity(best.len());
    let mut cur: Option<(usize, usize)> = None;
    for b in best {
        if let Some((v, s)) = *b {
            let improves = cur.is_none_or(|(cv, cs)| {
                let (a, c) = (v as u128 * cs as u128, cv as u128 * s as u128);
                if minimise { a < c } else { a > c }
            });
            if improves {
                cur = Some((v, s));
            }
        }
        out.push(cur);
    }
    out
}

fn same_ratio(a: (usize, usize), b: (usize, usize)) -> bool {
    a.0 as u128 * b.1 as u128 == b.0 as u128 * a.1 as u128
}

fn check(table: &ExtremaTable, all: &[Option<(usize, usize)>], conn: &[Option<usize>], minimise: bool) {
    let cum = cumulative(all, minimise);
    for size in 1..=table.max_size {
        let got = table.up_to(size).map(|e| (e.value, e.size));
        match (got, cum[size - 1]) {
            (Some(g), Some(e)) => assert!(same_ratio(g, e), "size <= {size}: {g:?} vs {e:?}"),
            (g, e) => assert_eq!(g.is_some(), e.is_some(), "size <= {size}"),
        }
        assert_eq!(table.at(size).map(|e| e.value), conn[size - 1], "connected size {size}");
    }
}

#[test]
fn extrema_match_exhaustive_search() {
    for case in 0..20u64 {
        let n = 6 + (case as usize % 11);
        let q = [0.15, 0.3, 0.5][case as usize % 3];
        let g = random_graph(n, q, 100 + case);
        let adj = masks(&g);
        let square: Vec<u32> = (0..n)
            .map(|v| {
                let mut m = adj[v];
                for u in 0..n {
                    if adj[v] >> u & 1 == 1 {
                        m |= adj[u];
                    }
                }
                m & !(1 << v)
            })
            .collect();
        let mut all = vec![[None::<(usize, usize)>; 3]; n];
        let mut conn = vec![[None::<usize>; 3]; n];
        for mask in 1u32..(1 << n) {
            let (s, internal, boundary, nbhd) = mask_quantities(&adj, mask);
            let values = [boundary, nbhd, internal];
            let in_g = connected(&adj, mask);
            let in_sq = connected(&square, mask);
            for (k, &value) in values.iter().enumerate() {
                let minimise = k < 2;
                let slot = &mut all[s - 1][k];
                if slot.is_none_or(|(v, _)| if minimise { value < v } else { value > v }) {
                    *slot = Some((value, s));
                }
                if (k == 1 && in_sq) || (k != 1 && in_g) {
                    let c = &mut conn[s - 1][k];
                    if c.is_none_or(|v| if minimise { value < v } else { value > v }) {
                        *c = Some(value);
                    }
                }
            }
        }
        let column = |k: usize| -> (Vec<Option<(usize, usize)>>, Vec<Option<usize>>) {
            (all.iter().map(|r| r[k]).collect(), conn.iter().map(|r| r[k]).collect())
        };
        let tables = [
            min_edge_expansion(&g, n, DEFAULT_BUDGET).unwrap(),
            min_vertex_expansion(&g, n, DEFAULT_BUDGET).unwrap(),
            local_sparsity_max(&g, n, DEFAULT_BUDGET).unwrap(),
        ];
        for (k, table) in tables.iter().enumerate() {
            let (a, c) = column(k);
            check(table, &a, &c, k < 2);
            for e in table.per_size.iter().flatten() {
                let q = set_quantities(&g, &e.witness);
                assert_eq!([q.edge_boundary, q.vertex_boundary, q.internal_edges][k], e.value);
            }
        }
    }
}

#[test]
fn profile_verdicts_match_exhaustive_search() {
    use percolab::audit::{audit_profile, ExpansionProfile, ProfileMode, PropertyStatus, Quantity};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut verdicts = [0usize; 2];
    for case in 0..60u64 {
        let n = rng.gen_range(5..=14);
        let g = random_graph(n, rng.gen_range(0.15..0.6), 500 + case);
        let adj = masks(&g);
        let mode = [ProfileMode::P, ProfileMode::Q, ProfileMode::R, ProfileMode::Harper][case as usize % 4];
        let mut profile = ExpansionProfile::new(mode, rng.gen_range(1..=n));
        profile.c1 = rng.gen_range(0.2..3.0);
        profile.c2 = rng.gen_range(0.1..1.5);
        profile.c3 = rng.gen_range(1.0..20.0);
        profile.alpha = rng.gen_range(0.2..1.0);
        profile.eps = rng.gen_range(1.0..30.0);
        profile.big_c = rng.gen_range(1.0..3.0);
        profile.b = rng.gen_range(0.2..3.0);
        profile.c = rng.gen_range(0.1..2.0);
        profile.delta = rng.gen_range(0.0..1.0);
        let report = audit_profile(&g, &profile).unwrap();
        for prop in &report.properties {
            assert_ne!(prop.status, PropertyStatus::Partial);
            let minimise = prop.quantity != Quantity::InternalEdges;
            let mut exists = false;
            for mask in 1u32..(1 << n) {
                let (s, internal, boundary, nbhd) = mask_quantities(&adj, mask);
                if s > prop.cap {
                    continue;
                }
                let value = match prop.quantity {
                    Quantity::EdgeBoundary => boundary,
                    Quantity::VertexBoundary => nbhd,
                    Quantity::InternalEdges => internal,
                } as f64;
                let total = prop.findings[s - 1].threshold * s as f64;
                if (minimise && value < total - 1e-9) || (!minimise && value > total + 1e-9) {
                    exists = true;
                    break;
                }
            }
            assert_eq!(prop.status == PropertyStatus::Violated, exists, "case {case} {}", prop.name);
            verdicts[exists as usize] += 1;
            if let Some(v) = &prop.violation {
                let q = set_quantities(&g, &v.witness);
                let value = [q.edge_boundary, q.vertex_boundary, q.internal_edges]
                    [[Quantity::EdgeBoundary, Quantity::VertexBoundary, Quantity::InternalEdges]
                        .iter()
                        .position(|&x| x == prop.quantity)
                        .unwrap()];
                assert_eq!(value, v.value);
            }
        }
    }
    // both verdicts must actually occur for the comparison to mean anything
    assert!(verdicts[0] >= 10 && verdicts[1] >= 10, "{verdicts:?}");
}
