//! Independent brute-force reference implementations: exact optima for
//! CVC/TSS/VDS and exhaustive record-set enumeration for DP-table checks.
//!
//! These exist only to validate the main algorithms. Guards fail loudly
//! rather than silently down-sampling: an oracle that degrades quietly
//! would invalidate acceptance runs.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use crate::cvc_exact::DVec;
use crate::error::Error;
use crate::flow::FlowNetwork;
use crate::graph::Graph;
use crate::nice::NiceTreeDecomposition;
use crate::problems::{tss_is_target_set, vds_check};

/// Default guard on `n` for the subset-enumeration oracles.
pub const DEFAULT_ORACLE_GUARD: usize = 18;

fn guard_n(g: &Graph, guard: usize, what: &str) -> Result<(), Error> {
    if g.n() > guard {
        return Err(Error::resource(
            format!("{what} oracle on n={}", g.n()),
            guard,
            g.n(),
            "the brute-force oracle is exponential in n; raise TWAPPROX_GUARD_MAX \
             only if you mean it",
        ));
    }
    Ok(())
}

/// Advances `idx` to the next size-|idx| combination of `0..n` in
/// lexicographic order; false when exhausted.
pub(crate) fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let size = idx.len();
    let mut i = size;
    while i > 0 {
        i -= 1;
        if idx[i] != i + n - size {
            idx[i] += 1;
            for j in (i + 1)..size {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Iterates subsets of `pool` in ascending size, lexicographic within each
/// size, calling `visit` until it returns `Some`.
pub(crate) fn subsets_by_size<T>(
    pool: &[usize],
    max_size: usize,
    mut visit: impl FnMut(&BTreeSet<usize>) -> Option<T>,
) -> Option<T> {
    let n = pool.len();
    if let Some(hit) = visit(&BTreeSet::new()) {
        return Some(hit);
    }
    for size in 1..=max_size.min(n) {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let current: BTreeSet<usize> = idx.iter().map(|&i| pool[i]).collect();
            if let Some(hit) = visit(&current) {
                return Some(hit);
            }
            if !next_combination(&mut idx, n) {
                break;
            }
        }
    }
    None
}

/// Decides whether a capacity-respecting assignment of all edges into `s`
/// exists, via a bipartite flow from edges to their endpoints in `s`.
pub fn cvc_cover_feasible(g: &Graph, capacity: &[usize], s: &BTreeSet<usize>) -> bool {
    let m = g.m();
    if m == 0 {
        return true;
    }
    // Every edge must have an endpoint in s.
    if !g
        .edges()
        .iter()
        .all(|&(u, v)| s.contains(&u) || s.contains(&v))
    {
        return false;
    }
    // Nodes: 0 = source, 1 = sink, 2.. = edges, then vertices of s.
    let verts: Vec<usize> = s.iter().copied().collect();
    let vert_index: BTreeMap<usize, usize> = verts
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, 2 + m + i))
        .collect();
    let mut net = FlowNetwork::new(2 + m + verts.len(), 0, 1);
    for (i, &(u, v)) in g.edges().iter().enumerate() {
        net.add_arc(0, 2 + i, 1);
        for w in [u, v] {
            if let Some(&node) = vert_index.get(&w) {
                net.add_arc(2 + i, node, 1);
            }
        }
    }
    for &v in &verts {
        net.add_arc(vert_index[&v], 1, capacity[v] as u64);
    }
    net.max_flow().value == m as u64
}

/// Minimum size of a feasible CVC cover by subset enumeration, `None` if no
/// cover exists.
pub fn cvc_opt_brute(g: &Graph, capacity: &[usize], guard: usize) -> Result<Option<usize>, Error> {
    guard_n(g, guard, "CVC")?;
    let pool: Vec<usize> = g.vertices().collect();
    Ok(subsets_by_size(&pool, g.n(), |s| {
        cvc_cover_feasible(g, capacity, s).then_some(s.len())
    }))
}

/// Minimum target-set size (always defined: V activates everything).
pub fn tss_opt_brute(g: &Graph, thresholds: &[usize], guard: usize) -> Result<usize, Error> {
    guard_n(g, guard, "TSS")?;
    let pool: Vec<usize> = g.vertices().collect();
    Ok(subsets_by_size(&pool, g.n(), |s| {
        tss_is_target_set(g, thresholds, s).then_some(s.len())
    })
    .expect("V is always a target set"))
}

/// Minimum vector dominating set size (always defined: V dominates).
pub fn vds_opt_brute(g: &Graph, thresholds: &[usize], guard: usize) -> Result<usize, Error> {
    guard_n(g, guard, "VDS")?;
    let pool: Vec<usize> = g.vertices().collect();
    Ok(subsets_by_size(&pool, g.n(), |s| {
        vds_check(g, thresholds, s).then_some(s.len())
    })
    .expect("V is always a vector dominating set"))
}

/// Default guard on `|E[V_alpha] \ E[X_alpha]|` for record enumeration.
pub const DEFAULT_RECORD_GUARD: usize = 20;

/// Enumerates every orientation of `G_alpha`, keeps the ones that respect
/// capacities on `Y`, and aggregates the minimum number of covered
/// `Y`-vertices per outdegree vector on the bag.
///
/// This is the reference semantics the DP tables are compared against:
/// `(d, k)` is a record iff the returned map holds `d` with value `<= k`
/// and `k <= |Y|`.
pub fn enumerate_records(
    g: &Graph,
    ntd: &NiceTreeDecomposition,
    capacity: &[usize],
    node: usize,
    guard: usize,
) -> Result<BTreeMap<DVec, usize>, Error> {
    let scope = ntd.scope_edges(g, node);
    if scope.len() > guard {
        return Err(Error::resource(
            format!("record enumeration at node {node}"),
            guard,
            scope.len(),
            "2^edges orientations is too many; shrink the instance",
        ));
    }
    let bag = ntd.bag_sorted(node);
    let y: Vec<usize> = ntd.y_set(node).into_iter().collect();
    let mut out = BTreeMap::new();

    for mask in 0u64..(1 << scope.len()) {
        // Bit i set: edge i sinks at its larger endpoint.
        let mut indeg: BTreeMap<usize, usize> = BTreeMap::new();
        let mut outdeg_bag: BTreeMap<usize, u32> = bag.iter().map(|&v| (v, 0)).collect();
        for (i, &(u, v)) in scope.iter().enumerate() {
            let (sink, source) = if mask >> i & 1 == 1 { (v, u) } else { (u, v) };
            *indeg.entry(sink).or_insert(0) += 1;
            if let Some(d) = outdeg_bag.get_mut(&source) {
                *d += 1;
            }
        }
        if y.iter()
            .any(|&v| indeg.get(&v).copied().unwrap_or(0) > capacity[v])
        {
            continue;
        }
        let covered = y
            .iter()
            .filter(|&&v| indeg.get(&v).copied().unwrap_or(0) > 0)
            .count();
        let d: DVec = bag.iter().map(|v| outdeg_bag[v]).collect();
        out.entry(d)
            .and_modify(|k: &mut usize| *k = (*k).min(covered))
            .or_insert(covered);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{ProblemKind, WeightedInstance};
    use crate::nice::make_nice;
    use crate::td::min_fill_decomposition;

    fn caps(v: &[usize]) -> Vec<usize> {
        let mut w = vec![0];
        w.extend_from_slice(v);
        w
    }

    #[test]
    fn cvc_examples() {
        let p3 = Graph::from_edges(3, &[(1, 2), (2, 3)]).unwrap();
        assert_eq!(cvc_opt_brute(&p3, &caps(&[0, 1, 0]), 18).unwrap(), None);

        let k3 = Graph::from_edges(3, &[(1, 2), (2, 3), (1, 3)]).unwrap();
        assert_eq!(cvc_opt_brute(&k3, &caps(&[1, 1, 1]), 18).unwrap(), Some(3));

        let star = Graph::from_edges(4, &[(1, 2), (1, 3), (1, 4)]).unwrap();
        assert_eq!(
            cvc_opt_brute(&star, &caps(&[3, 0, 0, 0]), 18).unwrap(),
            Some(1)
        );
    }

    #[test]
    fn tss_vds_examples() {
        let k3 = Graph::from_edges(3, &[(1, 2), (2, 3), (1, 3)]).unwrap();
        assert_eq!(tss_opt_brute(&k3, &caps(&[1, 1, 1]), 18).unwrap(), 1);
        assert_eq!(tss_opt_brute(&k3, &caps(&[2, 2, 2]), 18).unwrap(), 2);
        assert_eq!(tss_opt_brute(&k3, &caps(&[0, 0, 0]), 18).unwrap(), 0);
        assert_eq!(vds_opt_brute(&k3, &caps(&[1, 1, 1]), 18).unwrap(), 1);
        assert_eq!(vds_opt_brute(&k3, &caps(&[0, 0, 0]), 18).unwrap(), 0);

        let edge = Graph::from_edges(2, &[(1, 2)]).unwrap();
        assert_eq!(vds_opt_brute(&edge, &caps(&[1, 1]), 18).unwrap(), 1);
    }

    #[test]
    fn guard_fails_loudly() {
        let g = Graph::empty(30);
        assert!(matches!(
            cvc_opt_brute(&g, &vec![0; 31], 18),
            Err(Error::Resource { .. })
        ));
    }

    #[test]
    fn record_enumeration_leaf_and_single_edge() {
        let g = Graph::from_edges(2, &[(1, 2)]).unwrap();
        let inst = WeightedInstance::new(g, ProblemKind::Cvc, vec![1, 1]).unwrap();
        let td = min_fill_decomposition(inst.graph());
        let ntd = make_nice(inst.graph(), &td).unwrap();
        // Root: bag empty, one Y-Y edge with both capacities 1: either
        // orientation covers exactly one vertex.
        let root = enumerate_records(inst.graph(), &ntd, inst.weights(), ntd.root(), 20).unwrap();
        assert_eq!(root.len(), 1);
        assert_eq!(root[&Vec::new()], 1);
        // Any leaf: the single empty record with k = 0.
        let leaf = (0..ntd.num_nodes())
            .find(|&n| matches!(ntd.kind(n), crate::nice::NodeKind::Leaf))
            .unwrap();
        let t = enumerate_records(inst.graph(), &ntd, inst.weights(), leaf, 20).unwrap();
        assert_eq!(t[&Vec::new()], 0);
    }

    /// Independent route for cover feasibility: Kuhn's augmenting-path
    /// matching between edges and capacity slots (vertex v contributes
    /// c(v) slots), with no flow machinery involved.
    fn cvc_cover_feasible_matching(g: &Graph, capacity: &[usize], s: &BTreeSet<usize>) -> bool {
        if !g
            .edges()
            .iter()
            .all(|&(u, v)| s.contains(&u) || s.contains(&v))
        {
            return false;
        }
        let mut slots: Vec<usize> = Vec::new(); // slot -> vertex
        let mut slot_of: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &v in s {
            for _ in 0..capacity[v] {
                slot_of.entry(v).or_default().push(slots.len());
                slots.push(v);
            }
        }
        let m = g.m();
        let mut matched_slot: Vec<Option<usize>> = vec![None; slots.len()];
        let mut matched_edge: Vec<Option<usize>> = vec![None; m];

        fn augment(
            e: usize,
            g: &Graph,
            s: &BTreeSet<usize>,
            slot_of: &BTreeMap<usize, Vec<usize>>,
            matched_slot: &mut Vec<Option<usize>>,
            matched_edge: &mut Vec<Option<usize>>,
            visited: &mut Vec<bool>,
        ) -> bool {
            let (u, v) = g.edges()[e];
            for w in [u, v] {
                if !s.contains(&w) {
                    continue;
                }
                for &slot in slot_of.get(&w).map(|x| x.as_slice()).unwrap_or(&[]) {
                    if visited[slot] {
                        continue;
                    }
                    visited[slot] = true;
                    let free = match matched_slot[slot] {
                        None => true,
                        Some(other) => {
                            augment(other, g, s, slot_of, matched_slot, matched_edge, visited)
                        }
                    };
                    if free {
                        matched_slot[slot] = Some(e);
                        matched_edge[e] = Some(slot);
                        return true;
                    }
                }
            }
            false
        }

        for e in 0..m {
            let mut visited = vec![false; slots.len()];
            if !augment(
                e,
                g,
                s,
                &slot_of,
                &mut matched_slot,
                &mut matched_edge,
                &mut visited,
            ) {
                return false;
            }
        }
        true
    }

    #[test]
    fn flow_and_matching_routes_agree() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(77);
        for _ in 0..40 {
            let n = rng.gen_range(2..=10usize);
            let mut edges = Vec::new();
            for u in 1..=n {
                for v in (u + 1)..=n {
                    if rng.gen_bool(0.4) {
                        edges.push((u, v));
                    }
                }
            }
            let g = Graph::from_edges(n, &edges).unwrap();
            let mut capacity = vec![0usize; n + 1];
            for c in capacity.iter_mut().skip(1) {
                *c = rng.gen_range(0..=3);
            }
            let pool: Vec<usize> = g.vertices().collect();

            let by_flow = subsets_by_size(&pool, n, |s| {
                cvc_cover_feasible(&g, &capacity, s).then_some(s.len())
            });
            let by_matching = subsets_by_size(&pool, n, |s| {
                cvc_cover_feasible_matching(&g, &capacity, s).then_some(s.len())
            });
            assert_eq!(by_flow, by_matching, "oracles disagree on {edges:?}");
        }
    }

    #[test]
    fn subset_iteration_is_sorted_by_size_then_lex() {
        let mut seen = Vec::new();
        let pool = [1, 2, 3];
        subsets_by_size::<()>(&pool, 3, |s| {
            seen.push(s.iter().copied().collect::<Vec<_>>());
            None
        });
        assert_eq!(
            seen,
            vec![
                vec![],
                vec![1],
                vec![2],
                vec![3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3],
                vec![1, 2, 3]
            ]
        );
    }
}
