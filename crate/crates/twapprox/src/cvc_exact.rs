//! The exact record-set dynamic program for capacitated vertex cover over a
//! nice tree decomposition.
//!
//! A record at node `alpha` is a pair `(d, k)`: `d` maps the bag to the
//! outdegrees toward the forgotten set `Y` in an orientation of `G_alpha`
//! (the graph on `V_alpha` without the edges inside the bag), and `k`
//! budgets the covered vertices of `Y`. Tables store the minimum `k` per
//! distinct d-vector; membership for larger `k` up to `|Y|` follows from
//! the upward closure of record sets.

use std::collections::BTreeMap;

use crate::error::Error;
use crate::graph::{orientation_feasible, Orientation, WeightedInstance};
use crate::nice::{NiceTreeDecomposition, NodeKind};

/// Outdegree vector indexed by the sorted bag.
pub type DVec = Vec<u32>;

/// How an entry was produced; enough to rebuild the orientation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Back {
    Leaf,
    Introduce {
        child: DVec,
    },
    Join {
        left: DVec,
        right: DVec,
    },
    /// The forgotten vertex stays out of the cover.
    ForgetSkip {
        child: DVec,
    },
    /// The forgotten vertex joins the cover, taking over the bag
    /// edges listed in `delta`.
    ForgetTake {
        child: DVec,
        delta: Vec<usize>,
    },
}

#[derive(Debug, Clone)]
pub struct Entry {
    pub k_min: usize,
    pub back: Back,
}

/// Per-node DP table.
#[derive(Debug, Clone)]
pub struct ExactRecordSet {
    /// Bag vertices in ascending order; d-vectors index by this.
    pub bag: Vec<usize>,
    /// `|Y|` at this node; the largest admissible budget.
    pub y_size: usize,
    pub entries: BTreeMap<DVec, Entry>,
}

impl ExactRecordSet {
    /// Membership of the record `(d, k)`.
    pub fn contains(&self, d: &[u32], k: usize) -> bool {
        match self.entries.get(d) {
            Some(e) => e.k_min <= k && k <= self.y_size,
            None => false,
        }
    }

    /// Smallest `k` over the whole table (the root answer when the bag is
    /// empty), or `None` for an empty table.
    pub fn min_k(&self) -> Option<usize> {
        self.entries.values().map(|e| e.k_min).min()
    }

    /// (d, k_min) pairs without provenance, for oracle comparisons.
    pub fn as_kmin_map(&self) -> BTreeMap<DVec, usize> {
        self.entries
            .iter()
            .map(|(d, e)| (d.clone(), e.k_min))
            .collect()
    }

    fn insert_min(&mut self, d: DVec, k_min: usize, back: Back) {
        match self.entries.get_mut(&d) {
            Some(e) if e.k_min <= k_min => {}
            Some(e) => {
                e.k_min = k_min;
                e.back = back;
            }
            None => {
                self.entries.insert(d, Entry { k_min, back });
            }
        }
    }
}

/// Table for a leaf node: the single record with an empty-domain mapping
/// and budget zero.
pub fn leaf_table() -> ExactRecordSet {
    let mut entries = BTreeMap::new();
    entries.insert(
        Vec::new(),
        Entry {
            k_min: 0,
            back: Back::Leaf,
        },
    );
    ExactRecordSet {
        bag: Vec::new(),
        y_size: 0,
        entries,
    }
}

/// Table for an introduce-`v` node. There is no edge between `v` and `Y`,
/// so every child vector extends by `d(v) = 0` with `k` unchanged.
pub fn introduce_table(child: &ExactRecordSet, v: usize) -> ExactRecordSet {
    debug_assert!(!child.bag.contains(&v));
    let pos = child.bag.partition_point(|&u| u < v);
    let mut bag = child.bag.clone();
    bag.insert(pos, v);
    let mut entries = BTreeMap::new();
    for (d1, e1) in &child.entries {
        let mut d = d1.clone();
        d.insert(pos, 0);
        entries.insert(
            d,
            Entry {
                k_min: e1.k_min,
                back: Back::Introduce { child: d1.clone() },
            },
        );
    }
    ExactRecordSet {
        bag,
        y_size: child.y_size,
        entries,
    }
}

/// Table for a join node: pointwise sums of the children's d-vectors and
/// budgets. The children's `Y` sets are disjoint, so `G_alpha` is their
/// disjoint union and outdegrees add.
pub fn join_table(left: &ExactRecordSet, right: &ExactRecordSet) -> ExactRecordSet {
    debug_assert_eq!(left.bag, right.bag);
    let mut table = ExactRecordSet {
        bag: left.bag.clone(),
        y_size: left.y_size + right.y_size,
        entries: BTreeMap::new(),
    };
    for (d1, e1) in &left.entries {
        for (d2, e2) in &right.entries {
            let d: DVec = d1.iter().zip(d2).map(|(a, b)| a + b).collect();
            table.insert_min(
                d,
                e1.k_min + e2.k_min,
                Back::Join {
                    left: d1.clone(),
                    right: d2.clone(),
                },
            );
        }
    }
    table
}

/// Per-node context for a forget node.
#[derive(Debug, Clone)]
pub struct ForgetCtx {
    /// The forgotten vertex.
    pub v: usize,
    /// `|N(v) ∩ Y|` at the forget node.
    pub y_neighbors: usize,
    /// `N(v) ∩ X` at the forget node, ascending.
    pub bag_neighbors: Vec<usize>,
    /// `c(v)`.
    pub capacity: usize,
}

/// Table for a forget-`v` node. The skip branch keeps `v` out of the cover: all
/// its `Y`-edges must already be covered from the other side, so the child
/// vector has `d1(v) = |N(v) ∩ Y|`. The take branch puts `v` into the cover: it
/// takes over a subset `delta` of its bag edges plus the `|N(v) ∩ Y| - A`
/// uncovered `Y`-edges, admissible when `A >= |N(v) ∩ Y| - c(v) + |delta|`.
pub fn forget_table(child: &ExactRecordSet, ctx: &ForgetCtx) -> ExactRecordSet {
    let pos = child.bag.partition_point(|&u| u < ctx.v);
    debug_assert_eq!(child.bag.get(pos), Some(&ctx.v));
    let mut bag = child.bag.clone();
    bag.remove(pos);
    let delta_positions: Vec<usize> = ctx
        .bag_neighbors
        .iter()
        .map(|&u| bag.partition_point(|&w| w < u))
        .collect();

    let mut table = ExactRecordSet {
        bag,
        y_size: child.y_size + 1,
        entries: BTreeMap::new(),
    };

    for (d1, e1) in &child.entries {
        let a = d1[pos] as usize;
        debug_assert!(a <= ctx.y_neighbors);
        let mut base = d1.clone();
        base.remove(pos);

        if a == ctx.y_neighbors {
            table.insert_min(
                base.clone(),
                e1.k_min,
                Back::ForgetSkip { child: d1.clone() },
            );
        }

        for mask in 0u32..(1 << ctx.bag_neighbors.len()) {
            let delta_size = mask.count_ones() as usize;
            if a + ctx.capacity < ctx.y_neighbors + delta_size {
                continue;
            }
            let mut d = base.clone();
            let mut delta = Vec::with_capacity(delta_size);
            for (i, &p) in delta_positions.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    d[p] += 1;
                    delta.push(ctx.bag_neighbors[i]);
                }
            }
            table.insert_min(
                d,
                e1.k_min + 1,
                Back::ForgetTake {
                    child: d1.clone(),
                    delta,
                },
            );
        }
    }
    table
}

/// Options for the exact solver.
#[derive(Debug, Clone)]
pub struct ExactOptions {
    /// Cap on distinct d-vectors per node; the exact DP is n^(w+O(1)).
    pub table_cap: usize,
}

impl Default for ExactOptions {
    fn default() -> Self {
        ExactOptions {
            table_cap: 10_000_000,
        }
    }
}

/// Outcome of a CVC solve. Infeasibility is a first-class result.
#[derive(Debug, Clone)]
pub enum CvcOutcome {
    Feasible {
        opt: usize,
        /// An orientation of all edges with indegrees within capacity and
        /// exactly `opt` covered vertices.
        witness: Orientation,
    },
    Infeasible,
}

pub(crate) fn forget_ctx(
    inst: &WeightedInstance,
    ntd: &NiceTreeDecomposition,
    node: usize,
    v: usize,
) -> ForgetCtx {
    let g = inst.graph();
    ForgetCtx {
        v,
        y_neighbors: ntd.y_neighbor_count(g, node, v),
        bag_neighbors: g
            .neighbors(v)
            .iter()
            .copied()
            .filter(|u| ntd.bag(node).contains(u))
            .collect(),
        capacity: inst.weight(v),
    }
}

/// Computes the record table of every node, bottom-up.
pub fn compute_tables(
    inst: &WeightedInstance,
    ntd: &NiceTreeDecomposition,
    opts: &ExactOptions,
) -> Result<Vec<ExactRecordSet>, Error> {
    let mut tables: Vec<Option<ExactRecordSet>> = vec![None; ntd.num_nodes()];
    for node in ntd.postorder() {
        let table = match ntd.kind(node) {
            NodeKind::Leaf => leaf_table(),
            NodeKind::Introduce(v) => {
                introduce_table(tables[ntd.children(node)[0]].as_ref().unwrap(), v)
            }
            NodeKind::Join => {
                let [a, b] = ntd.children(node) else {
                    unreachable!()
                };
                join_table(tables[*a].as_ref().unwrap(), tables[*b].as_ref().unwrap())
            }
            NodeKind::Forget(v) => {
                let ctx = forget_ctx(inst, ntd, node, v);
                forget_table(tables[ntd.children(node)[0]].as_ref().unwrap(), &ctx)
            }
        };
        debug_assert_eq!(table.bag, ntd.bag_sorted(node));
        debug_assert_eq!(table.y_size, ntd.y_size(node));
        if table.entries.len() > opts.table_cap {
            return Err(Error::resource(
                format!("exact record table at node {node}"),
                opts.table_cap,
                table.entries.len(),
                "the width is likely too large for the exact DP; supply a narrower \
                 decomposition via --td, or raise --table-cap",
            ));
        }
        tables[node] = Some(table);
    }
    Ok(tables.into_iter().map(Option::unwrap).collect())
}

/// Rebuilds the orientation certifying the table entry `(node, d)`.
fn reconstruct(
    inst: &WeightedInstance,
    ntd: &NiceTreeDecomposition,
    tables: &[ExactRecordSet],
    node: usize,
    d: &DVec,
) -> Orientation {
    let entry = &tables[node].entries[d];
    match &entry.back {
        Back::Leaf => Orientation::new(),
        Back::Introduce { child } => reconstruct(inst, ntd, tables, ntd.children(node)[0], child),
        Back::Join { left, right } => {
            let [a, b] = ntd.children(node) else {
                unreachable!()
            };
            let mut o = reconstruct(inst, ntd, tables, *a, left);
            o.absorb(&reconstruct(inst, ntd, tables, *b, right));
            o
        }
        Back::ForgetSkip { child } | Back::ForgetTake { child, .. } => {
            let NodeKind::Forget(v) = ntd.kind(node) else {
                unreachable!()
            };
            let mut o = reconstruct(inst, ntd, tables, ntd.children(node)[0], child);
            let delta: &[usize] = match &entry.back {
                Back::ForgetTake { delta, .. } => delta,
                _ => &[],
            };
            // The bag edges of v enter G_alpha here: v covers those in
            // delta, the rest sink at their bag endpoint.
            for &u in inst.graph().neighbors(v) {
                if ntd.bag(node).contains(&u) {
                    let sink = if delta.contains(&u) { v } else { u };
                    o.set_sink(v, u, sink);
                }
            }
            o
        }
    }
}

/// Runs the full exact DP and reports the optimum with a witness
/// orientation, or `Infeasible` when the root table is empty.
pub fn solve_exact(
    inst: &WeightedInstance,
    ntd: &NiceTreeDecomposition,
    opts: &ExactOptions,
) -> Result<CvcOutcome, Error> {
    let tables = compute_tables(inst, ntd, opts)?;
    Ok(outcome_from_tables(inst, ntd, &tables))
}

/// Extracts the root answer and witness from precomputed tables.
pub fn outcome_from_tables(
    inst: &WeightedInstance,
    ntd: &NiceTreeDecomposition,
    tables: &[ExactRecordSet],
) -> CvcOutcome {
    let root = &tables[ntd.root()];
    debug_assert!(root.bag.is_empty());
    if root.entries.is_empty() {
        return CvcOutcome::Infeasible;
    }
    let opt = root.min_k().unwrap();
    let witness = reconstruct(inst, ntd, tables, ntd.root(), &Vec::new());
    debug_assert!(orientation_feasible(
        inst.graph(),
        &witness,
        inst.weights(),
        &inst.graph().vertices().collect(),
    ));
    debug_assert_eq!(witness.covered_vertices(inst.graph().n()).len(), opt);
    CvcOutcome::Feasible { opt, witness }
}

impl CvcOutcome {
    pub fn opt(&self) -> Option<usize> {
        match self {
            CvcOutcome::Feasible { opt, .. } => Some(*opt),
            CvcOutcome::Infeasible => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Graph, ProblemKind};
    use crate::nice::make_nice;
    use crate::td::min_fill_decomposition;

    fn solve(n: usize, edges: &[(usize, usize)], caps: Vec<usize>) -> Option<usize> {
        let g = Graph::from_edges(n, edges).unwrap();
        let inst = WeightedInstance::new(g, ProblemKind::Cvc, caps).unwrap();
        let td = min_fill_decomposition(inst.graph());
        let ntd = make_nice(inst.graph(), &td).unwrap();
        solve_exact(&inst, &ntd, &ExactOptions::default())
            .unwrap()
            .opt()
    }

    #[test]
    fn leaf_membership() {
        let t = leaf_table();
        assert!(t.contains(&[], 0));
        assert!(!t.contains(&[], 1)); // k <= |Y| = 0
        assert_eq!(t.min_k(), Some(0));
    }

    #[test]
    fn introduce_extends_by_zero() {
        let t = introduce_table(&leaf_table(), 1);
        assert_eq!(t.bag, vec![1]);
        assert!(t.contains(&[0], 0));
        assert_eq!(t.entries.len(), 1);

        // Two vectors stay two vectors, k_min values unchanged.
        let mut two = introduce_table(&leaf_table(), 1);
        two.y_size = 3;
        two.entries.insert(
            vec![2],
            Entry {
                k_min: 2,
                back: Back::Leaf,
            },
        );
        let ext = introduce_table(&two, 4);
        assert_eq!(ext.bag, vec![1, 4]);
        assert_eq!(ext.entries[&vec![0u32, 0]].k_min, 0);
        assert_eq!(ext.entries[&vec![2u32, 0]].k_min, 2);
        assert_eq!(ext.entries.len(), 2);
    }

    #[test]
    fn join_sums_vectors_and_budgets() {
        let zero = introduce_table(&leaf_table(), 1);
        let joined = join_table(&zero, &zero);
        assert_eq!(joined.as_kmin_map()[&vec![0u32]], 0);
        assert_eq!(joined.entries.len(), 1);

        let mut left = ExactRecordSet {
            bag: vec![1],
            y_size: 1,
            entries: BTreeMap::new(),
        };
        left.entries.insert(
            vec![1],
            Entry {
                k_min: 1,
                back: Back::Leaf,
            },
        );
        let mut right = left.clone();
        right.entries.clear();
        right.entries.insert(
            vec![2],
            Entry {
                k_min: 1,
                back: Back::Leaf,
            },
        );
        let joined = join_table(&left, &right);
        assert_eq!(joined.y_size, 2);
        assert_eq!(joined.as_kmin_map()[&vec![3u32]], 2);
        assert_eq!(joined.entries.len(), 1);
    }

    #[test]
    fn path2_unit_capacities() {
        assert_eq!(solve(2, &[(1, 2)], vec![1, 1]), Some(1));
    }

    #[test]
    fn triangle_unit_capacities() {
        // Each vertex covers at most one of the three edges.
        assert_eq!(solve(3, &[(1, 2), (2, 3), (1, 3)], vec![1, 1, 1]), Some(3));
    }

    #[test]
    fn triangle_capacity_two() {
        assert_eq!(solve(3, &[(1, 2), (2, 3), (1, 3)], vec![2, 2, 2]), Some(2));
    }

    #[test]
    fn path3_infeasible() {
        assert_eq!(solve(3, &[(1, 2), (2, 3)], vec![0, 1, 0]), None);
    }

    #[test]
    fn star_center_covers_everything() {
        assert_eq!(
            solve(4, &[(1, 2), (1, 3), (1, 4)], vec![3, 0, 0, 0]),
            Some(1)
        );
    }

    #[test]
    fn witness_is_a_valid_cover() {
        let g = Graph::from_edges(4, &[(1, 2), (2, 3), (3, 4), (1, 4)]).unwrap();
        let inst = WeightedInstance::new(g, ProblemKind::Cvc, vec![2, 1, 2, 1]).unwrap();
        let td = min_fill_decomposition(inst.graph());
        let ntd = make_nice(inst.graph(), &td).unwrap();
        let CvcOutcome::Feasible { opt, witness } =
            solve_exact(&inst, &ntd, &ExactOptions::default()).unwrap()
        else {
            panic!("expected feasible");
        };
        assert_eq!(witness.len(), inst.graph().m());
        assert!(orientation_feasible(
            inst.graph(),
            &witness,
            inst.weights(),
            &inst.graph().vertices().collect(),
        ));
        assert_eq!(witness.covered_vertices(4).len(), opt);
    }

    #[test]
    fn tiny_table_cap_trips_resource_guard() {
        let g = Graph::from_edges(4, &[(1, 2), (2, 3), (3, 4), (1, 4)]).unwrap();
        let inst = WeightedInstance::new(g, ProblemKind::Cvc, vec![2; 4]).unwrap();
        let td = min_fill_decomposition(inst.graph());
        let ntd = make_nice(inst.graph(), &td).unwrap();
        let err = solve_exact(&inst, &ntd, &ExactOptions { table_cap: 1 }).unwrap_err();
        assert!(matches!(err, Error::Resource { .. }));
    }

    #[test]
    fn stored_records_respect_structural_bounds() {
        // k_min(d) >= max_v d(v) on every stored record, and lowering a
        // coordinate never increases k_min.
        let g = Graph::from_edges(5, &[(1, 2), (2, 3), (3, 4), (4, 5), (1, 5), (2, 4)]).unwrap();
        let inst = WeightedInstance::new(g, ProblemKind::Cvc, vec![1, 2, 1, 2, 1]).unwrap();
        let td = min_fill_decomposition(inst.graph());
        let ntd = make_nice(inst.graph(), &td).unwrap();
        let tables = compute_tables(&inst, &ntd, &ExactOptions::default()).unwrap();
        for table in &tables {
            for (d, e) in &table.entries {
                let dmax = d.iter().copied().max().unwrap_or(0) as usize;
                assert!(e.k_min >= dmax, "budget below an outdegree");
                for i in 0..d.len() {
                    if d[i] == 0 {
                        continue;
                    }
                    let mut lower = d.clone();
                    lower[i] -= 1;
                    let le = table.entries.get(&lower).expect("downward closure");
                    assert!(le.k_min <= e.k_min);
                }
            }
        }
    }
}
