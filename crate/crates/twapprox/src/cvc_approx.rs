//! The rounded approximate DP for capacitated vertex cover.
//!
//! Tables mirror the exact DP but store d-values in `N_eps`, so each node
//! keeps at most `(log n / eps)^|bag|` distinct vectors instead of
//! `n^|bag|`. Join nodes add values with rounding; forgetting nodes cannot
//! compare a rounded value against the capacity directly, so they combine a
//! tolerance window at the child height with a polynomial-time flow test
//! for the fully-relaxed budget `(d_t, |Y|)`. The reported value
//! `(1+delta_h0) * min k_hat` lies in `[OPT, (1+delta_h0)^2 * OPT]`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::{One, Signed, ToPrimitive};

use crate::cvc_exact::{DVec, ForgetCtx};
use crate::error::Error;
use crate::flow::{ArcId, FlowNetwork};
use crate::graph::{orientation_feasible, Orientation, WeightedInstance};
use crate::nice::{NiceTreeDecomposition, NodeKind};
use crate::rounding::{
    ratio_from_usize, schedule, schedule_with, EpsArith, ErrorSchedule, Rational, RoundedValue,
};

/// Rounded outdegree vector indexed by the sorted bag.
pub type AVec = Vec<RoundedValue>;

/// Provenance of an approximate entry, mirroring the exact DP's rules plus
/// the `(delta, A)` choice of the forgetting branch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ApproxBack {
    Leaf,
    Introduce {
        child: AVec,
    },
    Join {
        left: AVec,
        right: AVec,
    },
    ForgetSkip {
        child: AVec,
    },
    ForgetTake {
        child: AVec,
        delta: Vec<usize>,
        a: usize,
    },
}

#[derive(Debug, Clone)]
pub struct ApproxEntry {
    pub k_min: usize,
    pub back: ApproxBack,
}

/// Per-node approximate table: minimum `k_hat` per rounded d-vector.
#[derive(Debug, Clone)]
pub struct ApproxRecordSet {
    pub bag: Vec<usize>,
    pub y_size: usize,
    pub entries: BTreeMap<AVec, ApproxEntry>,
}

impl ApproxRecordSet {
    pub fn min_k(&self) -> Option<usize> {
        self.entries.values().map(|e| e.k_min).min()
    }

    fn insert_min(&mut self, d: AVec, k_min: usize, back: ApproxBack) {
        debug_assert!(k_min <= self.y_size);
        match self.entries.get_mut(&d) {
            Some(e) if e.k_min <= k_min => {}
            Some(e) => {
                e.k_min = k_min;
                e.back = back;
            }
            None => {
                self.entries.insert(d, ApproxEntry { k_min, back });
            }
        }
    }
}

/// Table for a leaf node: the single empty record.
pub fn approx_leaf_table() -> ApproxRecordSet {
    let mut entries = BTreeMap::new();
    entries.insert(
        Vec::new(),
        ApproxEntry {
            k_min: 0,
            back: ApproxBack::Leaf,
        },
    );
    ApproxRecordSet {
        bag: Vec::new(),
        y_size: 0,
        entries,
    }
}

/// Introduce-`v` rule: extend by a zero value.
pub fn approx_introduce_table(child: &ApproxRecordSet, v: usize) -> ApproxRecordSet {
    debug_assert!(!child.bag.contains(&v));
    let pos = child.bag.partition_point(|&u| u < v);
    let mut bag = child.bag.clone();
    bag.insert(pos, v);
    let mut entries = BTreeMap::new();
    for (d1, e1) in &child.entries {
        let mut d = d1.clone();
        d.insert(pos, RoundedValue::Zero);
        entries.insert(
            d,
            ApproxEntry {
                k_min: e1.k_min,
                back: ApproxBack::Introduce { child: d1.clone() },
            },
        );
    }
    ApproxRecordSet {
        bag,
        y_size: child.y_size,
        entries,
    }
}

/// Join rule: rounded pointwise sums, budgets add. The smaller table runs
/// outermost and products dedup immediately, bounding peak memory.
pub fn approx_join_table(
    left: &ApproxRecordSet,
    right: &ApproxRecordSet,
    arith: &EpsArith,
) -> ApproxRecordSet {
    debug_assert_eq!(left.bag, right.bag);
    let (outer, inner, swapped) = if left.entries.len() <= right.entries.len() {
        (left, right, false)
    } else {
        (right, left, true)
    };
    let mut table = ApproxRecordSet {
        bag: left.bag.clone(),
        y_size: left.y_size + right.y_size,
        entries: BTreeMap::new(),
    };
    for (d1, e1) in &outer.entries {
        for (d2, e2) in &inner.entries {
            let d: AVec = d1.iter().zip(d2).map(|(&a, &b)| arith.add(a, b)).collect();
            let (l, r) = if swapped { (d2, d1) } else { (d1, d2) };
            table.insert_min(
                d,
                e1.k_min + e2.k_min,
                ApproxBack::Join {
                    left: l.clone(),
                    right: r.clone(),
                },
            );
        }
    }
    table
}

/// Membership tester for `(d_t, |Y|)` records at the child of a forgetting
/// node. The production implementation is the flow test, memoized per node;
/// unit tests may inject a fake.
pub trait RecordTester {
    fn test(&mut self, d_t: &[usize]) -> Result<bool, Error>;
}

/// Forget-`v` rule. For each child record, the skip branch keeps `v` out
/// of the cover: its rounded value must sit within the child-height
/// tolerance of `|N(v) ∩ Y|`, and the pessimistically-rounded budget-free
/// record must pass the flow test. The take branch brings `v` in,
/// enumerating the covered bag edges `delta` and the outdegree `A` within
/// the capacity window, with the analogous tolerance and flow checks; the
/// product bumps the `delta` coordinates by a rounded increment.
pub fn approx_forget_table(
    child: &ApproxRecordSet,
    ctx: &ForgetCtx,
    eps_prev: &Rational,
    arith: &EpsArith,
    tester: &mut dyn RecordTester,
) -> Result<ApproxRecordSet, Error> {
    let pos = child.bag.partition_point(|&u| u < ctx.v);
    debug_assert_eq!(child.bag.get(pos), Some(&ctx.v));
    let mut bag = child.bag.clone();
    bag.remove(pos);
    let delta_positions: Vec<usize> = ctx
        .bag_neighbors
        .iter()
        .map(|&u| bag.partition_point(|&w| w < u))
        .collect();

    // Thresholds `A / (1 + eps_prev)` for the take branch, shared across entries.
    let one_plus_prev = Rational::one() + eps_prev;
    let a_thresholds: Vec<Rational> = (0..=ctx.y_neighbors)
        .map(|a| ratio_from_usize(a) / &one_plus_prev)
        .collect();

    let mut table = ApproxRecordSet {
        bag,
        y_size: child.y_size + 1,
        entries: BTreeMap::new(),
    };

    for (d1, e1) in &child.entries {
        let mut d_t: Vec<usize> = d1
            .iter()
            .map(|&val| arith.ceil_div_one_plus(val, eps_prev))
            .collect();

        // Skip branch: v stays out.
        if arith.close_to_int(d1[pos], ctx.y_neighbors, eps_prev) {
            d_t[pos] = ctx.y_neighbors;
            if tester.test(&d_t)? {
                let mut d = d1.clone();
                d.remove(pos);
                table.insert_min(d, e1.k_min, ApproxBack::ForgetSkip { child: d1.clone() });
            }
        }

        // Take branch: v joins the cover.
        for mask in 0u32..(1 << ctx.bag_neighbors.len()) {
            let delta_size = mask.count_ones() as usize;
            let a_lo = (ctx.y_neighbors + delta_size).saturating_sub(ctx.capacity);
            #[allow(clippy::needless_range_loop)] // `a` is the target outdegree
            for a in a_lo..=ctx.y_neighbors {
                if !arith.ge_ratio(d1[pos], &a_thresholds[a]) {
                    continue;
                }
                d_t[pos] = a;
                if !tester.test(&d_t)? {
                    continue;
                }
                let mut d = d1.clone();
                d.remove(pos);
                let mut delta = Vec::with_capacity(delta_size);
                for (i, &p) in delta_positions.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        d[p] = arith.add_one(d[p]);
                        delta.push(ctx.bag_neighbors[i]);
                    }
                }
                table.insert_min(
                    d,
                    e1.k_min + 1,
                    ApproxBack::ForgetTake {
                        child: d1.clone(),
                        delta,
                        a,
                    },
                );
            }
        }
    }
    Ok(table)
}

/// Builds the membership-test network for node `node` and target `d_t`
/// (indexed by the sorted bag): source -> edge nodes (cap 1), edge ->
/// endpoint (cap 1), bag vertex -> sink (cap `|N(v) ∩ Y| - d_t(v)`),
/// Y vertex -> sink (cap `c(v)`). `(d_t, |Y|)` is a record iff the max
/// flow saturates all edge nodes.
struct MembershipNetwork {
    net: FlowNetwork,
    scope: Vec<(usize, usize)>,
    /// Per scope edge, the arcs to its two endpoints (smaller endpoint first).
    endpoint_arcs: Vec<(ArcId, ArcId)>,
}

fn build_membership_network(
    inst: &WeightedInstance,
    ntd: &NiceTreeDecomposition,
    node: usize,
    d_t: &[usize],
) -> Option<MembershipNetwork> {
    let g = inst.graph();
    let bag = ntd.bag_sorted(node);
    debug_assert_eq!(bag.len(), d_t.len());
    let scope = ntd.scope_edges(g, node);
    let v_all: Vec<usize> = ntd.v_set(node).iter().copied().collect();
    let vertex_node: BTreeMap<usize, usize> = v_all
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, 2 + scope.len() + i))
        .collect();

    let mut net = FlowNetwork::new(2 + scope.len() + v_all.len(), 0, 1);
    let mut endpoint_arcs = Vec::with_capacity(scope.len());
    for (i, &(u, v)) in scope.iter().enumerate() {
        net.add_arc(0, 2 + i, 1);
        let a_u = net.add_arc(2 + i, vertex_node[&u], 1);
        let a_v = net.add_arc(2 + i, vertex_node[&v], 1);
        endpoint_arcs.push((a_u, a_v));
    }
    for (i, &x) in bag.iter().enumerate() {
        let n_xy = ntd.y_neighbor_count(g, node, x);
        if d_t[i] > n_xy {
            return None; // no orientation can exceed the Y-degree
        }
        net.add_arc(vertex_node[&x], 1, (n_xy - d_t[i]) as u64);
    }
    for &y in &ntd.y_set(node) {
        net.add_arc(vertex_node[&y], 1, inst.weight(y) as u64);
    }
    Some(MembershipNetwork {
        net,
        scope,
        endpoint_arcs,
    })
}

/// True iff `(d_t, |Y_node|)` is a record of the exact table at `node`,
/// decided in polynomial time by the flow construction. Vectors outside
/// the valid box `0 <= d_t(v) <= |N(v) ∩ Y|` are never members.
pub fn feasibility_test(
    inst: &WeightedInstance,
    ntd: &NiceTreeDecomposition,
    node: usize,
    d_t: &[usize],
) -> bool {
    match build_membership_network(inst, ntd, node, d_t) {
        None => false,
        Some(l) => l.net.max_flow().value == l.scope.len() as u64,
    }
}

/// Like [`feasibility_test`], but also extracts an orientation realizing
/// outdegrees exactly `d_t` on the bag with capacities respected on `Y`.
pub fn feasibility_orientation(
    inst: &WeightedInstance,
    ntd: &NiceTreeDecomposition,
    node: usize,
    d_t: &[usize],
) -> Option<Orientation> {
    let l = build_membership_network(inst, ntd, node, d_t)?;
    let res = l.net.max_flow();
    if res.value != l.scope.len() as u64 {
        return None;
    }
    let mut o = Orientation::new();
    for (i, &(u, v)) in l.scope.iter().enumerate() {
        let (a_u, a_v) = l.endpoint_arcs[i];
        let sink = if res.flow(a_u) == 1 {
            u
        } else {
            debug_assert_eq!(res.flow(a_v), 1);
            v
        };
        o.set_sink(u, v, sink);
    }
    // The flow bounds indegrees, so outdegrees may exceed the target;
    // reverse surplus out-edges back onto the bag vertex (Y indegrees only
    // drop, so capacities stay respected).
    let g = inst.graph();
    let bag = ntd.bag_sorted(node);
    for (i, &x) in bag.iter().enumerate() {
        let incident: Vec<usize> = g
            .neighbors(x)
            .iter()
            .copied()
            .filter(|&y| ntd.y_contains(node, y))
            .collect();
        let mut outdeg = incident
            .iter()
            .filter(|&&y| o.sink_of(x, y) == Some(y))
            .count();
        for &y in &incident {
            if outdeg <= d_t[i] {
                break;
            }
            if o.sink_of(x, y) == Some(y) {
                o.reverse(x, y);
                outdeg -= 1;
            }
        }
        debug_assert_eq!(outdeg, d_t[i]);
    }
    Some(o)
}

struct FlowTester<'a> {
    inst: &'a WeightedInstance,
    ntd: &'a NiceTreeDecomposition,
    node: usize,
    memo: HashMap<Vec<usize>, bool>,
}

impl RecordTester for FlowTester<'_> {
    fn test(&mut self, d_t: &[usize]) -> Result<bool, Error> {
        if let Some(&hit) = self.memo.get(d_t) {
            return Ok(hit);
        }
        let ok = feasibility_test(self.inst, self.ntd, self.node, d_t);
        self.memo.insert(d_t.to_vec(), ok);
        Ok(ok)
    }
}

/// Options for the approximate solver.
#[derive(Debug, Clone)]
pub struct ApproxOptions {
    /// Overrides the default `eps = 1/(w^2 log2 n)^3`.
    pub epsilon: Option<Rational>,
    /// Cap on distinct rounded vectors per node.
    pub table_cap: usize,
}

impl Default for ApproxOptions {
    fn default() -> Self {
        ApproxOptions {
            epsilon: None,
            table_cap: 1_000_000,
        }
    }
}

/// Result of an approximate solve.
#[derive(Debug, Clone)]
pub enum ApproxOutcome {
    Feasible(Box<ApproxSolution>),
    Infeasible,
}

#[derive(Debug, Clone)]
pub struct ApproxSolution {
    /// `(1 + delta_h0) * min k_hat`, guaranteed within
    /// `[OPT, (1+delta_h0)^2 * OPT]`. Kept exact; consumers may ceil it.
    pub k_hat_min: Rational,
    /// `ceil(k_hat_min)`, the integer form of the reported value.
    pub k_hat_min_ceil: usize,
    /// Valid lower bound on OPT: `ceil(min k_hat / (1 + delta_h0))`.
    pub opt_lower: usize,
    /// The raw root minimum before inflation.
    pub min_k_hat: usize,
    pub delta_h0: Rational,
    pub epsilon: Rational,
    pub h0: usize,
    /// Orientation of all edges; its covered vertices form a feasible cover
    /// of size at most `(1+delta_h0)^2 * OPT`.
    pub witness: Orientation,
    pub witness_size: usize,
    /// Table size per node, in postorder.
    pub table_sizes: Vec<usize>,
}

/// Computes all approximate tables plus the schedule they were built under.
pub fn compute_approx_tables(
    inst: &WeightedInstance,
    ntd: &NiceTreeDecomposition,
    opts: &ApproxOptions,
) -> Result<(Vec<ApproxRecordSet>, ErrorSchedule), Error> {
    let sched = match &opts.epsilon {
        Some(eps) => schedule_with(eps.clone(), ntd.root_height())?,
        None => schedule(ntd.width().max(1), inst.graph().n(), ntd.root_height())?,
    };
    let table_cap = opts.table_cap.max(1);

    let mut tables: Vec<Option<ApproxRecordSet>> = vec![None; ntd.num_nodes()];
    for node in ntd.postorder() {
        let table = match ntd.kind(node) {
            NodeKind::Leaf => approx_leaf_table(),
            NodeKind::Introduce(v) => {
                approx_introduce_table(tables[ntd.children(node)[0]].as_ref().unwrap(), v)
            }
            NodeKind::Join => {
                let [a, b] = ntd.children(node) else {
                    unreachable!()
                };
                approx_join_table(
                    tables[*a].as_ref().unwrap(),
                    tables[*b].as_ref().unwrap(),
                    &sched.arith,
                )
            }
            NodeKind::Forget(v) => {
                let child = ntd.children(node)[0];
                let ctx = crate::cvc_exact::forget_ctx(inst, ntd, node, v);
                let eps_prev = sched.eps_h(ntd.height(node) - 1).clone();
                let mut tester = FlowTester {
                    inst,
                    ntd,
                    node: child,
                    memo: HashMap::new(),
                };
                approx_forget_table(
                    tables[child].as_ref().unwrap(),
                    &ctx,
                    &eps_prev,
                    &sched.arith,
                    &mut tester,
                )?
            }
        };
        if table.entries.len() > table_cap {
            return Err(Error::resource(
                format!("approximate record table at node {node}"),
                table_cap,
                table.entries.len(),
                "raise --table-cap or use a larger --epsilon to coarsen the tables",
            ));
        }
        tables[node] = Some(table);
    }
    Ok((tables.into_iter().map(Option::unwrap).collect(), sched))
}

fn ceil_to_usize(r: &Rational) -> usize {
    debug_assert!(!r.is_negative());
    r.ceil().to_integer().to_usize().unwrap_or(usize::MAX)
}

/// Runs the approximate DP end to end: tables, root value, and a feasible
/// witness rebuilt by tracking an exact close record down the backrefs.
pub fn solve_cvc_approx(
    inst: &WeightedInstance,
    ntd: &NiceTreeDecomposition,
    opts: &ApproxOptions,
) -> Result<ApproxOutcome, Error> {
    let (tables, sched) = compute_approx_tables(inst, ntd, opts)?;
    let root = &tables[ntd.root()];
    let Some(min_k_hat) = root.min_k() else {
        return Ok(ApproxOutcome::Infeasible);
    };
    let delta = sched.delta_h0().clone();
    let inflate = Rational::one() + &delta;
    let k_hat_min = ratio_from_usize(min_k_hat) * &inflate;
    let opt_lower = ceil_to_usize(&(ratio_from_usize(min_k_hat) / &inflate));

    let witness = reconstruct_witness(inst, ntd, &tables, &sched)?;
    debug_assert!(orientation_feasible(
        inst.graph(),
        &witness,
        inst.weights(),
        &inst.graph().vertices().collect(),
    ));
    let witness_size = witness.covered_vertices(inst.graph().n()).len();

    Ok(ApproxOutcome::Feasible(Box::new(ApproxSolution {
        k_hat_min_ceil: ceil_to_usize(&k_hat_min),
        k_hat_min,
        opt_lower,
        min_k_hat,
        delta_h0: delta,
        epsilon: sched.arith.eps().clone(),
        h0: sched.h0(),
        witness,
        witness_size,
        table_sizes: ntd
            .postorder()
            .iter()
            .map(|&n| tables[n].entries.len())
            .collect(),
    })))
}

/// An exact record shadowing an approximate entry during reconstruction:
/// its d-vector, budget, and certifying orientation of the node's scope.
struct ExactShadow {
    d: DVec,
    k: usize,
    o: Orientation,
}

/// Rebuilds a feasible cover witness from the root's minimal entry.
///
/// Every approximate entry has an exact record close to it at the node's
/// height; following the backrefs, the shadow is rebuilt bottom-up. At
/// forgetting nodes the child shadow is first lowered onto the tested
/// vector (reversing surplus out-edges), then its forgotten coordinate is
/// raised to the tested target by path reversals against the flow-test
/// orientation; the budget grows by the raise and caps at `|Y|`.
fn reconstruct_witness(
    inst: &WeightedInstance,
    ntd: &NiceTreeDecomposition,
    tables: &[ApproxRecordSet],
    sched: &ErrorSchedule,
) -> Result<Orientation, Error> {
    let root = ntd.root();
    let key: AVec = Vec::new();
    let shadow = shadow_for(inst, ntd, tables, sched, root, &key)?;
    debug_assert_eq!(shadow.o.len(), inst.graph().m());
    Ok(shadow.o)
}

fn shadow_for(
    inst: &WeightedInstance,
    ntd: &NiceTreeDecomposition,
    tables: &[ApproxRecordSet],
    sched: &ErrorSchedule,
    node: usize,
    key: &AVec,
) -> Result<ExactShadow, Error> {
    let entry = tables[node]
        .entries
        .get(key)
        .expect("backref points at a live entry");
    match &entry.back {
        ApproxBack::Leaf => Ok(ExactShadow {
            d: Vec::new(),
            k: 0,
            o: Orientation::new(),
        }),
        ApproxBack::Introduce { child } => {
            let c = ntd.children(node)[0];
            let mut s = shadow_for(inst, ntd, tables, sched, c, child)?;
            let NodeKind::Introduce(v) = ntd.kind(node) else {
                unreachable!()
            };
            let pos = tables[c].bag.partition_point(|&u| u < v);
            s.d.insert(pos, 0);
            Ok(s)
        }
        ApproxBack::Join { left, right } => {
            let [a, b] = ntd.children(node) else {
                unreachable!()
            };
            let sa = shadow_for(inst, ntd, tables, sched, *a, left)?;
            let sb = shadow_for(inst, ntd, tables, sched, *b, right)?;
            let mut o = sa.o;
            o.absorb(&sb.o);
            Ok(ExactShadow {
                d: sa.d.iter().zip(&sb.d).map(|(x, y)| x + y).collect(),
                k: sa.k + sb.k,
                o,
            })
        }
        ApproxBack::ForgetSkip { child } | ApproxBack::ForgetTake { child, .. } => {
            let NodeKind::Forget(v) = ntd.kind(node) else {
                unreachable!()
            };
            let c = ntd.children(node)[0];
            let mut s = shadow_for(inst, ntd, tables, sched, c, child)?;
            let ctx = crate::cvc_exact::forget_ctx(inst, ntd, node, v);
            let pos = tables[c].bag.partition_point(|&u| u < v);
            let arith = &sched.arith;
            let eps_prev = sched.eps_h(ntd.height(node) - 1);

            // The tested vector the rule verified via the flow test.
            let mut d_t: Vec<usize> = child
                .iter()
                .map(|&val| arith.ceil_div_one_plus(val, eps_prev))
                .collect();
            let (target_a, delta): (usize, &[usize]) = match &entry.back {
                ApproxBack::ForgetSkip { .. } => (ctx.y_neighbors, &[]),
                ApproxBack::ForgetTake { delta, a, .. } => (*a, delta),
                _ => unreachable!(),
            };
            d_t[pos] = target_a;

            // Lower every coordinate of the shadow onto d_t (closeness
            // guarantees d_t <= shadow.d off the forgotten coordinate).
            let child_bag = tables[c].bag.clone();
            for (i, &u) in child_bag.iter().enumerate() {
                let want = if i == pos {
                    (s.d[i] as usize).min(target_a)
                } else {
                    debug_assert!(d_t[i] <= s.d[i] as usize, "tested vector above the shadow");
                    d_t[i]
                };
                lower_outdegree(inst, ntd, c, &mut s.o, u, s.d[i] as usize, want);
                s.d[i] = want as u32;
            }

            // Raise the forgotten coordinate to the tested target against
            // the flow-test orientation, one reversal path per unit.
            if (s.d[pos] as usize) < target_a {
                let o_target =
                    feasibility_orientation(inst, ntd, c, &d_t).expect("rule verified this record");
                let p = target_a - s.d[pos] as usize;
                let mut in_scope: BTreeSet<usize> = ntd.y_set(c);
                in_scope.insert(v);
                let scope_edges = ntd.scope_edges(inst.graph(), c);
                for _ in 0..p {
                    extent_raise_one(&mut s.o, &o_target, v, &in_scope, &scope_edges);
                }
                s.d[pos] = target_a as u32;
                s.k = (s.k + p).min(tables[c].y_size);
            }

            // Orient the bag edges of v that enter the scope here.
            for &u in inst.graph().neighbors(v) {
                if ntd.bag(node).contains(&u) {
                    let sink = if delta.contains(&u) { v } else { u };
                    s.o.set_sink(v, u, sink);
                }
            }

            let mut d = s.d.clone();
            d.remove(pos);
            for &u in delta {
                let new_pos = tables[node].bag.partition_point(|&w| w < u);
                d[new_pos] += 1;
            }
            let k = match &entry.back {
                ApproxBack::ForgetSkip { .. } => s.k,
                _ => s.k + 1,
            };
            debug_assert!(cover_within_capacity(inst, ntd, node, &s.o));
            Ok(ExactShadow { d, k, o: s.o })
        }
    }
}

/// Reverses out-edges of `u` toward `Y` (smallest head first) until its
/// outdegree drops from `from` to `to`. Y indegrees only decrease.
fn lower_outdegree(
    inst: &WeightedInstance,
    ntd: &NiceTreeDecomposition,
    node: usize,
    o: &mut Orientation,
    u: usize,
    from: usize,
    to: usize,
) {
    debug_assert!(to <= from);
    let mut surplus = from - to;
    if surplus == 0 {
        return;
    }
    for &y in inst.graph().neighbors(u) {
        if surplus == 0 {
            break;
        }
        if ntd.y_contains(node, y) && o.sink_of(u, y) == Some(y) {
            o.reverse(u, y);
            surplus -= 1;
        }
    }
    debug_assert_eq!(surplus, 0);
}

/// One unit of the outdegree raise: where `o_cur` and `o_target` disagree
/// (within `Y ∪ {v}`), the disagreement digraph is first made acyclic by
/// reversing cycles in `o_cur` (which changes no degree), then one maximal
/// path from `v` is reversed, raising `v`'s outdegree by one while keeping
/// all `Y` indegrees within the target's capacities.
fn extent_raise_one(
    o_cur: &mut Orientation,
    o_target: &Orientation,
    v: usize,
    in_scope: &BTreeSet<usize>,
    scope_edges: &[(usize, usize)],
) {
    loop {
        let gprime = disagreement_digraph(o_cur, o_target, in_scope, scope_edges);
        if let Some(cycle) = find_cycle(&gprime) {
            for &(x, y) in &cycle {
                o_cur.reverse(x, y);
            }
            continue;
        }
        // Acyclic now: walk the maximal path from v and reverse it.
        let mut path = Vec::new();
        let mut cur = v;
        while let Some(nexts) = gprime.get(&cur) {
            let Some(&next) = nexts.first() else { break };
            path.push((cur, next));
            cur = next;
        }
        assert!(
            !path.is_empty(),
            "the forgotten vertex must have a disagreement out-edge"
        );
        for &(x, y) in &path {
            o_cur.reverse(x, y);
        }
        return;
    }
}

/// Arcs `x -> y` where the target orientation sinks `y` but the current one
/// sinks `x`, restricted to `in_scope`; adjacency sorted for determinism.
fn disagreement_digraph(
    o_cur: &Orientation,
    o_target: &Orientation,
    in_scope: &BTreeSet<usize>,
    scope_edges: &[(usize, usize)],
) -> BTreeMap<usize, Vec<usize>> {
    let mut out: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &(a, b) in scope_edges {
        if !(in_scope.contains(&a) && in_scope.contains(&b)) {
            continue;
        }
        let cur = o_cur.sink_of(a, b).unwrap();
        let tgt = o_target.sink_of(a, b).unwrap();
        if cur != tgt {
            // cur sinks at `cur`, target sinks at `tgt`: arc cur -> tgt...
            // the arc runs from the target's source, which is `cur`.
            out.entry(cur).or_default().push(tgt);
        }
    }
    for heads in out.values_mut() {
        heads.sort_unstable();
    }
    out
}

/// Finds a directed cycle, returned as its arc list, if one exists.
fn find_cycle(gprime: &BTreeMap<usize, Vec<usize>>) -> Option<Vec<(usize, usize)>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Color {
        White,
        Grey,
        Black,
    }
    let mut color: BTreeMap<usize, Color> = BTreeMap::new();
    for &start in gprime.keys() {
        if color.get(&start).copied().unwrap_or(Color::White) != Color::White {
            continue;
        }
        // Iterative DFS tracking the active path.
        let mut stack: Vec<(usize, usize)> = vec![(start, 0)];
        let mut path: Vec<usize> = vec![start];
        color.insert(start, Color::Grey);
        while let Some(frame) = stack.last_mut() {
            let node = frame.0;
            let idx = frame.1;
            frame.1 += 1;
            let heads = gprime.get(&node).map(|h| h.as_slice()).unwrap_or(&[]);
            if idx >= heads.len() {
                stack.pop();
                path.pop();
                color.insert(node, Color::Black);
                continue;
            }
            let next = heads[idx];
            match color.get(&next).copied().unwrap_or(Color::White) {
                Color::Grey => {
                    // Cycle: slice the active path from `next` onward.
                    let from = path.iter().position(|&x| x == next).unwrap();
                    let mut cycle: Vec<(usize, usize)> =
                        path[from..].windows(2).map(|w| (w[0], w[1])).collect();
                    cycle.push((node, next));
                    return Some(cycle);
                }
                Color::White => {
                    color.insert(next, Color::Grey);
                    path.push(next);
                    stack.push((next, 0));
                }
                Color::Black => {}
            }
        }
    }
    None
}

#[cfg(test)]
fn cover_within_capacity(
    inst: &WeightedInstance,
    ntd: &NiceTreeDecomposition,
    node: usize,
    o: &Orientation,
) -> bool {
    let deg = o.indegrees(inst.graph().n());
    ntd.y_set(node).iter().all(|&y| deg[y] <= inst.weight(y))
}

#[cfg(not(test))]
fn cover_within_capacity(
    _inst: &WeightedInstance,
    _ntd: &NiceTreeDecomposition,
    _node: usize,
    _o: &Orientation,
) -> bool {
    true
}
