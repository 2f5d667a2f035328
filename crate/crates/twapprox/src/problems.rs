//! Problem-specific semantics plugged into the subset framework: target-set
//! activation and domination checks, brute-force partial solvers, and the
//! default VDS budget.

use std::collections::BTreeSet;
use std::collections::VecDeque;

use crate::error::Error;
use crate::graph::{Graph, PartialInstance, ProblemKind, WeightedInstance};
use crate::oracles::subsets_by_size;
use crate::subset::SubsetProblem;

/// Default cap on subset checks inside the brute-force partial solvers;
/// n^(l+O(1)) is only desk-feasible for small budgets.
pub const DEFAULT_BRUTE_CAP: usize = 100_000_000;

/// The activation closure: the smallest superset of `seed` closed under
/// "a vertex with at least t(v) active neighbors activates".
///
/// Worklist procedure; monotone in the seed and idempotent.
pub fn tss_activate(g: &Graph, thresholds: &[usize], seed: &BTreeSet<usize>) -> BTreeSet<usize> {
    let mut active = vec![false; g.n() + 1];
    let mut count = vec![0usize; g.n() + 1]; // active neighbors per vertex
    let mut queue: VecDeque<usize> = VecDeque::new();
    for &v in seed {
        active[v] = true;
        queue.push_back(v);
    }
    // Zero-threshold vertices self-activate.
    for v in g.vertices() {
        if thresholds[v] == 0 && !active[v] {
            active[v] = true;
            queue.push_back(v);
        }
    }
    while let Some(v) = queue.pop_front() {
        for &u in g.neighbors(v) {
            count[u] += 1;
            if !active[u] && count[u] >= thresholds[u] {
                active[u] = true;
                queue.push_back(u);
            }
        }
    }
    g.vertices().filter(|&v| active[v]).collect()
}

/// True iff `seed` activates every vertex.
pub fn tss_is_target_set(g: &Graph, thresholds: &[usize], seed: &BTreeSet<usize>) -> bool {
    tss_activate(g, thresholds, seed).len() == g.n()
}

/// True iff every vertex outside `s` has at least its threshold many
/// neighbors inside `s`.
pub fn vds_check(g: &Graph, thresholds: &[usize], s: &BTreeSet<usize>) -> bool {
    g.vertices().all(|v| {
        s.contains(&v) || g.neighbors(v).iter().filter(|u| s.contains(u)).count() >= thresholds[v]
    })
}

fn brute_guard(examined: &mut usize, cap: usize, what: &str) -> Result<(), Error> {
    *examined += 1;
    if *examined > cap {
        return Err(Error::resource(
            format!("{what} subset enumeration"),
            cap,
            *examined,
            "the brute-force budget l is too large for this instance; lower --budget \
             or raise the cap",
        ));
    }
    Ok(())
}

/// Optimal TSS solution of size at most `l` for a partial instance, by
/// enumerating subsets of the free vertices in ascending size. `None` means
/// the partial optimum exceeds `l`.
pub fn tss_partial_brute(
    p: &PartialInstance<'_>,
    l: usize,
    cap: usize,
) -> Result<Option<BTreeSet<usize>>, Error> {
    let g = p.instance.graph();
    let thresholds = p.instance.weights();
    let pool = p.free_vertices();
    let mut examined = 0usize;
    let mut guard_err = None;
    let hit = subsets_by_size(&pool, l, |w| {
        if let Err(e) = brute_guard(&mut examined, cap, "TSS") {
            guard_err = Some(e);
            return Some(BTreeSet::new()); // stop iteration; error reported below
        }
        let mut s = w.clone();
        s.extend(p.excluded.iter().copied());
        tss_is_target_set(g, thresholds, &s).then(|| w.clone())
    });
    match guard_err {
        Some(e) => Err(e),
        None => Ok(hit),
    }
}

/// Optimal VDS solution of size at most `l` for a partial instance.
///
/// Works on the reduced instance `G[V \ U]` with thresholds lowered by the
/// neighbors already inside `U`: `t'(v) = max(0, t(v) - |N(v) ∩ U|)`.
pub fn vds_partial_brute(
    p: &PartialInstance<'_>,
    l: usize,
    cap: usize,
) -> Result<Option<BTreeSet<usize>>, Error> {
    let g = p.instance.graph();
    let pool = p.free_vertices();
    let reduced: Vec<usize> = {
        let mut t = vec![0usize; g.n() + 1];
        for &v in &pool {
            let in_u = g
                .neighbors(v)
                .iter()
                .filter(|u| p.excluded.contains(u))
                .count();
            t[v] = p.instance.weight(v).saturating_sub(in_u);
        }
        t
    };
    let mut examined = 0usize;
    let mut guard_err = None;
    let hit = subsets_by_size(&pool, l, |w| {
        if let Err(e) = brute_guard(&mut examined, cap, "VDS") {
            guard_err = Some(e);
            return Some(BTreeSet::new());
        }
        let ok = pool.iter().all(|&v| {
            w.contains(&v) || g.neighbors(v).iter().filter(|u| w.contains(u)).count() >= reduced[v]
        });
        ok.then(|| w.clone())
    });
    match guard_err {
        Some(e) => Err(e),
        None => Ok(hit),
    }
}

/// The default VDS budget `floor(w^2 * sqrt(log2 log2 n / log2 log2 log2 n))`,
/// clamped to at least 1, with 1 for n < 16 where the iterated logs vanish.
pub fn default_vds_budget(w: usize, n: usize) -> usize {
    if n < 16 {
        return 1;
    }
    let llog = (n as f64).log2().log2();
    let lllog = llog.log2();
    if lllog <= 0.0 {
        return 1;
    }
    let l = (w * w) as f64 * (llog / lllog).sqrt();
    (l.floor() as usize).max(1)
}

/// Target set selection as a monotone, splittable subset problem.
#[derive(Debug, Clone, Copy)]
pub struct TargetSetSelection {
    pub brute_cap: usize,
}

impl Default for TargetSetSelection {
    fn default() -> Self {
        TargetSetSelection {
            brute_cap: DEFAULT_BRUTE_CAP,
        }
    }
}

impl SubsetProblem for TargetSetSelection {
    fn kind(&self) -> ProblemKind {
        ProblemKind::Tss
    }

    fn is_solution(&self, inst: &WeightedInstance, s: &BTreeSet<usize>) -> bool {
        tss_is_target_set(inst.graph(), inst.weights(), s)
    }

    fn solve_partial(
        &self,
        p: &PartialInstance<'_>,
        l: usize,
    ) -> Result<Option<BTreeSet<usize>>, Error> {
        tss_partial_brute(p, l, self.brute_cap)
    }
}

/// Vector dominating set as a monotone, splittable subset problem.
#[derive(Debug, Clone, Copy)]
pub struct VectorDominatingSet {
    pub brute_cap: usize,
}

impl Default for VectorDominatingSet {
    fn default() -> Self {
        VectorDominatingSet {
            brute_cap: DEFAULT_BRUTE_CAP,
        }
    }
}

impl SubsetProblem for VectorDominatingSet {
    fn kind(&self) -> ProblemKind {
        ProblemKind::Vds
    }

    fn is_solution(&self, inst: &WeightedInstance, s: &BTreeSet<usize>) -> bool {
        vds_check(inst.graph(), inst.weights(), s)
    }

    fn solve_partial(
        &self,
        p: &PartialInstance<'_>,
        l: usize,
    ) -> Result<Option<BTreeSet<usize>>, Error> {
        vds_partial_brute(p, l, self.brute_cap)
    }
}
