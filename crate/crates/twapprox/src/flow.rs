//! Integral maximum flow on small directed networks (Dinic's algorithm:
//! BFS level graph plus blocking flow).
//!
//! Used by the record feasibility test and by the CVC brute-force oracle.

use std::collections::VecDeque;

/// A directed flow network under construction. Node ids are `0..num_nodes`.
#[derive(Debug, Clone)]
pub struct FlowNetwork {
    source: usize,
    sink: usize,
    // Forward/backward arc pairs; arc 2i is the i-th added arc, 2i+1 its reverse.
    head: Vec<usize>,
    cap: Vec<u64>,
    out: Vec<Vec<usize>>,
}

/// Identifier returned by [`FlowNetwork::add_arc`], usable to read the flow
/// on that arc out of a [`FlowResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ArcId(usize);

#[derive(Debug, Clone)]
pub struct FlowResult {
    pub value: u64,
    // Residual capacities after the run; flow(i) = cap(i) - residual(i).
    residual: Vec<u64>,
    original: Vec<u64>,
}

impl FlowResult {
    /// Integral flow carried by a forward arc.
    pub fn flow(&self, arc: ArcId) -> u64 {
        self.original[arc.0 * 2] - self.residual[arc.0 * 2]
    }
}

impl FlowNetwork {
    pub fn new(num_nodes: usize, source: usize, sink: usize) -> FlowNetwork {
        assert!(source < num_nodes && sink < num_nodes && source != sink);
        FlowNetwork {
            source,
            sink,
            head: Vec::new(),
            cap: Vec::new(),
            out: vec![Vec::new(); num_nodes],
        }
    }

    /// Adds a directed arc with integer capacity. Arcs into the source or out
    /// of the sink are rejected.
    pub fn add_arc(&mut self, from: usize, to: usize, capacity: u64) -> ArcId {
        assert!(from < self.out.len() && to < self.out.len());
        assert_ne!(to, self.source, "arc into the source");
        assert_ne!(from, self.sink, "arc out of the sink");
        assert_ne!(from, to);
        let id = self.head.len() / 2;
        self.out[from].push(self.head.len());
        self.head.push(to);
        self.cap.push(capacity);
        self.out[to].push(self.head.len());
        self.head.push(from);
        self.cap.push(0);
        ArcId(id)
    }

    /// Runs Dinic's algorithm. The returned flow is integral, conservative at
    /// internal nodes, and capacity-respecting.
    pub fn max_flow(&self) -> FlowResult {
        let n = self.out.len();
        let mut cap = self.cap.clone();
        let mut level = vec![-1i32; n];
        let mut iter = vec![0usize; n];
        let mut value = 0u64;

        loop {
            // BFS level graph on the residual network.
            level.fill(-1);
            level[self.source] = 0;
            let mut queue = VecDeque::from([self.source]);
            while let Some(u) = queue.pop_front() {
                for &a in &self.out[u] {
                    let v = self.head[a];
                    if cap[a] > 0 && level[v] < 0 {
                        level[v] = level[u] + 1;
                        queue.push_back(v);
                    }
                }
            }
            if level[self.sink] < 0 {
                break;
            }
            iter.fill(0);
            loop {
                let pushed = self.blocking_dfs(self.source, u64::MAX, &mut cap, &level, &mut iter);
                if pushed == 0 {
                    break;
                }
                value += pushed;
            }
        }

        FlowResult {
            value,
            residual: cap,
            original: self.cap.clone(),
        }
    }

    fn blocking_dfs(
        &self,
        u: usize,
        limit: u64,
        cap: &mut [u64],
        level: &[i32],
        iter: &mut [usize],
    ) -> u64 {
        if u == self.sink {
            return limit;
        }
        while iter[u] < self.out[u].len() {
            let a = self.out[u][iter[u]];
            let v = self.head[a];
            if cap[a] > 0 && level[v] == level[u] + 1 {
                let pushed = self.blocking_dfs(v, limit.min(cap[a]), cap, level, iter);
                if pushed > 0 {
                    cap[a] -= pushed;
                    cap[a ^ 1] += pushed;
                    return pushed;
                }
            }
            iter[u] += 1;
        }
        0
    }

    /// Nodes reachable from the source in the residual network of `result`;
    /// the arcs leaving this set form a minimum cut.
    pub fn residual_source_side(&self, result: &FlowResult) -> Vec<bool> {
        let mut seen = vec![false; self.out.len()];
        seen[self.source] = true;
        let mut queue = VecDeque::from([self.source]);
        while let Some(u) = queue.pop_front() {
            for &a in &self.out[u] {
                let v = self.head[a];
                if result.residual[a] > 0 && !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        seen
    }

    /// Capacity of the cut induced by `side` (arcs from inside to outside).
    pub fn cut_capacity(&self, side: &[bool]) -> u64 {
        let mut total = 0u64;
        for u in 0..self.out.len() {
            if !side[u] {
                continue;
            }
            for &a in &self.out[u] {
                if a % 2 == 0 && !side[self.head[a]] {
                    total += self.cap[a];
                }
            }
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn single_arc() {
        let mut net = FlowNetwork::new(2, 0, 1);
        net.add_arc(0, 1, 5);
        assert_eq!(net.max_flow().value, 5);
    }

    #[test]
    fn two_path_bottleneck() {
        // s->a (3), s->b (2), a->t (2), b->t (2): min cut {a->t, b->t} = 4.
        let mut net = FlowNetwork::new(4, 0, 3);
        net.add_arc(0, 1, 3);
        net.add_arc(0, 2, 2);
        net.add_arc(1, 3, 2);
        net.add_arc(2, 3, 2);
        assert_eq!(net.max_flow().value, 4);
    }

    #[test]
    fn disconnected_source_sink() {
        let net = FlowNetwork::new(3, 0, 2);
        assert_eq!(net.max_flow().value, 0);
    }

    #[test]
    fn flow_assignment_is_conservative() {
        let mut net = FlowNetwork::new(4, 0, 3);
        let sa = net.add_arc(0, 1, 3);
        let sb = net.add_arc(0, 2, 2);
        let at = net.add_arc(1, 3, 2);
        let bt = net.add_arc(2, 3, 2);
        let res = net.max_flow();
        assert_eq!(res.flow(sa), res.flow(at));
        assert_eq!(res.flow(sb), res.flow(bt));
        assert_eq!(res.flow(sa) + res.flow(sb), res.value);
    }

    proptest! {
        // Max-flow value equals the capacity of the residual-reachability cut.
        #[test]
        fn value_matches_min_cut(
            n in 2usize..8,
            arcs in proptest::collection::vec((0usize..8, 0usize..8, 0u64..20), 0..24),
        ) {
            let mut net = FlowNetwork::new(n, 0, n - 1);
            for &(u, v, c) in &arcs {
                let (u, v) = (u % n, v % n);
                if u == v || v == 0 || u == n - 1 {
                    continue;
                }
                net.add_arc(u, v, c);
            }
            let res = net.max_flow();
            let side = net.residual_source_side(&res);
            prop_assert!(!side[n - 1]);
            prop_assert_eq!(res.value, net.cut_capacity(&side));
        }
    }
}
