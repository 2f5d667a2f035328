//! Undirected simple graphs, weighted problem instances, orientations and
//! the line-oriented instance file format.
//!
//! Vertices are 1-based contiguous integers `1..=n`; all per-vertex mappings
//! are dense vectors indexed by id (slot 0 is unused). This matches the file
//! format and keeps DP tables directly indexable.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use crate::error::Error;

/// An undirected simple graph on vertices `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<BTreeSet<usize>>,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Builds a graph from an edge list. Rejects out-of-range endpoints,
    /// self-loops and duplicate edges.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph, Error> {
        let mut g = Graph {
            n,
            adj: vec![BTreeSet::new(); n + 1],
            edges: Vec::with_capacity(edges.len()),
        };
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        g.edges.sort_unstable();
        Ok(g)
    }

    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Graph {
        Graph {
            n,
            adj: vec![BTreeSet::new(); n + 1],
            edges: Vec::new(),
        }
    }

    fn add_edge(&mut self, u: usize, v: usize) -> Result<(), Error> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::input(format!("self-loop at vertex {u}")));
        }
        if self.adj[u].contains(&v) {
            return Err(Error::input(format!("duplicate edge {{{u},{v}}}")));
        }
        self.adj[u].insert(v);
        self.adj[v].insert(u);
        self.edges.push((u.min(v), u.max(v)));
        Ok(())
    }

    pub fn check_vertex(&self, v: usize) -> Result<(), Error> {
        if v == 0 || v > self.n {
            Err(Error::input(format!(
                "vertex {v} out of range 1..={}",
                self.n
            )))
        } else {
            Ok(())
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        1..=self.n
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &BTreeSet<usize> {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u >= 1 && u <= self.n && self.adj[u].contains(&v)
    }

    /// Connected components of the subgraph induced on `V \ x`, as sorted
    /// vertex sets ordered by smallest member.
    ///
    /// No edge of the graph joins two distinct parts of the output.
    pub fn components_after_removal(
        &self,
        x: &BTreeSet<usize>,
    ) -> Result<Vec<BTreeSet<usize>>, Error> {
        for &v in x {
            self.check_vertex(v)?;
        }
        let mut seen = vec![false; self.n + 1];
        for &v in x {
            seen[v] = true;
        }
        let mut parts = Vec::new();
        for start in 1..=self.n {
            if seen[start] {
                continue;
            }
            let mut part = BTreeSet::new();
            let mut queue = VecDeque::from([start]);
            seen[start] = true;
            while let Some(u) = queue.pop_front() {
                part.insert(u);
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            parts.push(part);
        }
        Ok(parts)
    }
}

/// Which covering problem an instance carries weights for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ProblemKind {
    /// Capacitated vertex cover; weights are capacities `c(v)`.
    Cvc,
    /// Target set selection; weights are thresholds `t(v)`.
    Tss,
    /// Vector dominating set; weights are thresholds `t(v)`.
    Vds,
}

impl ProblemKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ProblemKind::Cvc => "cvc",
            ProblemKind::Tss => "tss",
            ProblemKind::Vds => "vds",
        }
    }

    pub fn parse(s: &str) -> Result<ProblemKind, Error> {
        match s {
            "cvc" => Ok(ProblemKind::Cvc),
            "tss" => Ok(ProblemKind::Tss),
            "vds" => Ok(ProblemKind::Vds),
            other => Err(Error::input(format!("unknown problem kind `{other}`"))),
        }
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A graph plus a total non-negative integer weight per vertex
/// (capacity for CVC, threshold for TSS/VDS).
///
/// Weights above `n` are stored as given; they are semantically equivalent
/// to `n` but parsing stays total.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedInstance {
    graph: Graph,
    kind: ProblemKind,
    weight: Vec<usize>,
}

impl WeightedInstance {
    /// `weight[i]` is the weight of vertex `i + 1`.
    pub fn new(graph: Graph, kind: ProblemKind, weight: Vec<usize>) -> Result<Self, Error> {
        if weight.len() != graph.n() {
            return Err(Error::input(format!(
                "weight vector has {} entries for {} vertices",
                weight.len(),
                graph.n()
            )));
        }
        let mut by_id = vec![0usize; graph.n() + 1];
        by_id[1..].copy_from_slice(&weight);
        Ok(WeightedInstance {
            graph,
            kind,
            weight: by_id,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn kind(&self) -> ProblemKind {
        self.kind
    }

    pub fn weight(&self, v: usize) -> usize {
        self.weight[v]
    }

    /// Dense weight vector indexed by vertex id; slot 0 is unused.
    pub fn weights(&self) -> &[usize] {
        &self.weight
    }
}

/// An orientation assigns each edge a sink: the endpoint covering it.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Orientation {
    sink: BTreeMap<(usize, usize), usize>,
}

impl Orientation {
    pub fn new() -> Orientation {
        Orientation::default()
    }

    fn key(u: usize, v: usize) -> (usize, usize) {
        (u.min(v), u.max(v))
    }

    /// Orients edge `{u, v}` to sink at `sink` (which must be an endpoint).
    pub fn set_sink(&mut self, u: usize, v: usize, sink: usize) {
        debug_assert!(sink == u || sink == v);
        self.sink.insert(Self::key(u, v), sink);
    }

    pub fn sink_of(&self, u: usize, v: usize) -> Option<usize> {
        self.sink.get(&Self::key(u, v)).copied()
    }

    /// Flips the direction of an already-oriented edge.
    pub fn reverse(&mut self, u: usize, v: usize) {
        let key = Self::key(u, v);
        let s = self.sink[&key];
        let other = if s == key.0 { key.1 } else { key.0 };
        self.sink.insert(key, other);
    }

    pub fn len(&self) -> usize {
        self.sink.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sink.is_empty()
    }

    pub fn oriented_edges(&self) -> impl Iterator<Item = ((usize, usize), usize)> + '_ {
        self.sink.iter().map(|(&e, &s)| (e, s))
    }

    /// Merges another orientation over a disjoint edge set into this one.
    pub fn absorb(&mut self, other: &Orientation) {
        for (&e, &s) in &other.sink {
            debug_assert!(!self.sink.contains_key(&e));
            self.sink.insert(e, s);
        }
    }

    /// Indegree of `v` (number of oriented edges sinking at `v`).
    pub fn indegree(&self, v: usize) -> usize {
        self.sink.values().filter(|&&s| s == v).count()
    }

    /// Outdegree of `v` among the oriented edges.
    pub fn outdegree(&self, v: usize) -> usize {
        self.sink
            .iter()
            .filter(|(&(a, b), &s)| (a == v || b == v) && s != v)
            .count()
    }

    /// Dense indegree vector indexed by vertex id.
    pub fn indegrees(&self, n: usize) -> Vec<usize> {
        let mut deg = vec![0usize; n + 1];
        for &s in self.sink.values() {
            deg[s] += 1;
        }
        deg
    }

    /// Vertices with positive indegree: the cover used by this orientation.
    pub fn covered_vertices(&self, n: usize) -> BTreeSet<usize> {
        self.indegrees(n)
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, &d)| d > 0)
            .map(|(v, _)| v)
            .collect()
    }
}

/// True iff every vertex in `scope` has indegree at most its capacity.
pub fn orientation_feasible(
    g: &Graph,
    o: &Orientation,
    capacity: &[usize],
    scope: &BTreeSet<usize>,
) -> bool {
    let deg = o.indegrees(g.n());
    scope.iter().all(|&v| deg[v] <= capacity[v])
}

/// A weighted instance with a pre-selected (excluded) vertex set `U`.
/// A set `W ⊆ V \ U` solves the partial instance iff `W ∪ U` solves the
/// underlying instance.
#[derive(Debug, Clone)]
pub struct PartialInstance<'a> {
    pub instance: &'a WeightedInstance,
    pub excluded: BTreeSet<usize>,
}

impl<'a> PartialInstance<'a> {
    pub fn new(instance: &'a WeightedInstance, excluded: BTreeSet<usize>) -> Result<Self, Error> {
        for &v in &excluded {
            instance.graph().check_vertex(v)?;
        }
        Ok(PartialInstance { instance, excluded })
    }

    pub fn free_vertices(&self) -> Vec<usize> {
        self.instance
            .graph()
            .vertices()
            .filter(|v| !self.excluded.contains(v))
            .collect()
    }
}

/// Parses the line-oriented instance format:
///
/// ```text
/// c optional comments
/// p <cvc|tss|vds> <n> <m>
/// w <v> <weight>        (one per vertex; missing vertices default to 0)
/// e <u> <v>             (exactly m of these)
/// ```
pub fn parse_instance(text: &str) -> Result<WeightedInstance, Error> {
    let mut header: Option<(ProblemKind, usize, usize)> = None;
    let mut weights: Vec<Option<usize>> = Vec::new();
    let mut edges: Vec<(usize, usize)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let lineno = idx + 1;
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        let num_at = |i: usize, what: &str| -> Result<usize, Error> {
            toks.get(i)
                .ok_or_else(|| Error::input(format!("line {lineno}: missing {what}")))?
                .parse::<usize>()
                .map_err(|_| Error::input(format!("line {lineno}: bad {what}")))
        };
        match toks[0] {
            "p" => {
                if header.is_some() {
                    return Err(Error::input(format!("line {lineno}: second p line")));
                }
                let kind = ProblemKind::parse(
                    toks.get(1)
                        .copied()
                        .ok_or_else(|| Error::input(format!("line {lineno}: missing kind")))?,
                )?;
                let n = num_at(2, "vertex count")?;
                let m = num_at(3, "edge count")?;
                weights = vec![None; n + 1];
                header = Some((kind, n, m));
            }
            "w" => {
                let (_, n, _) =
                    header.ok_or_else(|| Error::input(format!("line {lineno}: w before p")))?;
                let v = num_at(1, "vertex")?;
                let wgt = num_at(2, "weight")?;
                if v == 0 || v > n {
                    return Err(Error::input(format!(
                        "line {lineno}: vertex {v} out of range"
                    )));
                }
                if weights[v].replace(wgt).is_some() {
                    return Err(Error::input(format!(
                        "line {lineno}: duplicate weight for vertex {v}"
                    )));
                }
            }
            "e" => {
                if header.is_none() {
                    return Err(Error::input(format!("line {lineno}: e before p")));
                }
                let u = num_at(1, "endpoint")?;
                let v = num_at(2, "endpoint")?;
                edges.push((u, v));
            }
            other => {
                return Err(Error::input(format!(
                    "line {lineno}: unknown line tag `{other}`"
                )));
            }
        }
    }

    let (kind, n, m) = header.ok_or_else(|| Error::input("missing p line"))?;
    if edges.len() != m {
        return Err(Error::input(format!(
            "header declares {m} edges but {} e lines found",
            edges.len()
        )));
    }
    let graph = Graph::from_edges(n, &edges)?;
    let weight: Vec<usize> = (1..=n).map(|v| weights[v].unwrap_or(0)).collect();
    WeightedInstance::new(graph, kind, weight)
}

/// Canonical serialization of an instance; `parse_instance` round-trips it.
pub fn write_instance(inst: &WeightedInstance) -> String {
    let g = inst.graph();
    let mut out = String::new();
    out.push_str(&format!("p {} {} {}\n", inst.kind(), g.n(), g.m()));
    for v in g.vertices() {
        out.push_str(&format!("w {} {}\n", v, inst.weight(v)));
    }
    for &(u, v) in g.edges() {
        out.push_str(&format!("e {u} {v}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set(vs: &[usize]) -> BTreeSet<usize> {
        vs.iter().copied().collect()
    }

    #[test]
    fn components_middle_of_path() {
        let g = Graph::from_edges(3, &[(1, 2), (2, 3)]).unwrap();
        let parts = g.components_after_removal(&set(&[2])).unwrap();
        assert_eq!(parts, vec![set(&[1]), set(&[3])]);
    }

    #[test]
    fn components_triangle_empty_separator() {
        let g = Graph::from_edges(3, &[(1, 2), (2, 3), (1, 3)]).unwrap();
        let parts = g.components_after_removal(&BTreeSet::new()).unwrap();
        assert_eq!(parts, vec![set(&[1, 2, 3])]);
    }

    #[test]
    fn components_path5_center() {
        let g = Graph::from_edges(5, &[(1, 2), (2, 3), (3, 4), (4, 5)]).unwrap();
        let parts = g.components_after_removal(&set(&[3])).unwrap();
        assert_eq!(parts, vec![set(&[1, 2]), set(&[4, 5])]);
    }

    #[test]
    fn components_rejects_unknown_vertex() {
        let g = Graph::from_edges(2, &[(1, 2)]).unwrap();
        assert!(g.components_after_removal(&set(&[7])).is_err());
    }

    #[test]
    fn orientation_feasibility_on_path() {
        let g = Graph::from_edges(3, &[(1, 2), (2, 3)]).unwrap();
        let mut o = Orientation::new();
        o.set_sink(1, 2, 2);
        o.set_sink(2, 3, 2);
        let scope = set(&[1, 2, 3]);
        assert!(orientation_feasible(&g, &o, &[0, 0, 2, 0], &scope));
        assert!(!orientation_feasible(&g, &o, &[0, 0, 1, 0], &scope));
    }

    #[test]
    fn orientation_feasibility_vacuous_on_empty_graph() {
        let g = Graph::empty(2);
        let o = Orientation::new();
        assert!(orientation_feasible(&g, &o, &[0, 0, 0], &set(&[1, 2])));
    }

    #[test]
    fn rejects_self_loop_and_duplicate() {
        assert!(Graph::from_edges(2, &[(1, 1)]).is_err());
        assert!(Graph::from_edges(2, &[(1, 2), (2, 1)]).is_err());
    }

    #[test]
    fn instance_format_round_trip() {
        let text = "c demo\np cvc 3 2\nw 2 1\ne 1 2\ne 2 3\n";
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.kind(), ProblemKind::Cvc);
        assert_eq!(inst.weight(1), 0);
        assert_eq!(inst.weight(2), 1);
        let canon = write_instance(&inst);
        let again = parse_instance(&canon).unwrap();
        assert_eq!(inst, again);
    }

    #[test]
    fn instance_format_errors() {
        assert!(parse_instance("p xyz 2 0\n").is_err());
        assert!(parse_instance("p cvc 2 1\n").is_err()); // missing edge
        assert!(parse_instance("p cvc 2 0\nw 3 1\n").is_err());
        assert!(parse_instance("e 1 2\n").is_err());
    }

    proptest! {
        // No edge joins two distinct output parts, and parts partition V \ X.
        #[test]
        fn components_are_mutually_nonadjacent(
            n in 1usize..20,
            edge_bits in proptest::collection::vec(any::<bool>(), 20 * 19 / 2),
            x_bits in proptest::collection::vec(any::<bool>(), 20),
        ) {
            let mut edges = Vec::new();
            let mut idx = 0;
            for u in 1..=n {
                for v in (u + 1)..=n {
                    if edge_bits[idx] {
                        edges.push((u, v));
                    }
                    idx += 1;
                }
            }
            let g = Graph::from_edges(n, &edges).unwrap();
            let x: BTreeSet<usize> = (1..=n).filter(|&v| x_bits[v - 1]).collect();
            let parts = g.components_after_removal(&x).unwrap();

            let mut union = BTreeSet::new();
            for part in &parts {
                for &v in part {
                    prop_assert!(!x.contains(&v));
                    prop_assert!(union.insert(v));
                }
            }
            let expected: BTreeSet<usize> = (1..=n).filter(|v| !x.contains(v)).collect();
            prop_assert_eq!(union, expected);

            for (i, a) in parts.iter().enumerate() {
                for b in parts.iter().skip(i + 1) {
                    for &u in a {
                        for &v in b {
                            prop_assert!(!g.has_edge(u, v));
                        }
                    }
                }
            }
        }

        // indegree/outdegree agree with direct recomputation from the sink map.
        #[test]
        fn orientation_degrees_consistent(n in 1usize..10, sink_bits in proptest::collection::vec(any::<bool>(), 45)) {
            let mut edges = Vec::new();
            for u in 1..=n {
                for v in (u + 1)..=n {
                    edges.push((u, v));
                }
            }
            let g = Graph::from_edges(n, &edges).unwrap();
            let mut o = Orientation::new();
            for (i, &(u, v)) in g.edges().iter().enumerate() {
                o.set_sink(u, v, if sink_bits[i] { u } else { v });
            }
            let deg = o.indegrees(n);
            let mut total_in = 0;
            let mut total_out = 0;
            for (v, &d) in deg.iter().enumerate().skip(1) {
                prop_assert_eq!(o.indegree(v), d);
                total_in += o.indegree(v);
                total_out += o.outdegree(v);
            }
            prop_assert_eq!(total_in, g.m());
            prop_assert_eq!(total_out, g.m());
        }
    }
}
