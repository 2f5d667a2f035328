//! Tree decompositions: validation, a min-fill heuristic for raw graphs,
//! and the PACE-style file format.

use std::collections::BTreeSet;

use crate::error::Error;
use crate::graph::Graph;

/// An unrooted tree decomposition: one bag per node plus tree edges.
#[derive(Debug, Clone)]
pub struct TreeDecomposition {
    pub bags: Vec<BTreeSet<usize>>,
    /// Edges between bag indices (0-based).
    pub edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    pub fn width(&self) -> usize {
        self.bags
            .iter()
            .map(|b| b.len())
            .max()
            .unwrap_or(0)
            .saturating_sub(1)
    }

    pub fn num_nodes(&self) -> usize {
        self.bags.len()
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.bags.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }
}

/// A violated decomposition property, with a witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TdViolation {
    /// The bag graph is not a single tree.
    NotATree {
        nodes: usize,
        edges: usize,
        reachable: usize,
    },
    /// Bag edge endpoint out of range.
    BadBagEdge { a: usize, b: usize },
    /// A bag mentions a vertex outside `1..=n`.
    UnknownVertex { bag: usize, v: usize },
    /// Some vertex appears in no bag.
    VertexNotCovered { v: usize },
    /// Some graph edge is inside no bag.
    EdgeNotCovered { u: usize, v: usize },
    /// The bags containing `v` do not form a subtree.
    VertexNotASubtree { v: usize },
}

impl std::fmt::Display for TdViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TdViolation::NotATree { nodes, edges, reachable } => write!(
                f,
                "bag graph is not a tree ({nodes} nodes, {edges} edges, {reachable} reachable from node 0)"
            ),
            TdViolation::BadBagEdge { a, b } => write!(f, "bag edge {a}-{b} out of range"),
            TdViolation::UnknownVertex { bag, v } => {
                write!(f, "bag {bag} contains unknown vertex {v}")
            }
            TdViolation::VertexNotCovered { v } => write!(f, "vertex {v} in no bag"),
            TdViolation::EdgeNotCovered { u, v } => write!(f, "edge {{{u},{v}}} in no bag"),
            TdViolation::VertexNotASubtree { v } => {
                write!(f, "vertex {v}'s nodes not a subtree")
            }
        }
    }
}

/// Checks the four decomposition properties against `g`. An empty result
/// means the decomposition is valid; otherwise each violated property is
/// reported with a witness.
pub fn validate(g: &Graph, td: &TreeDecomposition) -> Vec<TdViolation> {
    validate_on(g, td, &g.vertices().collect())
}

/// Like [`validate`], but against the subgraph of `g` induced on `active`:
/// bags may only use active vertices, and exactly the active vertices and
/// the edges among them must be covered. Used when re-decomposing residual
/// graphs without renumbering.
pub fn validate_on(
    g: &Graph,
    td: &TreeDecomposition,
    active: &BTreeSet<usize>,
) -> Vec<TdViolation> {
    let mut violations = Vec::new();
    let nodes = td.bags.len();

    for &(a, b) in &td.edges {
        if a >= nodes || b >= nodes {
            violations.push(TdViolation::BadBagEdge { a, b });
            return violations;
        }
    }

    // Tree check: connected and |E| = |V| - 1.
    if nodes > 0 {
        let adj = td.adjacency();
        let mut seen = vec![false; nodes];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut reachable = 0;
        while let Some(x) = stack.pop() {
            reachable += 1;
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        if reachable != nodes || td.edges.len() != nodes - 1 {
            violations.push(TdViolation::NotATree {
                nodes,
                edges: td.edges.len(),
                reachable,
            });
        }
    }

    for (i, bag) in td.bags.iter().enumerate() {
        for &v in bag {
            if v == 0 || v > g.n() || !active.contains(&v) {
                violations.push(TdViolation::UnknownVertex { bag: i, v });
            }
        }
    }
    if !violations.is_empty() {
        return violations;
    }

    for &v in active {
        if !td.bags.iter().any(|b| b.contains(&v)) {
            violations.push(TdViolation::VertexNotCovered { v });
        }
    }

    for &(u, v) in g.edges() {
        if !(active.contains(&u) && active.contains(&v)) {
            continue;
        }
        if !td.bags.iter().any(|b| b.contains(&u) && b.contains(&v)) {
            violations.push(TdViolation::EdgeNotCovered { u, v });
        }
    }

    // Subtree connectivity per vertex: the nodes containing v must induce a
    // connected subgraph of the bag tree.
    let adj = td.adjacency();
    for &v in active {
        let holding: Vec<usize> = (0..nodes).filter(|&i| td.bags[i].contains(&v)).collect();
        if holding.len() <= 1 {
            continue;
        }
        let start = holding[0];
        let mut seen = vec![false; nodes];
        seen[start] = true;
        let mut stack = vec![start];
        let mut count = 1;
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if !seen[y] && td.bags[y].contains(&v) {
                    seen[y] = true;
                    count += 1;
                    stack.push(y);
                }
            }
        }
        if count != holding.len() {
            violations.push(TdViolation::VertexNotASubtree { v });
        }
    }

    violations
}

/// Drops a vertex set from every bag, keeping the tree shape. The result
/// stays valid for the remaining induced subgraph and cannot get wider.
pub fn restrict(td: &TreeDecomposition, remove: &BTreeSet<usize>) -> TreeDecomposition {
    TreeDecomposition {
        bags: td
            .bags
            .iter()
            .map(|b| b.difference(remove).copied().collect())
            .collect(),
        edges: td.edges.clone(),
    }
}

/// Builds a tree decomposition from a min-fill elimination ordering.
///
/// The algorithms downstream only need *some* width bound; when no
/// decomposition is supplied this heuristic provides one. Ties are broken by
/// smallest vertex id, so the result is deterministic.
pub fn min_fill_decomposition(g: &Graph) -> TreeDecomposition {
    let n = g.n();
    if n == 0 {
        return TreeDecomposition {
            bags: vec![BTreeSet::new()],
            edges: Vec::new(),
        };
    }
    let mut adj: Vec<BTreeSet<usize>> = (0..=n)
        .map(|v| {
            if v == 0 {
                BTreeSet::new()
            } else {
                g.neighbors(v).clone()
            }
        })
        .collect();
    let mut alive: BTreeSet<usize> = (1..=n).collect();
    let mut elim_index = vec![usize::MAX; n + 1];
    let mut bags: Vec<BTreeSet<usize>> = Vec::with_capacity(n);
    let mut order: Vec<usize> = Vec::with_capacity(n);

    for round in 0..n {
        // Fill-in count: non-adjacent pairs among the remaining neighbors.
        let mut best = (usize::MAX, usize::MAX);
        for &v in &alive {
            let nb: Vec<usize> = adj[v].iter().copied().collect();
            let mut fill = 0;
            for i in 0..nb.len() {
                for j in (i + 1)..nb.len() {
                    if !adj[nb[i]].contains(&nb[j]) {
                        fill += 1;
                    }
                }
            }
            if fill < best.0 {
                best = (fill, v);
            }
        }
        let v = best.1;
        let mut bag = adj[v].clone();
        bag.insert(v);
        bags.push(bag);
        order.push(v);
        elim_index[v] = round;

        let nb: Vec<usize> = adj[v].iter().copied().collect();
        for i in 0..nb.len() {
            for j in (i + 1)..nb.len() {
                adj[nb[i]].insert(nb[j]);
                adj[nb[j]].insert(nb[i]);
            }
        }
        for &u in &nb {
            adj[u].remove(&v);
        }
        adj[v].clear();
        alive.remove(&v);
    }

    // Connect each bag to the bag of its earliest-eliminated later neighbor;
    // bags with no later neighbor chain to the next bag in elimination order.
    let mut edges = Vec::new();
    for (i, bag) in bags.iter().enumerate() {
        let parent = bag
            .iter()
            .filter(|&&u| u != order[i])
            .map(|&u| elim_index[u])
            .min();
        match parent {
            Some(p) => edges.push((i, p)),
            None => {
                if i + 1 < bags.len() {
                    edges.push((i, i + 1));
                }
            }
        }
    }
    TreeDecomposition { bags, edges }
}

/// Parses the PACE-style decomposition format:
///
/// ```text
/// s td <#bags> <width+1> <n>
/// b <bag-id> <v...>
/// <id> <id>            (bag-tree edges, 1-based ids)
/// ```
pub fn parse_td(text: &str) -> Result<TreeDecomposition, Error> {
    let mut header: Option<(usize, usize)> = None;
    let mut bags: Vec<BTreeSet<usize>> = Vec::new();
    let mut edges: Vec<(usize, usize)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let lineno = idx + 1;
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks[0] {
            "s" => {
                if toks.len() != 5 || toks[1] != "td" {
                    return Err(Error::input(format!("line {lineno}: bad s line")));
                }
                let num_bags: usize = toks[2]
                    .parse()
                    .map_err(|_| Error::input(format!("line {lineno}: bad bag count")))?;
                let n: usize = toks[4]
                    .parse()
                    .map_err(|_| Error::input(format!("line {lineno}: bad vertex count")))?;
                bags = vec![BTreeSet::new(); num_bags];
                header = Some((num_bags, n));
            }
            "b" => {
                let (num_bags, _) =
                    header.ok_or_else(|| Error::input(format!("line {lineno}: b before s")))?;
                let id: usize = toks
                    .get(1)
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| Error::input(format!("line {lineno}: bad bag id")))?;
                if id == 0 || id > num_bags {
                    return Err(Error::input(format!(
                        "line {lineno}: bag id {id} out of range"
                    )));
                }
                for t in &toks[2..] {
                    let v: usize = t
                        .parse()
                        .map_err(|_| Error::input(format!("line {lineno}: bad vertex")))?;
                    bags[id - 1].insert(v);
                }
            }
            _ => {
                let (num_bags, _) =
                    header.ok_or_else(|| Error::input(format!("line {lineno}: edge before s")))?;
                if toks.len() != 2 {
                    return Err(Error::input(format!("line {lineno}: bad tree edge")));
                }
                let a: usize = toks[0]
                    .parse()
                    .map_err(|_| Error::input(format!("line {lineno}: bad tree edge")))?;
                let b: usize = toks[1]
                    .parse()
                    .map_err(|_| Error::input(format!("line {lineno}: bad tree edge")))?;
                if a == 0 || a > num_bags || b == 0 || b > num_bags {
                    return Err(Error::input(format!(
                        "line {lineno}: tree edge {a}-{b} out of range"
                    )));
                }
                edges.push((a - 1, b - 1));
            }
        }
    }

    header.ok_or_else(|| Error::input("missing s td line"))?;
    Ok(TreeDecomposition { bags, edges })
}

/// Serializes a decomposition in the PACE-style format for `n` vertices.
pub fn write_td(td: &TreeDecomposition, n: usize) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "s td {} {} {}\n",
        td.bags.len(),
        td.width() + 1,
        n
    ));
    for (i, bag) in td.bags.iter().enumerate() {
        out.push_str(&format!("b {}", i + 1));
        for v in bag {
            out.push_str(&format!(" {v}"));
        }
        out.push('\n');
    }
    for &(a, b) in &td.edges {
        out.push_str(&format!("{} {}\n", a + 1, b + 1));
    }
    out
}
