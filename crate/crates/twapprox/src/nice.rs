//! Nice tree decompositions: conversion from arbitrary decompositions,
//! node heights, and the derived vertex sets `X`, `V`, `Y` per node.

use std::collections::BTreeSet;

use crate::error::Error;
use crate::graph::Graph;
use crate::td::{validate_on, TreeDecomposition};

/// Role of a node in a nice tree decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    /// Empty bag, no children.
    Leaf,
    /// One child; bag = child bag plus the named vertex.
    Introduce(usize),
    /// One child; bag = child bag minus the named vertex.
    Forget(usize),
    /// Two children with bags identical to this node's bag.
    Join,
}

/// A rooted nice tree decomposition with an empty root bag.
///
/// Immutable after construction. Per node the structure caches the bag
/// (`X`), the subtree vertex set (`V`) and its complement within the
/// subtree (`Y = V \ X`), plus the node height.
#[derive(Debug, Clone)]
pub struct NiceTreeDecomposition {
    kinds: Vec<NodeKind>,
    bags: Vec<BTreeSet<usize>>,
    children: Vec<Vec<usize>>,
    parent: Vec<Option<usize>>,
    heights: Vec<usize>,
    v_sets: Vec<BTreeSet<usize>>,
    root: usize,
}

impl NiceTreeDecomposition {
    pub fn num_nodes(&self) -> usize {
        self.kinds.len()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn kind(&self, node: usize) -> NodeKind {
        self.kinds[node]
    }

    /// The bag `X` of a node.
    pub fn bag(&self, node: usize) -> &BTreeSet<usize> {
        &self.bags[node]
    }

    /// Bag as a sorted vector; DP tables index d-vectors by this order.
    pub fn bag_sorted(&self, node: usize) -> Vec<usize> {
        self.bags[node].iter().copied().collect()
    }

    pub fn children(&self, node: usize) -> &[usize] {
        &self.children[node]
    }

    pub fn parent(&self, node: usize) -> Option<usize> {
        self.parent[node]
    }

    /// Length of the longest path from `node` down to a leaf.
    pub fn height(&self, node: usize) -> usize {
        self.heights[node]
    }

    /// Realized root height `h0`.
    pub fn root_height(&self) -> usize {
        self.heights[self.root]
    }

    /// All vertices in bags of the subtree rooted at `node` (`V`).
    pub fn v_set(&self, node: usize) -> &BTreeSet<usize> {
        &self.v_sets[node]
    }

    /// `Y = V \ X`: the vertices already forgotten below `node`.
    pub fn y_set(&self, node: usize) -> BTreeSet<usize> {
        self.v_sets[node]
            .difference(&self.bags[node])
            .copied()
            .collect()
    }

    pub fn y_size(&self, node: usize) -> usize {
        self.v_sets[node].len() - self.bags[node].len()
    }

    pub fn y_contains(&self, node: usize, v: usize) -> bool {
        self.v_sets[node].contains(&v) && !self.bags[node].contains(&v)
    }

    /// `|N(v) ∩ Y|` for the given node.
    pub fn y_neighbor_count(&self, g: &Graph, node: usize, v: usize) -> usize {
        g.neighbors(v)
            .iter()
            .filter(|&&u| self.y_contains(node, u))
            .count()
    }

    /// Postorder traversal starting at the root (children before parents).
    pub fn postorder(&self) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.num_nodes());
        let mut stack = vec![(self.root, false)];
        while let Some((node, expanded)) = stack.pop() {
            if expanded {
                order.push(node);
            } else {
                stack.push((node, true));
                for &c in self.children[node].iter().rev() {
                    stack.push((c, false));
                }
            }
        }
        order
    }

    /// Edges of `G_node`: `E[V] \ E[X]`, the DP scope of a node.
    pub fn scope_edges(&self, g: &Graph, node: usize) -> Vec<(usize, usize)> {
        let v_set = &self.v_sets[node];
        let bag = &self.bags[node];
        g.edges()
            .iter()
            .copied()
            .filter(|&(u, v)| {
                v_set.contains(&u) && v_set.contains(&v) && !(bag.contains(&u) && bag.contains(&v))
            })
            .collect()
    }

    /// Max bag size minus one.
    pub fn width(&self) -> usize {
        self.bags
            .iter()
            .map(|b| b.len())
            .max()
            .unwrap_or(0)
            .saturating_sub(1)
    }

    /// View as a plain decomposition (bags plus tree edges).
    pub fn as_plain(&self) -> TreeDecomposition {
        let mut edges = Vec::new();
        for (node, parent) in self.parent.iter().enumerate() {
            if let Some(p) = parent {
                edges.push((*p, node));
            }
        }
        TreeDecomposition {
            bags: self.bags.clone(),
            edges,
        }
    }

    /// Checks every structural invariant of the nice form against `g`:
    /// the four node-kind bag relations, empty root and leaf bags, join
    /// children with identical bags and disjoint `Y` sets, height
    /// consistency, and validity as a plain decomposition.
    pub fn check(&self, g: &Graph) -> Result<(), Error> {
        self.check_on(g, &g.vertices().collect())
    }

    /// [`NiceTreeDecomposition::check`] against the subgraph induced on
    /// `active`.
    pub fn check_on(&self, g: &Graph, active: &BTreeSet<usize>) -> Result<(), Error> {
        let fail = |msg: String| Err(Error::Decomposition(msg));
        for node in 0..self.num_nodes() {
            let kids = &self.children[node];
            match self.kinds[node] {
                NodeKind::Leaf => {
                    if !kids.is_empty() || !self.bags[node].is_empty() {
                        return fail(format!("leaf node {node} malformed"));
                    }
                }
                NodeKind::Introduce(v) => {
                    if kids.len() != 1 {
                        return fail(format!("introduce node {node} has {} children", kids.len()));
                    }
                    let child = kids[0];
                    if self.bags[child].contains(&v)
                        || self.bags[node] != {
                            let mut b = self.bags[child].clone();
                            b.insert(v);
                            b
                        }
                    {
                        return fail(format!("introduce({v}) node {node} bag relation broken"));
                    }
                }
                NodeKind::Forget(v) => {
                    if kids.len() != 1 {
                        return fail(format!("forget node {node} has {} children", kids.len()));
                    }
                    let child = kids[0];
                    if self.bags[node].contains(&v)
                        || self.bags[child] != {
                            let mut b = self.bags[node].clone();
                            b.insert(v);
                            b
                        }
                    {
                        return fail(format!("forget({v}) node {node} bag relation broken"));
                    }
                }
                NodeKind::Join => {
                    if kids.len() != 2 {
                        return fail(format!("join node {node} has {} children", kids.len()));
                    }
                    let (a, b) = (kids[0], kids[1]);
                    if self.bags[a] != self.bags[node] || self.bags[b] != self.bags[node] {
                        return fail(format!("join node {node} children bags differ"));
                    }
                    if self.y_set(a).intersection(&self.y_set(b)).next().is_some() {
                        return fail(format!("join node {node} children Y sets intersect"));
                    }
                }
            }
            let expect = kids.iter().map(|&c| self.heights[c] + 1).max().unwrap_or(0);
            if self.heights[node] != expect {
                return fail(format!("height of node {node} inconsistent"));
            }
        }
        if !self.bags[self.root].is_empty() {
            return fail("root bag not empty".into());
        }
        let violations = validate_on(g, &self.as_plain(), active);
        if !violations.is_empty() {
            return fail(format!(
                "underlying decomposition invalid: {}",
                violations[0]
            ));
        }
        Ok(())
    }
}

/// Builder used during nicification.
struct NiceBuilder {
    kinds: Vec<NodeKind>,
    bags: Vec<BTreeSet<usize>>,
    children: Vec<Vec<usize>>,
}

impl NiceBuilder {
    fn push(&mut self, kind: NodeKind, bag: BTreeSet<usize>, children: Vec<usize>) -> usize {
        self.kinds.push(kind);
        self.bags.push(bag);
        self.children.push(children);
        self.kinds.len() - 1
    }

    /// Emits forget chains for `bag \ target` then introduce chains for
    /// `target \ bag`, both in ascending vertex id, returning the top node.
    fn morph(&mut self, mut top: usize, target: &BTreeSet<usize>) -> usize {
        let bag = self.bags[top].clone();
        let mut current = bag.clone();
        for &v in bag.difference(target) {
            current.remove(&v);
            top = self.push(NodeKind::Forget(v), current.clone(), vec![top]);
        }
        for &v in target.difference(&bag) {
            current.insert(v);
            top = self.push(NodeKind::Introduce(v), current.clone(), vec![top]);
        }
        top
    }

    /// A fresh leaf-to-bag introduce chain.
    fn grow_from_leaf(&mut self, target: &BTreeSet<usize>) -> usize {
        let mut top = self.push(NodeKind::Leaf, BTreeSet::new(), vec![]);
        let mut current = BTreeSet::new();
        for &v in target {
            current.insert(v);
            top = self.push(NodeKind::Introduce(v), current.clone(), vec![top]);
        }
        top
    }
}

/// Converts a valid tree decomposition into a nice one with an empty root
/// bag, recording heights. Introduce/forget chains are emitted in ascending
/// vertex id and joins are built left-deep, so the result is deterministic.
pub fn make_nice(g: &Graph, td: &TreeDecomposition) -> Result<NiceTreeDecomposition, Error> {
    make_nice_on(g, &g.vertices().collect(), td)
}

/// [`make_nice`] against the subgraph of `g` induced on `active`; used to
/// re-nicify restricted decompositions of residual graphs.
pub fn make_nice_on(
    g: &Graph,
    active: &BTreeSet<usize>,
    td: &TreeDecomposition,
) -> Result<NiceTreeDecomposition, Error> {
    let violations = validate_on(g, td, active);
    if let Some(first) = violations.first() {
        return Err(Error::Decomposition(format!(
            "{} violation(s), first: {first}",
            violations.len()
        )));
    }
    if td.bags.is_empty() {
        return Err(Error::Decomposition("decomposition has no bags".into()));
    }

    // Root the bag tree at node 0 and list children per node.
    let nodes = td.bags.len();
    let mut adj = vec![Vec::new(); nodes];
    for &(a, b) in &td.edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    for list in &mut adj {
        list.sort_unstable();
    }

    let mut builder = NiceBuilder {
        kinds: Vec::new(),
        bags: Vec::new(),
        children: Vec::new(),
    };

    // Iterative DFS producing, for each original node, a nice node whose bag
    // equals the original bag.
    let mut result: Vec<Option<usize>> = vec![None; nodes];
    let mut stack: Vec<(usize, Option<usize>, bool)> = vec![(0, None, false)];
    while let Some((node, from, expanded)) = stack.pop() {
        if !expanded {
            stack.push((node, from, true));
            for &next in adj[node].iter().rev() {
                if Some(next) != from {
                    stack.push((next, Some(node), false));
                }
            }
            continue;
        }
        let bag = &td.bags[node];
        let mut tops: Vec<usize> = Vec::new();
        for &next in &adj[node] {
            if Some(next) == from {
                continue;
            }
            let child_top = result[next].unwrap();
            tops.push(builder.morph(child_top, bag));
        }
        let top = match tops.len() {
            0 => builder.grow_from_leaf(bag),
            1 => tops[0],
            _ => {
                let mut acc = tops[0];
                for &t in &tops[1..] {
                    acc = builder.push(NodeKind::Join, bag.clone(), vec![acc, t]);
                }
                acc
            }
        };
        result[node] = Some(top);
    }

    // Forget the root bag so the overall root is empty.
    let root = builder.morph(result[0].unwrap(), &BTreeSet::new());

    // Derived structure: parents, heights, subtree vertex sets.
    let count = builder.kinds.len();
    let mut parent = vec![None; count];
    for (node, kids) in builder.children.iter().enumerate() {
        for &c in kids {
            parent[c] = Some(node);
        }
    }
    let mut heights = vec![0usize; count];
    let mut v_sets = vec![BTreeSet::new(); count];
    // Children always have smaller indices than their parent by construction.
    for node in 0..count {
        let mut v_set: BTreeSet<usize> = builder.bags[node].iter().copied().collect();
        let mut h = 0;
        for &c in &builder.children[node] {
            h = h.max(heights[c] + 1);
            v_set.extend(v_sets[c].iter().copied());
        }
        heights[node] = h;
        v_sets[node] = v_set;
    }

    let ntd = NiceTreeDecomposition {
        kinds: builder.kinds,
        bags: builder.bags,
        children: builder.children,
        parent,
        heights,
        v_sets,
        root,
    };
    debug_assert!(ntd.check_on(g, active).is_ok());
    Ok(ntd)
}

/// True iff no edge of `g` joins `Y_node` and `V \ V_node`. Holds for every
/// node of every valid decomposition; used as a test oracle.
pub fn separator_check(g: &Graph, ntd: &NiceTreeDecomposition, node: usize) -> bool {
    let v_set = ntd.v_set(node);
    let bag = ntd.bag(node);
    g.edges().iter().all(|&(u, v)| {
        let u_inner = v_set.contains(&u) && !bag.contains(&u);
        let v_inner = v_set.contains(&v) && !bag.contains(&v);
        let u_outer = !v_set.contains(&u);
        let v_outer = !v_set.contains(&v);
        !((u_inner && v_outer) || (v_inner && u_outer))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::generate_partial_ktree;

    fn bag(vs: &[usize]) -> BTreeSet<usize> {
        vs.iter().copied().collect()
    }

    #[test]
    fn single_vertex_chain() {
        let g = Graph::from_edges(1, &[]).unwrap();
        let td = TreeDecomposition {
            bags: vec![bag(&[1])],
            edges: vec![],
        };
        let ntd = make_nice(&g, &td).unwrap();
        assert!(ntd.bag(ntd.root()).is_empty());
        assert_eq!(ntd.num_nodes(), 3); // Leaf, Introduce(1), Forget(1)
        assert!(matches!(ntd.kind(ntd.root()), NodeKind::Forget(1)));
        ntd.check(&g).unwrap();
    }

    #[test]
    fn triangle_chain_height() {
        let g = Graph::from_edges(3, &[(1, 2), (2, 3), (1, 3)]).unwrap();
        let td = TreeDecomposition {
            bags: vec![bag(&[1, 2, 3])],
            edges: vec![],
        };
        let ntd = make_nice(&g, &td).unwrap();
        // Chain of 3 introduces then 3 forgets above the leaf: root height 6.
        assert_eq!(ntd.root_height(), 6);
        assert!(ntd.bag(ntd.root()).is_empty());
        ntd.check(&g).unwrap();
    }

    #[test]
    fn generator_output_nicifies() {
        let (g, td) = generate_partial_ktree(10, 2, 1.0, 7).unwrap();
        let ntd = make_nice(&g, &td).unwrap();
        ntd.check(&g).unwrap();
        assert!(ntd.width() <= 2);
        for node in 0..ntd.num_nodes() {
            assert!(separator_check(&g, &ntd, node));
        }
    }

    #[test]
    fn xy_partition_invariants() {
        let (g, td) = generate_partial_ktree(12, 3, 0.5, 3).unwrap();
        let ntd = make_nice(&g, &td).unwrap();
        for node in 0..ntd.num_nodes() {
            let x = ntd.bag(node);
            let y = ntd.y_set(node);
            let v = ntd.v_set(node);
            assert!(x.intersection(&y).next().is_none());
            let union: BTreeSet<usize> = x.union(&y).copied().collect();
            assert_eq!(&union, v);
            assert_eq!(ntd.y_size(node), y.len());
        }
        // Root covers everything.
        assert_eq!(ntd.v_set(ntd.root()).len(), g.n());
    }

    #[test]
    fn join_children_y_disjoint_on_corpus() {
        for seed in 0..5 {
            let (g, td) = generate_partial_ktree(11, 2, 0.7, seed).unwrap();
            let ntd = make_nice(&g, &td).unwrap();
            for node in 0..ntd.num_nodes() {
                if let NodeKind::Join = ntd.kind(node) {
                    let [a, b] = ntd.children(node) else { panic!() };
                    let ya = ntd.y_set(*a);
                    let yb = ntd.y_set(*b);
                    assert!(ya.intersection(&yb).next().is_none());
                }
            }
        }
    }

    #[test]
    fn make_nice_rejects_invalid_input() {
        let g = Graph::from_edges(3, &[(1, 2), (2, 3), (1, 3)]).unwrap();
        let td = TreeDecomposition {
            bags: vec![bag(&[1, 2]), bag(&[2, 3])],
            edges: vec![(0, 1)],
        };
        let err = make_nice(&g, &td).unwrap_err();
        assert!(err.to_string().contains("edge {1,3}"));
    }

    #[test]
    fn node_count_stays_linear() {
        let (g, td) = generate_partial_ktree(20, 3, 1.0, 9).unwrap();
        let ntd = make_nice(&g, &td).unwrap();
        let w = ntd.width();
        assert!(ntd.num_nodes() <= 8 * g.n() * (w + 1) + 8);
    }
}
