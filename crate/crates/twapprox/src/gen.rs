//! Random partial-k-tree generator for test corpora.
//!
//! A k-tree is grown by iterated vertex addition into a random existing
//! clique, which yields a width-k tree decomposition as a by-product. Edges
//! are then dropped independently, and the decomposition remains valid for
//! the resulting subgraph.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::error::Error;
use crate::graph::{Graph, ProblemKind, WeightedInstance};
use crate::td::TreeDecomposition;

/// Generates a random partial k-tree on `n` vertices together with a tree
/// decomposition of width at most `k` that certifies it.
///
/// Each k-tree edge is kept independently with probability `keep_prob`.
/// Deterministic for a fixed seed.
pub fn generate_partial_ktree(
    n: usize,
    k: usize,
    keep_prob: f64,
    seed: u64,
) -> Result<(Graph, TreeDecomposition), Error> {
    if n <= k {
        return Err(Error::input(format!(
            "partial k-tree needs n > k (got n={n}, k={k})"
        )));
    }
    if !(0.0..=1.0).contains(&keep_prob) {
        return Err(Error::input(format!(
            "keep_prob {keep_prob} outside [0, 1]"
        )));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);

    // Seed clique on vertices 1..=k+1 with its single bag.
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for u in 1..=k + 1 {
        for v in (u + 1)..=k + 1 {
            edges.push((u, v));
        }
    }
    let mut bags: Vec<BTreeSet<usize>> = vec![(1..=k + 1).collect()];
    let mut tree_edges: Vec<(usize, usize)> = Vec::new();

    for v in (k + 2)..=n {
        // Pick a random existing bag, drop one of its vertices to get a
        // k-clique, and attach v to all of it.
        let host = rng.gen_range(0..bags.len());
        let host_bag: Vec<usize> = bags[host].iter().copied().collect();
        let mut clique = host_bag.clone();
        if clique.len() == k + 1 {
            let drop_at = rng.gen_range(0..clique.len());
            clique.remove(drop_at);
        }
        for &u in &clique {
            edges.push((u.min(v), u.max(v)));
        }
        let mut new_bag: BTreeSet<usize> = clique.into_iter().collect();
        new_bag.insert(v);
        bags.push(new_bag);
        tree_edges.push((host, bags.len() - 1));
    }

    edges.sort_unstable();
    let kept: Vec<(usize, usize)> = edges
        .into_iter()
        .filter(|_| rng.gen_bool(keep_prob))
        .collect();

    let graph = Graph::from_edges(n, &kept)?;
    let td = TreeDecomposition {
        bags,
        edges: tree_edges,
    };
    Ok((graph, td))
}

/// How vertex weights are drawn by [`random_instance`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightModel {
    /// Uniform in `[0, max]`.
    Uniform(usize),
    /// Uniform in `[0, deg(v)]` per vertex.
    UpToDegree,
}

/// Generates a partial-k-tree instance with random weights, plus its
/// width-certified decomposition. The weight draw uses its own stream so
/// the graph for a given `(n, k, keep_prob, seed)` is stable across kinds.
pub fn random_instance(
    n: usize,
    k: usize,
    keep_prob: f64,
    seed: u64,
    kind: ProblemKind,
    weights: WeightModel,
) -> Result<(WeightedInstance, TreeDecomposition), Error> {
    let (graph, td) = generate_partial_ktree(n, k, keep_prob, seed)?;
    let mut rng = ChaCha12Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let weight: Vec<usize> = (1..=n)
        .map(|v| match weights {
            WeightModel::Uniform(max) => rng.gen_range(0..=max),
            WeightModel::UpToDegree => rng.gen_range(0..=graph.degree(v)),
        })
        .collect();
    let inst = WeightedInstance::new(graph, kind, weight)?;
    Ok((inst, td))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::td::validate;

    #[test]
    fn smallest_two_tree_is_triangle() {
        let (g, td) = generate_partial_ktree(3, 2, 1.0, 42).unwrap();
        assert_eq!(g.m(), 3);
        assert_eq!(td.bags.len(), 1);
        assert_eq!(td.bags[0], (1..=3).collect());
    }

    #[test]
    fn full_ktree_edge_count() {
        // kn - k(k+1)/2 edges: 2*10 - 3 = 17.
        let (g, _) = generate_partial_ktree(10, 2, 1.0, 7).unwrap();
        assert_eq!(g.m(), 17);
    }

    #[test]
    fn dropping_all_edges_keeps_decomposition_valid() {
        let (g, td) = generate_partial_ktree(10, 2, 0.0, 7).unwrap();
        assert_eq!(g.m(), 0);
        assert!(validate(&g, &td).is_empty());
    }

    #[test]
    fn output_always_validates_with_width_bound() {
        for seed in 0..10u64 {
            for &(n, k, p) in &[(5, 1, 0.5), (9, 2, 0.7), (12, 3, 1.0), (6, 5, 0.3)] {
                let (g, td) = generate_partial_ktree(n, k, p, seed).unwrap();
                assert!(validate(&g, &td).is_empty());
                assert!(td.width() <= k);
            }
        }
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let (g1, td1) = generate_partial_ktree(14, 3, 0.5, 99).unwrap();
        let (g2, td2) = generate_partial_ktree(14, 3, 0.5, 99).unwrap();
        assert_eq!(g1.edges(), g2.edges());
        assert_eq!(td1.bags, td2.bags);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(generate_partial_ktree(3, 3, 1.0, 0).is_err());
        assert!(generate_partial_ktree(5, 2, 1.5, 0).is_err());
    }
}
