//! Validate a tree decomposition, convert it to nice form, and walk the
//! derived structure: node kinds, heights, and the X/V/Y vertex sets with
//! their separator property.
//!
//! Run with: cargo run --example nice_decomposition

use twapprox::gen::generate_partial_ktree;
use twapprox::graph::Graph;
use twapprox::nice::{make_nice, separator_check, NodeKind};
use twapprox::td::{min_fill_decomposition, validate, write_td, TreeDecomposition};

fn main() {
    // An invalid decomposition is reported with witnesses.
    let triangle = Graph::from_edges(3, &[(1, 2), (2, 3), (1, 3)]).unwrap();
    let broken = TreeDecomposition {
        bags: vec![[1, 2].into(), [2, 3].into()],
        edges: vec![(0, 1)],
    };
    for violation in validate(&triangle, &broken) {
        println!("violation: {violation}");
    }

    // Min-fill produces a valid decomposition for arbitrary graphs.
    let g =
        Graph::from_edges(6, &[(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (1, 6), (2, 5)]).unwrap();
    let td = min_fill_decomposition(&g);
    assert!(validate(&g, &td).is_empty());
    println!(
        "\nmin-fill decomposition (width {}):\n{}",
        td.width(),
        write_td(&td, g.n())
    );

    // Nicify generator output and inspect the structure.
    let (g, td) = generate_partial_ktree(8, 2, 1.0, 1).unwrap();
    let ntd = make_nice(&g, &td).unwrap();
    ntd.check(&g).unwrap();
    println!(
        "nice decomposition: {} nodes, width {}, root height {}",
        ntd.num_nodes(),
        ntd.width(),
        ntd.root_height()
    );
    let mut counts = [0usize; 4];
    for node in 0..ntd.num_nodes() {
        match ntd.kind(node) {
            NodeKind::Leaf => counts[0] += 1,
            NodeKind::Introduce(_) => counts[1] += 1,
            NodeKind::Forget(_) => counts[2] += 1,
            NodeKind::Join => counts[3] += 1,
        }
        // No edge leaves the forgotten region except through the bag.
        assert!(separator_check(&g, &ntd, node));
    }
    println!(
        "kinds: {} leaves, {} introduces, {} forgets, {} joins",
        counts[0], counts[1], counts[2], counts[3]
    );

    let root = ntd.root();
    assert!(ntd.bag(root).is_empty());
    println!(
        "root: bag {:?}, |V| = {}, |Y| = {}",
        ntd.bag(root),
        ntd.v_set(root).len(),
        ntd.y_size(root)
    );
}
