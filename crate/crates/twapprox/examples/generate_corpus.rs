//! Generate a batch of random partial-k-trees with width-certified
//! decompositions and print their vital statistics.
//!
//! Run with: cargo run --example generate_corpus

use twapprox::gen::generate_partial_ktree;
use twapprox::td::validate;

fn main() {
    println!(
        "{:>4} {:>2} {:>5} {:>6} {:>6} {:>6}",
        "n", "k", "keep", "seed", "edges", "width"
    );
    for &(n, k, keep) in &[
        (10usize, 1usize, 1.0f64),
        (10, 2, 1.0),
        (14, 2, 0.5),
        (16, 3, 0.7),
    ] {
        for seed in 0..3u64 {
            let (graph, td) = generate_partial_ktree(n, k, keep, seed).expect("valid parameters");
            assert!(
                validate(&graph, &td).is_empty(),
                "generator output must validate"
            );
            assert!(td.width() <= k, "width is certified by construction");
            println!(
                "{n:>4} {k:>2} {keep:>5.2} {seed:>6} {:>6} {:>6}",
                graph.m(),
                td.width()
            );
        }
    }
    // keep = 1.0 gives the full k-tree edge count kn - k(k+1)/2.
    let (full, _) = generate_partial_ktree(10, 2, 1.0, 7).unwrap();
    assert_eq!(full.m(), 17);
    println!(
        "\nfull 2-tree on 10 vertices has 2*10 - 3 = {} edges",
        full.m()
    );
}
