//! Solve capacitated vertex cover exactly over a nice tree decomposition
//! and verify the witness orientation it returns.
//!
//! Run with: cargo run --example solve_cvc_exact

use twapprox::cvc_exact::{solve_exact, CvcOutcome, ExactOptions};
use twapprox::gen::{random_instance, WeightModel};
use twapprox::graph::{orientation_feasible, ProblemKind};
use twapprox::nice::make_nice;

fn main() {
    let (inst, td) = random_instance(12, 2, 0.8, 5, ProblemKind::Cvc, WeightModel::Uniform(4))
        .expect("valid parameters");
    let ntd = make_nice(inst.graph(), &td).expect("generator output is valid");
    println!(
        "instance: n={} m={}, decomposition width {} with {} nice nodes",
        inst.graph().n(),
        inst.graph().m(),
        ntd.width(),
        ntd.num_nodes()
    );

    match solve_exact(&inst, &ntd, &ExactOptions::default()).expect("within the table cap") {
        CvcOutcome::Feasible { opt, witness } => {
            println!("optimal cover size: {opt}");
            let cover = witness.covered_vertices(inst.graph().n());
            println!("cover: {cover:?}");
            // Every edge is oriented, every indegree within capacity.
            assert_eq!(witness.len(), inst.graph().m());
            assert!(orientation_feasible(
                inst.graph(),
                &witness,
                inst.weights(),
                &inst.graph().vertices().collect(),
            ));
            assert_eq!(cover.len(), opt);
            for ((u, v), sink) in witness.oriented_edges().take(5) {
                println!("  edge {{{u},{v}}} covered by {sink}");
            }
        }
        CvcOutcome::Infeasible => {
            println!("instance is infeasible (some edge cannot be covered within capacities)");
        }
    }
}
