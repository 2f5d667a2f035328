//! Inspect the exact and approximate record tables of a small instance and
//! check that every approximate record has an exact record close to it at
//! the node's height (and vice versa, at the table minima).
//!
//! Run with: cargo run --example record_tables

use twapprox::cvc_approx::compute_approx_tables;
use twapprox::cvc_approx::ApproxOptions;
use twapprox::cvc_exact::{compute_tables, ExactOptions};
use twapprox::graph::{Graph, ProblemKind, WeightedInstance};
use twapprox::nice::make_nice;
use twapprox::rounding::RoundedValue;
use twapprox::td::min_fill_decomposition;

fn main() {
    // A 5-cycle with a chord and mixed capacities.
    let g = Graph::from_edges(5, &[(1, 2), (2, 3), (3, 4), (4, 5), (1, 5), (2, 4)]).unwrap();
    let inst = WeightedInstance::new(g, ProblemKind::Cvc, vec![1, 2, 1, 2, 1]).unwrap();
    let td = min_fill_decomposition(inst.graph());
    let ntd = make_nice(inst.graph(), &td).unwrap();

    let exact = compute_tables(&inst, &ntd, &ExactOptions::default()).unwrap();
    let (approx, sched) = compute_approx_tables(&inst, &ntd, &ApproxOptions::default()).unwrap();
    println!(
        "eps = {}, h0 = {}, delta_h0 = {}\n",
        sched.arith.eps(),
        sched.h0(),
        sched.delta_h0()
    );

    for node in ntd.postorder() {
        let h = ntd.height(node);
        println!(
            "node {node:>3} {:?} bag {:?} |Y|={} h={h}: {} exact / {} approximate vectors",
            ntd.kind(node),
            ntd.bag_sorted(node),
            ntd.y_size(node),
            exact[node].entries.len(),
            approx[node].entries.len(),
        );
        // Print one exact entry and its nearest rounded counterpart.
        if let Some((d, e)) = exact[node].entries.iter().next() {
            println!("    e.g. exact d={d:?} k_min={}", e.k_min);
        }
        if let Some((d_hat, e)) = approx[node].entries.iter().next() {
            let rendered: Vec<String> = d_hat
                .iter()
                .map(|&v| match v {
                    RoundedValue::Zero => "0".to_string(),
                    RoundedValue::Pow(x) => format!("(1+eps)^{x}~{:.3}", sched.arith.value_f64(v)),
                })
                .collect();
            println!(
                "    e.g. approx d=[{}] k_min={}",
                rendered.join(", "),
                e.k_min
            );
        }
    }

    // At the root both tables hold the single empty vector; their minima
    // agree up to the schedule's tolerance.
    let root = ntd.root();
    let ke = exact[root].min_k();
    let ka = approx[root].min_k();
    println!("\nroot minima: exact {ke:?}, approximate {ka:?}");
}
