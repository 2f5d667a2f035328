//! Probe record membership with the polynomial-time flow test: for a node
//! of the decomposition, which budget-free records (d, |Y|) exist?
//!
//! Run with: cargo run --example flow_feasibility

use twapprox::cvc_approx::{feasibility_orientation, feasibility_test};
use twapprox::flow::FlowNetwork;
use twapprox::gen::{random_instance, WeightModel};
use twapprox::graph::ProblemKind;
use twapprox::nice::{make_nice, NodeKind};

fn main() {
    // The flow engine itself: a small bottleneck network.
    let mut net = FlowNetwork::new(4, 0, 3);
    net.add_arc(0, 1, 3);
    net.add_arc(0, 2, 2);
    net.add_arc(1, 3, 2);
    net.add_arc(2, 3, 2);
    println!(
        "bottleneck network max flow = {} (min cut 4)\n",
        net.max_flow().value
    );

    let (inst, td) = random_instance(10, 2, 0.8, 5, ProblemKind::Cvc, WeightModel::Uniform(3))
        .expect("valid parameters");
    let ntd = make_nice(inst.graph(), &td).unwrap();

    // Pick the forgetting-node child with the most forgotten vertices:
    // that is where the solver issues the most membership tests.
    let node = ntd
        .postorder()
        .into_iter()
        .filter_map(|n| match ntd.kind(n) {
            NodeKind::Forget(_) if !ntd.bag(ntd.children(n)[0]).is_empty() => {
                Some(ntd.children(n)[0])
            }
            _ => None,
        })
        .max_by_key(|&n| ntd.y_size(n))
        .expect("every nontrivial instance has forgetting nodes");
    let bag = ntd.bag_sorted(node);
    let bounds: Vec<usize> = bag
        .iter()
        .map(|&v| ntd.y_neighbor_count(inst.graph(), node, v))
        .collect();
    println!(
        "probing node {node} with bag {bag:?}, Y-degree bounds {bounds:?}, |Y| = {}",
        ntd.y_size(node)
    );

    let mut members = 0;
    let mut probed = 0;
    let mut d = vec![0usize; bag.len()];
    loop {
        probed += 1;
        if feasibility_test(&inst, &ntd, node, &d) {
            members += 1;
            if members <= 5 {
                let o = feasibility_orientation(&inst, &ntd, node, &d).unwrap();
                println!("  member d={d:?}; witness orients {} scope edges", o.len());
            }
        }
        // Odometer over the box of candidate vectors.
        let mut i = d.len();
        loop {
            if i == 0 {
                println!("{members} of {probed} candidate vectors are records");
                return;
            }
            i -= 1;
            if d[i] < bounds[i] {
                d[i] += 1;
                d[i + 1..].fill(0);
                break;
            }
        }
    }
}
