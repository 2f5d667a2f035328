//! Vector dominating set through the framework, using the default budget
//! schedule derived from the width and the instance size.
//!
//! Run with: cargo run --example framework_vds

use twapprox::gen::{random_instance, WeightModel};
use twapprox::graph::ProblemKind;
use twapprox::nice::make_nice;
use twapprox::oracles::vds_opt_brute;
use twapprox::problems::{default_vds_budget, VectorDominatingSet};
use twapprox::subset::{solve, FrameworkOutcome, SubsetProblem};

fn main() {
    // The budget grows with w and (very slowly) with n.
    for &(w, n) in &[(1usize, 1usize << 16), (2, 1 << 16), (3, 1 << 20)] {
        println!(
            "default budget for w={w}, n=2^{}: {}",
            n.trailing_zeros(),
            default_vds_budget(w, n)
        );
    }
    println!();

    let prob = VectorDominatingSet::default();
    for seed in 0..5u64 {
        let (inst, td) =
            random_instance(14, 2, 0.8, seed, ProblemKind::Vds, WeightModel::UpToDegree)
                .expect("valid parameters");
        let ntd = make_nice(inst.graph(), &td).unwrap();
        let budget = default_vds_budget(ntd.width().max(1), inst.graph().n());
        let FrameworkOutcome::Solution { solution, stats } =
            solve(&prob, &inst, &Default::default(), &ntd, budget).unwrap()
        else {
            unreachable!("the full vertex set always dominates");
        };
        assert!(prob.is_solution(&inst, &solution));
        let opt = vds_opt_brute(inst.graph(), inst.weights(), 18).unwrap();
        println!(
            "seed {seed}: budget {budget}, |S| = {} vs OPT = {opt} in {} round(s), S = {:?}",
            solution.len(),
            stats.rounds,
            solution
        );
    }
}
