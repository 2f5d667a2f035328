//! Approximate target set selection with the monotone/splittable framework
//! and audit the realized ratio against the brute-force optimum.
//!
//! Run with: cargo run --example framework_tss

use twapprox::gen::{random_instance, WeightModel};
use twapprox::graph::ProblemKind;
use twapprox::nice::make_nice;
use twapprox::oracles::tss_opt_brute;
use twapprox::problems::TargetSetSelection;
use twapprox::subset::{solve, FrameworkOutcome, SubsetProblem};

fn main() {
    let prob = TargetSetSelection::default();
    println!(
        "{:>6} {:>3} {:>3} {:>4} {:>4} {:>6} {:>7}",
        "seed", "l", "opt", "|S|", "rds", "bound", "ratio"
    );
    for seed in 0..6u64 {
        let (inst, td) =
            random_instance(14, 2, 0.7, seed, ProblemKind::Tss, WeightModel::UpToDegree)
                .expect("valid parameters");
        let ntd = make_nice(inst.graph(), &td).unwrap();
        let w = ntd.width();
        let opt = tss_opt_brute(inst.graph(), inst.weights(), 18).unwrap();
        for l in 1..=3usize {
            let FrameworkOutcome::Solution { solution, stats } =
                solve(&prob, &inst, &Default::default(), &ntd, l).unwrap()
            else {
                unreachable!("the full vertex set is always a target set");
            };
            assert!(prob.is_solution(&inst, &solution));
            // |S| <= (1 + (w+1)/(l+1)) * OPT.
            assert!(solution.len() * (l + 1) <= opt * (l + 1 + w + 1));
            if opt <= l {
                assert_eq!(solution.len(), opt);
            }
            let bound = 1.0 + (w + 1) as f64 / (l + 1) as f64;
            let ratio = if opt > 0 {
                solution.len() as f64 / opt as f64
            } else {
                1.0
            };
            println!(
                "{seed:>6} {l:>3} {opt:>3} {:>4} {:>4} {bound:>6.3} {ratio:>7.3}",
                solution.len(),
                stats.rounds
            );
        }
    }
}
