//! Cross-check the brute-force oracles against each other and against the
//! tree-decomposition solvers on a tiny batch.
//!
//! Run with: cargo run --example oracle_check

use twapprox::cvc_exact::{solve_exact, ExactOptions};
use twapprox::gen::{random_instance, WeightModel};
use twapprox::graph::ProblemKind;
use twapprox::nice::make_nice;
use twapprox::oracles::{cvc_opt_brute, enumerate_records, tss_opt_brute, vds_opt_brute};

fn main() {
    for seed in 0..8u64 {
        let (cvc, td) = random_instance(9, 2, 0.7, seed, ProblemKind::Cvc, WeightModel::Uniform(3))
            .expect("valid parameters");
        let ntd = make_nice(cvc.graph(), &td).unwrap();
        let brute = cvc_opt_brute(cvc.graph(), cvc.weights(), 18).unwrap();
        let dp = solve_exact(&cvc, &ntd, &ExactOptions::default())
            .unwrap()
            .opt();
        assert_eq!(brute, dp);
        println!("seed {seed}: cvc opt = {brute:?} (oracle and DP agree)");

        // Record enumeration doubles as a per-node table oracle.
        let root_records =
            enumerate_records(cvc.graph(), &ntd, cvc.weights(), ntd.root(), 20).unwrap();
        match brute {
            Some(opt) => assert_eq!(root_records.get(&Vec::new()), Some(&opt)),
            None => assert!(root_records.is_empty()),
        }

        let (tss, _) =
            random_instance(9, 2, 0.7, seed, ProblemKind::Tss, WeightModel::UpToDegree).unwrap();
        let (vds, _) =
            random_instance(9, 2, 0.7, seed, ProblemKind::Vds, WeightModel::UpToDegree).unwrap();
        println!(
            "          tss opt = {}, vds opt = {}",
            tss_opt_brute(tss.graph(), tss.weights(), 18).unwrap(),
            vds_opt_brute(vds.graph(), vds.weights(), 18).unwrap()
        );
    }
}
