//! Run the rounded approximate CVC solver and compare its certified
//! interval against the exact optimum, both with the default epsilon and
//! with a deliberately inflated one that exercises the rounding paths.
//!
//! Run with: cargo run --example solve_cvc_approx

use num_traits::One;
use twapprox::cvc_approx::{solve_cvc_approx, ApproxOptions, ApproxOutcome};
use twapprox::cvc_exact::{solve_exact, CvcOutcome, ExactOptions};
use twapprox::gen::{random_instance, WeightModel};
use twapprox::graph::ProblemKind;
use twapprox::nice::make_nice;
use twapprox::rounding::{ratio, ratio_from_usize, Rational};

fn main() {
    let (inst, td) = random_instance(12, 2, 0.8, 5, ProblemKind::Cvc, WeightModel::Uniform(4))
        .expect("valid parameters");
    let ntd = make_nice(inst.graph(), &td).expect("generator output is valid");

    let CvcOutcome::Feasible { opt, .. } =
        solve_exact(&inst, &ntd, &ExactOptions::default()).unwrap()
    else {
        println!("draw again: this instance is infeasible");
        return;
    };
    println!("exact optimum: {opt}\n");

    let h0 = ntd.root_height();
    let configs = [
        ("default eps", ApproxOptions::default()),
        (
            "inflated eps (delta_h0 = 1/5)",
            ApproxOptions {
                epsilon: Some(ratio(1, (20 * (h0 + 1) * h0) as i64)),
                table_cap: 1_000_000,
            },
        ),
    ];
    for (label, opts) in configs {
        let ApproxOutcome::Feasible(sol) = solve_cvc_approx(&inst, &ntd, &opts).unwrap() else {
            unreachable!("feasibility matches the exact solver");
        };
        let one_plus = Rational::one() + &sol.delta_h0;
        let upper = &one_plus * &one_plus * ratio_from_usize(opt);
        println!("{label}:");
        println!("  eps        = {}", sol.epsilon);
        println!("  delta_h0   = {} (h0 = {})", sol.delta_h0, sol.h0);
        println!(
            "  k_hat_min  = {} (ceil {})",
            sol.k_hat_min, sol.k_hat_min_ceil
        );
        println!(
            "  interval   = [{opt}, {upper}] contains k_hat_min: {}",
            sol.k_hat_min >= ratio_from_usize(opt) && sol.k_hat_min <= upper
        );
        println!("  opt_lower  = {}", sol.opt_lower);
        println!(
            "  witness    = feasible cover of size {}\n",
            sol.witness_size
        );
        assert!(sol.k_hat_min >= ratio_from_usize(opt));
        assert!(sol.k_hat_min <= upper);
    }
}
