//! Treewidth-parameterized solvers for capacitated vertex cover (CVC),
//! target set selection (TSS) and vector dominating set (VDS).
//!
//! The crate provides:
//!
//! * an exact record-set dynamic program for CVC over nice tree
//!   decompositions ([`cvc_exact`]), with solution reconstruction;
//! * a rounded approximate DP for CVC ([`cvc_approx`]) whose output is
//!   guaranteed to lie in `[OPT, (1+delta_h0)^2 * OPT]`, where `delta_h0`
//!   comes from a per-height error schedule ([`rounding`]);
//! * a generic approximation framework for monotone, splittable
//!   vertex-subset problems ([`subset`]), instantiated for TSS and VDS
//!   ([`problems`]);
//! * brute-force reference oracles used by the test suite ([`oracles`]);
//! * a random partial-k-tree generator ([`gen`]) that certifies the width
//!   of its output by construction.
//!
//! Everything is deterministic: all randomness flows from explicit seeds,
//! and record tables iterate in a fixed order.
//!
//! ```
//! use twapprox::graph::{Graph, ProblemKind, WeightedInstance};
//! use twapprox::td::min_fill_decomposition;
//! use twapprox::nice::make_nice;
//! use twapprox::cvc_exact::{solve_exact, CvcOutcome, ExactOptions};
//!
//! // A star with center 1: the center has capacity 3, the leaves 0.
//! let g = Graph::from_edges(4, &[(1, 2), (1, 3), (1, 4)]).unwrap();
//! let inst = WeightedInstance::new(g, ProblemKind::Cvc, vec![3, 0, 0, 0]).unwrap();
//! let td = min_fill_decomposition(inst.graph());
//! let ntd = make_nice(inst.graph(), &td).unwrap();
//! match solve_exact(&inst, &ntd, &ExactOptions::default()).unwrap() {
//!     CvcOutcome::Feasible { opt, .. } => assert_eq!(opt, 1),
//!     CvcOutcome::Infeasible => unreachable!(),
//! }
//! ```

#![forbid(unsafe_code)]

pub mod cli;
pub mod cvc_approx;
pub mod cvc_exact;
pub mod error;
pub mod flow;
pub mod gen;
pub mod graph;
pub mod nice;
pub mod oracles;
pub mod problems;
pub mod report;
pub mod rounding;
pub mod subset;
pub mod td;

pub use error::Error;
