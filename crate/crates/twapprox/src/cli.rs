//! Command-line front end: parse instances and decompositions, dispatch
//! solvers, emit JSON reports, and drive reproducible sweeps.
//!
//! Exit codes: 0 success, 2 infeasible / no solution, 3 input error,
//! 4 resource guard tripped.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::Ratio;
use serde_json::json;

use crate::cvc_approx::{solve_cvc_approx, ApproxOptions, ApproxOutcome};
use crate::cvc_exact::{solve_exact, CvcOutcome, ExactOptions};
use crate::error::Error;
use crate::gen::{random_instance, WeightModel};
use crate::graph::{parse_instance, write_instance, Orientation, ProblemKind, WeightedInstance};
use crate::nice::{make_nice, NiceTreeDecomposition};
use crate::oracles::{cvc_opt_brute, tss_opt_brute, vds_opt_brute, DEFAULT_ORACLE_GUARD};
use crate::problems::{default_vds_budget, TargetSetSelection, VectorDominatingSet};
use crate::report::{ratio_str, Report};
use crate::rounding::Rational;
use crate::subset::{solve as framework_solve, FrameworkOutcome, SubsetProblem};
use crate::td::{min_fill_decomposition, parse_td, validate, write_td};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;
pub const EXIT_RESOURCE: i32 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "twapprox",
    version,
    about = "Treewidth-parameterized exact and approximate solvers for CVC, TSS and VDS"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact CVC optimum via the record-set DP (n^(w+O(1)) time).
    SolveCvcExact {
        instance: PathBuf,
        /// External tree decomposition (PACE-style); min-fill otherwise.
        #[arg(long)]
        td: Option<PathBuf>,
        /// Cap on distinct d-vectors per node.
        #[arg(long, default_value_t = 10_000_000)]
        table_cap: usize,
        /// Write the witness orientation to a file.
        #[arg(long)]
        emit_witness: Option<PathBuf>,
        /// Copy the JSON report to a file.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Approximate CVC within [OPT, (1+delta_h0)^2 OPT] via rounded tables.
    SolveCvcApprox {
        instance: PathBuf,
        #[arg(long)]
        td: Option<PathBuf>,
        /// Rounding parameter as `p/q` or a decimal; default 1/(w^2 log2 n)^3.
        #[arg(long)]
        epsilon: Option<String>,
        /// Cap on distinct rounded vectors per node.
        #[arg(long, default_value_t = 1_000_000)]
        table_cap: usize,
        #[arg(long)]
        emit_witness: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// TSS within ratio 1 + (w+1)/(budget+1) in n^(budget+O(1)) time.
    SolveTss {
        instance: PathBuf,
        /// Brute-force budget (the constant C).
        #[arg(long)]
        budget: usize,
        #[arg(long)]
        td: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// VDS within ratio 1 + (w+1)/(budget+1); `--budget auto` uses the
    /// default schedule.
    SolveVds {
        instance: PathBuf,
        /// Integer budget, or `auto`.
        #[arg(long)]
        budget: String,
        #[arg(long)]
        td: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Brute-force optimum of a CVC/TSS/VDS instance (guarded).
    Oracle {
        instance: PathBuf,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Generate a random partial-k-tree instance with a certified
    /// decomposition.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Probability of keeping each k-tree edge.
        #[arg(long, default_value_t = 1.0)]
        keep: f64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value = "cvc")]
        kind: String,
        /// Weight model: an integer max, or `deg` for per-vertex [0, deg].
        #[arg(long)]
        wmax: Option<String>,
        /// Instance file (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Decomposition file (not written if omitted).
        #[arg(long)]
        td_out: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Check a decomposition against an instance, reporting violations.
    ValidateTd {
        instance: PathBuf,
        #[arg(long)]
        td: PathBuf,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Convert to nice form and report width, node count and height.
    NiceTd {
        instance: PathBuf,
        #[arg(long)]
        td: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Run the built-in deterministic experiment matrix; reports omit wall
    /// time so output is byte-identical across runs.
    Sweep {
        #[arg(long)]
        seed: u64,
        /// JSONL output file (stdout if omitted).
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

/// Parses `p/q`, decimal (`0.25`) or integer strings into exact rationals.
pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    let bad = || Error::input(format!("cannot parse rational `{s}`"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q == BigInt::from(0) {
            return Err(bad());
        }
        return Ok(Ratio::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let digits = format!("{int}{frac}");
        let p: BigInt = digits.parse().map_err(|_| bad())?;
        let q = BigInt::from(10u32).pow(frac.len() as u32);
        return Ok(Ratio::new(p, q));
    }
    let p: BigInt = s.trim().parse().map_err(|_| bad())?;
    Ok(Ratio::from_integer(p))
}

fn oracle_guard() -> usize {
    std::env::var("TWAPPROX_GUARD_MAX")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_ORACLE_GUARD)
}

fn read_instance(path: &Path) -> Result<WeightedInstance, Error> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::input(format!("cannot read {}: {e}", path.display())))?;
    parse_instance(&text)
}

fn decomposition_for(
    inst: &WeightedInstance,
    td_path: Option<&PathBuf>,
) -> Result<NiceTreeDecomposition, Error> {
    let td = match td_path {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::input(format!("cannot read {}: {e}", path.display())))?;
            parse_td(&text)?
        }
        None => min_fill_decomposition(inst.graph()),
    };
    make_nice(inst.graph(), &td)
}

fn write_witness(path: &Path, witness: &Orientation) -> Result<(), Error> {
    let mut out = String::from("c oriented edges: <u> <v> <sink>\n");
    for ((u, v), s) in witness.oriented_edges() {
        out.push_str(&format!("{u} {v} {s}\n"));
    }
    fs::write(path, out)?;
    Ok(())
}

fn emit(report: &Report, json_path: Option<&PathBuf>) -> Result<(), Error> {
    let line = report.to_json();
    println!("{line}");
    if let Some(path) = json_path {
        fs::write(path, format!("{line}\n"))?;
    }
    Ok(())
}

fn status_exit(status: &str) -> i32 {
    match status {
        "infeasible" | "no-solution" => EXIT_INFEASIBLE,
        _ => EXIT_OK,
    }
}

/// Entry point used by the binary and by tests. Returns the process exit
/// code instead of exiting, so it is callable in-process.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // Clap renders its own usage text; --help/--version are not errors.
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::Resource { .. } => EXIT_RESOURCE,
                _ => EXIT_INPUT,
            }
        }
    }
}

fn dispatch(cmd: Command) -> Result<i32, Error> {
    match cmd {
        Command::SolveCvcExact {
            instance,
            td,
            table_cap,
            emit_witness,
            json,
        } => {
            let inst = read_instance(&instance)?;
            let started = Instant::now();
            let ntd = decomposition_for(&inst, td.as_ref())?;
            let outcome = solve_exact(&inst, &ntd, &ExactOptions { table_cap })?;
            let mut report = Report::new("solve-cvc-exact", &inst);
            report.params = json!({
                "td": td.map(|p| p.display().to_string()),
                "table_cap": table_cap,
                "width": ntd.width(),
                "height": ntd.root_height(),
            });
            match outcome {
                CvcOutcome::Feasible { opt, witness } => {
                    report.status = "ok".into();
                    report.result = json!({
                        "opt": opt,
                        "witness_size": witness.covered_vertices(inst.graph().n()).len(),
                    });
                    if let Some(path) = emit_witness {
                        write_witness(&path, &witness)?;
                    }
                }
                CvcOutcome::Infeasible => report.status = "infeasible".into(),
            }
            report.wall_time_ms = Some(started.elapsed().as_millis() as u64);
            emit(&report, json.as_ref())?;
            Ok(status_exit(&report.status))
        }

        Command::SolveCvcApprox {
            instance,
            td,
            epsilon,
            table_cap,
            emit_witness,
            json,
        } => {
            let inst = read_instance(&instance)?;
            let started = Instant::now();
            let ntd = decomposition_for(&inst, td.as_ref())?;
            let eps = epsilon.as_deref().map(parse_rational).transpose()?;
            let opts = ApproxOptions {
                epsilon: eps.clone(),
                table_cap,
            };
            let outcome = solve_cvc_approx(&inst, &ntd, &opts)?;
            let mut report = Report::new("solve-cvc-approx", &inst);
            report.params = json!({
                "td": td.map(|p| p.display().to_string()),
                "epsilon": eps.as_ref().map(ratio_str),
                "table_cap": table_cap,
                "width": ntd.width(),
                "height": ntd.root_height(),
            });
            match outcome {
                ApproxOutcome::Feasible(sol) => {
                    report.status = "ok".into();
                    report.result = json!({
                        "opt_lower": sol.opt_lower,
                        "k_hat_min": ratio_str(&sol.k_hat_min),
                        "k_hat_min_ceil": sol.k_hat_min_ceil,
                        "min_k_hat": sol.min_k_hat,
                        "delta_h0": ratio_str(&sol.delta_h0),
                        "epsilon": ratio_str(&sol.epsilon),
                        "h0": sol.h0,
                        "table_sizes": sol.table_sizes,
                        "witness_size": sol.witness_size,
                    });
                    if let Some(path) = emit_witness {
                        write_witness(&path, &sol.witness)?;
                    }
                }
                ApproxOutcome::Infeasible => report.status = "infeasible".into(),
            }
            report.wall_time_ms = Some(started.elapsed().as_millis() as u64);
            emit(&report, json.as_ref())?;
            Ok(status_exit(&report.status))
        }

        Command::SolveTss {
            instance,
            budget,
            td,
            json,
        } => {
            let inst = read_instance(&instance)?;
            if inst.kind() != ProblemKind::Tss {
                return Err(Error::input(format!(
                    "solve-tss expects a tss instance, got {}",
                    inst.kind()
                )));
            }
            run_framework(
                &inst,
                &TargetSetSelection::default(),
                budget,
                td,
                json,
                "solve-tss",
            )
        }

        Command::SolveVds {
            instance,
            budget,
            td,
            json,
        } => {
            let inst = read_instance(&instance)?;
            if inst.kind() != ProblemKind::Vds {
                return Err(Error::input(format!(
                    "solve-vds expects a vds instance, got {}",
                    inst.kind()
                )));
            }
            let ntd_probe = decomposition_for(&inst, td.as_ref())?;
            let budget = match budget.as_str() {
                "auto" => default_vds_budget(ntd_probe.width().max(1), inst.graph().n()),
                s => s
                    .parse()
                    .map_err(|_| Error::input(format!("bad --budget `{s}` (want int or auto)")))?,
            };
            run_framework(
                &inst,
                &VectorDominatingSet::default(),
                budget,
                td,
                json,
                "solve-vds",
            )
        }

        Command::Oracle { instance, json } => {
            let inst = read_instance(&instance)?;
            let started = Instant::now();
            let guard = oracle_guard();
            let opt: Option<usize> = match inst.kind() {
                ProblemKind::Cvc => cvc_opt_brute(inst.graph(), inst.weights(), guard)?,
                ProblemKind::Tss => Some(tss_opt_brute(inst.graph(), inst.weights(), guard)?),
                ProblemKind::Vds => Some(vds_opt_brute(inst.graph(), inst.weights(), guard)?),
            };
            let mut report = Report::new("oracle", &inst);
            report.params = json!({ "guard": guard });
            match opt {
                Some(opt) => {
                    report.status = "ok".into();
                    report.result = json!({ "opt": opt });
                }
                None => report.status = "infeasible".into(),
            }
            report.wall_time_ms = Some(started.elapsed().as_millis() as u64);
            emit(&report, json.as_ref())?;
            Ok(status_exit(&report.status))
        }

        Command::Gen {
            n,
            k,
            keep,
            seed,
            kind,
            wmax,
            out,
            td_out,
            json,
        } => {
            let kind = ProblemKind::parse(&kind)?;
            let weights = match wmax.as_deref() {
                None => match kind {
                    ProblemKind::Cvc => WeightModel::Uniform(3),
                    _ => WeightModel::UpToDegree,
                },
                Some("deg") => WeightModel::UpToDegree,
                Some(s) => WeightModel::Uniform(
                    s.parse()
                        .map_err(|_| Error::input(format!("bad --wmax `{s}`")))?,
                ),
            };
            let (inst, td) = random_instance(n, k, keep, seed, kind, weights)?;
            let text = write_instance(&inst);
            match &out {
                Some(path) => fs::write(path, &text)?,
                None => print!("{text}"),
            }
            if let Some(path) = &td_out {
                fs::write(path, write_td(&td, n))?;
            }
            if json.is_some() {
                let mut report = Report::new("gen", &inst);
                report.seed = Some(seed);
                report.params = json!({
                    "n": n, "k": k, "keep": keep, "kind": kind.to_string(),
                });
                report.status = "ok".into();
                report.result = json!({
                    "m": inst.graph().m(),
                    "td_width": td.width(),
                    "td_bags": td.num_nodes(),
                });
                emit(&report, json.as_ref())?;
            }
            Ok(EXIT_OK)
        }

        Command::ValidateTd { instance, td, json } => {
            let inst = read_instance(&instance)?;
            let text = fs::read_to_string(&td)
                .map_err(|e| Error::input(format!("cannot read {}: {e}", td.display())))?;
            let parsed = parse_td(&text)?;
            let violations = validate(inst.graph(), &parsed);
            let mut report = Report::new("validate-td", &inst);
            report.params = json!({
                "td": td.display().to_string(),
                "width": parsed.width(),
                "bags": parsed.num_nodes(),
            });
            if violations.is_empty() {
                report.status = "ok".into();
                emit(&report, json.as_ref())?;
                Ok(EXIT_OK)
            } else {
                report.status = "invalid".into();
                report.result = json!({
                    "violations": violations.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                });
                emit(&report, json.as_ref())?;
                Ok(EXIT_INPUT)
            }
        }

        Command::NiceTd { instance, td, json } => {
            let inst = read_instance(&instance)?;
            let ntd = decomposition_for(&inst, td.as_ref())?;
            let mut report = Report::new("nice-td", &inst);
            report.params = json!({ "td": td.map(|p| p.display().to_string()) });
            report.status = "ok".into();
            report.result = json!({
                "width": ntd.width(),
                "nodes": ntd.num_nodes(),
                "height": ntd.root_height(),
            });
            emit(&report, json.as_ref())?;
            Ok(EXIT_OK)
        }

        Command::Sweep { seed, json } => sweep(seed, json.as_ref()),
    }
}

fn run_framework(
    inst: &WeightedInstance,
    prob: &dyn SubsetProblem,
    budget: usize,
    td: Option<PathBuf>,
    json: Option<PathBuf>,
    command: &str,
) -> Result<i32, Error> {
    let started = Instant::now();
    let ntd = decomposition_for(inst, td.as_ref())?;
    let w = ntd.width();
    let outcome = framework_solve(prob, inst, &Default::default(), &ntd, budget)?;
    let ratio_bound = Rational::new(BigInt::from(budget + w + 2), BigInt::from(budget + 1));
    let mut report = Report::new(command, inst);
    report.params = json!({
        "td": td.map(|p| p.display().to_string()),
        "budget": budget,
        "width": w,
        "height": ntd.root_height(),
    });
    match outcome {
        FrameworkOutcome::Solution { solution, stats } => {
            debug_assert!(prob.is_solution(inst, &solution));
            report.status = "ok".into();
            report.result = json!({
                "solution": solution.iter().copied().collect::<Vec<_>>(),
                "solution_size": solution.len(),
                "ratio_bound": ratio_str(&ratio_bound),
                "rounds": stats.rounds,
                "bad_node_heights": stats.bad_node_heights,
            });
        }
        FrameworkOutcome::NoSolution => report.status = "no-solution".into(),
    }
    report.wall_time_ms = Some(started.elapsed().as_millis() as u64);
    emit(&report, json.as_ref())?;
    Ok(status_exit(&report.status))
}

/// The built-in sweep matrix: small partial k-trees across all three
/// problems, solved by every applicable engine. Reports omit wall time and
/// are emitted as JSON lines.
fn sweep(seed: u64, json_path: Option<&PathBuf>) -> Result<i32, Error> {
    let mut lines: Vec<String> = Vec::new();
    let mut counter = 0u64;
    for kind in [ProblemKind::Cvc, ProblemKind::Tss, ProblemKind::Vds] {
        for &(n, k) in &[(8usize, 1usize), (8, 2), (10, 2)] {
            for &keep in &[0.6f64, 1.0] {
                for _rep in 0..2 {
                    counter += 1;
                    let inst_seed = seed.wrapping_add(counter.wrapping_mul(0x9e37_79b9_7f4a_7c15));
                    let weights = match kind {
                        ProblemKind::Cvc => WeightModel::Uniform(3),
                        _ => WeightModel::UpToDegree,
                    };
                    let (inst, td) = random_instance(n, k, keep, inst_seed, kind, weights)?;
                    let ntd = make_nice(inst.graph(), &td)?;
                    let params = json!({
                        "n": n, "k": k, "keep": keep, "kind": kind.to_string(),
                    });

                    let mut oracle_report = Report::new("oracle", &inst);
                    oracle_report.seed = Some(inst_seed);
                    oracle_report.params = params.clone();
                    let opt = match kind {
                        ProblemKind::Cvc => {
                            cvc_opt_brute(inst.graph(), inst.weights(), DEFAULT_ORACLE_GUARD)?
                        }
                        ProblemKind::Tss => Some(tss_opt_brute(
                            inst.graph(),
                            inst.weights(),
                            DEFAULT_ORACLE_GUARD,
                        )?),
                        ProblemKind::Vds => Some(vds_opt_brute(
                            inst.graph(),
                            inst.weights(),
                            DEFAULT_ORACLE_GUARD,
                        )?),
                    };
                    match opt {
                        Some(o) => {
                            oracle_report.status = "ok".into();
                            oracle_report.result = json!({ "opt": o });
                        }
                        None => oracle_report.status = "infeasible".into(),
                    }
                    lines.push(oracle_report.to_json());

                    match kind {
                        ProblemKind::Cvc => {
                            let mut r = Report::new("solve-cvc-exact", &inst);
                            r.seed = Some(inst_seed);
                            r.params = params.clone();
                            match solve_exact(&inst, &ntd, &ExactOptions::default())? {
                                CvcOutcome::Feasible { opt, witness } => {
                                    r.status = "ok".into();
                                    r.result = json!({
                                        "opt": opt,
                                        "witness_size":
                                            witness.covered_vertices(inst.graph().n()).len(),
                                    });
                                }
                                CvcOutcome::Infeasible => r.status = "infeasible".into(),
                            }
                            lines.push(r.to_json());

                            let mut r = Report::new("solve-cvc-approx", &inst);
                            r.seed = Some(inst_seed);
                            r.params = params.clone();
                            match solve_cvc_approx(&inst, &ntd, &ApproxOptions::default())? {
                                ApproxOutcome::Feasible(sol) => {
                                    r.status = "ok".into();
                                    r.result = json!({
                                        "opt_lower": sol.opt_lower,
                                        "k_hat_min": ratio_str(&sol.k_hat_min),
                                        "k_hat_min_ceil": sol.k_hat_min_ceil,
                                        "min_k_hat": sol.min_k_hat,
                                        "delta_h0": ratio_str(&sol.delta_h0),
                                        "epsilon": ratio_str(&sol.epsilon),
                                        "h0": sol.h0,
                                        "table_sizes": sol.table_sizes,
                                        "witness_size": sol.witness_size,
                                    });
                                }
                                ApproxOutcome::Infeasible => r.status = "infeasible".into(),
                            }
                            lines.push(r.to_json());
                        }
                        ProblemKind::Tss | ProblemKind::Vds => {
                            let budget = 2usize;
                            let prob: &dyn SubsetProblem = match kind {
                                ProblemKind::Tss => &TargetSetSelection {
                                    brute_cap: crate::problems::DEFAULT_BRUTE_CAP,
                                },
                                _ => &VectorDominatingSet {
                                    brute_cap: crate::problems::DEFAULT_BRUTE_CAP,
                                },
                            };
                            let cmd = if kind == ProblemKind::Tss {
                                "solve-tss"
                            } else {
                                "solve-vds"
                            };
                            let mut r = Report::new(cmd, &inst);
                            r.seed = Some(inst_seed);
                            r.params = params.clone();
                            let w = ntd.width();
                            match framework_solve(prob, &inst, &Default::default(), &ntd, budget)? {
                                FrameworkOutcome::Solution { solution, stats } => {
                                    r.status = "ok".into();
                                    let bound = Rational::new(
                                        BigInt::from(budget + w + 2),
                                        BigInt::from(budget + 1),
                                    );
                                    r.result = json!({
                                        "solution": solution.iter().copied().collect::<Vec<_>>(),
                                        "solution_size": solution.len(),
                                        "ratio_bound": ratio_str(&bound),
                                        "rounds": stats.rounds,
                                        "bad_node_heights": stats.bad_node_heights,
                                    });
                                }
                                FrameworkOutcome::NoSolution => r.status = "no-solution".into(),
                            }
                            lines.push(r.to_json());
                        }
                    }
                }
            }
        }
    }
    let payload = lines.join("\n") + "\n";
    match json_path {
        Some(path) => fs::write(path, payload)?,
        None => print!("{payload}"),
    }
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_parsing() {
        assert_eq!(
            parse_rational("1/64000").unwrap(),
            Ratio::new(1.into(), 64000.into())
        );
        assert_eq!(
            parse_rational("0.25").unwrap(),
            Ratio::new(1.into(), 4.into())
        );
        assert_eq!(parse_rational("3").unwrap(), Ratio::from_integer(3.into()));
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn unknown_flag_is_input_error() {
        assert_eq!(run(["twapprox", "--nonsense"]), EXIT_INPUT);
        assert_eq!(run(["twapprox", "oracle"]), EXIT_INPUT);
    }

    #[test]
    fn help_exits_zero() {
        assert_eq!(run(["twapprox", "--help"]), EXIT_OK);
    }
}
