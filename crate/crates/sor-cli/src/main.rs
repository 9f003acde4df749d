//! Command-line front end: instance generation, solving, model export,
//! bound reports, and the grid-refinement sweep. JSON in, JSON/CSV out.
//!
//! Exit codes: 0 solved to optimality (or command succeeded), 2 a node or
//! time limit stopped the solve, 3 the instance is infeasible, 4 the
//! instance file failed to parse, 5 a model builder precondition failed,
//! 64 usage error.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use sor::apps::{ap_to_sor, gen_ap, gen_mcp, mcp_to_sor, preset};
use sor::bounds::{error_bound_report, psi_interval, saa_sizes};
use sor::model::{
    build_bilinear, build_exp_bilinear, build_milp, build_misocp1, build_misocp2, export_lp_text,
    export_mps, LpDialect, ModelIR,
};
use sor::oracle::{brute_force_solve, OracleBudget};
use sor::problem::{Family, SorProblem};
use sor::solve::{bb_solve, oa_solve, BnbConfig, Solution, SolveStatus};
use sor::{Discretization, Error};

#[derive(Parser)]
#[command(
    name = "sor",
    version,
    about = "Binary-continuous sum-of-ratios toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random instance and write it as sor-v1 JSON.
    Gen(GenArgs),
    /// Solve an instance on a K-piece grid; prints a run record as JSON.
    Solve(SolveArgs),
    /// Build a reformulation and write it as LP (or MPS) text.
    Export(ExportArgs),
    /// Report the error-bound constants and, with --gamma, sampling sizes.
    Bounds(BoundsArgs),
    /// Gap-vs-K sweep against a reference grid; prints CSV.
    Sweep(SweepArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Mcp,
    Ap,
}

#[derive(Args)]
struct GenArgs {
    /// Named benchmark group, e.g. mcp-T5-m50-C20-M16 or ap-T2-m10-C4-M3.
    #[arg(long, conflicts_with_all = ["family", "t", "m", "c", "card"])]
    preset: Option<String>,
    #[arg(long, value_enum)]
    family: Option<FamilyArg>,
    /// Number of ratios / customer segments.
    #[arg(long)]
    t: Option<usize>,
    /// Number of items / locations / products.
    #[arg(long)]
    m: Option<usize>,
    /// Budget right-hand side.
    #[arg(long)]
    c: Option<f64>,
    /// Cardinality bound.
    #[arg(long)]
    card: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Algorithm {
    Bb,
    Oa,
    Oracle,
}

#[derive(Args)]
struct SolveArgs {
    instance: PathBuf,
    /// Number of grid pieces.
    #[arg(long, default_value_t = 25)]
    k: usize,
    #[arg(long, value_enum, default_value_t = Algorithm::Bb)]
    algorithm: Algorithm,
    /// Cut violation threshold for the outer-approximation loop.
    #[arg(long, default_value_t = 1e-7)]
    epsilon: f64,
    #[arg(long)]
    time_limit: Option<f64>,
    #[arg(long)]
    node_limit: Option<u64>,
    /// Echoed into the run record.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Form {
    Milp,
    Misocp1,
    Misocp2,
    Bilinear,
    ExpBilinear,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExportFormat {
    Lp,
    Mps,
}

#[derive(Args)]
struct ExportArgs {
    instance: PathBuf,
    #[arg(long, default_value_t = 25)]
    k: usize,
    #[arg(long, value_enum)]
    form: Form,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = ExportFormat::Lp)]
    format: ExportFormat,
}

#[derive(Args)]
struct BoundsArgs {
    instance: PathBuf,
    /// Grid size to report the optimality bound for.
    #[arg(long)]
    k: Option<usize>,
    /// Target accuracy; reports the grid size that guarantees it.
    #[arg(long)]
    epsilon: Option<f64>,
    /// Failure probability; adds the sampling sizes to the report.
    #[arg(long)]
    gamma: Option<f64>,
    /// Ratio-spread constant for the sampling sizes; interval-derived when
    /// omitted.
    #[arg(long)]
    psi: Option<f64>,
}

#[derive(Args)]
struct SweepArgs {
    /// Instance file; alternatively use --preset with --seeds.
    instance: Option<PathBuf>,
    #[arg(long, conflicts_with = "instance")]
    preset: Option<String>,
    /// Comma-separated grid sizes.
    #[arg(long, value_delimiter = ',', default_values_t = vec![5usize, 10, 25])]
    k_list: Vec<usize>,
    #[arg(long, default_value_t = 50)]
    k_ref: usize,
    /// Comma-separated seeds (preset mode).
    #[arg(long, value_delimiter = ',', default_values_t = vec![0u64])]
    seeds: Vec<u64>,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct RunRecord<'a> {
    instance: &'a str,
    algorithm: &'a str,
    k: usize,
    objective: f64,
    bound: f64,
    gap_percent: f64,
    nodes: u64,
    cuts: u64,
    wall_time_seconds: f64,
    seed: Option<u64>,
    status: SolveStatus,
}

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

fn load_instance(path: &PathBuf) -> Result<SorProblem, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    sor::io::from_json(&text).map_err(|e| e.to_string())
}

fn generate(family: Family, t: usize, m: usize, c: f64, card: usize, seed: u64) -> SorProblem {
    match family {
        Family::Mcp => {
            mcp_to_sor(&gen_mcp(t, m, c, card, seed)).expect("generated instance is valid")
        }
        Family::Ap => ap_to_sor(&gen_ap(t, m, c, card, seed)).expect("generated instance is valid"),
        Family::Generic => unreachable!(),
    }
}

fn write_or_print(out: &Option<PathBuf>, text: &str) -> Result<(), String> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_gen(args: GenArgs) -> ExitCode {
    let (family, t, m, c, card) = if let Some(name) = &args.preset {
        match preset(name) {
            Some(found) => found,
            None => return fail(64, format!("unknown preset {name:?}")),
        }
    } else {
        match (args.family, args.t, args.m, args.c, args.card) {
            (Some(f), Some(t), Some(m), Some(c), Some(card)) => (
                match f {
                    FamilyArg::Mcp => Family::Mcp,
                    FamilyArg::Ap => Family::Ap,
                },
                t,
                m,
                c,
                card,
            ),
            _ => {
                return fail(
                    64,
                    "need either --preset or all of --family/--t/--m/--c/--card",
                )
            }
        }
    };
    let problem = generate(family, t, m, c, card, args.seed);
    let text = sor::io::to_json(&problem);
    match write_or_print(&args.out, &format!("{text}\n")) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(1, e),
    }
}

fn run_solve(
    problem: &SorProblem,
    k: usize,
    algorithm: Algorithm,
    epsilon: f64,
    cfg: &BnbConfig,
) -> Result<Solution, Error> {
    let disc = Discretization::new(problem, k);
    match algorithm {
        Algorithm::Bb => bb_solve(problem, &disc, cfg),
        Algorithm::Oa => oa_solve(problem, &disc, epsilon, cfg),
        Algorithm::Oracle => brute_force_solve(problem, &disc, &OracleBudget::default()),
    }
}

fn cmd_solve(args: SolveArgs) -> ExitCode {
    if args.k == 0 {
        return fail(64, "--k must be at least 1");
    }
    let problem = match load_instance(&args.instance) {
        Ok(p) => p,
        Err(e) => return fail(4, e),
    };
    let cfg = BnbConfig {
        node_limit: args.node_limit,
        time_limit_seconds: args.time_limit,
        ..BnbConfig::default()
    };
    let started = Instant::now();
    let solution = match run_solve(&problem, args.k, args.algorithm, args.epsilon, &cfg) {
        Ok(s) => s,
        Err(e) => return fail(1, e),
    };
    let wall = started.elapsed().as_secs_f64();
    let gap =
        100.0 * (solution.upper_bound - solution.objective) / solution.objective.abs().max(1.0);
    let record = RunRecord {
        instance: &args.instance.display().to_string(),
        algorithm: match args.algorithm {
            Algorithm::Bb => "bb",
            Algorithm::Oa => "oa",
            Algorithm::Oracle => "oracle",
        },
        k: args.k,
        objective: solution.objective,
        bound: solution.upper_bound,
        gap_percent: gap,
        nodes: solution.nodes_explored,
        cuts: solution.cuts_added,
        wall_time_seconds: wall,
        seed: args.seed,
        status: solution.status,
    };
    println!(
        "{}",
        serde_json::to_string_pretty(&record).expect("record serializes")
    );
    match solution.status {
        SolveStatus::Optimal | SolveStatus::GapLimit => ExitCode::SUCCESS,
        SolveStatus::NodeLimit | SolveStatus::TimeLimit => ExitCode::from(2),
        SolveStatus::Infeasible => ExitCode::from(3),
    }
}

fn build_form(problem: &SorProblem, k: usize, form: Form) -> Result<ModelIR, Error> {
    let disc = Discretization::new(problem, k);
    match form {
        Form::Milp => build_milp(problem, &disc, problem.family),
        Form::Misocp1 => build_misocp1(problem, &disc),
        Form::Misocp2 => build_misocp2(problem, &disc),
        Form::Bilinear => Ok(build_bilinear(problem, &disc)),
        Form::ExpBilinear => build_exp_bilinear(problem),
    }
}

fn cmd_export(args: ExportArgs) -> ExitCode {
    if args.k == 0 {
        return fail(64, "--k must be at least 1");
    }
    let problem = match load_instance(&args.instance) {
        Ok(p) => p,
        Err(e) => return fail(4, e),
    };
    let model = match build_form(&problem, args.k, args.form) {
        Ok(m) => m,
        Err(e) => return fail(5, e),
    };
    let dialect = LpDialect {
        allow_exp: matches!(args.form, Form::ExpBilinear),
    };
    let text = match args.format {
        ExportFormat::Lp => export_lp_text(&model, &dialect),
        ExportFormat::Mps => export_mps(&model),
    };
    let text = match text {
        Ok(t) => t,
        Err(e) => return fail(5, e),
    };
    if let Err(e) = fs::write(&args.out, text) {
        return fail(1, format!("{}: {e}", args.out.display()));
    }
    let sizes = model.size_summary();
    println!(
        "{}",
        serde_json::json!({
            "form": model.name,
            "binary": sizes.binary,
            "continuous": sizes.continuous,
            "constraints": sizes.constraints,
            "out": args.out.display().to_string(),
        })
    );
    ExitCode::SUCCESS
}

fn cmd_bounds(args: BoundsArgs) -> ExitCode {
    let problem = match load_instance(&args.instance) {
        Ok(p) => p,
        Err(e) => return fail(4, e),
    };
    let k = args.k.unwrap_or(25).max(1);
    let report = match error_bound_report(&problem, k) {
        Ok(r) => r,
        Err(e) => return fail(5, e),
    };
    let mut doc = serde_json::json!({
        "c": report.c,
        "max_range": report.max_range,
        "k_used": report.k_used,
        "gap_bound": report.gap_bound,
        "per_ratio": report.per_t,
    });
    if let Some(eps) = args.epsilon {
        doc["required_k"] =
            serde_json::json!(sor::bounds::required_k(report.c, report.max_range, eps));
        doc["epsilon"] = serde_json::json!(eps);
    }
    if let Some(gamma) = args.gamma {
        let eps = args.epsilon.unwrap_or(0.1);
        let psi = match args.psi {
            Some(p) => p,
            None => match psi_interval(&problem) {
                Ok(p) => p,
                Err(e) => return fail(5, e),
            },
        };
        let sizing = saa_sizes(eps, gamma, psi, report.c, report.max_range);
        doc["saa"] = serde_json::to_value(&sizing).expect("sizing serializes");
    }
    println!(
        "{}",
        serde_json::to_string_pretty(&doc).expect("report serializes")
    );
    ExitCode::SUCCESS
}

fn cmd_sweep(args: SweepArgs) -> ExitCode {
    if args.k_ref == 0 || args.k_list.iter().any(|&k| k == 0) {
        return fail(64, "grid sizes must be at least 1");
    }
    let cfg = BnbConfig::default();
    let mut rows = String::from("seed,k,objective,reference,gap_percent,status\n");
    let jobs: Vec<(u64, SorProblem)> = if let Some(name) = &args.preset {
        match preset(name) {
            Some((family, t, m, c, card)) => args
                .seeds
                .iter()
                .map(|&s| (s, generate(family, t, m, c, card, s)))
                .collect(),
            None => return fail(64, format!("unknown preset {name:?}")),
        }
    } else if let Some(path) = &args.instance {
        match load_instance(path) {
            Ok(p) => vec![(args.seeds.first().copied().unwrap_or(0), p)],
            Err(e) => return fail(4, e),
        }
    } else {
        return fail(64, "need an instance path or --preset");
    };
    for (seed, problem) in &jobs {
        let d_ref = Discretization::new(problem, args.k_ref);
        let reference = match bb_solve(problem, &d_ref, &cfg) {
            Ok(s) if s.status == SolveStatus::Optimal => s.objective,
            Ok(_) | Err(_) => {
                for &k in &args.k_list {
                    rows.push_str(&format!("{seed},{k},,,,failed\n"));
                }
                continue;
            }
        };
        for &k in &args.k_list {
            let d = Discretization::new(problem, k);
            match bb_solve(problem, &d, &cfg) {
                Ok(s) if s.status == SolveStatus::Optimal => {
                    let gap = if reference.abs() > 1e-300 {
                        100.0 * (reference - s.objective) / reference
                    } else {
                        0.0
                    };
                    rows.push_str(&format!(
                        "{seed},{k},{},{},{},ok\n",
                        s.objective, reference, gap
                    ));
                }
                Ok(_) | Err(_) => rows.push_str(&format!("{seed},{k},,,,failed\n")),
            }
        }
    }
    match write_or_print(&args.out, &rows) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(1, e),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // keep exit code 2 reserved for limit-stopped solves
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 64 } else { 0 });
        }
    };
    match cli.command {
        Command::Gen(args) => cmd_gen(args),
        Command::Solve(args) => cmd_solve(args),
        Command::Export(args) => cmd_export(args),
        Command::Bounds(args) => cmd_bounds(args),
        Command::Sweep(args) => cmd_sweep(args),
    }
}
