use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Mutex;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use lgres::clause::{check_lgc, render_literals, LgcCheck};
use lgres::oracle::{finite_model_search, forward_chain, naive_resolution, OracleVerdict};
use lgres::query::{
    answer_bcq, build_theory, classify_query, decide_sat, negate_query, Mode, QueryAnswer,
    QueryClass, SatResult, Theory,
};
use lgres::saturation::{Limits, Options, ProofTrace, Stats};
use lgres::{parse_problem, Problem};

#[derive(Parser)]
#[command(name = "lgres", about = "reasoner for the loosely guarded fragment", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide satisfiability of the formulas and facts in each file.
    Sat(RunArgs),
    /// Answer the Boolean conjunctive queries in each file.
    Query(RunArgs),
    /// Print the clausification of the formulas in each file.
    Clausify(RunArgs),
    /// Print the classification of each query in each file.
    Classify(RunArgs),
}

#[derive(Args, Clone)]
struct RunArgs {
    /// Problem files; with --jobs they are processed in parallel.
    #[arg(required = true)]
    files: Vec<PathBuf>,
    /// Print a proof trace for unsatisfiable/entailed verdicts.
    #[arg(long)]
    proof: bool,
    /// Print saturation statistics.
    #[arg(long)]
    stats: bool,
    /// Enable internal invariant assertions.
    #[arg(long)]
    assert_invariants: bool,
    /// Cross-check verdicts with the brute-force oracles.
    #[arg(long)]
    oracle_check: bool,
    /// Kept-clause limit.
    #[arg(long, default_value_t = 100_000)]
    max_clauses: usize,
    /// Wall-clock limit per saturation, in seconds.
    #[arg(long, default_value_t = 60)]
    max_seconds: u64,
    /// Query answering mode.
    #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
    mode: ModeArg,
    /// Number of worker threads over the input files.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Horn,
    Restricted,
    Auto,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (args, run): (&RunArgs, fn(&Problem, &RunArgs, &mut Report)) = match &cli.command {
        Command::Sat(a) => (a, run_sat),
        Command::Query(a) => (a, run_query),
        Command::Clausify(a) => (a, run_clausify),
        Command::Classify(a) => (a, run_classify),
    };
    let jobs = args.jobs.max(1);
    let n = args.files.len();
    let outputs: Mutex<Vec<Option<Report>>> = Mutex::new(vec![None; n]);
    let next = Mutex::new(0usize);
    std::thread::scope(|scope| {
        for _ in 0..jobs.min(n) {
            scope.spawn(|| loop {
                let idx = {
                    let mut guard = next.lock().unwrap();
                    if *guard >= n {
                        return;
                    }
                    let i = *guard;
                    *guard += 1;
                    i
                };
                let report = process_file(&args.files[idx], args, run);
                outputs.lock().unwrap()[idx] = Some(report);
            });
        }
    });
    let mut failed = false;
    for (i, report) in outputs.into_inner().unwrap().into_iter().enumerate() {
        let report = report.expect("worker finished");
        if n > 1 {
            println!("# {}", args.files[i].display());
        }
        print!("{}", report.text);
        failed |= report.failed;
    }
    if failed {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}

/// Accumulated per-file output; `failed` drives the exit code.
#[derive(Clone, Default)]
struct Report {
    text: String,
    failed: bool,
}

impl Report {
    fn line(&mut self, msg: impl AsRef<str>) {
        let _ = writeln!(self.text, "{}", msg.as_ref());
    }
    fn fail(&mut self, msg: impl AsRef<str>) {
        self.line(msg);
        self.failed = true;
    }
}

fn process_file(
    path: &PathBuf,
    args: &RunArgs,
    run: fn(&Problem, &RunArgs, &mut Report),
) -> Report {
    let mut report = Report::default();
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            report.fail(format!("error: cannot read {}: {e}", path.display()));
            return report;
        }
    };
    let problem = match parse_problem(&text) {
        Ok(p) => p,
        Err(e) => {
            report.fail(format!("error: {}: {e}", path.display()));
            return report;
        }
    };
    run(&problem, args, &mut report);
    report
}

fn options(args: &RunArgs) -> Options {
    Options {
        limits: Limits { max_clauses: args.max_clauses, max_seconds: args.max_seconds },
        assert_invariants: args.assert_invariants,
        ..Options::default()
    }
}

fn print_stats(report: &mut Report, stats: &Stats, started: Instant) {
    report.line(format!(
        "stats: generated {} kept {} deleted {} (tautology {} variant {}) condensed {}",
        stats.generated,
        stats.kept,
        stats.deleted_tautologies + stats.deleted_variants,
        stats.deleted_tautologies,
        stats.deleted_variants,
        stats.condensed,
    ));
    report.line(format!(
        "stats: inferences factoring {} resolution {} top-resolution {}",
        stats.factoring_count, stats.resolution_count, stats.top_resolution_count,
    ));
    report.line(format!(
        "stats: max clause depth {} wall time {:.3}s",
        stats.max_vdp,
        started.elapsed().as_secs_f64(),
    ));
}

fn print_proof(report: &mut Report, trace: &ProofTrace) {
    report.line("proof:");
    for line in trace.to_string().lines() {
        report.line(format!("  {line}"));
    }
}

fn run_sat(problem: &Problem, args: &RunArgs, report: &mut Report) {
    let started = Instant::now();
    let theory = match build_theory(problem) {
        Ok(t) => t,
        Err(e) => {
            report.fail(format!("error: {e}"));
            return;
        }
    };
    let (result, stats) = decide_sat(&theory, options(args));
    match &result {
        SatResult::Satisfiable => report.line("status: Satisfiable"),
        SatResult::Unsatisfiable(trace) => {
            report.line("status: Unsatisfiable");
            if args.proof {
                print_proof(report, trace);
            }
        }
        SatResult::ResourceOut(msg) => report.fail(format!("status: Unknown({msg})")),
    }
    if args.oracle_check {
        oracle_check_sat(&theory, &result, report);
    }
    if args.stats {
        print_stats(report, &stats, started);
    }
}

fn oracle_check_sat(theory: &Theory, result: &SatResult, report: &mut Report) {
    match result {
        SatResult::Satisfiable => match finite_model_search(&theory.clauses, 3) {
            OracleVerdict::ConfirmedSat => report.line("oracle: confirmed (finite model)"),
            OracleVerdict::ConfirmedUnsat => {
                report.fail("oracle: CONTRADICTION (model search refuted a satisfiable verdict)")
            }
            OracleVerdict::Inconclusive(msg) => {
                match naive_resolution(&theory.clauses, 50_000) {
                    OracleVerdict::ConfirmedSat => {
                        report.line("oracle: confirmed (resolution closure)")
                    }
                    OracleVerdict::ConfirmedUnsat => report.fail(
                        "oracle: CONTRADICTION (naive resolution refuted a satisfiable verdict)",
                    ),
                    OracleVerdict::Inconclusive(_) => {
                        report.line(format!("oracle: inconclusive ({msg})"))
                    }
                }
            }
        },
        SatResult::Unsatisfiable(_) => match naive_resolution(&theory.clauses, 50_000) {
            OracleVerdict::ConfirmedUnsat => report.line("oracle: confirmed (naive resolution)"),
            OracleVerdict::ConfirmedSat => {
                report.fail("oracle: CONTRADICTION (naive resolution saturated without falsum)")
            }
            OracleVerdict::Inconclusive(msg) => {
                report.line(format!("oracle: inconclusive ({msg})"))
            }
        },
        SatResult::ResourceOut(_) => {}
    }
}

fn run_query(problem: &Problem, args: &RunArgs, report: &mut Report) {
    let started = Instant::now();
    let theory = match build_theory(problem) {
        Ok(t) => t,
        Err(e) => {
            report.fail(format!("error: {e}"));
            return;
        }
    };
    if problem.queries.is_empty() {
        report.line("no queries");
        return;
    }
    let mode = match args.mode {
        ModeArg::Horn => Mode::Horn,
        ModeArg::Restricted => Mode::Restricted,
        ModeArg::Auto => {
            if theory.horn {
                Mode::Horn
            } else {
                Mode::Restricted
            }
        }
    };
    let mut total = Stats::default();
    for q in &problem.queries {
        let (answer, stats) = answer_bcq(&theory, q, mode, options(args));
        total.generated += stats.generated;
        total.kept += stats.kept;
        total.deleted_tautologies += stats.deleted_tautologies;
        total.deleted_variants += stats.deleted_variants;
        total.condensed += stats.condensed;
        total.factoring_count += stats.factoring_count;
        total.resolution_count += stats.resolution_count;
        total.top_resolution_count += stats.top_resolution_count;
        total.max_vdp = total.max_vdp.max(stats.max_vdp);
        match &answer {
            QueryAnswer::Entailed(trace) => {
                report.line(format!("query {}: Entailed", q.name));
                if args.proof {
                    print_proof(report, trace);
                }
            }
            QueryAnswer::NotEntailed => report.line(format!("query {}: NotEntailed", q.name)),
            QueryAnswer::Unsupported(msg) => {
                report.line(format!("query {}: Unsupported({msg})", q.name))
            }
            QueryAnswer::ResourceOut(msg) => {
                report.fail(format!("query {}: Unknown({msg})", q.name))
            }
        }
        if args.oracle_check {
            oracle_check_query(&theory, q, &answer, report);
        }
    }
    if args.stats {
        print_stats(report, &total, started);
    }
}

fn oracle_check_query(theory: &Theory, q: &lgres::Bcq, answer: &QueryAnswer, report: &mut Report) {
    let mut clauses = theory.clauses.clone();
    clauses.push(negate_query(q));
    match answer {
        QueryAnswer::Entailed(_) => {
            let chained = forward_chain(&clauses, 2);
            if chained == OracleVerdict::ConfirmedUnsat {
                report.line(format!("oracle {}: confirmed (forward chaining)", q.name));
                return;
            }
            match naive_resolution(&clauses, 50_000) {
                OracleVerdict::ConfirmedUnsat => {
                    report.line(format!("oracle {}: confirmed (naive resolution)", q.name))
                }
                OracleVerdict::ConfirmedSat => report.fail(format!(
                    "oracle {}: CONTRADICTION (resolution closure has no falsum)",
                    q.name
                )),
                OracleVerdict::Inconclusive(msg) => {
                    report.line(format!("oracle {}: inconclusive ({msg})", q.name))
                }
            }
        }
        QueryAnswer::NotEntailed => match finite_model_search(&clauses, 3) {
            OracleVerdict::ConfirmedSat => {
                report.line(format!("oracle {}: confirmed (countermodel)", q.name))
            }
            OracleVerdict::ConfirmedUnsat => report.fail(format!(
                "oracle {}: CONTRADICTION (countermodel search refuted the verdict)",
                q.name
            )),
            OracleVerdict::Inconclusive(msg) => {
                report.line(format!("oracle {}: inconclusive ({msg})", q.name))
            }
        },
        QueryAnswer::Unsupported(_) | QueryAnswer::ResourceOut(_) => {}
    }
}

fn run_clausify(problem: &Problem, _args: &RunArgs, report: &mut Report) {
    let mut fresh = lgres::FreshSymbols::new();
    for (name, f) in &problem.formulas {
        match lgres::lgf_trans(f, &mut fresh) {
            Ok(clauses) => {
                for lits in clauses {
                    let clause = lgres::Clause::input(0, lits.clone());
                    let annotation = match check_lgc(&clause) {
                        LgcCheck::Ground => "ground".to_string(),
                        LgcCheck::Guarded(guards) => {
                            format!("guards: {}", render_guard_list(&lits, &guards))
                        }
                        LgcCheck::NotLgc(msg) => format!("not loosely guarded: {msg}"),
                    };
                    report.line(format!("clause: {}  [{annotation}]", render_literals(&lits)));
                }
            }
            Err(e) => report.fail(format!("error: formula {name}: {e}")),
        }
    }
}

/// Render the guard literals with the same display variable names the full
/// clause rendering uses.
fn render_guard_list(lits: &[lgres::term::Literal], guards: &[lgres::term::Literal]) -> String {
    let rendered = render_literals(lits);
    let parts: Vec<&str> = rendered.split(" | ").collect();
    let mut out: Vec<String> = Vec::new();
    let mut used: BTreeSet<usize> = BTreeSet::new();
    for g in guards {
        for (i, l) in lits.iter().enumerate() {
            if l == g && !used.contains(&i) {
                used.insert(i);
                out.push(parts[i].to_string());
                break;
            }
        }
    }
    out.join(", ")
}

fn run_classify(problem: &Problem, _args: &RunArgs, report: &mut Report) {
    if problem.queries.is_empty() {
        report.line("no queries");
        return;
    }
    for q in &problem.queries {
        let line = match classify_query(q) {
            QueryClass::LooselyGuarded => "loosely_guarded".to_string(),
            QueryClass::Star { witness } => format!("star (witness {})", witness.name),
            QueryClass::Cloud { basis } => {
                let names: Vec<&str> = basis.iter().map(|x| x.name.as_str()).collect();
                format!("cloud (basis {})", names.join(","))
            }
            QueryClass::Unsupported(msg) => format!("unsupported ({msg})"),
        };
        report.line(format!("query {}: {line}", q.name));
    }
}
