//! `teamcheck`: model checking, weighted team definability, reductions and
//! verification suites from the command line.
//!
//! Exit status is 0 for SAT or a passing suite, 1 for UNSAT or a failing
//! suite, and 2 for input errors.

mod bench;
mod input;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use teamcheck_core::eval::{eval_inclusion, eval_with, EvalConfig};
use teamcheck_core::formula::{classify, parse_in, parse_prop, Formula, Fragment};
use teamcheck_core::model::Structure;
use teamcheck_core::reductions::{reduce_clique, reduce_domset, reduce_indset, reduce_wsat, Graph, Reduced};
use teamcheck_core::verify::{run_suite, Suite, VerifyOptions, DEFAULT_SEED};
use teamcheck_core::wt::{wt_solve_with, FastPath};

#[derive(Parser)]
#[command(name = "teamcheck", version, about = "Team-semantics model checking and weighted team definability")]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FastPathArg {
    Auto,
    Off,
}

impl From<FastPathArg> for FastPath {
    fn from(f: FastPathArg) -> Self {
        match f {
            FastPathArg::Auto => FastPath::Auto,
            FastPathArg::Off => FastPath::Off,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Problem {
    Clique,
    Domset,
    Indset,
    Wsat,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum SuiteArg {
    All,
    Closure,
    Inclusion,
    Reductions,
    CliqueExperiment,
    Lemma,
    Theta,
    Circuit,
    Sentences,
    FoFastPath,
}

#[derive(clap::Args)]
struct EvalArgs {
    /// Structure file.
    #[arg(long, short)]
    structure: String,
    /// Formula text, `@file`, or `-` for stdin.
    #[arg(long, short)]
    formula: String,
    /// `auto` uses maximal subteams for inclusion logic; `off` always runs
    /// the generic search.
    #[arg(long, value_enum, default_value = "auto")]
    fast_path: FastPathArg,
    /// Memo entries kept per evaluation.
    #[arg(long, default_value_t = 1 << 20)]
    max_cache: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a team satisfies a formula.
    Check {
        #[command(flatten)]
        eval: EvalArgs,
        /// Team file: a `vars x y` line, then one `x=a y=b` line per assignment.
        #[arg(long, short)]
        team: String,
    },
    /// Find a team of exactly k assignments over the free variables.
    Solve {
        #[command(flatten)]
        eval: EvalArgs,
        #[arg(short)]
        k: usize,
    },
    /// Encode a source instance as a weighted team definability instance.
    Reduce {
        #[arg(value_enum)]
        problem: Problem,
        /// Graph file, or a propositional formula file for `wsat`.
        input: String,
        #[arg(short)]
        k: usize,
        /// Also write `structure.txt`, `formula.txt` and `k.txt` here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run invariant suites against their oracles.
    Verify {
        #[arg(value_enum, num_args = 1.., default_value = "all")]
        suites: Vec<SuiteArg>,
        #[arg(long, env = "TEAMCHECK_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Worker threads.
        #[arg(long)]
        jobs: Option<usize>,
        /// Random draws per group, overriding the suite default.
        #[arg(long)]
        cases: Option<usize>,
        /// Write the line-per-case report here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Time the solver paths on seeded instances of a problem family.
    Bench {
        #[arg(value_enum)]
        family: bench::Family,
        /// Sizes, e.g. `6..10`: vertices for `domset`, at most this many
        /// variables for `wsat`.
        #[arg(long, default_value = "6..10")]
        n: String,
        #[arg(long, default_value = "1..3")]
        k: String,
        #[arg(long, env = "TEAMCHECK_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

/// An error that exits with status 2.
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

type Outcome = Result<bool, InputError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Check { eval, team } => check(&eval, &team, cli.json),
        Command::Solve { eval, k } => solve(&eval, k, cli.json),
        Command::Reduce { problem, input, k, out } => reduce(problem, &input, k, out, cli.json),
        Command::Verify {
            suites,
            seed,
            jobs,
            cases,
            report,
        } => verify(&suites, VerifyOptions { seed, jobs, cases }, report, cli.json),
        Command::Bench { family, n, k, seed } => run_bench(family, &n, &k, seed, cli.json),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(InputError(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn load(args: &EvalArgs) -> Result<(Structure, Formula, EvalConfig), InputError> {
    let structure = input::structure(&args.structure)?;
    let text = input::text_arg(&args.formula)?;
    let formula = parse_in(text.trim(), structure.vocabulary())?;
    let config = EvalConfig::default().with_max_cache(args.max_cache);
    Ok((structure, formula, config))
}

fn verdict(b: bool) -> &'static str {
    if b {
        "SAT"
    } else {
        "UNSAT"
    }
}

fn check(args: &EvalArgs, team_path: &str, as_json: bool) -> Outcome {
    let (structure, formula, config) = load(args)?;
    let team = input::parse_team(&input::read(team_path)?, &structure).map_err(|e| format!("{team_path}: {e}"))?;
    let report = classify(&formula);
    if let Some(v) = report.free_vars.iter().find(|v| team.column(v).is_none()) {
        return Err(InputError(format!("free variable `{v}` is not in the team domain")));
    }
    let fast: FastPath = args.fast_path.into();
    let sat = if fast == FastPath::Auto && report.fragment == Fragment::Inclusion {
        eval_inclusion(&structure, &team, &formula)?
    } else {
        eval_with(&structure, &team, &formula, &config)?
    };
    if as_json {
        println!("{}", json!({ "verdict": verdict(sat), "fragment": report }));
    } else {
        println!("{}", verdict(sat));
        println!("fragment: {report}");
    }
    Ok(sat)
}

fn solve(args: &EvalArgs, k: usize, as_json: bool) -> Outcome {
    let (structure, formula, config) = load(args)?;
    let instance = teamcheck_core::wt::WtInstance { structure, formula, k };
    let found = wt_solve_with(&instance, args.fast_path.into(), &config)?;
    let lines = found
        .as_ref()
        .map(|t| input::render_team(t, &instance.structure))
        .unwrap_or_default();
    if as_json {
        println!("{}", json!({ "verdict": verdict(found.is_some()), "k": k, "witness": found.as_ref().map(|_| &lines) }));
    } else {
        println!("{}", verdict(found.is_some()));
        for l in &lines {
            println!("{l}");
        }
    }
    Ok(found.is_some())
}

#[derive(Serialize)]
struct ReduceOutput {
    k: usize,
    formula: String,
    structure: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    guard: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    depth: Option<usize>,
}

fn reduce(problem: Problem, path: &str, k: usize, out: Option<PathBuf>, as_json: bool) -> Outcome {
    let text = input::read(path)?;
    let (reduced, depth): (Reduced, Option<usize>) = match problem {
        Problem::Wsat => {
            let (r, t) = reduce_wsat(&parse_prop(text.trim())?, k)?;
            (r, Some(t))
        }
        graph_problem => {
            let g = Graph::parse(&text)?;
            let r = match graph_problem {
                Problem::Clique => reduce_clique(&g, k)?,
                Problem::Domset => reduce_domset(&g, k)?,
                _ => reduce_indset(&g, k)?,
            };
            (r, None)
        }
    };
    let output = ReduceOutput {
        k: reduced.instance.k,
        formula: reduced.instance.formula.to_string(),
        structure: reduced.instance.structure.to_string(),
        guard: reduced.guard.as_ref().map(|g| g.to_string()),
        depth,
    };
    if let Some(dir) = out {
        fs::create_dir_all(&dir)?;
        fs::write(dir.join("structure.txt"), &output.structure)?;
        fs::write(dir.join("formula.txt"), format!("{}\n", output.formula))?;
        fs::write(dir.join("k.txt"), format!("{}\n", output.k))?;
    }
    if as_json {
        println!("{}", serde_json::to_string(&output)?);
    } else {
        if let Some(g) = &output.guard {
            println!("# {g}");
        }
        if let Some(t) = depth {
            println!("# depth {t}");
        }
        println!("k {}", output.k);
        println!("formula {}", output.formula);
        print!("{}", output.structure);
    }
    Ok(true)
}

fn suite_of(s: SuiteArg) -> Option<Suite> {
    Some(match s {
        SuiteArg::All => return None,
        SuiteArg::Closure => Suite::Closure,
        SuiteArg::Inclusion => Suite::Inclusion,
        SuiteArg::Reductions => Suite::Reductions,
        SuiteArg::CliqueExperiment => Suite::CliqueExperiment,
        SuiteArg::Lemma => Suite::Lemma,
        SuiteArg::Theta => Suite::Theta,
        SuiteArg::Circuit => Suite::Circuit,
        SuiteArg::Sentences => Suite::Sentences,
        SuiteArg::FoFastPath => Suite::FoFastPath,
    })
}

fn verify(args: &[SuiteArg], opts: VerifyOptions, report: Option<PathBuf>, as_json: bool) -> Outcome {
    let suites: Vec<Suite> = if args.contains(&SuiteArg::All) {
        Suite::ALL.to_vec()
    } else {
        args.iter().filter_map(|&s| suite_of(s)).collect()
    };
    let reports: Vec<_> = suites.iter().map(|&s| run_suite(s, &opts)).collect();
    let passed = reports.iter().all(|r| r.passed());
    if let Some(path) = &report {
        let body = if as_json {
            serde_json::to_string_pretty(&reports)?
        } else {
            reports.iter().map(|r| r.to_string()).collect()
        };
        fs::write(path, body)?;
    }
    if as_json && report.is_none() {
        println!("{}", serde_json::to_string(&reports)?);
    } else {
        for r in &reports {
            println!("{}", r.summary());
            for c in r.cases_with(teamcheck_core::verify::Outcome::Fail).take(5) {
                println!("  FAIL {c}");
            }
            for c in r.cases_with(teamcheck_core::verify::Outcome::Discrepancy).take(5) {
                println!("  DISCREPANCY {c}");
            }
        }
    }
    Ok(passed)
}

fn run_bench(family: bench::Family, n: &str, k: &str, seed: u64, as_json: bool) -> Outcome {
    let ns = input::range(n)?;
    let ks: Vec<usize> = input::range(k)?.collect();
    let rows = bench::run(family, ns, &ks, seed);
    if as_json {
        println!("{}", serde_json::to_string(&rows)?);
    } else {
        println!("{}", bench::HEADER);
        for r in &rows {
            println!("{}", r.csv());
        }
    }
    Ok(true)
}
