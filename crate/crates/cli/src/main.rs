use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use kunz_core::dsl::{self, ast::CheckDirective, ast::CheckKind};
use kunz_core::verdict::{corpus_run, run_directive, CorpusReport, DirectiveReport, RunOptions, Status};
use kunz_core::{Budget, Error};

const EXIT_FAIL: u8 = 2;
const EXIT_BUDGET: u8 = 3;
const EXIT_INPUT: u8 = 4;

#[derive(Parser)]
#[command(name = "kunz", version, about = "Relative Frobenius and Kähler differentials over F_p")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Emit JSON instead of text.
    #[arg(long)]
    json: bool,
    /// Step budget per check or case.
    #[arg(long, env = "KUNZ_BUDGET", default_value_t = Budget::DEFAULT_STEPS)]
    budget: u64,
    /// Largest Frobenius iterate examined by classification.
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..=8))]
    emax: u32,
}

#[derive(Subcommand)]
enum Command {
    /// Run the check directives of a .kz file, or classify one map in it.
    Check {
        file: PathBuf,
        /// Map or ring to classify instead of running the file's directives.
        map: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Run the built-in corpus of worked cases.
    Corpus {
        #[command(flatten)]
        common: Common,
        /// Only run cases whose name matches this glob.
        #[arg(long)]
        filter: Option<String>,
        /// Seed for the randomized self-checks.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also write the JSON report to this path.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Record wall time per case (makes the report non-reproducible).
        #[arg(long)]
        timings: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Check { file, map, common } => check(&file, map.as_deref(), &common),
        Command::Corpus {
            common,
            filter,
            seed,
            out,
            timings,
        } => corpus(&common, filter.as_deref(), seed, out.as_deref(), timings),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            if let Some(Error::KunzViolation { .. }) = e.downcast_ref::<Error>() {
                eprintln!("error: {e:#}");
                return ExitCode::from(EXIT_FAIL);
            }
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}

fn exit_for(statuses: impl Iterator<Item = Status>) -> u8 {
    let mut code = 0;
    for s in statuses {
        match s {
            Status::Fail => return EXIT_FAIL,
            Status::NotDecided => code = EXIT_BUDGET,
            Status::Pass => {}
        }
    }
    code
}

fn status_word(s: Status) -> &'static str {
    match s {
        Status::Pass => "PASS",
        Status::Fail => "FAIL",
        Status::NotDecided => "UNDECIDED",
    }
}

fn check(file: &std::path::Path, map: Option<&str>, common: &Common) -> Result<u8> {
    let src = std::fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    let budget = Budget::new(common.budget).with_verification(true);
    let prog = match dsl::load(&src, &budget) {
        Ok(p) => p,
        Err(e) if e.is_budget() => {
            eprintln!("{}", e.render(&src, &file.display().to_string()));
            return Ok(EXIT_BUDGET);
        }
        Err(e) => {
            eprintln!("{}", e.render(&src, &file.display().to_string()));
            return Ok(EXIT_INPUT);
        }
    };
    let directives: Vec<CheckDirective> = match map {
        Some(name) => {
            if prog.map(name).is_none() {
                eprintln!("{}: no map or ring named `{name}`", file.display());
                return Ok(EXIT_INPUT);
            }
            let parsed = dsl::parse(&format!("check classify {name} emax={}", common.emax))?;
            parsed
                .statements
                .into_iter()
                .filter_map(|s| match s {
                    dsl::ast::Stmt::Check(c) => Some(c),
                    _ => None,
                })
                .collect()
        }
        None => prog.checks.clone(),
    };
    let reports = directives
        .iter()
        .map(|d| run_directive(&prog, d, common.budget))
        .collect::<std::result::Result<Vec<DirectiveReport>, Error>>()?;
    if common.json {
        println!("{}", serde_json::to_string_pretty(&serde_json::json!({ "checks": reports }))?);
    } else {
        for (d, r) in directives.iter().zip(&reports) {
            println!("{:9} {}", status_word(r.status), dsl::ast::Stmt::Check(d.clone()));
            if matches!(d.kind, CheckKind::Classify { .. }) {
                if let Some(s) = r.result.pointer("/classification/summary").and_then(|v| v.as_str()) {
                    println!("          {s}");
                }
            }
            println!("          {}", r.result);
        }
    }
    Ok(exit_for(reports.iter().map(|r| r.status)))
}

fn print_corpus(report: &CorpusReport) {
    for case in &report.cases {
        let time = case.millis.map(|m| format!(" ({m} ms)")).unwrap_or_default();
        println!("{:9} {}{time}", status_word(case.status), case.name);
        if let Some(err) = &case.error {
            println!("          error: {err}");
        }
        for c in case.checks.iter().filter(|c| !c.pass) {
            println!("          {}: expected {}, observed {}", c.name, c.expected, c.observed);
        }
    }
    let s = &report.summary;
    println!(
        "{} cases: {} pass, {} fail, {} not decided; Kunz table {} agree, {} disagree",
        s.total, s.pass, s.fail, s.not_decided, report.kunz.agreements, report.kunz.disagreements
    );
}

fn corpus(
    common: &Common,
    filter: Option<&str>,
    seed: u64,
    out: Option<&std::path::Path>,
    timings: bool,
) -> Result<u8> {
    let filter = filter
        .map(glob::Pattern::new)
        .transpose()
        .context("invalid --filter pattern")?;
    let opts = RunOptions {
        budget: common.budget,
        emax: common.emax,
        seed,
        timings,
        filter,
        lifts: true,
        verify: true,
    };
    let report = corpus_run(&opts)?;
    let json = serde_json::to_string_pretty(&report)? + "\n";
    if let Some(path) = out {
        std::fs::write(path, &json).with_context(|| format!("writing {}", path.display()))?;
    }
    if common.json {
        print!("{json}");
    } else {
        print_corpus(&report);
    }
    Ok(exit_for(report.cases.iter().map(|c| c.status)))
}
