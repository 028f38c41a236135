use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qsd_cli::stages::VerifyLevel;
use qsd_cli::{Fault, Outcome, RunConfig};

#[derive(Parser)]
#[command(name = "qsd", version, about = "Quasi-symmetric 2-(64,24,46) designs from AG(3,4)")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output directory for artifacts.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Check results against the reference values; mismatches set the exit code.
    #[arg(long, global = true, num_args = 0..=1, default_missing_value = "fast", value_enum)]
    verify: Option<VerifyLevel>,

    /// Write JSON artifacts, optionally into the given directory instead of --out.
    #[arg(long, global = true, num_args = 0..=1, value_name = "DIR")]
    json: Option<Option<PathBuf>>,

    /// Export block graphs in DIMACS format.
    #[arg(long, global = true)]
    dimacs: bool,

    /// Print stage timings to stderr.
    #[arg(long, global = true)]
    timings: bool,

    /// Corrupt one clique block before running (CLIQUE:BLOCK:BIT).
    #[arg(long, global = true, hide = true)]
    inject_fault: Option<Fault>,
}

#[derive(Subcommand)]
enum Command {
    /// Line code of AG(3,4) and the weight distribution of its dual.
    Code,
    /// Even line unions and the 63 special cliques.
    Cliques,
    /// Group construction and classification of designs with 128 automorphisms.
    Classify,
    /// 2-ranks, block graphs and fingerprints of classified designs.
    Analyze {
        /// Classification file (defaults to <out>/classification.json).
        #[arg(long)]
        input: Option<PathBuf>,
        /// Record index to export with --dimacs (repeatable).
        #[arg(long = "record")]
        records: Vec<usize>,
    },
    /// Run every stage and compare all reference values.
    ReproducePaper,
}

fn report(outcome: &Outcome, timings: bool) -> ExitCode {
    for line in &outcome.lines {
        println!("{line}");
    }
    if outcome.enforce || !outcome.anchors.is_empty() {
        for a in &outcome.anchors {
            if outcome.enforce || !a.passed {
                println!("{}", a.line());
            }
        }
    }
    if timings {
        for (stage, t) in &outcome.timings {
            eprintln!("{stage}: {:.2}s", t.as_secs_f64());
        }
    }
    if let Some(a) = outcome.first_failed().filter(|_| outcome.enforce) {
        eprintln!("first failed anchor: {}", a.id);
    }
    ExitCode::from(outcome.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut cfg = RunConfig::new(cli.out.clone());
    cfg.threads = cli.threads;
    cfg.verify = cli.verify;
    cfg.dimacs = cli.dimacs;
    cfg.fault = cli.inject_fault;
    cfg.timings = cli.timings;
    if let Some(dir) = &cli.json {
        cfg.json = true;
        if let Some(d) = dir {
            cfg.out = d.clone();
        }
    }
    let result = match &cli.command {
        Command::Code => qsd_cli::cmd_code(&cfg),
        Command::Cliques => qsd_cli::cmd_cliques(&cfg),
        Command::Classify => qsd_cli::cmd_classify(&cfg),
        Command::Analyze { input, records } => {
            cfg.records = records.clone();
            qsd_cli::cmd_analyze(&cfg, input.as_deref())
        }
        Command::ReproducePaper => {
            cfg.verify = Some(cfg.verify.unwrap_or_default());
            qsd_cli::cmd_reproduce(&cfg)
        }
    };
    match result {
        Ok(outcome) => report(&outcome, cfg.timings),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
