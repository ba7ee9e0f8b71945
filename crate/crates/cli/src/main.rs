use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use halfgraph::{check, corpus, error_code, load, oracle, render_human, Options, EXIT_INPUT};
use halfgraph_core::oracle::DEFAULT_BUDGET;
use halfgraph_core::Error;

/// Decide stability of DLO/DOAG formulas and decompose or refute them.
#[derive(Parser)]
#[command(name = "halfgraph", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Cross-check the result with the independent oracle.
    #[arg(long, global = true)]
    verify: bool,
    /// Seed for the random spot checks of --verify.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Print the verdict.
    Check { file: PathBuf },
    /// Print the verdict with all pieces or a ladder.
    Decompose { file: PathBuf },
    /// Print a ladder of the given length for an unstable formula.
    Witness {
        file: PathBuf,
        #[arg(long)]
        length: usize,
    },
    /// Search exhaustively for ladders up to the given length.
    Oracle {
        file: PathBuf,
        #[arg(long = "max-k")]
        max_k: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
    },
    /// Check every *.problem file in a directory against expected.txt.
    Corpus {
        dir: PathBuf,
        #[arg(long)]
        parallel: bool,
    },
}

fn emit<T: serde::Serialize>(json: bool, value: &T, human: impl FnOnce() -> String) {
    let text = if json {
        serde_json::to_string_pretty(value).expect("report serializes") + "\n"
    } else {
        human()
    };
    // A closed pipe is not an error worth reporting.
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn run(cli: Cli) -> Result<i32, Error> {
    let opts = Options {
        verify: cli.verify,
        seed: cli.seed,
    };
    let start = Instant::now();
    let elapsed = || format!("time: {:.1} ms\n", start.elapsed().as_secs_f64() * 1e3);
    let (report, detailed) = match cli.command {
        Command::Check { file } => (check(&load(&file)?, 3, opts)?, false),
        Command::Decompose { file } => (check(&load(&file)?, 3, opts)?, true),
        Command::Witness { file, length } => {
            if length == 0 {
                return Err(Error::Arity { expected: 1, found: 0 });
            }
            (check(&load(&file)?, length, opts)?, true)
        }
        Command::Oracle { file, max_k, budget } => (oracle(&load(&file)?, max_k, budget, opts)?, true),
        Command::Corpus { dir, parallel } => {
            let report = corpus(&dir, opts, parallel)?;
            emit(cli.json, &report, || {
                let mut s = String::new();
                for e in &report.entries {
                    let verdict = e.report.as_ref().map_or("error", |r| r.verdict.as_str());
                    let mark = if e.passed() { "ok" } else { "FAIL" };
                    s += &format!("{mark:4} {:40} {verdict}", e.file);
                    if let Some(err) = &e.error {
                        s += &format!(" ({err})");
                    }
                    s.push('\n');
                }
                s + &elapsed()
            });
            return Ok(report.exit_code());
        }
    };
    emit(cli.json, &report, || render_human(&report, detailed) + &elapsed());
    Ok(report.exit_code())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(error_code(&e) as u8)
        }
    }
}
