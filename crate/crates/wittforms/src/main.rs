use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::Parser;

use wittforms::cli::{run_command, Command, RunOptions};

/// Exact invariants of quadratic and hermitian forms: batch driver.
#[derive(Parser, Debug)]
#[command(name = "wittforms", version, about)]
struct Args {
    /// invariants | is-hyperbolic | is-isotropic | witt-decompose |
    /// trace-form | equivalent | relative-e3 | oracle-check
    command: String,

    /// Input documents (JSON); stdin when omitted
    inputs: Vec<PathBuf>,

    /// Run the dual-route assertion layer
    #[arg(long)]
    assert: bool,

    /// Vector cap for oracle scans
    #[arg(long, default_value_t = wittforms::oracle::DEFAULT_SEARCH_BOUND)]
    oracle_bound: u64,

    /// Emit JSON reports (default)
    #[arg(long, conflicts_with = "text")]
    json: bool,

    /// Emit human-readable text instead of JSON
    #[arg(long)]
    text: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let cmd = match Command::from_str(&args.command) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    };
    let opts = RunOptions {
        assert_layer: args.assert,
        oracle_bound: args.oracle_bound,
    };
    let mut documents: Vec<String> = Vec::new();
    if args.inputs.is_empty() {
        let mut buf = String::new();
        if std::io::stdin().read_to_string(&mut buf).is_err() {
            eprintln!("failed to read stdin");
            return ExitCode::from(2);
        }
        documents.push(buf);
    } else {
        for path in &args.inputs {
            match std::fs::read_to_string(path) {
                Ok(s) => documents.push(s),
                Err(e) => {
                    eprintln!("{}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
        }
    }
    let mut all_ok = true;
    for doc in &documents {
        let report = run_command(cmd, doc, &opts);
        if args.text {
            print!("{}", report.to_text());
        } else {
            println!("{}", report.to_json());
        }
        all_ok &= report.ok();
    }
    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
