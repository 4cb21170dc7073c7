use std::io::Write;

use clap::Parser;

use sgep_cli::args::{Cli, Command};
use sgep_cli::{bench, gen, solve, CliResult};

/// Prints one line, exiting quietly if the consumer closed the pipe.
fn emit(line: &str) {
    if writeln!(std::io::stdout(), "{line}").is_err() {
        std::process::exit(0);
    }
}

fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Solve(args) => {
            let report = solve::run_solve(args)?;
            emit(&serde_json::to_string(&report).expect("report serializes"));
        }
        Command::Bench(args) => {
            let rows = bench::run_bench(args)?;
            emit(bench::CSV_HEADER);
            for row in rows {
                emit(&row.csv_line());
            }
        }
        Command::Oracle(args) => {
            let pair = solve::load_pair(&args.matrix_a, args.matrix_b.as_deref())?;
            let instance = sgep::SGepInstance::new(pair, args.sparsity)?;
            let res = sgep::oracle::exact_sgep_with_budget(&instance, args.budget)?;
            let json = serde_json::json!({
                "schema": 1,
                "value": res.value,
                "support": res.support.iter().map(|i| i + 1).collect::<Vec<_>>(),
                "vector": res.vector,
                "enumerated": res.enumerated,
            });
            emit(&json.to_string());
        }
        Command::Gen(args) => {
            for name in gen::run_gen(args)? {
                emit(&args.out_dir.join(name).display().to_string());
            }
        }
    }
    Ok(())
}

fn main() {
    // clap's own usage failures exit 2, matching the input-validation code
    let cli = Cli::parse();
    if let Err(e) = run(&cli) {
        eprintln!("{}", e.json());
        std::process::exit(e.code);
    }
}
