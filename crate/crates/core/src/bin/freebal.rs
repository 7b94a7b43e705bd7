use std::io::{self, BufRead, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use freebal::cli::{self, Session, EXIT_IO};
use freebal::BnBConfig;

/// Run freebal scripts: norms, equality, evaluation, homomorphisms and
/// duality queries over free bounded archimedean ℓ-algebras.
#[derive(Debug, Parser)]
#[command(name = "freebal", version)]
struct Args {
    /// Tolerance for norm gaps and equality decisions.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Maximum number of branch-and-bound boxes expanded per query.
    #[arg(long, default_value_t = 1_000_000)]
    budget: u64,
    /// Run the seeded property checks instead of a script.
    #[arg(long)]
    seed: Option<u64>,
    /// Number of random cases for `--seed`.
    #[arg(long, default_value_t = 1000, requires = "seed")]
    cases: usize,
    /// Read commands interactively; errors are reported and skipped.
    #[arg(short, long)]
    interactive: bool,
    /// Script file; standard input when absent.
    script: Option<PathBuf>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    if !(args.tol > 0.0 && args.tol.is_finite()) || args.budget == 0 {
        eprintln!("freebal: --tol must be positive and --budget at least 1");
        return ExitCode::from(cli::EXIT_SYNTAX as u8);
    }
    if let Some(seed) = args.seed {
        let report = cli::selfcheck(seed, args.cases);
        println!("{report}");
        return ExitCode::from(if report.passed() { 0 } else { 1 });
    }
    let config = BnBConfig {
        tol: args.tol,
        max_nodes: args.budget,
        ..Default::default()
    };
    let mut session = Session::new(config);
    if args.interactive {
        return interactive(&mut session);
    }
    let text = match &args.script {
        Some(path) => std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            let mut buf = String::new();
            io::stdin().read_to_string(&mut buf).map(|_| buf).map_err(|e| e.to_string())
        }
    };
    let text = match text {
        Ok(t) => t,
        Err(e) => {
            eprintln!("freebal: {e}");
            return ExitCode::from(EXIT_IO as u8);
        }
    };
    let outcome = session.run_script(&text);
    print!("{}", outcome.output);
    ExitCode::from(outcome.status as u8)
}

fn interactive(session: &mut Session) -> ExitCode {
    let stdin = io::stdin();
    let mut stdout = io::stdout();
    for (i, line) in stdin.lock().lines().enumerate() {
        let Ok(line) = line else {
            return ExitCode::from(EXIT_IO as u8);
        };
        match session.run_line(&line, i + 1) {
            Ok(out) => print!("{out}"),
            Err(e) => {
                if let cli::CommandError::Budget(partial) = &e {
                    print!("{partial}");
                }
                println!("error (line {}): {e}", i + 1);
            }
        }
        let _ = stdout.flush();
    }
    ExitCode::SUCCESS
}
