use clap::{Parser, Subcommand};
use massive_cli::checks::{self, Fault, Selector};
use massive_cli::{CliError, Exit};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "massive", version, about = "Massive Kronecker-Eisenstein series: evaluation and verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a function: eval <id> --name value ... [--tol t] [--format json|csv]
    Eval {
        id: String,
        #[arg(trailing_var_arg = true, allow_hyphen_values = true)]
        args: Vec<String>,
    },
    /// Sweep one parameter: sweep <id> --param p --from a --to b --steps n [--geometric] [--out path] ...
    Sweep {
        id: String,
        #[arg(trailing_var_arg = true, allow_hyphen_values = true)]
        args: Vec<String>,
    },
    /// Run a verification suite: all, amplitudes, invariance, pde, transforms or graph
    Verify {
        suite: Selector,
        /// where to write the JSON report
        #[arg(long, default_value = "verify-report.json")]
        report: PathBuf,
        #[arg(long, hide = true)]
        inject_fault: Option<Fault>,
    },
    /// List the function ids and their parameters
    List,
}

fn verify(sel: Selector, report: PathBuf, fault: Option<Fault>) -> Result<Exit, CliError> {
    let rep = checks::verify(sel, fault, |r| {
        let status = if r.pass { "PASS" } else { "FAIL" };
        println!(
            "{status} [{:>2}] {:<32} residual {:.3e} (tol {:.1e}) {:>9.0} ms",
            r.criterion, r.id, r.residual, r.tolerance, r.wall_ms
        );
        if let Some(e) = &r.error {
            println!("     error: {e}");
        }
        for m in r.failing() {
            println!("     failed: {} = {:.3e} (tol {:.1e})", m.name, m.value, m.tolerance);
        }
    });
    let s = &rep.summary;
    println!("{}/{} checks passed in {:.1} s", s.passed, s.total, s.wall_ms / 1e3);
    if !s.pass {
        println!("failing: {}", s.failed.join(", "));
    }
    let mut f = std::fs::File::create(&report)?;
    serde_json::to_writer_pretty(&mut f, &rep)?;
    writeln!(f)?;
    Ok(if s.pass { Exit::Pass } else { Exit::VerifyFailed })
}

fn run(cli: Cli) -> Result<Exit, CliError> {
    massive_cli::init_threads()?;
    let stdout = std::io::stdout().lock();
    match cli.command {
        Command::Eval { id, args } => massive_cli::eval_command(&id, &args, stdout)?,
        Command::Sweep { id, args } => massive_cli::sweep_command(&id, &args, stdout)?,
        Command::List => massive_cli::list_command(stdout)?,
        Command::Verify {
            suite,
            report,
            inject_fault,
        } => return verify(suite, report, inject_fault),
    }
    Ok(Exit::Pass)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit() as u8)
        }
    }
}
