//! Command-line surface of massive-core: evaluation, parameter sweeps and the
//! verification suite.

pub mod checks;
pub mod error;
pub mod params;
pub mod registry;
pub mod report;
pub mod sweep;

pub use error::{CliError, Exit};

use params::Params;
use registry::{lookup, Record};
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;
use sweep::SweepSpec;

pub const DEFAULT_TOL: f64 = 1e-10;

/// Caps the global rayon pool when this variable holds a positive integer.
pub const THREADS_VAR: &str = "MASSIVE_THREADS";

pub fn init_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::usage(format!("{THREADS_VAR} must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::usage(format!("cannot size the thread pool: {e}")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

fn take_format(p: &mut Params) -> Result<Format, CliError> {
    match p.take_str("format").as_deref() {
        None | Some("json") => Ok(Format::Json),
        Some("csv") => Ok(Format::Csv),
        Some(f) => Err(CliError::usage(format!("unknown format {f:?}; expected json or csv"))),
    }
}

fn take_tol(p: &mut Params) -> Result<f64, CliError> {
    p.f64_or("tol", DEFAULT_TOL)
}

/// `eval <id> --name value ... [--tol t] [--format json|csv]`
pub fn eval_command<W: Write>(id: &str, args: &[String], mut out: W) -> Result<(), CliError> {
    let entry = lookup(id)?;
    let mut p = Params::parse(args)?;
    let tol = take_tol(&mut p)?;
    let format = take_format(&mut p)?;
    let start = Instant::now();
    let o = entry.call(p, tol)?;
    let rec = Record::new(&o, start.elapsed().as_secs_f64() * 1e3);
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string(&rec)?)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut out);
            w.serialize(rec)?;
            w.flush()?;
        }
    }
    Ok(())
}

/// `sweep <id> --param name --from a --to b --steps n [--geometric] [--out path] [--tol t] --name value ...`
pub fn sweep_command<W: Write>(id: &str, args: &[String], stdout: W) -> Result<(), CliError> {
    let entry = lookup(id)?;
    let geometric = args.iter().any(|a| a == "--geometric");
    let rest: Vec<String> = args.iter().filter(|a| *a != "--geometric").cloned().collect();
    let mut p = Params::parse(&rest)?;
    let tol = take_tol(&mut p)?;
    let param = p
        .take_str("param")
        .ok_or_else(|| CliError::usage("missing --param"))?
        .replace('-', "_");
    let spec = SweepSpec {
        from: p.f64("from")?,
        to: p.f64("to")?,
        steps: usize::try_from(p.int("steps")?).map_err(|_| CliError::usage("--steps must be non-negative"))?,
        geometric,
        param,
    };
    let out = p.take_str("out").map(PathBuf::from);
    if p.take_str(&spec.param).is_some() {
        return Err(CliError::usage(format!("--{} is both swept and fixed", spec.param)));
    }
    // parameters are validated once even when the grid is empty
    if spec.steps == 0 {
        let mut probe = p.clone();
        probe.set(&spec.param, spec.from.to_string());
        if let Err(e @ CliError::Usage(_)) = entry.call(probe, tol) {
            return Err(e);
        }
    }
    let rows = sweep::sweep(entry, &p, &spec, tol)?;
    match out {
        Some(path) => sweep::write_csv(std::fs::File::create(path)?, &rows),
        None => sweep::write_csv(stdout, &rows),
    }
}

/// Registered ids with their parameters, one per line.
pub fn list_command<W: Write>(mut out: W) -> Result<(), CliError> {
    for e in registry::REGISTRY {
        writeln!(out, "{:<28} {}\n{:<28} {}", e.id, e.summary, "", e.params)?;
    }
    Ok(())
}
