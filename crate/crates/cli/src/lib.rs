//! Experiment runner behind the `fracsob` binary.

pub mod commands;
pub mod report;
pub mod suite;

#[doc = include_str!("../../../book/src/cli.md")]
pub mod guide {}

use std::ffi::OsString;
use std::io::Write;
use std::time::Instant;

use clap::Parser;
use thiserror::Error;

use commands::{Cli, Cmd, Format};
use report::ReportRecord;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Numeric(#[from] fracsob::Error),
    #[error("output: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    /// Bad input exits with 1, a failed computation with 2.
    pub fn exit_code(&self) -> i32 {
        use fracsob::Error as E;
        match self {
            CliError::Usage(_) => 1,
            CliError::Numeric(E::InvalidArgument(_) | E::WrongRegime(_) | E::TraceUndefined { .. } | E::UnsupportedDomain(_) | E::PreconditionViolation(_)) => 1,
            _ => 2,
        }
    }
}

/// Build the global worker pool from `FRACSOB_THREADS` once.
fn init_threads() {
    if let Some(n) = std::env::var("FRACSOB_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

pub fn execute(cli: &Cli) -> Result<Vec<ReportRecord>, CliError> {
    let timing = !cli.no_timing;
    let t0 = Instant::now();
    let mut records = match &cli.cmd {
        Cmd::Constants(o) => commands::constants(o)?,
        Cmd::Seminorm { opts, domain } => commands::seminorm(opts, domain.as_deref())?,
        Cmd::Flap { opts, x, method } => commands::flap(opts, x, method)?,
        Cmd::Limits { opts, mode, s_list } => commands::limits(opts, mode, s_list)?,
        Cmd::Trace(o) => commands::trace(o)?,
        Cmd::Extend { opts, op } => commands::extend(opts, op)?,
        Cmd::Inequality { opts, kind, x, t, k0 } => commands::inequality(opts, kind, x, *t, *k0)?,
        Cmd::Counterexample { which, opts, kappa, r, c_ratio, j_max, n_funcs } => {
            commands::counterexample(opts, *which, *kappa, *r, *c_ratio, *j_max, *n_funcs)?
        }
        Cmd::Suite { name } => commands::suite(name, cli.seed, timing)?,
    };
    if timing {
        let ms = t0.elapsed().as_millis() as u64;
        for r in records.iter_mut().filter(|r| r.runtime_ms.is_none()) {
            r.runtime_ms = Some(ms);
        }
    } else {
        records.iter_mut().for_each(|r| r.runtime_ms = None);
    }
    Ok(records)
}

pub fn render(records: &[ReportRecord], format: Format) -> Result<Vec<u8>, CliError> {
    let mut buf = Vec::new();
    match format {
        Format::Csv => report::write_csv(records, &mut buf)?,
        Format::Json => {
            serde_json::to_writer_pretty(&mut buf, &report::to_json(records)).map_err(std::io::Error::from)?;
            buf.push(b'\n');
        }
    }
    Ok(buf)
}

/// Parse, run, write; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    init_threads();
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let outcome = execute(&cli).and_then(|recs| {
        let bytes = render(&recs, cli.format)?;
        match &cli.out {
            Some(path) => std::fs::write(path, bytes)?,
            None => std::io::stdout().lock().write_all(&bytes)?,
        }
        Ok(recs.iter().all(|r| r.ok))
    });
    match outcome {
        Ok(true) => 0,
        Ok(false) => 2,
        Err(e) => {
            eprintln!("fracsob: {e}");
            e.exit_code()
        }
    }
}
