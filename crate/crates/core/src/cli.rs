//! Command-line front end.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 usage or validation error.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::apriori;
use crate::aranim::{self, MiningConfig};
use crate::class::{result_line, Class, Emit};
use crate::database::{TransactionDatabase, DEFAULT_MAX_ITEMS};
use crate::error::Error;
use crate::oracle::{self, DEFAULT_ORACLE_CAP};
use crate::rpmsud::{self, Alert, EventWindowConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "raremine",
    version,
    about = "Rare and non-present item-set mining"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mine rare and non-present item-sets (support below --max-support).
    Mine(MineArgs),
    /// Mine frequent item-sets (support at least --min-support) with Apriori.
    Frequent(FrequentArgs),
    /// Classify every non-empty item-set by brute force.
    Classify(ClassifyArgs),
    /// Replay an event file through the rare-pattern monitor.
    Monitor(MonitorArgs),
}

#[derive(Debug, Args)]
pub struct MineArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Exclusive support bound, in transactions.
    #[arg(long)]
    pub max_support: usize,
    #[arg(long, default_value = "both", value_parser = parse_emit)]
    pub emit: Emit,
    /// Disable pruning below frequent item-sets.
    #[arg(long)]
    pub no_prune: bool,
    #[arg(long, default_value_t = DEFAULT_MAX_ITEMS)]
    pub max_items: usize,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FrequentArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Inclusive support bound, in transactions.
    #[arg(long)]
    pub min_support: usize,
    #[arg(long, default_value_t = DEFAULT_MAX_ITEMS)]
    pub max_items: usize,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub max_support: usize,
    /// Oracle cap; the lattice has 2^items - 1 entries.
    #[arg(long, default_value_t = DEFAULT_ORACLE_CAP)]
    pub max_items: usize,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MonitorArgs {
    #[arg(long)]
    pub events: PathBuf,
    #[arg(long)]
    pub max_support: usize,
    #[arg(long)]
    pub cycles: usize,
    /// Cycle length in milliseconds.
    #[arg(long)]
    pub cycle_duration: u64,
    #[arg(long)]
    pub store: PathBuf,
    #[arg(long, default_value_t = DEFAULT_MAX_ITEMS)]
    pub max_items: usize,
}

fn parse_emit(s: &str) -> Result<Emit, String> {
    s.parse()
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Io(_) | Error::Store { .. } => EXIT_IO,
        _ => EXIT_USAGE,
    }
}

fn read_input(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path)
        .map_err(|e| Error::Io(io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn load_database(path: &Path, max_items: usize) -> Result<TransactionDatabase, Error> {
    TransactionDatabase::parse_with_cap(&read_input(path)?, max_items)
}

/// Writes `lines` to `output` atomically (temp file then rename), or to
/// `stdout` when no path is given.
fn emit_lines(
    lines: &[String],
    output: Option<&Path>,
    stdout: &mut dyn Write,
) -> Result<(), Error> {
    let mut text = String::with_capacity(lines.iter().map(|l| l.len() + 1).sum());
    for line in lines {
        text.push_str(line);
        text.push('\n');
    }
    match output {
        None => {
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
        Some(path) => {
            let dir = match path.parent() {
                Some(p) if !p.as_os_str().is_empty() => p,
                _ => Path::new("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
            tmp.write_all(text.as_bytes())?;
            tmp.persist(path).map_err(|e| Error::Io(e.error))?;
        }
    }
    Ok(())
}

fn cmd_mine(args: &MineArgs, stdout: &mut dyn Write) -> Result<(), Error> {
    let db = load_database(&args.input, args.max_items)?;
    let config = MiningConfig::new(args.max_support)
        .with_pruning(!args.no_prune)
        .with_emit(args.emit)
        .with_max_items(args.max_items);
    let lines: Vec<String> = aranim::mine(&db, &config)?
        .iter()
        .map(|m| result_line(&db, &m.itemset, m.support, m.class))
        .collect();
    emit_lines(&lines, args.output.as_deref(), stdout)
}

fn cmd_frequent(args: &FrequentArgs, stdout: &mut dyn Write) -> Result<(), Error> {
    let db = load_database(&args.input, args.max_items)?;
    let lines: Vec<String> = apriori::mine_frequent(&db, args.min_support)?
        .iter()
        .map(|f| result_line(&db, &f.itemset, f.support, Class::Frequent))
        .collect();
    emit_lines(&lines, args.output.as_deref(), stdout)
}

fn cmd_classify(args: &ClassifyArgs, stdout: &mut dyn Write) -> Result<(), Error> {
    let db = load_database(&args.input, usize::MAX)?;
    aranim::check_threshold(args.max_support, &db)?;
    let lattice = oracle::classify_all_with_cap(&db, args.max_support, args.max_items)?;
    let mut entries: Vec<_> = lattice.entries().iter().collect();
    db.sort_canonical(&mut entries, |e| &e.itemset);
    let lines: Vec<String> = entries
        .iter()
        .map(|e| result_line(&db, &e.itemset, e.support, e.class))
        .collect();
    emit_lines(&lines, args.output.as_deref(), stdout)
}

fn cmd_monitor(
    args: &MonitorArgs,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), Error> {
    let config = EventWindowConfig::new(args.max_support, args.cycles, args.cycle_duration)
        .with_store(&args.store)
        .with_max_items(args.max_items);
    config.validate()?;
    let log = rpmsud::read_events(&read_input(&args.events)?)?;
    for (line, reason) in &log.skipped {
        writeln!(stderr, "warning: line {line}: {reason}; skipped")?;
    }
    if !log.skipped.is_empty() {
        writeln!(
            stderr,
            "warning: skipped {} malformed event line(s)",
            log.skipped.len()
        )?;
    }
    // Fail before mining if the store cannot be opened for appending.
    rpmsud::persist(&[], &args.store).map_err(|source| Error::Store {
        path: args.store.clone(),
        source,
    })?;

    let mut write_error: Option<io::Error> = None;
    let mut sink = |alert: &Alert| {
        if write_error.is_none() {
            if let Err(e) = writeln!(stdout, "{}", alert.to_line()) {
                write_error = Some(e);
            }
        }
    };
    rpmsud::replay(log.events, &config, &mut sink)?;
    if let Some(e) = write_error {
        return Err(e.into());
    }
    stdout.flush()?;
    Ok(())
}

/// Parses `argv` (program name first) and runs the chosen subcommand.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(rendered.as_bytes())
            } else {
                stdout.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Mine(args) => cmd_mine(args, stdout),
        Command::Frequent(args) => cmd_frequent(args, stdout),
        Command::Classify(args) => cmd_classify(args, stdout),
        Command::Monitor(args) => cmd_monitor(args, stdout, stderr),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(err) => {
            let _ = writeln!(stderr, "error: {err}");
            exit_code(&err)
        }
    }
}
