use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use fibercheck_core::audit::{audit, resolve_fibers, AuditError, AuditOptions};
use fibercheck_core::cover::cover_report;
use fibercheck_core::fiber::FiberInvariants;
use fibercheck_core::germ::{self, Germ, ResolutionConfig, DEFAULT_MAX_DEPTH};
use fibercheck_core::model::{self, assemble_fibration};
use fibercheck_core::par::{self, Execution};
use fibercheck_core::report::{self, corpus_exit_code, CorpusEntry};

const INCONSISTENT: u8 = 2;

#[derive(Parser)]
#[command(name = "fibercheck", version, about = "Exact invariants of plane curve singularities, singular fibers and fibered surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Also audit the slope lower bound and the canonical class bound.
    #[arg(long, global = true)]
    strict_extras: bool,
    /// Cap on the depth of blow-up trees.
    #[arg(long, global = true, env = "FIBERCHECK_MAX_DEPTH", default_value_t = DEFAULT_MAX_DEPTH)]
    max_depth: usize,
    /// Run batch work on one thread.
    #[arg(long, global = true)]
    sequential: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Invariants of the germ at the origin of a plane curve.
    Germ { polynomial: String },
    /// Print the blow-up tree of a germ.
    Resolve { polynomial: String },
    /// Invariants of every fiber in a fibration file.
    Fiber { path: PathBuf },
    /// Full audit of a fibration file.
    Audit { path: PathBuf },
    /// Audit every `.toml` file in a directory.
    Corpus { dir: PathBuf },
    /// Invariants of the double cover described by a fibration file.
    Cover { path: PathBuf },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

impl Cli {
    fn resolution(&self) -> ResolutionConfig {
        ResolutionConfig { max_depth: self.max_depth }
    }

    fn execution(&self) -> Execution {
        if self.sequential {
            Execution::Sequential
        } else {
            Execution::Parallel
        }
    }

    fn audit_options(&self) -> AuditOptions {
        AuditOptions { strict_extras: self.strict_extras, resolution: self.resolution(), execution: self.execution() }
    }

    fn emit<T: Serialize + ?Sized>(&self, value: &T, text: impl FnOnce(&T) -> String) {
        match self.format {
            Format::Json => println!("{}", report::to_json(value)),
            Format::Text => print!("{}", text(value)),
        }
    }
}

fn cmd_germ(cli: &Cli, text: &str) -> Result<u8> {
    let (g, changed) = Germ::parse(text).with_context(|| format!("germ `{text}`"))?;
    if changed {
        eprintln!("warning: `{text}` is not reduced; using its squarefree part {}", g.equation());
    }
    let analysis = germ::analyze(&g, changed, &cli.resolution())?;
    cli.emit(&analysis, report::germ_text);
    Ok(0)
}

fn cmd_resolve(cli: &Cli, text: &str) -> Result<u8> {
    let (g, changed) = Germ::parse(text).with_context(|| format!("germ `{text}`"))?;
    if changed {
        eprintln!("warning: `{text}` is not reduced; using its squarefree part {}", g.equation());
    }
    let tree = germ::resolution_tree(&g, &cli.resolution())?;
    cli.emit(&tree, report::tree_text);
    Ok(0)
}

#[derive(Serialize)]
struct FiberListing {
    fibers: Vec<FiberInvariants>,
    errors: Vec<String>,
}

fn cmd_fiber(cli: &Cli, path: &Path) -> Result<u8> {
    let m = model::load(path)?;
    let mut listing = FiberListing { fibers: Vec::new(), errors: Vec::new() };
    for r in resolve_fibers(&m, &cli.audit_options())? {
        match r {
            Ok(inv) => listing.fibers.push(inv),
            Err(e) => listing.errors.push(e.to_string()),
        }
    }
    cli.emit(&listing, |l| {
        let mut out = report::fibers_text(&l.fibers);
        for e in &l.errors {
            out.push_str(&format!("error: {e}\n"));
        }
        out
    });
    let bad = !listing.errors.is_empty() || listing.fibers.iter().any(|f| f.chi_top_residual != 0);
    Ok(if bad { INCONSISTENT } else { 0 })
}

fn cmd_audit(cli: &Cli, path: &Path) -> Result<u8> {
    let m = model::load(path)?;
    let r = audit(&m, &cli.audit_options())?;
    cli.emit(&r, report::audit_text);
    Ok(if r.consistent { 0 } else { INCONSISTENT })
}

fn cmd_cover(cli: &Cli, path: &Path) -> Result<u8> {
    let m = model::load(path)?;
    let Some(spec) = &m.cover else {
        bail!("{}: no [cover] block", path.display());
    };
    match cover_report(spec, &cli.resolution()) {
        Ok(rep) => {
            cli.emit(&rep, report::cover_text);
            if let Err(e) = assemble_fibration(&m, &rep.invariants) {
                eprintln!("inconsistent: {e}");
                return Ok(INCONSISTENT);
            }
            Ok(0)
        }
        Err(e) if e.is_structural() => Err(e).context("cover"),
        Err(e) => {
            eprintln!("inconsistent: {e}");
            Ok(INCONSISTENT)
        }
    }
}

#[derive(Serialize)]
struct CorpusSummary<'a> {
    files: &'a [CorpusEntry],
    consistent: usize,
    total: usize,
}

fn audit_file(path: &Path, opts: &AuditOptions) -> CorpusEntry {
    let file = path.file_name().map(|f| f.to_string_lossy().into_owned()).unwrap_or_default();
    let loaded = model::load(path).map_err(|e| e.to_string());
    match loaded.and_then(|m| audit(&m, opts).map_err(|e: AuditError| e.to_string())) {
        Ok(r) => CorpusEntry::from_audit(&file, &r),
        Err(message) => CorpusEntry::invalid(&file, message),
    }
}

fn cmd_corpus(cli: &Cli, dir: &Path) -> Result<u8> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .with_context(|| format!("cannot read directory {}", dir.display()))?
        .map(|e| e.map(|e| e.path()))
        .collect::<std::io::Result<_>>()?;
    paths.retain(|p| p.is_file() && p.extension().is_some_and(|e| e == "toml"));
    paths.sort_by(|a, b| a.file_name().cmp(&b.file_name()));
    let opts = cli.audit_options();
    let entries = par::map(cli.execution(), &paths, |p| audit_file(p, &opts));
    let summary = CorpusSummary {
        files: &entries,
        consistent: entries.iter().filter(|e| e.status == report::CorpusStatus::Consistent).count(),
        total: entries.len(),
    };
    cli.emit(&summary, |s| report::corpus_text(s.files));
    Ok(corpus_exit_code(&entries) as u8)
}

fn run(cli: &Cli) -> Result<u8> {
    match &cli.command {
        Command::Germ { polynomial } => cmd_germ(cli, polynomial),
        Command::Resolve { polynomial } => cmd_resolve(cli, polynomial),
        Command::Fiber { path } => cmd_fiber(cli, path),
        Command::Audit { path } => cmd_audit(cli, path),
        Command::Corpus { dir } => cmd_corpus(cli, dir),
        Command::Cover { path } => cmd_cover(cli, path),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
