use clap::{Args, Parser, Subcommand};
use contact_index::cli::config::{Connection, Example, Suite};
use contact_index::cli::{self, Command, RunConfig};
use contact_index::Error;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "contact-index", version, about = "Symbol calculus, regularized traces and index characters on contact manifolds")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a named verification suite
    Verify {
        #[arg(long, value_enum)]
        suite: Option<SuiteArg>,
        #[command(flatten)]
        common: Common,
    },
    /// Regularized trace τ of a symbol through every applicable route
    Trace {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        common: Common,
    },
    /// The character form χ of a symbol section
    Char {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        common: Common,
    },
    /// ∫ χ ∧ Â
    Index {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Target {
    /// Symbol literal, e.g. "Q + 1" or "resolvent(Q, 0.5)"
    #[arg(long)]
    symbol: Option<String>,
    #[arg(long, value_enum)]
    example: Option<ExampleArg>,
    #[arg(long)]
    manifold: Option<String>,
    #[arg(long, value_enum)]
    connection: Option<ConnArg>,
    /// Grade of the pair; defaults to the order of the symbol
    #[arg(long, allow_hyphen_values = true)]
    grade: Option<i32>,
    /// Dump χ at the interior nodes to this file
    #[arg(long)]
    emit_samples: Option<PathBuf>,
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long)]
    fock_cutoff: Option<u32>,
    #[arg(long)]
    depth: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    n: Option<usize>,
    /// Also write the report to this path
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum SuiteArg {
    TraceTable,
    Vacuum,
    HzStructure,
    Mehler,
    CurvatureTraces,
    TraceProperty,
    All,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum ExampleArg {
    BottToeplitz,
    Resolvent,
    Automorphism,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum ConnArg {
    Levi,
    Flat,
}

fn merge_common(cfg: &mut RunConfig, c: &Common) {
    if let Some(v) = c.grid {
        cfg.grid = v;
    }
    if let Some(v) = c.fock_cutoff {
        cfg.fock_cutoff = v;
    }
    if let Some(v) = c.depth {
        cfg.depth = Some(v);
    }
    if let Some(v) = c.seed {
        cfg.seed = v;
    }
    if let Some(v) = c.n {
        cfg.n = v;
    }
    if let Some(v) = &c.json {
        cfg.output = Some(v.clone());
    }
}

fn merge_target(cfg: &mut RunConfig, t: &Target) -> Result<(), Error> {
    if let Some(s) = &t.symbol {
        cfg.symbol = Some(s.clone());
        cfg.example = None;
    }
    if let Some(e) = t.example {
        cfg.example = Some(match e {
            ExampleArg::BottToeplitz => Example::BottToeplitz,
            ExampleArg::Resolvent => Example::Resolvent,
            ExampleArg::Automorphism => Example::Automorphism,
        });
        if t.symbol.is_none() {
            cfg.symbol = None;
        }
    }
    if let Some(m) = &t.manifold {
        cfg.manifold = serde_json::from_value(serde_json::Value::String(m.clone()))
            .map_err(|_| Error::Config(format!("unknown manifold {m:?}")))?;
    }
    if let Some(c) = t.connection {
        cfg.connection = match c {
            ConnArg::Levi => Connection::Levi,
            ConnArg::Flat => Connection::Flat,
        };
    }
    if let Some(g) = t.grade {
        cfg.grade = Some(g);
    }
    if let Some(p) = &t.emit_samples {
        cfg.emit_samples = Some(p.clone());
    }
    Ok(())
}

fn resolve(cli: &Cli) -> Result<RunConfig, Error> {
    let (cmd, common) = match &cli.command {
        Cmd::Verify { common, .. } => (Command::Verify, common),
        Cmd::Trace { common, .. } => (Command::Trace, common),
        Cmd::Char { common, .. } => (Command::Char, common),
        Cmd::Index { common, .. } => (Command::Index, common),
    };
    let mut cfg = match &common.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(c) = cfg.command {
        if c != cmd {
            return Err(Error::Config(format!(
                "config is for `{}` but `{}` was requested",
                c.name(),
                cmd.name()
            )));
        }
    }
    cfg.command = Some(cmd);
    merge_common(&mut cfg, common);
    match &cli.command {
        Cmd::Verify { suite, .. } => {
            if let Some(s) = suite {
                cfg.suite = Some(match s {
                    SuiteArg::TraceTable => Suite::TraceTable,
                    SuiteArg::Vacuum => Suite::Vacuum,
                    SuiteArg::HzStructure => Suite::HzStructure,
                    SuiteArg::Mehler => Suite::Mehler,
                    SuiteArg::CurvatureTraces => Suite::CurvatureTraces,
                    SuiteArg::TraceProperty => Suite::TraceProperty,
                    SuiteArg::All => Suite::All,
                });
            }
        }
        Cmd::Trace { target, .. } | Cmd::Char { target, .. } | Cmd::Index { target, .. } => {
            merge_target(&mut cfg, target)?
        }
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let parsed = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { cli::EXIT_CONFIG } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let (text, code, out) = match resolve(&parsed) {
        Ok(cfg) => {
            let (t, c) = cli::run(&cfg);
            (t, c, cfg.output.clone())
        }
        Err(e) => {
            let (t, c) = cli::error_text(&e);
            (t, c, None)
        }
    };
    print!("{text}");
    if let Some(p) = out {
        if let Err(e) = std::fs::write(&p, &text) {
            eprintln!("cannot write {}: {e}", p.display());
            return ExitCode::from(cli::EXIT_CONFIG as u8);
        }
    }
    ExitCode::from(code as u8)
}
